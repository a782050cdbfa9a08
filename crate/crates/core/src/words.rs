//! Free-group word arithmetic over a finite symmetric alphabet.
//!
//! A [`Letter`] is a generator index together with a sign. Letters are
//! ordered `a1 < a1^-1 < a2 < a2^-1 < ...`, which is the order used
//! wherever an algorithm has to pick the least admissible letter.
//!
//! Text syntax: `a`..`z` are generators 1..26 and the uppercase letter is
//! the inverse. Whitespace is ignored and the empty string is the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator `a_i` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    /// `index` is 1-based.
    pub fn new(index: u32, inverse: bool) -> Letter {
        assert!(index >= 1, "generator indices start at 1");
        Letter(2 * (index - 1) + inverse as u32)
    }

    pub fn gen(index: u32) -> Letter {
        Letter::new(index, false)
    }

    /// Dense code `2 * (index - 1) + inverse`, used to index transition tables.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Letter {
        Letter(code as u32)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0 / 2 + 1
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// The positive letter with the same generator.
    pub fn positive(self) -> Letter {
        Letter(self.0 & !1)
    }

    pub fn to_char(self) -> Option<char> {
        let i = self.index();
        if i > 26 {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + (i - 1) as u8) as char)
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new(c as u32 - 'a' as u32 + 1, false)),
            'A'..='Z' => Some(Letter::new(c as u32 - 'A' as u32 + 1, true)),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "a{}^-1", self.index()),
            None => write!(f, "a{}", self.index()),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_char() {
            Some(c) => s.serialize_char(c),
            None => Err(serde::ser::Error::custom("letter has no text form")),
        }
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Letter, D::Error> {
        let text = String::deserialize(d)?;
        let mut chars = text.chars();
        match (chars.next().and_then(Letter::from_char), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(serde::de::Error::custom(format!("bad letter {text:?}"))),
        }
    }
}

/// The symmetric alphabet `{a_1^{±1}, ..., a_n^{±1}}`, optionally with one
/// generator pair removed (the alphabet `A_f = A \ {f, f^-1}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    rank: u32,
    removed: Option<u32>,
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Alphabet> {
        if rank == 0 {
            return Err(Error::Parse("alphabet rank must be at least 1".into()));
        }
        Ok(Alphabet {
            rank,
            removed: None,
        })
    }

    /// Number of generator slots, including a removed one.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of letters `|A|`.
    pub fn size(&self) -> usize {
        2 * self.active_rank() as usize
    }

    pub fn active_rank(&self) -> u32 {
        self.rank - self.removed.is_some() as u32
    }

    pub fn removed(&self) -> Option<u32> {
        self.removed
    }

    /// Number of slots in a transition table over this alphabet.
    pub fn codes(&self) -> usize {
        2 * self.rank as usize
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() <= self.rank && Some(letter.index()) != self.removed
    }

    /// Letters in ascending order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.codes())
            .map(Letter::from_code)
            .filter(move |l| self.contains(*l))
    }

    /// `A_f`: the alphabet without `f` and `f^-1`.
    pub fn without(&self, f: Letter) -> Alphabet {
        assert!(self.removed.is_none(), "only one generator pair can be removed");
        assert!(self.contains(f));
        Alphabet {
            rank: self.rank,
            removed: Some(f.index()),
        }
    }

    /// The full alphabet with the same slot count.
    pub fn restored(&self) -> Alphabet {
        Alphabet {
            rank: self.rank,
            removed: None,
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|l| !self.contains(**l)) {
            Some(&letter) => Err(Error::LetterOutOfAlphabet {
                letter,
                rank: self.rank,
            }),
            None => Ok(()),
        }
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

/// True if no two adjacent letters cancel.
pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

/// Stack-based free reduction.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Wraps letters that are already reduced; panics otherwise.
    pub fn from_reduced(letters: Vec<Letter>) -> Word {
        assert!(is_reduced(&letters), "word is not freely reduced");
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self * middle * self^-1`.
    pub fn conjugate(&self, middle: &Word) -> Word {
        free_reduce(
            self.0
                .iter()
                .copied()
                .chain(middle.0.iter().copied())
                .chain(self.0.iter().rev().map(|l| l.inverse())),
        )
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        free_reduce(std::iter::repeat(base.0).take(k.unsigned_abs() as usize).flatten())
    }

    /// Maximum generator index occurring in the word (0 for the identity).
    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Word> {
        let mut raw = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            match Letter::from_char(c) {
                Some(l) => raw.push(l),
                None => return Err(Error::Parse(format!("invalid letter {c:?} in word {text:?}"))),
            }
        }
        Ok(free_reduce(raw))
    }

    /// Parses and rejects input that is not already freely reduced.
    pub fn parse_reduced(text: &str) -> Result<Word> {
        let w = Word::parse(text)?;
        let raw = text.chars().filter(|c| !c.is_whitespace()).count();
        if raw != w.len() {
            return Err(Error::Parse(format!("word {text:?} is not freely reduced")));
        }
        Ok(w)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("1")
        } else {
            write!(f, "{self}")
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.max_index() > 26 {
            return Err(serde::ser::Error::custom(
                "words over more than 26 generators have no text form",
            ));
        }
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse_reduced(&text).map_err(serde::de::Error::custom)
    }
}

/// A homomorphism given by the image of every generator.
///
/// `images[i]` is the image of generator `i + 1`; an inverse letter maps
/// to the inverted image.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution {
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(images: Vec<Word>) -> Substitution {
        Substitution { images }
    }

    pub fn identity(rank: u32) -> Substitution {
        Substitution {
            images: (1..=rank).map(|i| Word::letter(Letter::gen(i))).collect(),
        }
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, index: u32) -> Option<&Word> {
        self.images.get(index as usize - 1)
    }

    pub fn domain_rank(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply_letter(&self, l: Letter) -> Result<Word> {
        let img = self.image(l.index()).ok_or(Error::UnknownLetter(l))?;
        Ok(if l.is_inverse() { img.invert() } else { img.clone() })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut raw = Vec::new();
        for &l in w.letters() {
            let img = self.image(l.index()).ok_or(Error::UnknownLetter(l))?;
            if l.is_inverse() {
                raw.extend(img.letters().iter().rev().map(|x| x.inverse()));
            } else {
                raw.extend_from_slice(img.letters());
            }
        }
        Ok(free_reduce(raw))
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Substitution) -> Result<Substitution> {
        let images = self
            .images
            .iter()
            .map(|w| other.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution { images })
    }
}

/// Applies a homomorphism letter by letter and freely reduces.
pub fn substitute(w: &Word, images: &Substitution) -> Result<Word> {
    images.apply(w)
}

/// Enumerates every reduced word of length exactly `len` over `alphabet`,
/// in lexicographic order of letter codes.
pub fn reduced_words_of_length(alphabet: &Alphabet, len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in &letters {
                if (w as &Vec<Letter>).last() != Some(&l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(Word).collect()
}

/// Number of reduced words of length exactly `len` over an alphabet of
/// `size` letters.
pub fn count_reduced_words(size: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    size as u128 * (size as u128 - 1).pow(len as u32 - 1)
}
