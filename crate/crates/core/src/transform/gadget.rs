//! The four-syllable gadget word whose long `c`-runs can only be read in
//! one place.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::words::{is_reduced, Alphabet, Letter, Word};

/// `z = b1 w b2 c^{n+1} b2 · b1 w b2 c^{n+2} b2 · b1 w b2 c^{n+3} b2 · b1 w b2 c^{n+4} b2`
/// with `n = |w| + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub b1: Letter,
    pub b2: Letter,
    pub c: Letter,
    pub word: Word,
}

impl Gadget {
    /// The marker `b2 c^{n+i} b2` closing syllable `i` (1-based).
    pub fn marker(&self, w_len: usize, i: usize) -> Vec<Letter> {
        let mut m = vec![self.b2];
        m.extend(std::iter::repeat(self.c).take(w_len + 1 + i));
        m.push(self.b2);
        m
    }
}

/// Builds the gadget for `w` between boundary letters `d1` and `d2`.
///
/// `b1`, `b2` form the least pair (in letter order) making
/// `d1 (b1 w b2)^2 d2` reduced, and `c` is the least letter other than
/// `b2^{±1}`.
pub fn build_z4(w: &Word, d1: Letter, d2: Letter, alphabet: &Alphabet) -> Result<Gadget> {
    let size = alphabet.size();
    if size < 4 {
        return Err(Error::AlphabetTooSmall { size, required: 4 });
    }
    if w.is_empty() {
        return Err(Error::EmptyWord(w.clone()));
    }
    alphabet.check_word(w)?;
    for d in [d1, d2] {
        if !alphabet.contains(d) {
            return Err(Error::LetterOutOfAlphabet {
                letter: d,
                rank: alphabet.rank(),
            });
        }
    }
    let letters: Vec<Letter> = alphabet.letters().collect();
    let (b1, b2) = letters
        .iter()
        .flat_map(|&x| letters.iter().map(move |&y| (x, y)))
        .find(|&(x, y)| {
            let mut probe = vec![d1];
            for _ in 0..2 {
                probe.push(x);
                probe.extend_from_slice(w.letters());
                probe.push(y);
            }
            probe.push(d2);
            is_reduced(&probe)
        })
        .expect("four letters always leave an admissible pair");
    let c = *letters
        .iter()
        .find(|&&l| l != b2 && l != b2.inverse())
        .expect("alphabet has another generator");
    let n = w.len() + 1;
    let mut z = Vec::with_capacity(8 * w.len() + 26);
    for i in 1..=4 {
        z.push(b1);
        z.extend_from_slice(w.letters());
        z.push(b2);
        z.extend(std::iter::repeat(c).take(n + i));
        z.push(b2);
    }
    let gadget = Gadget {
        b1,
        b2,
        c,
        word: Word::from_reduced(z),
    };
    ensure!(
        gadget.word.len() == 8 * w.len() + 26,
        "gadget length {} for |w| = {}",
        gadget.word.len(),
        w.len()
    );
    let mut bounded = vec![d1];
    bounded.extend_from_slice(gadget.word.letters());
    bounded.push(d2);
    ensure!(is_reduced(&bounded), "d1 z d2 is not reduced");
    let stray = nonstandard_markers(&gadget, w.len());
    ensure!(stray.is_empty(), "gadget markers found off their syllables at {stray:?}");
    Ok(gadget)
}

/// Start offsets of every occurrence of a marker or its inverse other than
/// the one closing its own syllable.
pub fn nonstandard_markers(g: &Gadget, w_len: usize) -> Vec<usize> {
    let z = g.word.letters();
    let mut out = Vec::new();
    for i in 1..=4 {
        let m = g.marker(w_len, i);
        let inv: Vec<Letter> = m.iter().rev().map(|l| l.inverse()).collect();
        let expected = syllable_end(w_len, i) - m.len();
        for (p, win) in z.windows(m.len()).enumerate() {
            if win == m.as_slice() && p != expected {
                out.push(p);
            }
            if win == inv.as_slice() {
                out.push(p);
            }
        }
    }
    out
}

/// Offset just past syllable `i` (1-based); syllable `j` has length
/// `2|w| + 4 + j`.
fn syllable_end(w_len: usize, i: usize) -> usize {
    (1..=i).map(|j| 2 * w_len + 4 + j).sum()
}
