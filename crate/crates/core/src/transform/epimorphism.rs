use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{free_reduce, Letter, Substitution, Word};

/// One elementary substitution of a reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Step {
    /// `letter ↦ left · letter · right^-1`, identity elsewhere. `left` and
    /// `right` avoid the generator of `letter`.
    Automorphism {
        letter: Letter,
        left: Word,
        right: Word,
    },
    /// `a_generator ↦ image`, identity elsewhere, followed by renumbering
    /// the generators above `generator` down by one. `image` avoids
    /// `a_generator` and is written in the old numbering.
    RankDrop { generator: u32, image: Word },
}

impl Step {
    /// Rank of the codomain given the rank of the domain.
    pub fn codomain_rank(&self, domain: u32) -> u32 {
        match self {
            Step::Automorphism { .. } => domain,
            Step::RankDrop { .. } => domain - 1,
        }
    }

    /// The step as a substitution on a free group of rank `domain`.
    pub fn substitution(&self, domain: u32) -> Result<Substitution> {
        match self {
            Step::Automorphism {
                letter,
                left,
                right,
            } => {
                let k = letter.index();
                check_avoids(left, k, domain)?;
                check_avoids(right, k, domain)?;
                let (l, r) = if letter.is_inverse() {
                    (right, left)
                } else {
                    (left, right)
                };
                let mut images: Vec<Word> = Substitution::identity(domain).images().to_vec();
                images[k as usize - 1] = l
                    .concat(&Word::letter(letter.positive()))
                    .concat(&r.invert());
                Ok(Substitution::new(images))
            }
            Step::RankDrop { generator, image } => {
                let k = *generator;
                check_avoids(image, k, domain)?;
                let renumber = |w: &Word| {
                    free_reduce(w.letters().iter().map(|&l| {
                        if l.index() > k {
                            Letter::new(l.index() - 1, l.is_inverse())
                        } else {
                            l
                        }
                    }))
                };
                let images = (1..=domain)
                    .map(|i| {
                        if i == k {
                            renumber(image)
                        } else {
                            renumber(&Word::letter(Letter::gen(i)))
                        }
                    })
                    .collect();
                Ok(Substitution::new(images))
            }
        }
    }
}

fn check_avoids(w: &Word, k: u32, rank: u32) -> Result<()> {
    if k == 0 || k > rank {
        return Err(Error::IndexOutOfRange {
            index: k as usize,
            len: rank as usize,
        });
    }
    match w
        .letters()
        .iter()
        .find(|l| l.index() == k || l.index() > rank)
    {
        Some(&letter) => Err(Error::LetterOutOfAlphabet { letter, rank }),
        None => Ok(()),
    }
}

/// A composite of elementary steps with its flattened image map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Epimorphism {
    pub domain_rank: u32,
    pub codomain_rank: u32,
    pub steps: Vec<Step>,
    /// Image of each domain generator in the codomain basis.
    pub images: Substitution,
}

impl Epimorphism {
    pub fn identity(rank: u32) -> Epimorphism {
        Epimorphism {
            domain_rank: rank,
            codomain_rank: rank,
            steps: Vec::new(),
            images: Substitution::identity(rank),
        }
    }

    /// Appends `step` (applied after everything so far).
    pub fn push(&mut self, step: Step) -> Result<()> {
        let sub = step.substitution(self.codomain_rank)?;
        self.images = self.images.then(&sub)?;
        self.codomain_rank = step.codomain_rank(self.codomain_rank);
        self.steps.push(step);
        Ok(())
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.images.apply(w)
    }

    /// Recomposes the steps from scratch.
    pub fn recompose(&self) -> Result<Substitution> {
        let mut images = Substitution::identity(self.domain_rank);
        let mut rank = self.domain_rank;
        for step in &self.steps {
            images = images.then(&step.substitution(rank)?)?;
            rank = step.codomain_rank(rank);
        }
        Ok(images)
    }

    /// Whether the flat image map and codomain rank match the steps.
    pub fn is_consistent(&self) -> bool {
        let rank = self
            .steps
            .iter()
            .fold(self.domain_rank, |r, s| s.codomain_rank(r));
        rank == self.codomain_rank
            && self.images.domain_rank() == self.domain_rank
            && self.recompose().map_or(false, |s| s == self.images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn automorphism_images() {
        let s = Step::Automorphism {
            letter: Letter::gen(1),
            left: w("b"),
            right: w("c"),
        };
        assert_eq!(s.substitution(3).unwrap().images(), &[w("baC"), w("b"), w("c")]);
        let s = Step::Automorphism {
            letter: Letter::new(1, true),
            left: w("b"),
            right: w("c"),
        };
        // a^-1 ↦ b a^-1 c^-1, so a ↦ c a b^-1
        let sub = s.substitution(3).unwrap();
        assert_eq!(sub.images()[0], w("caB"));
        assert_eq!(sub.apply(&w("A")).unwrap(), w("bAC"));
    }

    #[test]
    fn automorphism_must_avoid_its_letter() {
        let s = Step::Automorphism {
            letter: Letter::gen(1),
            left: w("a"),
            right: w(""),
        };
        assert!(s.substitution(2).is_err());
    }

    #[test]
    fn rank_drop_renumbers() {
        let s = Step::RankDrop {
            generator: 2,
            image: w("acc"),
        };
        let sub = s.substitution(3).unwrap();
        assert_eq!(sub.images(), &[w("a"), w("abb"), w("b")]);
        assert_eq!(s.codomain_rank(3), 2);
    }

    #[test]
    fn composition_matches_recompose() {
        let mut e = Epimorphism::identity(3);
        e.push(Step::Automorphism {
            letter: Letter::gen(2),
            left: w("a"),
            right: w("cc"),
        })
        .unwrap();
        e.push(Step::RankDrop {
            generator: 1,
            image: w("bcB"),
        })
        .unwrap();
        assert_eq!(e.codomain_rank, 2);
        assert!(e.is_consistent());
        // b ↦ a b C C ↦ (bcB... renumbered) ...; check homomorphism on a word
        let x = w("abAc");
        let direct = e.apply(&x).unwrap();
        let mut stepwise = x.clone();
        let mut rank = 3;
        for s in &e.steps {
            stepwise = s.substitution(rank).unwrap().apply(&stepwise).unwrap();
            rank = s.codomain_rank(rank);
        }
        assert_eq!(direct, stepwise);
        let mut bad = e.clone();
        bad.images = Substitution::new(vec![w("a"), w("b"), w("a")]);
        assert!(!bad.is_consistent());
    }

    #[test]
    fn json_round_trip() {
        let mut e = Epimorphism::identity(3);
        e.push(Step::RankDrop {
            generator: 3,
            image: w("abAB"),
        })
        .unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: Epimorphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }
}
