//! `f`-treatments and the elimination loop that empties every complete
//! part.
//!
//! An `f`-treatment applies `f ↦ w1 f w2^-1`, where `w1`, `w2` come from a
//! two-family forest attachment on the incomplete part of `B_f`, with
//! `B = X ⊔ Y`. Afterwards no vertex outside the complete part of `B_f`
//! carries both an `f` and an `f^-1` edge.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::graph::LabeledGraph;
use crate::words::{Letter, Word};

use super::forest::attach_bf2;
use super::state::Configuration;
use super::Step;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreatmentRecord {
    pub letter: Letter,
    pub w1: Word,
    pub w2: Word,
    /// `|V(B_f^com)|` before the treatment.
    pub complete_before: usize,
    /// `|V(B[f]_f^com)|` after it; always equal to `complete_before`.
    pub complete_after: usize,
}

/// Result of [`f_treatment`].
#[derive(Clone, Debug)]
pub struct Treatment {
    pub step: Step,
    pub config: Configuration,
    pub record: TreatmentRecord,
}

/// Vertices lying in complete components of `B` minus its `f`-edges.
fn complete_without(b: &LabeledGraph, f: Letter) -> Vec<u32> {
    b.delete_letter(f).graph.complete_vertices()
}

pub fn f_treatment(cfg: &Configuration, f: Letter) -> Result<Treatment> {
    let alphabet = cfg.alphabet();
    if !alphabet.contains(f) {
        return Err(Error::LetterOutOfAlphabet {
            letter: f,
            rank: alphabet.rank(),
        });
    }
    let b = cfg.union();
    let del = b.delete_letter(f);
    let (com, inc) = del.graph.complete_components();
    let mut local = vec![None; b.vertex_count() as usize];
    for (i, &v) in inc.vertices.iter().enumerate() {
        local[v as usize] = Some(i as u32);
    }
    let v1: Vec<u32> = del.sources.iter().filter_map(|&v| local[v as usize]).collect();
    let v2: Vec<u32> = del.targets.iter().filter_map(|&v| local[v as usize]).collect();
    let pair = attach_bf2(&inc.graph, &v1, &v2)?;
    let step = Step::Automorphism {
        letter: f,
        left: pair.w1.clone(),
        right: pair.w2.clone(),
    };
    let config = cfg.apply(&step)?;

    let after = config.union();
    let own = complete_without(&after, f);
    ensure!(
        own.len() == com.vertices.len(),
        "treatment by {f} changed the complete part from {} to {} vertices",
        com.vertices.len(),
        own.len()
    );
    for c in alphabet.letters().filter(|c| !c.is_inverse() && c.index() != f.index()) {
        let other = complete_without(&after, c);
        ensure!(
            other.iter().all(|v| own.binary_search(v).is_ok()),
            "complete part without {c} is not inside the one without {f}"
        );
        ensure!(
            own.is_empty() || other.len() < own.len(),
            "complete part without {c} is not smaller than the one without {f}"
        );
    }
    Ok(Treatment {
        step,
        config,
        record: TreatmentRecord {
            letter: f,
            w1: pair.w1,
            w2: pair.w2,
            complete_before: com.vertices.len(),
            complete_after: own.len(),
        },
    })
}

/// Result of [`ref_sequence`]: the treatments `f_1, ..., f_{l+1}` and the
/// boundary letters around the last letter's edges.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub steps: Vec<Step>,
    pub records: Vec<TreatmentRecord>,
    pub config: Configuration,
    /// `f_{l+1}`.
    pub letter: Letter,
    /// Label of the edge entering each `f_{l+1}`-edge.
    pub d1: Letter,
    /// Label of the edge leaving each `f_{l+1}`-edge.
    pub d2: Letter,
}

/// Treats with the least admissible letter until `B_f` has no complete
/// component for the next letter `f`, then treats once more with that `f`.
pub fn ref_sequence(cfg: &Configuration) -> Result<Elimination> {
    let alphabet = cfg.alphabet();
    let size = alphabet.size();
    if size < 6 {
        return Err(Error::AlphabetTooSmall { size, required: 6 });
    }
    if cfg.x.is_complete() || cfg.y.is_complete() {
        return Err(Error::CompleteComponent);
    }
    let bound = cfg.union().vertex_count() as usize + 1;
    let mut cur = cfg.clone();
    let mut steps = Vec::new();
    let mut records: Vec<TreatmentRecord> = Vec::new();
    let mut prev: Option<u32> = None;
    loop {
        let f = alphabet
            .letters()
            .find(|l| Some(l.index()) != prev)
            .expect("alphabet has two generators");
        let remaining = complete_without(&cur.union(), f).len();
        if let Some(last) = records.last() {
            ensure!(
                remaining < last.complete_before,
                "complete part did not shrink: {remaining} after {}",
                last.complete_before
            );
        }
        let t = f_treatment(&cur, f)?;
        cur = t.config;
        steps.push(t.step);
        records.push(t.record);
        if remaining == 0 {
            break;
        }
        if records.len() > bound {
            return Err(Error::NonTermination(bound));
        }
        prev = Some(f.index());
    }

    let b = cur.union();
    for c in alphabet.letters().filter(|c| !c.is_inverse()) {
        ensure!(
            complete_without(&b, c).is_empty(),
            "a complete part without {c} survived the elimination"
        );
    }
    let last = records.last().unwrap();
    let f = last.letter;
    let (d1, d2) = boundary_letters(&b, f)?.unwrap_or((
        last.w1.last().expect("padded words are nonempty"),
        last.w2.last().expect("padded words are nonempty").inverse(),
    ));
    Ok(Elimination {
        steps,
        records,
        config: cur,
        letter: f,
        d1,
        d2,
    })
}

/// For every edge reading `f` (from `u` to `v`), checks that `u` and `v` have
/// degree two and returns the common labels `(d1, d2)` of the reduced path
/// `h1 e h2` through it; `None` when there are no such edges.
fn boundary_letters(b: &LabeledGraph, f: Letter) -> Result<Option<(Letter, Letter)>> {
    let t = b
        .transitions()
        .ok_or_else(|| Error::ConservativityViolation("treated graph is not folded".into()))?;
    let del = b.delete_letter(f);
    let mut found: Option<(Letter, Letter)> = None;
    for &(u, v) in &del.removed {
        ensure!(
            t.degree(u) == 2 && t.degree(v) == 2,
            "an {f}-edge has an endpoint of degree other than two"
        );
        let into = t.out_letters(u).find(|(l, _)| *l != f).unwrap().0.inverse();
        let out = t.out_letters(v).find(|(l, _)| *l != f.inverse()).unwrap().0;
        match found {
            None => found = Some((into, out)),
            Some(p) => ensure!(
                p == (into, out),
                "boundary letters around {f}-edges differ: {p:?} and {:?}",
                (into, out)
            ),
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_generators;
    use crate::words::Alphabet;

    fn cfg(n: u32, h: &[&str], k: &[&str]) -> Configuration {
        let parse = |v: &[&str]| v.iter().map(|s| s.parse().unwrap()).collect::<Vec<Word>>();
        let a = Alphabet::new(n).unwrap();
        Configuration::new(
            from_generators(a, &parse(h)).unwrap(),
            from_generators(a, &parse(k)).unwrap(),
        )
    }

    #[test]
    fn treatment_without_f_edges_keeps_graphs() {
        let c = cfg(3, &["bc"], &["cb"]);
        let t = f_treatment(&c, Letter::gen(1)).unwrap();
        assert_eq!(t.config.x, c.x);
        assert_eq!(t.config.y, c.y);
        assert!(matches!(t.step, Step::Automorphism { .. }));
    }

    #[test]
    fn treatment_preserves_invariants() {
        let c = cfg(3, &["aab", "bAcb"], &["ac", "bbA"]);
        let t = f_treatment(&c, Letter::gen(1)).unwrap();
        assert_eq!(t.config.invariants(), c.invariants());
        assert_eq!(t.record.complete_before, t.record.complete_after);
    }

    #[test]
    fn already_clean_needs_one_treatment() {
        let c = cfg(3, &["ab"], &["c"]);
        let e = ref_sequence(&c).unwrap();
        assert_eq!(e.steps.len(), 1);
        assert_eq!(e.config.invariants(), c.invariants());
    }

    #[test]
    fn complete_part_is_eliminated() {
        // X contains a complete b,c-part (the bouquet on b, c at the
        // basepoint) hanging off an a-edge
        let c = cfg(3, &["b", "c", "aaba"], &["a"]);
        let e = ref_sequence(&c).unwrap();
        assert!(e.records.len() >= 2);
        let sizes: Vec<usize> = e.records.iter().map(|r| r.complete_before).collect();
        assert!(sizes.windows(2).all(|p| p[1] < p[0]), "{sizes:?}");
        assert_eq!(*sizes.last().unwrap(), 0);
    }

    #[test]
    fn small_alphabet_rejected() {
        let c = cfg(2, &["a"], &["b"]);
        assert!(matches!(ref_sequence(&c), Err(Error::AlphabetTooSmall { .. })));
    }
}
