//! Rank-dropping substitutions and the conservative step built from them.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result, Side};
use crate::graph::canonical_form;
use crate::pullback::{fiber_product, union_of};
use crate::words::{Letter, Word};

use super::forest::attach_bf;
use super::gadget::{build_z4, Gadget};
use super::state::Configuration;
use super::treatment::{ref_sequence, TreatmentRecord};
use super::Step;

/// Substitutes `p` for `f` in every graph, folds, cores, and renumbers the
/// generators above `f` down by one. `p` must avoid `f^{±1}`.
pub fn fp_transformation(cfg: &Configuration, f: Letter, p: &Word) -> Result<(Configuration, Step)> {
    if !cfg.alphabet().contains(f) || !cfg.z.used_generators().contains(&f.index()) {
        return Err(Error::LetterAbsentFromZ(f));
    }
    let image = if f.is_inverse() { p.invert() } else { p.clone() };
    let step = Step::RankDrop {
        generator: f.index(),
        image,
    };
    let next = cfg.apply(&step)?;
    ensure!(
        next.z.reduced_rank() == cfg.z.reduced_rank() - 1,
        "reduced rank of Z went from {} to {}",
        cfg.z.reduced_rank(),
        next.z.reduced_rank()
    );
    Ok((next, step))
}

/// Everything one conservative step did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub rank_before: u32,
    pub treatments: Vec<TreatmentRecord>,
    /// The letter that is dropped.
    pub letter: Letter,
    pub d1: Letter,
    pub d2: Letter,
    /// Word from the forest attachment on `B_f`.
    pub w: Word,
    pub gadget: Gadget,
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    /// The treatments followed by the rank drop.
    pub steps: Vec<Step>,
    pub config: Configuration,
    pub trace: StepTrace,
}

/// One step lowering the rank of `Z` by one while keeping `r̄(X)`, `r̄(Y)`,
/// every `r̄(W_s)` and the pullback core.
pub fn conservative_step(cfg: &Configuration) -> Result<StepOutcome> {
    let zr = cfg.z.reduced_rank();
    if zr < 2 {
        return Err(Error::RankTooSmall(zr));
    }
    for (side, s) in [(Side::H, &cfg.x), (Side::K, &cfg.y)] {
        if s.is_complete() {
            return Err(Error::FiniteIndexSubgroup {
                side,
                index: s.graph().vertex_count() as usize,
                join_rank: cfg.rank() as usize,
                rank: s.rank(),
            });
        }
    }
    let before = cfg.invariants();
    let elim = ref_sequence(cfg)?;
    let f = elim.letter;
    let b = elim.config.union().delete_letter(f).graph;
    let all: Vec<u32> = (0..b.vertex_count()).collect();
    let att = attach_bf(&b, &all)?;
    let gadget = build_z4(&att.word, elim.d1, elim.d2, b.alphabet())?;
    let (config, drop) = fp_transformation(&elim.config, f, &gadget.word)?;

    let after = config.invariants();
    ensure!(
        after == before,
        "step changed the invariants from {before:?} to {after:?}"
    );
    let pulled = fiber_product(&config.x, &config.y);
    let carried: Vec<_> = config.w.iter().map(|c| c.subgroup.clone()).collect();
    ensure!(
        canonical_form(pulled.core()) == canonical_form(&union_of(config.alphabet(), &carried)),
        "pullback core differs from the carried components"
    );
    ensure!(
        !config.x.is_complete() && !config.y.is_complete(),
        "an image became complete"
    );

    let mut steps = elim.steps;
    steps.push(drop);
    Ok(StepOutcome {
        steps,
        config,
        trace: StepTrace {
            rank_before: cfg.rank(),
            treatments: elim.records,
            letter: f,
            d1: elim.d1,
            d2: elim.d2,
            w: att.word,
            gadget,
        },
    })
}
