//! The driver: rebase onto the generalized join and apply conservative
//! steps until the join has rank two.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result, Side};
use crate::graph::{from_generators, SubgroupGraph};
use crate::pullback::{fiber_product, join_graph};
use crate::verify::{audit_reduction, Certificate, DEFAULT_SEED};
use crate::words::{Alphabet, Substitution, Word};

use super::state::Configuration;
use super::step::{conservative_step, StepTrace};
use super::Epimorphism;

/// The two subgroups, as generator words over the ambient free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionInput {
    pub rank: u32,
    #[serde(rename = "H")]
    pub h: Vec<Word>,
    #[serde(rename = "K")]
    pub k: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Upper bound on conservative steps.
    pub max_steps: usize,
    /// Seed for the sampled injectivity checks.
    pub seed: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            max_steps: 64,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankSummary {
    pub h: usize,
    pub k: usize,
    pub h_image: usize,
    pub k_image: usize,
    /// Sorted reduced ranks of the intersection components.
    pub components: Vec<i64>,
    pub image_components: Vec<i64>,
}

/// Everything needed to re-check a reduction from scratch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionReport {
    pub input: ReductionInput,
    /// Rank of `L = ⟨H, K, S(H,K)⟩`.
    pub join_rank: u32,
    /// Free basis of `L` as ambient words; generator `i` of `epsilon`'s
    /// domain is `join_basis[i-1]`.
    pub join_basis: Vec<Word>,
    /// Double coset representatives `S(H,K)`, ambient words.
    pub coset_reps: Vec<Word>,
    pub epsilon: Epimorphism,
    pub h_images: Vec<Word>,
    pub k_images: Vec<Word>,
    pub rep_images: Vec<Word>,
    pub ranks: RankSummary,
    pub trace: Vec<StepTrace>,
    pub certificates: Vec<Certificate>,
}

impl ReductionReport {
    pub fn all_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
    }
}

/// `L` as a based graph and `H`, `K` rewritten over its basis.
struct Rebased {
    join: SubgroupGraph,
    alphabet: Alphabet,
    h: Vec<Word>,
    k: Vec<Word>,
}

fn rebase(alphabet: Alphabet, h: &[Word], k: &[Word], extra: &[Word]) -> Result<Rebased> {
    let join = join_graph(alphabet, h, k, extra)?;
    let local = Alphabet::new(join.rank() as u32)?;
    let rewrite = |ws: &[Word]| -> Result<Vec<Word>> {
        ws.iter()
            .map(|w| {
                join.rewrite(w).ok_or_else(|| {
                    Error::ConservativityViolation(format!("{w} does not lie in the join"))
                })
            })
            .collect()
    };
    Ok(Rebased {
        h: rewrite(h)?,
        k: rewrite(k)?,
        join,
        alphabet: local,
    })
}

/// Error unless `gens` has infinite index in the free group of the alphabet.
fn check_infinite_index(side: Side, s: &SubgroupGraph) -> Result<()> {
    if !s.is_complete() {
        return Ok(());
    }
    let index = s.graph().vertex_count() as usize;
    let join_rank = s.alphabet().active_rank() as usize;
    ensure!(
        s.rank() == (join_rank - 1) * index + 1,
        "covering of index {index} has rank {} in rank {join_rank}",
        s.rank()
    );
    Err(Error::FiniteIndexSubgroup {
        side,
        index,
        join_rank,
        rank: s.rank(),
    })
}

fn parse_input(input: &ReductionInput) -> Result<Alphabet> {
    let alphabet = Alphabet::new(input.rank)?;
    for w in input.h.iter().chain(&input.k) {
        alphabet.check_word(w)?;
    }
    Ok(alphabet)
}

pub fn reduce_join_to_rank2(alphabet: Alphabet, h: &[Word], k: &[Word]) -> Result<ReductionReport> {
    reduce_with(
        &ReductionInput {
            rank: alphabet.rank(),
            h: h.to_vec(),
            k: k.to_vec(),
        },
        ReduceOptions::default(),
    )
}

pub fn reduce_with(input: &ReductionInput, opts: ReduceOptions) -> Result<ReductionReport> {
    let alphabet = parse_input(input)?;
    let hx = from_generators(alphabet, &input.h)?;
    let ky = from_generators(alphabet, &input.k)?;
    let ambient_reps = fiber_product(&hx, &ky).reps();
    let base = rebase(alphabet, &input.h, &input.k, &ambient_reps)?;
    let m = base.alphabet.rank();

    let x = from_generators(base.alphabet, &base.h)?;
    let y = from_generators(base.alphabet, &base.k)?;
    check_infinite_index(Side::H, &x)?;
    check_infinite_index(Side::K, &y)?;

    let mut cfg = Configuration::new(x, y);
    let start = cfg.clone();
    let join_basis = base.join.basis();
    let ambient = Substitution::new(join_basis.clone());
    let coset_reps = cfg
        .w
        .iter()
        .map(|c| ambient.apply(&c.rep))
        .collect::<Result<Vec<_>>>()?;

    let mut epsilon = Epimorphism::identity(m);
    let mut trace = Vec::new();
    while cfg.rank() > 2 {
        if trace.len() == opts.max_steps {
            return Err(Error::BudgetExceeded(format!(
                "{} conservative steps without reaching rank 2",
                opts.max_steps
            )));
        }
        let out = conservative_step(&cfg)?;
        for s in out.steps {
            epsilon.push(s)?;
        }
        cfg = out.config;
        trace.push(out.trace);
    }

    let apply_all = |ws: &[Word]| ws.iter().map(|w| epsilon.apply(w)).collect::<Result<Vec<_>>>();
    let h_images = apply_all(&base.h)?;
    let k_images = apply_all(&base.k)?;
    let local_reps: Vec<Word> = start.w.iter().map(|c| c.rep.clone()).collect();
    let rep_images = apply_all(&local_reps)?;
    ensure!(
        cfg.x.generates_same(&h_images) && cfg.y.generates_same(&k_images),
        "carried graphs differ from the images of the generators"
    );
    for (c, r) in cfg.w.iter().zip(&rep_images) {
        ensure!(&c.rep == r, "carried representative {} differs from its image {r}", c.rep);
    }

    let before = start.invariants();
    let after = cfg.invariants();
    let mut report = ReductionReport {
        input: input.clone(),
        join_rank: m,
        join_basis,
        coset_reps,
        epsilon,
        h_images,
        k_images,
        rep_images,
        ranks: RankSummary {
            h: start.x.rank(),
            k: start.y.rank(),
            h_image: cfg.x.rank(),
            k_image: cfg.y.rank(),
            components: before.components,
            image_components: after.components,
        },
        trace,
        certificates: Vec::new(),
    };
    report.certificates = audit_reduction(&report, input, opts.seed);
    Ok(report)
}

/// The restriction of a reduction to `⟨H, K⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlainJoinReport {
    pub reduction: ReductionReport,
    /// Rank of `⟨H, K⟩`.
    pub join_rank: u32,
    /// Whether the images of `H` and `K` generate the whole codomain.
    pub onto: bool,
    /// Whether `H ∩ K` maps onto `ε(H) ∩ ε(K)`; `None` when `H ∩ K = 1`.
    pub intersection_surjective: Option<bool>,
}

/// For `H`, `K` of infinite index in `⟨H, K⟩`: an epimorphism of the
/// generalized join onto `F_2` restricted to `⟨H, K⟩`.
pub fn restrict_to_plain_join(input: &ReductionInput, opts: ReduceOptions) -> Result<PlainJoinReport> {
    let alphabet = parse_input(input)?;
    let base = rebase(alphabet, &input.h, &input.k, &[])?;
    check_infinite_index(Side::H, &from_generators(base.alphabet, &base.h)?)?;
    check_infinite_index(Side::K, &from_generators(base.alphabet, &base.k)?)?;
    let reduction = reduce_with(input, opts)?;
    let target = Alphabet::new(reduction.epsilon.codomain_rank)?;
    let images: Vec<Word> = reduction
        .h_images
        .iter()
        .chain(&reduction.k_images)
        .cloned()
        .collect();
    let generated = from_generators(target, &images)?;
    let onto = generated.is_complete() && generated.graph().vertex_count() == 1;

    let intersection_surjective = match crate::graph::intersect_generated(alphabet, &input.h, &input.k)? {
        None => None,
        Some(i) => {
            let full = rebase(alphabet, &input.h, &input.k, &reduction.coset_reps)?;
            let mapped = i
                .basis()
                .iter()
                .map(|w| {
                    let local = full.join.rewrite(w).ok_or_else(|| {
                        Error::ConservativityViolation("intersection escapes the join".into())
                    })?;
                    reduction.epsilon.apply(&local)
                })
                .collect::<Result<Vec<_>>>()?;
            let image_meet =
                crate::graph::intersect_generated(target, &reduction.h_images, &reduction.k_images)?;
            Some(match image_meet {
                Some(meet) => meet.generates_same(&mapped),
                None => false,
            })
        }
    };
    Ok(PlainJoinReport {
        join_rank: base.alphabet.rank(),
        reduction,
        onto,
        intersection_surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(n: u32, h: &[&str], k: &[&str]) -> ReductionInput {
        let parse = |v: &[&str]| v.iter().map(|s| s.parse().unwrap()).collect::<Vec<Word>>();
        ReductionInput {
            rank: n,
            h: parse(h),
            k: parse(k),
        }
    }

    #[test]
    fn rank_two_join_is_identity() {
        let r = reduce_with(&input(2, &["a"], &["b"]), ReduceOptions::default()).unwrap();
        assert_eq!(r.join_rank, 2);
        assert!(r.epsilon.steps.is_empty());
        assert!(r.all_hold(), "{:#?}", r.certificates);
    }

    #[test]
    fn squares_and_cubes_reduce() {
        let r = reduce_with(&input(3, &["aa", "b"], &["aaa", "c"]), ReduceOptions::default()).unwrap();
        assert_eq!(r.epsilon.codomain_rank, 2);
        assert_eq!(r.ranks.h_image, 2);
        assert_eq!(r.ranks.k_image, 2);
        assert_eq!(r.ranks.image_components, vec![0]);
        assert!(r.all_hold(), "{:#?}", r.certificates);
    }

    #[test]
    fn join_smaller_than_ambient() {
        // L = ⟨ab, ba, bb⟩-type joins live in a proper subgroup of F_3
        let r = reduce_with(&input(3, &["ab", "cc"], &["ba", "cac"]), ReduceOptions::default()).unwrap();
        assert!(r.join_rank >= 2);
        assert!(r.all_hold(), "{:#?}", r.certificates);
    }

    #[test]
    fn finite_index_detected() {
        let e = reduce_with(&input(3, &["aa", "b", "c", "abA", "acA"], &["a"]), ReduceOptions::default())
            .unwrap_err();
        assert_eq!(
            e,
            Error::FiniteIndexSubgroup {
                side: Side::H,
                index: 2,
                join_rank: 3,
                rank: 5
            }
        );
    }

    #[test]
    fn plain_join_restriction() {
        let c = restrict_to_plain_join(&input(3, &["aa", "b"], &["aaa", "c"]), ReduceOptions::default()).unwrap();
        assert_eq!(c.join_rank, 3);
        assert_eq!(c.intersection_surjective, Some(true));
    }
}
