//! The graphs a reduction acts on and the surgery that applies one
//! elementary substitution to all of them.

use crate::error::{ensure, Error, Result};
use crate::graph::{bouquet, canonical_form, LabeledGraph, SubgroupGraph};
use crate::pullback::{fiber_product, PullbackDecomposition};
use crate::words::{Alphabet, Letter, Substitution, Word};

use super::Step;

/// One intersection component `H ∩ sKs^-1` with its representative `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub subgroup: SubgroupGraph,
    pub rep: Word,
}

/// `X`, `Y`, the pullback components `W_s` and the bouquet `Z`, all over the
/// basis of `π₁(Z)`.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub x: SubgroupGraph,
    pub y: SubgroupGraph,
    pub w: Vec<Component>,
    pub z: LabeledGraph,
}

/// The numbers a conservative step must keep: `r̄(X)`, `r̄(Y)` and the
/// sorted component ranks (whose length is `|S|`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub x: i64,
    pub y: i64,
    pub components: Vec<i64>,
}

impl Configuration {
    /// Builds `W` as the pullback of `x` and `y`, with `Z` the bouquet on
    /// their common alphabet.
    pub fn new(x: SubgroupGraph, y: SubgroupGraph) -> Configuration {
        let d = fiber_product(&x, &y);
        let w = components_of(&d);
        let z = bouquet(x.alphabet().restored());
        Configuration { x, y, w, z }
    }

    pub fn alphabet(&self) -> Alphabet {
        *self.z.alphabet()
    }

    pub fn rank(&self) -> u32 {
        self.alphabet().rank()
    }

    /// `B = X ⊔ Y`; `Y`'s vertices come after `X`'s.
    pub fn union(&self) -> LabeledGraph {
        self.x.graph().disjoint_union(self.y.graph())
    }

    pub fn invariants(&self) -> Invariants {
        let mut components: Vec<i64> = self.w.iter().map(|c| c.subgroup.reduced_rank()).collect();
        components.sort_unstable();
        Invariants {
            x: self.x.reduced_rank(),
            y: self.y.reduced_rank(),
            components,
        }
    }

    /// Applies `step` to every graph by edge surgery, folding and coring,
    /// and checks each result against the substituted generators.
    pub fn apply(&self, step: &Step) -> Result<Configuration> {
        let rank = self.rank();
        let sub = step.substitution(rank)?;
        let (f, image) = match step {
            Step::Automorphism {
                letter,
                left,
                right,
            } => (
                *letter,
                left.concat(&Word::letter(*letter)).concat(&right.invert()),
            ),
            Step::RankDrop { generator, image } => (Letter::gen(*generator), image.clone()),
        };
        let target = match step {
            Step::Automorphism { .. } => self.alphabet(),
            Step::RankDrop { .. } => Alphabet::new(rank - 1)?,
        };
        let drop = matches!(step, Step::RankDrop { .. }).then_some(f.index());
        let surgery = Surgery {
            f,
            image: &image,
            sub: &sub,
            target,
            drop,
        };
        let x = surgery.subgroup(&self.x)?;
        let y = surgery.subgroup(&self.y)?;
        let w = self
            .w
            .iter()
            .map(|c| {
                Ok(Component {
                    subgroup: surgery.subgroup(&c.subgroup)?,
                    rep: sub.apply(&c.rep)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let z = surgery.graph(&self.z).0;
        ensure!(
            canonical_form(&z) == canonical_form(&bouquet(target)),
            "Z is no longer a bouquet after {step:?}"
        );
        Ok(Configuration { x, y, w, z })
    }
}

/// Components of a pullback with their representatives.
pub fn components_of(d: &PullbackDecomposition) -> Vec<Component> {
    d.components()
        .iter()
        .map(|c| Component {
            subgroup: c.subgroup.clone(),
            rep: c.rep.clone(),
        })
        .collect()
}

struct Surgery<'a> {
    f: Letter,
    image: &'a Word,
    sub: &'a Substitution,
    target: Alphabet,
    drop: Option<u32>,
}

impl Surgery<'_> {
    /// Replaces `f`-edges, folds and renumbers; returns the graph and the
    /// vertex map.
    fn graph(&self, g: &LabeledGraph) -> (LabeledGraph, Vec<u32>) {
        let folded = g.replace_letter(self.f, self.image).fold();
        let graph = match self.drop {
            None => folded.graph,
            Some(k) => {
                let map: Vec<u32> = (1..=g.alphabet().rank())
                    .map(|i| if i > k { i - 1 } else { i })
                    .collect();
                folded.graph.relabel(self.target, &map)
            }
        };
        (graph, folded.vertex_map)
    }

    fn subgroup(&self, s: &SubgroupGraph) -> Result<SubgroupGraph> {
        let (g, map) = self.graph(s.graph());
        let conj = self.sub.apply(s.conjugator())?;
        let out = SubgroupGraph::core_with_basepoint(g, map[s.basepoint() as usize], conj)
            .map_err(|e| Error::ConservativityViolation(format!("surgery collapsed a subgroup: {e}")))?;
        let images = s
            .basis()
            .iter()
            .map(|b| self.sub.apply(b))
            .collect::<Result<Vec<_>>>()?;
        ensure!(
            out.generates_same(&images),
            "surgery disagrees with the substituted generators"
        );
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_generators;

    fn sub(n: u32, gens: &[&str]) -> SubgroupGraph {
        let gens: Vec<Word> = gens.iter().map(|s| s.parse().unwrap()).collect();
        from_generators(Alphabet::new(n).unwrap(), &gens).unwrap()
    }

    #[test]
    fn automorphism_surgery_matches_algebra() {
        let cfg = Configuration::new(sub(3, &["ab", "cAc"]), sub(3, &["ac", "bb"]));
        let step = Step::Automorphism {
            letter: Letter::gen(1),
            left: "bc".parse().unwrap(),
            right: "C".parse().unwrap(),
        };
        let next = cfg.apply(&step).unwrap();
        assert_eq!(next.invariants(), cfg.invariants());
        assert_eq!(next.rank(), 3);
    }

    #[test]
    fn rank_drop_renumbers() {
        let cfg = Configuration::new(sub(3, &["a"]), sub(3, &["c"]));
        let step = Step::RankDrop {
            generator: 2,
            image: "ac".parse().unwrap(),
        };
        let next = cfg.apply(&step).unwrap();
        assert_eq!(next.rank(), 2);
        // c is renumbered to b
        assert!(next.y.contains(&"b".parse().unwrap()));
        assert_eq!(canonical_form(&next.z), canonical_form(&bouquet(Alphabet::new(2).unwrap())));
    }

    #[test]
    fn conjugators_follow_the_substitution() {
        let x = sub(3, &["baB"]);
        assert_eq!(x.conjugator().to_string(), "B");
        let cfg = Configuration::new(x, sub(3, &["c"]));
        let step = Step::Automorphism {
            letter: Letter::gen(2),
            left: "c".parse().unwrap(),
            right: Word::empty(),
        };
        let next = cfg.apply(&step).unwrap();
        // image of bab^-1 is cbaB C
        assert!(next.x.contains(&"cbaBC".parse().unwrap()));
        assert_eq!(next.x.rank(), 1);
    }
}
