//! Fiber products of subgroup graphs and the generalized intersection.
//!
//! The core of the product of the Stallings graphs of `H` and `K` splits
//! into components, one for each double coset `HsK` with `H ∩ sKs^-1`
//! nontrivial; each component is the Stallings graph of that intersection.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{self, LabeledGraph, SubgroupGraph};
use crate::words::{Alphabet, Word};

/// One component `W_s` of the pullback core.
#[derive(Clone, Debug)]
pub struct PullbackComponent {
    /// The component as a based graph representing `H ∩ sKs^-1`.
    pub subgroup: SubgroupGraph,
    /// Double coset representative `s`.
    pub rep: Word,
    /// `(X-vertex, Y-vertex)` for each vertex of the component.
    pub pairs: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct PullbackDecomposition {
    product: LabeledGraph,
    product_pairs: Vec<(u32, u32)>,
    core: LabeledGraph,
    core_pairs: Vec<(u32, u32)>,
    components: Vec<PullbackComponent>,
}

impl PullbackDecomposition {
    /// The product restricted to pairs that carry an edge, plus the
    /// basepoint pair; isolated pairs never reach the core.
    pub fn product(&self) -> &LabeledGraph {
        &self.product
    }

    pub fn product_pairs(&self) -> &[(u32, u32)] {
        &self.product_pairs
    }

    pub fn core(&self) -> &LabeledGraph {
        &self.core
    }

    pub fn core_pairs(&self) -> &[(u32, u32)] {
        &self.core_pairs
    }

    pub fn components(&self) -> &[PullbackComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn reps(&self) -> Vec<Word> {
        self.components.iter().map(|c| c.rep.clone()).collect()
    }

    /// Reduced ranks of the components, in component order.
    pub fn component_ranks(&self) -> Vec<i64> {
        self.components
            .iter()
            .map(|c| c.subgroup.reduced_rank())
            .collect()
    }

    pub fn component_subgroup(&self, i: usize) -> Result<&SubgroupGraph> {
        self.components
            .get(i)
            .map(|c| &c.subgroup)
            .ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.components.len(),
            })
    }
}

pub fn fiber_product(x: &SubgroupGraph, y: &SubgroupGraph) -> PullbackDecomposition {
    let alphabet = *x.alphabet();
    assert_eq!(alphabet.rank(), y.alphabet().rank(), "alphabets differ");
    let (gx, gy) = (x.graph(), y.graph());

    let mut by_label: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, e) in gy.edges().iter().enumerate() {
        by_label.entry(e.label.index()).or_default().push(i);
    }
    let mut id: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs = Vec::new();
    let mut intern = |p: (u32, u32), pairs: &mut Vec<(u32, u32)>| {
        *id.entry(p).or_insert_with(|| {
            pairs.push(p);
            pairs.len() as u32 - 1
        })
    };
    intern((x.basepoint(), y.basepoint()), &mut pairs);
    let mut edges = Vec::new();
    for ex in gx.edges() {
        let Some(list) = by_label.get(&ex.label.index()) else {
            continue;
        };
        for &j in list {
            let ey = gy.edges()[j];
            let a = intern((ex.from, ey.from), &mut pairs);
            let b = intern((ex.to, ey.to), &mut pairs);
            edges.push((a, ex.label, b));
        }
    }
    let mut product = LabeledGraph::with_vertices(alphabet, pairs.len() as u32);
    for (a, l, b) in edges {
        product.add_edge(a, l, b);
    }

    let (core, map) = product.core();
    let mut core_pairs = vec![(0, 0); core.vertex_count() as usize];
    for (old, new) in map.iter().enumerate() {
        if let Some(n) = new {
            core_pairs[*n as usize] = pairs[old];
        }
    }

    let tx = x.transitions();
    let ty = y.transitions();
    let (dx, dy) = (
        graph::distances(tx, x.basepoint()),
        graph::distances(ty, y.basepoint()),
    );
    let (px, py) = (
        graph::bfs_tree(tx, x.basepoint()),
        graph::bfs_tree(ty, y.basepoint()),
    );

    let (comp, count) = core.components();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
    for v in 0..core.vertex_count() {
        members[comp[v as usize] as usize].push(v);
    }
    let components = members
        .into_iter()
        .map(|vs| {
            let chosen = *vs
                .iter()
                .min_by_key(|&&v| {
                    let (a, b) = core_pairs[v as usize];
                    (dx[a as usize], dy[b as usize], a, b)
                })
                .unwrap();
            let (a, b) = core_pairs[chosen as usize];
            let u = graph::tree_path(&px, a);
            let v = graph::tree_path(&py, b);
            let rep = x
                .conjugator()
                .invert()
                .concat(&u)
                .concat(&v.invert())
                .concat(y.conjugator());
            let sub = core.induced_subgraph(&vs);
            let local = vs.iter().position(|&w| w == chosen).unwrap() as u32;
            let conj = u.invert().concat(x.conjugator());
            let subgroup = SubgroupGraph::new(sub.graph, local, conj)
                .expect("core component of a product of folded graphs is folded");
            PullbackComponent {
                subgroup,
                rep,
                pairs: vs.iter().map(|&w| core_pairs[w as usize]).collect(),
            }
        })
        .collect();

    PullbackDecomposition {
        product,
        product_pairs: pairs,
        core,
        core_pairs,
        components,
    }
}

/// `Σ_s r̄(W_s)`, which equals the reduced rank of the pullback core.
pub fn intersection_rank_sum(d: &PullbackDecomposition) -> i64 {
    d.component_ranks().iter().sum()
}

/// Stallings graph of the generalized join `⟨H, K, S⟩`.
pub fn join_graph(
    alphabet: Alphabet,
    h: &[Word],
    k: &[Word],
    reps: &[Word],
) -> Result<SubgroupGraph> {
    let all: Vec<Word> = h.iter().chain(k).chain(reps).cloned().collect();
    SubgroupGraph::from_generators(alphabet, &all)
}

/// Disjoint union of component graphs, for comparing whole pullback cores.
pub fn union_of(alphabet: Alphabet, parts: &[SubgroupGraph]) -> LabeledGraph {
    parts
        .iter()
        .fold(LabeledGraph::new(alphabet), |acc, p| acc.disjoint_union(p.graph()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, canonical_form, from_generators};
    use crate::words::reduced_words_of_length;

    fn alph(n: u32) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    fn sub(n: u32, gens: &[&str]) -> SubgroupGraph {
        let gens: Vec<Word> = gens.iter().map(|s| s.parse().unwrap()).collect();
        from_generators(alph(n), &gens).unwrap()
    }

    #[test]
    fn self_intersection() {
        let x = sub(2, &["a"]);
        let d = fiber_product(&x, &x);
        assert_eq!(d.len(), 1);
        assert_eq!(d.components()[0].rep, Word::empty());
        assert_eq!(intersection_rank_sum(&d), 0);
    }

    #[test]
    fn squares_and_cubes() {
        let d = fiber_product(&sub(2, &["aa"]), &sub(2, &["aaa"]));
        assert_eq!(d.len(), 1);
        let w = d.component_subgroup(0).unwrap();
        assert_eq!(w.graph().vertex_count(), 6);
        assert_eq!(w.reduced_rank(), 0);
        assert!(w.contains(&"aaaaaa".parse().unwrap()));
        assert!(!w.contains(&"aaa".parse().unwrap()));
        assert_eq!(w.rank(), 1);
        assert!(matches!(
            d.component_subgroup(1),
            Err(Error::IndexOutOfRange { index: 1, len: 1 })
        ));
    }

    #[test]
    fn disjoint_cyclic() {
        let d = fiber_product(&sub(2, &["a"]), &sub(2, &["b"]));
        assert!(d.is_empty());
        assert_eq!(intersection_rank_sum(&d), 0);
    }

    #[test]
    fn bouquet_with_itself() {
        let x = sub(2, &["a", "b"]);
        let d = fiber_product(&x, &x);
        assert_eq!(intersection_rank_sum(&d), 1);
        assert_eq!(d.core(), &bouquet(alph(2)));
    }

    #[test]
    fn two_components_with_reps() {
        // ⟨a, bab^-1⟩ against ⟨a⟩: intersections ⟨a⟩ and b⟨a⟩b^-1 ∩ ...
        let x = sub(2, &["a", "baB"]);
        let y = sub(2, &["a"]);
        let d = fiber_product(&x, &y);
        assert_eq!(d.len(), 2);
        for c in d.components() {
            // a loop of the component read back in H and in s K s^-1
            for g in c.subgroup.basis() {
                assert!(x.contains(&g));
                assert!(y.contains(&c.rep.invert().conjugate(&g)));
            }
        }
    }

    #[test]
    fn universal_property_on_short_words() {
        let x = sub(2, &["aab", "bAb", "ba"]);
        let y = sub(2, &["ab", "bbA"]);
        let d = fiber_product(&x, &y);
        let words: Vec<Word> = (0..=6)
            .flat_map(|n| reduced_words_of_length(&alph(2), n))
            .collect();
        for c in d.components() {
            for w in &words {
                let lhs = c.subgroup.contains(w);
                let rhs = x.contains(w) && y.contains(&c.rep.invert().conjugate(w));
                assert_eq!(lhs, rhs, "word {w} rep {}", c.rep);
            }
        }
    }

    #[test]
    fn component_count_symmetric() {
        let x = sub(3, &["ab", "cAc", "bbc"]);
        let y = sub(3, &["ac", "bAB", "cc"]);
        let d1 = fiber_product(&x, &y);
        let d2 = fiber_product(&y, &x);
        assert_eq!(d1.len(), d2.len());
        assert_eq!(
            canonical_form(&union_of(alph(3), &d1.components().iter().map(|c| c.subgroup.clone()).collect::<Vec<_>>())),
            canonical_form(d2.core())
        );
    }

    #[test]
    fn join_contains_generators() {
        let z = join_graph(
            alph(3),
            &["aa".parse().unwrap(), "b".parse().unwrap()],
            &["aaa".parse().unwrap(), "c".parse().unwrap()],
            &[Word::empty()],
        )
        .unwrap();
        assert_eq!(z.rank(), 3);
        assert!(z.is_complete());
        let z = join_graph(alph(3), &["a".parse().unwrap()], &["b".parse().unwrap()], &[]).unwrap();
        assert_eq!(z.rank(), 2);
    }
}
