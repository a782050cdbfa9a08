use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

use super::{bfs_rank, bfs_tree, prune_leaves, tree_path, LabeledGraph, Transitions, NONE};

/// A based core graph standing for a subgroup `H` of the free group.
///
/// The loops at `basepoint` spell exactly the elements of `c H c^-1`, where
/// `c` is the stored conjugator; every vertex except possibly the basepoint
/// has degree at least two.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    graph: LabeledGraph,
    basepoint: u32,
    conjugator: Word,
    trans: Transitions,
}

impl PartialEq for SubgroupGraph {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.basepoint == other.basepoint
            && self.conjugator == other.conjugator
    }
}

/// Stallings graph of `⟨gens⟩`.
pub fn from_generators(alphabet: Alphabet, gens: &[Word]) -> Result<SubgroupGraph> {
    SubgroupGraph::from_generators(alphabet, gens)
}

impl SubgroupGraph {
    /// Wraps a folded connected core graph. Fails if the graph is not folded.
    pub fn new(graph: LabeledGraph, basepoint: u32, conjugator: Word) -> Result<SubgroupGraph> {
        let trans = graph.transitions().ok_or_else(|| {
            Error::ConservativityViolation("subgroup graph must be folded".into())
        })?;
        if basepoint >= graph.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: basepoint as usize,
                len: graph.vertex_count() as usize,
            });
        }
        Ok(SubgroupGraph {
            graph,
            basepoint,
            conjugator,
            trans,
        })
    }

    pub fn from_generators(alphabet: Alphabet, gens: &[Word]) -> Result<SubgroupGraph> {
        let g = folded_wedge(alphabet, gens)?;
        SubgroupGraph::core_with_basepoint(g, 0, Word::empty())
    }

    /// Restricts to the basepoint's component, prunes leaves other than the
    /// basepoint, and slides the basepoint along a remaining tail into the
    /// core. If the tail from the old basepoint reads `t`, the conjugator
    /// becomes `t^-1 · conjugator`.
    pub fn core_with_basepoint(
        graph: LabeledGraph,
        basepoint: u32,
        conjugator: Word,
    ) -> Result<SubgroupGraph> {
        let (comp, _) = graph.components();
        let own = comp[basepoint as usize];
        let mut keep: Vec<bool> = comp.iter().map(|&c| c == own).collect();
        let alive = prune_leaves(&graph, Some(basepoint));
        for (k, a) in keep.iter_mut().zip(&alive) {
            *k &= *a;
        }
        let (mut g, map) = graph.retain_vertices(&keep);
        let mut bp = map[basepoint as usize].expect("basepoint is protected");

        let mut tail = Vec::new();
        let mut removed = vec![false; g.vertex_count() as usize];
        let adj = g.adjacency();
        let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut used_edge = vec![false; g.edge_count()];
        loop {
            match deg[bp as usize] {
                0 => return Err(Error::TrivialSubgroup),
                1 => {
                    let &(l, t, ei) = adj[bp as usize]
                        .iter()
                        .find(|(_, _, ei)| !used_edge[*ei])
                        .expect("degree one vertex has an edge");
                    used_edge[ei] = true;
                    removed[bp as usize] = true;
                    deg[bp as usize] -= 1;
                    deg[t as usize] -= 1;
                    tail.push(l);
                    bp = t;
                }
                _ => break,
            }
        }
        if !tail.is_empty() {
            let keep: Vec<bool> = removed.iter().map(|r| !r).collect();
            let (h, map) = g.retain_vertices(&keep);
            g = h;
            bp = map[bp as usize].unwrap();
        }
        let tail = Word::from_reduced(tail);
        let conjugator = tail.invert().concat(&conjugator);
        SubgroupGraph::new(g, bp, conjugator)
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.graph.alphabet()
    }

    pub fn transitions(&self) -> &Transitions {
        &self.trans
    }

    /// Free rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.graph.edge_count() + 1 - self.graph.vertex_count() as usize
    }

    pub fn reduced_rank(&self) -> i64 {
        self.graph.reduced_rank()
    }

    /// Whether every vertex carries every letter, i.e. finite index.
    pub fn is_complete(&self) -> bool {
        let full = self.alphabet().size();
        (0..self.graph.vertex_count()).all(|v| self.trans.degree(v) == full)
    }

    pub fn contains(&self, w: &Word) -> bool {
        let probe = self.conjugator.conjugate(w);
        self.trans.read(self.basepoint, &probe) == Some(self.basepoint)
    }

    /// Free basis of the subgroup itself (conjugator undone), one element
    /// per edge outside a breadth-first spanning tree. The order depends only
    /// on the based graph: edges are sorted by the visit position of their
    /// source, then by label.
    pub fn basis(&self) -> Vec<Word> {
        let inv = self.conjugator.invert();
        self.local_basis()
            .into_iter()
            .map(|b| inv.conjugate(&b))
            .collect()
    }

    /// Basis of the loops at the basepoint, without undoing the conjugator.
    pub fn local_basis(&self) -> Vec<Word> {
        let parent = bfs_tree(&self.trans, self.basepoint);
        self.cotree_edges(&parent)
            .into_iter()
            .map(|i| {
                let e = self.graph.edges()[i];
                tree_path(&parent, e.from)
                    .concat(&Word::letter(e.label))
                    .concat(&tree_path(&parent, e.to).invert())
            })
            .collect()
    }

    /// Indices of the edges outside the tree, in basis order.
    fn cotree_edges(&self, parent: &[Option<(u32, Letter)>]) -> Vec<usize> {
        let codes = self.alphabet().codes();
        let mut slot_edge = vec![NONE; self.graph.vertex_count() as usize * codes];
        for (i, e) in self.graph.edges().iter().enumerate() {
            slot_edge[e.from as usize * codes + e.label.code()] = i as u32;
            slot_edge[e.to as usize * codes + e.label.inverse().code()] = i as u32;
        }
        let mut tree = vec![false; self.graph.edge_count()];
        for &(p, l) in parent.iter().flatten() {
            tree[slot_edge[p as usize * codes + l.code()] as usize] = true;
        }
        let order = bfs_rank(&self.trans, self.basepoint);
        let mut cotree: Vec<usize> = (0..self.graph.edge_count()).filter(|&i| !tree[i]).collect();
        cotree.sort_by_key(|&i| {
            let e = self.graph.edges()[i];
            (order[e.from as usize], e.label.code())
        });
        cotree
    }

    /// Writes `w` (an element of the subgroup) in the basis returned by
    /// [`SubgroupGraph::basis`]: basis element `k` becomes generator `k+1`.
    /// Returns `None` if `w` is not in the subgroup.
    pub fn rewrite(&self, w: &Word) -> Option<Word> {
        let parent = bfs_tree(&self.trans, self.basepoint);
        let codes = self.alphabet().codes();
        let mut slot: Vec<Option<Letter>> =
            vec![None; self.graph.vertex_count() as usize * codes];
        for (k, i) in self.cotree_edges(&parent).into_iter().enumerate() {
            let e = self.graph.edges()[i];
            let g = k as u32 + 1;
            slot[e.from as usize * codes + e.label.code()] = Some(Letter::gen(g));
            slot[e.to as usize * codes + e.label.inverse().code()] = Some(Letter::new(g, true));
        }
        let probe = self.conjugator.conjugate(w);
        let mut cur = self.basepoint;
        let mut out = Vec::new();
        for &l in probe.letters() {
            let next = self.trans.step(cur, l)?;
            if let Some(b) = slot[cur as usize * codes + l.code()] {
                out.push(b);
            }
            cur = next;
        }
        (cur == self.basepoint).then(|| crate::words::free_reduce(out))
    }

    /// Same subgroup, by mutual containment of bases.
    pub fn same_subgroup(&self, other: &SubgroupGraph) -> bool {
        other.basis().iter().all(|b| self.contains(b))
            && self.basis().iter().all(|b| other.contains(b))
    }

    pub fn generates_same(&self, gens: &[Word]) -> bool {
        match SubgroupGraph::from_generators(*self.alphabet(), gens) {
            Ok(other) => self.same_subgroup(&other),
            Err(_) => false,
        }
    }
}

/// Folded graph of loops spelling `gens` at vertex 0, without coring.
pub(crate) fn folded_wedge(alphabet: Alphabet, gens: &[Word]) -> Result<LabeledGraph> {
    let mut g = LabeledGraph::with_vertices(alphabet, 1);
    for w in gens {
        alphabet.check_word(w)?;
        g.attach_loop(0, w);
    }
    if g.edge_count() == 0 {
        return Err(Error::TrivialSubgroup);
    }
    let folded = g.fold();
    debug_assert_eq!(folded.vertex_map[0], 0);
    Ok(folded.graph)
}

/// `⟨p⟩ ∩ ⟨q⟩` as a based graph with trivial conjugator, or `None` when
/// the intersection is trivial.
pub fn intersect_generated(
    alphabet: Alphabet,
    p: &[Word],
    q: &[Word],
) -> Result<Option<SubgroupGraph>> {
    let gp = folded_wedge(alphabet, p)?;
    let gq = folded_wedge(alphabet, q)?;
    let (tp, tq) = (gp.transitions().unwrap(), gq.transitions().unwrap());
    let nq = gq.vertex_count() as u64;
    let mut id = std::collections::HashMap::from([(0u64, 0u32)]);
    let mut pairs = vec![(0u32, 0u32)];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (a, b) = pairs[i];
        for l in alphabet.letters() {
            if let (Some(a2), Some(b2)) = (tp.step(a, l), tq.step(b, l)) {
                let t = *id.entry(a2 as u64 * nq + b2 as u64).or_insert_with(|| {
                    pairs.push((a2, b2));
                    pairs.len() as u32 - 1
                });
                if !l.is_inverse() {
                    edges.push((i as u32, l, t));
                }
            }
        }
        i += 1;
    }
    let mut g = LabeledGraph::with_vertices(alphabet, pairs.len() as u32);
    for (from, l, to) in edges {
        g.add_edge(from, l, to);
    }
    match SubgroupGraph::core_with_basepoint(g, 0, Word::empty()) {
        Ok(s) => Ok(Some(s)),
        Err(Error::TrivialSubgroup) => Ok(None),
        Err(e) => Err(e),
    }
}
