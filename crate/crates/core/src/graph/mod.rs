//! Finite labeled graphs over a symmetric alphabet (A-graphs).
//!
//! A [`LabeledGraph`] stores one entry per unoriented edge, oriented so that
//! its label is a positive letter; the reverse orientation carries the
//! inverse label. Irreducible (folded) graphs additionally support a dense
//! [`Transitions`] table for reading words.
//!
//! Degree counts oriented edges leaving a vertex, so a loop contributes 2
//! and a vertex of an A-complete component has degree `|A| = 2n`.

mod canonical;
mod fold;
pub mod io;
mod subgroup;

use std::collections::VecDeque;

use crate::words::{Alphabet, Letter, Word};

pub use canonical::{canonical_based, canonical_form, CanonicalForm};
pub use fold::Folding;
pub(crate) use fold::UnionFind;
pub use subgroup::{from_generators, intersect_generated, SubgroupGraph};

const NONE: u32 = u32::MAX;

/// An edge stored in positive orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub label: Letter,
}

impl Edge {
    /// The same edge traversed so that it reads `letter` (which must be
    /// `label` or its inverse).
    pub fn oriented(&self, letter: Letter) -> (u32, u32) {
        if letter == self.label {
            (self.from, self.to)
        } else {
            debug_assert_eq!(letter, self.label.inverse());
            (self.to, self.from)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    vertex_count: u32,
    edges: Vec<Edge>,
}

/// An induced subgraph together with the ids its vertices had in the parent.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: LabeledGraph,
    /// `vertices[i]` is the parent id of subgraph vertex `i`.
    pub vertices: Vec<u32>,
}

/// `B_f`: the graph with every `f^{±1}` edge removed.
#[derive(Clone, Debug)]
pub struct LetterDeletion {
    /// Same vertex ids as the input, alphabet `A_f`.
    pub graph: LabeledGraph,
    /// The removed edges, oriented so that they read `f`.
    pub removed: Vec<(u32, u32)>,
    /// `(E_f B)_-`, sorted.
    pub sources: Vec<u32>,
    /// `(E_f B)_+`, sorted.
    pub targets: Vec<u32>,
}

pub fn bouquet(alphabet: Alphabet) -> LabeledGraph {
    let mut g = LabeledGraph::with_vertices(alphabet, 1);
    for l in alphabet.letters().filter(|l| !l.is_inverse()) {
        g.add_edge(0, l, 0);
    }
    g
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet) -> LabeledGraph {
        LabeledGraph::with_vertices(alphabet, 0)
    }

    pub fn with_vertices(alphabet: Alphabet, n: u32) -> LabeledGraph {
        LabeledGraph {
            alphabet,
            vertex_count: n,
            edges: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Same graph, read over a different alphabet with compatible slots.
    pub fn with_alphabet(mut self, alphabet: Alphabet) -> LabeledGraph {
        debug_assert!(self.edges.iter().all(|e| alphabet.contains(e.label)));
        self.alphabet = alphabet;
        self
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Number of unoriented edges, `|EQ| / 2`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    pub fn add_vertex(&mut self) -> u32 {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub(crate) fn push_edge(&mut self, e: Edge) {
        self.edges.push(e);
    }

    /// Adds an edge from `from` to `to` reading `label`.
    pub fn add_edge(&mut self, from: u32, label: Letter, to: u32) {
        assert!(from < self.vertex_count && to < self.vertex_count);
        assert!(self.alphabet.contains(label), "label {label} outside alphabet");
        let e = if label.is_inverse() {
            Edge {
                from: to,
                to: from,
                label: label.inverse(),
            }
        } else {
            Edge { from, to, label }
        };
        self.edges.push(e);
    }

    /// Attaches a fresh path reading `w` at `start` and returns its far end.
    pub fn attach_path(&mut self, start: u32, w: &Word) -> u32 {
        let mut cur = start;
        for &l in w.letters() {
            let next = self.add_vertex();
            self.add_edge(cur, l, next);
            cur = next;
        }
        cur
    }

    /// Attaches a closed path reading `w` at `v` (nothing for the identity).
    pub fn attach_loop(&mut self, v: u32, w: &Word) {
        self.attach_between(v, w, v);
    }

    /// Attaches a fresh path reading `w` from `from` to `to`.
    pub fn attach_between(&mut self, from: u32, w: &Word, to: u32) {
        let letters = w.letters();
        if letters.is_empty() {
            assert_eq!(from, to, "empty path must be closed");
            return;
        }
        let mut cur = from;
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                to
            } else {
                self.add_vertex()
            };
            self.add_edge(cur, l, next);
            cur = next;
        }
    }

    /// `½|EQ| − |VQ|`, the negative Euler characteristic.
    pub fn reduced_rank(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertex_count as usize];
        for e in &self.edges {
            d[e.from as usize] += 1;
            d[e.to as usize] += 1;
        }
        d
    }

    /// Oriented edges leaving each vertex: `(letter, target, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(Letter, u32, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count as usize];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.from as usize].push((e.label, e.to, i));
            adj[e.to as usize].push((e.label.inverse(), e.from, i));
        }
        adj
    }

    pub fn is_folded(&self) -> bool {
        let mut seen = vec![false; self.vertex_count as usize * self.alphabet.codes()];
        let codes = self.alphabet.codes();
        for e in &self.edges {
            for (v, l) in [(e.from, e.label), (e.to, e.label.inverse())] {
                let slot = v as usize * codes + l.code();
                if seen[slot] {
                    return false;
                }
                seen[slot] = true;
            }
        }
        true
    }

    /// Dense transition table; `None` if the graph is not folded.
    pub fn transitions(&self) -> Option<Transitions> {
        Transitions::new(self)
    }

    /// Identifies edges with a common source and label until none remain.
    pub fn fold(&self) -> Folding {
        fold::fold(self)
    }

    /// Connected component index of each vertex, numbered by least vertex.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let mut uf = UnionFind::new(self.vertex_count as usize);
        for e in &self.edges {
            uf.union(e.from, e.to);
        }
        let mut id = vec![NONE; self.vertex_count as usize];
        let mut count = 0;
        let mut comp = vec![0u32; self.vertex_count as usize];
        for v in 0..self.vertex_count {
            let r = uf.find(v) as usize;
            if id[r] == NONE {
                id[r] = count;
                count += 1;
            }
            comp[v as usize] = id[r];
        }
        (comp, count as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Subgraph induced on `vertices` (given in the order they should be
    /// numbered).
    pub fn induced_subgraph(&self, vertices: &[u32]) -> Subgraph {
        let mut new_id = vec![NONE; self.vertex_count as usize];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let mut g = LabeledGraph::with_vertices(self.alphabet, vertices.len() as u32);
        for e in &self.edges {
            let (a, b) = (new_id[e.from as usize], new_id[e.to as usize]);
            if a != NONE && b != NONE {
                g.edges.push(Edge {
                    from: a,
                    to: b,
                    label: e.label,
                });
            }
        }
        Subgraph {
            graph: g,
            vertices: vertices.to_vec(),
        }
    }

    /// Keeps the vertices for which `keep` holds; returns the new graph and
    /// the old-to-new map.
    pub fn retain_vertices(&self, keep: &[bool]) -> (LabeledGraph, Vec<Option<u32>>) {
        let mut map = vec![None; self.vertex_count as usize];
        let mut count = 0;
        for v in 0..self.vertex_count as usize {
            if keep[v] {
                map[v] = Some(count);
                count += 1;
            }
        }
        let mut g = LabeledGraph::with_vertices(self.alphabet, count);
        for e in &self.edges {
            if let (Some(a), Some(b)) = (map[e.from as usize], map[e.to as usize]) {
                g.edges.push(Edge {
                    from: a,
                    to: b,
                    label: e.label,
                });
            }
        }
        (g, map)
    }

    /// Iteratively removes vertices of degree at most one. Returns the core
    /// and the old-to-new vertex map; the core may be empty.
    pub fn core(&self) -> (LabeledGraph, Vec<Option<u32>>) {
        let keep = prune_leaves(self, None);
        self.retain_vertices(&keep)
    }

    /// Splits connected components into A-complete and A-incomplete ones,
    /// relative to this graph's alphabet.
    pub fn complete_components(&self) -> (Subgraph, Subgraph) {
        let (comp, count) = self.components();
        let full = self.alphabet.size();
        let deg = self.degrees();
        let mut complete = vec![true; count];
        for v in 0..self.vertex_count as usize {
            if deg[v] != full {
                complete[comp[v] as usize] = false;
            }
        }
        let (mut com, mut inc) = (Vec::new(), Vec::new());
        for v in 0..self.vertex_count {
            if complete[comp[v as usize] as usize] {
                com.push(v);
            } else {
                inc.push(v);
            }
        }
        (self.induced_subgraph(&com), self.induced_subgraph(&inc))
    }

    /// Vertices lying in A-complete components.
    pub fn complete_vertices(&self) -> Vec<u32> {
        self.complete_components().0.vertices
    }

    pub fn has_complete_component(&self) -> bool {
        !self.complete_vertices().is_empty()
    }

    /// Removes all `f^{±1}` edges, keeping vertex ids; the result lives over
    /// `A_f`.
    pub fn delete_letter(&self, f: Letter) -> LetterDeletion {
        let gen = f.positive();
        let mut g = LabeledGraph::with_vertices(self.alphabet.without(f), self.vertex_count);
        let mut removed = Vec::new();
        for e in &self.edges {
            if e.label == gen {
                removed.push(e.oriented(f));
            } else {
                g.edges.push(*e);
            }
        }
        let mut sources: Vec<u32> = removed.iter().map(|p| p.0).collect();
        let mut targets: Vec<u32> = removed.iter().map(|p| p.1).collect();
        sources.sort_unstable();
        sources.dedup();
        targets.sort_unstable();
        targets.dedup();
        LetterDeletion {
            graph: g,
            removed,
            sources,
            targets,
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &LabeledGraph) -> LabeledGraph {
        assert_eq!(self.alphabet.rank(), other.alphabet.rank());
        let off = self.vertex_count;
        let mut g = self.clone();
        g.vertex_count += other.vertex_count;
        g.edges.extend(other.edges.iter().map(|e| Edge {
            from: e.from + off,
            to: e.to + off,
            label: e.label,
        }));
        g
    }

    /// Renames generators: `map[i]` is the new index of generator `i + 1`.
    pub(crate) fn relabel(&self, alphabet: Alphabet, map: &[u32]) -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(alphabet, self.vertex_count);
        for e in &self.edges {
            g.edges.push(Edge {
                from: e.from,
                to: e.to,
                label: Letter::gen(map[e.label.index() as usize - 1]),
            });
        }
        g
    }

    /// Replaces every edge labeled `f^{±1}` by a fresh path reading the
    /// image of `f`, in place of the edge oriented as `f`.
    pub(crate) fn replace_letter(&self, f: Letter, image: &Word) -> LabeledGraph {
        let gen = f.positive();
        let mut g = LabeledGraph::with_vertices(self.alphabet, self.vertex_count);
        let mut replaced = Vec::new();
        for e in &self.edges {
            if e.label == gen {
                replaced.push(e.oriented(f));
            } else {
                g.edges.push(*e);
            }
        }
        for (from, to) in replaced {
            g.attach_between(from, image, to);
        }
        g
    }

    /// Generators that label at least one edge.
    pub fn used_generators(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.edges.iter().map(|e| e.label.index()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Leaf pruning; `protect` is never removed. Returns the survivors.
pub(crate) fn prune_leaves(g: &LabeledGraph, protect: Option<u32>) -> Vec<bool> {
    let n = g.vertex_count() as usize;
    let adj = g.adjacency();
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut alive_v = vec![true; n];
    let mut alive_e = vec![true; g.edge_count()];
    let mut queue: VecDeque<u32> = (0..n as u32)
        .filter(|&v| deg[v as usize] <= 1 && Some(v) != protect)
        .collect();
    while let Some(v) = queue.pop_front() {
        if !alive_v[v as usize] {
            continue;
        }
        alive_v[v as usize] = false;
        for &(_, t, ei) in &adj[v as usize] {
            if alive_e[ei] {
                alive_e[ei] = false;
                deg[t as usize] -= 1;
                deg[v as usize] -= 1;
                if alive_v[t as usize] && deg[t as usize] <= 1 && Some(t) != protect {
                    queue.push_back(t);
                }
            }
        }
    }
    alive_v
}

/// Dense transition table of a folded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transitions {
    codes: usize,
    next: Vec<u32>,
}

impl Transitions {
    pub fn new(g: &LabeledGraph) -> Option<Transitions> {
        let codes = g.alphabet().codes();
        let mut next = vec![NONE; g.vertex_count() as usize * codes];
        for e in g.edges() {
            for (v, l, t) in [(e.from, e.label, e.to), (e.to, e.label.inverse(), e.from)] {
                let slot = &mut next[v as usize * codes + l.code()];
                if *slot != NONE {
                    return None;
                }
                *slot = t;
            }
        }
        Some(Transitions { codes, next })
    }

    #[inline]
    pub fn step(&self, v: u32, l: Letter) -> Option<u32> {
        if l.code() >= self.codes {
            return None;
        }
        let t = self.next[v as usize * self.codes + l.code()];
        (t != NONE).then_some(t)
    }

    /// Reads as much of `letters` as possible from `v`; returns the vertex
    /// reached and the number of letters read.
    pub fn read_prefix(&self, v: u32, letters: &[Letter]) -> (u32, usize) {
        let mut cur = v;
        for (i, &l) in letters.iter().enumerate() {
            match self.step(cur, l) {
                Some(t) => cur = t,
                None => return (cur, i),
            }
        }
        (cur, letters.len())
    }

    pub fn read(&self, v: u32, w: &Word) -> Option<u32> {
        let (end, n) = self.read_prefix(v, w.letters());
        (n == w.len()).then_some(end)
    }

    pub fn out_letters(&self, v: u32) -> impl Iterator<Item = (Letter, u32)> + '_ {
        let row = &self.next[v as usize * self.codes..(v as usize + 1) * self.codes];
        row.iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(|(c, &t)| (Letter::from_code(c), t))
    }

    pub fn degree(&self, v: u32) -> usize {
        self.out_letters(v).count()
    }

    pub fn vertex_count(&self) -> u32 {
        (self.next.len() / self.codes.max(1)) as u32
    }
}

/// BFS tree from `root` over a folded graph, expanding letters in code
/// order. Returns for each vertex the tree edge used to reach it:
/// `(parent, letter)`; the root and unreachable vertices map to `None`.
pub(crate) fn bfs_tree(t: &Transitions, root: u32) -> Vec<Option<(u32, Letter)>> {
    let n = t.vertex_count() as usize;
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root as usize] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for (l, u) in t.out_letters(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                parent[u as usize] = Some((v, l));
                queue.push_back(u);
            }
        }
    }
    parent
}

/// Position of each vertex in the breadth-first visit from `root`, with
/// letters expanded in code order (`u32::MAX` when unreachable). Depends only
/// on the based labeled graph, not on vertex numbering.
pub(crate) fn bfs_rank(t: &Transitions, root: u32) -> Vec<u32> {
    let n = t.vertex_count() as usize;
    let mut rank = vec![NONE; n];
    rank[root as usize] = 0;
    let mut next = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for (_, u) in t.out_letters(v) {
            if rank[u as usize] == NONE {
                rank[u as usize] = next;
                next += 1;
                queue.push_back(u);
            }
        }
    }
    rank
}

/// Label of the tree path from the root to `v`.
pub(crate) fn tree_path(parent: &[Option<(u32, Letter)>], mut v: u32) -> Word {
    let mut rev = Vec::new();
    while let Some((p, l)) = parent[v as usize] {
        rev.push(l);
        v = p;
    }
    rev.reverse();
    Word::from_reduced(rev)
}

/// BFS distances from `root` (`u32::MAX` when unreachable).
pub(crate) fn distances(t: &Transitions, root: u32) -> Vec<u32> {
    let n = t.vertex_count() as usize;
    let mut dist = vec![NONE; n];
    dist[root as usize] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for (_, u) in t.out_letters(v) {
            if dist[u as usize] == NONE {
                dist[u as usize] = dist[v as usize] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alph(n: u32) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    fn cycle(alphabet: Alphabet, w: &str) -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(alphabet, 1);
        g.attach_loop(0, &Word::parse(w).unwrap());
        g
    }

    /// Two-sheeted cover of the rank-n bouquet: `a` swaps the sheets, the
    /// other generators are loops on both.
    pub(crate) fn double_cover(n: u32) -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(alph(n), 2);
        g.add_edge(0, Letter::gen(1), 1);
        g.add_edge(1, Letter::gen(1), 0);
        for i in 2..=n {
            g.add_edge(0, Letter::gen(i), 0);
            g.add_edge(1, Letter::gen(i), 1);
        }
        g
    }

    #[test]
    fn bouquet_shape() {
        let b = bouquet(alph(2));
        assert_eq!(b.vertex_count(), 1);
        assert_eq!(b.edge_count() * 2, 4);
        assert_eq!(b.reduced_rank(), 1);
        assert!(b.is_folded());
        for n in 1..6 {
            assert_eq!(bouquet(alph(n)).reduced_rank(), n as i64 - 1);
        }
    }

    #[test]
    fn core_of_tree_is_empty() {
        let mut g = LabeledGraph::with_vertices(alph(2), 1);
        g.attach_path(0, &Word::parse("abab").unwrap());
        let (c, _) = g.core();
        assert!(c.is_empty());
    }

    #[test]
    fn core_of_cycle_is_itself() {
        let g = cycle(alph(2), "aaaaaa");
        let (c, map) = g.core();
        assert_eq!(c, g);
        assert!(map.iter().all(Option::is_some));
        assert_eq!(g.reduced_rank(), 0);
    }

    #[test]
    fn core_is_idempotent_with_hanging_trees() {
        let mut g = cycle(alph(3), "abc");
        g.attach_path(1, &Word::parse("aab").unwrap());
        g.attach_path(0, &Word::parse("C").unwrap());
        let (c, _) = g.core();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.core().0, c);
    }

    #[test]
    fn complete_split() {
        let (com, inc) = bouquet(alph(2)).complete_components();
        assert_eq!(com.vertices, vec![0]);
        assert!(inc.vertices.is_empty());

        let (com, inc) = cycle(alph(2), "a").complete_components();
        assert!(com.vertices.is_empty());
        assert_eq!(inc.vertices, vec![0]);

        let cover = double_cover(2);
        assert!(cover.is_folded());
        assert!(cover.degrees().iter().all(|&d| d == 4));
        assert_eq!(cover.complete_components().0.vertices, vec![0, 1]);
    }

    #[test]
    fn delete_letter_counts() {
        let b = bouquet(alph(2));
        let del = b.delete_letter(Letter::gen(1));
        assert_eq!(del.graph.vertex_count(), 1);
        assert_eq!(del.graph.edge_count(), 1);
        assert_eq!(del.graph.edges()[0].label, Letter::gen(2));
        assert_eq!(del.graph.alphabet().size(), 2);

        let g = cycle(alph(3), "abAB");
        let del = g.delete_letter(Letter::gen(3));
        assert_eq!(del.graph.edges(), g.edges());
        assert!(del.removed.is_empty());

        let del = g.delete_letter(Letter::new(1, true));
        assert_eq!(g.edge_count() * 2 - 2 * del.removed.len(), del.graph.edge_count() * 2);
        // removed edges oriented to read a^-1
        for &(s, t) in &del.removed {
            let tr = g.transitions().unwrap();
            assert_eq!(tr.step(s, Letter::new(1, true)), Some(t));
        }
    }

    #[test]
    fn delete_then_reinsert_restores() {
        let mut g = cycle(alph(3), "abcAcb");
        g.attach_path(2, &Word::parse("aC").unwrap());
        let g = g.fold().graph;
        let f = Letter::gen(1);
        let del = g.delete_letter(f);
        let mut back = del.graph.clone().with_alphabet(*g.alphabet());
        for &(s, t) in &del.removed {
            back.add_edge(s, f, t);
        }
        let mut a = back.edges().to_vec();
        let mut b = g.edges().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn transitions_read() {
        let g = cycle(alph(2), "aab");
        let t = g.transitions().unwrap();
        assert_eq!(t.read(0, &Word::parse("aab").unwrap()), Some(0));
        assert_eq!(t.read(0, &Word::parse("BAA").unwrap()), Some(0));
        assert_eq!(t.read(0, &Word::parse("b").unwrap()), None);
        assert_eq!(t.read_prefix(0, Word::parse("aa b").unwrap().letters()), (0, 3));
    }
}
