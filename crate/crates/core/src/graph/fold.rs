use crate::words::Letter;

use super::{Edge, LabeledGraph};

/// Disjoint sets over `0..n` whose representative is always the least
/// member of its class.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Returns `(kept, absorbed)` roots, or `None` if already joined.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        Some((lo, hi))
    }
}

/// Result of folding: the irreducible graph and where each input vertex went.
#[derive(Clone, Debug)]
pub struct Folding {
    pub graph: LabeledGraph,
    /// `vertex_map[v]` is the image of input vertex `v`.
    pub vertex_map: Vec<u32>,
}

/// Stallings folding. Output vertices are numbered by the least input
/// vertex of their class, so a vertex that is never identified with a
/// smaller one keeps its relative order; in particular, if the first `k`
/// input vertices are pairwise non-identified, they keep ids `0..k`.
pub(crate) fn fold(g: &LabeledGraph) -> Folding {
    let n = g.vertex_count() as usize;
    let mut uf = UnionFind::new(n);
    // per-class outgoing table: (letter code, raw target)
    let mut table: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut pending: Vec<(u32, u32)> = Vec::new();

    fn insert(
        table: &mut [Vec<(u32, u32)>],
        pending: &mut Vec<(u32, u32)>,
        root: u32,
        code: u32,
        target: u32,
    ) {
        let row = &mut table[root as usize];
        match row.iter().find(|(c, _)| *c == code) {
            Some(&(_, existing)) => pending.push((existing, target)),
            None => row.push((code, target)),
        }
    }

    for e in g.edges() {
        let c = e.label.code() as u32;
        insert(&mut table, &mut pending, e.from, c, e.to);
        insert(&mut table, &mut pending, e.to, c ^ 1, e.from);
    }

    while let Some((a, b)) = pending.pop() {
        if let Some((kept, absorbed)) = uf.union(a, b) {
            let moved = std::mem::take(&mut table[absorbed as usize]);
            for (c, t) in moved {
                insert(&mut table, &mut pending, kept, c, t);
            }
        }
    }

    let mut new_id = vec![u32::MAX; n];
    let mut count = 0u32;
    for v in 0..n as u32 {
        if uf.find(v) == v {
            new_id[v as usize] = count;
            count += 1;
        }
    }
    let vertex_map: Vec<u32> = (0..n as u32).map(|v| new_id[uf.find(v) as usize]).collect();

    let mut out = LabeledGraph::with_vertices(*g.alphabet(), count);
    for r in 0..n as u32 {
        if uf.find(r) != r {
            continue;
        }
        let mut row = std::mem::take(&mut table[r as usize]);
        row.sort_unstable();
        for (c, t) in row {
            if c & 1 == 0 {
                let to = vertex_map[t as usize];
                out.push_edge(Edge {
                    from: new_id[r as usize],
                    to,
                    label: Letter::from_code(c as usize),
                });
            }
        }
    }
    Folding {
        graph: out,
        vertex_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Word};

    fn alph(n: u32) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    #[test]
    fn union_find_keeps_least_root() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 2);
        uf.union(2, 3);
        assert_eq!(uf.find(4), 2);
        uf.union(3, 0);
        assert_eq!(uf.find(4), 0);
        assert_eq!(uf.union(4, 0), None);
    }

    #[test]
    fn two_loops_fold_to_one() {
        let mut g = LabeledGraph::with_vertices(alph(2), 1);
        g.add_edge(0, Letter::gen(1), 0);
        g.add_edge(0, Letter::gen(1), 0);
        let f = fold(&g);
        assert_eq!(f.graph.vertex_count(), 1);
        assert_eq!(f.graph.edge_count(), 1);
    }

    #[test]
    fn wedge_of_paths_shares_first_edge() {
        let mut g = LabeledGraph::with_vertices(alph(3), 1);
        g.attach_path(0, &Word::parse("ab").unwrap());
        g.attach_path(0, &Word::parse("ac").unwrap());
        let f = fold(&g);
        assert_eq!(f.graph.vertex_count(), 4);
        assert_eq!(f.graph.edge_count(), 3);
        assert!(f.graph.is_folded());
        let a_edges = f.graph.edges().iter().filter(|e| e.label == Letter::gen(1)).count();
        assert_eq!(a_edges, 1);
    }

    #[test]
    fn cascading_folds() {
        // a^3 and a^2 loops at one vertex collapse to a single a-loop
        let mut g = LabeledGraph::with_vertices(alph(2), 1);
        g.attach_loop(0, &Word::parse("aa").unwrap());
        g.attach_loop(0, &Word::parse("aaa").unwrap());
        let f = fold(&g);
        assert_eq!(f.graph.vertex_count(), 1);
        assert_eq!(f.graph.edge_count(), 1);
        assert!(f.vertex_map.iter().all(|&v| v == 0));
    }
}
