//! Attaching forests of equally labelled paths to a graph.
//!
//! Given a folded graph `B` without complete components and a vertex set
//! `V1`, we look for a reduced word `w` such that gluing a path reading `w`
//! at each vertex of `V1` and folding only adds trees to `B`, each hanging
//! from a single vertex, and the path from every `v ∈ V1` ends at its own
//! leaf outside `B`.

use std::collections::VecDeque;

use crate::error::{ensure, Error, Result};
use crate::graph::{LabeledGraph, Transitions, UnionFind};
use crate::words::{is_reduced, Letter, Word};

/// Result of gluing path families onto a graph and folding.
#[derive(Clone, Debug)]
pub struct ForestAttachment {
    pub word: Word,
    /// `B'`; the vertices of `B` keep their ids.
    pub graph: LabeledGraph,
    /// The leaf reached from each vertex of `V1`, in input order.
    pub endpoints: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Extend `w` letter by letter, always killing as many surviving
    /// readings as possible.
    #[default]
    Greedy,
    /// Induction on `|V1|`: pad with a power of the last letter and extend
    /// past the new path's end. Words grow roughly like `|V1| · diameter`.
    Inductive,
}

pub fn attach_bf(b: &LabeledGraph, v1: &[u32]) -> Result<ForestAttachment> {
    attach_bf_with(b, v1, Strategy::Greedy)
}

pub fn attach_bf_with(b: &LabeledGraph, v1: &[u32], strategy: Strategy) -> Result<ForestAttachment> {
    let t = transitions(b)?;
    if b.has_complete_component() {
        return Err(Error::CompleteComponent);
    }
    let mut v1 = v1.to_vec();
    dedup_keep_order(&mut v1);
    if v1.is_empty() {
        let least = b.alphabet().letters().next().expect("nonempty alphabet");
        return Ok(ForestAttachment {
            word: Word::letter(least),
            graph: b.clone(),
            endpoints: Vec::new(),
        });
    }
    let word = match strategy {
        Strategy::Greedy => greedy_word(b, &t, &v1)?,
        Strategy::Inductive => inductive_word(b, &t, &v1)?,
    };
    let (graph, ends) = graft_checked(b, &[(&v1, &word)])?;
    Ok(ForestAttachment {
        word,
        graph,
        endpoints: ends.into_iter().next().unwrap(),
    })
}

/// Two families at once; returns `(w1, w2, B', endpoints1, endpoints2)`.
#[derive(Clone, Debug)]
pub struct PairAttachment {
    pub w1: Word,
    pub w2: Word,
    pub graph: LabeledGraph,
    pub endpoints1: Vec<u32>,
    pub endpoints2: Vec<u32>,
}

/// Words `w1 = w1' b1^k` and `w2 = w2' b2^k` with `k = |w1'| + |w2'|`,
/// where `w1'`, `w2'` come from [`attach_bf`] and `b1 ∉ {b2, b2^-1}`.
pub fn attach_bf2(b: &LabeledGraph, v1: &[u32], v2: &[u32]) -> Result<PairAttachment> {
    let size = b.alphabet().size();
    if size < 4 {
        return Err(Error::AlphabetTooSmall { size, required: 4 });
    }
    let first = attach_bf(b, v1)?;
    let second = attach_bf(b, v2)?;
    let (p1, p2) = (first.word, second.word);
    let letters: Vec<Letter> = b.alphabet().letters().collect();
    let (back1, back2) = (p1.last().map(Letter::inverse), p2.last().map(Letter::inverse));
    let (b1, b2) = letters
        .iter()
        .filter(|&&x| Some(x) != back1)
        .flat_map(|&x| {
            letters
                .iter()
                .filter(move |&&y| Some(y) != back2 && y != x && y != x.inverse())
                .map(move |&y| (x, y))
        })
        .next()
        .expect("an alphabet of four letters admits both padding letters");
    let k = (p1.len() + p2.len()) as i64;
    let w1 = p1.concat(&Word::letter(b1).pow(k));
    let w2 = p2.concat(&Word::letter(b2).pow(k));
    let mut v1 = v1.to_vec();
    let mut v2 = v2.to_vec();
    dedup_keep_order(&mut v1);
    dedup_keep_order(&mut v2);
    let (graph, mut ends) = graft_checked(b, &[(&v1, &w1), (&v2, &w2)])?;
    let endpoints2 = ends.pop().unwrap();
    let endpoints1 = ends.pop().unwrap();
    Ok(PairAttachment {
        w1,
        w2,
        graph,
        endpoints1,
        endpoints2,
    })
}

fn transitions(b: &LabeledGraph) -> Result<Transitions> {
    b.transitions()
        .ok_or_else(|| Error::ConservativityViolation("forest attachment needs a folded graph".into()))
}

fn dedup_keep_order(v: &mut Vec<u32>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|x| seen.insert(*x));
}

/// Glues each family's paths, folds, and checks every clause of the
/// forest-attachment contract. Returns the folded graph and the endpoints.
pub(crate) fn graft_checked(
    b: &LabeledGraph,
    families: &[(&[u32], &Word)],
) -> Result<(LabeledGraph, Vec<Vec<u32>>)> {
    let n = b.vertex_count();
    let mut g = b.clone();
    for (vs, w) in families {
        ensure!(!w.is_empty() && is_reduced(w.letters()), "attached word must be nonempty and reduced");
        for &v in vs.iter() {
            g.attach_path(v, w);
        }
    }
    let folding = g.fold();
    let out = folding.graph;
    ensure!(
        (0..n).all(|v| folding.vertex_map[v as usize] == v),
        "folding identified vertices of the original graph"
    );
    let t = out.transitions().unwrap();
    for e in b.edges() {
        ensure!(t.step(e.from, e.label) == Some(e.to), "original edge lost");
    }
    ensure!(out.reduced_rank() == b.reduced_rank(), "reduced rank changed");
    // new material must be a forest whose trees each touch B once
    let bt = b.transitions().unwrap();
    let mut uf = UnionFind::new(out.vertex_count() as usize);
    for v in 1..n {
        uf.union(0, v);
    }
    for e in out.edges() {
        let old = e.from < n && e.to < n && bt.step(e.from, e.label) == Some(e.to);
        if !old {
            ensure!(uf.union(e.from, e.to).is_some(), "attached material is not a forest");
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut ends = Vec::new();
    for (vs, w) in families {
        let mut fam = Vec::new();
        for &v in vs.iter() {
            let end = t.read(v, w);
            ensure!(end.is_some(), "path from {v} missing");
            let end = end.unwrap();
            ensure!(end >= n, "path from {v} ends inside the original graph");
            ensure!(t.degree(end) == 1, "path from {v} does not end at a leaf");
            ensure!(seen.insert(end), "two paths share the leaf {end}");
            fam.push(end);
        }
        ends.push(fam);
    }
    Ok((out, ends))
}

fn greedy_word(b: &LabeledGraph, t: &Transitions, v1: &[u32]) -> Result<Word> {
    let letters: Vec<Letter> = b.alphabet().letters().collect();
    // current vertex of each reading; a reading dies when it leaves B
    let mut pos: Vec<u32> = v1.to_vec();
    let mut dead = vec![false; v1.len()];
    let mut w: Vec<Letter> = Vec::new();
    let bound = (b.vertex_count() as usize + 2) * (v1.len() + 1) * 4;

    let advance = |w: &mut Vec<Letter>, l: Letter, pos: &mut Vec<u32>, dead: &mut Vec<bool>| {
        for i in 0..pos.len() {
            if !dead[i] {
                match t.step(pos[i], l) {
                    Some(next) => pos[i] = next,
                    None => dead[i] = true,
                }
            }
        }
        w.push(l);
    };

    while dead.iter().any(|d| !d) {
        ensure!(w.len() <= bound, "greedy forest word did not terminate");
        let back = w.last().map(|l| l.inverse());
        let best = letters
            .iter()
            .filter(|&&l| Some(l) != back)
            .map(|&l| {
                let kills = (0..pos.len())
                    .filter(|&i| !dead[i] && t.step(pos[i], l).is_none())
                    .count();
                (kills, l)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .unwrap();
        if best.0 > 0 {
            advance(&mut w, best.1, &mut pos, &mut dead);
            continue;
        }
        let i = dead.iter().position(|d| !d).unwrap();
        let path = path_to_deficient(b, t, pos[i], back)?;
        ensure!(!path.is_empty(), "track sits at a deficient vertex yet nothing kills it");
        for l in path {
            advance(&mut w, l, &mut pos, &mut dead);
        }
    }

    Ok(separate(t, &letters, v1, w))
}

/// Reads `w` inside `B` from each vertex of `v1` and records where and when
/// each reading leaves `B`. If one reading leaves at a vertex where an
/// earlier one left and its remaining suffix is a prefix of the other's,
/// its path would end inside the other's; a tail `x^M y`, with `M` the
/// largest such delay, separates them.
fn separate(t: &Transitions, letters: &[Letter], v1: &[u32], mut w: Vec<Letter>) -> Word {
    let mut by_vertex: std::collections::HashMap<u32, Vec<usize>> = Default::default();
    for &v in v1 {
        let (end, k) = t.read_prefix(v, &w);
        by_vertex.entry(end).or_default().push(k);
    }
    let mut gap = 0;
    for steps in by_vertex.values() {
        for &k in steps {
            for &k2 in steps {
                if k < k2 && w[k..].starts_with(&w[k2..]) {
                    gap = gap.max(k2 - k);
                }
            }
        }
    }
    if gap > 0 {
        let back = w.last().map(|l| l.inverse());
        let x = *letters.iter().find(|&&l| Some(l) != back).unwrap();
        let y = *letters.iter().find(|&&l| l != x && l != x.inverse()).unwrap();
        w.extend(std::iter::repeat(x).take(gap));
        w.push(y);
    }
    Word::from_reduced(w)
}

/// Shortest reduced continuation from `start` (entered by a letter whose
/// inverse is `back`) to a vertex missing some letter other than `back`.
fn path_to_deficient(
    b: &LabeledGraph,
    t: &Transitions,
    start: u32,
    back: Option<Letter>,
) -> Result<Vec<Letter>> {
    let full = b.alphabet().size();
    let codes = b.alphabet().codes();
    let deficient = |v: u32| t.degree(v) < full;
    // states: (vertex, incoming letter code or none)
    let slots = |v: u32, inc: Option<Letter>| v as usize * (codes + 1) + inc.map_or(codes, |l| l.code());
    let mut prev: Vec<Option<(u32, Option<Letter>, Letter)>> =
        vec![None; b.vertex_count() as usize * (codes + 1)];
    let incoming = back.map(|l| l.inverse());
    let mut seen = vec![false; prev.len()];
    seen[slots(start, incoming)] = true;
    let mut queue = VecDeque::from([(start, incoming)]);
    while let Some((v, inc)) = queue.pop_front() {
        if deficient(v) && (v, inc) != (start, incoming) {
            let mut path = Vec::new();
            let mut cur = (v, inc);
            while let Some((pv, pinc, l)) = prev[slots(cur.0, cur.1)] {
                path.push(l);
                cur = (pv, pinc);
            }
            path.reverse();
            return Ok(path);
        }
        for (l, u) in t.out_letters(v) {
            if inc.map(|x| x.inverse()) == Some(l) {
                continue;
            }
            let s = slots(u, Some(l));
            if !seen[s] {
                seen[s] = true;
                prev[s] = Some((v, inc, l));
                queue.push_back((u, Some(l)));
            }
        }
    }
    Err(Error::ConservativityViolation(
        "no reduced path to a deficient vertex".into(),
    ))
}

/// Largest distance between two vertices of the same component.
fn intra_component_diameter(t: &Transitions) -> usize {
    let mut best = 0;
    for v in 0..t.vertex_count() {
        let d = crate::graph::distances(t, v);
        best = best.max(d.into_iter().filter(|&x| x != u32::MAX).max().unwrap_or(0) as usize);
    }
    best
}

fn inductive_word(b: &LabeledGraph, t: &Transitions, v1: &[u32]) -> Result<Word> {
    let n = b.vertex_count();
    let letters: Vec<Letter> = b.alphabet().letters().collect();
    let missing_at = |t: &Transitions, v: u32, avoid: &[Letter]| {
        letters
            .iter()
            .copied()
            .find(|&l| t.step(v, l).is_none() && !avoid.contains(&l))
    };

    // base: reduced path to a deficient vertex plus one missing letter
    let start = v1[0];
    let mut w: Vec<Letter> = if t.degree(start) < letters.len() {
        Vec::new()
    } else {
        path_to_deficient(b, t, start, None)?
    };
    let end = t.read_prefix(start, &w).0;
    let c = missing_at(t, end, &w.last().map(|l| vec![l.inverse()]).unwrap_or_default())
        .ok_or_else(|| Error::ConservativityViolation("deficient vertex has no missing letter".into()))?;
    w.push(c);
    let mut w = Word::from_reduced(w);

    let m = intra_component_diameter(t) as i64;
    for k in 1..v1.len() {
        let done = &v1[..k];
        let last = w.last().unwrap();
        let w2 = w.concat(&Word::letter(last).pow(m + 2));
        let (g1, _) = graft_checked(b, &[(done, &w2)])?;
        let (g2, _) = graft(b, &[(&v1[..=k], &w2)]);
        if g2.vertex_count() > g1.vertex_count() {
            // The new path may run through an older path's end; repair as
            // in the greedy construction.
            w = separate(t, &letters, &v1[..=k], w2.into_letters());
            continue;
        }
        let t1 = g1.transitions().unwrap();
        let end = t1
            .read(v1[k], &w2)
            .ok_or_else(|| Error::ConservativityViolation("path vanished after folding".into()))?;
        let tail = if end >= n {
            let q = leaf_path(&t1, n, end)?;
            let b_prime = pick_letter(&letters, &[q[0], last.inverse(), q.last().unwrap().inverse()]);
            let mut tail = q;
            tail.push(b_prime);
            w2.concat(&Word::from_reduced(tail))
        } else {
            let q = path_out_of(&t1, n, end)?;
            let w4 = w2.concat(&Word::from_reduced(q));
            let (g4, _) = graft(b, &[(&v1[..=k], &w4)]);
            let t4 = g4.transitions().unwrap();
            let end4 = t4.read(v1[k], &w4).unwrap();
            let qt = if end4 >= n { leaf_path(&t4, n, end4).unwrap_or_default() } else { Vec::new() };
            let mut avoid = vec![w4.last().unwrap().inverse()];
            if let Some(&f) = qt.first() {
                avoid.push(f);
            }
            if let Some(&l) = qt.last() {
                avoid.push(l.inverse());
            }
            let c2 = pick_letter(&letters, &avoid);
            let mut tail = qt;
            tail.push(c2);
            w4.concat(&crate::words::free_reduce(tail))
        };
        w = separate(t, &letters, &v1[..=k], tail.into_letters());
    }
    Ok(w)
}

fn pick_letter(letters: &[Letter], avoid: &[Letter]) -> Letter {
    *letters
        .iter()
        .find(|l| !avoid.contains(l))
        .expect("alphabet larger than the excluded set")
}

/// Glue and fold without checks.
fn graft(b: &LabeledGraph, families: &[(&[u32], &Word)]) -> (LabeledGraph, Vec<u32>) {
    let mut g = b.clone();
    for (vs, w) in families {
        for &v in vs.iter() {
            g.attach_path(v, w);
        }
    }
    let f = g.fold();
    (f.graph, f.vertex_map)
}

/// Shortest path inside the attached forest (vertices `>= n`) from `start`
/// to a leaf other than `start`.
fn leaf_path(t: &Transitions, n: u32, start: u32) -> Result<Vec<Letter>> {
    let mut prev: Vec<Option<(u32, Letter)>> = vec![None; t.vertex_count() as usize];
    let mut seen = vec![false; t.vertex_count() as usize];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if v != start && t.degree(v) == 1 {
            let mut path = Vec::new();
            let mut cur = v;
            while let Some((p, l)) = prev[cur as usize] {
                path.push(l);
                cur = p;
            }
            path.reverse();
            return Ok(path);
        }
        for (l, u) in t.out_letters(v) {
            if u >= n && !seen[u as usize] {
                seen[u as usize] = true;
                prev[u as usize] = Some((v, l));
                queue.push_back(u);
            }
        }
    }
    Err(Error::ConservativityViolation("no leaf reachable in the forest".into()))
}

/// Shortest path from `start` (in B) to a vertex outside B.
fn path_out_of(t: &Transitions, n: u32, start: u32) -> Result<Vec<Letter>> {
    let parent = crate::graph::bfs_tree(t, start);
    let target = (n..t.vertex_count())
        .filter(|&v| v == start || parent[v as usize].is_some())
        .min_by_key(|&v| crate::graph::tree_path(&parent, v).len())
        .ok_or_else(|| Error::ConservativityViolation("component has no attached forest".into()))?;
    Ok(crate::graph::tree_path(&parent, target).into_letters())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn alph(n: u32) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    fn a_loop() -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(alph(2), 1);
        g.add_edge(0, Letter::gen(1), 0);
        g
    }

    #[test]
    fn single_vertex_on_a_loop() {
        let r = attach_bf(&a_loop(), &[0]).unwrap();
        assert_eq!(r.word, "b".parse().unwrap());
        assert_eq!(r.graph.vertex_count(), 2);
        assert_eq!(r.graph.reduced_rank(), 0);
        assert_eq!(r.endpoints, vec![1]);
        let r = attach_bf_with(&a_loop(), &[0], Strategy::Inductive).unwrap();
        assert_eq!(r.word.len(), 1);
    }

    #[test]
    fn complete_component_rejected() {
        let b = crate::graph::bouquet(alph(2));
        assert_eq!(attach_bf(&b, &[0]).unwrap_err(), Error::CompleteComponent);
    }

    #[test]
    fn pair_on_a_loop_by_hand() {
        let r = attach_bf2(&a_loop(), &[0], &[0]).unwrap();
        // w1' = w2' = b and k = 2; b1 = a is the least letter after b,
        // and b2 must avoid B, a and A
        assert_eq!(r.w1, "baa".parse().unwrap());
        assert_eq!(r.w2, "bbb".parse().unwrap());
        let t = r.graph.transitions().unwrap();
        assert_eq!(t.read(0, &r.w1), Some(r.endpoints1[0]));
        assert_eq!(t.read(0, &r.w2), Some(r.endpoints2[0]));
        assert_ne!(r.endpoints1[0], r.endpoints2[0]);
        assert_eq!(r.graph.reduced_rank(), 0);
    }

    #[test]
    fn small_alphabet_rejected() {
        assert!(matches!(
            attach_bf2(&LabeledGraph::with_vertices(alph(1), 1), &[0], &[0]),
            Err(Error::AlphabetTooSmall { size: 2, required: 4 })
        ));
    }

    /// Random folded core-ish graph with no complete component.
    pub(crate) fn random_graph(rank: u32, words: &[Vec<u32>]) -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(alph(rank), 1);
        for w in words {
            let letters: Vec<Letter> = w
                .iter()
                .map(|&c| Letter::from_code(c as usize % (2 * rank as usize)))
                .collect();
            g.attach_loop(0, &crate::words::free_reduce(letters));
        }
        let g = g.fold().graph;
        if g.has_complete_component() {
            // drop one edge to break completeness
            let mut h = LabeledGraph::with_vertices(*g.alphabet(), g.vertex_count());
            for e in &g.edges()[1..] {
                h.add_edge(e.from, e.label, e.to);
            }
            h
        } else {
            g
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn bf_contract_holds(
            rank in 2u32..4,
            words in prop::collection::vec(prop::collection::vec(0u32..8, 1..7), 1..4),
            pick in prop::collection::vec(any::<u32>(), 1..5),
        ) {
            let g = random_graph(rank, &words);
            let n = g.vertex_count();
            let v1: Vec<u32> = pick.iter().map(|p| p % n).collect();
            let r = attach_bf(&g, &v1).unwrap();
            prop_assert_eq!(r.graph.reduced_rank(), g.reduced_rank());
            let ri = attach_bf_with(&g, &v1, Strategy::Inductive).unwrap();
            prop_assert_eq!(ri.graph.reduced_rank(), g.reduced_rank());
        }

        #[test]
        fn bf2_contract_holds(
            rank in 2u32..4,
            words in prop::collection::vec(prop::collection::vec(0u32..8, 1..7), 1..4),
            p1 in prop::collection::vec(any::<u32>(), 0..4),
            p2 in prop::collection::vec(any::<u32>(), 0..4),
        ) {
            let g = random_graph(rank, &words);
            let n = g.vertex_count();
            let v1: Vec<u32> = p1.iter().map(|p| p % n).collect();
            let v2: Vec<u32> = p2.iter().map(|p| p % n).collect();
            let r = attach_bf2(&g, &v1, &v2).unwrap();
            prop_assert_eq!(r.graph.reduced_rank(), g.reduced_rank());
            let l1 = r.w1.last().unwrap();
            let l2 = r.w2.last().unwrap();
            prop_assert!(l1 != l2 && l1 != l2.inverse());
        }
    }
}
