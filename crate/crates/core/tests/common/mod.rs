//! Helpers shared by the integration tests: random words and subgroups, and
//! a deliberately naive folding routine with a caller-chosen schedule.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use joinrank::graph::{from_generators, LabeledGraph, SubgroupGraph};
use joinrank::{Alphabet, Letter, Word};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn alphabet(rank: u32) -> Alphabet {
    Alphabet::new(rank).unwrap()
}

pub fn words(list: &[&str]) -> Vec<Word> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

/// Uniform reduced word of exactly `len` letters.
pub fn random_word(rng: &mut impl Rng, alphabet: &Alphabet, len: usize) -> Word {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = *letters.choose(rng).unwrap();
        if out.last() != Some(&l.inverse()) {
            out.push(l);
        }
    }
    Word::from_reduced(out)
}

/// Generators of a random nontrivial subgroup.
pub fn random_gens(rng: &mut impl Rng, alphabet: &Alphabet, max_gens: usize, max_len: usize) -> Vec<Word> {
    let n = rng.gen_range(1..=max_gens);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_word(rng, alphabet, len)
        })
        .collect()
}

pub fn random_subgroup(rng: &mut impl Rng, alphabet: &Alphabet, max_gens: usize, max_len: usize) -> (Vec<Word>, SubgroupGraph) {
    let gens = random_gens(rng, alphabet, max_gens, max_len);
    let s = from_generators(*alphabet, &gens).unwrap();
    (gens, s)
}

/// Whether every vertex carries every letter.
pub fn is_complete(s: &SubgroupGraph) -> bool {
    let size = s.alphabet().size();
    let mut deg = vec![0usize; s.graph().vertex_count() as usize];
    for e in s.graph().edges() {
        deg[e.from as usize] += 1;
        deg[e.to as usize] += 1;
    }
    deg.iter().all(|&d| d == size)
}

/// Folds by repeatedly merging one randomly chosen pair of edges that share
/// a start vertex and a label. Edge lists are oriented `(from, label, to)`.
pub fn fold_with_schedule(
    alphabet: Alphabet,
    vertices: u32,
    edges: &[(u32, Letter, u32)],
    rng: &mut impl Rng,
) -> LabeledGraph {
    let mut parent: Vec<u32> = (0..vertices).collect();
    fn find(p: &mut [u32], v: u32) -> u32 {
        let mut r = v;
        while p[r as usize] != r {
            r = p[r as usize];
        }
        let mut v = v;
        while p[v as usize] != r {
            let next = p[v as usize];
            p[v as usize] = r;
            v = next;
        }
        r
    }
    loop {
        // current edges, positive orientation, duplicates removed
        let mut current = BTreeSet::new();
        for &(u, l, v) in edges {
            let (u, v) = (find(&mut parent, u), find(&mut parent, v));
            current.insert(if l.is_inverse() { (v, l.inverse(), u) } else { (u, l, v) });
        }
        let mut out: BTreeMap<(u32, Letter), BTreeSet<u32>> = BTreeMap::new();
        for &(u, l, v) in &current {
            out.entry((u, l)).or_default().insert(v);
            out.entry((v, l.inverse())).or_default().insert(u);
        }
        let conflicts: Vec<Vec<u32>> = out
            .into_values()
            .filter(|t| t.len() > 1)
            .map(|t| t.into_iter().collect())
            .collect();
        if conflicts.is_empty() {
            let reps: BTreeSet<u32> = (0..vertices).map(|v| find(&mut parent, v)).collect();
            let index: BTreeMap<u32, u32> = reps.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
            let mut g = LabeledGraph::with_vertices(alphabet, reps.len() as u32);
            for (u, l, v) in current {
                g.add_edge(index[&u], l, index[&v]);
            }
            return g;
        }
        let targets = conflicts.choose(rng).unwrap();
        let pick: Vec<&u32> = targets.choose_multiple(rng, 2).collect();
        let (a, b) = (find(&mut parent, *pick[0]), find(&mut parent, *pick[1]));
        // the smaller id stays the root, so vertex 0 keeps index 0
        parent[a.max(b) as usize] = a.min(b);
    }
}
