//! Isomorphism-invariant encodings of folded graphs.
//!
//! In a folded graph a breadth-first traversal that expands letters in code
//! order is fully determined by its start vertex, so numbering vertices in
//! discovery order yields an encoding that two label-isomorphic graphs share
//! exactly. With a basepoint the start is fixed. Without one, each
//! component is encoded from every vertex of its smallest colour-refinement
//! class and the least encoding wins; colour classes are themselves
//! invariant, so the result is too.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::{LabeledGraph, Transitions, NONE};

/// Canonical encoding: alphabet slot count plus one sorted entry per
/// connected component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    codes: usize,
    components: Vec<Vec<u32>>,
}

impl CanonicalForm {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Encoding of the basepoint's component. Panics if `g` is not folded.
pub fn canonical_based(g: &LabeledGraph, basepoint: u32) -> CanonicalForm {
    let t = g.transitions().expect("canonical form requires a folded graph");
    let mut enc = Vec::new();
    encode_from(&t, basepoint, g.vertex_count() as usize, None, &mut enc);
    CanonicalForm {
        codes: g.alphabet().codes(),
        components: vec![enc],
    }
}

/// Basepoint-free canonical form. Panics if `g` is not folded.
pub fn canonical_form(g: &LabeledGraph) -> CanonicalForm {
    let t = g.transitions().expect("canonical form requires a folded graph");
    let (comp, count) = g.components();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
    for v in 0..g.vertex_count() {
        members[comp[v as usize] as usize].push(v);
    }
    let n = g.vertex_count() as usize;
    let mut components: Vec<Vec<u32>> = members
        .iter()
        .map(|vs| {
            let starts = start_class(&t, vs, n);
            let mut best: Vec<u32> = Vec::new();
            for (i, &s) in starts.iter().enumerate() {
                let mut enc = Vec::with_capacity(best.len());
                let bound = if i == 0 { None } else { Some(best.as_slice()) };
                if encode_from(&t, s, n, bound, &mut enc) {
                    best = enc;
                }
            }
            best
        })
        .collect();
    components.sort();
    CanonicalForm {
        codes: g.alphabet().codes(),
        components,
    }
}

/// BFS encoding from `start`. With `bound`, stops as soon as the encoding is
/// known to be no smaller than `bound` and returns false; returns true when
/// the full encoding was written and is smaller (or there was no bound).
fn encode_from(
    t: &Transitions,
    start: u32,
    n: usize,
    bound: Option<&[u32]>,
    out: &mut Vec<u32>,
) -> bool {
    let codes = t.codes;
    let mut id = vec![NONE; n];
    let mut order = VecDeque::new();
    id[start as usize] = 0;
    order.push_back(start);
    let mut next_id = 1u32;
    // Once strictly below the bound, the remaining comparison is moot.
    let mut below = bound.is_none();
    while let Some(v) = order.pop_front() {
        for c in 0..codes {
            let target = t.next[v as usize * codes + c];
            let sym = if target == NONE {
                NONE
            } else {
                if id[target as usize] == NONE {
                    id[target as usize] = next_id;
                    next_id += 1;
                    order.push_back(target);
                }
                id[target as usize]
            };
            if !below {
                let b = bound.unwrap();
                match b.get(out.len()).map(|x| sym.cmp(x)) {
                    Some(Ordering::Less) => below = true,
                    Some(Ordering::Greater) | None => return false,
                    Some(Ordering::Equal) => {}
                }
            }
            out.push(sym);
        }
    }
    if !below {
        // equal to the bound (or a prefix of it): not an improvement
        return bound.map_or(true, |b| out.len() < b.len());
    }
    true
}

/// Colour refinement restricted to one component; returns the members of
/// the smallest colour class (ties broken by colour rank).
fn start_class(t: &Transitions, vertices: &[u32], n: usize) -> Vec<u32> {
    if vertices.len() <= 1 {
        return vertices.to_vec();
    }
    let codes = t.codes;
    let m = vertices.len();
    let mut local = vec![NONE; n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let mut color = vec![0u32; m];
    let mut classes = 1usize;
    let mut keys: Vec<Vec<u32>> = vec![Vec::with_capacity(codes + 1); m];
    loop {
        for (i, &v) in vertices.iter().enumerate() {
            let key = &mut keys[i];
            key.clear();
            key.push(color[i]);
            for c in 0..codes {
                let target = t.next[v as usize * codes + c];
                key.push(if target == NONE {
                    NONE
                } else {
                    color[local[target as usize] as usize]
                });
            }
        }
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut next = vec![0u32; m];
        let mut c = 0u32;
        for w in 0..m {
            if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
                c += 1;
            }
            next[idx[w]] = c;
        }
        let new_classes = c as usize + 1;
        color = next;
        let mut sizes = vec![0usize; new_classes];
        for &col in &color {
            sizes[col as usize] += 1;
        }
        if new_classes == classes || sizes.iter().any(|&s| s == 1) {
            let best = (0..new_classes)
                .min_by_key(|&k| (sizes[k], k))
                .unwrap() as u32;
            return vertices
                .iter()
                .zip(&color)
                .filter(|(_, &col)| col == best)
                .map(|(&v, _)| v)
                .collect();
        }
        classes = new_classes;
    }
}
