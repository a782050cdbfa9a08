//! JSON and DOT renderings of graphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

use super::{LabeledGraph, SubgroupGraph};

/// Serialized graph. Only the positive orientation of each edge is listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub alphabet_rank: u32,
    pub vertices: Vec<u32>,
    pub edges: Vec<EdgeDoc>,
    pub basepoint: Option<u32>,
    pub conjugator: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: usize,
    pub from: u32,
    pub to: u32,
    pub label: String,
}

impl GraphDoc {
    pub fn from_graph(g: &LabeledGraph, basepoint: Option<u32>, conjugator: &Word) -> GraphDoc {
        GraphDoc {
            alphabet_rank: g.alphabet().rank(),
            vertices: (0..g.vertex_count()).collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeDoc {
                    id,
                    from: e.from,
                    to: e.to,
                    label: e.label.to_string(),
                })
                .collect(),
            basepoint,
            conjugator: conjugator.clone(),
        }
    }

    pub fn from_subgroup(s: &SubgroupGraph) -> GraphDoc {
        GraphDoc::from_graph(s.graph(), Some(s.basepoint()), s.conjugator())
    }

    /// Rebuilds the graph; vertex ids are renumbered by their position in
    /// `vertices`.
    pub fn to_graph(&self) -> Result<(LabeledGraph, Option<u32>)> {
        let alphabet = Alphabet::new(self.alphabet_rank)?;
        let index: HashMap<u32, u32> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        if index.len() != self.vertices.len() {
            return Err(Error::Parse("duplicate vertex id".into()));
        }
        let lookup = |v: u32| {
            index
                .get(&v)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown vertex {v}")))
        };
        let mut g = LabeledGraph::with_vertices(alphabet, self.vertices.len() as u32);
        for e in &self.edges {
            let mut chars = e.label.chars();
            let letter = match (chars.next().and_then(Letter::from_char), chars.next()) {
                (Some(l), None) => l,
                _ => return Err(Error::Parse(format!("bad edge label {:?}", e.label))),
            };
            if !alphabet.contains(letter) {
                return Err(Error::LetterOutOfAlphabet {
                    letter,
                    rank: alphabet.rank(),
                });
            }
            g.add_edge(lookup(e.from)?, letter, lookup(e.to)?);
        }
        let basepoint = self.basepoint.map(lookup).transpose()?;
        Ok((g, basepoint))
    }

    /// Rebuilds a based graph. The graph must be folded.
    pub fn to_subgroup(&self) -> Result<SubgroupGraph> {
        let (g, bp) = self.to_graph()?;
        let bp = bp.ok_or_else(|| Error::Parse("graph has no basepoint".into()))?;
        SubgroupGraph::new(g, bp, self.conjugator.clone())
    }
}

/// Graphviz rendering: one arrow per positive edge, basepoint doubled.
pub fn to_dot(g: &LabeledGraph, basepoint: Option<u32>) -> String {
    let mut s = String::from("digraph G {\n  node [shape=circle];\n");
    for v in 0..g.vertex_count() {
        if Some(v) == basepoint {
            writeln!(s, "  {v} [shape=doublecircle];").unwrap();
        } else {
            writeln!(s, "  {v};").unwrap();
        }
    }
    for e in g.edges() {
        writeln!(s, "  {} -> {} [label=\"{}\"];", e.from, e.to, e.label).unwrap();
    }
    s.push_str("}\n");
    s
}

/// Plain-text summary, one edge per line.
pub fn to_text(g: &LabeledGraph, basepoint: Option<u32>) -> String {
    let mut s = format!(
        "vertices {} edges {} reduced_rank {}\n",
        g.vertex_count(),
        g.edge_count(),
        g.reduced_rank()
    );
    if let Some(b) = basepoint {
        writeln!(s, "basepoint {b}").unwrap();
    }
    for e in g.edges() {
        writeln!(s, "{} -{}-> {}", e.from, e.label, e.to).unwrap();
    }
    s
}
