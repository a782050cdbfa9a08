//! Independent checks of reductions.
//!
//! Everything here is recomputed from the report's words with graph,
//! pullback and word operations only; nothing calls into the reduction
//! machinery.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical_form, from_generators, intersect_generated, LabeledGraph, SubgroupGraph};
use crate::pullback::{fiber_product, union_of};
use crate::transform::{ReductionInput, ReductionReport};
use crate::words::{count_reduced_words, free_reduce, Alphabet, Letter, Word};

pub const DEFAULT_SEED: u64 = 0x5eed_2026;

/// Pairs of distinct elements sampled per subgroup.
pub const INJECTIVITY_SAMPLES: usize = 500;

/// Longest words [`brute_intersection`] enumerates.
pub const BRUTE_MAX_LEN: usize = 12;

/// Most words [`brute_intersection`] enumerates.
pub const BRUTE_WORD_BUDGET: u128 = 10_000_000;

/// Finite index test: every vertex carries every letter of `ambient`.
pub fn is_covering(g: &SubgroupGraph, ambient: &Alphabet) -> bool {
    let t = g.transitions();
    (0..g.graph().vertex_count()).all(|v| t.degree(v) == ambient.size())
}

/// All nontrivial reduced words of length at most `max_len` lying in both
/// `⟨h⟩` and `⟨k⟩`, by enumeration and membership.
pub fn brute_intersection(
    alphabet: Alphabet,
    h: &[Word],
    k: &[Word],
    max_len: usize,
) -> Result<BTreeSet<Word>> {
    if max_len > BRUTE_MAX_LEN {
        return Err(Error::BudgetExceeded(format!(
            "word length {max_len} above {BRUTE_MAX_LEN}"
        )));
    }
    let total: u128 = (0..=max_len)
        .map(|n| count_reduced_words(alphabet.size(), n))
        .sum();
    if total > BRUTE_WORD_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{total} words above the budget of {BRUTE_WORD_BUDGET}"
        )));
    }
    let x = from_generators(alphabet, h)?;
    let y = from_generators(alphabet, k)?;
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut out = BTreeSet::new();
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    fn walk(
        stack: &mut Vec<Letter>,
        letters: &[Letter],
        max_len: usize,
        visit: &mut dyn FnMut(&[Letter]),
    ) {
        if !stack.is_empty() {
            visit(stack);
        }
        if stack.len() == max_len {
            return;
        }
        for &l in letters {
            if stack.last() == Some(&l.inverse()) {
                continue;
            }
            stack.push(l);
            walk(stack, letters, max_len, visit);
            stack.pop();
        }
    }
    walk(&mut stack, &letters, max_len, &mut |w| {
        let w = Word::from_reduced(w.to_vec());
        if x.contains(&w) && y.contains(&w) {
            out.insert(w);
        }
    });
    Ok(out)
}

/// Whether `g ∈ H s K`, where `H = ⟨h⟩`, `K = ⟨k⟩`.
///
/// Paths between the two tail ends of the folded graph "loops of `h`, a
/// tail reading `s` and a tail reading `g`" spell exactly `s^-1 H g`; the
/// test asks whether one of them also closes up in the graph of `K`.
pub fn same_double_coset(alphabet: Alphabet, h: &[Word], k: &[Word], s: &Word, g: &Word) -> bool {
    let mut a = LabeledGraph::with_vertices(alphabet, 1);
    for w in h {
        a.attach_loop(0, w);
    }
    let start = a.attach_path(0, s);
    let end = a.attach_path(0, g);
    let folded = a.fold();
    let (start, end) = (folded.vertex_map[start as usize], folded.vertex_map[end as usize]);
    let mut b = LabeledGraph::with_vertices(alphabet, 1);
    for w in k {
        b.attach_loop(0, w);
    }
    let b = b.fold();
    let kb = b.vertex_map[0];
    let (ta, tb) = (
        folded.graph.transitions().expect("folded"),
        b.graph.transitions().expect("folded"),
    );
    let mut seen = HashSet::from([(start, kb)]);
    let mut queue = VecDeque::from([(start, kb)]);
    while let Some((p, q)) = queue.pop_front() {
        if (p, q) == (end, kb) {
            return true;
        }
        for (l, p2) in ta.out_letters(p) {
            if let Some(q2) = tb.step(q, l) {
                if seen.insert((p2, q2)) {
                    queue.push_back((p2, q2));
                }
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// The report's input equals the originals supplied to the audit.
    InputMatches,
    /// The join basis is the basis of `⟨H, K, S⟩`.
    JoinBasisConsistent,
    /// The flat image map is the composite of the steps and lands in rank 2.
    StepsConsistent,
    /// The reported images of `H`, `K` and `S` are the images of the inputs.
    ImagesConsistent,
    /// The images of the join basis generate the codomain.
    SurjectiveOntoCodomain,
    RankPreserved,
    InjectiveOnH,
    InjectiveOnK,
    ComponentCountPreserved,
    ComponentRanksPreserved,
    /// The representatives, and their images, lie in distinct double cosets
    /// with nontrivial intersections.
    RepresentativesDistinct,
    SurjectiveOnComponent(usize),
    PullbackCoreEqual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    None,
    Numbers(Vec<i64>),
    Word(Word),
    Pair(Word, Word),
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub holds: bool,
    pub witness: Witness,
}

impl Certificate {
    fn new(kind: CertificateKind, holds: bool, witness: Witness) -> Certificate {
        Certificate {
            kind,
            holds,
            witness,
        }
    }

    fn failed(kind: CertificateKind, why: impl ToString) -> Certificate {
        Certificate::new(kind, false, Witness::Note(why.to_string()))
    }
}

/// Recomputes every certificate for `report` against `originals`.
pub fn audit_reduction(report: &ReductionReport, originals: &ReductionInput, seed: u64) -> Vec<Certificate> {
    use CertificateKind as K;
    let mut out = vec![Certificate::new(
        K::InputMatches,
        &report.input == originals,
        Witness::None,
    )];
    let ctx = match Context::new(report, originals) {
        Ok(c) => c,
        Err(e) => {
            out.push(Certificate::failed(K::JoinBasisConsistent, e));
            return out;
        }
    };
    out.push(ctx.join_basis());
    out.push(ctx.steps());
    out.push(ctx.images());
    out.push(ctx.surjective());
    out.extend(ctx.ranks_and_injectivity(seed));
    out.extend(ctx.components());
    out
}

/// Shared recomputed data for one audit.
struct Context<'a> {
    report: &'a ReductionReport,
    ambient: Alphabet,
    target: Alphabet,
    h: Vec<Word>,
    k: Vec<Word>,
    join: SubgroupGraph,
}

impl<'a> Context<'a> {
    fn new(report: &'a ReductionReport, originals: &ReductionInput) -> Result<Context<'a>> {
        let ambient = Alphabet::new(originals.rank)?;
        let all: Vec<Word> = originals
            .h
            .iter()
            .chain(&originals.k)
            .chain(&report.coset_reps)
            .cloned()
            .collect();
        let join = from_generators(ambient, &all)?;
        let target = Alphabet::new(report.epsilon.codomain_rank.max(1))?;
        Ok(Context {
            report,
            ambient,
            target,
            h: originals.h.clone(),
            k: originals.k.clone(),
            join,
        })
    }

    /// `ε` of an ambient word of `L`.
    fn eps(&self, w: &Word) -> Result<Word> {
        let local = self
            .join
            .rewrite(w)
            .ok_or_else(|| Error::Parse(format!("{w} is not in the join")))?;
        self.report.epsilon.images.apply(&local)
    }

    fn eps_all(&self, ws: &[Word]) -> Result<Vec<Word>> {
        ws.iter().map(|w| self.eps(w)).collect()
    }

    fn join_basis(&self) -> Certificate {
        let basis = self.join.basis();
        let holds = basis == self.report.join_basis && basis.len() == self.report.join_rank as usize;
        Certificate::new(
            CertificateKind::JoinBasisConsistent,
            holds,
            Witness::Numbers(vec![basis.len() as i64, self.report.join_rank as i64]),
        )
    }

    fn steps(&self) -> Certificate {
        let e = &self.report.epsilon;
        let expected = self.report.join_rank.min(2);
        let holds = e.domain_rank == self.report.join_rank && e.codomain_rank == expected && e.is_consistent();
        Certificate::new(
            CertificateKind::StepsConsistent,
            holds,
            Witness::Numbers(vec![e.domain_rank as i64, e.codomain_rank as i64, e.steps.len() as i64]),
        )
    }

    fn images(&self) -> Certificate {
        let kind = CertificateKind::ImagesConsistent;
        let groups = [
            (&self.h, &self.report.h_images),
            (&self.k, &self.report.k_images),
            (&self.report.coset_reps, &self.report.rep_images),
        ];
        for (src, reported) in groups {
            if src.len() != reported.len() {
                return Certificate::failed(kind, "image count differs from generator count");
            }
            for (w, r) in src.iter().zip(reported) {
                match self.eps(w) {
                    Ok(img) if &img == r => {}
                    Ok(_) => return Certificate::new(kind, false, Witness::Word(w.clone())),
                    Err(e) => return Certificate::failed(kind, e),
                }
            }
        }
        Certificate::new(kind, true, Witness::None)
    }

    fn surjective(&self) -> Certificate {
        let kind = CertificateKind::SurjectiveOntoCodomain;
        match from_generators(self.target, self.report.epsilon.images.images()) {
            Ok(g) => Certificate::new(
                kind,
                is_covering(&g, &self.target) && g.graph().vertex_count() == 1,
                Witness::Numbers(vec![g.graph().vertex_count() as i64]),
            ),
            Err(e) => Certificate::failed(kind, e),
        }
    }

    fn ranks_and_injectivity(&self, seed: u64) -> Vec<Certificate> {
        use CertificateKind as K;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sides = [(K::InjectiveOnH, &self.h), (K::InjectiveOnK, &self.k)];
        let mut ranks = Vec::new();
        let mut out = Vec::new();
        for (kind, gens) in sides {
            let computed = (|| -> Result<(usize, usize)> {
                let src = from_generators(self.ambient, gens)?;
                let img = from_generators(self.target, &self.eps_all(gens)?)?;
                Ok((src.rank(), img.rank()))
            })();
            let (r, ri) = match computed {
                Ok(p) => p,
                Err(e) => {
                    out.push(Certificate::failed(kind, e));
                    continue;
                }
            };
            ranks.extend([r as i64, ri as i64]);
            let cert = match self.sample_collision(gens, &mut rng) {
                Ok(None) => Certificate::new(kind, r == ri, Witness::Numbers(vec![r as i64, ri as i64])),
                Ok(Some((u, v))) => Certificate::new(kind, false, Witness::Pair(u, v)),
                Err(e) => Certificate::failed(kind, e),
            };
            out.push(cert);
        }
        let holds = ranks.len() == 4 && ranks[0] == ranks[1] && ranks[2] == ranks[3];
        let reported = &self.report.ranks;
        let agrees = ranks.len() == 4
            && [reported.h, reported.h_image, reported.k, reported.k_image]
                .iter()
                .zip(&ranks)
                .all(|(a, b)| *a as i64 == *b);
        out.insert(
            0,
            Certificate::new(K::RankPreserved, holds && agrees, Witness::Numbers(ranks)),
        );
        out
    }

    /// Looks for two distinct sampled elements with equal images.
    fn sample_collision(&self, gens: &[Word], rng: &mut ChaCha8Rng) -> Result<Option<(Word, Word)>> {
        let draw = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(1..=6);
            free_reduce((0..len).flat_map(|_| {
                let g = &gens[rng.gen_range(0..gens.len())];
                let g = if rng.gen_bool(0.5) { g.clone() } else { g.invert() };
                g.into_letters()
            }))
        };
        let mut pairs = 0;
        let mut attempts = 0;
        while pairs < INJECTIVITY_SAMPLES {
            attempts += 1;
            if attempts > 50 * INJECTIVITY_SAMPLES {
                return Err(Error::BudgetExceeded("could not sample distinct pairs".into()));
            }
            let (u, v) = (draw(rng), draw(rng));
            if u == v {
                continue;
            }
            pairs += 1;
            if self.eps(&u)? == self.eps(&v)? {
                return Ok(Some((u, v)));
            }
        }
        Ok(None)
    }

    fn components(&self) -> Vec<Certificate> {
        use CertificateKind as K;
        match self.component_certificates() {
            Ok(c) => c,
            Err(e) => vec![Certificate::failed(K::ComponentCountPreserved, e)],
        }
    }

    fn component_certificates(&self) -> Result<Vec<Certificate>> {
        use CertificateKind as K;
        let r = self.report;
        let x = from_generators(self.ambient, &self.h)?;
        let y = from_generators(self.ambient, &self.k)?;
        let h_img = self.eps_all(&self.h)?;
        let k_img = self.eps_all(&self.k)?;
        let rep_img = self.eps_all(&r.coset_reps)?;
        let xi = from_generators(self.target, &h_img)?;
        let yi = from_generators(self.target, &k_img)?;
        let before = fiber_product(&x, &y);
        let after = fiber_product(&xi, &yi);
        let mut out = Vec::new();

        let counts = vec![before.len() as i64, after.len() as i64, r.coset_reps.len() as i64];
        out.push(Certificate::new(
            K::ComponentCountPreserved,
            counts[0] == counts[1] && counts[0] == counts[2],
            Witness::Numbers(counts),
        ));
        let mut rb = before.component_ranks();
        let mut ra = after.component_ranks();
        rb.sort_unstable();
        ra.sort_unstable();
        out.push(Certificate::new(
            K::ComponentRanksPreserved,
            rb == ra && rb == r.ranks.components && ra == r.ranks.image_components,
            Witness::Numbers(rb.iter().chain(&ra).copied().collect()),
        ));

        let distinct = |alphabet: Alphabet, h: &[Word], k: &[Word], reps: &[Word]| -> Result<bool> {
            for (i, s) in reps.iter().enumerate() {
                let conj: Vec<Word> = k.iter().map(|w| s.conjugate(w)).collect();
                if intersect_generated(alphabet, h, &conj)?.is_none() {
                    return Ok(false);
                }
                if reps[..i].iter().any(|t| same_double_coset(alphabet, h, k, t, s)) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let ok_before = distinct(self.ambient, &self.h, &self.k, &r.coset_reps)?;
        let ok_after = distinct(self.target, &h_img, &k_img, &rep_img)?;
        out.push(Certificate::new(
            K::RepresentativesDistinct,
            ok_before && ok_after,
            Witness::Numbers(vec![ok_before as i64, ok_after as i64]),
        ));

        let mut image_parts = Vec::new();
        for (i, (s, si)) in r.coset_reps.iter().zip(&rep_img).enumerate() {
            let kind = K::SurjectiveOnComponent(i);
            let conj: Vec<Word> = self.k.iter().map(|w| s.conjugate(w)).collect();
            let Some(meet) = intersect_generated(self.ambient, &self.h, &conj)? else {
                out.push(Certificate::failed(kind, "trivial intersection"));
                continue;
            };
            let mapped = self.eps_all(&meet.basis())?;
            let conj_img: Vec<Word> = k_img.iter().map(|w| si.conjugate(w)).collect();
            let Some(target_meet) = intersect_generated(self.target, &h_img, &conj_img)? else {
                out.push(Certificate::failed(kind, "trivial image intersection"));
                continue;
            };
            let holds = target_meet.generates_same(&mapped);
            out.push(Certificate::new(
                kind,
                holds,
                Witness::Numbers(vec![meet.rank() as i64, target_meet.rank() as i64]),
            ));
            image_parts.push(target_meet);
        }
        let equal = image_parts.len() == after.len()
            && canonical_form(after.core()) == canonical_form(&union_of(self.target, &image_parts));
        out.push(Certificate::new(
            K::PullbackCoreEqual,
            equal,
            Witness::Numbers(vec![image_parts.len() as i64, after.len() as i64]),
        ));
        Ok(out)
    }
}

/// Text table of certificates, one per line.
pub fn certificate_table(certs: &[Certificate]) -> String {
    certs
        .iter()
        .map(|c| {
            format!(
                "{:<6} {:?} {}\n",
                if c.holds { "PASS" } else { "FAIL" },
                c.kind,
                serde_json::to_string(&c.witness).unwrap_or_default()
            )
        })
        .collect()
}
