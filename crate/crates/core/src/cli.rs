//! Command-line front end. `run` does all the work and returns the text to
//! print, so it can be driven from tests without a process.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::io::{to_dot, to_text, GraphDoc};
use crate::graph::{from_generators, SubgroupGraph};
use crate::pullback::{fiber_product, intersection_rank_sum, join_graph};
use crate::transform::{reduce_with, ReduceOptions, ReductionInput, ReductionReport};
use crate::verify::{audit_reduction, certificate_table, DEFAULT_SEED};
use crate::words::{Alphabet, Word};

#[derive(Parser, Debug)]
#[command(name = "joinrank", version, about = "Stallings graphs, intersections and join reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Folded Stallings graph of a generated subgroup.
    Graph {
        #[arg(long)]
        rank: u32,
        /// Comma-separated generator words.
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        common: Common,
    },
    /// Intersection components of two subgroups.
    Intersect {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Graph and basis of the join of two subgroups with their double coset
    /// representatives.
    Join {
        #[command(flatten)]
        pair: Pair,
        /// Representatives to use instead of the computed ones.
        #[arg(long)]
        reps: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reduces the join onto a free group of rank two.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Re-checks a reduction report against the original subgroups.
    Verify {
        /// Report produced by `reduce`.
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub struct Pair {
    #[arg(long)]
    pub rank: u32,
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub k: String,
}

/// Subgroups given inline or as `{"rank", "H", "K"}` JSON (`-` for stdin).
#[derive(Args, Debug)]
pub struct Source {
    #[arg(long, conflicts_with_all = ["rank", "h", "k"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Refuse input subgroup graphs with more vertices than this.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_vertices: u64,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// What a successful command produced.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
    pub out: Option<PathBuf>,
}

/// Comma-separated words; empty entries are the identity.
pub fn parse_word_list(text: &str) -> Result<Vec<Word>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(Word::parse_reduced).collect()
}

fn checked(alphabet: Alphabet, text: &str) -> Result<Vec<Word>> {
    let words = parse_word_list(text)?;
    for w in &words {
        alphabet.check_word(w)?;
    }
    Ok(words)
}

fn subgroup(alphabet: Alphabet, gens: &[Word], common: &Common) -> Result<SubgroupGraph> {
    let s = from_generators(alphabet, gens)?;
    if s.graph().vertex_count() as u64 > common.max_vertices {
        return Err(Error::BudgetExceeded(format!(
            "graph has {} vertices, limit {}",
            s.graph().vertex_count(),
            common.max_vertices
        )));
    }
    Ok(s)
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl Source {
    fn load(&self) -> Result<ReductionInput> {
        if let Some(path) = &self.input {
            return parse_json(&read_text(path)?, "input");
        }
        match (self.rank, &self.h, &self.k) {
            (Some(rank), Some(h), Some(k)) => {
                let alphabet = Alphabet::new(rank)?;
                Ok(ReductionInput {
                    rank,
                    h: checked(alphabet, h)?,
                    k: checked(alphabet, k)?,
                })
            }
            _ => Err(Error::Parse("give --input, or all of --rank, --h and --k".into())),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

fn unsupported(cmd: &str, format: Format) -> Error {
    Error::Parse(format!("format {format:?} is not available for {cmd}").to_lowercase())
}

/// Executes one command.
pub fn run(cli: &Cli) -> Result<Output> {
    let (text, exit_code, common) = match &cli.command {
        Command::Graph { rank, gens, common } => {
            let alphabet = Alphabet::new(*rank)?;
            let s = subgroup(alphabet, &checked(alphabet, gens)?, common)?;
            let text = match common.format {
                Format::Json => to_json(&json!({
                    "rank": s.rank(),
                    "reduced_rank": s.reduced_rank(),
                    "basis": s.basis(),
                    "graph": GraphDoc::from_subgroup(&s),
                })),
                Format::Dot => to_dot(s.graph(), Some(s.basepoint())),
                Format::Text => format!(
                    "rank {}\nbasis {}\n{}",
                    s.rank(),
                    word_list(&s.basis()),
                    to_text(s.graph(), Some(s.basepoint()))
                ),
            };
            (text, 0, common)
        }
        Command::Intersect { pair, common } => {
            let alphabet = Alphabet::new(pair.rank)?;
            let x = subgroup(alphabet, &checked(alphabet, &pair.h)?, common)?;
            let y = subgroup(alphabet, &checked(alphabet, &pair.k)?, common)?;
            let d = fiber_product(&x, &y);
            let text = match common.format {
                Format::Json => {
                    let components: Vec<_> = d
                        .components()
                        .iter()
                        .map(|c| {
                            json!({
                                "rep": c.rep,
                                "reduced_rank": c.subgroup.reduced_rank(),
                                "graph": GraphDoc::from_subgroup(&c.subgroup),
                            })
                        })
                        .collect();
                    to_json(&json!({
                        "components": components,
                        "rank_sum": intersection_rank_sum(&d),
                    }))
                }
                Format::Dot => to_dot(d.core(), None),
                Format::Text => {
                    let mut s = format!("components {}\nrank_sum {}\n", d.len(), intersection_rank_sum(&d));
                    for c in d.components() {
                        s += &format!(
                            "rep {} reduced_rank {} basis {}\n",
                            display_word(&c.rep),
                            c.subgroup.reduced_rank(),
                            word_list(&c.subgroup.basis())
                        );
                    }
                    s
                }
            };
            (text, 0, common)
        }
        Command::Join { pair, reps, common } => {
            let alphabet = Alphabet::new(pair.rank)?;
            let h = checked(alphabet, &pair.h)?;
            let k = checked(alphabet, &pair.k)?;
            let reps = match reps {
                Some(r) => checked(alphabet, r)?,
                None => {
                    let x = subgroup(alphabet, &h, common)?;
                    let y = subgroup(alphabet, &k, common)?;
                    fiber_product(&x, &y).reps()
                }
            };
            let join = join_graph(alphabet, &h, &k, &reps)?;
            let text = match common.format {
                Format::Json => to_json(&json!({
                    "rank": join.rank(),
                    "reps": reps,
                    "basis": join.basis(),
                    "graph": GraphDoc::from_subgroup(&join),
                })),
                Format::Dot => to_dot(join.graph(), Some(join.basepoint())),
                Format::Text => format!(
                    "rank {}\nreps {}\nbasis {}\n",
                    join.rank(),
                    word_list(&reps),
                    word_list(&join.basis())
                ),
            };
            (text, 0, common)
        }
        Command::Reduce {
            source,
            max_steps,
            common,
        } => {
            let input = source.load()?;
            let alphabet = Alphabet::new(input.rank)?;
            subgroup(alphabet, &input.h, common)?;
            subgroup(alphabet, &input.k, common)?;
            let opts = ReduceOptions {
                max_steps: *max_steps as usize,
                seed: common.seed,
            };
            let report = reduce_with(&input, opts)?;
            let code = if report.all_hold() { 0 } else { 1 };
            let text = match common.format {
                Format::Json => to_json(&report),
                Format::Text => reduction_summary(&report),
                Format::Dot => return Err(unsupported("reduce", common.format)),
            };
            (text, code, common)
        }
        Command::Verify {
            report,
            source,
            common,
        } => {
            let originals = source.load()?;
            let report: ReductionReport = parse_json(&read_text(report)?, "report")?;
            let certs = audit_reduction(&report, &originals, common.seed);
            let code = if certs.iter().all(|c| c.holds) { 0 } else { 1 };
            let text = match common.format {
                Format::Json => to_json(&json!({
                    "all_hold": code == 0,
                    "certificates": certs,
                })),
                Format::Text => certificate_table(&certs),
                Format::Dot => return Err(unsupported("verify", common.format)),
            };
            (text, code, common)
        }
    };
    Ok(Output {
        text,
        exit_code,
        out: common.out.clone(),
    })
}

fn display_word(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.to_string()
    }
}

fn word_list(ws: &[Word]) -> String {
    ws.iter().map(display_word).collect::<Vec<_>>().join(",")
}

fn reduction_summary(r: &ReductionReport) -> String {
    let mut s = format!(
        "join_rank {}\nsteps {}\nconservative_steps {}\n",
        r.join_rank,
        r.epsilon.steps.len(),
        r.trace.len()
    );
    s += &format!("ranks H {} -> {}, K {} -> {}\n", r.ranks.h, r.ranks.h_image, r.ranks.k, r.ranks.k_image);
    s += &format!("H images {}\nK images {}\n", word_list(&r.h_images), word_list(&r.k_images));
    s += &certificate_table(&r.certificates);
    s
}

/// Error document printed when a command fails.
pub fn error_json(e: &Error) -> String {
    to_json(&json!({ "kind": e.kind(), "message": e.to_string() }))
}
