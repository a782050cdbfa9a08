use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use joinrank::graph::io::GraphDoc;
use joinrank::graph::{canonical_based, from_generators};
use joinrank::{Alphabet, Word};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_joinrank")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn graph_json_round_trips() {
    let out = bin(&["graph", "--rank", "2", "--gens", "aa,aaa"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 1);
    let doc: GraphDoc = serde_json::from_value(v["graph"].clone()).unwrap();
    assert_eq!(doc.vertices.len(), 1);
    assert_eq!(doc.edges.len(), 1);
    for gens in ["aa,aaa", "abA,bb,aBBa", "ab,ba,c"] {
        let out = bin(&["graph", "--rank", "3", "--gens", gens]);
        let doc: GraphDoc = serde_json::from_value(stdout_json(&out)["graph"].clone()).unwrap();
        let parsed = doc.to_subgroup().unwrap();
        let words: Vec<Word> = gens.split(',').map(|s| s.parse().unwrap()).collect();
        let direct = from_generators(Alphabet::new(3).unwrap(), &words).unwrap();
        assert_eq!(
            canonical_based(parsed.graph(), parsed.basepoint()),
            canonical_based(direct.graph(), direct.basepoint())
        );
        assert_eq!(parsed.conjugator(), direct.conjugator());
    }
}

#[test]
fn intersect_reports_components() {
    let out = bin(&["intersect", "--rank", "2", "--h", "aa", "--k", "aaa"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
    assert_eq!(v["components"][0]["reduced_rank"], 0);
    assert_eq!(v["rank_sum"], 0);
    let dot = bin(&["intersect", "--rank", "2", "--h", "aa", "--k", "aaa", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("digraph"));
}

#[test]
fn join_lists_basis_and_reps() {
    let out = bin(&["join", "--rank", "3", "--h", "aa,b", "--k", "aaa,c"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["reps"], serde_json::json!([""]));
    let given = bin(&["join", "--rank", "3", "--h", "a", "--k", "b", "--reps", "c", "--format", "text"]);
    assert!(String::from_utf8(given.stdout).unwrap().starts_with("rank 3\n"));
}

#[test]
fn rank_two_join_reduces_in_zero_steps() {
    let out = bin(&["reduce", "--rank", "3", "--h", "a", "--k", "b"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["join_rank"], 2);
    assert_eq!(v["epsilon"]["steps"].as_array().unwrap().len(), 0);
    assert!(v["certificates"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn reduce_then_verify() {
    let cases = [
        r#"{"rank":3,"H":["aa","b"],"K":["aaa","c"]}"#,
        r#"{"rank":3,"H":["ab","c"],"K":["ac"]}"#,
        r#"{"rank":3,"H":["aab","bc"],"K":["ba","cc"]}"#,
    ];
    for (i, case) in cases.iter().enumerate() {
        let input = scratch(&format!("input{i}.json"));
        let report = scratch(&format!("report{i}.json"));
        std::fs::write(&input, case).unwrap();
        let r = bin(&["reduce", "--input", input.to_str().unwrap(), "--out", report.to_str().unwrap()]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        let v = bin(&["verify", "--report", report.to_str().unwrap(), "--input", input.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));
        assert_eq!(stdout_json(&v)["all_hold"], true);
        let table = bin(&[
            "verify",
            "--report",
            report.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
            "--format",
            "text",
        ]);
        let text = String::from_utf8(table.stdout).unwrap();
        assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    }
}

#[test]
fn verify_rejects_a_tampered_report() {
    let input = scratch("tamper_input.json");
    std::fs::write(&input, r#"{"rank":3,"H":["aa","b"],"K":["aaa","c"]}"#).unwrap();
    let out = bin(&["reduce", "--input", input.to_str().unwrap()]);
    let mut v = stdout_json(&out);
    v["h_images"][0] = Value::String("ab".into());
    let report = scratch("tampered.json");
    std::fs::write(&report, serde_json::to_string(&v).unwrap()).unwrap();
    let checked = bin(&["verify", "--report", report.to_str().unwrap(), "--input", input.to_str().unwrap()]);
    assert_eq!(checked.status.code(), Some(1));
    assert_eq!(stdout_json(&checked)["all_hold"], false);
    // the report must also be checked against the right subgroups
    let other = scratch("other_input.json");
    std::fs::write(&other, r#"{"rank":3,"H":["aa","c"],"K":["aaa","b"]}"#).unwrap();
    let good = scratch("good.json");
    std::fs::write(&good, &out.stdout).unwrap();
    let wrong = bin(&["verify", "--report", good.to_str().unwrap(), "--input", other.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["reduce", "--rank", "3", "--h", "aab,bc", "--k", "ba,cc", "--seed", "11"];
    let (a, b) = (bin(&args), bin(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g = ["intersect", "--rank", "3", "--h", "ab,ba,c", "--k", "abab,cc", "--format", "text"];
    assert_eq!(bin(&g).stdout, bin(&g).stdout);
}

fn error_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn exit_codes_and_error_documents() {
    let parse = bin(&["graph", "--rank", "2", "--gens", "a?b"]);
    assert_eq!(parse.status.code(), Some(2));
    assert_eq!(error_of(&parse)["kind"], "Parse");

    let outside = bin(&["graph", "--rank", "2", "--gens", "c"]);
    assert_eq!(outside.status.code(), Some(2));
    assert_eq!(error_of(&outside)["kind"], "LetterOutOfAlphabet");

    let finite = bin(&["reduce", "--rank", "3", "--h", "aa,b,c,abA,acA", "--k", "a"]);
    assert_eq!(finite.status.code(), Some(1));
    let e = error_of(&finite);
    assert_eq!(e["kind"], "FiniteIndexSubgroup");
    assert!(e["message"].as_str().unwrap().contains("rank 5 = (3-1)*2+1"));

    let unknown = scratch("unknown.json");
    std::fs::write(&unknown, r#"{"rank":3,"H":["a"],"K":["b"],"L":[]}"#).unwrap();
    let bad = bin(&["reduce", "--input", unknown.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));

    let zero = bin(&["reduce", "--rank", "3", "--h", "a", "--k", "b", "--max-steps", "0"]);
    assert_eq!(zero.status.code(), Some(2));

    let missing = bin(&["reduce", "--rank", "3", "--h", "a"]);
    assert_eq!(missing.status.code(), Some(2));
}
