use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use joinrank_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_kind() -> String {
    unsafe { CStr::from_ptr(jr_last_error_kind()).to_str().unwrap().to_owned() }
}

#[test]
fn subgroup_handle_lifecycle() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(jr_subgroup_new(2, c("aa,aaa").as_ptr(), &mut h), JrStatus::Ok);
        assert!(jr_last_error().is_null());
        let mut rank = 0;
        assert_eq!(jr_subgroup_rank(h, &mut rank), JrStatus::Ok);
        assert_eq!(rank, 1);
        let mut n = 0;
        assert_eq!(jr_subgroup_vertex_count(h, &mut n), JrStatus::Ok);
        assert_eq!(n, 1);
        let mut inside = false;
        assert_eq!(jr_subgroup_contains(h, c("AAAAA").as_ptr(), &mut inside), JrStatus::Ok);
        assert!(inside);
        let mut finite = true;
        assert_eq!(jr_subgroup_is_finite_index(h, &mut finite), JrStatus::Ok);
        assert!(!finite);
        let mut s = ptr::null_mut();
        assert_eq!(jr_subgroup_to_json(h, &mut s), JrStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(doc["alphabet_rank"], 2);
        jr_string_free(s);
        jr_subgroup_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(jr_subgroup_new(2, c("c").as_ptr(), &mut h), JrStatus::InvalidInput);
        assert!(h.is_null());
        assert_eq!(last_kind(), "LetterOutOfAlphabet");
        assert_eq!(jr_subgroup_new(2, ptr::null(), &mut h), JrStatus::NullPointer);
        assert_eq!(jr_subgroup_rank(ptr::null(), ptr::null_mut()), JrStatus::NullPointer);
        let mut r = ptr::null_mut();
        let input = c(r#"{"rank":3,"H":["aa","b","c","abA","acA"],"K":["a"]}"#);
        assert_eq!(jr_reduce(input.as_ptr(), jr_default_seed(), 0, &mut r), JrStatus::DomainError);
        assert_eq!(last_kind(), "FiniteIndexSubgroup");
        assert!(r.is_null());
        let bad = c(r#"{"rank":3,"H":["a"],"K":["b"],"extra":1}"#);
        assert_eq!(jr_reduce(bad.as_ptr(), 1, 0, &mut r), JrStatus::InvalidInput);
    }
}

#[test]
fn intersection_of_powers() {
    unsafe {
        let (mut h, mut k) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(jr_subgroup_new(2, c("aa").as_ptr(), &mut h), JrStatus::Ok);
        assert_eq!(jr_subgroup_new(2, c("aaa").as_ptr(), &mut k), JrStatus::Ok);
        let (mut n, mut sum) = (0, -1);
        assert_eq!(jr_intersection_rank_sum(h, k, &mut n, &mut sum), JrStatus::Ok);
        assert_eq!((n, sum), (1, 0));
        jr_subgroup_free(h);
        jr_subgroup_free(k);
    }
}

#[test]
fn reduce_and_verify_round_trip() {
    unsafe {
        let input = c(r#"{"rank":3,"H":["aa","b"],"K":["aaa","c"]}"#);
        let mut r = ptr::null_mut();
        assert_eq!(jr_reduce(input.as_ptr(), 7, 0, &mut r), JrStatus::Ok);
        let mut ok = false;
        assert_eq!(jr_report_all_hold(r, &mut ok), JrStatus::Ok);
        assert!(ok);
        let (mut before, mut after) = (0, 0);
        assert_eq!(jr_report_ranks(r, JrSide::K, &mut before, &mut after), JrStatus::Ok);
        assert_eq!((before, after), (2, 2));
        let mut s = ptr::null_mut();
        assert_eq!(jr_report_to_json(r, &mut s), JrStatus::Ok);
        let mut verdict = false;
        assert_eq!(jr_verify(s, input.as_ptr(), 7, &mut verdict), JrStatus::Ok);
        assert!(verdict);
        jr_string_free(s);
        jr_report_free(r);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/joinrank.h")).unwrap();
    for name in [
        "jr_subgroup_new",
        "jr_subgroup_free",
        "jr_reduce",
        "jr_report_free",
        "jr_verify",
        "jr_string_free",
        "jr_last_error",
        "typedef struct JrSubgroup JrSubgroup",
        "JR_STATUS_DOMAIN_ERROR = 3",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles, links and runs a C program against the header.
#[test]
fn c_program_uses_the_header() {
    let dir = crate_dir();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let src = dir.join("tests/c/smoke.c");
    let include = dir.join("include");
    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // `cargo test` only builds the rlib, so build a fresh static library in
    // a private target directory.
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cbuild");
    let build = Command::new(env!("CARGO"))
        .args(["build", "--offline", "--quiet", "-p", "joinrank-ffi", "--target-dir"])
        .arg(&target)
        .current_dir(&dir)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let lib = target.join("debug/libjoinrank_ffi.a");
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("jr_smoke");
    let link = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
