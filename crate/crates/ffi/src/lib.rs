//! C interface to `joinrank`.
//!
//! Every function returns a [`JrStatus`]. Objects come back through out
//! pointers as opaque handles and must be released with the matching
//! `*_free` function; strings returned by the library are released with
//! [`jr_string_free`]. After a failure, [`jr_last_error`] describes it on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use joinrank::graph::io::GraphDoc;
use joinrank::graph::{from_generators, SubgroupGraph};
use joinrank::pullback::{fiber_product, intersection_rank_sum};
use joinrank::transform::{reduce_with, ReduceOptions, ReductionInput, ReductionReport};
use joinrank::verify::{audit_reduction, is_covering, DEFAULT_SEED};
use joinrank::{Alphabet, Error, Word};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JrStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// Text that is not valid UTF-8, words or JSON.
    InvalidInput = 2,
    /// The request is well formed but has no answer, for example a
    /// finite index subgroup passed to a reduction.
    DomainError = 3,
    /// An internal consistency check failed.
    InternalError = 4,
    /// The library panicked; the handle arguments should be discarded.
    Panic = 5,
}

/// A subgroup of a free group, held as its folded graph.
pub struct JrSubgroup {
    inner: SubgroupGraph,
}

/// A finished reduction together with its certificates.
pub struct JrReport {
    inner: ReductionReport,
}

/// Which input subgroup a query refers to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JrSide {
    H = 0,
    K = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<(CString, CString)>> = const { RefCell::new(None) };
}

fn set_error(kind: &str, message: &str) {
    let clean = |s: &str| CString::new(s.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((clean(kind), clean(message))));
}

fn status_of(e: &Error) -> JrStatus {
    match e.exit_code() {
        2 => JrStatus::InvalidInput,
        3 => JrStatus::InternalError,
        _ => JrStatus::DomainError,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> JrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JrStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error("NullPointer", &format!("{what} is null"));
            JrStatus::NullPointer
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(e.kind(), &e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("Panic", "the library panicked");
            JrStatus::Panic
        }
    }
}

enum Failure {
    Null(&'static str),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Engine(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

fn words(alphabet: Alphabet, list: &str) -> Result<Vec<Word>, Error> {
    let ws = joinrank::cli::parse_word_list(list)?;
    for w in &ws {
        alphabet.check_word(w)?;
    }
    Ok(ws)
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::Engine(Error::Parse("output contains a NUL byte".into())))
}

fn json<T: serde::Serialize>(v: &T) -> Result<*mut c_char, Failure> {
    owned_string(serde_json::to_string(v).expect("documents serialize"))
}

/// Builds the subgroup of the free group of rank `rank` generated by the
/// comma-separated words in `gens`.
///
/// # Safety
/// `gens` must be a NUL-terminated string and `out_handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_new(rank: u32, gens: *const c_char, out_handle: *mut *mut JrSubgroup) -> JrStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = ptr::null_mut();
        let alphabet = Alphabet::new(rank)?;
        let inner = from_generators(alphabet, &words(alphabet, text(gens, "gens")?)?)?;
        *slot = Box::into_raw(Box::new(JrSubgroup { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`jr_subgroup_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_free(h: *mut JrSubgroup) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Rank of the subgroup.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_rank(h: *const JrSubgroup, rank: *mut usize) -> JrStatus {
    guard(|| {
        *out(rank, "rank")? = handle(h, "h")?.inner.rank();
        Ok(())
    })
}

/// Number of vertices of the folded graph.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_vertex_count(h: *const JrSubgroup, count: *mut usize) -> JrStatus {
    guard(|| {
        *out(count, "count")? = handle(h, "h")?.inner.graph().vertex_count() as usize;
        Ok(())
    })
}

/// Whether `word` lies in the subgroup.
///
/// # Safety
/// Pointers must be valid and `word` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_contains(h: *const JrSubgroup, word: *const c_char, result: *mut bool) -> JrStatus {
    guard(|| {
        let s = &handle(h, "h")?.inner;
        let w = Word::parse(text(word, "word")?)?;
        s.alphabet().check_word(&w)?;
        *out(result, "result")? = s.contains(&w);
        Ok(())
    })
}

/// Whether the subgroup has finite index.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_is_finite_index(h: *const JrSubgroup, result: *mut bool) -> JrStatus {
    guard(|| {
        let s = &handle(h, "h")?.inner;
        *out(result, "result")? = is_covering(s, s.alphabet());
        Ok(())
    })
}

/// The folded graph as JSON. Free the string with [`jr_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_subgroup_to_json(h: *const JrSubgroup, json_out: *mut *mut c_char) -> JrStatus {
    guard(|| {
        let slot = out(json_out, "json_out")?;
        *slot = ptr::null_mut();
        *slot = json(&GraphDoc::from_subgroup(&handle(h, "h")?.inner))?;
        Ok(())
    })
}

/// Sum of the reduced ranks of the intersections `H ∩ sKs^-1`, one per
/// double coset with a nontrivial intersection; `components` receives
/// their number.
///
/// # Safety
/// Pointers must be valid and the handles built over the same alphabet.
#[no_mangle]
pub unsafe extern "C" fn jr_intersection_rank_sum(
    h: *const JrSubgroup,
    k: *const JrSubgroup,
    components: *mut usize,
    rank_sum: *mut i64,
) -> JrStatus {
    guard(|| {
        let (x, y) = (&handle(h, "h")?.inner, &handle(k, "k")?.inner);
        if x.alphabet() != y.alphabet() {
            return Err(Error::Parse("subgroups live in different free groups".into()).into());
        }
        let d = fiber_product(x, y);
        *out(components, "components")? = d.len();
        *out(rank_sum, "rank_sum")? = intersection_rank_sum(&d);
        Ok(())
    })
}

/// Reduces the join described by `input_json`
/// (`{"rank": n, "H": [...], "K": [...]}`). A `max_steps` of zero means the
/// default bound.
///
/// # Safety
/// `input_json` must be NUL-terminated and `out_report` valid.
#[no_mangle]
pub unsafe extern "C" fn jr_reduce(
    input_json: *const c_char,
    seed: u64,
    max_steps: usize,
    out_report: *mut *mut JrReport,
) -> JrStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let input: ReductionInput = serde_json::from_str(text(input_json, "input_json")?)
            .map_err(|e| Error::Parse(format!("input: {e}")))?;
        let mut opts = ReduceOptions {
            seed,
            ..ReduceOptions::default()
        };
        if max_steps > 0 {
            opts.max_steps = max_steps;
        }
        let inner = reduce_with(&input, opts)?;
        *slot = Box::into_raw(Box::new(JrReport { inner }));
        Ok(())
    })
}

/// Seed used when the caller has no preference.
#[no_mangle]
pub extern "C" fn jr_default_seed() -> u64 {
    DEFAULT_SEED
}

/// # Safety
/// `r` must come from [`jr_reduce`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jr_report_free(r: *mut JrReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Whether every certificate in the report holds.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_report_all_hold(r: *const JrReport, result: *mut bool) -> JrStatus {
    guard(|| {
        *out(result, "result")? = handle(r, "r")?.inner.all_hold();
        Ok(())
    })
}

/// Ranks of one side before and after the reduction.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_report_ranks(
    r: *const JrReport,
    side: JrSide,
    before: *mut usize,
    after: *mut usize,
) -> JrStatus {
    guard(|| {
        let ranks = &handle(r, "r")?.inner.ranks;
        let (b, a) = match side {
            JrSide::H => (ranks.h, ranks.h_image),
            JrSide::K => (ranks.k, ranks.k_image),
        };
        *out(before, "before")? = b;
        *out(after, "after")? = a;
        Ok(())
    })
}

/// The full report as JSON. Free the string with [`jr_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn jr_report_to_json(r: *const JrReport, json_out: *mut *mut c_char) -> JrStatus {
    guard(|| {
        let slot = out(json_out, "json_out")?;
        *slot = ptr::null_mut();
        *slot = json(&handle(r, "r")?.inner)?;
        Ok(())
    })
}

/// Re-checks a serialized report against the original input; `all_hold`
/// receives the verdict.
///
/// # Safety
/// Strings must be NUL-terminated and `all_hold` valid.
#[no_mangle]
pub unsafe extern "C" fn jr_verify(
    report_json: *const c_char,
    input_json: *const c_char,
    seed: u64,
    all_hold: *mut bool,
) -> JrStatus {
    guard(|| {
        let report: ReductionReport = serde_json::from_str(text(report_json, "report_json")?)
            .map_err(|e| Error::Parse(format!("report: {e}")))?;
        let input: ReductionInput = serde_json::from_str(text(input_json, "input_json")?)
            .map_err(|e| Error::Parse(format!("input: {e}")))?;
        *out(all_hold, "all_hold")? = audit_reduction(&report, &input, seed).iter().all(|c| c.holds);
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn jr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(_, m)| m.as_ptr()))
}

/// Machine-readable kind of the last failure on this thread, or null.
#[no_mangle]
pub extern "C" fn jr_last_error_kind() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |(k, _)| k.as_ptr()))
}
