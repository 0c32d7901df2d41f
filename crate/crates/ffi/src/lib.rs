//! C ABI over the blockpart library.
//!
//! Objects are opaque handles created from JSON or by generators and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`BpStatus`]; the message of the last failure on the calling thread is
//! available from [`bp_last_error`]. Strings returned by the library must be
//! released with [`bp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blockpart::blocking::{blocking_number, verify_ell_blocking, SearchOptions, Verdict};
use blockpart::chordal::{build_chordal_partition, ChordalError, ChordalOptions};
use blockpart::embedding::RotationSystem;
use blockpart::generators::stacked_triangulation;
use blockpart::graph::{Graph, Partition};
use blockpart::shallow::tw_bound;
use blockpart::treepart::{min_fill_decomposition, two_blocking_partition, TreePartError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input text is not valid UTF-8 or not valid JSON for the type.
    Parse = 2,
    /// Input parsed but violates a precondition.
    Invalid = 3,
    /// A runtime claim check failed; the message names the claim.
    Assertion = 4,
    Panic = 5,
}

/// Outcome of [`bp_verify_blocking`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpVerdict {
    Holds = 0,
    Counterexample = 1,
    BudgetExhausted = 2,
}

pub struct BpGraph(Graph);
pub struct BpEmbedding(RotationSystem);
pub struct BpPartition(Partition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(BpStatus, String);

impl From<ChordalError> for Fail {
    fn from(e: ChordalError) -> Self {
        match e {
            ChordalError::ClaimFailed { .. } => Fail(BpStatus::Assertion, e.to_string()),
            _ => Fail(BpStatus::Invalid, e.to_string()),
        }
    }
}

impl From<TreePartError> for Fail {
    fn from(e: TreePartError) -> Self {
        match e {
            TreePartError::Assertion { .. } => Fail(BpStatus::Assertion, e.to_string()),
            _ => Fail(BpStatus::Invalid, e.to_string()),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Fail {
    Fail(BpStatus::Invalid, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or(Fail(BpStatus::NullPointer, "null handle".into()))
}

unsafe fn parse<T: serde::de::DeserializeOwned>(json: *const c_char) -> Result<T, Fail> {
    if json.is_null() {
        return Err(Fail(BpStatus::NullPointer, "null string".into()));
    }
    let text = CStr::from_ptr(json)
        .to_str()
        .map_err(|e| Fail(BpStatus::Parse, e.to_string()))?;
    serde_json::from_str(text).map_err(|e| Fail(BpStatus::Parse, e.to_string()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(BpStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(BpStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn bp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": .., "edges": [[u, v], ..]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_graph_from_json(
    json: *const c_char,
    out: *mut *mut BpGraph,
) -> BpStatus {
    guard(|| put(out, BpGraph(parse(json)?)))
}

/// # Safety
/// `g` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bp_graph_free(g: *mut BpGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn bp_graph_vertex_count(g: *const BpGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn bp_graph_edge_count(g: *const BpGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.m())
}

/// Parses `{"rotation": .., "outer_face_edge": [u, v], "outer_face_side": 0|1}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_embedding_from_json(
    json: *const c_char,
    out: *mut *mut BpEmbedding,
) -> BpStatus {
    guard(|| put(out, BpEmbedding(parse(json)?)))
}

/// Seeded stacked triangulation on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_stacked_triangulation(
    n: usize,
    seed: u64,
    out: *mut *mut BpEmbedding,
) -> BpStatus {
    guard(|| {
        let t = stacked_triangulation(n, seed).map_err(invalid)?;
        put(out, BpEmbedding(t.embedding))
    })
}

/// # Safety
/// `e` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bp_embedding_free(e: *mut BpEmbedding) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Copy of the embedded graph.
///
/// # Safety
/// `e` must be a live embedding handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_embedding_graph(
    e: *const BpEmbedding,
    out: *mut *mut BpGraph,
) -> BpStatus {
    guard(|| put(out, BpGraph(deref(e)?.0.graph().clone())))
}

/// Parses `{"part_of": [..]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_from_json(
    json: *const c_char,
    out: *mut *mut BpPartition,
) -> BpStatus {
    guard(|| put(out, BpPartition(parse(json)?)))
}

/// # Safety
/// `p` must be a live partition handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_to_json(
    p: *const BpPartition,
    out: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        put_string(
            out,
            serde_json::to_string(&deref(p)?.0).expect("serialisable"),
        )
    })
}

/// # Safety
/// `p` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_free(p: *mut BpPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Largest part size, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live partition handle.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_width(p: *const BpPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.width())
}

/// Number of parts, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live partition handle.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_part_count(p: *const BpPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.num_parts())
}

/// Part index of vertex `v`.
///
/// # Safety
/// `p` must be a live partition handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_partition_part_of(
    p: *const BpPartition,
    v: usize,
    out: *mut usize,
) -> BpStatus {
    guard(|| {
        let p = &deref(p)?.0;
        if v >= p.n() {
            return Err(invalid(format!("vertex {v} out of range")));
        }
        put_value(out, p.part_of(v))
    })
}

unsafe fn put_value<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(BpStatus::NullPointer, "null output pointer".into()));
    }
    *out = value;
    Ok(())
}

/// Chordal partition of a connected plane graph; every clean path has length
/// at most 6.
///
/// # Safety
/// `e` must be a live embedding handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_chordal_partition(
    e: *const BpEmbedding,
    tau: usize,
    out: *mut *mut BpPartition,
) -> BpStatus {
    guard(|| {
        let res = build_chordal_partition(&deref(e)?.0, &ChordalOptions::new(tau))?;
        put(out, BpPartition(res.partition))
    })
}

/// 2-blocking partition built over a min-fill tree decomposition.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_two_blocking_partition(
    g: *const BpGraph,
    out: *mut *mut BpPartition,
) -> BpStatus {
    guard(|| {
        let g = &deref(g)?.0;
        let res = two_blocking_partition(g, &min_fill_decomposition(g))?;
        put(out, BpPartition(res.partition))
    })
}

/// Exhaustively checks that no clean path has length `ell + 1`. A found
/// path is written as a JSON array to `counterexample` when that pointer is
/// not NULL; it stays NULL otherwise.
///
/// # Safety
/// Handles must be live; `verdict` writable; `counterexample` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn bp_verify_blocking(
    g: *const BpGraph,
    p: *const BpPartition,
    ell: usize,
    budget: u64,
    verdict: *mut BpVerdict,
    counterexample: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        let opts = SearchOptions { budget, workers: 1 };
        let rep = verify_ell_blocking(&deref(g)?.0, &deref(p)?.0, ell, &opts).map_err(invalid)?;
        if !counterexample.is_null() {
            *counterexample = ptr::null_mut();
        }
        let v = match rep.verdict {
            Verdict::Holds => BpVerdict::Holds,
            Verdict::Counterexample(path) => {
                if !counterexample.is_null() {
                    put_string(
                        counterexample,
                        serde_json::to_string(&path).expect("serialisable"),
                    )?;
                }
                BpVerdict::Counterexample
            }
            Verdict::BudgetExhausted => BpVerdict::BudgetExhausted,
        };
        put_value(verdict, v)
    })
}

/// Longest clean path length. `exact` is set to 1 when the search finished
/// within `budget`, otherwise 0 and `value` is a lower bound.
///
/// # Safety
/// Handles must be live; `value` and `exact` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_blocking_number(
    g: *const BpGraph,
    p: *const BpPartition,
    budget: u64,
    value: *mut usize,
    exact: *mut i32,
) -> BpStatus {
    guard(|| {
        let opts = SearchOptions { budget, workers: 1 };
        let rep = blocking_number(&deref(g)?.0, &deref(p)?.0, &opts).map_err(invalid)?;
        put_value(value, rep.max_length_found)?;
        put_value(exact, i32::from(rep.exhausted))
    })
}

/// `binom(2ell+5+t, t) - 1` as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_tw_bound(ell: u64, t: u64, out: *mut *mut c_char) -> BpStatus {
    guard(|| {
        if ell > u64::MAX / 4 || t > u64::MAX / 4 {
            return Err(invalid("arguments too large"));
        }
        put_string(out, tw_bound(ell, t).to_string())
    })
}
