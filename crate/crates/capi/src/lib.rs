//! C ABI over the core library: opaque graph handles, homomorphism
//! counts, and the pairwise equivalence verdicts, callable from any
//! language with C foreign-function support.
//!
//! Conventions:
//! - constructors return a handle, or NULL after recording a message
//!   retrievable through `wlhom_last_error`;
//! - every other fallible function returns `WLHOM_OK`, `WLHOM_ERR_INPUT`,
//!   or `WLHOM_ERR_CAPACITY` and writes its answer through out-pointers,
//!   which are touched only on success;
//! - strings handed out by the library are owned by the caller and must
//!   be released with `wlhom_string_free`;
//! - handles are not thread-safe; share them only with external locking.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wlhom::graph::{parse_graph6, write_graph6, Graph};
use wlhom::homcount::hom_auto;
use wlhom::kwl::distinguishes_kwl;
use wlhom::linsys::{build_fiso, build_liso_with_budget, VARIABLE_BUDGET};
use wlhom::refine::distinguishes_1wl;
use wlhom::solve::{solve_nonneg, solve_real};
use wlhom::spectral::{cospectral, walk_fingerprint};
use wlhom::suite::graph_from_spec;
use wlhom::Error;

/// Success.
pub const WLHOM_OK: c_int = 0;
/// Malformed input: unparsable graph, NULL handle, or invalid argument.
pub const WLHOM_ERR_INPUT: c_int = 2;
/// The request exceeds a capacity budget and was refused, not attempted.
pub const WLHOM_ERR_CAPACITY: c_int = 3;

/// An immutable simple graph. Opaque; create with the constructors and
/// release with `wlhom_graph_free`.
#[allow(non_camel_case_types)]
pub struct wlhom_graph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("no error").expect("static text"));
}

fn record_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes stripped");
    });
}

fn code_of(e: &Error) -> c_int {
    match e {
        Error::Capacity { .. } => WLHOM_ERR_CAPACITY,
        _ => WLHOM_ERR_INPUT,
    }
}

fn fail(e: &Error) -> c_int {
    record_error(&e.to_string());
    code_of(e)
}

/// Runs a fallible body with a panic fence: a defect in the library
/// surfaces as an input error, never as an unwind across the C boundary.
fn guarded(body: impl FnOnce() -> c_int) -> c_int {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            record_error("internal error");
            WLHOM_ERR_INPUT
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string valid for reads.
unsafe fn text_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, c_int> {
    if ptr.is_null() {
        record_error(&format!("{what} is NULL"));
        return Err(WLHOM_ERR_INPUT);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        record_error(&format!("{what} is not UTF-8"));
        WLHOM_ERR_INPUT
    })
}

/// # Safety
/// `ptr` must be NULL or a live handle from a `wlhom_graph_*` constructor.
unsafe fn graph_arg<'a>(ptr: *const wlhom_graph, what: &str) -> Result<&'a Graph, c_int> {
    if ptr.is_null() {
        record_error(&format!("{what} is a NULL graph handle"));
        return Err(WLHOM_ERR_INPUT);
    }
    Ok(&(*ptr).0)
}

fn boxed(g: Graph) -> *mut wlhom_graph {
    Box::into_raw(Box::new(wlhom_graph(g)))
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NUL bytes stripped")
        .into_raw()
}

// ---------------------------------------------------------------------
// handles and strings
// ---------------------------------------------------------------------

/// Parses one graph6 code. Returns NULL on failure; see `wlhom_last_error`.
///
/// # Safety
/// `code` must be a NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_from_graph6(code: *const c_char) -> *mut wlhom_graph {
    let Ok(text) = text_arg(code, "graph6 code") else {
        return ptr::null_mut();
    };
    match parse_graph6(text.trim()) {
        Ok(g) => boxed(g),
        Err(e) => {
            record_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Builds a graph from a spec string: a generator such as `cycle:6`,
/// `path:3`, `star:4`, `spider:3,2`, `complete:4`, or `empty:2`; a raw
/// `g6:` code; a named fixture; or a `+`-joined disjoint union of specs.
/// Returns NULL on failure; see `wlhom_last_error`.
///
/// # Safety
/// `spec` must be a NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_from_spec(spec: *const c_char) -> *mut wlhom_graph {
    let Ok(text) = text_arg(spec, "graph spec") else {
        return ptr::null_mut();
    };
    match graph_from_spec(text) {
        Ok(g) => boxed(g),
        Err(e) => {
            record_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a graph handle. NULL is ignored.
///
/// # Safety
/// `g` must be NULL or a live handle, which becomes invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_free(g: *mut wlhom_graph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or -1 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_order(g: *const wlhom_graph) -> i64 {
    match graph_arg(g, "graph") {
        Ok(graph) => graph.n() as i64,
        Err(_) => -1,
    }
}

/// Number of edges, or -1 for a NULL handle.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_size(g: *const wlhom_graph) -> i64 {
    match graph_arg(g, "graph") {
        Ok(graph) => graph.m() as i64,
        Err(_) => -1,
    }
}

/// Writes the graph6 code of the graph to `*out` as a fresh string.
///
/// # Safety
/// `g` must be NULL or a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_graph_to_graph6(
    g: *const wlhom_graph,
    out: *mut *mut c_char,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let graph = match graph_arg(g, "graph") {
        Ok(graph) => graph,
        Err(code) => return code,
    };
    *out = string_out(write_graph6(graph));
    WLHOM_OK
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string obtained from this library, which becomes
/// invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn wlhom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn wlhom_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ---------------------------------------------------------------------
// counts and verdicts
// ---------------------------------------------------------------------

/// Counts homomorphisms from `pattern` into `target` and writes the count
/// to `*out` as a fresh decimal string (counts overflow machine words).
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_hom_count(
    pattern: *const wlhom_graph,
    target: *const wlhom_graph,
    out: *mut *mut c_char,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (f, g) = match (graph_arg(pattern, "pattern"), graph_arg(target, "target")) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| match hom_auto(f, g) {
        Ok((count, _routine)) => {
            *out = string_out(count.to_string());
            WLHOM_OK
        }
        Err(e) => fail(&e),
    })
}

/// Writes 1 to `*out` when iterated color refinement tells the graphs
/// apart, 0 when it does not.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_refinement_distinguishes(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| {
        *out = distinguishes_1wl(g, h) as c_int;
        WLHOM_OK
    })
}

/// Writes 1 to `*out` when `k`-tuple refinement tells the graphs apart,
/// 0 when it does not. Refuses oversized joint tuple spaces.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_tuple_refinement_distinguishes(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    k: usize,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| match distinguishes_kwl(g, h, k) {
        Ok(verdict) => {
            *out = verdict as c_int;
            WLHOM_OK
        }
        Err(e) => fail(&e),
    })
}

/// Writes 1 to `*out` when the graphs share their characteristic
/// polynomial, 0 otherwise. Exact integer arithmetic throughout.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_cospectral(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| {
        *out = cospectral(g, h) as c_int;
        WLHOM_OK
    })
}

/// Writes 1 to `*out` when the graphs have equal walk counts at every
/// length (equal walk fingerprints), 0 otherwise.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_walk_fingerprints_equal(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| {
        *out = (walk_fingerprint(g) == walk_fingerprint(h)) as c_int;
        WLHOM_OK
    })
}

/// Decides feasibility of the flat commutation system for the pair and
/// writes 1 (feasible) or 0 to `*out`. `nonneg` selects the nonnegative
/// variant; otherwise solutions range over all reals. Exact.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_flat_system_feasible(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    nonneg: c_int,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    guarded(|| {
        let sys = build_fiso(g, h);
        let verdict = if nonneg != 0 { solve_nonneg(&sys) } else { solve_real(&sys) };
        *out = verdict.feasible as c_int;
        WLHOM_OK
    })
}

/// Decides feasibility of the level-`level` lifted system over partial
/// isomorphisms and writes 1 (feasible) or 0 to `*out`. `nonneg` selects
/// the nonnegative variant. `budget_vars` caps the variable count; pass 0
/// for the built-in default. Exact.
///
/// # Safety
/// Graph arguments must be NULL or live handles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn wlhom_lifted_system_feasible(
    g: *const wlhom_graph,
    h: *const wlhom_graph,
    level: usize,
    nonneg: c_int,
    budget_vars: u64,
    out: *mut c_int,
) -> c_int {
    if out.is_null() {
        record_error("out pointer is NULL");
        return WLHOM_ERR_INPUT;
    }
    let (g, h) = match (graph_arg(g, "left graph"), graph_arg(h, "right graph")) {
        (Ok(g), Ok(h)) => (g, h),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    let budget = if budget_vars == 0 { VARIABLE_BUDGET } else { budget_vars as u128 };
    guarded(|| match build_liso_with_budget(g, h, level, budget) {
        Ok(sys) => {
            let verdict = if nonneg != 0 { solve_nonneg(&sys) } else { solve_real(&sys) };
            *out = verdict.feasible as c_int;
            WLHOM_OK
        }
        Err(e) => fail(&e),
    })
}
