//! Drives the C ABI exactly as a foreign caller would: through raw
//! pointers, out-parameters, and the error-code protocol.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use wlhom_capi::*;

fn c(text: &str) -> CString {
    CString::new(text).expect("test text has no NUL")
}

/// Builds a graph from a spec string, asserting success.
fn graph(spec: &str) -> *mut wlhom_graph {
    let spec = c(spec);
    let g = unsafe { wlhom_graph_from_spec(spec.as_ptr()) };
    assert!(!g.is_null(), "spec {spec:?} should parse: {}", last_error_text());
    g
}

/// Reads a library-owned string and releases it.
fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let text = unsafe { CStr::from_ptr(p) }.to_str().expect("library strings are UTF-8").to_string();
    unsafe { wlhom_string_free(p) };
    text
}

fn last_error_text() -> String {
    unsafe { CStr::from_ptr(wlhom_last_error()) }.to_str().expect("UTF-8").to_string()
}

#[test]
fn handles_round_trip_through_graph6() {
    let code = c("EhEG");
    let g = unsafe { wlhom_graph_from_graph6(code.as_ptr()) };
    assert!(!g.is_null());
    assert_eq!(unsafe { wlhom_graph_order(g) }, 6);
    assert_eq!(unsafe { wlhom_graph_size(g) }, 6);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { wlhom_graph_to_graph6(g, &mut out) }, WLHOM_OK);
    assert_eq!(take_string(out), "EhEG");

    unsafe { wlhom_graph_free(g) };
}

#[test]
fn spec_constructor_builds_generators_and_unions() {
    let union = graph("cycle:3+cycle:3");
    assert_eq!(unsafe { wlhom_graph_order(union) }, 6);
    assert_eq!(unsafe { wlhom_graph_size(union) }, 6);

    let spider = graph("spider:3,2");
    assert_eq!(unsafe { wlhom_graph_order(spider) }, 7);
    assert_eq!(unsafe { wlhom_graph_size(spider) }, 6);

    unsafe {
        wlhom_graph_free(union);
        wlhom_graph_free(spider);
    }
}

#[test]
fn null_and_malformed_inputs_are_reported() {
    assert!(unsafe { wlhom_graph_from_graph6(ptr::null()) }.is_null());
    assert!(last_error_text().contains("NULL"));

    let junk = c("!!!");
    assert!(unsafe { wlhom_graph_from_graph6(junk.as_ptr()) }.is_null());
    assert!(!last_error_text().is_empty());

    assert_eq!(unsafe { wlhom_graph_order(ptr::null()) }, -1);
    assert_eq!(unsafe { wlhom_graph_size(ptr::null()) }, -1);

    // NULL handles and NULL out-pointers fail without touching outputs.
    let g = graph("path:2");
    let mut verdict: c_int = 7;
    assert_eq!(
        unsafe { wlhom_refinement_distinguishes(ptr::null(), g, &mut verdict) },
        WLHOM_ERR_INPUT
    );
    assert_eq!(
        unsafe { wlhom_refinement_distinguishes(g, ptr::null(), &mut verdict) },
        WLHOM_ERR_INPUT
    );
    assert_eq!(verdict, 7, "failed calls must not write the out-parameter");
    assert_eq!(unsafe { wlhom_cospectral(g, g, ptr::null_mut()) }, WLHOM_ERR_INPUT);

    // Freeing NULL is a no-op, as in free(3).
    unsafe {
        wlhom_string_free(ptr::null_mut());
        wlhom_graph_free(ptr::null_mut());
        wlhom_graph_free(g);
    }
}

#[test]
fn verdicts_match_the_library_on_the_twin_pairs() {
    let mut out: c_int = -1;

    // The refine twins: same refinement classes, told apart only by the
    // dimension-2 tuple decider and the level-3 lifted system.
    let g = graph("refine-twins-a");
    let h = graph("refine-twins-b");
    unsafe {
        assert_eq!(wlhom_refinement_distinguishes(g, h, &mut out), WLHOM_OK);
        assert_eq!(out, 0);
        assert_eq!(wlhom_tuple_refinement_distinguishes(g, h, 2, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_flat_system_feasible(g, h, 1, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_lifted_system_feasible(g, h, 3, 0, 0, &mut out), WLHOM_OK);
        assert_eq!(out, 0);
        wlhom_graph_free(g);
        wlhom_graph_free(h);
    }

    // The walk twins: refinement separates them, yet every walk-based
    // invariant agrees, so the real flat system is feasible and the
    // nonnegative one is not.
    let g = graph("walk-twins-a");
    let h = graph("walk-twins-b");
    unsafe {
        assert_eq!(wlhom_refinement_distinguishes(g, h, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_cospectral(g, h, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_walk_fingerprints_equal(g, h, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_flat_system_feasible(g, h, 0, &mut out), WLHOM_OK);
        assert_eq!(out, 1);
        assert_eq!(wlhom_flat_system_feasible(g, h, 1, &mut out), WLHOM_OK);
        assert_eq!(out, 0);
        wlhom_graph_free(g);
        wlhom_graph_free(h);
    }
}

#[test]
fn capacity_overruns_return_the_capacity_code() {
    let g = graph("cycle:6");
    let h = graph("cycle:3+cycle:3");
    let mut out: c_int = -1;
    let code = unsafe { wlhom_lifted_system_feasible(g, h, 3, 0, 10, &mut out) };
    assert_eq!(code, WLHOM_ERR_CAPACITY);
    assert_eq!(out, -1);
    assert!(last_error_text().contains("budget"), "got: {}", last_error_text());
    unsafe {
        wlhom_graph_free(g);
        wlhom_graph_free(h);
    }
}

#[test]
fn hom_counts_arrive_as_decimal_strings() {
    let triangle = graph("cycle:3");
    let target = graph("refine-twins-b");
    let path = graph("path:2");
    let complete = graph("complete:3");

    let mut out: *mut c_char = ptr::null_mut();
    unsafe {
        assert_eq!(wlhom_hom_count(triangle, target, &mut out), WLHOM_OK);
        assert_eq!(take_string(out), "12");
        let mut out2: *mut c_char = ptr::null_mut();
        assert_eq!(wlhom_hom_count(path, complete, &mut out2), WLHOM_OK);
        assert_eq!(take_string(out2), "12");
        wlhom_graph_free(triangle);
        wlhom_graph_free(target);
        wlhom_graph_free(path);
        wlhom_graph_free(complete);
    }
}
