use std::ffi::{CStr, CString};
use std::ptr;

use ttmaps_ffi::*;

const G: &str = include_str!("../../core/tests/corpus/delta2_g.tt");

fn doc(text: &str) -> *mut TtDocument {
    let t = CString::new(text).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { tt_document_parse(t.as_ptr(), &mut d) }, TtStatus::Ok);
    d
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tt_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn g_through_the_c_abi() {
    let d = doc(G);
    let mut n = 0usize;
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(tt_document_map_count(d, &mut n), TtStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(tt_document_map(d, ptr::null(), &mut m), TtStatus::Ok);
        assert_eq!(tt_map_edge_count(m, &mut n), TtStatus::Ok);
        assert_eq!(n, 5);
        assert_eq!(tt_map_fold_count(m, &mut n), TtStatus::Ok);
        assert_eq!(n, 1);
        assert_eq!(tt_map_stack_count(m, &mut n), TtStatus::Ok);
        assert_eq!(n, 1);
        let (mut lo, mut hi) = (0.0, 0.0);
        let mut cp = ptr::null_mut();
        assert_eq!(tt_map_stretch_factor(m, &mut lo, &mut hi, &mut cp), TtStatus::Ok);
        assert!(lo <= 1.1673039782614187 && 1.1673039782614187 <= hi && hi - lo < 1e-11);
        assert_eq!(CStr::from_ptr(cp).to_str().unwrap(), "x^5 - x - 1");
        tt_string_free(cp);
        let mut holds = 0;
        assert_eq!(tt_map_fold_bound(m, &mut holds), TtStatus::Ok);
        assert_eq!(holds, 1);
        let mut js = ptr::null_mut();
        assert_eq!(tt_map_analyze_json(m, &mut js), TtStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(js).to_str().unwrap()).unwrap();
        assert_eq!(v["weights"], serde_json::json!([1]));
        tt_string_free(js);
        tt_map_free(m);
        tt_document_free(d);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("graph G\nvertex v\nedge a : v -> w\nendgraph\n").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { tt_document_parse(bad.as_ptr(), &mut d) }, TtStatus::Parse);
    assert!(d.is_null());
    assert!(last_error().contains("3:"), "{}", last_error());

    assert_eq!(unsafe { tt_document_parse(ptr::null(), &mut d) }, TtStatus::NullPointer);
    let mut n = 0usize;
    assert_eq!(unsafe { tt_map_edge_count(ptr::null(), &mut n) }, TtStatus::NullPointer);

    let d = doc(G);
    let name = CString::new("nope").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { tt_document_map(d, name.as_ptr(), &mut m) }, TtStatus::NotFound);
    unsafe { tt_document_free(d) };

    let perm = doc(include_str!("../../core/tests/corpus/rose3_permutation.tt"));
    unsafe {
        assert_eq!(tt_document_map(perm, ptr::null(), &mut m), TtStatus::Ok);
        assert_eq!(tt_map_stack_count(m, &mut n), TtStatus::Hypothesis);
        assert_eq!(tt_map_fold_count(m, &mut n), TtStatus::Ok);
        assert_eq!(n, 0);
        tt_map_free(m);
        tt_document_free(perm);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ttmaps.h")).unwrap();
    for f in ["tt_document_parse", "tt_map_stretch_factor", "tt_last_error", "TT_STATUS_PARSE", "typedef struct TtMap"] {
        assert!(h.contains(f), "{f} missing from header");
    }
    assert!(unsafe { CStr::from_ptr(tt_version()) }.to_str().unwrap().starts_with("0."));
}
