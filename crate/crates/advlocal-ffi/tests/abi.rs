use std::ffi::{CStr, CString};
use std::ptr;

use advlocal::experiment::Report;
use advlocal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = adv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn cycle(n: usize) -> *mut AdvGraph {
    let mut g = ptr::null_mut();
    let code = unsafe { adv_graph_generate(c("cycle").as_ptr(), [n].as_ptr(), 1, 0, 1, &mut g) };
    assert_eq!(code, ADV_OK);
    g
}

#[test]
fn generate_run_and_read_the_report() {
    let g = cycle(6);
    unsafe {
        assert_eq!(adv_graph_node_count(g), 6);
        assert_eq!(adv_graph_edge_count(g), 6);
        let mut r = ptr::null_mut();
        assert_eq!(adv_run(g, c("orientation").as_ptr(), ptr::null(), 0, &mut r), ADV_OK);
        assert_eq!(adv_report_passed(r), 1);
        assert_eq!(adv_report_exit_code(r), 0);
        let json = CStr::from_ptr(adv_report_json(r)).to_str().unwrap();
        let report = Report::from_json(json).unwrap();
        assert_eq!(report.bits.unwrap().max, 1);
        assert!(!adv_report_advice(r).is_null());
        adv_report_free(r);
        adv_graph_free(g);
    }
}

#[test]
fn run_then_verify_accepts() {
    let g = cycle(50);
    unsafe {
        let mut r = ptr::null_mut();
        let params = c(r#"{"alpha": 16}"#);
        assert_eq!(adv_run(g, c("orientation-variable").as_ptr(), params.as_ptr(), 1, &mut r), ADV_OK);
        let advice = CStr::from_ptr(adv_report_advice(r)).to_owned();
        let mut v = ptr::null_mut();
        assert_eq!(adv_verify(g, advice.as_ptr(), c("orientation-variable").as_ptr(), params.as_ptr(), 1, &mut v), ADV_OK);
        assert_eq!(adv_report_passed(v), 1);
        assert!(adv_report_advice(v).is_null());
        adv_report_free(v);
        adv_report_free(r);
        adv_graph_free(g);
    }
}

#[test]
fn failures_carry_codes_and_messages() {
    let g = cycle(7);
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(adv_run(g, c("nope").as_ptr(), ptr::null(), 0, &mut r), ADV_ERR_INVALID_PARAMS);
        assert!(last_error().contains("unknown schema"));
        assert_eq!(adv_report_passed(r), 0);
        adv_report_free(r);

        let mut r = ptr::null_mut();
        let code = adv_run(g, c("delta-coloring").as_ptr(), ptr::null(), 0, &mut r);
        assert!(code == ADV_ERR_INFEASIBLE || code == ADV_ERR_FAILED);
        adv_report_free(r);

        let mut r = ptr::null_mut();
        assert_eq!(adv_run(g, c("orientation").as_ptr(), c("{oops").as_ptr(), 0, &mut r), ADV_ERR_PARSE);
        assert!(r.is_null());
        adv_graph_free(g);
    }
}

#[test]
fn null_and_bad_input() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(adv_graph_parse(ptr::null(), &mut g), ADV_ERR_NULL);
        assert_eq!(adv_graph_parse(c("not a graph").as_ptr(), &mut g), ADV_ERR_PARSE);
        assert!(!last_error().is_empty());
        assert_eq!(adv_graph_generate(c("hexagon").as_ptr(), ptr::null(), 0, 0, 1, &mut g), ADV_ERR_INVALID_PARAMS);
        assert_eq!(adv_run(ptr::null(), c("orientation").as_ptr(), ptr::null(), 0, &mut ptr::null_mut()), ADV_ERR_NULL);
        assert_eq!(adv_graph_node_count(ptr::null()), 0);
        assert_eq!(adv_report_passed(ptr::null()), ADV_ERR_NULL);
        assert!(adv_report_json(ptr::null()).is_null());
        adv_graph_free(ptr::null_mut());
        adv_report_free(ptr::null_mut());

        assert_eq!(adv_graph_parse(c("3 2 2\n1 2\n2 3\n").as_ptr(), &mut g), ADV_OK);
        assert_eq!(adv_graph_node_count(g), 3);
        adv_graph_free(g);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/advlocal.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12, "{exports:?}");
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    for k in ["ADV_OK", "ADV_ERR_NULL", "ADV_ERR_PANIC", "typedef struct AdvGraph AdvGraph"] {
        assert!(header.contains(k), "{k}");
    }
}
