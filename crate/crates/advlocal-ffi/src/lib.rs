//! C ABI over `advlocal`. Graphs and reports are opaque handles released
//! with their `_free` function. Every fallible call returns an `i32` status
//! (`ADV_OK` or one of the codes below); on failure the message is
//! available from `adv_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use advlocal::experiment::{self, Report, SchemaParams};
use advlocal::gen::generate;
use advlocal::io::{read_advice, read_graph, write_advice};
use advlocal::{Error, Graph};

pub const ADV_OK: i32 = 0;
pub const ADV_ERR_INVALID_PARAMS: i32 = 1;
pub const ADV_ERR_INFEASIBLE: i32 = 2;
/// Decoding, search or verification failed.
pub const ADV_ERR_FAILED: i32 = 3;
pub const ADV_ERR_PARSE: i32 = 4;
pub const ADV_ERR_NULL: i32 = -1;
pub const ADV_ERR_PANIC: i32 = -2;

pub struct AdvGraph {
    graph: Graph,
    planted: Option<Vec<u32>>,
}

pub struct AdvReport {
    report: Report,
    json: CString,
    advice: Option<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(e: &Error) -> i32 {
    set_error(&e.to_string());
    e.exit_code()
}

/// Runs `f` with panics turned into `ADV_ERR_PANIC`.
fn guard(f: impl FnOnce() -> i32) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            ADV_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, i32> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(ADV_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        ADV_ERR_PARSE
    })
}

unsafe fn params_arg(p: *const c_char) -> Result<SchemaParams, i32> {
    if p.is_null() {
        return Ok(SchemaParams::default());
    }
    let text = str_arg(p, "params")?;
    serde_json::from_str(text).map_err(|e| fail(&Error::Parse(format!("params: {e}"))))
}

fn boxed_report(report: Report, advice: Option<String>, out: *mut *mut AdvReport) -> i32 {
    let code = report.exit_code();
    if let Some(f) = &report.failure {
        set_error(&f.message);
    }
    let json = CString::new(report.to_json()).expect("json has no nul");
    let advice = advice.map(|a| CString::new(a).expect("advice has no nul"));
    unsafe { *out = Box::into_raw(Box::new(AdvReport { report, json, advice })) };
    code
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn adv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Generates a graph, e.g. kind "grid2d" with params {10, 10}.
///
/// # Safety
/// `kind` is a nul-terminated string, `params` points to `n_params`
/// values (or is null when `n_params` is 0), `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn adv_graph_generate(
    kind: *const c_char,
    params: *const size_t,
    n_params: size_t,
    seed: u64,
    id_exponent: u32,
    out: *mut *mut AdvGraph,
) -> i32 {
    guard(|| {
        if out.is_null() || (params.is_null() && n_params > 0) {
            set_error("null argument");
            return ADV_ERR_NULL;
        }
        let kind = match str_arg(kind, "kind") {
            Ok(k) => k,
            Err(c) => return c,
        };
        let params: &[usize] = if n_params == 0 { &[] } else { std::slice::from_raw_parts(params, n_params) };
        match kind.parse().and_then(|k| generate(k, params, seed, id_exponent)) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(AdvGraph { graph: g.graph, planted: g.planted }));
                ADV_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Parses a graph in the text format of the command line tool.
///
/// # Safety
/// `text` is a nul-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn adv_graph_parse(text: *const c_char, out: *mut *mut AdvGraph) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return ADV_ERR_NULL;
        }
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(c) => return c,
        };
        match read_graph(text) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(AdvGraph { graph, planted: None }));
                ADV_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `g` is null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn adv_graph_node_count(g: *const AdvGraph) -> size_t {
    g.as_ref().map_or(0, |g| g.graph.n())
}

/// # Safety
/// `g` is null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn adv_graph_edge_count(g: *const AdvGraph) -> size_t {
    g.as_ref().map_or(0, |g| g.graph.m())
}

/// # Safety
/// `g` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adv_graph_free(g: *mut AdvGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Encodes, decodes and verifies `schema` on `g`. Returns the report's exit
/// code; `*out` receives a report whenever the return value is not
/// negative. `params_json` may be null.
///
/// # Safety
/// `g` is a live handle, strings are nul-terminated, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn adv_run(
    g: *const AdvGraph,
    schema: *const c_char,
    params_json: *const c_char,
    seed: u64,
    out: *mut *mut AdvReport,
) -> i32 {
    guard(|| {
        let Some(g) = g.as_ref() else {
            set_error("graph is null");
            return ADV_ERR_NULL;
        };
        if out.is_null() {
            set_error("out is null");
            return ADV_ERR_NULL;
        }
        let schema = match str_arg(schema, "schema") {
            Ok(s) => s,
            Err(c) => return c,
        };
        let params = match params_arg(params_json) {
            Ok(p) => p,
            Err(c) => return c,
        };
        let (report, advice) = experiment::run_on_graph(&g.graph, g.planted.clone(), schema, &params, seed);
        let advice = advice.map(|a| write_advice(&g.graph, &a.bits));
        boxed_report(report, advice, out)
    })
}

/// Decodes supplied advice (`id bits` lines) and checks every node.
///
/// # Safety
/// As for [`adv_run`]; `advice` is a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn adv_verify(
    g: *const AdvGraph,
    advice: *const c_char,
    schema: *const c_char,
    params_json: *const c_char,
    seed: u64,
    out: *mut *mut AdvReport,
) -> i32 {
    guard(|| {
        let Some(g) = g.as_ref() else {
            set_error("graph is null");
            return ADV_ERR_NULL;
        };
        if out.is_null() {
            set_error("out is null");
            return ADV_ERR_NULL;
        }
        let (advice, schema) = match (str_arg(advice, "advice"), str_arg(schema, "schema")) {
            (Ok(a), Ok(s)) => (a, s),
            (Err(c), _) | (_, Err(c)) => return c,
        };
        let params = match params_arg(params_json) {
            Ok(p) => p,
            Err(c) => return c,
        };
        let bits = match read_advice(&g.graph, advice) {
            Ok(b) => b,
            Err(e) => return fail(&e),
        };
        let report = experiment::verify(&g.graph, &bits, schema, &params, seed);
        boxed_report(report, None, out)
    })
}

/// The report as JSON, owned by the report.
///
/// # Safety
/// `r` is null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn adv_report_json(r: *const AdvReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Encoded advice as `id bits` lines, or null when encoding failed or the
/// report came from `adv_verify`. Owned by the report.
///
/// # Safety
/// `r` is null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn adv_report_advice(r: *const AdvReport) -> *const c_char {
    r.as_ref().and_then(|r| r.advice.as_ref()).map_or(ptr::null(), |a| a.as_ptr())
}

/// 1 on pass, 0 on fail, `ADV_ERR_NULL` for a null handle.
///
/// # Safety
/// `r` is null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn adv_report_passed(r: *const AdvReport) -> i32 {
    r.as_ref().map_or(ADV_ERR_NULL, |r| r.report.passed() as i32)
}

/// # Safety
/// `r` is null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn adv_report_exit_code(r: *const AdvReport) -> i32 {
    r.as_ref().map_or(ADV_ERR_NULL, |r| r.report.exit_code())
}

/// # Safety
/// `r` is null or a report handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adv_report_free(r: *mut AdvReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
