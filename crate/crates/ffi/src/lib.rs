//! C interface to the turncost solvers.
//!
//! Every function returns a [`TcStatus`]. Strings handed out by the library
//! must be released with [`tc_string_free`]; instances with
//! [`tc_instance_free`]. After a failure, [`tc_last_error_message`] gives
//! a description that stays valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use turncost::cli::{solve_file, CliError, MethodChoice, EXIT_INPUT, EXIT_LIMIT, EXIT_NO};
use turncost::exact::zero_cost::ZeroCostOptions;
use turncost::exact::SolveOptions;
use turncost::io::{emit_circuit, emit_gadget, parse_graph, GraphFile};
use turncost::model::Rational;
use turncost::sat::{build_gadget, normalize_mod4, parse_cnf};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    /// A decision came out negative, or no circuit of the requested kind exists.
    No = 1,
    InputError = 2,
    ResourceLimit = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcMethod {
    Auto = 0,
    Oracle = 1,
    Tsp = 2,
    TspContracted = 3,
    ZeroCost = 4,
    Atrail = 5,
}

impl From<TcMethod> for MethodChoice {
    fn from(m: TcMethod) -> Self {
        match m {
            TcMethod::Auto => MethodChoice::Auto,
            TcMethod::Oracle => MethodChoice::Oracle,
            TcMethod::Tsp => MethodChoice::Tsp,
            TcMethod::TspContracted => MethodChoice::TspContracted,
            TcMethod::ZeroCost => MethodChoice::Zerocost,
            TcMethod::Atrail => MethodChoice::Atrail,
        }
    }
}

/// A parsed graph file.
pub struct TcInstance {
    file: GraphFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TcStatus, message: &str) -> TcStatus {
    set_error(message);
    status
}

fn from_cli(e: CliError) -> TcStatus {
    let status = match e.code() {
        EXIT_NO => TcStatus::No,
        EXIT_INPUT => TcStatus::InputError,
        EXIT_LIMIT => TcStatus::ResourceLimit,
        _ => TcStatus::Internal,
    };
    fail(status, e.message())
}

/// Runs `f`, turning panics into [`TcStatus::Internal`].
fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(TcStatus::Internal, &format!("internal error: {msg}"))
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, TcStatus> {
    if s.is_null() {
        return Err(fail(TcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(TcStatus::InputError, "input is not valid UTF-8"))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn hand_out(out: *mut *mut c_char, s: String) {
    if !out.is_null() {
        *out = CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut());
    }
}

/// Parses a graph file. On success `*out` owns a new instance.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_parse(text: *const c_char, out: *mut *mut TcInstance) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match c_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match parse_graph(s) {
            Ok(file) => {
                *out = Box::into_raw(Box::new(TcInstance { file }));
                TcStatus::Ok
            }
            Err(e) => fail(TcStatus::InputError, &e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be null or come from [`tc_instance_parse`] and not be freed
/// already.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_free(inst: *mut TcInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live instance or null.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_vertex_count(inst: *const TcInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.file.graph.vertex_count())
}

/// # Safety
/// `inst` must be a live instance or null.
#[no_mangle]
pub unsafe extern "C" fn tc_instance_edge_count(inst: *const TcInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.file.graph.edge_count())
}

/// Minimum cost as `p/q` in `*cost_out`; if `circuit_out` is not null it
/// receives the witness in circuit-file format. `bitmask_limit` of 0 means
/// the default.
///
/// # Safety
/// `inst` must be a live instance; the output pointers must be valid or
/// (for `circuit_out`) null.
#[no_mangle]
pub unsafe extern "C" fn tc_solve(
    inst: *const TcInstance,
    method: TcMethod,
    bitmask_limit: usize,
    cost_out: *mut *mut c_char,
    circuit_out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(TcStatus::NullPointer, "null instance");
        };
        if cost_out.is_null() {
            return fail(TcStatus::NullPointer, "null cost output");
        }
        *cost_out = ptr::null_mut();
        if !circuit_out.is_null() {
            *circuit_out = ptr::null_mut();
        }
        let mut options = SolveOptions::default();
        if bitmask_limit > 0 {
            options.bitmask_limit = bitmask_limit;
        }
        match solve_file(&inst.file, method.into(), &options, ZeroCostOptions::default()) {
            Ok(r) => {
                hand_out(cost_out, r.cost.to_string());
                hand_out(circuit_out, emit_circuit(&inst.file.name, &inst.file.graph, &r.circuit));
                TcStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// [`TcStatus::Ok`] if some circuit costs at most `budget` (`p/q`),
/// [`TcStatus::No`] otherwise.
///
/// # Safety
/// `inst` must be a live instance and `budget` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tc_decide(inst: *const TcInstance, budget: *const c_char) -> TcStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(TcStatus::NullPointer, "null instance");
        };
        let budget: Rational = match c_str(budget).map(str::parse) {
            Ok(Ok(b)) => b,
            Ok(Err(e)) => return fail(TcStatus::InputError, &format!("budget: {e}")),
            Err(status) => return status,
        };
        match solve_file(&inst.file, MethodChoice::Auto, &SolveOptions::default(), ZeroCostOptions::default()) {
            Ok(r) if r.cost <= budget => TcStatus::Ok,
            Ok(r) => fail(TcStatus::No, &format!("minimum cost {} exceeds {budget}", r.cost)),
            Err(e) => from_cli(e),
        }
    })
}

/// Builds the gadget graph of a DIMACS 3-CNF formula and writes it to
/// `*graph_out` in graph-file format.
///
/// # Safety
/// `cnf` must be a NUL-terminated string and `graph_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_gadget_from_cnf(
    cnf: *const c_char,
    normalize_mod4_flag: bool,
    graph_out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        if graph_out.is_null() {
            return fail(TcStatus::NullPointer, "null output pointer");
        }
        *graph_out = ptr::null_mut();
        let s = match c_str(cnf) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let formula = match parse_cnf(s) {
            Ok(f) => f,
            Err(e) => return fail(TcStatus::InputError, &e.to_string()),
        };
        let mut g = build_gadget(&formula);
        if normalize_mod4_flag {
            g = normalize_mod4(&g);
        }
        hand_out(graph_out, emit_gadget(&g));
        TcStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
