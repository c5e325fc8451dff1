//! C ABI over `qgraph`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns a [`QgStatus`]; on failure the message is available
//! from [`qg_last_error`] on the same thread. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`qg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qgraph::ck::{self, CKFamily};
use qgraph::graph::{build_pi_graph, build_relation_graph, DirectedGraph};
use qgraph::hopf;
use qgraph::Error;
use serde::Serialize;

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    /// The check ran and at least one verdict failed; the report is still written.
    VerificationFailed = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    InvalidArgument = 4,
    /// The operation needs a finite backing or a tensor-square target.
    Unsupported = 5,
    Internal = 6,
}

/// Opaque directed graph.
pub struct QgGraph(DirectedGraph);

/// Opaque Cuntz-Krieger family.
pub struct QgFamily(CKFamily);

const DEFAULT_DIM: usize = 600;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: QgStatus, msg: impl Into<String>) -> QgStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> QgStatus {
    let status = match e {
        Error::TruncatedBacking | Error::TargetMismatch { .. } => QgStatus::Unsupported,
        _ => QgStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> QgStatus) -> QgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QgStatus::Internal, "panic inside qgraph"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QgStatus> {
    if s.is_null() {
        return Err(fail(QgStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(QgStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> QgStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QgStatus::Ok
        }
        Err(_) => fail(QgStatus::Internal, "output contains NUL"),
    }
}

unsafe fn write_json<T: Serialize>(out: *mut *mut c_char, v: &T) -> QgStatus {
    match serde_json::to_string(v) {
        Ok(s) => write_string(out, s),
        Err(e) => fail(QgStatus::Internal, e.to_string()),
    }
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> QgStatus {
    *out = Box::into_raw(Box::new(v));
    QgStatus::Ok
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn qg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Relation graph of the quantum `n x n` matrix relations.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_relation(n: usize, out: *mut *mut QgGraph) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return fail(QgStatus::NullPointer, "out is null");
        }
        match build_relation_graph(n) {
            Ok(g) => put_handle(out, QgGraph(g)),
            Err(e) => from_error(e),
        }
    })
}

/// Graph of the transpose involution on `n x n` generators.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_pi(n: usize, out: *mut *mut QgGraph) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return fail(QgStatus::NullPointer, "out is null");
        }
        match build_pi_graph(n) {
            Ok(g) => put_handle(out, QgGraph(g)),
            Err(e) => from_error(e),
        }
    })
}

/// Line graph of `g` as a new handle.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_line(g: *const QgGraph, out: *mut *mut QgGraph) -> QgStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        put_handle(out, QgGraph((*g).0.line_graph()))
    })
}

/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_vertex_count(g: *const QgGraph, out: *mut usize) -> QgStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        *out = (*g).0.vertex_count();
        QgStatus::Ok
    })
}

/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_edge_count(g: *const QgGraph, out: *mut usize) -> QgStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        *out = (*g).0.edge_count();
        QgStatus::Ok
    })
}

/// Graph as JSON (`schema`, `n`, `vertices`, `edges`).
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_json(g: *const QgGraph, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        write_json(out, &(*g).0.to_json())
    })
}

/// Graph in Graphviz DOT syntax.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_dot(g: *const QgGraph, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        write_string(out, (*g).0.to_dot())
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qg_graph_free(g: *mut QgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

fn build_family(name: &str, n: usize, dim: usize, margin: Option<usize>) -> qgraph::Result<CKFamily> {
    match name {
        "pi2-finite" => ck::pi2_finite(),
        "pi2-inf" => ck::pi2_infinite(dim, margin),
        "Pi2-inf" => ck::relation2_infinite(dim, margin),
        "pin-finite" => ck::pi_n_finite(n),
        "pin-inf" => ck::pi_n_infinite(n, dim, margin),
        "claim" => {
            let params = if n == 2 { ck::relation2_claim_params()? } else { ck::sample_claim_params(n, 0)? };
            ck::relation_claim(n, &params, dim, margin)
        }
        other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
    }
}

/// Builds a named family: `pi2-finite`, `pi2-inf`, `Pi2-inf`, `pin-finite`,
/// `pin-inf` or `claim`. `dim = 0` selects 600; `margin = 0` selects the
/// largest pattern stride. `n` is ignored by the `n = 2` families.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_family_new(
    name: *const c_char,
    n: usize,
    dim: usize,
    margin: usize,
    out: *mut *mut QgFamily,
) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return fail(QgStatus::NullPointer, "out is null");
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let dim = if dim == 0 { DEFAULT_DIM } else { dim };
        let margin = (margin != 0).then_some(margin);
        match build_family(name, n, dim, margin) {
            Ok(f) => put_handle(out, QgFamily(f)),
            Err(e) => from_error(e),
        }
    })
}

/// Matrix size of the family's backing.
///
/// # Safety
/// `f` must be a live family handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_family_dim(f: *const QgFamily, out: *mut usize) -> QgStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        *out = (*f).0.backing.dim();
        QgStatus::Ok
    })
}

/// Verifies the Cuntz-Krieger relations and writes the JSON report.
/// Returns `VerificationFailed` with the report written when a verdict fails.
///
/// # Safety
/// `f` must be a live family handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_family_verify(f: *const QgFamily, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        match ck::verify_ck(&(*f).0) {
            Ok(r) => match write_json(out, &r) {
                QgStatus::Ok if !r.passed => fail(
                    QgStatus::VerificationFailed,
                    r.failures().map(|v| v.subject.as_str()).collect::<Vec<_>>().join("; "),
                ),
                s => s,
            },
            Err(e) => from_error(e),
        }
    })
}

/// Dimension of the *-algebra generated by a finite family.
///
/// # Safety
/// `f` must be a live family handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_family_closure_dim(f: *const QgFamily, out: *mut usize) -> QgStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(QgStatus::NullPointer, "null argument");
        }
        match ck::generated_dimension(&(*f).0) {
            Ok((d, _)) => {
                *out = d;
                QgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `f` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qg_family_free(f: *mut QgFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Runs the Hopf-axiom suite on a model (`sd`, `group-ring`, `cyclic` with
/// parameter `d`, or `literal` with matrix size `d`) and writes the JSON report.
///
/// # Safety
/// `model` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_hopf_check(model: *const c_char, d: usize, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        if out.is_null() {
            return fail(QgStatus::NullPointer, "out is null");
        }
        let model = match read_str(model) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let c = match model {
            "sd" => hopf::std_model(d),
            "group-ring" => hopf::group_ring_model(d),
            "cyclic" => hopf::cyclic_group_model(d),
            "literal" => hopf::literal_delta(d),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        };
        let c = match c {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        let r = hopf::check_axioms(&c);
        match write_json(out, &r) {
            QgStatus::Ok if !r.passed => fail(QgStatus::VerificationFailed, "axiom suite failed"),
            s => s,
        }
    })
}
