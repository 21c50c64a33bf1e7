//! C ABI over `ttmaps`. Documents and maps are opaque handles; every call
//! returns a [`TtStatus`] and writes results through out-pointers. The message
//! for the most recent failure on the calling thread is available from
//! [`tt_last_error`]. Strings returned to the caller are freed with
//! [`tt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ttmaps::format::{parse, Document};
use ttmaps::graph::GraphMap;
use ttmaps::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidMap = 4,
    Hypothesis = 5,
    Decomposition = 6,
    Argument = 7,
    NotFound = 8,
    Budget = 9,
    Internal = 10,
    Panic = 11,
}

/// A parsed document.
pub struct TtDocument(Document);

/// A self map together with its graph.
pub struct TtMap(GraphMap);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> TtStatus {
    match e {
        Error::Parse { .. } => TtStatus::Parse,
        Error::InvalidMap(_) | Error::DomainMismatch(_) | Error::NotSelfMap | Error::InvalidFold(_) => {
            TtStatus::InvalidMap
        }
        Error::Hypothesis(_) => TtStatus::Hypothesis,
        Error::Decomposition(_) => TtStatus::Decomposition,
        Error::Argument(_) | Error::Io(_) | Error::Json(_) => TtStatus::Argument,
        Error::Budget(_) => TtStatus::Budget,
        Error::Internal(_) => TtStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TtStatus>) -> TtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TtStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside ttmaps");
            TtStatus::Panic
        }
    }
}

fn lib<T>(r: ttmaps::Result<T>) -> Result<T, TtStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, TtStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(TtStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        TtStatus::InvalidUtf8
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, TtStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        TtStatus::NullPointer
    })
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), TtStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(TtStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failure on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn tt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses document text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_document_parse(text: *const c_char, out: *mut *mut TtDocument) -> TtStatus {
    guard(|| {
        let t = str_arg(text)?;
        let d = lib(parse(t))?;
        write(out, Box::into_raw(Box::new(TtDocument(d))))
    })
}

/// # Safety
/// `doc` must come from [`tt_document_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn tt_document_free(doc: *mut TtDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_document_map_count(doc: *const TtDocument, out: *mut usize) -> TtStatus {
    guard(|| write(out, handle(doc)?.0.maps.len()))
}

/// Copies out the map called `name`, or the only map when `name` is null.
///
/// # Safety
/// `doc` must be a live handle, `name` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tt_document_map(
    doc: *const TtDocument,
    name: *const c_char,
    out: *mut *mut TtMap,
) -> TtStatus {
    guard(|| {
        let d = &handle(doc)?.0;
        let m = if name.is_null() {
            match d.maps.as_slice() {
                [(_, _, m)] => m.clone(),
                _ => {
                    set_error("document does not hold exactly one map");
                    return Err(TtStatus::NotFound);
                }
            }
        } else {
            let n = str_arg(name)?;
            match d.map(n) {
                Some(m) => m.clone(),
                None => {
                    set_error(format!("no map named {n}"));
                    return Err(TtStatus::NotFound);
                }
            }
        };
        write(out, Box::into_raw(Box::new(TtMap(m))))
    })
}

/// # Safety
/// `map` must come from [`tt_document_map`] or be null.
#[no_mangle]
pub unsafe extern "C" fn tt_map_free(map: *mut TtMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_edge_count(map: *const TtMap, out: *mut usize) -> TtStatus {
    guard(|| write(out, handle(map)?.0.domain.num_edges()))
}

/// Folds in the deterministic decomposition.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_fold_count(map: *const TtMap, out: *mut usize) -> TtStatus {
    guard(|| {
        let d = lib(ttmaps::folds::decompose(&handle(map)?.0))?;
        write(out, d.m())
    })
}

/// Leading eigenvalue: an isolating interval of width at most 2^-40 and the
/// characteristic polynomial as text (free with [`tt_string_free`]).
/// `char_poly` may be null.
///
/// # Safety
/// `map` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_stretch_factor(
    map: *const TtMap,
    lo: *mut f64,
    hi: *mut f64,
    char_poly: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        let f = &handle(map)?.0;
        let t = lib(ttmaps::spectral::transition_matrix(f, None))?;
        let v = ttmaps::spectral::leading_eigenvalue(&t, &ttmaps::spectral::default_precision());
        write(lo, ttmaps::poly::rat_to_f64(v.lo()))?;
        write(hi, ttmaps::poly::rat_to_f64(v.hi()))?;
        if !char_poly.is_null() {
            char_poly.write(c_string(v.char_poly.to_string()));
        }
        Ok(())
    })
}

/// Decides `λ^n ≥ m + 1` exactly; `holds` receives 1 or 0.
///
/// # Safety
/// `map` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_fold_bound(map: *const TtMap, holds: *mut i32) -> TtStatus {
    guard(|| {
        let c = lib(ttmaps::stacks::theorem_a_check(&handle(map)?.0))?;
        write(holds, c.holds as i32)
    })
}

/// Stack count of an expanding irreducible map.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_stack_count(map: *const TtMap, out: *mut usize) -> TtStatus {
    guard(|| {
        let p = lib(ttmaps::stacks::stack_partition(&handle(map)?.0))?;
        write(out, p.stacks.len())
    })
}

/// The `analyze` report as one JSON object (free with [`tt_string_free`]).
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tt_map_analyze_json(map: *const TtMap, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        let r = lib(ttmaps::cli::analyze(&handle(map)?.0))?;
        let payload = r
            .records
            .into_iter()
            .next()
            .map(|(_, p)| p)
            .unwrap_or(serde_json::Value::Null);
        write(out, c_string(payload.to_string()))
    })
}
