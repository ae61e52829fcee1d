//! C interface to `iecount`.
//!
//! Objects are passed as opaque handles created by `*_parse` / `*_new`
//! functions and released by the matching `*_free`. Every fallible call
//! returns an [`IecStatus`]; on failure [`iec_last_error`] describes the
//! problem. Counts are arbitrary-precision and come back as NUL-terminated
//! decimal strings that the caller releases with [`iec_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use iecount::comp::{count_bounded_compositions, CompSpec};
use iecount::dnf::Formula;
use iecount::engine::ScanOptions;
use iecount::exclusion::{n_algorithm, GeneratorSet};
use iecount::facecount::union_face_numbers;
use iecount::perm::PermProblem;
use iecount::{Error, NRow, RowUnion};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

/// A parsed generator file.
pub struct IecGenerators {
    inner: GeneratorSet,
}

/// A disjoint union of `{0,1,2,n}` rows.
pub struct IecRowUnion {
    inner: RowUnion<NRow>,
}

/// A parsed DNF or CNF file.
pub struct IecFormula {
    inner: Formula,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> IecStatus {
    match e {
        Error::Parse { .. } => IecStatus::ParseError,
        Error::BudgetExceeded(_) => IecStatus::BudgetExceeded,
        Error::Io(_) | Error::CountFn(_) => IecStatus::Internal,
        _ => IecStatus::InvalidInput,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (IecStatus, String)>) -> IecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IecStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IecStatus::Internal
        }
    }
}

fn core<T>(r: iecount::Result<T>) -> Result<T, (IecStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (IecStatus, String)> {
    if p.is_null() {
        return Err((IecStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (IecStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (IecStatus, String)> {
    p.as_ref().ok_or((IecStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (IecStatus, String)> {
    if out.is_null() {
        return Err((IecStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (IecStatus, String)> {
    let c = CString::new(s).map_err(|_| (IecStatus::Internal, "interior NUL".to_string()))?;
    put(out, c.into_raw())
}

/// Message of the last failure on this thread. Owned by the library and
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn iec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn iec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a generator file (`h m` header, then one generator per line).
///
/// # Safety
/// `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_generators_parse(text_ptr: *const c_char, out: *mut *mut IecGenerators) -> IecStatus {
    guard(|| {
        let g = core(GeneratorSet::parse(text(text_ptr)?))?;
        put(out, Box::into_raw(Box::new(IecGenerators { inner: g })))
    })
}

/// # Safety
/// `g` must be null or a live handle from [`iec_generators_parse`].
#[no_mangle]
pub unsafe extern "C" fn iec_generators_free(g: *mut IecGenerators) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of elements `h` of the ground set.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iec_generators_ground_size(g: *const IecGenerators) -> usize {
    g.as_ref().map_or(0, |g| g.inner.h())
}

/// Builds the disjoint row union of all faces containing no generator.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_generators_complex(g: *const IecGenerators, out: *mut *mut IecRowUnion) -> IecStatus {
    guard(|| {
        let rows = n_algorithm(&handle(g)?.inner);
        put(out, Box::into_raw(Box::new(IecRowUnion { inner: rows })))
    })
}

/// # Safety
/// `u` must be null or a live handle from [`iec_generators_complex`].
#[no_mangle]
pub unsafe extern "C" fn iec_rows_free(u: *mut IecRowUnion) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Number of rows in the union.
///
/// # Safety
/// `u` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn iec_rows_len(u: *const IecRowUnion) -> usize {
    u.as_ref().map_or(0, |u| u.inner.len())
}

/// Number of `k`-element faces, as a decimal string.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_rows_face_count(u: *const IecRowUnion, k: usize, out: *mut *mut c_char) -> IecStatus {
    guard(|| {
        let f = union_face_numbers(&handle(u)?.inner);
        put_string(out, f.get(k).to_string())
    })
}

/// Total number of faces, as a decimal string.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_rows_total(u: *const IecRowUnion, out: *mut *mut c_char) -> IecStatus {
    guard(|| put_string(out, handle(u)?.inner.cardinality().to_string()))
}

/// The rows in text form, one per line.
///
/// # Safety
/// `u` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_rows_to_string(u: *const IecRowUnion, out: *mut *mut c_char) -> IecStatus {
    guard(|| put_string(out, handle(u)?.inner.to_string()))
}

/// Parses a `p dnf n h` or `p cnf n h` file.
///
/// # Safety
/// `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_formula_parse(text_ptr: *const c_char, out: *mut *mut IecFormula) -> IecStatus {
    guard(|| {
        let f = core(Formula::parse(text(text_ptr)?))?;
        put(out, Box::into_raw(Box::new(IecFormula { inner: f })))
    })
}

/// # Safety
/// `f` must be null or a live handle from [`iec_formula_parse`].
#[no_mangle]
pub unsafe extern "C" fn iec_formula_free(f: *mut IecFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of models, as a decimal string.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_formula_model_count(f: *const IecFormula, out: *mut *mut c_char) -> IecStatus {
    guard(|| {
        let n = core(handle(f)?.inner.model_count(ScanOptions::default()))?;
        put_string(out, n.to_string())
    })
}

/// Number of models with exactly `k` true variables.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_formula_model_count_k(f: *const IecFormula, k: usize, out: *mut *mut c_char) -> IecStatus {
    guard(|| {
        let n = core(handle(f)?.inner.model_count_fixed_k(k, ScanOptions::default()))?;
        put_string(out, n.to_string())
    })
}

/// Solutions of `u_1 + .. + u_h = t` with `0 <= u_i < a_i`; `bounds` is a
/// comma-separated list and `target` a decimal integer.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_count_compositions(
    bounds: *const c_char,
    target: *const c_char,
    out: *mut *mut c_char,
) -> IecStatus {
    guard(|| {
        let spec = core(CompSpec::parse(text(bounds)?, text(target)?))?;
        put_string(out, count_bounded_compositions(&spec).to_string())
    })
}

/// Counts a permutation problem given in the `perm n` / `maps n m` format.
///
/// # Safety
/// `text_ptr` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn iec_count_permutations(text_ptr: *const c_char, out: *mut *mut c_char) -> IecStatus {
    guard(|| {
        let p = core(PermProblem::parse(text(text_ptr)?))?;
        put_string(out, core(p.count())?.to_string())
    })
}
