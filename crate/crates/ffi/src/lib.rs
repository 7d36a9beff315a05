//! C ABI for `kmhomotopy`.
//!
//! Matrices and series are opaque handles owned by the caller and released
//! with the matching `*_free`. Strings returned by the library are
//! NUL-terminated UTF-8 and must be released with [`kmh_string_free`].
//! Every fallible call returns a [`KmhStatus`]; the message for the most
//! recent failure on the calling thread is available from
//! [`kmh_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kmhomotopy::cartan::{CartanError, CartanMatrix, Epsilon};
use kmhomotopy::coefficients::{self, Family, Source};
use kmhomotopy::error::Error;
use kmhomotopy::homotopy::{bg_homotopy_type, rationally_equivalent};
use kmhomotopy::json::{to_canonical_string, SCHEMA};
use kmhomotopy::poincare::SeriesName;
use kmhomotopy::series::TruncatedSeries;
use serde_json::Value;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Verification = 5,
    OutOfRange = 6,
    Panic = 7,
}

pub struct KmhMatrix(CartanMatrix);

pub struct KmhSeries(TruncatedSeries);

/// Classification flags. `epsilon` is -1 when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KmhClassification {
    pub rank: usize,
    pub generic: bool,
    pub symmetrizable: bool,
    pub indecomposable: bool,
    pub epsilon: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: KmhStatus, msg: impl Into<String>) -> KmhStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> KmhStatus {
    match e {
        Error::Cartan(CartanError::RankTooSmall { .. }) => KmhStatus::Domain,
        Error::Cartan(_) => KmhStatus::Parse,
        Error::Series(_) | Error::Domain(_) => KmhStatus::Domain,
        Error::IdentityViolated { .. } => KmhStatus::Verification,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), KmhStatus>) -> KmhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KmhStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(KmhStatus::Panic, "internal panic"),
    }
}

fn lib(e: impl Into<Error>) -> KmhStatus {
    let e = e.into();
    fail(status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, KmhStatus> {
    if p.is_null() {
        return Err(fail(KmhStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KmhStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, KmhStatus> {
    p.as_mut()
        .ok_or_else(|| fail(KmhStatus::NullPointer, "null output pointer"))
}

unsafe fn matrix_arg<'a>(p: *const KmhMatrix) -> Result<&'a CartanMatrix, KmhStatus> {
    p.as_ref()
        .map(|m| &m.0)
        .ok_or_else(|| fail(KmhStatus::NullPointer, "null matrix handle"))
}

fn epsilon_arg(eps: i32) -> Result<Epsilon, KmhStatus> {
    u32::try_from(eps)
        .ok()
        .and_then(Epsilon::from_value)
        .ok_or_else(|| fail(KmhStatus::Domain, format!("epsilon must be 0 or 1, got {eps}")))
}

fn put_string(out: &mut *mut c_char, s: String) -> Result<(), KmhStatus> {
    let c = CString::new(s).map_err(|_| fail(KmhStatus::Panic, "interior NUL in output"))?;
    *out = c.into_raw();
    Ok(())
}

fn with_schema(mut v: Value, command: &str) -> String {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), Value::from(SCHEMA));
        m.insert("command".into(), Value::from(command));
    }
    to_canonical_string(&v)
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kmh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kmh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": .., "entries": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_matrix_from_json(json: *const c_char, out: *mut *mut KmhMatrix) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = CartanMatrix::from_json_str(str_arg(json)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(KmhMatrix(m)));
        Ok(())
    })
}

/// Builds a matrix from `n * n` row-major entries.
///
/// # Safety
/// `entries` must point to `n * n` readable values and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn kmh_matrix_from_entries(
    entries: *const i64,
    n: usize,
    out: *mut *mut KmhMatrix,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        if entries.is_null() {
            return Err(fail(KmhStatus::NullPointer, "null entries"));
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| fail(KmhStatus::OutOfRange, "rank too large"))?;
        let flat = std::slice::from_raw_parts(entries, len);
        let rows: Vec<&[i64]> = if n == 0 { Vec::new() } else { flat.chunks(n).collect() };
        let m = CartanMatrix::from_rows(&rows).map_err(lib)?;
        *out = Box::into_raw(Box::new(KmhMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kmh_matrix_free(m: *mut KmhMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Rank of the matrix, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kmh_matrix_rank(m: *const KmhMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rank())
}

/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_classify(m: *const KmhMatrix, out: *mut KmhClassification) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let r = matrix_arg(m)?.classify();
        *out = KmhClassification {
            rank: r.rank,
            generic: r.generic,
            symmetrizable: r.symmetrizable,
            indecomposable: r.indecomposable,
            epsilon: r.epsilon.map_or(-1, |e| e.value() as i32),
        };
        Ok(())
    })
}

/// Full classification report as JSON.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_classify_json(m: *const KmhMatrix, out: *mut *mut c_char) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let r = matrix_arg(m)?.classify();
        put_string(out, with_schema(r.to_json(), "classify"))
    })
}

/// Computes a named series (`flag`, `chow`, `bg`, `bg-recursive`,
/// `mv-coker`). `epsilon` is ignored for `flag`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_series(
    name: *const c_char,
    n: usize,
    epsilon: i32,
    order: usize,
    out: *mut *mut KmhSeries,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let name: SeriesName = str_arg(name)?.parse().map_err(lib)?;
        let eps = if name.needs_epsilon() {
            Some(epsilon_arg(epsilon)?)
        } else {
            None
        };
        let s = name.compute(n, eps, order).map_err(lib)?;
        *out = Box::into_raw(Box::new(KmhSeries(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kmh_series_free(s: *mut KmhSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Truncation order of the series, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kmh_series_order(s: *const KmhSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.order())
}

/// Coefficient of `q^degree` as a decimal or `p/q` string.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_series_coefficient(
    s: *const KmhSeries,
    degree: usize,
    out: *mut *mut c_char,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let s = s
            .as_ref()
            .ok_or_else(|| fail(KmhStatus::NullPointer, "null series handle"))?;
        let c = s
            .0
            .coefficient(degree)
            .map_err(|e| fail(KmhStatus::OutOfRange, e.to_string()))?;
        put_string(out, c.to_string())
    })
}

/// Coefficient array as a JSON list of strings.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_series_to_json(s: *const KmhSeries, out: *mut *mut c_char) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let s = s
            .as_ref()
            .ok_or_else(|| fail(KmhStatus::NullPointer, "null series handle"))?;
        put_string(out, to_canonical_string(&s.0.to_json()))
    })
}

/// Closed-form generator count `a_{2i}` (family `a`) or `b_{2i}` (family
/// `b`) as a decimal string.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_coefficient(
    family: *const c_char,
    n: usize,
    i: usize,
    out: *mut *mut c_char,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let family: Family = str_arg(family)?.parse().map_err(lib)?;
        let t = coefficients::table(family, Source::ClosedForm, n, i, 2 * i + 1).map_err(lib)?;
        let v = t
            .get(i)
            .ok_or_else(|| fail(KmhStatus::OutOfRange, format!("no coefficient at i = {i}")))?;
        put_string(out, v.to_string())
    })
}

/// Rational homotopy type of BG(A) for `(n, ε)` as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_homotopy_json(
    n: usize,
    epsilon: i32,
    max_degree: usize,
    out: *mut *mut c_char,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        let t = bg_homotopy_type(n, epsilon_arg(epsilon)?, max_degree).map_err(lib)?;
        put_string(out, with_schema(t.to_json(), "homotopy"))
    })
}

/// Writes whether the two groups are rationally equivalent.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kmh_rationally_equivalent(
    a: *const KmhMatrix,
    b: *const KmhMatrix,
    out: *mut bool,
) -> KmhStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = rationally_equivalent(matrix_arg(a)?, matrix_arg(b)?).map_err(lib)?;
        Ok(())
    })
}
