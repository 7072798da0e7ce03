//! C ABI over `affbound`.
//!
//! Every function returns an [`AbStatus`]; results go through out-pointers.
//! On failure a message is available from [`ab_last_error`] on the same
//! thread until the next call. Strings handed out by the library are freed
//! with [`ab_string_free`], algebras with [`ab_algebra_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use affbound::boundedness::check_bounded_by;
use affbound::io::parse_algebra;
use affbound::translation::induced_map;
use affbound::{
    congruence_lattice, is_simple, minimal_bound, parse_builtin_spec, parse_term,
    principal_congruence, translation_monoid, Error, FiniteAlgebra,
};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed algebra file, term or builtin name.
    InvalidInput = 3,
    OutOfRange = 4,
    /// A search would exceed its budget or a hard limit.
    LimitExceeded = 5,
    /// The algebra does not satisfy the laws the operation needs.
    Precondition = 6,
    /// An output buffer is too small.
    BufferTooSmall = 7,
    /// A panic was caught at the boundary.
    Internal = 8,
}

/// Opaque handle to a finite algebra.
pub struct AbAlgebra {
    inner: FiniteAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> AbStatus {
    match e {
        Error::ElementOutOfRange { .. } => AbStatus::OutOfRange,
        Error::LimitExceeded(_) | Error::BudgetExceeded { .. } => AbStatus::LimitExceeded,
        Error::Precondition(_) | Error::NotACongruence => AbStatus::Precondition,
        _ => AbStatus::InvalidInput,
    }
}

/// Runs `f` with panics and library errors mapped to a status.
fn guard(f: impl FnOnce() -> Result<(), AbStatus>) -> AbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal error");
            AbStatus::Internal
        }
    }
}

fn fail(e: Error) -> AbStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> AbStatus {
    set_error(format!("{what} is null"));
    AbStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, AbStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        AbStatus::InvalidUtf8
    })
}

unsafe fn algebra<'a>(a: *const AbAlgebra) -> Result<&'a FiniteAlgebra, AbStatus> {
    a.as_ref().map(|h| &h.inner).ok_or_else(|| null("algebra"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), AbStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

unsafe fn write_buffer(out: *mut usize, len: usize, values: &[usize]) -> Result<(), AbStatus> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < values.len() {
        set_error(format!(
            "buffer holds {len} entries, {} needed",
            values.len()
        ));
        return Err(AbStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn new_handle(out: *mut *mut AbAlgebra, a: FiniteAlgebra) -> Result<(), AbStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(AbAlgebra { inner: a })));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn ab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn ab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an algebra file given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_from_json(
    json: *const c_char,
    out: *mut *mut AbAlgebra,
) -> AbStatus {
    guard(|| {
        let src = str_arg(json, "json")?;
        let loaded = parse_algebra(src).map_err(fail)?;
        new_handle(out, loaded.algebra)
    })
}

/// Builds a catalog algebra from a spec such as `zn_ring:6`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_builtin(
    spec: *const c_char,
    out: *mut *mut AbAlgebra,
) -> AbStatus {
    guard(|| {
        let spec = str_arg(spec, "spec")?;
        new_handle(out, parse_builtin_spec(spec).map_err(fail)?)
    })
}

/// Frees an algebra. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_free(a: *mut AbAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_carrier(a: *const AbAlgebra, out: *mut usize) -> AbStatus {
    guard(|| write(out, algebra(a)?.carrier(), "out"))
}

/// Serializes the algebra as an algebra file. Free the result with
/// [`ab_string_free`].
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_to_json(
    a: *const AbAlgebra,
    out: *mut *mut c_char,
) -> AbStatus {
    guard(|| {
        let text = affbound::io::algebra_to_json(algebra(a)?, None);
        write(out, into_c_string(text), "out")
    })
}

/// Applies the operation named `symbol` to `nargs` elements.
///
/// # Safety
/// `a` must be a live handle, `symbol` NUL-terminated, `args` readable for
/// `nargs` entries (or null when `nargs` is 0) and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_algebra_apply(
    a: *const AbAlgebra,
    symbol: *const c_char,
    args: *const usize,
    nargs: usize,
    out: *mut usize,
) -> AbStatus {
    guard(|| {
        let a = algebra(a)?;
        let name = str_arg(symbol, "symbol")?;
        let args: &[usize] = if nargs == 0 {
            &[]
        } else if args.is_null() {
            return Err(null("args"));
        } else {
            std::slice::from_raw_parts(args, nargs)
        };
        write(out, a.apply_named(name, args).map_err(fail)?, "out")
    })
}

/// Size of the translation monoid.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_monoid_size(a: *const AbAlgebra, out: *mut usize) -> AbStatus {
    guard(|| {
        write(
            out,
            translation_monoid(algebra(a)?).map_err(fail)?.len(),
            "out",
        )
    })
}

/// Map induced by a term in `x`, written to `image` (length at least the
/// carrier size).
///
/// # Safety
/// `a` must be a live handle, `term` NUL-terminated and `image` writable
/// for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn ab_eval_term(
    a: *const AbAlgebra,
    term: *const c_char,
    image: *mut usize,
    len: usize,
) -> AbStatus {
    guard(|| {
        let a = algebra(a)?;
        let t = parse_term(str_arg(term, "term")?, a.signature(), a.carrier()).map_err(fail)?;
        let f = induced_map(a, &t).map_err(fail)?;
        write_buffer(image, len, f.image())
    })
}

/// Affine-boundedness check. `bounded` receives the verdict; if `json` is
/// not null it receives the certificate or the missing maps as JSON.
///
/// # Safety
/// `a` must be a live handle, `bounded` writable, `json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ab_check_bounded_by(
    a: *const AbAlgebra,
    m: usize,
    bounded: *mut bool,
    json: *mut *mut c_char,
) -> AbStatus {
    guard(|| {
        let r = check_bounded_by(algebra(a)?, m).map_err(fail)?;
        write(bounded, r.is_bounded(), "bounded")?;
        if !json.is_null() {
            json.write(into_c_string(
                serde_json::to_string(&r).expect("reports serialize"),
            ));
        }
        Ok(())
    })
}

/// Least bound, with its certificate as JSON if `certificate` is not null.
///
/// # Safety
/// `a` must be a live handle, `m` writable, `certificate` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ab_minimal_bound(
    a: *const AbAlgebra,
    m: *mut usize,
    certificate: *mut *mut c_char,
) -> AbStatus {
    guard(|| {
        let (bound, cert) = minimal_bound(algebra(a)?).map_err(fail)?;
        write(m, bound, "m")?;
        if !certificate.is_null() {
            certificate.write(into_c_string(
                serde_json::to_string(&cert).expect("certificates serialize"),
            ));
        }
        Ok(())
    })
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_is_simple(a: *const AbAlgebra, out: *mut bool) -> AbStatus {
    guard(|| write(out, is_simple(algebra(a)?).map_err(fail)?, "out"))
}

/// Number of congruences (carrier at most 7).
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ab_congruence_count(a: *const AbAlgebra, out: *mut usize) -> AbStatus {
    guard(|| {
        write(
            out,
            congruence_lattice(algebra(a)?).map_err(fail)?.len(),
            "out",
        )
    })
}

/// Least congruence relating `x` and `y`, as block labels (each element's
/// label is the least element of its block).
///
/// # Safety
/// `a` must be a live handle and `labels` writable for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn ab_principal_congruence(
    a: *const AbAlgebra,
    x: usize,
    y: usize,
    labels: *mut usize,
    len: usize,
) -> AbStatus {
    guard(|| {
        let p = principal_congruence(algebra(a)?, x, y).map_err(fail)?;
        write_buffer(labels, len, p.labels())
    })
}
