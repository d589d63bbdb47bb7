//! C ABI for `redorb`. Objects cross the boundary as opaque handles created
//! by `*_new` functions and released by the matching `*_free`. Every fallible
//! call returns a status code: `REDORB_OK`, a library error code (see
//! `redorb_status_name`), or one of the negative codes below. The message of
//! the most recent failure on the calling thread is available from
//! `redorb_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use redorb::exactmath::{format_rational, Integers, MonicPoly};
use redorb::local::FamilySpec;
use redorb::Error;

pub const REDORB_OK: i32 = 0;
/// A required pointer argument was null.
pub const REDORB_ERR_NULL: i32 = -1;
/// A string argument was not valid UTF-8.
pub const REDORB_ERR_UTF8: i32 = -2;
/// The library panicked; the handle arguments should be considered invalid.
pub const REDORB_ERR_PANIC: i32 = -3;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => REDORB_OK,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic".into());
            REDORB_ERR_PANIC
        }
    }
}

fn lib_err(e: Error) -> i32 {
    let code = e.code();
    set_error(e.to_string());
    code
}

fn null_err(what: &str) -> i32 {
    set_error(format!("{what} is null"));
    REDORB_ERR_NULL
}

/// A monic integer polynomial `x^n + f_1 x^(n-1) + ... + f_n`.
pub struct RedorbPoly(MonicPoly<Integers>);

/// A family of congruence conditions.
pub struct RedorbFamily(FamilySpec);

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn redorb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn redorb_status_name(code: i32) -> *const c_char {
    let s: &'static [u8] = match code {
        REDORB_OK => b"ok\0",
        REDORB_ERR_NULL => b"null argument\0",
        REDORB_ERR_UTF8 => b"invalid utf-8\0",
        REDORB_ERR_PANIC => b"panic\0",
        1 => b"degenerate input\0",
        2 => b"ring too small\0",
        3 => b"length mismatch\0",
        4 => b"halving error\0",
        5 => b"not a square\0",
        6 => b"index error\0",
        7 => b"non-unit discriminant\0",
        8 => b"zero slice entry\0",
        9 => b"box too large\0",
        10 => b"level too deep\0",
        11 => b"stabilization failure\0",
        12 => b"instance too large\0",
        13 => b"factorization timeout\0",
        14 => b"invalid parity\0",
        15 => b"not invertible\0",
        16 => b"not in group\0",
        17 => b"ring mismatch\0",
        18 => b"parse error\0",
        19 => b"usage error\0",
        20 => b"i/o error\0",
        _ => b"unknown\0",
    };
    s.as_ptr() as *const c_char
}

/// Create a polynomial from `n` coefficients `f_1..f_n`.
///
/// # Safety
/// `coeffs` must point to `n` readable `int64_t` values and `out` to a
/// writable handle slot. On success `*out` owns a handle to be released with
/// `redorb_poly_free`.
#[no_mangle]
pub unsafe extern "C" fn redorb_poly_new(coeffs: *const i64, n: usize, out: *mut *mut RedorbPoly) -> i32 {
    guard(|| {
        if coeffs.is_null() {
            return Err(null_err("coeffs"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let c = std::slice::from_raw_parts(coeffs, n);
        let f = MonicPoly::new(Integers, c.iter().map(|x| BigInt::from(*x)).collect()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(RedorbPoly(f)));
        Ok(())
    })
}

/// Release a polynomial handle. Null is ignored.
///
/// # Safety
/// `poly` must be null or a handle from `redorb_poly_new` not freed before.
#[no_mangle]
pub unsafe extern "C" fn redorb_poly_free(poly: *mut RedorbPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree of a polynomial, or 0 for null.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn redorb_poly_degree(poly: *const RedorbPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.0.n())
}

/// Number of `P(Z_p)`-orbits on `W0(Z_p)` with invariant `poly`.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn redorb_orbit_count_local(poly: *const RedorbPoly, p: u64, out: *mut u64) -> i32 {
    guard(|| {
        let poly = poly.as_ref().ok_or_else(|| null_err("poly"))?;
        let out = out.as_mut().ok_or_else(|| null_err("out"))?;
        if !redorb::exactmath::is_prime(p) {
            return Err(lib_err(Error::Usage(format!("{p} is not prime"))));
        }
        *out = redorb::local::orbit_count_local(&poly.0, p).map_err(lib_err)?;
        Ok(())
    })
}

/// Number of `P(Z)`-orbits on `W0(Z)` with invariant `poly`, restricted by
/// `family` when it is non-null.
///
/// # Safety
/// `poly` must be a live handle, `family` null or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn redorb_orbit_count_global(
    poly: *const RedorbPoly,
    family: *const RedorbFamily,
    out: *mut u64,
) -> i32 {
    guard(|| {
        let poly = poly.as_ref().ok_or_else(|| null_err("poly"))?;
        let out = out.as_mut().ok_or_else(|| null_err("out"))?;
        let n = poly.0.n();
        let full = FamilySpec::full(n);
        let fam = family.as_ref().map_or(&full, |f| &f.0);
        let c: Vec<i64> = poly
            .0
            .coeffs()
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| lib_err(Error::InstanceTooLarge("coefficient".into()))))
            .collect::<Result<_, _>>()?;
        *out = redorb::census::orbit_count_global(&c, fam).map_err(lib_err)?;
        Ok(())
    })
}

/// Parse a family from JSON, e.g. `{"n": 3, "conditions": {"2": {"kind": "unit-lambda"}}}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable handle slot.
/// Release the handle with `redorb_family_free`.
#[no_mangle]
pub unsafe extern "C" fn redorb_family_from_json(json: *const c_char, out: *mut *mut RedorbFamily) -> i32 {
    guard(|| {
        if json.is_null() {
            return Err(null_err("json"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let s = CStr::from_ptr(json).to_str().map_err(|e| {
            set_error(e.to_string());
            REDORB_ERR_UTF8
        })?;
        let fam: FamilySpec = serde_json::from_str(s).map_err(|e| lib_err(Error::Parse(e.to_string())))?;
        fam.validate().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(RedorbFamily(fam)));
        Ok(())
    })
}

/// Release a family handle. Null is ignored.
///
/// # Safety
/// `family` must be null or a handle from `redorb_family_from_json` not freed before.
#[no_mangle]
pub unsafe extern "C" fn redorb_family_free(family: *mut RedorbFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// The lambda-density factor of `family` at `p` as an exact rational string
/// `"num/den"`, written to `*out`; release it with `redorb_string_free`.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn redorb_local_density(
    family: *const RedorbFamily,
    p: u64,
    jmax: u32,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let fam = family.as_ref().ok_or_else(|| null_err("family"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let v = redorb::local::local_lambda_integral(fam.0.n, p, &fam.0, jmax).map_err(lib_err)?;
        *out = CString::new(format_rational(&v.value)).expect("no nul").into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn redorb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Enclosure `[lo, hi]` of `C_n^fin`.
///
/// # Safety
/// `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn redorb_cfin(n: usize, precision: f64, lo: *mut f64, hi: *mut f64) -> i32 {
    guard(|| {
        let (lo, hi) = match (lo.as_mut(), hi.as_mut()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(null_err("lo/hi")),
        };
        if n < 3 || precision.is_nan() || precision <= 0.0 {
            return Err(lib_err(Error::Usage("need n >= 3 and precision > 0".into())));
        }
        let c = redorb::archimedean::constant_cfin(n, precision);
        *lo = c.lo;
        *hi = c.hi;
        Ok(())
    })
}
