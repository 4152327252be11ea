//! C ABI for the abco library.
//!
//! Substitutions are opaque handles created by [`abco_substitution_parse`]
//! and released with [`abco_substitution_free`]. Every query returns an
//! [`AbcoStatus`]; results come back through out-pointers. Strings
//! returned by the library are heap-allocated and must be released with
//! [`abco_string_free`]. Large numbers cross the boundary as decimal
//! strings so callers are not limited to 64 bits.
//!
//! The generated header lives at `include/abco.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
#[cfg(test)]
use std::ptr;

use num_bigint::BigUint;

use abco::cli::{stabilization_report_json, zset_json};
use abco::codecomp::{abelian_complexity, detect_stabilization, z_set, Method};
use abco::parry::ParrySubstitution;
use abco::{Error, Limits};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbcoStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A numeric or digit argument was rejected.
    InvalidArgument = 3,
    /// The substitution spec does not define a valid Parry substitution.
    InvalidSubstitution = 4,
    /// The query would materialize more letters than the cap allows.
    ResourceExceeded = 5,
    /// The digit recursion hit an inapplicable step.
    StepInapplicable = 6,
    /// Codec and oracle disagreed (method `Both`).
    Disagreement = 7,
    /// An internal invariant failed.
    Internal = 8,
}

/// Computation path selector for [`abco_abelian_complexity`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbcoMethod {
    Codec = 0,
    Oracle = 1,
    Both = 2,
}

impl From<AbcoMethod> for Method {
    fn from(m: AbcoMethod) -> Method {
        match m {
            AbcoMethod::Codec => Method::Codec,
            AbcoMethod::Oracle => Method::Oracle,
            AbcoMethod::Both => Method::Both,
        }
    }
}

/// Opaque handle to a validated Parry substitution.
pub struct AbcoSubstitution {
    inner: ParrySubstitution,
}

fn status_of(e: &Error) -> AbcoStatus {
    match e {
        Error::InvalidSubstitution(_) => AbcoStatus::InvalidSubstitution,
        Error::ResourceExceeded { .. } => AbcoStatus::ResourceExceeded,
        Error::StepInapplicable { .. } => AbcoStatus::StepInapplicable,
        Error::MethodDisagreement { .. } => AbcoStatus::Disagreement,
        _ => AbcoStatus::InvalidArgument,
    }
}

fn limits_for(cap: u64) -> Limits {
    if cap == 0 {
        Limits::default()
    } else {
        Limits::with_max_letters(cap)
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, AbcoStatus> {
    if text.is_null() {
        return Err(AbcoStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(text) }
        .to_str()
        .map_err(|_| AbcoStatus::InvalidUtf8)
}

fn write_string(out: *mut *mut c_char, value: String) -> AbcoStatus {
    match CString::new(value) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            AbcoStatus::Ok
        }
        Err(_) => AbcoStatus::Internal,
    }
}

fn guarded<F: FnOnce() -> AbcoStatus>(f: F) -> AbcoStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(AbcoStatus::Internal)
}

fn parse_decimal(text: &str) -> Result<BigUint, AbcoStatus> {
    BigUint::parse_bytes(text.trim().as_bytes(), 10).ok_or(AbcoStatus::InvalidArgument)
}

fn parse_digit_csv(text: &str) -> Result<Vec<u32>, AbcoStatus> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|d| d.trim().parse::<u32>().map_err(|_| AbcoStatus::InvalidArgument))
        .collect()
}

/// Parse a substitution spec (`simple m=3 alpha=1,1,1`,
/// `nonsimple m=1 p=2 alpha=2,0,1`, or raw rules `0->01;1->02;2->0`)
/// into a new handle written to `out`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn abco_substitution_parse(
    spec: *const c_char,
    out: *mut *mut AbcoSubstitution,
) -> AbcoStatus {
    guarded(|| {
        if out.is_null() {
            return AbcoStatus::NullPointer;
        }
        let spec = match unsafe { read_str(spec) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match ParrySubstitution::parse_spec(spec) {
            Ok(inner) => {
                let handle = Box::new(AbcoSubstitution { inner });
                unsafe { *out = Box::into_raw(handle) };
                AbcoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a handle created by [`abco_substitution_parse`]. Null is a no-op.
///
/// # Safety
/// `subst` must be a pointer previously returned by
/// [`abco_substitution_parse`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abco_substitution_free(subst: *mut AbcoSubstitution) {
    if !subst.is_null() {
        drop(unsafe { Box::from_raw(subst) });
    }
}

/// Alphabet size of the substitution, or 0 when the handle is null.
///
/// # Safety
/// `subst` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn abco_alphabet_size(subst: *const AbcoSubstitution) -> u32 {
    if subst.is_null() {
        return 0;
    }
    unsafe { &*subst }.inner.alphabet_size() as u32
}

/// Write the canonical description of the substitution
/// (e.g. `simple m=3 alpha=1,1,1`) to `out`.
///
/// # Safety
/// `subst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abco_substitution_describe(
    subst: *const AbcoSubstitution,
    out: *mut *mut c_char,
) -> AbcoStatus {
    guarded(|| {
        if subst.is_null() || out.is_null() {
            return AbcoStatus::NullPointer;
        }
        let subst = unsafe { &*subst };
        write_string(out, subst.inner.describe())
    })
}

/// Abelian complexity `AC(n)` of the fixed point, with `n` given as a
/// decimal string. `cap` limits materialized letters (0 selects the
/// default of 10^8). When the codec path hits an inapplicable step the
/// oracle supplies the value and `*out_fallback` (when non-null) is set.
///
/// # Safety
/// `subst` must be a live handle; strings must be NUL-terminated;
/// `out_value` must be writable; `out_fallback` may be null.
#[no_mangle]
pub unsafe extern "C" fn abco_abelian_complexity(
    subst: *const AbcoSubstitution,
    n_decimal: *const c_char,
    method: AbcoMethod,
    cap: u64,
    out_value: *mut u64,
    out_fallback: *mut bool,
) -> AbcoStatus {
    guarded(|| {
        if subst.is_null() || out_value.is_null() {
            return AbcoStatus::NullPointer;
        }
        let subst = unsafe { &*subst };
        let n = match unsafe { read_str(n_decimal) }.and_then(parse_decimal) {
            Ok(n) => n,
            Err(status) => return status,
        };
        match abelian_complexity(&n, &subst.inner, method.into(), &limits_for(cap)) {
            Ok(outcome) => {
                unsafe {
                    *out_value = outcome.value;
                    if !out_fallback.is_null() {
                        *out_fallback = outcome.oracle_fallback;
                    }
                }
                AbcoStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Normal F-representation of `n`, rendered like `(1,0,1)`, written to
/// `out` as a fresh string.
///
/// # Safety
/// `subst` must be a live handle; `n_decimal` must be NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abco_frep(
    subst: *const AbcoSubstitution,
    n_decimal: *const c_char,
    out: *mut *mut c_char,
) -> AbcoStatus {
    guarded(|| {
        if subst.is_null() || out.is_null() {
            return AbcoStatus::NullPointer;
        }
        let subst = unsafe { &*subst };
        let n = match unsafe { read_str(n_decimal) }.and_then(parse_decimal) {
            Ok(n) => n,
            Err(status) => return status,
        };
        let digits = abco::numeration::to_normal_frep(&n, &subst.inner);
        write_string(out, digits.to_string())
    })
}

/// The Z-set of `n` as a JSON object
/// `{"n":…,"digits":…,"pairs":[{"z":…,"z_tilde":…},…]}`.
///
/// # Safety
/// As for [`abco_abelian_complexity`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abco_zset_json(
    subst: *const AbcoSubstitution,
    n_decimal: *const c_char,
    cap: u64,
    out: *mut *mut c_char,
) -> AbcoStatus {
    guarded(|| {
        if subst.is_null() || out.is_null() {
            return AbcoStatus::NullPointer;
        }
        let subst = unsafe { &*subst };
        let n = match unsafe { read_str(n_decimal) }.and_then(parse_decimal) {
            Ok(n) => n,
            Err(status) => return status,
        };
        match z_set(&n, &subst.inner, &limits_for(cap)) {
            Ok(zset) => write_string(out, zset_json(&n, &zset, &subst.inner)),
            Err(e) => status_of(&e),
        }
    })
}

/// Probe stabilization along the digit pattern `(block^i, tail)` and
/// write the report as a JSON object. `block_csv`/`tail_csv` are
/// comma-separated digit lists; `tail_csv` may be empty.
///
/// # Safety
/// As for [`abco_abelian_complexity`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abco_stabilize_json(
    subst: *const AbcoSubstitution,
    block_csv: *const c_char,
    tail_csv: *const c_char,
    max_i: u32,
    cap: u64,
    out: *mut *mut c_char,
) -> AbcoStatus {
    guarded(|| {
        if subst.is_null() || out.is_null() {
            return AbcoStatus::NullPointer;
        }
        let subst = unsafe { &*subst };
        let block = match unsafe { read_str(block_csv) }.and_then(parse_digit_csv) {
            Ok(b) => b,
            Err(status) => return status,
        };
        let tail = match unsafe { read_str(tail_csv) }.and_then(parse_digit_csv) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match detect_stabilization(&block, &tail, max_i, &subst.inner, &limits_for(cap)) {
            Ok(report) => write_string(out, stabilization_report_json(&report)),
            Err(e) => status_of(&e),
        }
    })
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn abco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
