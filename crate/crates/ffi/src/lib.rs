//! C interface to `starsylv`.
//!
//! Systems and matrices are opaque heap handles released with
//! [`ss_system_free`] and [`ss_matrix_free`]. Every fallible function
//! returns an [`SsStatus`]; on failure [`ss_last_error_message`] describes
//! the error for the calling thread. Strings returned through out-pointers
//! are owned by the caller and released with [`ss_string_free`].
//!
//! Output pointers are written only on success. Panics never cross the
//! boundary; they surface as `SS_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use starsylv::model::{parse_field_words, parse_star_word};
use starsylv::roth;
use starsylv::{
    gen_consistent, gen_perturbed, vecsolve, Error, ExactMatrix, GenParams, ParseOptions,
    StarSylvesterSystem,
};

/// Status codes. `SS_STATUS_INCONSISTENT` and `SS_STATUS_REJECTED` are
/// verdicts, not failures, and leave the last error message untouched.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    Inconsistent = 1,
    Rejected = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Syntax = 5,
    ShapeMismatch = 6,
    InvalidStarMode = 7,
    InvalidModulus = 8,
    Char2Rejected = 9,
    Char2Unsupported = 10,
    NotASolution = 11,
    InvalidWitness = 12,
    FieldMismatch = 13,
    DivisionByZero = 14,
    OtherError = 15,
    Internal = 16,
}

/// A parsed or generated system.
pub struct SsSystem {
    inner: StarSylvesterSystem,
}

/// A matrix over the field of the system it was created for.
pub struct SsMatrix {
    inner: ExactMatrix,
}

/// Result of [`ss_check_claims`]. Tri-state fields hold -1 when the claim
/// was not decided (no witness supplied), else 0 or 1.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SsClaimReport {
    pub dim_d: usize,
    pub dim_d0: usize,
    pub dim_ker_phi_d: usize,
    pub dim_im_phi_d: usize,
    pub dim_ker_phi_d0: usize,
    pub dim_im_phi_d0: usize,
    pub rank_nullity_ok: bool,
    pub claim_i: i8,
    pub claim_ii: bool,
    pub claim_iii: bool,
    pub claim_iv: bool,
    pub target_in_image_d: bool,
    pub twist_ok: i8,
    pub realified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let clean = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

struct Failure(SsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } => SsStatus::Syntax,
            Error::ShapeMismatch(_)
            | Error::NotSquare { .. }
            | Error::NonConformalBlocks(_)
            | Error::IndexOutOfRange { .. } => SsStatus::ShapeMismatch,
            Error::InvalidStarMode(_) => SsStatus::InvalidStarMode,
            Error::InvalidModulus(_) => SsStatus::InvalidModulus,
            Error::Char2Rejected => SsStatus::Char2Rejected,
            Error::Char2Unsupported => SsStatus::Char2Unsupported,
            Error::NotASolution => SsStatus::NotASolution,
            Error::InvalidWitness => SsStatus::InvalidWitness,
            Error::FieldMismatch { .. } => SsStatus::FieldMismatch,
            Error::DivisionByZero => SsStatus::DivisionByZero,
            _ => SsStatus::OtherError,
        };
        Failure(status, e.to_string())
    }
}

fn null() -> Failure {
    Failure(SsStatus::NullPointer, "null pointer argument".into())
}

/// Run `body`, translating failures and panics into status codes.
fn guard(body: impl FnOnce() -> Result<SsStatus, Failure>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SsStatus::Internal
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SsStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn system_arg<'a>(p: *const SsSystem) -> Result<&'a StarSylvesterSystem, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(null)
}

unsafe fn matrix_arg<'a>(p: *const SsMatrix) -> Result<&'a ExactMatrix, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Writes only when `out` is non-null.
unsafe fn put_optional<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

fn boxed_matrix(m: ExactMatrix) -> *mut SsMatrix {
    Box::into_raw(Box::new(SsMatrix { inner: m }))
}

fn owned_string(text: String) -> *mut c_char {
    CString::new(text)
        .expect("text output has no nul")
        .into_raw()
}

/// Parse the system file format. `allow_char2` admits `field GF 2`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_system_parse(
    text: *const c_char,
    allow_char2: bool,
    out: *mut *mut SsSystem,
) -> SsStatus {
    guard(|| {
        let text = text_arg(text)?;
        if out.is_null() {
            return Err(null());
        }
        let sys = StarSylvesterSystem::parse(text, ParseOptions { allow_char2 })?;
        put(out, Box::into_raw(Box::new(SsSystem { inner: sys })))?;
        Ok(SsStatus::Ok)
    })
}

/// # Safety
/// `sys` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ss_system_free(sys: *mut SsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Serialize to the system file format.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_system_to_text(
    sys: *const SsSystem,
    out: *mut *mut c_char,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        put(out, owned_string(sys.to_text()))?;
        Ok(SsStatus::Ok)
    })
}

/// `m`, `n` and the number of equations. Null outputs are skipped.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_system_dims(
    sys: *const SsSystem,
    m: *mut usize,
    n: *mut usize,
    ell: *mut usize,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        put_optional(m, sys.m());
        put_optional(n, sys.n());
        put_optional(ell, sys.ell());
        Ok(SsStatus::Ok)
    })
}

/// Parse a `matrix <rows> <cols>` block over the field of `sys`.
///
/// # Safety
/// `sys` must be a live handle, `text` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_matrix_parse(
    sys: *const SsSystem,
    text: *const c_char,
    out: *mut *mut SsMatrix,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        let text = text_arg(text)?;
        if out.is_null() {
            return Err(null());
        }
        let m = ExactMatrix::parse_text(text, sys.tag())?;
        put(out, boxed_matrix(m))?;
        Ok(SsStatus::Ok)
    })
}

/// # Safety
/// `m` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ss_matrix_free(m: *mut SsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_matrix_to_text(m: *const SsMatrix, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        let m = matrix_arg(m)?;
        put(out, owned_string(m.to_text()))?;
        Ok(SsStatus::Ok)
    })
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_matrix_dims(
    m: *const SsMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> SsStatus {
    guard(|| {
        let m = matrix_arg(m)?;
        put_optional(rows, m.rows());
        put_optional(cols, m.cols());
        Ok(SsStatus::Ok)
    })
}

/// Direct solve. `SS_STATUS_OK` with a particular solution and the
/// homogeneous dimension, or `SS_STATUS_INCONSISTENT`. Null outputs are skipped.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_solve(
    sys: *const SsSystem,
    out_x: *mut *mut SsMatrix,
    out_dim: *mut usize,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        match vecsolve::solve(sys) {
            vecsolve::Verdict::Consistent(set) => {
                put_optional(out_dim, set.dim);
                if !out_x.is_null() {
                    out_x.write(boxed_matrix(set.particular));
                }
                Ok(SsStatus::Ok)
            }
            vecsolve::Verdict::Inconsistent { .. } => Ok(SsStatus::Inconsistent),
        }
    })
}

/// Solution recovered from the pair space, or `SS_STATUS_INCONSISTENT`.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ss_extract(sys: *const SsSystem, out_x: *mut *mut SsMatrix) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        match roth::extract_solution(sys)? {
            Some(x) => {
                if !out_x.is_null() {
                    out_x.write(boxed_matrix(x));
                }
                Ok(SsStatus::Ok)
            }
            None => Ok(SsStatus::Inconsistent),
        }
    })
}

/// Congruence witness `S` built from a solution `x`.
///
/// # Safety
/// `sys` and `x` must be live handles; `out_s` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_witness(
    sys: *const SsSystem,
    x: *const SsMatrix,
    out_s: *mut *mut SsMatrix,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        let x = matrix_arg(x)?;
        if out_s.is_null() {
            return Err(null());
        }
        let w = roth::witness_from_solution(sys, x)?;
        put(out_s, boxed_matrix(w.s))?;
        Ok(SsStatus::Ok)
    })
}

/// `SS_STATUS_OK` when `s` is invertible and satisfies every congruence,
/// `SS_STATUS_REJECTED` otherwise.
///
/// # Safety
/// `sys` and `s` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn ss_verify(sys: *const SsSystem, s: *const SsMatrix) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        let s = matrix_arg(s)?;
        let w = roth::verify_congruence(sys, s)?;
        Ok(if w.accepted() {
            SsStatus::Ok
        } else {
            SsStatus::Rejected
        })
    })
}

fn tri(v: Option<bool>) -> i8 {
    v.map_or(-1, i8::from)
}

/// Pair-space dimensions and claims. `s` may be null; if given it must be
/// a valid witness.
///
/// # Safety
/// `sys` must be a live handle, `s` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_check_claims(
    sys: *const SsSystem,
    s: *const SsMatrix,
    out: *mut SsClaimReport,
) -> SsStatus {
    guard(|| {
        let sys = system_arg(sys)?;
        let s = if s.is_null() {
            None
        } else {
            Some(matrix_arg(s)?)
        };
        if out.is_null() {
            return Err(null());
        }
        let r = roth::check_claims(sys, s)?;
        put(
            out,
            SsClaimReport {
                dim_d: r.dim_d,
                dim_d0: r.dim_d0,
                dim_ker_phi_d: r.dim_ker_phi_d,
                dim_im_phi_d: r.dim_im_phi_d,
                dim_ker_phi_d0: r.dim_ker_phi_d0,
                dim_im_phi_d0: r.dim_im_phi_d0,
                rank_nullity_ok: r.rank_nullity_ok,
                claim_i: tri(r.claim_i),
                claim_ii: r.claim_ii,
                claim_iii: r.claim_iii,
                claim_iv: r.claim_iv,
                target_in_image_d: r.target_in_image_d,
                twist_ok: tri(r.twist_ok),
                realified: r.realified,
            },
        )?;
        Ok(SsStatus::Ok)
    })
}

/// Seeded generator. `field` is `"Q"`, `"QI"` or `"GF <p>"`, `star` is
/// `"T"` or `"H"`. With `perturb`, `C_1` is perturbed and `out_x` must be
/// null; otherwise the planted solution is written to `out_x` if non-null.
///
/// # Safety
/// `field` and `star` must be nul-terminated; `out_sys` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_gen(
    field: *const c_char,
    star: *const c_char,
    m: usize,
    n: usize,
    ell: usize,
    seed: u64,
    entry_bound: u32,
    perturb: bool,
    allow_char2: bool,
    out_sys: *mut *mut SsSystem,
    out_x: *mut *mut SsMatrix,
) -> SsStatus {
    guard(|| {
        let words: Vec<&str> = text_arg(field)?.split_whitespace().collect();
        let tag = parse_field_words(&words, allow_char2)?;
        let mode = parse_star_word(text_arg(star)?)?;
        if out_sys.is_null() {
            return Err(null());
        }
        if perturb && !out_x.is_null() {
            return Err(Failure(
                SsStatus::OtherError,
                "a perturbed system has no planted solution".into(),
            ));
        }
        let params = GenParams {
            entry_bound,
            ..GenParams::new(tag, mode, m, n, ell, seed)
        };
        let (mut sys, x) = gen_consistent(&params)?;
        if perturb {
            sys = gen_perturbed(&sys, seed, entry_bound);
        }
        put(out_sys, Box::into_raw(Box::new(SsSystem { inner: sys })))?;
        put_optional(out_x, boxed_matrix(x));
        Ok(SsStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(
            Failure::from(Error::Char2Rejected).0,
            SsStatus::Char2Rejected
        );
        assert_eq!(
            Failure::from(Error::Syntax {
                line: 1,
                column: 1,
                message: String::new()
            })
            .0,
            SsStatus::Syntax
        );
        assert_eq!(Failure::from(Error::NotPrimeField).0, SsStatus::OtherError);
    }

    #[test]
    fn panics_are_contained() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, SsStatus::Internal);
        let msg = unsafe { CStr::from_ptr(ss_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
