//! C ABI over `gielab`.
//!
//! States and numeric results are opaque heap handles released with their
//! `_free` functions. Every fallible call returns a [`GielabStatus`]; on
//! failure the message is kept per thread and read back with
//! [`gielab_last_error`].

use gielab::config::Config;
use gielab::gie::{evaluate_closed_form, gie_numeric, GieResult};
use gielab::renyi2::gr2_family;
use gielab::states::{make_family, StateFamily, StdForm};
use gielab::Error;
use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GielabStatus {
    Ok = 0,
    InvalidInput = 1,
    Unphysical = 2,
    WrongFamily = 3,
    ShapeMismatch = 4,
    DomainNotCovered = 5,
    NotSymplectic = 6,
    NumericalDegeneracy = 7,
    NoConvergence = 8,
    Io = 9,
    NullPointer = 10,
    Panic = 11,
}

impl From<&Error> for GielabStatus {
    fn from(e: &Error) -> GielabStatus {
        match e {
            Error::InvalidInput(_) => GielabStatus::InvalidInput,
            Error::Unphysical(_) => GielabStatus::Unphysical,
            Error::WrongFamily(_) => GielabStatus::WrongFamily,
            Error::ShapeMismatch(_) => GielabStatus::ShapeMismatch,
            Error::DomainNotCovered { .. } => GielabStatus::DomainNotCovered,
            Error::NotSymplectic { .. } => GielabStatus::NotSymplectic,
            Error::NumericalDegeneracy(_) => GielabStatus::NumericalDegeneracy,
            Error::NoConvergence(_) => GielabStatus::NoConvergence,
            Error::Io(_) => GielabStatus::Io,
        }
    }
}

/// Standard-form parameters of a two-mode covariance matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GielabStdForm {
    pub a: f64,
    pub b: f64,
    pub kx: f64,
    pub kp: f64,
}

/// A validated two-mode Gaussian state.
pub struct GielabState {
    family: StateFamily,
    std: StdForm,
}

/// Outcome of the numerical optimization over Eve's measurements.
pub struct GielabResult {
    inner: GieResult,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), (GielabStatus, String)>) -> GielabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            GielabStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GielabStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (GielabStatus, String) {
    (GielabStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (GielabStatus, String) {
    (GielabStatus::NullPointer, format!("`{what}` is null"))
}

fn new_state(family: StateFamily, out: *mut *mut GielabState) -> GielabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let std = make_family(&family).map_err(lib_err)?;
        // SAFETY: `out` is non-null and the caller promises it is writable.
        unsafe { *out = Box::into_raw(Box::new(GielabState { family, std })) };
        Ok(())
    })
}

/// Two-mode squeezed vacuum with local variance `a`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_pure(a: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::Pure { a }, out)
}

/// Symmetric state with one unit symplectic eigenvalue.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_sym_glems(a: f64, kp: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::SymGlems { a, kp }, out)
}

/// Symmetric squeezed thermal state with `kx = kp = k`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_sym_sq_thermal(a: f64, k: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::SymSqThermal { a, k }, out)
}

/// Asymmetric state with one unit symplectic eigenvalue.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_asym_glems(a: f64, b: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::AsymGlems { a, b }, out)
}

/// Two-mode reduction of the three-mode GHZ state with squeezing `r`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_cv_ghz(r: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::CvGhz { r }, out)
}

/// Any physical standard form.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_generic(a: f64, b: f64, kx: f64, kp: f64, out: *mut *mut GielabState) -> GielabStatus {
    new_state(StateFamily::Generic(StdForm { a, b, kx, kp }), out)
}

/// # Safety
/// `state` must be null or a handle from a `gielab_state_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_free(state: *mut GielabState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// # Safety
/// `state` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gielab_state_std_form(state: *const GielabState, out: *mut GielabStdForm) -> GielabStatus {
    guard(|| {
        let s = unsafe { state.as_ref() }.ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let StdForm { a, b, kx, kp } = s.std;
        unsafe { *out = GielabStdForm { a, b, kx, kp } };
        Ok(())
    })
}

/// Closed-form GIE in nats. `verified` is set to whether the point lies in a
/// proven domain. Fails with `DomainNotCovered` when no closed form exists.
///
/// # Safety
/// `state` must be a live handle; `value` and `verified` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gielab_gie_closed_form(state: *const GielabState, value: *mut f64, verified: *mut bool) -> GielabStatus {
    guard(|| {
        let s = unsafe { state.as_ref() }.ok_or_else(|| null("state"))?;
        if value.is_null() || verified.is_null() {
            return Err(null("value or verified"));
        }
        let c = evaluate_closed_form(&s.family).map_err(lib_err)?;
        let v = c
            .value
            .ok_or_else(|| (GielabStatus::DomainNotCovered, c.note.clone().unwrap_or_else(|| "no closed form for this state".into())))?;
        unsafe {
            *value = v;
            *verified = c.verified;
        }
        Ok(())
    })
}

/// Gaussian Rényi-2 entanglement in nats.
///
/// # Safety
/// `state` must be a live handle and `value` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gielab_gr2(state: *const GielabState, value: *mut f64) -> GielabStatus {
    guard(|| {
        let s = unsafe { state.as_ref() }.ok_or_else(|| null("state"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        let v = gr2_family(&s.family).map_err(lib_err)?;
        unsafe { *value = v };
        Ok(())
    })
}

/// Runs the optimization over Eve's measurements. `grid` is the number of
/// coarse grid points per parameter; 0 keeps the default.
///
/// # Safety
/// `state` must be a live handle and `out` valid for one write. The handle
/// written to `out` must be released with [`gielab_result_free`].
#[no_mangle]
pub unsafe extern "C" fn gielab_gie_numeric(state: *const GielabState, grid: u32, out: *mut *mut GielabResult) -> GielabStatus {
    guard(|| {
        let s = unsafe { state.as_ref() }.ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = if grid == 0 { Config::default() } else { Config::default().with_grid(grid as usize).map_err(lib_err)? };
        let inner = gie_numeric(&s.family, &cfg).map_err(lib_err)?;
        unsafe { *out = Box::into_raw(Box::new(GielabResult { inner })) };
        Ok(())
    })
}

/// Minimized conditional mutual information in nats; NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_result_value(result: *const GielabResult) -> f64 {
    unsafe { result.as_ref() }.map_or(f64::NAN, |r| r.inner.numeric)
}

/// `|numeric - closed form|`, or NaN when there is no closed form.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gielab_result_discrepancy(result: *const GielabResult) -> f64 {
    unsafe { result.as_ref() }.and_then(|r| r.inner.discrepancy).unwrap_or(f64::NAN)
}

/// Copies a description of Eve's optimal measurement into `buf` as a
/// NUL-terminated UTF-8 string, truncated to `len` bytes. Returns the length
/// needed without the terminator.
///
/// # Safety
/// `result` must be null or a live handle; `buf` null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn gielab_result_eve_optimum(result: *const GielabResult, buf: *mut c_char, len: usize) -> usize {
    match unsafe { result.as_ref() } {
        Some(r) => unsafe { copy_out(&r.inner.eve_optimum, buf, len) },
        None => 0,
    }
}

/// # Safety
/// `result` must be null or a handle from [`gielab_gie_numeric`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn gielab_result_free(result: *mut GielabResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Message of the last failed call on this thread, copied like
/// [`gielab_result_eve_optimum`]. Empty after a successful call.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn gielab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| unsafe { copy_out(&e.borrow(), buf, len) })
}

unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > 0 {
        let mut n = s.len().min(len - 1);
        while !s.is_char_boundary(n) {
            n -= 1;
        }
        unsafe {
            std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
    }
    s.len()
}
