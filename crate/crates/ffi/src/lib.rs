//! C ABI for the beaches denoiser.
//!
//! Complex vectors cross the boundary as interleaved `double` arrays
//! `[re0, im0, re1, im1, ...]` holding `len` complex entries. Every function
//! returns a [`BeachesStatus`]; on failure a message is available from
//! [`beaches_last_error_message`] on the same thread until the next call.
//! Panics are caught and reported as [`BeachesStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use beaches::denoiser::{denoise_beamspace_in_place, find_tau_star, soft_threshold_in_place, sure_soft};
use beaches::{sample_profile, synthesize_channel, Beaches, ComplexVector, DenoiserConfig, Error, Profile, SpectralPlan};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeachesStatus {
    Ok = 0,
    NullPointer = 1,
    EmptyInput = 2,
    NonFinite = 3,
    InvalidNoiseVariance = 4,
    InvalidThreshold = 5,
    ThresholdAtMagnitude = 6,
    InvalidArgument = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeachesProfile {
    Los = 0,
    Nlos = 1,
}

/// Reusable denoiser for one antenna count. Create with
/// [`beaches_denoiser_new`], release with [`beaches_denoiser_free`].
pub struct BeachesDenoiser {
    inner: Beaches,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BeachesStatus {
    match err {
        Error::Empty => BeachesStatus::EmptyInput,
        Error::NonFinite { .. } => BeachesStatus::NonFinite,
        Error::InvalidNoiseVariance(_) => BeachesStatus::InvalidNoiseVariance,
        Error::InvalidThreshold(_) => BeachesStatus::InvalidThreshold,
        Error::ThresholdAtMagnitude { .. } => BeachesStatus::ThresholdAtMagnitude,
        Error::InvalidArgument(_) | Error::LengthMismatch { .. } | Error::Config(_) | Error::Parse { .. } => {
            BeachesStatus::InvalidArgument
        }
        _ => BeachesStatus::Internal,
    }
}

struct Failure(BeachesStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(BeachesStatus::NullPointer, format!("{name} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BeachesStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BeachesStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            BeachesStatus::Panic
        }
    }
}

unsafe fn complex_slice<'a>(data: *const f64, len: usize) -> Result<&'a [Complex64], Failure> {
    if data.is_null() {
        return Err(null("data"));
    }
    if len == 0 {
        return Err(Error::Empty.into());
    }
    // Complex64 is repr(C) { re, im } with f64 alignment.
    Ok(std::slice::from_raw_parts(data.cast::<Complex64>(), len))
}

unsafe fn complex_slice_mut<'a>(data: *mut f64, len: usize) -> Result<&'a mut [Complex64], Failure> {
    if data.is_null() {
        return Err(null("data"));
    }
    if len == 0 {
        return Err(Error::Empty.into());
    }
    Ok(std::slice::from_raw_parts_mut(data.cast::<Complex64>(), len))
}

fn check_finite(data: &[Complex64]) -> Result<(), Failure> {
    match data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(index) => Err(Error::NonFinite { index }.into()),
        None => Ok(()),
    }
}

unsafe fn write_opt(out: *mut f64, value: f64) {
    if !out.is_null() {
        *out = value;
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn beaches_version() -> *const c_char {
    VERSION.as_ptr().cast()
}

/// Message describing the last failure on this thread, or NULL if the last
/// call succeeded. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn beaches_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Create a denoiser for vectors of `len` antennas and noise variance `e0`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn beaches_denoiser_new(len: usize, e0: f64, out: *mut *mut BeachesDenoiser) -> BeachesStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = Beaches::new(len, DenoiserConfig::new(e0)?)?;
        *out = Box::into_raw(Box::new(BeachesDenoiser { inner }));
        Ok(())
    })
}

/// Release a handle. Passing NULL is a no-op.
///
/// # Safety
/// `handle` must come from [`beaches_denoiser_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn beaches_denoiser_free(handle: *mut BeachesDenoiser) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Denoise an antenna-domain vector in place. `tau_star` and `sure_min`
/// may be NULL.
///
/// # Safety
/// `handle` must be live and `data` must hold `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn beaches_denoiser_denoise(
    handle: *const BeachesDenoiser,
    data: *mut f64,
    len: usize,
    tau_star: *mut f64,
    sure_min: *mut f64,
) -> BeachesStatus {
    guard(|| {
        let handle = handle.as_ref().ok_or_else(|| null("handle"))?;
        let y = complex_slice_mut(data, len)?;
        check_finite(y)?;
        let r = handle.inner.denoise_in_place(y)?;
        write_opt(tau_star, r.tau_star);
        write_opt(sure_min, r.sure_min);
        Ok(())
    })
}

/// Soft-threshold a beamspace vector in place at the SURE-optimal level.
///
/// # Safety
/// `data` must hold `2 * len` doubles. `tau_star` and `sure_min` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn beaches_denoise_beamspace(
    data: *mut f64,
    len: usize,
    e0: f64,
    tau_star: *mut f64,
    sure_min: *mut f64,
) -> BeachesStatus {
    guard(|| {
        let cfg = DenoiserConfig::new(e0)?;
        let y = complex_slice_mut(data, len)?;
        check_finite(y)?;
        let r = denoise_beamspace_in_place(y, &cfg);
        write_opt(tau_star, r.tau_star);
        write_opt(sure_min, r.sure_min);
        Ok(())
    })
}

/// SURE-optimal threshold of a beamspace vector without modifying it.
///
/// # Safety
/// `data` must hold `2 * len` doubles. `tau_star` and `sure_min` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn beaches_find_tau_star(
    data: *const f64,
    len: usize,
    e0: f64,
    tau_star: *mut f64,
    sure_min: *mut f64,
) -> BeachesStatus {
    guard(|| {
        let cfg = DenoiserConfig::new(e0)?;
        let y = ComplexVector::beamspace(complex_slice(data, len)?.to_vec())?;
        let r = find_tau_star(&y, &cfg);
        write_opt(tau_star, r.tau_star);
        write_opt(sure_min, r.sure_min);
        Ok(())
    })
}

/// SURE of soft-thresholding a beamspace vector at `tau`.
///
/// # Safety
/// `data` must hold `2 * len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn beaches_sure_soft(
    data: *const f64,
    len: usize,
    tau: f64,
    e0: f64,
    out: *mut f64,
) -> BeachesStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = DenoiserConfig::new(e0)?;
        let y = ComplexVector::beamspace(complex_slice(data, len)?.to_vec())?;
        *out = sure_soft(&y, tau, &cfg)?;
        Ok(())
    })
}

/// Complex soft-thresholding in place.
///
/// # Safety
/// `data` must hold `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn beaches_soft_threshold(data: *mut f64, len: usize, tau: f64) -> BeachesStatus {
    guard(|| {
        let y = complex_slice_mut(data, len)?;
        check_finite(y)?;
        soft_threshold_in_place(y, tau)?;
        Ok(())
    })
}

unsafe fn transform(data: *mut f64, len: usize, forward: bool) -> BeachesStatus {
    guard(|| {
        let x = complex_slice_mut(data, len)?;
        let plan = SpectralPlan::new(len)?;
        if forward {
            plan.forward_in_place(x)?;
        } else {
            plan.inverse_in_place(x)?;
        }
        Ok(())
    })
}

/// Unitary DFT (antenna to beamspace) in place.
///
/// # Safety
/// `data` must hold `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn beaches_dft(data: *mut f64, len: usize) -> BeachesStatus {
    transform(data, len, true)
}

/// Unitary inverse DFT (beamspace to antenna) in place.
///
/// # Safety
/// `data` must hold `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn beaches_idft(data: *mut f64, len: usize) -> BeachesStatus {
    transform(data, len, false)
}

/// Draw a channel from a synthetic profile into `out` (antenna domain,
/// normalized to squared norm `len`).
///
/// # Safety
/// `out` must hold `2 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn beaches_generate_channel(
    profile: BeachesProfile,
    len: usize,
    seed: u64,
    out: *mut f64,
) -> BeachesStatus {
    guard(|| {
        let dst = complex_slice_mut(out, len)?;
        let profile = match profile {
            BeachesProfile::Los => Profile::los(),
            BeachesProfile::Nlos => Profile::nlos(),
        };
        let h = synthesize_channel(&sample_profile(&profile, len, seed)?);
        dst.copy_from_slice(h.as_slice());
        Ok(())
    })
}
