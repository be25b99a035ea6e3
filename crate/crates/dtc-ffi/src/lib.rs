//! C ABI for the `dtc-core` discrete-time-crystal engines.
//!
//! Surface conventions:
//!
//! * Every fallible call returns a [`DtcStatus`]; `DTC_STATUS_OK` is zero.
//!   On failure a thread-local, human-readable message is retrievable with
//!   [`dtc_last_error_message`].
//! * Model parameters live behind the opaque handle [`DtcParams`], created
//!   with [`dtc_params_new_from_epsilon`] / [`dtc_params_new_from_field`]
//!   and released with [`dtc_params_free`].
//! * Evolution routines start from the model's canonical initial state
//!   (site-uniform product spinor tilted by the azimuth `phi`) and measure
//!   the per-site magnetization along the `phi`-rotated y axis, exactly as
//!   the `dtc` CLI does. Output buffers carry `n_periods + 1` values:
//!   slot 0 is the initial-state value, slot `n` the value after period `n`.
//! * Spectrum routines consume a raw stroboscopic series `s_1..s_N`
//!   (length `len`) sampled once per drive period.
//! * Panics never unwind across the boundary; they surface as
//!   `DTC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use dtc_core::analysis::{self, StroboscopicSeries};
use dtc_core::ed;
use dtc_core::meanfield::{self, MeanFieldState};
use dtc_core::model::{MagnetizationAxis, ModelParams, ProductStateSpec};
use dtc_core::mps::{self, EvolveOptions};

/// Status code returned by every fallible `dtc_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtcStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were rejected before any computation ran.
    InvalidArgument = 2,
    /// The engine started but aborted (integrator drift, truncation budget,
    /// I/O, …); the message from `dtc_last_error_message` names the cause.
    EngineError = 3,
    /// An internal invariant failed; the library caught the panic at the
    /// boundary. State behind live handles remains valid but the result of
    /// the failing call is unusable.
    Panic = 4,
}

/// Opaque model-parameter handle (period, fields, couplings, chain length).
pub struct DtcParams {
    inner: ModelParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(msg: &str) {
    LAST_ERROR.with(|slot| {
        let mut bytes = msg.replace('\0', " ").into_bytes();
        bytes.push(0);
        *slot.borrow_mut() = bytes;
    });
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().clear());
}

fn engine_status(err: &dtc_core::Error) -> DtcStatus {
    match err {
        dtc_core::Error::InvalidParams(_) => DtcStatus::InvalidArgument,
        _ => DtcStatus::EngineError,
    }
}

fn fail(err: dtc_core::Error) -> DtcStatus {
    let status = engine_status(&err);
    set_last_error(&err.to_string());
    status
}

/// Run `body` with panic containment; `body` reports success or a status it
/// has already logged via [`set_last_error`].
fn guarded(body: impl FnOnce() -> Result<(), DtcStatus>) -> DtcStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DtcStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".to_string());
            set_last_error(&format!("internal panic: {msg}"));
            DtcStatus::Panic
        }
    }
}

fn null_pointer(name: &str) -> DtcStatus {
    set_last_error(&format!("{name} must not be null"));
    DtcStatus::NullPointer
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dtc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn dtc_status_name(status: DtcStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        DtcStatus::Ok => b"ok\0",
        DtcStatus::NullPointer => b"null pointer\0",
        DtcStatus::InvalidArgument => b"invalid argument\0",
        DtcStatus::EngineError => b"engine error\0",
        DtcStatus::Panic => b"panic\0",
    };
    name.as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf`.
///
/// Returns the full message length in bytes (excluding the trailing NUL);
/// zero means the last call on this thread succeeded. When `buf` is non-null
/// and `cap > 0`, up to `cap − 1` bytes are copied and NUL-terminated
/// (truncating if `cap` is too small).
///
/// # Safety
///
/// `buf` must either be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dtc_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let stored = slot.borrow();
        let msg_len = stored.len().saturating_sub(1);
        if !buf.is_null() && cap > 0 {
            let n = msg_len.min(cap - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(stored.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg_len
    })
}

unsafe fn write_params(out: *mut *mut DtcParams, params: ModelParams) {
    unsafe {
        *out = Box::into_raw(Box::new(DtcParams { inner: params }));
    }
}

/// Create a parameter handle from the detuning parameterization
/// `h = (π + 2·epsilon·period)/period`.
///
/// On success writes a handle to `*out`; release it with [`dtc_params_free`].
///
/// # Safety
///
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dtc_params_new_from_epsilon(
    period: f64,
    epsilon: f64,
    j: f64,
    lambda: f64,
    phi: f64,
    n_sites: usize,
    out: *mut *mut DtcParams,
) -> DtcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let params =
            ModelParams::from_epsilon(period, epsilon, j, lambda, phi, n_sites).map_err(fail)?;
        unsafe { write_params(out, params) };
        Ok(())
    })
}

/// Create a parameter handle from the raw drive strength `h`
/// (`epsilon = (h·period − π)/(2·period)`).
///
/// On success writes a handle to `*out`; release it with [`dtc_params_free`].
///
/// # Safety
///
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dtc_params_new_from_field(
    period: f64,
    h: f64,
    j: f64,
    lambda: f64,
    phi: f64,
    n_sites: usize,
    out: *mut *mut DtcParams,
) -> DtcStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let params =
            ModelParams::from_field(period, h, j, lambda, phi, n_sites).map_err(fail)?;
        unsafe { write_params(out, params) };
        Ok(())
    })
}

/// Release a parameter handle. Passing null is a no-op.
///
/// # Safety
///
/// `params` must be null or a handle obtained from a `dtc_params_new_*`
/// call that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn dtc_params_free(params: *mut DtcParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

unsafe fn borrow_params<'a>(params: *const DtcParams) -> Result<&'a ModelParams, DtcStatus> {
    if params.is_null() {
        return Err(null_pointer("params"));
    }
    Ok(unsafe { &(*params).inner })
}

/// Mean-field stroboscopic evolution from the chart point `(p0, q0)`.
///
/// Integrates the classical equations of motion with fixed-step RK4
/// (`steps_per_period ≥ 100` steps per drive period) and writes
/// `⟨σ_y⟩` at `t = nT` into `sigma_y_out[n]` for `n = 0..=n_periods`.
///
/// # Safety
///
/// `params` must be a live handle; `sigma_y_out` must point to
/// `n_periods + 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dtc_mf_stroboscopic(
    params: *const DtcParams,
    p0: f64,
    q0: f64,
    n_periods: usize,
    steps_per_period: usize,
    sigma_y_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        let params = unsafe { borrow_params(params) }?;
        if sigma_y_out.is_null() {
            return Err(null_pointer("sigma_y_out"));
        }
        let start = MeanFieldState::new(p0, q0);
        let record =
            meanfield::stroboscopic(&start, n_periods, params, steps_per_period).map_err(fail)?;
        let out = unsafe { slice::from_raw_parts_mut(sigma_y_out, n_periods + 1) };
        out.copy_from_slice(&record.sigma_y);
        Ok(())
    })
}

fn initial_state_and_axis(
    params: &ModelParams,
) -> Result<(ProductStateSpec, MagnetizationAxis), DtcStatus> {
    let spec = ProductStateSpec::new(params.phi, 1, params.n_sites).map_err(fail)?;
    Ok((spec, MagnetizationAxis::new(params.phi)))
}

/// Dense exact evolution (chains of up to 14 sites).
///
/// Integrates the Schrödinger equation with fixed-step RK4 of step `dt`
/// (`dt ≤ T/100`, dividing the period) and writes the magnetization at
/// `t = nT` into `magnetization_out[n]` for `n = 0..=n_periods`.
///
/// # Safety
///
/// `params` must be a live handle; `magnetization_out` must point to
/// `n_periods + 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dtc_ed_evolve(
    params: *const DtcParams,
    dt: f64,
    n_periods: usize,
    magnetization_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        let params = unsafe { borrow_params(params) }?;
        if magnetization_out.is_null() {
            return Err(null_pointer("magnetization_out"));
        }
        let (spec, axis) = initial_state_and_axis(params)?;
        let state = ed::DenseState::from_product(&spec).map_err(fail)?;
        let record = ed::ed_evolve(state, params, dt, n_periods, &axis).map_err(fail)?;
        let out = unsafe { slice::from_raw_parts_mut(magnetization_out, n_periods + 1) };
        out[0] = record.initial_magnetization;
        out[1..].copy_from_slice(record.series.values());
        Ok(())
    })
}

/// Matrix-product-state evolution with bond cap `max_bond`.
///
/// Runs the third-order gate decomposition with substep `dt` (dividing the
/// period) and writes the magnetization at `t = nT` into
/// `magnetization_out[n]` for `n = 0..=n_periods`. A non-positive
/// `truncation_budget` selects the default per-period budget (1e−2).
/// When `cumulative_truncation_out` is non-null it receives the total
/// discarded weight of the run.
///
/// # Safety
///
/// `params` must be a live handle; `magnetization_out` must point to
/// `n_periods + 1` writable doubles; `cumulative_truncation_out` must be
/// null or point to one writable double.
#[no_mangle]
pub unsafe extern "C" fn dtc_mps_evolve(
    params: *const DtcParams,
    max_bond: usize,
    dt: f64,
    n_periods: usize,
    truncation_budget: f64,
    magnetization_out: *mut f64,
    cumulative_truncation_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        let params = unsafe { borrow_params(params) }?;
        if magnetization_out.is_null() {
            return Err(null_pointer("magnetization_out"));
        }
        let (spec, axis) = initial_state_and_axis(params)?;
        let state = mps::mps_from_product(&spec, max_bond).map_err(fail)?;
        let options = if truncation_budget > 0.0 {
            EvolveOptions {
                truncation_budget,
            }
        } else {
            EvolveOptions::default()
        };
        let record =
            mps::evolve_periods(state, params, dt, n_periods, &axis, &options).map_err(fail)?;
        let out = unsafe { slice::from_raw_parts_mut(magnetization_out, n_periods + 1) };
        out[0] = record.initial_magnetization;
        out[1..].copy_from_slice(record.series.values());
        if !cumulative_truncation_out.is_null() {
            let total = record
                .cumulative_truncation
                .last()
                .copied()
                .unwrap_or(0.0);
            unsafe { *cumulative_truncation_out = total };
        }
        Ok(())
    })
}

unsafe fn series_from_raw(
    values: *const f64,
    len: usize,
    period: f64,
) -> Result<StroboscopicSeries, DtcStatus> {
    if values.is_null() {
        return Err(null_pointer("values"));
    }
    let values = unsafe { slice::from_raw_parts(values, len) };
    StroboscopicSeries::new(values.to_vec(), period, "ffi series").map_err(fail)
}

/// Power spectrum of a stroboscopic series.
///
/// Writes `|s̃|²(Ω_k)` for `k = 0..len−1` on the grid `Ω_k = 2πk/(len·period)`
/// into `magnitude_sq_out`; the drive subharmonic `ω/2` sits at bin
/// `len/2` (even `len`).
///
/// # Safety
///
/// `values` must point to `len` readable doubles and `magnitude_sq_out` to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dtc_power_spectrum(
    values: *const f64,
    len: usize,
    period: f64,
    magnitude_sq_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        if magnitude_sq_out.is_null() {
            return Err(null_pointer("magnitude_sq_out"));
        }
        let series = unsafe { series_from_raw(values, len, period) }?;
        let spectrum = analysis::power_spectrum(&series).map_err(fail)?;
        let out = unsafe { slice::from_raw_parts_mut(magnitude_sq_out, len) };
        out.copy_from_slice(&spectrum.magnitudes);
        Ok(())
    })
}

/// Subharmonic order parameter: `|s̃|²` at exactly `Ω = ω/2`.
///
/// Requires an even-length series.
///
/// # Safety
///
/// `values` must point to `len` readable doubles and `peak_out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn dtc_subharmonic_peak(
    values: *const f64,
    len: usize,
    period: f64,
    peak_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        if peak_out.is_null() {
            return Err(null_pointer("peak_out"));
        }
        let series = unsafe { series_from_raw(values, len, period) }?;
        let spectrum = analysis::power_spectrum(&series).map_err(fail)?;
        let peak = analysis::subharmonic_peak(&spectrum).map_err(fail)?;
        unsafe { *peak_out = peak };
        Ok(())
    })
}

/// Dominance ratio: spectrum magnitude at `ω/2` divided by the largest
/// magnitude over every other bin (DC included). Infinite when all other
/// bins are exactly zero. Requires an even-length series.
///
/// # Safety
///
/// `values` must point to `len` readable doubles and `ratio_out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn dtc_dominance_ratio(
    values: *const f64,
    len: usize,
    period: f64,
    ratio_out: *mut f64,
) -> DtcStatus {
    guarded(|| {
        if ratio_out.is_null() {
            return Err(null_pointer("ratio_out"));
        }
        let series = unsafe { series_from_raw(values, len, period) }?;
        let spectrum = analysis::power_spectrum(&series).map_err(fail)?;
        let ratio = analysis::dominance_ratio(&spectrum).map_err(fail)?;
        unsafe { *ratio_out = ratio };
        Ok(())
    })
}
