/* dtc.h — C ABI for the dtc-core discrete-time-crystal engines.
 *
 * Generated by cbindgen from crates/dtc-ffi; do not edit by hand.
 * All functions return a DtcStatus; on any status other than DTC_STATUS_OK
 * a human-readable message is available via dtc_last_error_message().
 */

#ifndef DTC_H
#define DTC_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible `dtc_*` call.
typedef enum DtcStatus {
  // The call succeeded.
  DTC_STATUS_OK = 0,
  // A required pointer argument was null.
  DTC_STATUS_NULL_POINTER = 1,
  // Arguments were rejected before any computation ran.
  DTC_STATUS_INVALID_ARGUMENT = 2,
  // The engine started but aborted (integrator drift, truncation budget,
  // I/O, …); the message from `dtc_last_error_message` names the cause.
  DTC_STATUS_ENGINE_ERROR = 3,
  // An internal invariant failed; the library caught the panic at the
  // boundary. State behind live handles remains valid but the result of
  // the failing call is unusable.
  DTC_STATUS_PANIC = 4,
} DtcStatus;

// Opaque model-parameter handle (period, fields, couplings, chain length).
typedef struct DtcParams DtcParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *dtc_version(void);

// Static NUL-terminated name of a status code.
const char *dtc_status_name(enum DtcStatus status);

// Copy the calling thread's last error message into `buf`.
//
// Returns the full message length in bytes (excluding the trailing NUL);
// zero means the last call on this thread succeeded. When `buf` is non-null
// and `cap > 0`, up to `cap − 1` bytes are copied and NUL-terminated
// (truncating if `cap` is too small).
//
// # Safety
//
// `buf` must either be null or point to `cap` writable bytes.
size_t dtc_last_error_message(char *buf, size_t cap);

// Create a parameter handle from the detuning parameterization
// `h = (π + 2·epsilon·period)/period`.
//
// On success writes a handle to `*out`; release it with [`dtc_params_free`].
//
// # Safety
//
// `out` must point to writable storage for one pointer.
enum DtcStatus dtc_params_new_from_epsilon(double period,
                                           double epsilon,
                                           double j,
                                           double lambda,
                                           double phi,
                                           size_t n_sites,
                                           struct DtcParams **out);

// Create a parameter handle from the raw drive strength `h`
// (`epsilon = (h·period − π)/(2·period)`).
//
// On success writes a handle to `*out`; release it with [`dtc_params_free`].
//
// # Safety
//
// `out` must point to writable storage for one pointer.
enum DtcStatus dtc_params_new_from_field(double period,
                                         double h,
                                         double j,
                                         double lambda,
                                         double phi,
                                         size_t n_sites,
                                         struct DtcParams **out);

// Release a parameter handle. Passing null is a no-op.
//
// # Safety
//
// `params` must be null or a handle obtained from a `dtc_params_new_*`
// call that has not been freed already.
void dtc_params_free(struct DtcParams *params);

// Mean-field stroboscopic evolution from the chart point `(p0, q0)`.
//
// Integrates the classical equations of motion with fixed-step RK4
// (`steps_per_period ≥ 100` steps per drive period) and writes
// `⟨σ_y⟩` at `t = nT` into `sigma_y_out[n]` for `n = 0..=n_periods`.
//
// # Safety
//
// `params` must be a live handle; `sigma_y_out` must point to
// `n_periods + 1` writable doubles.
enum DtcStatus dtc_mf_stroboscopic(const struct DtcParams *params,
                                   double p0,
                                   double q0,
                                   size_t n_periods,
                                   size_t steps_per_period,
                                   double *sigma_y_out);

// Dense exact evolution (chains of up to 14 sites).
//
// Integrates the Schrödinger equation with fixed-step RK4 of step `dt`
// (`dt ≤ T/100`, dividing the period) and writes the magnetization at
// `t = nT` into `magnetization_out[n]` for `n = 0..=n_periods`.
//
// # Safety
//
// `params` must be a live handle; `magnetization_out` must point to
// `n_periods + 1` writable doubles.
enum DtcStatus dtc_ed_evolve(const struct DtcParams *params,
                             double dt,
                             size_t n_periods,
                             double *magnetization_out);

// Matrix-product-state evolution with bond cap `max_bond`.
//
// Runs the third-order gate decomposition with substep `dt` (dividing the
// period) and writes the magnetization at `t = nT` into
// `magnetization_out[n]` for `n = 0..=n_periods`. A non-positive
// `truncation_budget` selects the default per-period budget (1e−2).
// When `cumulative_truncation_out` is non-null it receives the total
// discarded weight of the run.
//
// # Safety
//
// `params` must be a live handle; `magnetization_out` must point to
// `n_periods + 1` writable doubles; `cumulative_truncation_out` must be
// null or point to one writable double.
enum DtcStatus dtc_mps_evolve(const struct DtcParams *params,
                              size_t max_bond,
                              double dt,
                              size_t n_periods,
                              double truncation_budget,
                              double *magnetization_out,
                              double *cumulative_truncation_out);

// Power spectrum of a stroboscopic series.
//
// Writes `|s̃|²(Ω_k)` for `k = 0..len−1` on the grid `Ω_k = 2πk/(len·period)`
// into `magnitude_sq_out`; the drive subharmonic `ω/2` sits at bin
// `len/2` (even `len`).
//
// # Safety
//
// `values` must point to `len` readable doubles and `magnitude_sq_out` to
// `len` writable doubles.
enum DtcStatus dtc_power_spectrum(const double *values,
                                  size_t len,
                                  double period,
                                  double *magnitude_sq_out);

// Subharmonic order parameter: `|s̃|²` at exactly `Ω = ω/2`.
//
// Requires an even-length series.
//
// # Safety
//
// `values` must point to `len` readable doubles and `peak_out` to one
// writable double.
enum DtcStatus dtc_subharmonic_peak(const double *values,
                                    size_t len,
                                    double period,
                                    double *peak_out);

// Dominance ratio: spectrum magnitude at `ω/2` divided by the largest
// magnitude over every other bin (DC included). Infinite when all other
// bins are exactly zero. Requires an even-length series.
//
// # Safety
//
// `values` must point to `len` readable doubles and `ratio_out` to one
// writable double.
enum DtcStatus dtc_dominance_ratio(const double *values,
                                   size_t len,
                                   double period,
                                   double *ratio_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DTC_H */
