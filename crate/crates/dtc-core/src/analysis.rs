//! Stroboscopic power spectra, subharmonic-peak extraction, and the δ-scan
//! diagnostic shared by all engines.
//!
//! The spectrum convention is
//! `⟨s̃⟩(Ω_k) = (1/𝒩) Σ_{n=1}^{𝒩} s_n e^{+i n Ω_k T}` on the discrete grid
//! `Ω_k = 2πk/(𝒩T)`, `k = 0..𝒩−1`, which contains the subharmonic frequency
//! `ω/2` exactly at `k = 𝒩/2` when `𝒩` is even. Reported magnitudes are
//! `|⟨s̃⟩|²`. Two independent implementations are kept on purpose: a fast
//! FFT path ([`power_spectrum`]) and a direct O(𝒩²) summation
//! ([`power_spectrum_reference`]); they are required to agree to 1e−12.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::meanfield::{self, MeanFieldState};
use crate::model::{MagnetizationAxis, ModelParams, ProductStateSpec};
use crate::{ed, mps};
use crate::{Error, Result};

/// Observable values sampled once per drive period: `s_n` at `t = nT` for
/// `n = 1..𝒩`.
#[derive(Debug, Clone)]
pub struct StroboscopicSeries {
    values: Vec<f64>,
    period: f64,
    label: String,
}

impl StroboscopicSeries {
    /// Build a series of magnetization-type samples (each `|s_n| ≤ 1 + 1e−9`).
    pub fn new(values: Vec<f64>, period: f64, label: impl Into<String>) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidParams(format!(
                "period must be positive, got {period}"
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 + 1e-9 {
                return Err(Error::InvalidParams(format!(
                    "sample {} out of magnetization range: {v}",
                    i + 1
                )));
            }
        }
        Ok(StroboscopicSeries {
            values,
            period,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn period(&self) -> f64 {
        self.period
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Power spectrum on the grid `Ω_k = 2πk/(𝒩T)`.
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    /// Frequencies `Ω_k`, `k = 0..𝒩−1`.
    pub omegas: Vec<f64>,
    /// `|⟨s̃⟩|²(Ω_k)`.
    pub magnitudes: Vec<f64>,
    /// 𝒩.
    pub n_samples: usize,
    /// Drive period `T` (so `ω = 2π/T`).
    pub period: f64,
}

impl PowerSpectrum {
    /// `Ω_k / ω = k / 𝒩`.
    pub fn omega_over_drive(&self, k: usize) -> f64 {
        k as f64 / self.n_samples as f64
    }

    /// Bin index of `ω/2`; requires even 𝒩.
    pub fn subharmonic_bin(&self) -> Result<usize> {
        if self.n_samples % 2 != 0 {
            return Err(Error::OddSeriesLength(self.n_samples));
        }
        Ok(self.n_samples / 2)
    }
}

fn spectrum_from_magnitudes(series: &StroboscopicSeries, magnitudes: Vec<f64>) -> PowerSpectrum {
    let n = series.len();
    let omega_step = 2.0 * PI / (n as f64 * series.period());
    PowerSpectrum {
        omegas: (0..n).map(|k| k as f64 * omega_step).collect(),
        magnitudes,
        n_samples: n,
        period: series.period(),
    }
}

/// Fast-transform spectrum.
///
/// Computes `(1/𝒩) Σ_{n=1}^{𝒩} s_n e^{+i 2πkn/𝒩}` for every `k` via an
/// unnormalized inverse FFT of the index-rotated sequence
/// `u_0 = s_𝒩, u_m = s_m (m = 1..𝒩−1)`.
pub fn power_spectrum(series: &StroboscopicSeries) -> Result<PowerSpectrum> {
    let n = series.len();
    if n < 2 {
        return Err(Error::EmptySeries);
    }
    let vals = series.values();
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    buf.push(Complex64::new(vals[n - 1], 0.0));
    for v in &vals[..n - 1] {
        buf.push(Complex64::new(*v, 0.0));
    }
    FftPlanner::new()
        .plan_fft_inverse(n)
        .process(&mut buf);
    let inv_n2 = 1.0 / (n as f64 * n as f64);
    Ok(spectrum_from_magnitudes(
        series,
        buf.iter().map(|x| x.norm_sqr() * inv_n2).collect(),
    ))
}

/// Direct O(𝒩²) reference spectrum — the independent check of
/// [`power_spectrum`]. Kahan-compensated summation.
pub fn power_spectrum_reference(series: &StroboscopicSeries) -> Result<PowerSpectrum> {
    let n = series.len();
    if n < 2 {
        return Err(Error::EmptySeries);
    }
    let vals = series.values();
    let mut magnitudes = Vec::with_capacity(n);
    for k in 0..n {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        let (mut cre, mut cim) = (0.0f64, 0.0f64);
        for (idx, s) in vals.iter().enumerate() {
            let nn = (idx + 1) as f64; // summation index n = 1..𝒩
            let theta = 2.0 * PI * (k as f64) * nn / (n as f64);
            let (sin_t, cos_t) = theta.sin_cos();
            // Kahan update for both components
            let yr = s * cos_t - cre;
            let tr = re + yr;
            cre = (tr - re) - yr;
            re = tr;
            let yi = s * sin_t - cim;
            let ti = im + yi;
            cim = (ti - im) - yi;
            im = ti;
        }
        let inv_n = 1.0 / n as f64;
        magnitudes.push((re * inv_n).powi(2) + (im * inv_n).powi(2));
    }
    Ok(spectrum_from_magnitudes(series, magnitudes))
}

/// Magnitude at the exact `ω/2` bin (`k = 𝒩/2`; 𝒩 must be even).
pub fn subharmonic_peak(spectrum: &PowerSpectrum) -> Result<f64> {
    let k = spectrum.subharmonic_bin()?;
    Ok(spectrum.magnitudes[k])
}

/// Ratio of the `ω/2` magnitude to the largest other bin (DC included).
/// Infinite when every other bin is exactly zero.
pub fn dominance_ratio(spectrum: &PowerSpectrum) -> Result<f64> {
    let k_half = spectrum.subharmonic_bin()?;
    let peak = spectrum.magnitudes[k_half];
    let other = spectrum
        .magnitudes
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != k_half)
        .map(|(_, m)| *m)
        .fold(0.0f64, f64::max);
    if other == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(peak / other)
}

/// Indices of strict local maxima of the spectrum whose frequency lies
/// within `|Ω/ω − center_frac| ≤ half_width_frac`, excluding the exact
/// center bin if it exists.
pub fn local_maxima_near(
    spectrum: &PowerSpectrum,
    center_frac: f64,
    half_width_frac: f64,
) -> Vec<usize> {
    let n = spectrum.n_samples;
    let mut out = Vec::new();
    for k in 1..n - 1 {
        let frac = k as f64 / n as f64;
        if (frac - center_frac).abs() > half_width_frac {
            continue;
        }
        if (frac - center_frac).abs() < 0.5 / n as f64 {
            continue; // the center bin itself
        }
        let m = spectrum.magnitudes[k];
        if m > spectrum.magnitudes[k - 1] && m > spectrum.magnitudes[k + 1] {
            out.push(k);
        }
    }
    out
}

/// Backend selection for [`scan_delta`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EngineSelector {
    MeanField { steps_per_period: usize },
    Mps { max_bond: usize, dt_over_t: f64 },
    Ed { dt_over_t: f64 },
}

/// One point of a δ-scan.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub delta: f64,
    /// Subharmonic peak, when the engine run succeeded.
    pub peak: Option<f64>,
    /// Engine failure message, recorded without aborting the scan.
    pub error: Option<String>,
}

/// Result curve of [`scan_delta`].
#[derive(Debug, Clone)]
pub struct ScanCurve {
    pub points: Vec<ScanPoint>,
    pub n_periods: usize,
}

/// Subharmonic peak as a function of the imperfection strength δ, setting
/// `εT = λT = δ` per point and running the selected engine from the standard
/// initial state (the uniform `|ψ₊(φ)⟩` product state / its chart image
/// `(P, Q) = (π/2, sin φ)`).
///
/// Points run in deterministic order; per-point engine failures are recorded
/// on the point instead of aborting the scan.
pub fn scan_delta(
    base: &ModelParams,
    delta_values: &[f64],
    n_periods: usize,
    engine: &EngineSelector,
) -> Result<ScanCurve> {
    if n_periods < 2 || n_periods % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "n_periods must be even and ≥ 2 for the ω/2 bin, got {n_periods}"
        )));
    }
    for d in delta_values {
        if !d.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite δ value {d}")));
        }
    }
    let mut points = Vec::with_capacity(delta_values.len());
    for &delta in delta_values {
        let point = run_scan_point(base, delta, n_periods, engine);
        points.push(match point {
            Ok(peak) => ScanPoint {
                delta,
                peak: Some(peak),
                error: None,
            },
            Err(e) => ScanPoint {
                delta,
                peak: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(ScanCurve { points, n_periods })
}

fn run_scan_point(
    base: &ModelParams,
    delta: f64,
    n_periods: usize,
    engine: &EngineSelector,
) -> Result<f64> {
    let t = base.period;
    let params = ModelParams::from_epsilon(
        t,
        delta / t,
        base.j,
        delta / t,
        base.phi,
        base.n_sites,
    )?;
    let series = match engine {
        EngineSelector::MeanField { steps_per_period } => {
            let spec = ProductStateSpec::new(params.phi, 1, 1)?;
            let start = MeanFieldState::from_spinor(crate::model::local_spinor(&spec));
            meanfield::stroboscopic(&start, n_periods, &params, *steps_per_period)?.series()
        }
        EngineSelector::Mps { max_bond, dt_over_t } => {
            let spec = ProductStateSpec::new(params.phi, 1, params.n_sites)?;
            let state = mps::mps_from_product(&spec, *max_bond)?;
            let axis = MagnetizationAxis::new(params.phi);
            let record = mps::evolve_periods(
                state,
                &params,
                dt_over_t * t,
                n_periods,
                &axis,
                &mps::EvolveOptions::default(),
            )?;
            record.series
        }
        EngineSelector::Ed { dt_over_t } => {
            let spec = ProductStateSpec::new(params.phi, 1, params.n_sites)?;
            let state = ed::DenseState::from_product(&spec)?;
            let axis = MagnetizationAxis::new(params.phi);
            ed::ed_evolve(state, &params, dt_over_t * t, n_periods, &axis)?.series
        }
    };
    subharmonic_peak(&power_spectrum(&series)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<f64>) -> StroboscopicSeries {
        StroboscopicSeries::new(values, 1.0, "test").unwrap()
    }

    /// Deterministic pseudo-random values in [−1, 1].
    fn lcg_values(n: usize, mut seed: u64) -> Vec<f64> {
        (0..n)
            .map(|_| {
                seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn alternating_series_peaks_at_half() {
        let n = 256;
        let s = series((1..=n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect());
        let spec = power_spectrum(&s).unwrap();
        assert!((spec.magnitudes[n / 2] - 1.0).abs() < 1e-12);
        for (k, m) in spec.magnitudes.iter().enumerate() {
            if k != n / 2 {
                assert!(*m <= 1e-12, "bin {k} = {m}");
            }
        }
        assert!((subharmonic_peak(&spec).unwrap() - 1.0).abs() < 1e-12);
        assert!(dominance_ratio(&spec).unwrap() > 1e10);
    }

    #[test]
    fn constant_series_is_dc() {
        let n = 256;
        let s = series(vec![1.0; n]);
        let spec = power_spectrum(&s).unwrap();
        assert!((spec.magnitudes[0] - 1.0).abs() < 1e-12);
        assert!(spec.magnitudes[n / 2] <= 1e-12);
        assert!(subharmonic_peak(&spec).unwrap() <= 1e-12);
    }

    #[test]
    fn real_input_symmetry() {
        let s = series(lcg_values(240, 7));
        let spec = power_spectrum(&s).unwrap();
        for k in 1..240 {
            let a = spec.magnitudes[k];
            let b = spec.magnitudes[240 - k];
            assert!((a - b).abs() <= 1e-12 * (a + b).max(1e-30), "k = {k}");
        }
    }

    #[test]
    fn parseval_and_fast_vs_naive() {
        for (n, seed) in [(2usize, 1u64), (8, 2), (64, 3), (240, 4), (1200, 5), (4096, 6)] {
            let vals = lcg_values(n, seed);
            let sum_sq: f64 = vals.iter().map(|v| v * v).sum();
            let s = series(vals);
            let fast = power_spectrum(&s).unwrap();
            let slow = power_spectrum_reference(&s).unwrap();
            let total: f64 = fast.magnitudes.iter().sum();
            assert!(
                (total - sum_sq / n as f64).abs() <= 1e-10,
                "Parseval at 𝒩 = {n}: {total} vs {}",
                sum_sq / n as f64
            );
            for k in 0..n {
                assert!(
                    (fast.magnitudes[k] - slow.magnitudes[k]).abs() <= 1e-12,
                    "𝒩 = {n}, bin {k}"
                );
            }
        }
    }

    #[test]
    fn grid_is_canonical() {
        let s = series(lcg_values(100, 11));
        let spec = power_spectrum(&s).unwrap();
        assert_eq!(spec.omegas.len(), 100);
        assert_eq!(spec.n_samples, 100);
        assert!((spec.omegas[1] - 2.0 * PI / 100.0).abs() < 1e-15);
        assert!((spec.omega_over_drive(50) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn odd_length_subharmonic_rejected() {
        let s = series(lcg_values(9, 3));
        let spec = power_spectrum(&s).unwrap();
        assert!(matches!(
            subharmonic_peak(&spec),
            Err(Error::OddSeriesLength(9))
        ));
    }

    #[test]
    fn short_series_rejected() {
        let s = series(vec![0.5]);
        assert!(matches!(power_spectrum(&s), Err(Error::EmptySeries)));
        let s = StroboscopicSeries::new(vec![], 1.0, "x").unwrap();
        assert!(matches!(power_spectrum(&s), Err(Error::EmptySeries)));
    }

    #[test]
    fn magnetization_range_enforced() {
        assert!(StroboscopicSeries::new(vec![0.0, 1.5], 1.0, "bad").is_err());
        assert!(StroboscopicSeries::new(vec![0.0, f64::NAN], 1.0, "bad").is_err());
    }

    #[test]
    fn local_maxima_detection() {
        let n = 100;
        let mut vals = vec![0.0f64; n];
        // craft a spectrum directly
        let mut spec = PowerSpectrum {
            omegas: (0..n).map(|k| k as f64).collect(),
            magnitudes: {
                vals[50] = 1.0; // center
                vals[46] = 0.4; // side peak
                vals[54] = 0.35; // side peak
                vals[45] = 0.1;
                vals[47] = 0.1;
                vals
            },
            n_samples: n,
            period: 1.0,
        };
        spec.magnitudes[53] = 0.05;
        spec.magnitudes[55] = 0.05;
        let peaks = local_maxima_near(&spec, 0.5, 0.1);
        assert_eq!(peaks, vec![46, 54]);
    }

    #[test]
    fn scan_delta_meanfield_smoke() {
        let base = ModelParams::from_epsilon(1.0, 0.0, 1.0, 0.0, 0.0, 1).unwrap();
        let curve = scan_delta(
            &base,
            &[0.01, 0.05],
            40,
            &EngineSelector::MeanField {
                steps_per_period: 1000,
            },
        )
        .unwrap();
        assert_eq!(curve.points.len(), 2);
        for pt in &curve.points {
            let peak = pt.peak.expect("mean-field point should succeed");
            assert!((0.0..=1.0 + 1e-9).contains(&peak));
            assert!(pt.error.is_none());
        }
        // odd n_periods rejected
        assert!(scan_delta(
            &base,
            &[0.01],
            41,
            &EngineSelector::MeanField {
                steps_per_period: 1000
            }
        )
        .is_err());
    }
}
