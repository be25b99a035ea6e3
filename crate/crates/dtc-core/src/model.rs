//! Model layer shared by every engine: physical parameters, initial product
//! states, and single-site magnetization observables.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * The chain Hamiltonian is
//!   `H(t) = −h·cos²(ωt/2)·Σ_j σ_j^x − J·Σ_j σ_j^z σ_{j+1}^z − λ·Σ_j (σ_j^y + σ_j^z)`
//!   with open boundaries (the ZZ sum runs over the N−1 nearest-neighbor
//!   bonds). The sign of the λ coupling is part of the model definition: with
//!   ε, λ > 0 it places the period-doubling islands of the stroboscopic map
//!   at the ±y states (see the `meanfield` module).
//! * The drive envelope is `cos²(ωt/2)` with `ω = 2π/T`.
//! * The detuning `ε` is defined through `hT/2 = π/2 + εT`, so
//!   `h = (π + 2εT)/T`; `h` and `ε` are interchangeable parameterizations.
//! * The magnetization direction is `n̂(φ) = cos φ ŷ + sin φ ẑ` (the x-axis
//!   is the drive axis and never a magnetization axis).
//! * Product states `|ψ±(φ)⟩` are per-site eigenvectors of `n̂(φ)·σ` with
//!   eigenvalue ±1. The global-phase freedom is fixed by choosing the first
//!   spinor component real and non-negative; the second component then
//!   carries a phase `±i` (for `cos φ > 0`), which makes the relative phase
//!   `P = ξ₂ − ξ₁` of the canonical mean-field chart well defined.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::{Error, Result};

/// All physical parameters of the driven chain.
///
/// `omega` and exactly one of `h`/`epsilon` are derived quantities; the
/// constructors keep them consistent (`omega·T = 2π`, `h = (π + 2εT)/T`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Transverse field strength (energy units, ħ = 1).
    pub h: f64,
    /// Drive period T.
    pub period: f64,
    /// Drive angular frequency, always `2π / period`.
    pub omega: f64,
    /// Nearest-neighbor Ising coupling J.
    pub j: f64,
    /// Static-field strength λ; the chain couples to `−λ·Σ (σ^y + σ^z)`.
    pub lambda: f64,
    /// Detuning ε defined by `hT/2 = π/2 + εT`.
    pub epsilon: f64,
    /// Number of sites N.
    pub n_sites: usize,
    /// Magnetization direction angle φ.
    pub phi: f64,
}

impl ModelParams {
    /// Build from the detuning parameterization: `h = (π + 2εT)/T`.
    pub fn from_epsilon(
        period: f64,
        epsilon: f64,
        j: f64,
        lambda: f64,
        phi: f64,
        n_sites: usize,
    ) -> Result<Self> {
        let h = (PI + 2.0 * epsilon * period) / period;
        Self::validate_and_build(h, period, j, lambda, epsilon, n_sites, phi)
    }

    /// Build from the raw field strength: `ε = (hT − π)/(2T)`.
    pub fn from_field(
        period: f64,
        h: f64,
        j: f64,
        lambda: f64,
        phi: f64,
        n_sites: usize,
    ) -> Result<Self> {
        let epsilon = (h * period - PI) / (2.0 * period);
        Self::validate_and_build(h, period, j, lambda, epsilon, n_sites, phi)
    }

    fn validate_and_build(
        h: f64,
        period: f64,
        j: f64,
        lambda: f64,
        epsilon: f64,
        n_sites: usize,
        phi: f64,
    ) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidParams(format!(
                "T must be positive and finite, got {period}"
            )));
        }
        if n_sites < 1 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        for (name, v) in [("h", h), ("J", j), ("lambda", lambda), ("phi", phi)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(ModelParams {
            h,
            period,
            omega: 2.0 * PI / period,
            j,
            lambda,
            epsilon,
            n_sites,
            phi,
        })
    }

    /// Drive envelope `cos²(ωt/2)` at time `t`.
    pub fn envelope(&self, t: f64) -> f64 {
        let c = (0.5 * self.omega * t).cos();
        c * c
    }

    /// Dimensionless products as used in figure captions and configs.
    pub fn jt(&self) -> f64 {
        self.j * self.period
    }
    pub fn lambda_t(&self) -> f64 {
        self.lambda * self.period
    }
    pub fn epsilon_t(&self) -> f64 {
        self.epsilon * self.period
    }
}

/// Build [`ModelParams`] from a flat key/value map.
///
/// Required keys: `T`, `N`, and exactly one of `h` / `epsilonT` (both are
/// accepted only when consistent). Optional keys (default 0): `JT`,
/// `lambdaT`, `phi`. Any other key is rejected by name.
pub fn build_params(config: &BTreeMap<String, f64>) -> Result<ModelParams> {
    const KNOWN: [&str; 7] = ["T", "N", "h", "epsilonT", "JT", "lambdaT", "phi"];
    for key in config.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
    }
    let get = |k: &str| config.get(k).copied();
    let period = get("T").ok_or_else(|| Error::Config("missing key `T`".into()))?;
    let n_f = get("N").ok_or_else(|| Error::Config("missing key `N`".into()))?;
    if !(n_f.is_finite() && n_f >= 1.0 && n_f.fract() == 0.0) {
        return Err(Error::Config(format!(
            "key `N` must be a positive integer, got {n_f}"
        )));
    }
    let n_sites = n_f as usize;
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::Config(format!("key `T` must be positive, got {period}")));
    }
    let j = get("JT").unwrap_or(0.0) / period;
    let lambda = get("lambdaT").unwrap_or(0.0) / period;
    let phi = get("phi").unwrap_or(0.0);

    match (get("h"), get("epsilonT")) {
        (None, None) => Err(Error::Config(
            "one of `h` or `epsilonT` is required".into(),
        )),
        (Some(h), None) => ModelParams::from_field(period, h, j, lambda, phi, n_sites),
        (None, Some(et)) => {
            ModelParams::from_epsilon(period, et / period, j, lambda, phi, n_sites)
        }
        (Some(h), Some(et)) => {
            let h_from_eps = (PI + 2.0 * et) / period;
            let scale = h.abs().max(h_from_eps.abs()).max(1.0);
            if (h - h_from_eps).abs() > 1e-12 * scale {
                return Err(Error::Config(format!(
                    "keys `h` and `epsilonT` are inconsistent: h = {h}, but epsilonT implies h = {h_from_eps}"
                )));
            }
            ModelParams::from_field(period, h, j, lambda, phi, n_sites)
        }
    }
}

/// Specification of a uniform product state `|ψ±(φ)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductStateSpec {
    /// Magnetization direction angle φ.
    pub phi: f64,
    /// Eigenvalue sign: +1 or −1.
    pub sign: i8,
    /// Number of sites.
    pub n_sites: usize,
}

impl ProductStateSpec {
    pub fn new(phi: f64, sign: i8, n_sites: usize) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParams(format!(
                "sign must be +1 or -1, got {sign}"
            )));
        }
        if n_sites < 1 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParams(format!("phi must be finite, got {phi}")));
        }
        Ok(ProductStateSpec { phi, sign, n_sites })
    }
}

/// Magnetization direction `n̂(φ) = (0, cos φ, sin φ)` in (x, y, z) components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationAxis {
    pub phi: f64,
    pub components: [f64; 3],
}

impl MagnetizationAxis {
    pub fn new(phi: f64) -> Self {
        MagnetizationAxis {
            phi,
            components: [0.0, phi.cos(), phi.sin()],
        }
    }
}

/// Per-site spinor `(ψ₁, ψ₂)` of `|ψ±(φ)⟩` in the σ^z basis
/// (`ψ₁` multiplies |↑⟩).
///
/// `ψ₁ = sqrt((1 ± sin φ)/2)` is real and non-negative;
/// `ψ₂ = ± i·sgn(cos φ)·sqrt((1 ∓ sin φ)/2)`. The `i` makes the spinor an
/// exact ±1-eigenvector of `cos φ·σ^y + sin φ·σ^z`; at `φ = 0`, sign +1 this
/// is `(1, i)/√2`, the +y eigenstate.
pub fn local_spinor(spec: &ProductStateSpec) -> (Complex64, Complex64) {
    let s = f64::from(spec.sign);
    let sin_phi = spec.phi.sin();
    let cos_sign = if spec.phi.cos() < 0.0 { -1.0 } else { 1.0 };
    let psi1 = (0.5 * (1.0 + s * sin_phi)).max(0.0).sqrt();
    let psi2_mag = (0.5 * (1.0 - s * sin_phi)).max(0.0).sqrt();
    (
        Complex64::new(psi1, 0.0),
        Complex64::new(0.0, s * cos_sign * psi2_mag),
    )
}

/// Bloch vector `(⟨σ^x⟩, ⟨σ^y⟩, ⟨σ^z⟩)` of a normalized spinor.
pub fn spinor_bloch(spinor: (Complex64, Complex64)) -> [f64; 3] {
    let (a, b) = spinor;
    let cross = a.conj() * b;
    [
        2.0 * cross.re,
        2.0 * cross.im,
        a.norm_sqr() - b.norm_sqr(),
    ]
}

/// `⟨ψ| n̂(φ)·σ |ψ⟩` for a normalized single-site spinor.
///
/// Rejects spinors whose norm deviates from 1 by more than 1e−10.
pub fn magnetization_single(
    spinor: (Complex64, Complex64),
    axis: &MagnetizationAxis,
) -> Result<f64> {
    let norm = (spinor.0.norm_sqr() + spinor.1.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }
    let [_, sy, sz] = spinor_bloch(spinor);
    Ok(axis.components[1] * sy + axis.components[2] * sz)
}
