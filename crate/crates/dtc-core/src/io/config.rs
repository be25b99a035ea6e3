//! Flat TOML run configuration.
//!
//! Keys use the dimensionless caption names (`JT`, `lambdaT`, `epsilonT`,
//! `dt_over_T`, …) so a configuration maps one-to-one onto the experiment it
//! describes. Every key is optional at parse time; each subcommand demands
//! the keys it needs and fills documented defaults for the rest. Unknown
//! keys are fatal and the error names the offender — a misspelled key never
//! silently becomes a default.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{self, ModelParams};
use crate::{Error, Result};

/// One flat run configuration (all keys optional at parse time).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Drive period T.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Number of sites N.
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Transverse field strength h (alternative to `epsilonT`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Detuning product εT (alternative to `h`).
    #[serde(rename = "epsilonT", skip_serializing_if = "Option::is_none")]
    pub epsilon_t: Option<f64>,
    /// Coupling product JT (default 0).
    #[serde(rename = "JT", skip_serializing_if = "Option::is_none")]
    pub j_t: Option<f64>,
    /// Static-field product λT (default 0).
    #[serde(rename = "lambdaT", skip_serializing_if = "Option::is_none")]
    pub lambda_t: Option<f64>,
    /// Magnetization angle φ (default 0).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    /// Quantum-engine substep as a fraction of T (default 0.001).
    #[serde(rename = "dt_over_T", skip_serializing_if = "Option::is_none")]
    pub dt_over_t: Option<f64>,
    /// MPS bond-dimension cap M (required by the mps engine).
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Number of drive periods (default 100).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_periods: Option<u32>,
    /// Classical RK4 steps per period (default 1000).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps_per_period: Option<u32>,
    /// Mean-field initial momentum P(0) (default π/2).
    #[serde(rename = "P0", skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    /// Mean-field initial coordinate Q(0) (default sin φ).
    #[serde(rename = "Q0", skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    /// PSOS seed-grid resolution in P (default 24).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_p: Option<u32>,
    /// PSOS seed-grid resolution in Q (default 24).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_q: Option<u32>,
    /// PSOS seed-grid half-extent in Q (default 0.95).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<f64>,
    /// δ-scan start (default 0.01).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_start: Option<f64>,
    /// δ-scan stop, inclusive (default 0.20).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_stop: Option<f64>,
    /// δ-scan point count (default 20).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_count: Option<u32>,
    /// MPS per-period truncation-weight budget (default 1e−2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_budget: Option<f64>,
}

impl RunConfig {
    /// Parse from TOML text. Unknown keys are fatal; the error names them.
    pub fn from_toml_str(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    /// Read and parse a TOML configuration file.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Self::from_toml_str(&text)
    }

    /// Serialize back to TOML (used by manifests and tests).
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Physical parameters from the model keys.
    ///
    /// `default_n` supplies N for engines where the site count is not
    /// physical (the mean-field reduction); quantum engines pass `None`,
    /// making a missing `N` an error. `default_epsilon_t` likewise covers
    /// runs that override the detuning internally (δ-scans).
    pub fn model_params(
        &self,
        default_n: Option<u32>,
        default_epsilon_t: Option<f64>,
    ) -> Result<ModelParams> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: Option<f64>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        put("T", self.t);
        put("N", self.n.or(default_n).map(f64::from));
        put("h", self.h);
        put(
            "epsilonT",
            self.epsilon_t
                .or(if self.h.is_none() { default_epsilon_t } else { None }),
        );
        put("JT", self.j_t);
        put("lambdaT", self.lambda_t);
        put("phi", self.phi);
        model::build_params(&map)
    }

    // --- resolved accessors (value actually used, after defaults) ---

    pub fn dt_over_t(&self) -> Result<f64> {
        let v = self.dt_over_t.unwrap_or(1e-3);
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Config(format!(
                "key `dt_over_T` must lie in (0, 1), got {v}"
            )));
        }
        Ok(v)
    }

    pub fn n_periods(&self) -> usize {
        self.n_periods.unwrap_or(100) as usize
    }

    pub fn steps_per_period(&self) -> usize {
        self.steps_per_period.unwrap_or(1000) as usize
    }

    /// Bond cap; required whenever the mps engine runs.
    pub fn max_bond(&self) -> Result<usize> {
        match self.m {
            Some(m) if m >= 1 => Ok(m as usize),
            Some(m) => Err(Error::Config(format!("key `M` must be ≥ 1, got {m}"))),
            None => Err(Error::Config(
                "missing key `M` (bond-dimension cap for the mps engine)".into(),
            )),
        }
    }

    pub fn truncation_budget(&self) -> f64 {
        self.truncation_budget.unwrap_or(1e-2)
    }

    /// Mean-field initial chart point; defaults to the chart image of the
    /// uniform `|ψ₊(φ)⟩` product state, `(P, Q) = (π/2, sin φ)`.
    pub fn initial_chart_point(&self) -> (f64, f64) {
        let phi = self.phi.unwrap_or(0.0);
        (
            self.p0.unwrap_or(FRAC_PI_2),
            self.q0.unwrap_or_else(|| phi.sin()),
        )
    }

    /// PSOS seed grid: `grid_p × grid_q` points over `P ∈ (−π, π]`,
    /// `Q ∈ [−q_max, q_max]`.
    pub fn seed_grid(&self) -> Result<Vec<crate::meanfield::MeanFieldState>> {
        let np = self.grid_p.unwrap_or(24) as usize;
        let nq = self.grid_q.unwrap_or(24) as usize;
        let q_max = self.q_max.unwrap_or(0.95);
        if np < 1 || nq < 1 {
            return Err(Error::Config(format!(
                "keys `grid_p`/`grid_q` must be ≥ 1, got {np}×{nq}"
            )));
        }
        if !(q_max > 0.0 && q_max < 1.0) {
            return Err(Error::Config(format!(
                "key `q_max` must lie in (0, 1), got {q_max}"
            )));
        }
        let pi = std::f64::consts::PI;
        let mut seeds = Vec::with_capacity(np * nq);
        for i in 0..np {
            let p = -pi + 2.0 * pi * (i + 1) as f64 / np as f64;
            for j in 0..nq {
                let q = if nq == 1 {
                    0.0
                } else {
                    -q_max + 2.0 * q_max * j as f64 / (nq - 1) as f64
                };
                seeds.push(crate::meanfield::MeanFieldState { q, p });
            }
        }
        Ok(seeds)
    }

    /// δ grid for scans: `delta_count` evenly spaced points from
    /// `delta_start` to `delta_stop` inclusive.
    pub fn delta_grid(&self) -> Result<Vec<f64>> {
        let start = self.delta_start.unwrap_or(0.01);
        let stop = self.delta_stop.unwrap_or(0.20);
        let count = self.delta_count.unwrap_or(20) as usize;
        if count < 1 {
            return Err(Error::Config("key `delta_count` must be ≥ 1".into()));
        }
        if !(start.is_finite() && stop.is_finite()) || stop < start {
            return Err(Error::Config(format!(
                "δ range [{start}, {stop}] is not a finite increasing interval"
            )));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    }
}
