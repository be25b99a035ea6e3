//! Semiclassical mean-field engine.
//!
//! Replacing the chain state by a uniform product spinor `(ψ₁, ψ₂)` with
//! `Q = |ψ₁|² − |ψ₂|²` (population imbalance) and `P = ξ₂ − ξ₁` (relative
//! phase) yields the classical Hamiltonian per site
//!
//! ```text
//! ℋ(Q, P, t) = −h·√(1−Q²)·cos P·cos²(ωt/2) − J·(1 + Q²) − λ·V(Q, P)
//! V(Q, P)    = √(1−Q²)·sin P + Q
//! ```
//!
//! with equations of motion `dQ/dt = −2 ∂ℋ/∂P`, `dP/dt = +2 ∂ℋ/∂Q` — the
//! factor 2 comes from the Pauli-matrix normalization (the canonical momentum
//! conjugate to `P` is `Q/2`). Spin expectation values in this chart are
//! `⟨σ^x⟩ = √(1−Q²) cos P`, `⟨σ^y⟩ = √(1−Q²) sin P`, `⟨σ^z⟩ = Q`.
//!
//! The `(Q, P)` chart is singular at the poles `|Q| = 1`, which ideal drive
//! trajectories pass close to once per period. [`eom_rhs`] and [`mf_energy`]
//! implement the chart equations literally (with explicit pole errors), while
//! [`integrate`] advances the *same flow* in the equivalent regular
//! Bloch-vector form `dm/dt = 2 ∇_m ℋ × m` with fixed-step RK4 and converts
//! samples back to `(Q, P)`; the two right-hand sides are verified against
//! each other in the test suite. This keeps fixed-step integration accurate
//! through pole transits without adaptive stepping.

use std::f64::consts::PI;

use crate::analysis::StroboscopicSeries;
use crate::model::ModelParams;
use crate::{Error, Result};

/// Clearance that defines the pole zone of the `(Q, P)` chart.
const POLE_CLEARANCE: f64 = 1e-12;

/// Drive envelope selector: the physical harmonic envelope `cos²(ωt/2)`, or
/// its time average 1/2 (an autonomous Hamiltonian useful for conservation
/// checks).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Drive {
    Harmonic,
    FrozenMean,
}

impl Drive {
    fn envelope(self, params: &ModelParams, t: f64) -> f64 {
        match self {
            Drive::Harmonic => params.envelope(t),
            Drive::FrozenMean => 0.5,
        }
    }
}

/// Canonical mean-field state `(Q, P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState {
    /// Population imbalance, `|Q| ≤ 1`.
    pub q: f64,
    /// Relative phase (radians).
    pub p: f64,
}

impl MeanFieldState {
    pub fn new(p: f64, q: f64) -> Self {
        MeanFieldState { q, p }
    }

    /// Copy with `P` wrapped to `(−π, π]`.
    pub fn wrapped(self) -> Self {
        MeanFieldState {
            q: self.q,
            p: wrap_angle(self.p),
        }
    }

    /// `⟨σ^y⟩ = √(1−Q²)·sin P`.
    pub fn sigma_y(&self) -> f64 {
        (1.0 - self.q * self.q).max(0.0).sqrt() * self.p.sin()
    }

    /// Bloch vector `(⟨σ^x⟩, ⟨σ^y⟩, ⟨σ^z⟩)` of this chart point.
    pub fn bloch(&self) -> [f64; 3] {
        let r = (1.0 - self.q * self.q).max(0.0).sqrt();
        [r * self.p.cos(), r * self.p.sin(), self.q]
    }

    /// Chart point of a normalized single-site spinor (phase convention:
    /// `P = arg ψ₂ − arg ψ₁`).
    pub fn from_spinor(spinor: (num_complex::Complex64, num_complex::Complex64)) -> Self {
        let q = spinor.0.norm_sqr() - spinor.1.norm_sqr();
        let p = spinor.1.arg() - spinor.0.arg();
        MeanFieldState { q, p: wrap_angle(p) }
    }
}

/// Wrap an angle to `(−π, π]`.
pub fn wrap_angle(p: f64) -> f64 {
    let w = p.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else if w == 0.0 {
        // rem_euclid maps π and −π to π and 0·sign-dependent values; keep +π
        // representable and map exact multiples of 2π to 0.
        0.0
    } else {
        w
    }
}

/// Fine-grained integration record: state at every RK4 step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
    pub params: ModelParams,
    /// Number of steps whose `|Q|` overshot 1 and was clamped on conversion.
    pub clamp_count: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> MeanFieldState {
        *self.states.last().expect("trajectory is never empty")
    }
}

/// Stroboscopic record: `(P, Q)` and `⟨σ^y⟩` at `t = nT`, `n = 0..n_periods`.
#[derive(Debug, Clone)]
pub struct MfStroboscopic {
    pub params: ModelParams,
    pub steps_per_period: usize,
    /// Chart samples with wrapped `P`; length `n_periods + 1`.
    pub states: Vec<MeanFieldState>,
    /// `⟨σ^y⟩` per sample; same length.
    pub sigma_y: Vec<f64>,
    pub clamp_count: usize,
}

impl MfStroboscopic {
    pub fn n_periods(&self) -> usize {
        self.states.len() - 1
    }

    /// Series `s_n = ⟨σ^y⟩(nT)` for `n = 1..𝒩` (drops the initial sample),
    /// ready for spectral analysis.
    pub fn series(&self) -> StroboscopicSeries {
        StroboscopicSeries::new(
            self.sigma_y[1..].to_vec(),
            self.params.period,
            "sigma_y meanfield",
        )
        .expect("σ_y samples are bounded")
    }
}

/// Poincaré surface of section: stroboscopic samples over a seed set.
#[derive(Debug, Clone)]
pub struct PsosCloud {
    /// Seeds actually integrated (pole seeds are skipped).
    pub seeds: Vec<MeanFieldState>,
    /// Seeds skipped because they sit in the pole zone of the chart.
    pub skipped_seeds: Vec<MeanFieldState>,
    /// Wrapped samples, seed-major, time-minor: `points[s·(n_periods+1) + n]`.
    pub points: Vec<MeanFieldState>,
    pub n_periods: usize,
}

impl PsosCloud {
    /// Row iterator in output order: `(seed, n, sample)`.
    pub fn rows(&self) -> impl Iterator<Item = (MeanFieldState, usize, MeanFieldState)> + '_ {
        let per = self.n_periods + 1;
        self.points.iter().enumerate().map(move |(i, pt)| {
            let s = i / per;
            (self.seeds[s], i % per, *pt)
        })
    }
}

/// Mean-field energy `ℋ(Q, P, t)`.
pub fn mf_energy(state: &MeanFieldState, t: f64, params: &ModelParams) -> Result<f64> {
    mf_energy_with(state, t, params, Drive::Harmonic)
}

/// [`mf_energy`] with an explicit drive-envelope choice.
pub fn mf_energy_with(
    state: &MeanFieldState,
    t: f64,
    params: &ModelParams,
    drive: Drive,
) -> Result<f64> {
    let q = state.q;
    if q.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidParams(format!("|Q| = {} exceeds 1", q.abs())));
    }
    let root = (1.0 - q * q).max(0.0).sqrt();
    let c = drive.envelope(params, t);
    let v = root * state.p.sin() + q;
    Ok(-params.h * root * state.p.cos() * c - params.j * (1.0 + q * q) - params.lambda * v)
}

/// Hamilton equations in the canonical chart:
/// `(dQ/dt, dP/dt) = (−2 ∂ℋ/∂P, +2 ∂ℋ/∂Q)`.
///
/// Errors with [`Error::Pole`] when `|Q| ≥ 1 − 1e−12` while the drive or the
/// static field is active (the `1/√(1−Q²)` terms are then ill-conditioned;
/// activity is judged from the parameters `h`, `λ`, not the instantaneous
/// envelope).
pub fn eom_rhs(state: &MeanFieldState, t: f64, params: &ModelParams) -> Result<(f64, f64)> {
    eom_rhs_with(state, t, params, Drive::Harmonic)
}

/// [`eom_rhs`] with an explicit drive-envelope choice.
pub fn eom_rhs_with(
    state: &MeanFieldState,
    t: f64,
    params: &ModelParams,
    drive: Drive,
) -> Result<(f64, f64)> {
    let q = state.q;
    let pole_active = params.h != 0.0 || params.lambda != 0.0;
    if q.abs() >= 1.0 - POLE_CLEARANCE && pole_active {
        return Err(Error::Pole { q });
    }
    let root = (1.0 - q * q).max(0.0).sqrt();
    let c = drive.envelope(params, t);
    let (sin_p, cos_p) = state.p.sin_cos();
    let dq = -2.0 * (params.h * root * sin_p * c - params.lambda * root * cos_p);
    let dp = if pole_active {
        2.0 * (params.h * q * cos_p * c / root - 2.0 * params.j * q
            - params.lambda * (1.0 - q * sin_p / root))
    } else {
        -4.0 * params.j * q
    };
    Ok((dq, dp))
}

/// Regular form of the same flow: `dm/dt = 2 B(m, t) × m` with
/// `B = ∇_m ℋ = (−h·cos²(ωt/2), −λ, −2J·m_z − λ)`.
fn bloch_rhs(m: [f64; 3], t: f64, params: &ModelParams, drive: Drive) -> [f64; 3] {
    let c = drive.envelope(params, t);
    let bx = -params.h * c;
    let by = -params.lambda;
    let bz = -2.0 * params.j * m[2] - params.lambda;
    [
        2.0 * (by * m[2] - bz * m[1]),
        2.0 * (bz * m[0] - bx * m[2]),
        2.0 * (bx * m[1] - by * m[0]),
    ]
}

fn rk4_step(m: [f64; 3], t: f64, dt: f64, params: &ModelParams, drive: Drive) -> [f64; 3] {
    let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1 = bloch_rhs(m, t, params, drive);
    let k2 = bloch_rhs(add(m, k1, 0.5 * dt), t + 0.5 * dt, params, drive);
    let k3 = bloch_rhs(add(m, k2, 0.5 * dt), t + 0.5 * dt, params, drive);
    let k4 = bloch_rhs(add(m, k3, dt), t + dt, params, drive);
    [
        m[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        m[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        m[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

fn to_state(m: [f64; 3], clamp_count: &mut usize) -> MeanFieldState {
    let mut q = m[2];
    if q.abs() > 1.0 {
        if q.abs() > 1.0 + 1e-15 {
            *clamp_count += 1;
        }
        q = q.clamp(-1.0, 1.0);
    }
    MeanFieldState {
        q,
        p: m[1].atan2(m[0]),
    }
}

fn check_initial(state0: &MeanFieldState, params: &ModelParams) -> Result<()> {
    if state0.q.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidParams(format!(
            "|Q| = {} exceeds 1",
            state0.q.abs()
        )));
    }
    if state0.q.abs() >= 1.0 - POLE_CLEARANCE && (params.h != 0.0 || params.lambda != 0.0) {
        return Err(Error::Pole { q: state0.q });
    }
    Ok(())
}

/// Fixed-step RK4 integration from `t0` to `t1` with step
/// `T/steps_per_period` (the final step is shortened to land on `t1`
/// exactly). Deterministic; records every step.
pub fn integrate(
    state0: &MeanFieldState,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
    params: &ModelParams,
) -> Result<Trajectory> {
    integrate_with(state0, t0, t1, steps_per_period, params, Drive::Harmonic)
}

/// [`integrate`] with an explicit drive-envelope choice.
pub fn integrate_with(
    state0: &MeanFieldState,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
    params: &ModelParams,
    drive: Drive,
) -> Result<Trajectory> {
    if !(t1 > t0) {
        return Err(Error::InvalidParams(format!(
            "t1 = {t1} must exceed t0 = {t0}"
        )));
    }
    if steps_per_period < 100 {
        return Err(Error::InvalidParams(format!(
            "steps_per_period must be at least 100, got {steps_per_period}"
        )));
    }
    check_initial(state0, params)?;

    let dt = params.period / steps_per_period as f64;
    let span = t1 - t0;
    let full_steps = (span / dt).floor() as usize;
    let mut clamp_count = 0usize;
    let mut times = Vec::with_capacity(full_steps + 2);
    let mut states = Vec::with_capacity(full_steps + 2);
    let mut m = state0.bloch();
    times.push(t0);
    states.push(*state0);
    for i in 0..full_steps {
        let t = t0 + i as f64 * dt;
        m = rk4_step(m, t, dt, params, drive);
        times.push(t0 + (i + 1) as f64 * dt);
        states.push(to_state(m, &mut clamp_count));
    }
    let t_last = t0 + full_steps as f64 * dt;
    if t1 - t_last > 1e-12 * params.period {
        m = rk4_step(m, t_last, t1 - t_last, params, drive);
        times.push(t1);
        states.push(to_state(m, &mut clamp_count));
    }
    Ok(Trajectory {
        times,
        states,
        params: *params,
        clamp_count,
    })
}

/// One-period stroboscopic map `F: (P, Q) ↦ (P', Q')` starting at `t = 0`.
pub fn one_period_map(
    state: &MeanFieldState,
    params: &ModelParams,
    steps_per_period: usize,
    drive: Drive,
) -> Result<MeanFieldState> {
    check_initial(state, params)?;
    let dt = params.period / steps_per_period as f64;
    let mut m = state.bloch();
    for i in 0..steps_per_period {
        m = rk4_step(m, i as f64 * dt, dt, params, drive);
    }
    let mut clamps = 0;
    Ok(to_state(m, &mut clamps))
}

/// RK4 applied to the time-reversed equations over one period: the
/// approximate inverse of [`one_period_map`].
pub fn one_period_map_reversed(
    state: &MeanFieldState,
    params: &ModelParams,
    steps_per_period: usize,
    drive: Drive,
) -> Result<MeanFieldState> {
    check_initial(state, params)?;
    let t_end = params.period;
    let dt = params.period / steps_per_period as f64;
    let mut m = state.bloch();
    // d m/ds = −f(t_end − s, m)
    let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
    for i in 0..steps_per_period {
        let s = i as f64 * dt;
        let k1 = neg(bloch_rhs(m, t_end - s, params, drive));
        let k2 = neg(bloch_rhs(
            add(m, k1, 0.5 * dt),
            t_end - (s + 0.5 * dt),
            params,
            drive,
        ));
        let k3 = neg(bloch_rhs(
            add(m, k2, 0.5 * dt),
            t_end - (s + 0.5 * dt),
            params,
            drive,
        ));
        let k4 = neg(bloch_rhs(add(m, k3, dt), t_end - (s + dt), params, drive));
        m = [
            m[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            m[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            m[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        ];
    }
    let mut clamps = 0;
    Ok(to_state(m, &mut clamps))
}

/// Stroboscopic sampling at `t = nT`, `n = 0..n_periods`, with `⟨σ^y⟩`
/// attached to every sample.
pub fn stroboscopic(
    state0: &MeanFieldState,
    n_periods: usize,
    params: &ModelParams,
    steps_per_period: usize,
) -> Result<MfStroboscopic> {
    if n_periods < 1 {
        return Err(Error::InvalidParams("n_periods must be at least 1".into()));
    }
    if steps_per_period < 100 {
        return Err(Error::InvalidParams(format!(
            "steps_per_period must be at least 100, got {steps_per_period}"
        )));
    }
    check_initial(state0, params)?;

    let dt = params.period / steps_per_period as f64;
    let mut clamp_count = 0usize;
    let mut states = Vec::with_capacity(n_periods + 1);
    let mut sigma_y = Vec::with_capacity(n_periods + 1);
    let mut m = state0.bloch();
    states.push(state0.wrapped());
    sigma_y.push(m[1]);
    for n in 0..n_periods {
        let period_start = n as f64 * params.period;
        for i in 0..steps_per_period {
            m = rk4_step(m, period_start + i as f64 * dt, dt, params, Drive::Harmonic);
        }
        states.push(to_state(m, &mut clamp_count));
        sigma_y.push(m[1]);
    }
    Ok(MfStroboscopic {
        params: *params,
        steps_per_period,
        states,
        sigma_y,
        clamp_count,
    })
}

/// Default PSOS seed set: uniform 24×24 grid over `P ∈ (−π, π]`,
/// `Q ∈ [−0.95, 0.95]`.
pub fn default_seed_grid() -> Vec<MeanFieldState> {
    let (np, nq) = (24usize, 24usize);
    let mut seeds = Vec::with_capacity(np * nq);
    for i in 0..np {
        let p = -PI + 2.0 * PI * (i + 1) as f64 / np as f64;
        for j in 0..nq {
            let q = -0.95 + 1.9 * j as f64 / (nq - 1) as f64;
            seeds.push(MeanFieldState { q, p });
        }
    }
    seeds
}

/// Poincaré surface of section over a seed set: the union of stroboscopic
/// samples of every seed, in deterministic seed-major, time-minor order.
/// Seeds in the chart's pole zone are skipped (recorded in
/// `skipped_seeds`), not fatal.
pub fn psos(
    seeds: &[MeanFieldState],
    n_periods: usize,
    params: &ModelParams,
    steps_per_period: usize,
) -> Result<PsosCloud> {
    let mut cloud = PsosCloud {
        seeds: Vec::new(),
        skipped_seeds: Vec::new(),
        points: Vec::new(),
        n_periods,
    };
    for seed in seeds {
        if check_initial(seed, params).is_err() {
            cloud.skipped_seeds.push(*seed);
            continue;
        }
        let strobe = stroboscopic(seed, n_periods, params, steps_per_period)?;
        cloud.seeds.push(seed.wrapped());
        cloud.points.extend(strobe.states);
    }
    Ok(cloud)
}
