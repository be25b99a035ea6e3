//! Exact state-vector evolution on the full 2^N-dimensional Hilbert space.
//!
//! This engine is the accuracy reference for the tensor-network engine: it
//! applies the Hamiltonian matrix-free (no 2^N × 2^N matrix is ever built on
//! the evolution path) and integrates the Schrödinger equation with a fixed
//! RK4 step. A dense-matrix construction and a midpoint-frozen exponential
//! integrator are provided as independent cross-check routes for small chains.
//!
//! Basis convention: site `j` maps to bit `N−1−j` of the basis index, so site
//! 0 is the most significant bit (equivalently: the leftmost Kronecker
//! factor). Bit value 0 is spin-up (`σ_z = +1`).

use num_complex::Complex64;

use crate::linalg::{herm_exp, CMat};
use crate::model::{MagnetizationAxis, ModelParams, ProductStateSpec};
use crate::{Error, Result, StroboscopicSeries};

/// Largest chain the dense engine accepts (state vector of 2^14 amplitudes).
pub const MAX_SITES: usize = 14;

/// Per-period norm drift beyond which the RK4 integration aborts.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Full many-body state vector.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub n_sites: usize,
    /// 2^N amplitudes; site `j` is bit `N−1−j` of the index, bit 0 = spin-up.
    pub amplitudes: Vec<Complex64>,
}

impl DenseState {
    /// Uniform product state with every site in the spinor described by
    /// `spec`.
    pub fn from_product(spec: &ProductStateSpec) -> Result<Self> {
        if spec.n_sites > MAX_SITES {
            return Err(Error::InvalidParams(format!(
                "dense engine supports at most {MAX_SITES} sites, got {}",
                spec.n_sites
            )));
        }
        let (up, down) = crate::model::local_spinor(spec);
        let n = spec.n_sites;
        let dim = 1usize << n;
        let mut amplitudes = Vec::with_capacity(dim);
        for s in 0..dim {
            let mut amp = Complex64::new(1.0, 0.0);
            for j in 0..n {
                let bit = (s >> (n - 1 - j)) & 1;
                amp *= if bit == 0 { up } else { down };
            }
            amplitudes.push(amp);
        }
        Ok(DenseState {
            n_sites: n,
            amplitudes,
        })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn renormalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amplitudes {
                *a *= inv;
            }
        }
    }
}

/// Static (drive-independent) diagonal of the Hamiltonian:
/// `−J·Σ z_j z_{j+1} − λ·Σ z_j` evaluated on each basis configuration.
fn static_diagonal(params: &ModelParams) -> Vec<f64> {
    let n = params.n_sites;
    let dim = 1usize << n;
    let mut diag = vec![0.0f64; dim];
    for (s, d) in diag.iter_mut().enumerate() {
        let z = |j: usize| 1.0 - 2.0 * (((s >> (n - 1 - j)) & 1) as f64);
        let mut zz = 0.0;
        for j in 0..n.saturating_sub(1) {
            zz += z(j) * z(j + 1);
        }
        let mut zsum = 0.0;
        for j in 0..n {
            zsum += z(j);
        }
        *d = -params.j * zz - params.lambda * zsum;
    }
    diag
}

/// Right-hand side of the Schrödinger equation, `out = −i·H(t)·ψ`, computed
/// matrix-free. `diag` must come from [`static_diagonal`] for the same
/// parameters.
fn schroedinger_rhs(
    out: &mut [Complex64],
    psi: &[Complex64],
    t: f64,
    params: &ModelParams,
    diag: &[f64],
) {
    let n = params.n_sites;
    let hx = -params.h * params.envelope(t);
    let lam = params.lambda;
    // Diagonal part: −i·d·ψ.
    for ((o, &p), &d) in out.iter_mut().zip(psi).zip(diag) {
        *o = Complex64::new(0.0, -d) * p;
    }
    // Off-diagonal part per site: the σ_x drive contributes hx to the
    // flipped configuration; −λ·σ_y contributes ∓i·λ depending on the source
    // spin. Multiplied by −i these combine to (∓λ, −hx).
    for j in 0..n {
        let mask = 1usize << (n - 1 - j);
        for s in 0..psi.len() {
            let coeff = if s & mask == 0 {
                Complex64::new(-lam, -hx)
            } else {
                Complex64::new(lam, -hx)
            };
            out[s ^ mask] += coeff * psi[s];
        }
    }
}

/// Dense Hamiltonian matrix at time `t`. Intended for small chains (matrix
/// dimension 2^N); the evolution path never calls this.
pub fn dense_hamiltonian(params: &ModelParams, t: f64) -> Result<CMat> {
    if params.n_sites > MAX_SITES {
        return Err(Error::InvalidParams(format!(
            "dense Hamiltonian supports at most {MAX_SITES} sites, got {}",
            params.n_sites
        )));
    }
    let n = params.n_sites;
    let dim = 1usize << n;
    let diag = static_diagonal(params);
    let hx = -params.h * params.envelope(t);
    let lam = params.lambda;
    let mut h = CMat::zeros(dim, dim);
    for s in 0..dim {
        *h.at_mut(s, s) = Complex64::new(diag[s], 0.0);
        for j in 0..n {
            let mask = 1usize << (n - 1 - j);
            // Column s feeds row s^mask with hx (σ_x) and ∓i·λ (−λ·σ_y).
            let sy = if s & mask == 0 { -lam } else { lam };
            *h.at_mut(s ^ mask, s) += Complex64::new(hx, sy);
        }
    }
    Ok(h)
}

/// Mean magnetization along `axis`: `(1/N)·Σ_j ⟨n̂·σ⃗_j⟩`.
pub fn measure_magnetization(state: &DenseState, axis: &MagnetizationAxis) -> Result<f64> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }
    let n = state.n_sites;
    let psi = &state.amplitudes;
    let [nx, ny, nz] = axis.components;
    let mut total = 0.0f64;
    for j in 0..n {
        let mask = 1usize << (n - 1 - j);
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut sz = 0.0;
        for s in 0..psi.len() {
            let p = psi[s].norm_sqr();
            if s & mask == 0 {
                sz += p;
                // Pair (s, s|mask): ⟨σ_x⟩ += 2·Re(ψ*_↓ ψ_↑), ⟨σ_y⟩ += −2·Im(ψ*_↓ ψ_↑)
                let cross = psi[s | mask].conj() * psi[s];
                sx += 2.0 * cross.re;
                sy += -2.0 * cross.im;
            } else {
                sz -= p;
            }
        }
        total += nx * sx + ny * sy + nz * sz;
    }
    Ok(total / n as f64)
}

/// Result of a stroboscopic dense evolution.
#[derive(Debug, Clone)]
pub struct EdEvolution {
    /// Magnetization at `t = nT`, `n = 1..𝒩`.
    pub series: StroboscopicSeries,
    /// Magnetization of the initial state (`n = 0`).
    pub initial_magnetization: f64,
    pub final_state: DenseState,
}

fn steps_per_period(params: &ModelParams, dt: f64) -> Result<usize> {
    let t = params.period;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    if dt > t / 100.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidParams(format!(
            "time step dt = {dt:.6e} exceeds T/100 = {:.6e}; the dense integrator requires dt ≤ T/100",
            t / 100.0
        )));
    }
    let steps = (t / dt).round() as usize;
    if steps == 0 || ((steps as f64) * dt - t).abs() > 1e-12 * t {
        return Err(Error::InvalidParams(format!(
            "time step dt = {dt:.6e} does not divide the period T = {t:.6e}"
        )));
    }
    Ok(steps)
}

/// Evolve a dense state for `n_periods` drive periods with fixed-step RK4 and
/// record the magnetization along `axis` at every period boundary.
///
/// Aborts with a step-size message if the per-period norm drift exceeds
/// [`NORM_DRIFT_LIMIT`]; otherwise the accumulated O(dt⁵) norm loss is
/// removed at each period boundary.
pub fn ed_evolve(
    state: DenseState,
    params: &ModelParams,
    dt: f64,
    n_periods: usize,
    axis: &MagnetizationAxis,
) -> Result<EdEvolution> {
    if state.n_sites != params.n_sites {
        return Err(Error::InvalidParams(format!(
            "state has {} sites but parameters describe {}",
            state.n_sites, params.n_sites
        )));
    }
    if n_periods == 0 {
        return Err(Error::InvalidParams("n_periods must be at least 1".into()));
    }
    let steps = steps_per_period(params, dt)?;
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }

    let mut state = state;
    let initial_magnetization = measure_magnetization(&state, axis)?;
    let dim = state.amplitudes.len();
    let diag = static_diagonal(params);
    let zero = Complex64::new(0.0, 0.0);
    let mut k1 = vec![zero; dim];
    let mut k2 = vec![zero; dim];
    let mut k3 = vec![zero; dim];
    let mut k4 = vec![zero; dim];
    let mut tmp = vec![zero; dim];

    let mut values = Vec::with_capacity(n_periods);
    for period in 1..=n_periods {
        // Time is reckoned from the period start; the Hamiltonian is
        // T-periodic, so this keeps the drive phase exact for long runs.
        for step in 0..steps {
            let t0 = step as f64 * dt;
            let psi = &state.amplitudes;
            schroedinger_rhs(&mut k1, psi, t0, params, &diag);
            for i in 0..dim {
                tmp[i] = psi[i] + 0.5 * dt * k1[i];
            }
            schroedinger_rhs(&mut k2, &tmp, t0 + 0.5 * dt, params, &diag);
            for i in 0..dim {
                tmp[i] = psi[i] + 0.5 * dt * k2[i];
            }
            schroedinger_rhs(&mut k3, &tmp, t0 + 0.5 * dt, params, &diag);
            for i in 0..dim {
                tmp[i] = psi[i] + dt * k3[i];
            }
            schroedinger_rhs(&mut k4, &tmp, t0 + dt, params, &diag);
            let psi = &mut state.amplitudes;
            let w = dt / 6.0;
            for i in 0..dim {
                psi[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            }
        }
        let norm = state.norm();
        let drift = (norm - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::IntegrationDrift {
                period,
                drift,
                allowed: NORM_DRIFT_LIMIT,
            });
        }
        state.renormalize();
        values.push(measure_magnetization(&state, axis)?);
    }

    Ok(EdEvolution {
        series: StroboscopicSeries::new(values, params.period, "magnetization dense")?,
        initial_magnetization,
        final_state: state,
    })
}

/// Cross-check evolution: per step apply `exp(−i·H(t_mid)·dt)` built from a
/// dense eigendecomposition at the step midpoint. Second-order accurate;
/// restricted to small chains. Independent of the RK4 route above.
pub fn ed_evolve_expm(
    state: DenseState,
    params: &ModelParams,
    dt: f64,
    n_periods: usize,
    axis: &MagnetizationAxis,
) -> Result<EdEvolution> {
    const MAX_EXPM_SITES: usize = 8;
    if state.n_sites > MAX_EXPM_SITES {
        return Err(Error::InvalidParams(format!(
            "exponential cross-check supports at most {MAX_EXPM_SITES} sites, got {}",
            state.n_sites
        )));
    }
    if state.n_sites != params.n_sites {
        return Err(Error::InvalidParams(format!(
            "state has {} sites but parameters describe {}",
            state.n_sites, params.n_sites
        )));
    }
    if n_periods == 0 {
        return Err(Error::InvalidParams("n_periods must be at least 1".into()));
    }
    let steps = steps_per_period(params, dt)?;
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }

    let mut state = state;
    let initial_magnetization = measure_magnetization(&state, axis)?;
    let dim = state.amplitudes.len();
    let mut values = Vec::with_capacity(n_periods);
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 1..=n_periods {
        for step in 0..steps {
            let t_mid = (step as f64 + 0.5) * dt;
            let h = dense_hamiltonian(params, t_mid)?;
            let u = herm_exp(&h, dt)?;
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &amp) in state.amplitudes.iter().enumerate() {
                    acc += u.at(i, j) * amp;
                }
                *slot = acc;
            }
            std::mem::swap(&mut state.amplitudes, &mut next);
        }
        state.renormalize();
        values.push(measure_magnetization(&state, axis)?);
    }

    Ok(EdEvolution {
        series: StroboscopicSeries::new(values, params.period, "magnetization dense expm")?,
        initial_magnetization,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, pauli_x, pauli_y, pauli_z};

    fn lcg_state(n_sites: usize, mut seed: u64) -> DenseState {
        let dim = 1usize << n_sites;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut amplitudes: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(next(), next())).collect();
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amplitudes {
            *a /= norm;
        }
        DenseState { n_sites, amplitudes }
    }

    /// Independent Hamiltonian for N = 3 assembled from explicit Kronecker
    /// products, site 0 as the leftmost factor.
    fn kron_hamiltonian_n3(params: &ModelParams, t: f64) -> CMat {
        let id = CMat::identity(2);
        let x = pauli_x();
        let y = pauli_y();
        let z = pauli_z();
        let at = |ops: [&CMat; 3]| kron(&kron(ops[0], ops[1]), ops[2]);
        let c = params.envelope(t);
        let mut h = CMat::zeros(8, 8);
        // Drive on each site.
        for j in 0..3 {
            let mut ops = [&id, &id, &id];
            ops[j] = &x;
            h = h.add(&at(ops).scale(Complex64::new(-params.h * c, 0.0)));
        }
        // Nearest-neighbour ZZ (open chain).
        for j in 0..2 {
            let mut ops = [&id, &id, &id];
            ops[j] = &z;
            ops[j + 1] = &z;
            h = h.add(&at(ops).scale(Complex64::new(-params.j, 0.0)));
        }
        // Uniform y+z field, coupled with strength −λ.
        for j in 0..3 {
            let mut ops = [&id, &id, &id];
            ops[j] = &y;
            h = h.add(&at(ops).scale(Complex64::new(-params.lambda, 0.0)));
            let mut ops = [&id, &id, &id];
            ops[j] = &z;
            h = h.add(&at(ops).scale(Complex64::new(-params.lambda, 0.0)));
        }
        h
    }

    #[test]
    fn dense_hamiltonian_matches_kron_oracle() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.7, 0.3, 0.0, 3).unwrap();
        for t in [0.0, 0.37, 0.5, 0.93] {
            let h = dense_hamiltonian(&params, t).unwrap();
            let oracle = kron_hamiltonian_n3(&params, t);
            let diff = h.max_abs_diff(&oracle);
            assert!(diff < 1e-12, "t = {t}: max deviation {diff}");
            assert!(h.is_hermitian(1e-12));
        }
    }

    #[test]
    fn matrix_free_rhs_matches_dense_matrix() {
        let params = ModelParams::from_epsilon(1.0, 0.08, 0.4, 0.2, 0.3, 4).unwrap();
        let state = lcg_state(4, 7);
        let t = 0.21;
        let diag = static_diagonal(&params);
        let mut rhs = vec![Complex64::new(0.0, 0.0); 16];
        schroedinger_rhs(&mut rhs, &state.amplitudes, t, &params, &diag);
        let h = dense_hamiltonian(&params, t).unwrap();
        for i in 0..16 {
            let mut hv = Complex64::new(0.0, 0.0);
            for j in 0..16 {
                hv += h.at(i, j) * state.amplitudes[j];
            }
            let expect = Complex64::new(0.0, -1.0) * hv;
            assert!((rhs[i] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn ideal_drive_alternates_sign() {
        // ε = J = λ = 0: each period is an exact π pulse about x, so the
        // y-magnetization alternates sign exactly.
        let params = ModelParams::from_epsilon(1.0, 0.0, 0.0, 0.0, 0.0, 6).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 6).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let out = ed_evolve(state, &params, 1.0 / 1000.0, 5, &axis).unwrap();
        assert!((out.initial_magnetization - 1.0).abs() < 1e-12);
        for (n, v) in out.series.values().iter().enumerate() {
            let expect = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!(
                (v - expect).abs() < 1e-8,
                "period {}: {} vs {}",
                n + 1,
                v,
                expect
            );
        }
    }

    #[test]
    fn zero_drive_keeps_z_product_static() {
        // h = 0, λ = 0: the Hamiltonian is diagonal, so a z-polarized product
        // state only picks up phase.
        let params = ModelParams::from_field(1.0, 0.0, 0.8, 0.0, std::f64::consts::FRAC_PI_2, 5).unwrap();
        let spec = ProductStateSpec::new(std::f64::consts::FRAC_PI_2, 1, 5).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let axis = MagnetizationAxis::new(std::f64::consts::FRAC_PI_2);
        let out = ed_evolve(state, &params, 1.0 / 200.0, 4, &axis).unwrap();
        for v in out.series.values() {
            assert!((v - 1.0).abs() < 1e-9, "magnetization moved: {v}");
        }
    }

    #[test]
    fn coarse_step_aborts_on_norm_drift() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 1.0, 0.05, 0.0, 6).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 6).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let err = ed_evolve(state, &params, 1.0 / 100.0, 50, &axis).unwrap_err();
        match err {
            Error::IntegrationDrift { drift, .. } => assert!(drift > NORM_DRIFT_LIMIT),
            other => panic!("expected IntegrationDrift, got {other:?}"),
        }
    }

    #[test]
    fn step_larger_than_t_over_100_rejected() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.5, 0.05, 0.0, 3).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 3).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let err = ed_evolve(state, &params, 1.0 / 50.0, 2, &axis).unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
        let msg = err.to_string();
        assert!(msg.contains("T/100"), "message: {msg}");
    }

    #[test]
    fn non_dividing_step_rejected() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.5, 0.05, 0.0, 3).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 3).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let err = ed_evolve(state, &params, 1.0 / 300.5, 2, &axis).unwrap_err();
        assert!(err.to_string().contains("divide"), "got: {err}");
    }

    #[test]
    fn self_convergence_under_step_halving() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.5, 0.05, 0.0, 5).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 5).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let coarse = ed_evolve(
            DenseState::from_product(&spec).unwrap(),
            &params,
            1.0 / 4000.0,
            10,
            &axis,
        )
        .unwrap();
        let fine = ed_evolve(
            DenseState::from_product(&spec).unwrap(),
            &params,
            1.0 / 8000.0,
            10,
            &axis,
        )
        .unwrap();
        let max_diff = coarse
            .series
            .values()
            .iter()
            .zip(fine.series.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-9, "series differ by {max_diff}");
    }

    #[test]
    fn expm_route_agrees_with_rk4() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.5, 0.05, 0.0, 4).unwrap();
        let spec = ProductStateSpec::new(0.0, 1, 4).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let rk4 = ed_evolve(
            DenseState::from_product(&spec).unwrap(),
            &params,
            1.0 / 2000.0,
            5,
            &axis,
        )
        .unwrap();
        let expm = ed_evolve_expm(
            DenseState::from_product(&spec).unwrap(),
            &params,
            1.0 / 2000.0,
            5,
            &axis,
        )
        .unwrap();
        let max_diff = rk4
            .series
            .values()
            .iter()
            .zip(expm.series.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-4, "independent routes differ by {max_diff}");
    }

    #[test]
    fn product_state_matches_explicit_kron() {
        let spec = ProductStateSpec::new(std::f64::consts::FRAC_PI_6, -1, 2).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let (a, b) = crate::model::local_spinor(&spec);
        let expect = [a * a, a * b, b * a, b * b];
        for (got, want) in state.amplitudes.iter().zip(expect) {
            assert!((got - want).norm() < 1e-15);
        }
        assert!((state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn magnetization_of_known_products() {
        // +y product measured along φ = 0 gives 1.
        let spec = ProductStateSpec::new(0.0, 1, 3).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let m = measure_magnetization(&state, &MagnetizationAxis::new(0.0)).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        // +z product measured along φ = 0 gives 0.
        let spec = ProductStateSpec::new(std::f64::consts::FRAC_PI_2, 1, 3).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let m = measure_magnetization(&state, &MagnetizationAxis::new(0.0)).unwrap();
        assert!(m.abs() < 1e-12);
        // Tilted product measured along its own axis gives 1.
        let phi = 0.7;
        let spec = ProductStateSpec::new(phi, 1, 4).unwrap();
        let state = DenseState::from_product(&spec).unwrap();
        let m = measure_magnetization(&state, &MagnetizationAxis::new(phi)).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_rejected() {
        let params = ModelParams::from_epsilon(1.0, 0.05, 0.5, 0.05, 0.0, 2).unwrap();
        let axis = MagnetizationAxis::new(0.0);
        let state = DenseState {
            n_sites: 2,
            amplitudes: vec![
                Complex64::new(0.9, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        };
        let err = ed_evolve(state, &params, 1.0 / 200.0, 1, &axis).unwrap_err();
        assert!(matches!(err, Error::Unnormalized { .. }));
    }

    #[test]
    fn too_many_sites_rejected() {
        let spec = ProductStateSpec::new(0.0, 1, 15).unwrap();
        assert!(DenseState::from_product(&spec).is_err());
    }
}
