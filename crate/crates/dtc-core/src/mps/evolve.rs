//! Gate application, canonical-center bookkeeping, and the period evolver.
//!
//! The state is kept in mixed-canonical form: tensors left of
//! `canonical_center` are left-isometric, tensors right of it are
//! right-isometric. Two-site gates contract the pair into a `(2L)×(2R)`
//! matrix, apply the gate, split by truncating SVD (cap `max_bond`, relative
//! drop 1e−14), renormalize the kept weights, and log the discarded weight.
//! Center moves are QR/LQ gauge transformations, exact up to rounding.

use num_complex::Complex64;

use crate::linalg::{
    herm_eigen, herm_exp_from_eigen, lq_thin, pauli_rotation, qr_thin, svd_truncated, CMat,
};
use crate::model::{MagnetizationAxis, ModelParams};
use crate::mps::schedule::{field_vector, group_a_generator, GateSchedule, Stage};
use crate::mps::{MpsState, SiteTensor};
use crate::{Error, Result, StroboscopicSeries};

/// Relative singular-value threshold below which values count as numerical
/// zeros and are dropped regardless of the bond cap.
const REL_DROP: f64 = 1e-14;

/// Tunables of [`evolve_periods`].
#[derive(Debug, Clone)]
pub struct EvolveOptions {
    /// Largest tolerated discarded weight within one drive period; exceeding
    /// it aborts the run as untrustworthy.
    pub truncation_budget: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            truncation_budget: 1e-2,
        }
    }
}

/// A gate ready for application.
#[derive(Debug, Clone)]
pub enum GateOp {
    /// Exact single-site unitary (2×2).
    Site { site: usize, matrix: CMat },
    /// Two-site unitary (4×4) on bond `(bond, bond+1)`, composite index
    /// `σ_left·2 + σ_right`.
    Bond { bond: usize, matrix: CMat },
    /// Diagonal two-site unitary given by its four phases in the composite
    /// basis.
    BondDiagonal {
        bond: usize,
        phases: [Complex64; 4],
    },
}

/// Which side of a split bond keeps the center (weights).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CenterSide {
    Left,
    Right,
}

// ---------------------------------------------------------------------------
// Canonical-center moves
// ---------------------------------------------------------------------------

/// QR the tensor at `c`, leaving it left-isometric and absorbing the
/// triangular factor into `c+1`. Valid regardless of the previous gauge.
fn move_center_right(state: &mut MpsState, c: usize) {
    let (ld, rd, data) = {
        let t = &state.site_tensors[c];
        (t.left_dim, t.right_dim, t.data.clone())
    };
    let a = CMat {
        nrows: 2 * ld,
        ncols: rd,
        data,
    };
    let (q, r) = qr_thin(&a);
    let k = q.ncols;
    state.site_tensors[c] = SiteTensor {
        left_dim: ld,
        right_dim: k,
        data: q.data,
    };
    let old = state.site_tensors[c + 1].clone();
    let mut new = SiteTensor {
        left_dim: k,
        right_dim: old.right_dim,
        data: vec![Complex64::new(0.0, 0.0); 2 * k * old.right_dim],
    };
    for rr in 0..old.right_dim {
        for sigma in 0..2 {
            for i in 0..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..old.left_dim {
                    acc += r.at(i, b) * old.at(b, sigma, rr);
                }
                new.data[rr * 2 * k + sigma * k + i] = acc;
            }
        }
    }
    state.site_tensors[c + 1] = new;
    state.canonical_center = Some(c + 1);
}

/// LQ the tensor at `c`, leaving it right-isometric and absorbing the
/// triangular factor into `c−1`.
fn move_center_left(state: &mut MpsState, c: usize) {
    let (ld, rd) = {
        let t = &state.site_tensors[c];
        (t.left_dim, t.right_dim)
    };
    // Right-unfold: (ld) × (2·rd), column index σ·rd + r.
    let mut bmat = CMat::zeros(ld, 2 * rd);
    {
        let t = &state.site_tensors[c];
        for r in 0..rd {
            for sigma in 0..2 {
                for l in 0..ld {
                    *bmat.at_mut(l, sigma * rd + r) = t.at(l, sigma, r);
                }
            }
        }
    }
    let (lmat, q) = lq_thin(&bmat);
    let k = q.nrows;
    let mut newc = SiteTensor {
        left_dim: k,
        right_dim: rd,
        data: vec![Complex64::new(0.0, 0.0); 2 * k * rd],
    };
    for r in 0..rd {
        for sigma in 0..2 {
            for i in 0..k {
                newc.data[r * 2 * k + sigma * k + i] = q.at(i, sigma * rd + r);
            }
        }
    }
    state.site_tensors[c] = newc;
    let old = state.site_tensors[c - 1].clone();
    let mut newp = SiteTensor {
        left_dim: old.left_dim,
        right_dim: k,
        data: vec![Complex64::new(0.0, 0.0); 2 * old.left_dim * k],
    };
    for i in 0..k {
        for sigma in 0..2 {
            for a in 0..old.left_dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..old.right_dim {
                    acc += old.at(a, sigma, l) * lmat.at(l, i);
                }
                newp.data[i * 2 * old.left_dim + sigma * old.left_dim + a] = acc;
            }
        }
    }
    state.site_tensors[c - 1] = newp;
    state.canonical_center = Some(c - 1);
}

/// Establish a definite canonical center when the gauge is unknown.
fn canonicalize(state: &mut MpsState) {
    let n = state.n_sites;
    for c in 0..n.saturating_sub(1) {
        move_center_right(state, c);
    }
    state.canonical_center = Some(n - 1);
}

fn move_center_to(state: &mut MpsState, target: usize) {
    if state.canonical_center.is_none() {
        canonicalize(state);
    }
    let mut c = state.canonical_center.unwrap();
    while c < target {
        move_center_right(state, c);
        c += 1;
    }
    while c > target {
        move_center_left(state, c);
        c -= 1;
    }
}

/// Bring the center to whichever of `bond`, `bond+1` is nearer.
fn ensure_center_adjacent(state: &mut MpsState, bond: usize) {
    if state.canonical_center.is_none() {
        canonicalize(state);
    }
    let c = state.canonical_center.unwrap();
    if c < bond {
        move_center_to(state, bond);
    } else if c > bond + 1 {
        move_center_to(state, bond + 1);
    }
}

// ---------------------------------------------------------------------------
// Gate application
// ---------------------------------------------------------------------------

fn apply_single_site(state: &mut MpsState, site: usize, u: &CMat) {
    let t = &mut state.site_tensors[site];
    let (ld, rd) = (t.left_dim, t.right_dim);
    let (u00, u01, u10, u11) = (u.at(0, 0), u.at(0, 1), u.at(1, 0), u.at(1, 1));
    for r in 0..rd {
        let col = r * 2 * ld;
        for l in 0..ld {
            let a0 = t.data[col + l];
            let a1 = t.data[col + ld + l];
            t.data[col + l] = u00 * a0 + u01 * a1;
            t.data[col + ld + l] = u10 * a0 + u11 * a1;
        }
    }
    // A unitary on the physical index preserves every isometry condition, so
    // the canonical center is unchanged.
}

enum BondGate<'a> {
    Full(&'a CMat),
    Diagonal(&'a [Complex64; 4]),
}

/// Contract bond `(j, j+1)`, apply the gate, split with truncation, and
/// leave the center on `side`. Returns the discarded weight.
fn apply_bond(
    state: &mut MpsState,
    bond: usize,
    gate: BondGate<'_>,
    side: CenterSide,
) -> Result<f64> {
    ensure_center_adjacent(state, bond);
    let (l, rb, rr, adata) = {
        let ta = &state.site_tensors[bond];
        (
            ta.left_dim,
            ta.right_dim,
            state.site_tensors[bond + 1].right_dim,
            ta.data.clone(),
        )
    };
    // θ = A_leftunfolded · B_rightunfolded : (2L) × (2R).
    let mut bright = CMat::zeros(rb, 2 * rr);
    {
        let tb = &state.site_tensors[bond + 1];
        debug_assert_eq!(tb.left_dim, rb);
        for r in 0..rr {
            for sigma in 0..2 {
                for b in 0..rb {
                    *bright.at_mut(b, sigma * rr + r) = tb.at(b, sigma, r);
                }
            }
        }
    }
    let amat = CMat {
        nrows: 2 * l,
        ncols: rb,
        data: adata,
    };
    let mut theta = amat.matmul(&bright);

    match gate {
        BondGate::Diagonal(phases) => {
            for s2 in 0..2 {
                for r in 0..rr {
                    let col = (s2 * rr + r) * 2 * l;
                    for s1 in 0..2 {
                        let phase = phases[s1 * 2 + s2];
                        for li in 0..l {
                            theta.data[col + s1 * l + li] *= phase;
                        }
                    }
                }
            }
        }
        BondGate::Full(g) => {
            debug_assert_eq!((g.nrows, g.ncols), (4, 4));
            // Permute to (4) × (L·R) with column r·L + l, apply, permute back.
            let mut big = CMat::zeros(4, l * rr);
            for r in 0..rr {
                for li in 0..l {
                    let col = r * l + li;
                    for s1 in 0..2 {
                        for s2 in 0..2 {
                            *big.at_mut(s1 * 2 + s2, col) = theta.at(s1 * l + li, s2 * rr + r);
                        }
                    }
                }
            }
            let big2 = g.matmul(&big);
            for r in 0..rr {
                for li in 0..l {
                    let col = r * l + li;
                    for s1 in 0..2 {
                        for s2 in 0..2 {
                            *theta.at_mut(s1 * l + li, s2 * rr + r) = big2.at(s1 * 2 + s2, col);
                        }
                    }
                }
            }
        }
    }

    let f = svd_truncated(&theta, state.max_bond, REL_DROP)?;
    let k = f.s.len();
    let kept: f64 = f.s.iter().map(|s| s * s).sum();
    if !(kept > 0.0) {
        return Err(Error::Decomposition(
            "all singular values vanished during truncation".into(),
        ));
    }
    let scale = 1.0 / kept.sqrt();
    let w = f.discarded_weight;

    match side {
        CenterSide::Right => {
            state.site_tensors[bond] = SiteTensor {
                left_dim: l,
                right_dim: k,
                data: f.u.data,
            };
            let mut tb = SiteTensor {
                left_dim: k,
                right_dim: rr,
                data: vec![Complex64::new(0.0, 0.0); 2 * k * rr],
            };
            for r in 0..rr {
                for s2 in 0..2 {
                    for i in 0..k {
                        tb.data[r * 2 * k + s2 * k + i] =
                            f.s[i] * scale * f.vdag.at(i, s2 * rr + r);
                    }
                }
            }
            state.site_tensors[bond + 1] = tb;
            state.canonical_center = Some(bond + 1);
        }
        CenterSide::Left => {
            let mut ua = f.u;
            for i in 0..k {
                let w_i = f.s[i] * scale;
                for row in 0..2 * l {
                    ua.data[i * 2 * l + row] *= w_i;
                }
            }
            state.site_tensors[bond] = SiteTensor {
                left_dim: l,
                right_dim: k,
                data: ua.data,
            };
            let mut tb = SiteTensor {
                left_dim: k,
                right_dim: rr,
                data: vec![Complex64::new(0.0, 0.0); 2 * k * rr],
            };
            for r in 0..rr {
                for s2 in 0..2 {
                    for i in 0..k {
                        tb.data[r * 2 * k + s2 * k + i] = f.vdag.at(i, s2 * rr + r);
                    }
                }
            }
            state.site_tensors[bond + 1] = tb;
            state.canonical_center = Some(bond);
        }
    }
    state.truncation_log.cumulative += w;
    Ok(w)
}

/// Apply one gate, moving the canonical center as needed. Returns the
/// discarded truncation weight (0 for single-site gates).
pub fn apply_gate(state: &mut MpsState, gate: &GateOp) -> Result<f64> {
    match gate {
        GateOp::Site { site, matrix } => {
            if *site >= state.n_sites {
                return Err(Error::InvalidParams(format!(
                    "site {site} out of range for {} sites",
                    state.n_sites
                )));
            }
            if (matrix.nrows, matrix.ncols) != (2, 2) {
                return Err(Error::InvalidParams(
                    "single-site gate must be 2×2".into(),
                ));
            }
            apply_single_site(state, *site, matrix);
            Ok(0.0)
        }
        GateOp::Bond { bond, matrix } => {
            if *bond + 1 >= state.n_sites {
                return Err(Error::InvalidParams(format!(
                    "bond {bond} out of range for {} sites",
                    state.n_sites
                )));
            }
            if (matrix.nrows, matrix.ncols) != (4, 4) {
                return Err(Error::InvalidParams("bond gate must be 4×4".into()));
            }
            apply_bond(state, *bond, BondGate::Full(matrix), CenterSide::Right)
        }
        GateOp::BondDiagonal { bond, phases } => {
            if *bond + 1 >= state.n_sites {
                return Err(Error::InvalidParams(format!(
                    "bond {bond} out of range for {} sites",
                    state.n_sites
                )));
            }
            apply_bond(state, *bond, BondGate::Diagonal(phases), CenterSide::Right)
        }
    }
}

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

fn center_expectation(state: &MpsState, site: usize, op: &CMat) -> f64 {
    let t = &state.site_tensors[site];
    let (ld, rd) = (t.left_dim, t.right_dim);
    let mut m = Complex64::new(0.0, 0.0);
    for sp in 0..2 {
        for s in 0..2 {
            let o = op.at(sp, s);
            if o == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for r in 0..rd {
                for l in 0..ld {
                    inner += t.at(l, sp, r).conj() * t.at(l, s, r);
                }
            }
            m += o * inner;
        }
    }
    m.re
}

/// Mean magnetization `(1/N)·Σ_j ⟨n̂·σ⃗_j⟩`.
///
/// Sweeps the canonical center across the chain (a gauge transformation; the
/// represented state is unchanged).
pub fn measure_magnetization(state: &mut MpsState, axis: &MagnetizationAxis) -> Result<f64> {
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Unnormalized { norm });
    }
    let [nx, ny, nz] = axis.components;
    let op = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(nz, 0.0),
        (0, 1) => Complex64::new(nx, -ny),
        (1, 0) => Complex64::new(nx, ny),
        (1, 1) => Complex64::new(-nz, 0.0),
        _ => unreachable!(),
    });
    move_center_to(state, 0);
    let n = state.n_sites;
    let mut total = 0.0;
    for j in 0..n {
        total += center_expectation(state, j, &op);
        if j + 1 < n {
            move_center_right(state, j);
        }
    }
    Ok(total / n as f64)
}

// ---------------------------------------------------------------------------
// Period evolution
// ---------------------------------------------------------------------------

/// Result of a stroboscopic MPS evolution.
#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    /// Magnetization at `t = nT`, `n = 1..𝒩`.
    pub series: StroboscopicSeries,
    /// Magnetization of the initial state (`n = 0`).
    pub initial_magnetization: f64,
    /// Cumulative discarded weight after each period.
    pub cumulative_truncation: Vec<f64>,
    pub final_state: MpsState,
}

/// Apply one substep (six stages) starting at time `t0` within the period.
fn apply_substep(
    state: &mut MpsState,
    schedule: &GateSchedule,
    params: &ModelParams,
    t0: f64,
) -> Result<()> {
    let n = state.n_sites;
    let dt = schedule.dt;
    // The two distinct frozen times per substep share eigendecompositions.
    let mut eig_cache: Vec<(u64, (Vec<f64>, CMat))> = Vec::with_capacity(2);
    for stage in &schedule.stages {
        match stage {
            Stage::SingleSite { coeff, theta_frac } => {
                let theta = t0 + theta_frac * dt;
                let u = pauli_rotation(field_vector(params, theta), coeff * dt);
                for site in 0..n {
                    apply_single_site(state, site, &u);
                }
            }
            Stage::FusedPairs { coeff, theta_frac } => {
                let theta = t0 + theta_frac * dt;
                let key = theta_frac.to_bits();
                if !eig_cache.iter().any(|(k, _)| *k == key) {
                    let gen = group_a_generator(params, theta);
                    eig_cache.push((key, herm_eigen(&gen)?));
                }
                let (vals, vecs) = &eig_cache.iter().find(|(k, _)| *k == key).unwrap().1;
                let gate = herm_exp_from_eigen(vals, vecs, coeff * dt);
                let mut bond = 0;
                while bond + 1 < n {
                    apply_bond(state, bond, BondGate::Full(&gate), CenterSide::Right)?;
                    bond += 2;
                }
                if n % 2 == 1 {
                    let u = pauli_rotation(field_vector(params, theta), coeff * dt);
                    apply_single_site(state, n - 1, &u);
                }
            }
            Stage::DiagonalBonds { phases } => {
                for bond in (1..n.saturating_sub(1)).rev().filter(|b| b % 2 == 1) {
                    apply_bond(state, bond, BondGate::Diagonal(phases), CenterSide::Left)?;
                }
            }
        }
    }
    Ok(())
}

/// Evolve for `n_periods` drive periods, measuring the magnetization along
/// `axis` at every period boundary.
pub fn evolve_periods(
    state: MpsState,
    params: &ModelParams,
    dt: f64,
    n_periods: usize,
    axis: &MagnetizationAxis,
    options: &EvolveOptions,
) -> Result<EvolutionRecord> {
    if state.n_sites != params.n_sites {
        return Err(Error::InvalidParams(format!(
            "state has {} sites but parameters describe {}",
            state.n_sites, params.n_sites
        )));
    }
    if n_periods == 0 {
        return Err(Error::InvalidParams("n_periods must be at least 1".into()));
    }
    if !(options.truncation_budget > 0.0) {
        return Err(Error::InvalidParams(
            "truncation budget must be positive".into(),
        ));
    }
    let schedule = crate::mps::schedule::trotter_schedule(params, dt)?;
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }

    let mut state = state;
    let initial_magnetization = measure_magnetization(&mut state, axis)?;
    let mut values = Vec::with_capacity(n_periods);
    let mut cumulative = Vec::with_capacity(n_periods);
    for period in 1..=n_periods {
        let start_weight = state.truncation_log.cumulative;
        for sub in 0..schedule.n_substeps {
            apply_substep(&mut state, &schedule, params, sub as f64 * dt)?;
        }
        let period_weight = state.truncation_log.cumulative - start_weight;
        if period_weight > options.truncation_budget {
            return Err(Error::TruncationBudget {
                period,
                weight: period_weight,
                budget: options.truncation_budget,
            });
        }
        let norm = state.norm();
        let drift = (norm - 1.0).abs();
        if drift > period_weight + 1e-10 {
            return Err(Error::NormDrift {
                period,
                drift,
                allowed: period_weight,
            });
        }
        state.truncation_log.per_period.push(period_weight);
        values.push(measure_magnetization(&mut state, axis)?);
        cumulative.push(state.truncation_log.cumulative);
    }

    Ok(EvolutionRecord {
        series: StroboscopicSeries::new(values, params.period, "magnetization mps")?,
        initial_magnetization,
        cumulative_truncation: cumulative,
        final_state: state,
    })
}
