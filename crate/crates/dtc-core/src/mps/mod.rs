//! Matrix-product-state engine: chain-factorized wavefunction with a capped
//! bond dimension, evolved by a third-order two-group splitting of the
//! periodically driven Hamiltonian.
//!
//! Layout conventions (shared by every kernel in this module):
//! - site `j` carries a rank-3 tensor `(left_dim, physical 2, right_dim)`;
//!   physical index 0 is spin-up (`σ_z = +1`), matching the dense engine's
//!   bit convention (site 0 = most significant bit).
//! - tensors are stored left-unfolded: a `(2·left_dim) × right_dim`
//!   column-major matrix whose row index is `σ·left_dim + l`.
//! - bond `j` joins sites `j` and `j+1`; boundary bonds have dimension 1.
//!
//! The Trotter splitting scheme, gate construction, and evolution sweep live
//! in [`schedule`] and [`evolve`].

mod evolve;
mod schedule;

pub use evolve::{
    apply_gate, evolve_periods, measure_magnetization, EvolutionRecord, EvolveOptions, GateOp,
};
pub use schedule::{
    trotter_schedule, GateEntry, GateSchedule, GateTarget, GeneratorTag, COEFFICIENT_SET,
    TROTTER_A, TROTTER_B,
};

use num_complex::Complex64;

use crate::model::ProductStateSpec;
use crate::{Error, Result};

/// One site tensor, left-unfolded (see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTensor {
    pub left_dim: usize,
    pub right_dim: usize,
    /// `(2·left_dim) × right_dim` column-major; row = `σ·left_dim + l`.
    pub data: Vec<Complex64>,
}

impl SiteTensor {
    fn new(left_dim: usize, right_dim: usize) -> Self {
        SiteTensor {
            left_dim,
            right_dim,
            data: vec![Complex64::new(0.0, 0.0); 2 * left_dim * right_dim],
        }
    }

    #[inline]
    pub fn at(&self, l: usize, sigma: usize, r: usize) -> Complex64 {
        debug_assert!(l < self.left_dim && sigma < 2 && r < self.right_dim);
        self.data[r * 2 * self.left_dim + sigma * self.left_dim + l]
    }

    #[inline]
    fn at_mut(&mut self, l: usize, sigma: usize, r: usize) -> &mut Complex64 {
        debug_assert!(l < self.left_dim && sigma < 2 && r < self.right_dim);
        &mut self.data[r * 2 * self.left_dim + sigma * self.left_dim + l]
    }
}

/// Running account of the weight removed by bond truncation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TruncationLog {
    /// Total discarded weight (sum of squared dropped singular values) since
    /// state creation, updated at every truncating gate application.
    pub cumulative: f64,
    /// Discarded weight per completed drive period (filled by
    /// [`evolve_periods`]).
    pub per_period: Vec<f64>,
}

/// Matrix-product state of `n_sites` spin-1/2 sites.
#[derive(Debug, Clone)]
pub struct MpsState {
    pub n_sites: usize,
    /// Bond-dimension cap `M`.
    pub max_bond: usize,
    pub site_tensors: Vec<SiteTensor>,
    /// `canonical_center = Some(c)`: tensors left of `c` are left-isometric,
    /// tensors right of `c` are right-isometric. `None`: gauge unknown.
    pub canonical_center: Option<usize>,
    pub truncation_log: TruncationLog,
}

impl MpsState {
    /// Dimensions of the `n_sites − 1` internal bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.site_tensors
            .windows(2)
            .map(|w| w[0].right_dim)
            .collect()
    }

    /// `⟨ψ|ψ⟩^{1/2}` by full transfer contraction (no canonical-form
    /// assumption).
    pub fn norm(&self) -> f64 {
        // E starts as the 1×1 identity and is propagated through
        // E' = Σ_σ A[σ]† E A[σ].
        let mut env = vec![Complex64::new(1.0, 0.0)];
        let mut env_dim = 1usize;
        for tensor in &self.site_tensors {
            let (ld, rd) = (tensor.left_dim, tensor.right_dim);
            debug_assert_eq!(env_dim, ld);
            let mut next = vec![Complex64::new(0.0, 0.0); rd * rd];
            let mut tmp = vec![Complex64::new(0.0, 0.0); ld];
            for sigma in 0..2 {
                for rp in 0..rd {
                    // tmp = E · A[σ][:, rp]
                    for (l, slot) in tmp.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for lp in 0..ld {
                            acc += env[lp * ld + l] * tensor.at(lp, sigma, rp);
                        }
                        *slot = acc;
                    }
                    for r in 0..rd {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for l in 0..ld {
                            acc += tensor.at(l, sigma, r).conj() * tmp[l];
                        }
                        next[rp * rd + r] += acc;
                    }
                }
            }
            env = next;
            env_dim = rd;
        }
        debug_assert_eq!(env_dim, 1);
        env[0].re.max(0.0).sqrt()
    }

    /// Contract the chain into a full 2^N state vector (dense-engine index
    /// convention). Intended for cross-checks at small N.
    pub fn to_dense(&self) -> Result<crate::ed::DenseState> {
        if self.n_sites > crate::ed::MAX_SITES {
            return Err(Error::InvalidParams(format!(
                "dense contraction supports at most {} sites, got {}",
                crate::ed::MAX_SITES,
                self.n_sites
            )));
        }
        // amps holds the partial contraction as a (configs × left_dim)
        // column-major-ish block: amps[config · dim + l].
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        let mut dim = 1usize; // current bond dimension
        let mut n_configs = 1usize;
        for tensor in &self.site_tensors {
            let (ld, rd) = (tensor.left_dim, tensor.right_dim);
            debug_assert_eq!(dim, ld);
            let mut next = vec![Complex64::new(0.0, 0.0); n_configs * 2 * rd];
            for config in 0..n_configs {
                for sigma in 0..2 {
                    for r in 0..rd {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for l in 0..ld {
                            acc += amps[config * ld + l] * tensor.at(l, sigma, r);
                        }
                        next[(config * 2 + sigma) * rd + r] = acc;
                    }
                }
            }
            amps = next;
            n_configs *= 2;
            dim = rd;
        }
        debug_assert_eq!(dim, 1);
        Ok(crate::ed::DenseState {
            n_sites: self.n_sites,
            amplitudes: amps,
        })
    }
}

/// Uniform product state with every site in the spinor described by `spec`,
/// with bond-dimension cap `max_bond`.
pub fn mps_from_product(spec: &ProductStateSpec, max_bond: usize) -> Result<MpsState> {
    if max_bond == 0 {
        return Err(Error::InvalidParams(
            "bond dimension cap must be at least 1".into(),
        ));
    }
    let (up, down) = crate::model::local_spinor(spec);
    let mut site_tensors = Vec::with_capacity(spec.n_sites);
    for _ in 0..spec.n_sites {
        let mut t = SiteTensor::new(1, 1);
        *t.at_mut(0, 0, 0) = up;
        *t.at_mut(0, 1, 0) = down;
        site_tensors.push(t);
    }
    Ok(MpsState {
        n_sites: spec.n_sites,
        max_bond,
        site_tensors,
        canonical_center: Some(0),
        truncation_log: TruncationLog::default(),
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MagnetizationAxis;

    #[test]
    fn product_state_has_unit_bonds_and_unit_magnetization() {
        let spec = ProductStateSpec::new(0.0, 1, 30).unwrap();
        let mut state = mps_from_product(&spec, 30).unwrap();
        assert_eq!(state.bond_dims(), vec![1; 29]);
        assert!((state.norm() - 1.0).abs() < 1e-12);
        let m = measure_magnetization(&mut state, &MagnetizationAxis::new(0.0)).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_product_state_amplitudes() {
        // φ = π/2, sign +1 is the all-up state in the z basis.
        let spec = ProductStateSpec::new(std::f64::consts::FRAC_PI_2, 1, 2).unwrap();
        let state = mps_from_product(&spec, 4).unwrap();
        let dense = state.to_dense().unwrap();
        assert!((dense.amplitudes[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for amp in &dense.amplitudes[1..] {
            assert!(amp.norm() < 1e-15);
        }
    }

    #[test]
    fn sign_flip_flips_magnetization() {
        let spec = ProductStateSpec::new(0.0, -1, 4).unwrap();
        let mut state = mps_from_product(&spec, 4).unwrap();
        let m = measure_magnetization(&mut state, &MagnetizationAxis::new(0.0)).unwrap();
        assert!((m + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_round_trip_matches_product_construction() {
        let spec = ProductStateSpec::new(0.4, -1, 5).unwrap();
        let state = mps_from_product(&spec, 8).unwrap();
        let via_mps = state.to_dense().unwrap();
        let direct = crate::ed::DenseState::from_product(&spec).unwrap();
        for (a, b) in via_mps.amplitudes.iter().zip(&direct.amplitudes) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn mps_from_dense_reconstructs() {
        // A deterministic non-product state: superpose two product states.
        let s1 = crate::ed::DenseState::from_product(&ProductStateSpec::new(0.3, 1, 6).unwrap())
            .unwrap();
        let s2 = crate::ed::DenseState::from_product(&ProductStateSpec::new(1.1, -1, 6).unwrap())
            .unwrap();
        let mut amps: Vec<Complex64> = s1
            .amplitudes
            .iter()
            .zip(&s2.amplitudes)
            .map(|(a, b)| a + Complex64::new(0.0, 0.7) * b)
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let dense = crate::ed::DenseState {
            n_sites: 6,
            amplitudes: amps,
        };
        let mps = test_util::mps_from_dense(&dense, 8);
        assert!((mps.norm() - 1.0).abs() < 1e-12);
        let back = mps.to_dense().unwrap();
        for (a, b) in back.amplitudes.iter().zip(&dense.amplitudes) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_bond_cap_rejected() {
        let spec = ProductStateSpec::new(0.0, 1, 3).unwrap();
        assert!(mps_from_product(&spec, 0).is_err());
    }
}
