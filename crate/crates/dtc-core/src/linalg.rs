//! Dense complex linear-algebra kernels shared by the quantum engines.
//!
//! The matrix type here is deliberately minimal: column-major storage and
//! exactly the operations the engines need. Truncating SVD and Hermitian
//! eigendecomposition are delegated to `faer`; QR/LQ factorizations for
//! canonical-form bookkeeping are hand-rolled Householder transforms so the
//! hot path stays allocation-lean and fully deterministic.

use faer::c64;
use num_complex::Complex64;

use crate::{Error, Result};

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMat {
            nrows,
            ncols,
            data: vec![Complex64::new(0.0, 0.0); nrows * ncols],
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(nrows, ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                m.data[j * nrows + i] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[j * self.nrows + i]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[j * self.nrows + i]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.ncols, self.nrows, |i, j| self.at(j, i).conj())
    }

    /// Plain matrix product (small matrices / test paths).
    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch");
        let mut out = CMat::zeros(self.nrows, rhs.ncols);
        for j in 0..rhs.ncols {
            for k in 0..self.ncols {
                let b = rhs.at(k, j);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let col = &self.data[k * self.nrows..(k + 1) * self.nrows];
                let dst = &mut out.data[j * self.nrows..(j + 1) * self.nrows];
                for i in 0..self.nrows {
                    dst[i] += col[i] * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        CMat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for j in 0..self.ncols {
            for i in 0..=j {
                if (self.at(i, j) - self.at(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Kronecker product `a ⊗ b` (row/col blocks of `a` scaled copies of `b`).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows * b.nrows, a.ncols * b.ncols);
    for ja in 0..a.ncols {
        for ia in 0..a.nrows {
            let s = a.at(ia, ja);
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            for jb in 0..b.ncols {
                for ib in 0..b.nrows {
                    *out.at_mut(ia * b.nrows + ib, ja * b.ncols + jb) = s * b.at(ib, jb);
                }
            }
        }
    }
    out
}

/// Pauli matrices (row-major 2×2, returned as [`CMat`]).
pub fn pauli_x() -> CMat {
    CMat::from_fn(2, 2, |i, j| {
        if i != j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn pauli_y() -> CMat {
    CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => Complex64::new(0.0, -1.0),
        (1, 0) => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

pub fn pauli_z() -> CMat {
    CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(1.0, 0.0),
        (1, 1) => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

fn to_faer(m: &CMat) -> faer::Mat<c64> {
    faer::Mat::from_fn(m.nrows, m.ncols, |i, j| {
        let z = m.at(i, j);
        c64::new(z.re, z.im)
    })
}

/// Result of a truncating SVD `A ≈ U · diag(s) · V†`.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    /// `m × k`, isometric columns.
    pub u: CMat,
    /// Kept singular values, descending; length `k`.
    pub s: Vec<f64>,
    /// `k × n`, isometric rows.
    pub vdag: CMat,
    /// Sum of squared discarded singular values.
    pub discarded_weight: f64,
}

/// Full SVD truncated to at most `max_keep` singular values, additionally
/// dropping values below `rel_drop · σ_max`. Errors (never panics) if the
/// backend fails to converge.
pub fn svd_truncated(a: &CMat, max_keep: usize, rel_drop: f64) -> Result<TruncatedSvd> {
    let (m, n) = (a.nrows, a.ncols);
    let fa = to_faer(a);
    let svd = fa
        .svd()
        .map_err(|e| Error::Decomposition(format!("SVD did not converge: {e:?}")))?;
    let full = m.min(n);
    let sdiag = svd.S();
    let mut sv = Vec::with_capacity(full);
    for i in 0..full {
        sv.push(sdiag[i].re);
    }
    debug_assert!(sv.windows(2).all(|w| w[0] >= w[1] - 1e-30), "faer returned unsorted singular values");

    let smax = sv.first().copied().unwrap_or(0.0);
    let mut k = 0usize;
    for &s in &sv {
        if k >= max_keep || s < rel_drop * smax || s <= 0.0 {
            break;
        }
        k += 1;
    }
    // Never return an empty factorization: keep at least one value (even if
    // zero) so downstream bond dimensions stay ≥ 1.
    if k == 0 {
        k = 1.min(full.max(1));
        if full == 0 {
            return Err(Error::Decomposition("SVD of an empty matrix".into()));
        }
    }
    let discarded_weight: f64 = sv[k..].iter().map(|s| s * s).sum();

    let fu = svd.U();
    let fv = svd.V();
    let u = CMat::from_fn(m, k, |i, j| {
        let z = fu[(i, j)];
        Complex64::new(z.re, z.im)
    });
    let vdag = CMat::from_fn(k, n, |i, j| {
        let z = fv[(j, i)];
        Complex64::new(z.re, -z.im)
    });
    Ok(TruncatedSvd {
        u,
        s: sv[..k].to_vec(),
        vdag,
        discarded_weight,
    })
}

/// Thin QR factorization `A = Q·R` by Householder reflections:
/// `Q` is `m × k` with orthonormal columns, `R` is `k × n` upper triangular,
/// `k = min(m, n)`.
pub fn qr_thin(a: &CMat) -> (CMat, CMat) {
    let (m, n) = (a.nrows, a.ncols);
    let k = m.min(n);
    let mut work = a.clone();
    // Householder vectors, stored per column (length m, zero above the pivot).
    let mut vs: Vec<Vec<Complex64>> = Vec::with_capacity(k);

    for j in 0..k {
        // Build the reflector for column j from row j down.
        let mut norm_sq = 0.0f64;
        for i in j..m {
            norm_sq += work.at(i, j).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        let x0 = work.at(j, j);
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        if norm > 0.0 {
            // alpha = −e^{i·arg(x0)}·‖x‖ avoids cancellation in v₀ = x₀ − α.
            let phase = if x0.norm() > 0.0 {
                x0 / x0.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let alpha = -phase * norm;
            v[j] = x0 - alpha;
            for i in (j + 1)..m {
                v[i] = work.at(i, j);
            }
            let vnorm = v[j..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm > 0.0 {
                for z in &mut v[j..] {
                    *z /= vnorm;
                }
                // Apply H = I − 2vv† to the remaining columns (j included).
                for c in j..n {
                    let mut dot = Complex64::new(0.0, 0.0);
                    for i in j..m {
                        dot += v[i].conj() * work.at(i, c);
                    }
                    let two_dot = 2.0 * dot;
                    for i in j..m {
                        *work.at_mut(i, c) -= v[i] * two_dot;
                    }
                }
            }
        }
        vs.push(v);
    }

    let r = CMat::from_fn(k, n, |i, j| if i <= j { work.at(i, j) } else { Complex64::new(0.0, 0.0) });

    // Q = H_0 · H_1 ⋯ H_{k−1} · (first k columns of I)
    let mut q = CMat::from_fn(m, k, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    for j in (0..k).rev() {
        let v = &vs[j];
        for c in 0..k {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in j..m {
                dot += v[i].conj() * q.at(i, c);
            }
            let two_dot = 2.0 * dot;
            for i in j..m {
                *q.at_mut(i, c) -= v[i] * two_dot;
            }
        }
    }
    (q, r)
}

/// Thin LQ factorization `A = L·Q`: `L` is `m × k` lower triangular, `Q` is
/// `k × n` with orthonormal rows, `k = min(m, n)`.
pub fn lq_thin(a: &CMat) -> (CMat, CMat) {
    let (qd, rd) = qr_thin(&a.dagger());
    (rd.dagger(), qd.dagger())
}

/// Eigendecomposition of a Hermitian matrix: `(eigenvalues ascending, U)`
/// with `A = U · diag(ε) · U†`.
pub fn herm_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    debug_assert!(a.is_hermitian(1e-10), "herm_eigen expects a Hermitian matrix");
    let fa = to_faer(a);
    let eig = fa
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Decomposition(format!("eigendecomposition failed: {e:?}")))?;
    let n = a.nrows;
    let sdiag = eig.S();
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        vals.push(sdiag[i].re);
    }
    let fu = eig.U();
    let u = CMat::from_fn(n, n, |i, j| {
        let z = fu[(i, j)];
        Complex64::new(z.re, z.im)
    });
    Ok((vals, u))
}

/// `exp(−i τ A)` for Hermitian `A`, via eigendecomposition.
pub fn herm_exp(a: &CMat, tau: f64) -> Result<CMat> {
    let (vals, u) = herm_eigen(a)?;
    Ok(herm_exp_from_eigen(&vals, &u, tau))
}

/// `exp(−i τ A)` assembled from a precomputed eigendecomposition
/// `A = U · diag(ε) · U†`.
pub fn herm_exp_from_eigen(vals: &[f64], u: &CMat, tau: f64) -> CMat {
    let n = u.nrows;
    // U · diag(e^{−iτε}) · U†
    let mut scaled = CMat::zeros(n, n);
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, -tau * vals[j]);
        for i in 0..n {
            *scaled.at_mut(i, j) = u.at(i, j) * phase;
        }
    }
    scaled.matmul(&u.dagger())
}

/// Closed-form `exp(−i τ a·σ) = cos(‖a‖τ)·I − i sin(‖a‖τ)·(â·σ)` for a real
/// coefficient vector `a = (a_x, a_y, a_z)`.
pub fn pauli_rotation(a: [f64; 3], tau: f64) -> CMat {
    let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let (c, s) = if norm == 0.0 {
        (1.0, 0.0)
    } else {
        ((norm * tau).cos(), (norm * tau).sin())
    };
    let (ax, ay, az) = if norm == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (a[0] / norm, a[1] / norm, a[2] / norm)
    };
    // rows: [c − i·s·az, −i·s·ax − s·ay; −i·s·ax + s·ay, c + i·s·az]
    CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(c, -s * az),
        (0, 1) => Complex64::new(-s * ay, -s * ax),
        (1, 0) => Complex64::new(s * ay, -s * ax),
        (1, 1) => Complex64::new(c, s * az),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_mat(m: usize, n: usize, mut seed: u64) -> CMat {
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMat::from_fn(m, n, |_, _| Complex64::new(next(), next()))
    }

    fn assert_isometric_cols(q: &CMat, tol: f64) {
        let g = q.dagger().matmul(q);
        let id = CMat::identity(q.ncols);
        assert!(g.max_abs_diff(&id) < tol, "columns not orthonormal");
    }

    #[test]
    fn qr_reconstructs_and_is_isometric() {
        for (m, n, seed) in [(6, 4, 1u64), (4, 6, 2), (5, 5, 3), (64, 32, 4), (1, 3, 5)] {
            let a = lcg_mat(m, n, seed);
            let (q, r) = qr_thin(&a);
            assert_eq!(q.nrows, m);
            assert_eq!(q.ncols, m.min(n));
            assert_eq!(r.ncols, n);
            let diff = q.matmul(&r).max_abs_diff(&a);
            assert!(diff < 1e-13 * a.frobenius_norm().max(1.0), "QR residual {diff}");
            assert_isometric_cols(&q, 1e-13);
            // R upper triangular
            for j in 0..r.ncols {
                for i in 0..r.nrows {
                    if i > j {
                        assert_eq!(r.at(i, j), Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn lq_reconstructs_and_is_coisometric() {
        for (m, n, seed) in [(4, 6, 11u64), (6, 4, 12), (3, 3, 13), (32, 64, 14)] {
            let a = lcg_mat(m, n, seed);
            let (l, q) = lq_thin(&a);
            let diff = l.matmul(&q).max_abs_diff(&a);
            assert!(diff < 1e-13 * a.frobenius_norm().max(1.0), "LQ residual {diff}");
            let g = q.matmul(&q.dagger());
            assert!(g.max_abs_diff(&CMat::identity(q.nrows)) < 1e-13);
        }
    }

    #[test]
    fn svd_reconstructs() {
        for (m, n, seed) in [(8, 6, 21u64), (6, 8, 22), (16, 16, 23)] {
            let a = lcg_mat(m, n, seed);
            let f = svd_truncated(&a, m.min(n), 0.0).unwrap();
            assert_eq!(f.discarded_weight, 0.0);
            // U diag(s) V†
            let mut us = f.u.clone();
            for j in 0..f.s.len() {
                for i in 0..us.nrows {
                    *us.at_mut(i, j) = us.at(i, j) * f.s[j];
                }
            }
            let diff = us.matmul(&f.vdag).max_abs_diff(&a);
            assert!(diff < 1e-12 * a.frobenius_norm(), "SVD residual {diff}");
            assert_isometric_cols(&f.u, 1e-12);
            let g = f.vdag.matmul(&f.vdag.dagger());
            assert!(g.max_abs_diff(&CMat::identity(f.s.len())) < 1e-12);
            // descending
            for w in f.s.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn svd_truncation_accounts_weight() {
        let a = lcg_mat(10, 10, 31);
        let full = svd_truncated(&a, 10, 0.0).unwrap();
        let trunc = svd_truncated(&a, 4, 0.0).unwrap();
        assert_eq!(trunc.s.len(), 4);
        let expected: f64 = full.s[4..].iter().map(|s| s * s).sum();
        assert!((trunc.discarded_weight - expected).abs() < 1e-12 * expected.max(1e-300));
        // Frobenius optimality of the rank-4 approximation
        let mut us = trunc.u.clone();
        for j in 0..4 {
            for i in 0..us.nrows {
                *us.at_mut(i, j) = us.at(i, j) * trunc.s[j];
            }
        }
        let resid = us.matmul(&trunc.vdag).add(&a.scale(Complex64::new(-1.0, 0.0)));
        let fr = resid.frobenius_norm();
        assert!((fr * fr - expected).abs() < 1e-10 * expected.max(1.0), "residual² = {} vs discarded {expected}", fr * fr);
    }

    #[test]
    fn svd_relative_drop() {
        // Construct a matrix with known tiny singular values via scaling.
        let q1 = qr_thin(&lcg_mat(6, 6, 41)).0;
        let q2 = qr_thin(&lcg_mat(6, 6, 42)).0;
        let svals = [1.0, 0.5, 1e-3, 1e-10, 1e-16, 1e-17];
        let mut d = CMat::zeros(6, 6);
        for (i, s) in svals.iter().enumerate() {
            *d.at_mut(i, i) = Complex64::new(*s, 0.0);
        }
        let a = q1.matmul(&d).matmul(&q2.dagger());
        let f = svd_truncated(&a, 6, 1e-14).unwrap();
        assert_eq!(f.s.len(), 4, "kept {:?}", f.s);
        assert!(f.discarded_weight < 1e-30);
    }

    #[test]
    fn herm_exp_is_unitary_inverse_pair() {
        let raw = lcg_mat(4, 4, 51);
        let h = raw.add(&raw.dagger()).scale(Complex64::new(0.5, 0.0));
        assert!(h.is_hermitian(1e-12));
        let tau = 0.37;
        let up = herm_exp(&h, tau).unwrap();
        let um = herm_exp(&h, -tau).unwrap();
        let prod = up.matmul(&um);
        assert!(prod.max_abs_diff(&CMat::identity(4)) < 1e-13);
        let g = up.dagger().matmul(&up);
        assert!(g.max_abs_diff(&CMat::identity(4)) < 1e-13);
    }

    #[test]
    fn herm_exp_matches_series() {
        let raw = lcg_mat(3, 3, 61);
        let h = raw.add(&raw.dagger()).scale(Complex64::new(0.5, 0.0));
        let tau = 1e-3;
        let u = herm_exp(&h, tau).unwrap();
        // I − iτH − τ²H²/2 + iτ³H³/6
        let i1 = CMat::identity(3);
        let h2 = h.matmul(&h);
        let h3 = h2.matmul(&h);
        let series = i1
            .add(&h.scale(Complex64::new(0.0, -tau)))
            .add(&h2.scale(Complex64::new(-tau * tau / 2.0, 0.0)))
            .add(&h3.scale(Complex64::new(0.0, tau * tau * tau / 6.0)));
        assert!(u.max_abs_diff(&series) < 1e-11);
    }

    #[test]
    fn pauli_rotation_matches_herm_exp() {
        for (a, tau) in [
            ([1.0, 0.0, 0.0], 0.7),
            ([0.3, -0.4, 0.5], 1.3),
            ([0.0, 0.0, 0.0], 0.9),
            ([-2.0, 0.1, 0.0], -0.25),
        ] {
            let gen = pauli_x()
                .scale(Complex64::new(a[0], 0.0))
                .add(&pauli_y().scale(Complex64::new(a[1], 0.0)))
                .add(&pauli_z().scale(Complex64::new(a[2], 0.0)));
            let expected = herm_exp(&gen, tau).unwrap();
            let got = pauli_rotation(a, tau);
            assert!(got.max_abs_diff(&expected) < 1e-13);
        }
    }

    #[test]
    fn kron_pauli_zz() {
        let zz = kron(&pauli_z(), &pauli_z());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    // diag(+1, −1, −1, +1)
                    if i == 0 || i == 3 { 1.0 } else { -1.0 }
                } else {
                    0.0
                };
                assert_eq!(zz.at(i, j), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn herm_eigen_reconstructs() {
        let raw = lcg_mat(5, 5, 71);
        let h = raw.add(&raw.dagger()).scale(Complex64::new(0.5, 0.0));
        let (vals, u) = herm_eigen(&h).unwrap();
        let mut ud = CMat::zeros(5, 5);
        for j in 0..5 {
            for i in 0..5 {
                *ud.at_mut(i, j) = u.at(i, j) * vals[j];
            }
        }
        let recon = ud.matmul(&u.dagger());
        assert!(recon.max_abs_diff(&h) < 1e-12);
    }
}
