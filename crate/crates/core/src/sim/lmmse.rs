//! Linear MMSE detection, `s_hat = (H^H H + (N0/Es) I)^-1 H^H y`.
//!
//! The filter is formed in the U x U Gram domain, which is the cheap side
//! when U is much smaller than B.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gram matrices with a condition number above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Precomputed U x B L-MMSE filter for one channel matrix.
#[derive(Debug, Clone)]
pub struct LmmseEqualizer {
    filter: DMatrix<Complex64>,
}

impl LmmseEqualizer {
    pub fn new(h: &DMatrix<Complex64>, n0: f64, es: f64) -> Result<Self> {
        if !(n0.is_finite() && n0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("N0 must be nonnegative and finite, got {n0}")));
        }
        if !(es.is_finite() && es > 0.0) {
            return Err(Error::InvalidArgument(format!("Es must be positive and finite, got {es}")));
        }
        let (b, u) = h.shape();
        if u == 0 || b == 0 {
            return Err(Error::Empty);
        }
        let h_adj = h.adjoint();
        let mut gram = &h_adj * h;
        for i in 0..u {
            gram[(i, i)] += Complex64::new(n0 / es, 0.0);
        }
        let eig = gram.clone().symmetric_eigenvalues();
        let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(Error::Singular { condition });
        }
        let chol = gram.cholesky().ok_or(Error::Singular { condition })?;
        Ok(Self { filter: chol.solve(&h_adj) })
    }

    pub fn filter(&self) -> &DMatrix<Complex64> {
        &self.filter
    }

    pub fn equalize(&self, rx: &[Complex64]) -> Result<Vec<Complex64>> {
        if rx.len() != self.filter.ncols() {
            return Err(Error::LengthMismatch { expected: self.filter.ncols(), actual: rx.len() });
        }
        let y = DVector::from_column_slice(rx);
        Ok((&self.filter * y).iter().copied().collect())
    }

    /// Equalize every column of a B x N block of received vectors.
    pub fn equalize_block(&self, rx: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.filter * rx
    }
}

/// One-shot L-MMSE equalization of a single received vector.
pub fn lmmse_equalize(h: &DMatrix<Complex64>, n0: f64, es: f64, rx: &[Complex64]) -> Result<Vec<Complex64>> {
    LmmseEqualizer::new(h, n0, es)?.equalize(rx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal_vec, rng_from_seed};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Gaussian elimination with partial pivoting on the augmented system.
    fn solve_oracle(a: Vec<Vec<Complex64>>, rhs: Vec<Complex64>) -> Vec<Complex64> {
        let n = rhs.len();
        let mut m: Vec<Vec<Complex64>> = a.into_iter().zip(rhs).map(|(mut row, r)| {
            row.push(r);
            row
        }).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
            m.swap(col, piv);
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                for k in col..=n {
                    let v = m[col][k];
                    m[row][k] -= f * v;
                }
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut acc = m[i][n];
            for k in i + 1..n {
                acc -= m[i][k] * x[k];
            }
            x[i] = acc / m[i][i];
        }
        x
    }

    #[test]
    fn matches_direct_solve() {
        let mut rng = rng_from_seed(3);
        let (b, u) = (8, 4);
        let h = DMatrix::from_vec(b, u, complex_normal_vec(&mut rng, b * u, 1.0));
        let rx = complex_normal_vec(&mut rng, b, 1.0);
        let (n0, es) = (0.3, 1.0);
        let got = lmmse_equalize(&h, n0, es, &rx).unwrap();

        let mut a = vec![vec![c(0.0, 0.0); u]; u];
        let mut rhs = vec![c(0.0, 0.0); u];
        for i in 0..u {
            for j in 0..u {
                a[i][j] = (0..b).map(|k| h[(k, i)].conj() * h[(k, j)]).sum();
            }
            a[i][i] += c(n0 / es, 0.0);
            rhs[i] = (0..b).map(|k| h[(k, i)].conj() * rx[k]).sum();
        }
        let want = solve_oracle(a, rhs);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn single_user_low_noise_is_matched_filter() {
        let h = vec![c(1.0, 2.0), c(-0.5, 0.3), c(0.0, -1.0)];
        let rx = vec![c(0.2, 0.1), c(1.0, -1.0), c(0.5, 0.5)];
        let hm = DMatrix::from_column_slice(3, 1, &h);
        let got = lmmse_equalize(&hm, 1e-14, 1.0, &rx).unwrap();
        let norm2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        let mf: Complex64 = h.iter().zip(&rx).map(|(a, r)| a.conj() * r).sum::<Complex64>() / norm2;
        assert!((got[0] - mf).norm() < 1e-12);
    }

    #[test]
    fn orthonormal_columns_closed_form() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]);
        let rx = vec![c(1.0, -2.0), c(0.5, 3.0)];
        let got = lmmse_equalize(&h, 1.0, 1.0, &rx).unwrap();
        let want: Vec<Complex64> = (0..2).map(|i| (0..2).map(|k| h[(k, i)].conj() * rx[k]).sum::<Complex64>() / 2.0).collect();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_reports_condition() {
        let h = DMatrix::from_column_slice(3, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        match LmmseEqualizer::new(&h, 0.0, 1.0) {
            Err(Error::Singular { condition }) => assert!(condition > MAX_CONDITION),
            other => panic!("expected singular error, got {other:?}"),
        }
        // Regularization rescues the rank-deficient channel.
        assert!(LmmseEqualizer::new(&h, 0.1, 1.0).is_ok());
        assert!(LmmseEqualizer::new(&h, -1.0, 1.0).is_err());
        assert!(LmmseEqualizer::new(&h, 0.1, 0.0).is_err());
    }
}
