//! Genie threshold: the soft-threshold level that minimizes the true
//! squared error against a known beamspace channel.
//!
//! Between consecutive sorted magnitudes of `y`, the loss
//! `sum_{|y|<=tau} |h|^2 + sum_{|y|>tau} |y - h - tau y/|y||^2` is a
//! quadratic in `tau` and it is continuous across the breakpoints, so the
//! same sort-and-sweep used for SURE finds the exact minimizer.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exact minimizer of `sum |eta(y, tau) - h|^2` over `tau >= 0`.
/// Returns `(tau, loss / B)`.
pub fn oracle_tau(y_hat: &[Complex64], h_hat: &[Complex64]) -> Result<(f64, f64)> {
    if y_hat.len() != h_hat.len() {
        return Err(Error::LengthMismatch { expected: y_hat.len(), actual: h_hat.len() });
    }
    if y_hat.is_empty() {
        return Err(Error::Empty);
    }
    let b = y_hat.len() as f64;

    // (|y|, |h|^2, |y - h|^2, Re(conj(y/|y|) (y - h)))
    let mut zero_energy = 0.0;
    let mut entries: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(y_hat.len());
    for (y, h) in y_hat.iter().zip(h_hat) {
        let r = y.norm();
        if r == 0.0 {
            zero_energy += h.norm_sqr();
        } else {
            let d = y - h;
            let unit = y / r;
            entries.push((r, h.norm_sqr(), d.norm_sqr(), (unit.conj() * d).re));
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = entries.len();

    let mut d_suffix = vec![0.0; m + 1];
    let mut c_suffix = vec![0.0; m + 1];
    for j in (0..m).rev() {
        d_suffix[j] = d_suffix[j + 1] + entries[j].2;
        c_suffix[j] = c_suffix[j + 1] + entries[j].3;
    }

    let mut below = zero_energy;
    let mut best = (0.0, f64::INFINITY);
    for j in 0..=m {
        let lower = if j == 0 { 0.0 } else { entries[j - 1].0 };
        let above = (m - j) as f64;
        let tau = if m == j {
            lower
        } else {
            let upper = entries[j].0;
            lower.max(upper.min(c_suffix[j] / above))
        };
        let loss = below + d_suffix[j] - 2.0 * tau * c_suffix[j] + above * tau * tau;
        if loss < best.1 {
            best = (tau, loss);
        }
        if j < m {
            below += entries[j].1;
        }
    }
    Ok((best.0, best.1.max(0.0) / b))
}
