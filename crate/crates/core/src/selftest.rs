//! Fast invariant checks run by `beaches selftest`.

use num_complex::Complex64;

use crate::denoiser::{brute_force_tau, default_grid, find_tau_star, soft_threshold, sure_soft, DenoiserConfig};
use crate::error::Result;
use crate::rng::{complex_normal_vec, rng_from_seed};
use crate::spectral::{ComplexVector, SpectralPlan};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    /// Noise variance used by the denoiser checks.
    pub e0: f64,
    pub seed: u64,
    /// Noise draws for the unbiasedness check.
    pub unbiased_draws: usize,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { e0: 1.0, seed: 2024, unbiased_draws: 20_000 }
    }
}

fn check(name: &'static str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) -> CheckOutcome {
    match f() {
        Ok(Ok(detail)) => CheckOutcome { name, passed: true, detail },
        Ok(Err(detail)) => CheckOutcome { name, passed: false, detail },
        Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
    }
}

fn parseval(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let mut rng = rng_from_seed(opts.seed);
    let mut worst = 0.0f64;
    for b in [1usize, 2, 3, 5, 8, 256, 1000] {
        let x = ComplexVector::antenna(complex_normal_vec(&mut rng, b, 1.0))?;
        let plan = SpectralPlan::new(b)?;
        let rel = (plan.dft(&x)?.norm() - x.norm()).abs() / x.norm();
        worst = worst.max(rel);
    }
    Ok(if worst < 1e-10 { Ok(format!("max relative norm error {worst:.2e}")) } else { Err(format!("norm error {worst:.2e}")) })
}

fn round_trip(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let mut rng = rng_from_seed(opts.seed ^ 1);
    let mut worst = 0.0f64;
    for b in [7usize, 64, 100, 4096] {
        let x = ComplexVector::antenna(complex_normal_vec(&mut rng, b, 1.0))?;
        let plan = SpectralPlan::new(b)?;
        let back = plan.idft(&plan.dft(&x)?)?;
        let inf = x.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let err = back.as_slice().iter().zip(x.as_slice()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(err / inf);
    }
    Ok(if worst < 1e-10 { Ok(format!("max relative error {worst:.2e}")) } else { Err(format!("error {worst:.2e}")) })
}

fn shrinkage(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let mut rng = rng_from_seed(opts.seed ^ 2);
    let y = ComplexVector::beamspace(complex_normal_vec(&mut rng, 256, 4.0))?;
    let mut prev = f64::INFINITY;
    for step in 0..=40 {
        let tau = step as f64 * 0.1;
        let out = soft_threshold(&y, tau)?;
        if out.as_slice().iter().zip(y.as_slice()).any(|(o, i)| o.norm() > i.norm()) {
            return Ok(Err(format!("magnitude grew at tau={tau}")));
        }
        let n = out.norm();
        if n > prev {
            return Ok(Err(format!("norm increased at tau={tau}")));
        }
        prev = n;
    }
    Ok(Ok("41 thresholds".into()))
}

fn oracle_agreement(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let cfg = DenoiserConfig::new(opts.e0)?;
    let mut rng = rng_from_seed(opts.seed ^ 3);
    let instances = 100;
    for i in 0..instances {
        let b = 1 + i % 32;
        let mut data = complex_normal_vec(&mut rng, b, opts.e0);
        data[0] += Complex64::new(3.0, 0.0) * opts.e0.sqrt();
        let y = ComplexVector::beamspace(data)?;
        let fast = find_tau_star(&y, &cfg);
        let (step, tmax) = default_grid(&y);
        let grid = brute_force_tau(&y, &cfg, step, tmax)?;
        if fast.sure_min > grid.sure_min + 1e-10 * (1.0 + grid.sure_min.abs()) {
            return Ok(Err(format!("instance {i}: fast {} > grid {}", fast.sure_min, grid.sure_min)));
        }
    }
    Ok(Ok(format!("{instances} instances, B <= 32")))
}

fn unbiasedness(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let cfg = DenoiserConfig::new(opts.e0)?;
    let b = 32;
    let mut h = vec![Complex64::new(0.0, 0.0); b];
    h[2] = Complex64::new(4.0, 1.0) * opts.e0.sqrt();
    h[17] = Complex64::new(-2.0, 2.5) * opts.e0.sqrt();
    let tau = opts.e0.sqrt();
    let mut rng = rng_from_seed(opts.seed ^ 4);
    let n = opts.unbiased_draws;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let noise = complex_normal_vec(&mut rng, b, opts.e0);
        let y = ComplexVector::beamspace(h.iter().zip(&noise).map(|(a, e)| a + e).collect())?;
        let sure = sure_soft(&y, tau, &cfg)?;
        let est = soft_threshold(&y, tau)?;
        let loss = est.as_slice().iter().zip(&h).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / b as f64;
        let d = sure - loss;
        sum += d;
        sum_sq += d * d;
    }
    let mean = sum / n as f64;
    let sd = (sum_sq / n as f64 - mean * mean).max(0.0).sqrt();
    let bound = 4.0 * sd / (n as f64).sqrt();
    Ok(if mean.abs() < bound {
        Ok(format!("|mean(SURE - loss)| = {:.2e} < {bound:.2e}", mean.abs()))
    } else {
        Err(format!("bias {mean:.3e} exceeds {bound:.3e}"))
    })
}

/// Run every check and report each outcome.
pub fn run_selftest(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    vec![
        check("parseval", || parseval(opts)),
        check("round_trip", || round_trip(opts)),
        check("shrinkage_monotonicity", || shrinkage(opts)),
        check("oracle_agreement", || oracle_agreement(opts)),
        check("sure_unbiasedness", || unbiasedness(opts)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let out = run_selftest(&SelftestOptions::default());
        assert_eq!(out.len(), 5);
        for c in &out {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn negative_e0_reports_precondition() {
        let out = run_selftest(&SelftestOptions { e0: -1.0, ..SelftestOptions::default() });
        let failed: Vec<_> = out.iter().filter(|c| !c.passed).collect();
        assert!(failed.iter().any(|c| c.name == "oracle_agreement"));
        assert!(failed.iter().all(|c| c.detail.contains("noise variance")));
    }
}
