//! Monte-Carlo sweeps: estimation MSE and uncoded BER versus SNR, plus the
//! threshold-search runtime benchmark.
//!
//! Every trial draws from its own ChaCha20 streams seeded by
//! `(master_seed, trial index)`, and the same channel, pilot-noise, bit and
//! receiver-noise streams are reused at every SNR point and for every
//! estimator. Trials may run on any number of threads; their results are
//! reduced in trial order, so output is identical for any thread count.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::config::{snr_db_to_noise_variance, Estimator, SimConfig};
use super::lmmse::LmmseEqualizer;
use super::oracle::oracle_tau;
use super::qam::{count_bit_errors, qam_map};
use crate::channel::{add_noise, mse_slices, sample_users, synthesize_channel, NoisyObservation};
use crate::denoiser::{denoise_beamspace_in_place, find_tau_star, soft_threshold_in_place, DenoiserConfig};
use crate::error::{Error, Result};
use crate::rng::{complex_normal, derive_seed, rng_from_seed, tags};
use crate::spectral::{ComplexVector, Domain, SpectralPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Mse,
    Ber,
    /// Mean minimal SURE reported by the BEACHES threshold search.
    SureMin,
    /// Median wall time of one threshold search.
    RuntimeMs,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Mse => "mse",
            Metric::Ber => "ber",
            Metric::SureMin => "sure_min",
            Metric::RuntimeMs => "runtime_ms",
        }
    }
}

/// One row of sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// `None` for the runtime benchmark.
    pub snr_db: Option<f64>,
    pub b: usize,
    pub estimator: Estimator,
    pub metric: Metric,
    pub value: f64,
    pub trial_count: usize,
    pub wall_time_ms: Option<f64>,
}

impl SweepRecord {
    /// Equality ignoring wall-clock time.
    pub fn same_result(&self, other: &SweepRecord) -> bool {
        SweepRecord { wall_time_ms: None, ..self.clone() } == SweepRecord { wall_time_ms: None, ..other.clone() }
    }
}

/// Noisy pilot-based estimates `y_u = h_u + e_u`, one independent stream per user.
pub fn pilot_estimate(h_true: &[ComplexVector], e0: f64, seed: u64) -> Result<Vec<NoisyObservation>> {
    h_true
        .iter()
        .enumerate()
        .map(|(u, h)| add_noise(h, e0, derive_seed(seed, tags::PILOT_NOISE, u as u64)))
        .collect()
}

/// Channels and pilot observations for one trial.
struct TrialChannels {
    h: Vec<ComplexVector>,
    obs: Vec<NoisyObservation>,
}

fn trial_seed(cfg: &SimConfig, trial: usize) -> u64 {
    derive_seed(cfg.master_seed, tags::TRIAL, trial as u64)
}

fn draw_trial(cfg: &SimConfig, trial: usize, e0: f64) -> Result<TrialChannels> {
    let seed = trial_seed(cfg, trial);
    let users = sample_users(&cfg.profile, cfg.b, cfg.u, derive_seed(seed, tags::CHANNEL, 0))?;
    let h: Vec<ComplexVector> = users.iter().map(synthesize_channel).collect();
    let obs = pilot_estimate(&h, e0, derive_seed(seed, tags::PILOT_NOISE, 0))?;
    Ok(TrialChannels { h, obs })
}

/// Estimate of one user's channel, in the beamspace domain, plus the SURE
/// minimum when BEACHES produced it.
fn estimate_beamspace(
    estimator: Estimator,
    y_hat: &[Complex64],
    h_hat: &[Complex64],
    cfg: &DenoiserConfig,
) -> Result<(Vec<Complex64>, Option<f64>)> {
    Ok(match estimator {
        Estimator::Ml => (y_hat.to_vec(), None),
        Estimator::PerfectCsi => (h_hat.to_vec(), None),
        Estimator::Beaches => {
            let mut est = y_hat.to_vec();
            let r = denoise_beamspace_in_place(&mut est, cfg);
            (est, Some(r.sure_min))
        }
        Estimator::OracleTau => {
            let (tau, _) = oracle_tau(y_hat, h_hat)?;
            let mut est = y_hat.to_vec();
            soft_threshold_in_place(&mut est, tau)?;
            (est, None)
        }
    })
}

fn to_beamspace(plan: &SpectralPlan, v: &ComplexVector) -> Result<Vec<Complex64>> {
    let mut buf = v.as_slice().to_vec();
    plan.forward_in_place(&mut buf)?;
    Ok(buf)
}

/// Per-trial MSE values at one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct MsePoint {
    pub snr_db: f64,
    pub e0: f64,
    /// For each configured estimator, the per-trial MSE averaged over users.
    pub per_trial: Vec<(Estimator, Vec<f64>)>,
    /// Per-trial mean of BEACHES' minimal SURE (empty if BEACHES not selected).
    pub sure_min: Vec<f64>,
    pub wall_time_ms: f64,
}

impl MsePoint {
    pub fn trials(&self, estimator: Estimator) -> Option<&[f64]> {
        self.per_trial.iter().find(|(e, _)| *e == estimator).map(|(_, v)| v.as_slice())
    }
}

fn mse_trial(cfg: &SimConfig, plan: &SpectralPlan, trial: usize, e0: f64) -> Result<(Vec<f64>, f64)> {
    let dcfg = DenoiserConfig::new(e0)?;
    let channels = draw_trial(cfg, trial, e0)?;
    let mut sums = vec![0.0; cfg.estimators.len()];
    let mut sure_sum = 0.0;
    for (h, obs) in channels.h.iter().zip(&channels.obs) {
        let y_hat = to_beamspace(plan, &obs.y)?;
        let h_hat = to_beamspace(plan, h)?;
        for (slot, &est) in sums.iter_mut().zip(&cfg.estimators) {
            let (estimate, sure) = estimate_beamspace(est, &y_hat, &h_hat, &dcfg)?;
            *slot += mse_slices(&estimate, &h_hat)?;
            if let Some(s) = sure {
                sure_sum += s;
            }
        }
    }
    let u = cfg.u as f64;
    Ok((sums.into_iter().map(|s| s / u).collect(), sure_sum / u))
}

/// Run the MSE sweep and keep per-trial values.
pub fn run_mse_sweep_detailed(cfg: &SimConfig) -> Result<Vec<MsePoint>> {
    cfg.validate()?;
    let plan = SpectralPlan::new(cfg.b)?;
    let has_beaches = cfg.estimators.contains(&Estimator::Beaches);
    cfg.snr_db_grid
        .iter()
        .map(|&snr_db| {
            let start = Instant::now();
            let e0 = snr_db_to_noise_variance(snr_db);
            let rows: Vec<(Vec<f64>, f64)> = (0..cfg.num_channel_trials)
                .into_par_iter()
                .map(|t| mse_trial(cfg, &plan, t, e0))
                .collect::<Result<_>>()?;
            let per_trial = cfg
                .estimators
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, rows.iter().map(|r| r.0[i]).collect()))
                .collect();
            let sure_min = if has_beaches { rows.iter().map(|r| r.1).collect() } else { Vec::new() };
            Ok(MsePoint { snr_db, e0, per_trial, sure_min, wall_time_ms: start.elapsed().as_secs_f64() * 1e3 })
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean MSE per (SNR, estimator), plus mean SURE_min rows for BEACHES.
pub fn run_mse_sweep(cfg: &SimConfig) -> Result<Vec<SweepRecord>> {
    let points = run_mse_sweep_detailed(cfg)?;
    let mut records = Vec::new();
    for p in &points {
        let wall = cfg.record_timing.then_some(p.wall_time_ms);
        for (est, vals) in &p.per_trial {
            records.push(SweepRecord {
                snr_db: Some(p.snr_db),
                b: cfg.b,
                estimator: *est,
                metric: Metric::Mse,
                value: mean(vals),
                trial_count: vals.len(),
                wall_time_ms: wall,
            });
        }
        if !p.sure_min.is_empty() {
            records.push(SweepRecord {
                snr_db: Some(p.snr_db),
                b: cfg.b,
                estimator: Estimator::Beaches,
                metric: Metric::SureMin,
                value: mean(&p.sure_min),
                trial_count: p.sure_min.len(),
                wall_time_ms: wall,
            });
        }
    }
    Ok(records)
}

/// Bit-error tally for one estimator at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BitErrors {
    pub errors: u64,
    pub bits: u64,
}

impl BitErrors {
    pub fn rate(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// Binomial standard error of [`BitErrors::rate`].
    pub fn std_error(&self) -> f64 {
        let p = self.rate();
        if self.bits == 0 {
            0.0
        } else {
            (p * (1.0 - p) / self.bits as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub per_estimator: Vec<(Estimator, BitErrors)>,
    pub wall_time_ms: f64,
}

impl BerPoint {
    pub fn get(&self, estimator: Estimator) -> Option<BitErrors> {
        self.per_estimator.iter().find(|(e, _)| *e == estimator).map(|(_, c)| *c)
    }
}

fn channel_matrix(cols: &[Vec<Complex64>], b: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(b, cols.len(), |r, c| cols[c][r])
}

fn ber_trial(cfg: &SimConfig, plan: &SpectralPlan, trial: usize, noise_var: f64) -> Result<Vec<BitErrors>> {
    let (b, u, n) = (cfg.b, cfg.u, cfg.num_data_symbols_per_trial);
    let dcfg = DenoiserConfig::new(noise_var)?;
    let channels = draw_trial(cfg, trial, noise_var)?;
    let h_true = channel_matrix(&channels.h.iter().map(|h| h.as_slice().to_vec()).collect::<Vec<_>>(), b);

    let equalizers: Vec<LmmseEqualizer> = cfg
        .estimators
        .iter()
        .map(|&est| {
            let cols = channels
                .h
                .iter()
                .zip(&channels.obs)
                .map(|(h, obs)| {
                    let y_hat = to_beamspace(plan, &obs.y)?;
                    let h_hat = to_beamspace(plan, h)?;
                    let (mut estimate, _) = estimate_beamspace(est, &y_hat, &h_hat, &dcfg)?;
                    plan.inverse_in_place(&mut estimate)?;
                    Ok(estimate)
                })
                .collect::<Result<Vec<_>>>()?;
            LmmseEqualizer::new(&channel_matrix(&cols, b), noise_var, 1.0)
        })
        .collect::<Result<_>>()?;

    let seed = trial_seed(cfg, trial);
    let bps = cfg.modulation.bits_per_symbol();
    let mut bit_rng = rng_from_seed(derive_seed(seed, tags::DATA_BITS, 0));
    let bits: Vec<u8> = (0..n * u * bps).map(|_| bit_rng.random::<bool>() as u8).collect();
    let symbols = qam_map(&bits, cfg.modulation)?;
    // Column k holds the U symbols sent in slot k.
    let s = DMatrix::from_column_slice(u, n, &symbols);
    let mut noise_rng = rng_from_seed(derive_seed(seed, tags::RX_NOISE, 0));
    let noise = DMatrix::from_fn(b, n, |_, _| complex_normal(&mut noise_rng, noise_var));
    let rx = &h_true * s + noise;

    Ok(equalizers
        .iter()
        .map(|eq| {
            let s_hat = eq.equalize_block(&rx);
            BitErrors {
                errors: count_bit_errors(s_hat.as_slice(), &bits, cfg.modulation) as u64,
                bits: bits.len() as u64,
            }
        })
        .collect())
}

/// Run the BER sweep and keep raw error tallies.
pub fn run_ber_sweep_detailed(cfg: &SimConfig) -> Result<Vec<BerPoint>> {
    cfg.validate()?;
    let plan = SpectralPlan::new(cfg.b)?;
    cfg.snr_db_grid
        .iter()
        .map(|&snr_db| {
            let start = Instant::now();
            let noise_var = snr_db_to_noise_variance(snr_db);
            let rows: Vec<Vec<BitErrors>> = (0..cfg.num_channel_trials)
                .into_par_iter()
                .map(|t| ber_trial(cfg, &plan, t, noise_var))
                .collect::<Result<_>>()?;
            let per_estimator = cfg
                .estimators
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let total = rows.iter().fold(BitErrors::default(), |acc, r| BitErrors {
                        errors: acc.errors + r[i].errors,
                        bits: acc.bits + r[i].bits,
                    });
                    (e, total)
                })
                .collect();
            Ok(BerPoint { snr_db, per_estimator, wall_time_ms: start.elapsed().as_secs_f64() * 1e3 })
        })
        .collect()
}

pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<SweepRecord>> {
    let points = run_ber_sweep_detailed(cfg)?;
    Ok(points
        .iter()
        .flat_map(|p| {
            p.per_estimator.iter().map(move |(est, counts)| SweepRecord {
                snr_db: Some(p.snr_db),
                b: cfg.b,
                estimator: *est,
                metric: Metric::Ber,
                value: counts.rate(),
                trial_count: cfg.num_channel_trials,
                wall_time_ms: cfg.record_timing.then_some(p.wall_time_ms),
            })
        })
        .collect())
}

/// Random beamspace test vector for timing: four strong taps over CN(0, 1) noise.
pub fn benchmark_vector(b: usize, seed: u64) -> Result<ComplexVector> {
    let mut rng = rng_from_seed(seed);
    let mut data: Vec<Complex64> = (0..b).map(|_| complex_normal(&mut rng, 1.0)).collect();
    for _ in 0..4.min(b) {
        let idx = rng.random_range(0..b);
        data[idx] += complex_normal(&mut rng, 100.0 * b as f64 / 4.0);
    }
    ComplexVector::new(data, Domain::Beamspace)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median single-call wall time of the exact threshold search for each size.
/// Runs sequentially so timings are not distorted by sibling work.
pub fn run_scaling_benchmark(b_list: &[usize], runs: usize, seed: u64) -> Result<Vec<SweepRecord>> {
    if b_list.is_empty() || b_list.contains(&0) || runs == 0 {
        return Err(Error::Config("scaling benchmark needs positive sizes and at least one run".into()));
    }
    let cfg = DenoiserConfig::new(1.0)?;
    b_list
        .iter()
        .map(|&b| {
            let y = benchmark_vector(b, derive_seed(seed, tags::TRIAL, b as u64))?;
            let start = Instant::now();
            let times: Vec<f64> = (0..runs)
                .map(|_| {
                    let t = Instant::now();
                    let r = find_tau_star(&y, &cfg);
                    std::hint::black_box(r);
                    t.elapsed().as_secs_f64() * 1e3
                })
                .collect();
            let total = start.elapsed().as_secs_f64() * 1e3;
            Ok(SweepRecord {
                snr_db: None,
                b,
                estimator: Estimator::Beaches,
                metric: Metric::RuntimeMs,
                value: median(times),
                trial_count: runs,
                wall_time_ms: Some(total),
            })
        })
        .collect()
}
