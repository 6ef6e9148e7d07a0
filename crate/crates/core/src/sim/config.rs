//! Simulation configuration and its flat `key = value` text form.
//!
//! ```text
//! # comment
//! b = 256
//! u = 16
//! snr_db = -10, -8, -6
//! modulation = qam16
//! trials = 200
//! symbols = 100
//! profile = los
//! estimators = ml, beaches, perfect_csi
//! seed = 1
//! ```
//!
//! Unknown keys are rejected with the list of valid ones. Lines starting
//! with `#` are ignored, so a run manifest (config plus `#` metadata) is
//! itself a valid config file.

use std::fmt;
use std::str::FromStr;

use crate::channel::Profile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulation {
    Qpsk,
    Qam16,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qpsk" => Ok(Modulation::Qpsk),
            "qam16" | "16qam" => Ok(Modulation::Qam16),
            other => Err(Error::Config(format!("unknown modulation '{other}' (expected qam16, qpsk)"))),
        }
    }
}

/// Channel estimate fed to the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    /// Raw pilot-based estimate, no denoising.
    Ml,
    /// SURE-tuned beamspace soft-thresholding.
    Beaches,
    /// Soft-thresholding at the threshold minimizing the true MSE (genie).
    OracleTau,
    /// Noiseless channel (genie).
    PerfectCsi,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::Ml, Estimator::Beaches, Estimator::OracleTau, Estimator::PerfectCsi];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Ml => "ml",
            Estimator::Beaches => "beaches",
            Estimator::OracleTau => "oracle_tau",
            Estimator::PerfectCsi => "perfect_csi",
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown estimator '{s}' (expected ml, beaches, oracle_tau, perfect_csi)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub b: usize,
    pub u: usize,
    pub snr_db_grid: Vec<f64>,
    pub modulation: Modulation,
    pub num_channel_trials: usize,
    pub num_data_symbols_per_trial: usize,
    pub profile: Profile,
    pub estimators: Vec<Estimator>,
    pub master_seed: u64,
    /// Array sizes for the scaling benchmark.
    pub b_list: Vec<usize>,
    /// Timed repetitions per array size in the scaling benchmark.
    pub scaling_runs: usize,
    /// Emit per-point wall times into result files. Off by default so that
    /// reruns produce byte-identical output.
    pub record_timing: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            b: 256,
            u: 8,
            snr_db_grid: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            modulation: Modulation::Qam16,
            num_channel_trials: 200,
            num_data_symbols_per_trial: 2000,
            profile: Profile::los(),
            estimators: vec![Estimator::Ml, Estimator::Beaches, Estimator::OracleTau, Estimator::PerfectCsi],
            master_seed: 1,
            b_list: (10..=20).step_by(2).map(|p| 1usize << p).collect(),
            scaling_runs: 20,
            record_timing: false,
        }
    }
}

pub const VALID_KEYS: [&str; 12] = [
    "b",
    "u",
    "snr_db",
    "modulation",
    "trials",
    "symbols",
    "profile",
    "estimators",
    "seed",
    "b_list",
    "runs",
    "timing",
];

fn parse_num<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("invalid value '{value}' for key '{key}'") })
}

fn parse_list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s, line)).collect()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl SimConfig {
    /// Parse `key = value` text, starting from defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, message: format!("expected key = value, got '{content}'") })?;
            let key = key.trim();
            let value = value.trim();
            let with_line = |e: Error| match e {
                Error::Config(message) => Error::Parse { line, message },
                other => other,
            };
            match key {
                "b" => cfg.b = parse_num(key, value, line)?,
                "u" => cfg.u = parse_num(key, value, line)?,
                "snr_db" => cfg.snr_db_grid = parse_list(key, value, line)?,
                "modulation" => cfg.modulation = value.parse().map_err(with_line)?,
                "trials" => cfg.num_channel_trials = parse_num(key, value, line)?,
                "symbols" => cfg.num_data_symbols_per_trial = parse_num(key, value, line)?,
                "profile" => {
                    cfg.profile = value.parse().map_err(|e: Error| Error::Parse { line, message: e.to_string() })?
                }
                "estimators" => {
                    cfg.estimators = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse().map_err(with_line))
                        .collect::<Result<_>>()?
                }
                "seed" => cfg.master_seed = parse_num(key, value, line)?,
                "b_list" => cfg.b_list = parse_list(key, value, line)?,
                "runs" => cfg.scaling_runs = parse_num(key, value, line)?,
                "timing" => cfg.record_timing = parse_num(key, value, line)?,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key '{other}'; valid keys: {}", VALID_KEYS.join(", ")),
                    })
                }
            }
        }
        Ok(cfg)
    }

    /// Serialize in the same format [`SimConfig::parse`] reads.
    pub fn to_text(&self) -> String {
        let est: Vec<&str> = self.estimators.iter().map(|e| e.name()).collect();
        format!(
            "b = {}\nu = {}\nsnr_db = {}\nmodulation = {}\ntrials = {}\nsymbols = {}\nprofile = {}\nestimators = {}\nseed = {}\nb_list = {}\nruns = {}\ntiming = {}\n",
            self.b,
            self.u,
            join(&self.snr_db_grid),
            self.modulation.name(),
            self.num_channel_trials,
            self.num_data_symbols_per_trial,
            self.profile.name(),
            est.join(","),
            self.master_seed,
            join(&self.b_list),
            self.scaling_runs,
            self.record_timing,
        )
    }

    /// Checks shared by the MSE and BER sweeps.
    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::Config("b must be at least 1".into()));
        }
        if self.u == 0 || self.u > self.b {
            return Err(Error::Config(format!("u must be in 1..=b, got u={} b={}", self.u, self.b)));
        }
        if self.snr_db_grid.is_empty() {
            return Err(Error::Config("snr_db grid is empty".into()));
        }
        if let Some(s) = self.snr_db_grid.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("snr_db value {s} is not finite")));
        }
        if self.num_channel_trials == 0 || self.num_data_symbols_per_trial == 0 {
            return Err(Error::Config("trials and symbols must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("estimator list is empty".into()));
        }
        if matches!(self.profile, Profile::Custom) {
            return Err(Error::Config("sweeps need a random profile (los or nlos)".into()));
        }
        Ok(())
    }

    pub fn validate_scaling(&self) -> Result<()> {
        if self.b_list.is_empty() || self.b_list.contains(&0) {
            return Err(Error::Config("b_list must be non-empty with positive sizes".into()));
        }
        if self.scaling_runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Linear noise variance for an SNR in dB under unit-power channels and symbols.
pub fn snr_db_to_noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}
