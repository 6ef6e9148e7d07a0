//! Uplink link-level simulation: pilot-based estimation, per-user
//! denoising, L-MMSE detection and MSE/BER sweeps over SNR.
//!
//! SNR convention: with unit-power channels (`|h|^2 = B`) and unit-energy
//! symbols, pilot estimation noise and data noise share one variance,
//! `E0 = N0 = 10^(-SNR/10)`.

pub mod config;
pub mod lmmse;
pub mod oracle;
pub mod qam;
pub mod sweep;

pub use config::{snr_db_to_noise_variance, Estimator, Modulation, SimConfig};
pub use lmmse::{lmmse_equalize, LmmseEqualizer};
pub use oracle::oracle_tau;
pub use qam::{qam_demap, qam_map};
pub use sweep::{
    pilot_estimate, run_ber_sweep, run_ber_sweep_detailed, run_mse_sweep, run_mse_sweep_detailed,
    run_scaling_benchmark, BerPoint, BitErrors, Metric, MsePoint, SweepRecord,
};
