//! Beamspace channel denoising for massive-MIMO mmWave receivers.
//!
//! A noisy channel estimate is moved to the beamspace domain with a unitary
//! DFT, soft-thresholded at the level that minimizes Stein's unbiased risk
//! estimate (found exactly in `O(B log B)`), and moved back. The crate also
//! ships a synthetic multipath channel model and an uplink simulator used to
//! measure the MSE and bit-error-rate gains of the denoiser.

pub mod channel;
pub mod denoiser;
pub mod error;
pub mod io;
pub mod rng;
pub mod selftest;
pub mod sim;
pub mod spectral;

pub use channel::{
    add_noise, mse, sample_profile, sample_users, steering_vector, synthesize_channel, ChannelModel,
    NoisyObservation, PathComponent, Profile,
};
pub use denoiser::{
    beaches, brute_force_tau, find_tau_star, soft_threshold, sure_interval_quadratic, sure_soft, Beaches,
    DenoiserConfig, TauSearchResult,
};
pub use error::{Error, Result};
pub use spectral::{dft, idft, ComplexVector, Domain, SpectralPlan};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
