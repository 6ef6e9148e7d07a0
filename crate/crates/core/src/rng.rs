//! Seeded randomness.
//!
//! All draws come from ChaCha20 (`rand_chacha::ChaCha20Rng`) keyed by a
//! 64-bit seed, so streams are identical across platforms. Independent
//! streams for trials or users are derived with [`derive_seed`], a
//! SplitMix64-style mix of the master seed, a purpose tag and an index;
//! no generator state is ever shared between work units.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type SimRng = ChaCha20Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for stream `index` of kind `tag` under `master`.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(tag)) ^ index)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// One draw from CN(0, variance): real and imaginary parts i.i.d. N(0, variance/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize, variance: f64) -> Vec<Complex64> {
    (0..len).map(|_| complex_normal(rng, variance)).collect()
}

/// Stream tags, kept distinct so no two purposes ever share a stream.
pub mod tags {
    pub const CHANNEL: u64 = 1;
    pub const PILOT_NOISE: u64 = 2;
    pub const DATA_BITS: u64 = 3;
    pub const RX_NOISE: u64 = 4;
    pub const TRIAL: u64 = 5;
    pub const USER: u64 = 6;
}
