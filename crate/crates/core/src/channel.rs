//! Synthetic multipath channels for a half-wavelength uniform linear array.
//!
//! A channel is a superposition of steering vectors
//! `h = sum_l alpha_l a(omega_l)` with `a(omega)[m] = exp(j m omega)`.
//! An incidence angle `theta` maps to `omega = pi sin(theta)` wrapped into
//! `[0, 2 pi)`.
//!
//! Two random profiles stand in for measured channels: `Los` has one
//! dominant path plus a few weak ones (sparse beamspace), `Nlos` has many
//! Rayleigh-faded paths with exponentially decaying power (diffuse
//! beamspace). Sampled channels are scaled so that `|h|^2 = B`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{self, complex_normal, complex_normal_vec, derive_seed, tags};
use crate::spectral::{ComplexVector, Domain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    pub alpha: Complex64,
    /// Spatial frequency in `[0, 2 pi)`.
    pub omega: f64,
}

impl PathComponent {
    pub fn new(alpha: Complex64, omega: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("path gain {alpha} is not finite")));
        }
        if !(0.0..TAU).contains(&omega) {
            return Err(Error::InvalidArgument(format!("omega {omega} outside [0, 2pi)")));
        }
        Ok(Self { alpha, omega })
    }

    /// Incidence angle in radians, in `[-pi/2, pi/2]`.
    pub fn angle(&self) -> f64 {
        let centered = if self.omega > PI { self.omega - TAU } else { self.omega };
        (centered / PI).clamp(-1.0, 1.0).asin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosParams {
    pub min_paths: usize,
    pub max_paths: usize,
    /// Power of the direct path above the strongest secondary path, dB.
    pub dominance_db: f64,
    /// Secondary paths fall uniformly within this many dB below that level.
    pub secondary_spread_db: f64,
    pub sector_half_width_deg: f64,
}

impl Default for LosParams {
    fn default() -> Self {
        Self { min_paths: 1, max_paths: 4, dominance_db: 10.0, secondary_spread_db: 10.0, sector_half_width_deg: 60.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlosParams {
    pub min_paths: usize,
    pub max_paths: usize,
    /// Mean power of path `l` is `exp(-l / decay_paths)`.
    pub decay_paths: f64,
    pub sector_half_width_deg: f64,
}

impl Default for NlosParams {
    fn default() -> Self {
        Self { min_paths: 8, max_paths: 24, decay_paths: 8.0, sector_half_width_deg: 60.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    Los(LosParams),
    Nlos(NlosParams),
    /// Explicit paths supplied by the caller.
    Custom,
}

impl Profile {
    pub fn los() -> Self {
        Profile::Los(LosParams::default())
    }

    pub fn nlos() -> Self {
        Profile::Nlos(NlosParams::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Los(_) => "los",
            Profile::Nlos(_) => "nlos",
            Profile::Custom => "custom",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "los" => Ok(Profile::los()),
            "nlos" => Ok(Profile::nlos()),
            "custom" => Ok(Profile::Custom),
            other => Err(Error::InvalidArgument(format!("unknown profile '{other}' (expected los, nlos, custom)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    b: usize,
    paths: Vec<PathComponent>,
    profile: Profile,
}

impl ChannelModel {
    pub fn new(b: usize, paths: Vec<PathComponent>, profile: Profile) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidArgument("antenna count must be at least 1".into()));
        }
        if paths.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one path".into()));
        }
        for p in &paths {
            PathComponent::new(p.alpha, p.omega)?;
        }
        if let Profile::Los(_) = profile {
            let direct = paths[0].alpha.norm();
            if paths.iter().any(|p| p.alpha.norm() > direct) {
                return Err(Error::InvalidArgument("LoS channel requires the first path to dominate".into()));
            }
        }
        Ok(Self { b, paths, profile })
    }

    pub fn custom(b: usize, paths: Vec<PathComponent>) -> Result<Self> {
        Self::new(b, paths, Profile::Custom)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn paths(&self) -> &[PathComponent] {
        &self.paths
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Direction of the first (for LoS, dominant) path.
    pub fn dominant_angle(&self) -> f64 {
        self.paths[0].angle()
    }

    fn scale_gains(&mut self, factor: f64) {
        for p in &mut self.paths {
            p.alpha *= factor;
        }
    }
}

/// Noisy channel estimate `y = h + e` with `e ~ CN(0, e0 I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyObservation {
    pub y: ComplexVector,
    pub h_true: ComplexVector,
    pub e0: f64,
}

/// `a(omega)[m] = exp(j m omega)`, m = 0..b.
pub fn steering_vector(omega: f64, b: usize) -> Result<ComplexVector> {
    if b == 0 {
        return Err(Error::InvalidArgument("antenna count must be at least 1".into()));
    }
    if !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega {omega} is not finite")));
    }
    let data = (0..b).map(|m| Complex64::from_polar(1.0, m as f64 * omega)).collect();
    Ok(ComplexVector::from_parts_unchecked(data, Domain::Antenna))
}

pub fn synthesize_channel(model: &ChannelModel) -> ComplexVector {
    let mut h = vec![Complex64::new(0.0, 0.0); model.b];
    for p in &model.paths {
        for (m, z) in h.iter_mut().enumerate() {
            *z += p.alpha * Complex64::from_polar(1.0, m as f64 * p.omega);
        }
    }
    ComplexVector::from_parts_unchecked(h, Domain::Antenna)
}

fn angle_to_omega(theta: f64) -> f64 {
    (PI * theta.sin()).rem_euclid(TAU)
}

fn sample_angle<R: Rng + ?Sized>(rng: &mut R, half_width_deg: f64) -> f64 {
    let w = half_width_deg.to_radians();
    rng.random_range(-w..=w)
}

fn sample_paths<R: Rng + ?Sized>(profile: &Profile, rng: &mut R) -> Result<Vec<PathComponent>> {
    match profile {
        Profile::Los(p) => {
            if p.min_paths == 0 || p.max_paths < p.min_paths {
                return Err(Error::InvalidArgument("invalid LoS path-count range".into()));
            }
            let count = rng.random_range(p.min_paths..=p.max_paths);
            let mut paths = Vec::with_capacity(count);
            let phase = rng.random_range(0.0..TAU);
            paths.push(PathComponent {
                alpha: Complex64::from_polar(1.0, phase),
                omega: angle_to_omega(sample_angle(rng, p.sector_half_width_deg)),
            });
            for _ in 1..count {
                let drop_db = p.dominance_db + p.secondary_spread_db * rng.random::<f64>();
                let phase = rng.random_range(0.0..TAU);
                paths.push(PathComponent {
                    alpha: Complex64::from_polar(10f64.powf(-drop_db / 20.0), phase),
                    omega: angle_to_omega(sample_angle(rng, p.sector_half_width_deg)),
                });
            }
            Ok(paths)
        }
        Profile::Nlos(p) => {
            if p.min_paths == 0 || p.max_paths < p.min_paths || !(p.decay_paths > 0.0) {
                return Err(Error::InvalidArgument("invalid non-LoS profile parameters".into()));
            }
            let count = rng.random_range(p.min_paths..=p.max_paths);
            Ok((0..count)
                .map(|l| {
                    let power = (-(l as f64) / p.decay_paths).exp();
                    PathComponent {
                        alpha: complex_normal(rng, power),
                        omega: angle_to_omega(sample_angle(rng, p.sector_half_width_deg)),
                    }
                })
                .collect())
        }
        Profile::Custom => Err(Error::InvalidArgument("custom profile has no sampler; supply explicit paths".into())),
    }
}

/// Draw a random channel from `profile`, normalized to `|h|^2 = b`.
pub fn sample_profile(profile: &Profile, b: usize, seed: u64) -> Result<ChannelModel> {
    if b == 0 {
        return Err(Error::InvalidArgument("antenna count must be at least 1".into()));
    }
    let mut rng = rng::rng_from_seed(seed);
    loop {
        let paths = sample_paths(profile, &mut rng)?;
        let mut model = ChannelModel::new(b, paths, *profile)?;
        let energy = synthesize_channel(&model).norm_sqr();
        // Exact cancellation has probability zero; redraw if it happens.
        if energy > 0.0 && energy.is_finite() {
            model.scale_gains((b as f64 / energy).sqrt());
            return Ok(model);
        }
    }
}

/// Minimum angular separation between the dominant paths of different users.
pub const MIN_USER_SEPARATION_DEG: f64 = 1.0;

/// Draw `u` user channels whose dominant directions are at least
/// [`MIN_USER_SEPARATION_DEG`] apart (rejection sampling).
pub fn sample_users(profile: &Profile, b: usize, u: usize, seed: u64) -> Result<Vec<ChannelModel>> {
    const MAX_ATTEMPTS: u64 = 10_000;
    let min_sep = MIN_USER_SEPARATION_DEG.to_radians();
    let mut users: Vec<ChannelModel> = Vec::with_capacity(u);
    for user in 0..u {
        let user_seed = derive_seed(seed, tags::USER, user as u64);
        let mut accepted = None;
        for attempt in 0..MAX_ATTEMPTS {
            let model = sample_profile(profile, b, derive_seed(user_seed, tags::CHANNEL, attempt))?;
            let theta = model.dominant_angle();
            if users.iter().all(|other| (other.dominant_angle() - theta).abs() >= min_sep) {
                accepted = Some(model);
                break;
            }
        }
        match accepted {
            Some(m) => users.push(m),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "could not place user {user} with {MIN_USER_SEPARATION_DEG} degree separation"
                )))
            }
        }
    }
    Ok(users)
}

pub fn add_noise(h: &ComplexVector, e0: f64, seed: u64) -> Result<NoisyObservation> {
    let mut rng = rng::rng_from_seed(seed);
    add_noise_with(h, e0, &mut rng)
}

pub fn add_noise_with<R: Rng + ?Sized>(h: &ComplexVector, e0: f64, rng: &mut R) -> Result<NoisyObservation> {
    if !(e0.is_finite() && e0 > 0.0) {
        return Err(Error::InvalidNoiseVariance(e0));
    }
    let noise = complex_normal_vec(rng, h.len(), e0);
    let y: Vec<Complex64> = h.as_slice().iter().zip(&noise).map(|(a, e)| a + e).collect();
    Ok(NoisyObservation { y: ComplexVector::from_parts_unchecked(y, h.domain()), h_true: h.clone(), e0 })
}

pub fn mse_slices(est: &[Complex64], truth: &[Complex64]) -> Result<f64> {
    if est.len() != truth.len() {
        return Err(Error::LengthMismatch { expected: truth.len(), actual: est.len() });
    }
    if truth.is_empty() {
        return Err(Error::Empty);
    }
    Ok(est.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / truth.len() as f64)
}

/// `(1/B) |h_est - h_true|^2`.
pub fn mse(h_est: &ComplexVector, h_true: &ComplexVector) -> Result<f64> {
    mse_slices(h_est.as_slice(), h_true.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dft, SpectralPlan};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn steering_examples() {
        let a = steering_vector(0.0, 3).unwrap();
        assert_eq!(a.as_slice(), &[c(1.0, 0.0); 3]);
        let a = steering_vector(PI, 4).unwrap();
        for (z, s) in a.as_slice().iter().zip([1.0, -1.0, 1.0, -1.0]) {
            assert!((z - c(s, 0.0)).norm() < 1e-15);
        }
        assert!(steering_vector(0.3, 0).is_err());
    }

    #[test]
    fn on_grid_steering_vector_is_one_bin() {
        let b = 32;
        for k in [0usize, 5, 31] {
            let a = steering_vector(TAU * k as f64 / b as f64, b).unwrap();
            let f = dft(&a).unwrap();
            for (bin, z) in f.as_slice().iter().enumerate() {
                let want = if bin == k { (b as f64).sqrt() } else { 0.0 };
                assert!((z.norm() - want).abs() < 1e-12, "k={k} bin={bin}");
            }
        }
    }

    #[test]
    fn synthesize_examples() {
        let m = ChannelModel::custom(5, vec![PathComponent::new(c(1.0, 0.0), 0.0).unwrap()]).unwrap();
        assert_eq!(synthesize_channel(&m).as_slice(), &[c(1.0, 0.0); 5]);

        let p = vec![PathComponent::new(c(1.0, 0.0), 1.3).unwrap(), PathComponent::new(c(-1.0, 0.0), 1.3).unwrap()];
        let h = synthesize_channel(&ChannelModel::custom(6, p).unwrap());
        assert!(h.as_slice().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn synthesize_three_paths_matches_loop() {
        let paths = vec![
            PathComponent::new(c(0.3, -1.1), 0.4).unwrap(),
            PathComponent::new(c(-0.7, 0.2), 5.9).unwrap(),
            PathComponent::new(c(0.05, 0.9), 3.0).unwrap(),
        ];
        let b = 17;
        let h = synthesize_channel(&ChannelModel::custom(b, paths.clone()).unwrap());
        for m in 0..b {
            let mut want = c(0.0, 0.0);
            for p in &paths {
                want += p.alpha * Complex64::from_polar(1.0, m as f64 * p.omega);
            }
            assert_eq!(h[m], want);
        }
    }

    #[test]
    fn linear_in_gains() {
        let model = sample_profile(&Profile::nlos(), 64, 3).unwrap();
        let doubled: Vec<PathComponent> = model.paths().iter().map(|p| PathComponent { alpha: p.alpha * 2.0, ..*p }).collect();
        let h1 = synthesize_channel(&model);
        let h2 = synthesize_channel(&ChannelModel::new(64, doubled, *model.profile()).unwrap());
        for (a, b) in h1.as_slice().iter().zip(h2.as_slice()) {
            assert_eq!(*a * 2.0, *b);
        }
    }

    #[test]
    fn model_validation() {
        assert!(PathComponent::new(c(1.0, 0.0), TAU).is_err());
        assert!(PathComponent::new(c(1.0, 0.0), -0.1).is_err());
        assert!(PathComponent::new(c(f64::NAN, 0.0), 0.1).is_err());
        assert!(ChannelModel::custom(0, vec![PathComponent::new(c(1.0, 0.0), 0.0).unwrap()]).is_err());
        assert!(ChannelModel::custom(4, vec![]).is_err());
        let weak_first = vec![PathComponent::new(c(0.1, 0.0), 0.0).unwrap(), PathComponent::new(c(1.0, 0.0), 1.0).unwrap()];
        assert!(ChannelModel::new(4, weak_first, Profile::los()).is_err());
        assert!("mystery".parse::<Profile>().is_err());
        assert!(sample_profile(&Profile::Custom, 8, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_normalized() {
        for profile in [Profile::los(), Profile::nlos()] {
            let a = sample_profile(&profile, 128, 42).unwrap();
            let b = sample_profile(&profile, 128, 42).unwrap();
            assert_eq!(a, b);
            let energy = synthesize_channel(&a).norm_sqr();
            assert!((energy - 128.0).abs() < 1e-9);
            for p in a.paths() {
                assert!(p.angle().abs() <= 60f64.to_radians() + 1e-12);
            }
        }
        let los = sample_profile(&Profile::los(), 64, 9).unwrap();
        assert!((1..=4).contains(&los.paths().len()));
        let nlos = sample_profile(&Profile::nlos(), 64, 9).unwrap();
        assert!((8..=24).contains(&nlos.paths().len()));
    }

    #[test]
    fn users_are_separated() {
        let users = sample_users(&Profile::los(), 64, 16, 5).unwrap();
        for i in 0..users.len() {
            for j in 0..i {
                let d = (users[i].dominant_angle() - users[j].dominant_angle()).abs();
                assert!(d >= 1f64.to_radians());
            }
        }
    }

    fn top_bins_fraction(h: &ComplexVector, plan: &SpectralPlan, n: usize) -> f64 {
        let f = plan.dft(h).unwrap();
        let mut p: Vec<f64> = f.as_slice().iter().map(|z| z.norm_sqr()).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p[..n].iter().sum::<f64>() / p.iter().sum::<f64>()
    }

    #[test]
    fn los_is_sparse_in_beamspace() {
        let b = 256;
        let plan = SpectralPlan::new(b).unwrap();
        let mut pass = 0;
        let mut top16 = Vec::new();
        for seed in 0..500u64 {
            let h = synthesize_channel(&sample_profile(&Profile::los(), b, seed).unwrap());
            if top_bins_fraction(&h, &plan, 4) >= 0.5 {
                pass += 1;
            }
            top16.push(top_bins_fraction(&h, &plan, 16));
        }
        assert!(pass as f64 / 500.0 >= 0.95, "pass rate {pass}/500");
        top16.sort_by(f64::total_cmp);
        assert!(top16[250] >= 0.8, "median top-16 fraction {}", top16[250]);
    }

    #[test]
    fn nlos_is_diffuse_in_beamspace() {
        let b = 256;
        let plan = SpectralPlan::new(b).unwrap();
        let diffuse = (0..500u64)
            .filter(|&seed| {
                let h = synthesize_channel(&sample_profile(&Profile::nlos(), b, seed).unwrap());
                top_bins_fraction(&h, &plan, 1) < 0.5
            })
            .count();
        assert!(diffuse as f64 / 500.0 >= 0.9, "diffuse {diffuse}/500");
    }

    #[test]
    fn noise_statistics_and_determinism() {
        let b = 1000;
        let h = ComplexVector::antenna(vec![c(0.5, -0.25); b]).unwrap();
        let e0 = 0.3;
        let mut total = 0.0;
        let draws = 100;
        for seed in 0..draws {
            let obs = add_noise(&h, e0, seed).unwrap();
            total += mse(&obs.y, &obs.h_true).unwrap();
        }
        let var = total / draws as f64;
        assert!((var - e0).abs() < 0.02 * e0, "variance {var}");
        assert_eq!(add_noise(&h, e0, 77).unwrap(), add_noise(&h, e0, 77).unwrap());
        assert!(add_noise(&h, 0.0, 1).is_err());
        let tiny = add_noise(&h, 1e-20, 1).unwrap();
        for (y, t) in tiny.y.as_slice().iter().zip(h.as_slice()) {
            assert!((y - t).norm() <= 1e-9 * t.norm());
        }
    }

    #[test]
    fn mse_examples() {
        let a = ComplexVector::antenna(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        let z = ComplexVector::antenna(vec![c(0.0, 0.0); 2]).unwrap();
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert!((mse(&a, &z).unwrap() - a.norm_sqr() / 2.0).abs() < 1e-15);
        let short = ComplexVector::antenna(vec![c(0.0, 0.0)]).unwrap();
        assert!(matches!(mse(&a, &short), Err(Error::LengthMismatch { .. })));
        let fb = ComplexVector::antenna(vec![c(0.3, 0.1), c(2.0, -1.0)]).unwrap();
        let d = (mse(&dft(&a).unwrap(), &dft(&fb).unwrap()).unwrap() - mse(&a, &fb).unwrap()).abs();
        assert!(d < 1e-10);
    }
}
