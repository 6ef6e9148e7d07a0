//! Unitary DFT between the antenna domain and the beamspace domain.
//!
//! Forward transform: `X[m] = B^{-1/2} * sum_n x[n] exp(-j 2 pi m n / B)`, 0-based
//! indices. The inverse uses the conjugate kernel with the same `B^{-1/2}`
//! scale, so both directions are unitary and preserve noise statistics.
//! With this sign convention a steering vector of spatial frequency
//! `2 pi k / B` lands in bin `k`.
//!
//! Any length is supported; rustfft picks radix kernels for smooth sizes and
//! Bluestein/Rader for the rest.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Which domain a vector's samples live in. Advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Antenna,
    Beamspace,
}

/// Length-B vector of finite complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
    domain: Domain,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>, domain: Domain) -> Result<Self> {
        validate(&data)?;
        Ok(Self { data, domain })
    }

    pub fn antenna(data: Vec<Complex64>) -> Result<Self> {
        Self::new(data, Domain::Antenna)
    }

    pub fn beamspace(data: Vec<Complex64>) -> Result<Self> {
        Self::new(data, Domain::Beamspace)
    }

    pub fn zeros(len: usize, domain: Domain) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len], domain)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false for a constructed vector; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub(crate) fn from_parts_unchecked(data: Vec<Complex64>, domain: Domain) -> Self {
        debug_assert!(!data.is_empty());
        Self { data, domain }
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, idx: usize) -> &Complex64 {
        &self.data[idx]
    }
}

/// Rejects empty input and any NaN/Inf component.
pub fn validate(data: &[Complex64]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Empty);
    }
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// A planned unitary transform pair for one length. Immutable after
/// construction, so one plan can be shared across threads.
#[derive(Clone)]
pub struct SpectralPlan {
    len: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan").field("len", &self.len).finish()
    }
}

impl SpectralPlan {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Empty);
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            scale: 1.0 / (len as f64).sqrt(),
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unitary forward transform of a raw buffer.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) -> Result<()> {
        self.run(&self.forward, buf)
    }

    /// In-place unitary inverse transform of a raw buffer.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) -> Result<()> {
        self.run(&self.inverse, buf)
    }

    pub fn dft(&self, x: &ComplexVector) -> Result<ComplexVector> {
        let mut buf = x.as_slice().to_vec();
        self.forward_in_place(&mut buf)?;
        Ok(ComplexVector::from_parts_unchecked(buf, Domain::Beamspace))
    }

    pub fn idft(&self, x: &ComplexVector) -> Result<ComplexVector> {
        let mut buf = x.as_slice().to_vec();
        self.inverse_in_place(&mut buf)?;
        Ok(ComplexVector::from_parts_unchecked(buf, Domain::Antenna))
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) -> Result<()> {
        if buf.len() != self.len {
            return Err(Error::LengthMismatch { expected: self.len, actual: buf.len() });
        }
        fft.process(buf);
        for z in buf.iter_mut() {
            *z *= self.scale;
        }
        Ok(())
    }
}

/// Unitary forward DFT; output tagged beamspace.
pub fn dft(x: &ComplexVector) -> Result<ComplexVector> {
    SpectralPlan::new(x.len())?.dft(x)
}

/// Unitary inverse DFT; output tagged antenna.
pub fn idft(x: &ComplexVector) -> Result<ComplexVector> {
    SpectralPlan::new(x.len())?.idft(x)
}
