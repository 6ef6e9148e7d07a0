//! Gray-mapped square constellations with unit average energy.
//!
//! 16-QAM uses two bits per axis, `00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3`,
//! scaled by `1/sqrt(10)`; the first bit pair drives the in-phase axis.
//! QPSK uses one bit per axis, `0 -> -1, 1 -> +1`, scaled by `1/sqrt(2)`.

use num_complex::Complex64;

use super::config::Modulation;
use crate::error::{Error, Result};

const QAM16_SCALE: f64 = 0.316_227_766_016_837_94; // 1/sqrt(10)
const QPSK_SCALE: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn qam16_level(msb: u8, lsb: u8) -> f64 {
    match (msb, lsb) {
        (0, 0) => -3.0,
        (0, _) => -1.0,
        (_, 1) => 1.0,
        _ => 3.0,
    }
}

fn qam16_bits(x: f64) -> (u8, u8) {
    let v = x / QAM16_SCALE;
    ((v > 0.0) as u8, (v.abs() < 2.0) as u8)
}

pub fn qam_map(bits: &[u8], modulation: Modulation) -> Result<Vec<Complex64>> {
    let bps = modulation.bits_per_symbol();
    if bits.len() % bps != 0 {
        return Err(Error::InvalidArgument(format!(
            "{} bits is not a multiple of {bps} bits per symbol",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(bps)
        .map(|c| match modulation {
            Modulation::Qam16 => {
                Complex64::new(qam16_level(c[0], c[1]) * QAM16_SCALE, qam16_level(c[2], c[3]) * QAM16_SCALE)
            }
            Modulation::Qpsk => Complex64::new(
                if c[0] != 0 { QPSK_SCALE } else { -QPSK_SCALE },
                if c[1] != 0 { QPSK_SCALE } else { -QPSK_SCALE },
            ),
        })
        .collect())
}

/// Minimum-distance hard decisions, appended to `out`.
pub fn qam_demap_into(symbols: &[Complex64], modulation: Modulation, out: &mut Vec<u8>) {
    for s in symbols {
        match modulation {
            Modulation::Qam16 => {
                let (i0, i1) = qam16_bits(s.re);
                let (q0, q1) = qam16_bits(s.im);
                out.extend_from_slice(&[i0, i1, q0, q1]);
            }
            Modulation::Qpsk => out.extend_from_slice(&[(s.re > 0.0) as u8, (s.im > 0.0) as u8]),
        }
    }
}

pub fn qam_demap(symbols: &[Complex64], modulation: Modulation) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * modulation.bits_per_symbol());
    qam_demap_into(symbols, modulation, &mut out);
    out
}

/// Hard-decide `symbols` and count mismatches against `bits`.
pub fn count_bit_errors(symbols: &[Complex64], bits: &[u8], modulation: Modulation) -> usize {
    let mut decided = Vec::with_capacity(bits.len());
    qam_demap_into(symbols, modulation, &mut decided);
    decided.iter().zip(bits).filter(|(a, b)| a != b).count()
}
