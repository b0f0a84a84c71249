//! Unitary DFT and the cyclic-shift operator.
//!
//! The convention is coeffs[m] = (1/sqrt(K)) * sum_i v[i] * W_K^{-i m} with
//! W_K = e^{i 2 pi / K}, so the transform is unitary and Parseval holds
//! without extra factors. The underlying FFT is rustfft, wrapped to apply the
//! 1/sqrt(K) scaling on both directions.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{AnsigError, Result};

/// DFT coefficients of a length-K vector under the unitary convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(AnsigError::BadK(len));
    }
    Ok(())
}

/// Forward unitary DFT, O(K log K).
pub fn dft(v: &[Complex64]) -> Result<Spectrum> {
    check_len(v.len())?;
    let mut buf = v.to_vec();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    let scale = 1.0 / (v.len() as f64).sqrt();
    for c in buf.iter_mut() {
        *c *= scale;
    }
    Ok(Spectrum { coeffs: buf })
}

/// Inverse unitary DFT; exact inverse of [`dft`].
pub fn idft(s: &Spectrum) -> Result<Vec<Complex64>> {
    check_len(s.len())?;
    let mut buf = s.coeffs.clone();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    for c in buf.iter_mut() {
        *c *= scale;
    }
    Ok(buf)
}

/// Left cyclic shift by k: result[i] = v[(i + k) mod K]. Under the convention
/// above, dft(shifted)[m] = dft(v)[m] * W_K^{k m}.
pub fn cyclic_shift(v: &[Complex64], k: i64) -> Vec<Complex64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k.rem_euclid(n as i64) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&v[k..]);
    out.extend_from_slice(&v[..k]);
    out
}
