//! Rotation alignment and similarity scoring of signatures.
//!
//! A rotation of the shape by 2 pi k / K turns into a left cyclic shift by k
//! of the signature samples, so the best rotation is found as the shift
//! maximizing the correlation between the two sample vectors. That argmax is
//! computed with three FFTs and one elementwise product instead of scanning
//! all K shifts.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{AnsigError, Result};
use crate::sigdb::SigDb;
use crate::signature::Signature;
use crate::spectral::{cyclic_shift, dft};

/// Outcome of aligning one signature against another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    /// Optimal cyclic shift, in [0, K).
    pub k_star: usize,
    /// Recovered rotation angle 2 pi k_star / K, counterclockwise positive.
    pub theta_star: f64,
    /// Similarity in [0, 1].
    pub psi: f64,
}

/// Labels ranked by similarity, best first. Ties keep database order.
#[derive(Debug, Clone)]
pub struct RankedMatches {
    pub entries: Vec<(String, MatchResult)>,
}

impl RankedMatches {
    pub fn best(&self) -> Option<&(String, MatchResult)> {
        self.entries.first()
    }
}

fn check_same_k(a: &Signature, b: &Signature) -> Result<()> {
    if a.k() != b.k() {
        return Err(AnsigError::KMismatch { a: a.k(), b: b.k() });
    }
    Ok(())
}

/// Index of the largest entry; smallest index wins ties.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn correlation_profile(
    a: &[Complex64],
    b: &[Complex64],
    a_in: Option<&[Complex64]>,
    b_in: Option<&[Complex64]>,
) -> Result<Vec<f64>> {
    let ah = dft(a)?;
    let bh = dft(b)?;
    let mut product: Vec<Complex64> = ah
        .coeffs()
        .iter()
        .zip(bh.coeffs())
        .map(|(x, y)| x * y.conj())
        .collect();
    if let (Some(ai), Some(bi)) = (a_in, b_in) {
        let aih = dft(ai)?;
        let bih = dft(bi)?;
        for ((p, x), y) in product.iter_mut().zip(aih.coeffs()).zip(bih.coeffs()) {
            *p += x * y.conj();
        }
    }
    let profile = dft(&product)?;
    Ok(profile.coeffs().iter().map(|c| c.re).collect())
}

/// FFT alignment: the shift k maximizing Re of the correlation between the
/// sample vectors, equivalently minimizing ||a - (b shifted by k)||^2.
pub fn align(a: &Signature, b: &Signature) -> Result<usize> {
    check_same_k(a, b)?;
    let profile = correlation_profile(&a.samples, &b.samples, None, None)?;
    Ok(argmax(&profile))
}

/// The squared misalignment ||a - (b shifted by k)||^2 that [`align`] minimizes.
pub fn shift_objective(a: &[Complex64], b: &[Complex64], k: usize) -> f64 {
    let shifted = cyclic_shift(b, k as i64);
    a.iter()
        .zip(&shifted)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum()
}

/// Literal O(K^2) scan of the alignment objective; smallest k among ties.
/// Kept as the independent check for [`align`].
pub fn brute_force_align(a: &Signature, b: &Signature) -> Result<usize> {
    check_same_k(a, b)?;
    let k = a.k();
    let mut best = 0usize;
    let mut best_val = shift_objective(&a.samples, &b.samples, 0);
    for shift in 1..k {
        let val = shift_objective(&a.samples, &b.samples, shift);
        if val < best_val {
            best = shift;
            best_val = val;
        }
    }
    Ok(best)
}

fn cosine_similarity(a: &[Complex64], b_shifted: &[Complex64]) -> f64 {
    let inner: Complex64 = a
        .iter()
        .zip(b_shifted)
        .map(|(x, y)| x.conj() * y)
        .sum();
    let norm_a: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let norm_b: f64 = b_shifted.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return 0.0;
    }
    (inner.norm() / (norm_a * norm_b)).min(1.0)
}

/// Cosine of the angle between a and the k-shifted b, via the Hermitian inner
/// product; in [0, 1].
pub fn similarity(a: &Signature, b: &Signature, k_star: usize) -> Result<f64> {
    check_same_k(a, b)?;
    let shifted = cyclic_shift(&b.samples, k_star as i64);
    Ok(cosine_similarity(&a.samples, &shifted))
}

/// Joint alignment over outer and inner signatures: a single shift maximizing
/// the summed correlation. Falls back to [`align`] when either side lacks an
/// inner part.
pub fn align_joint(a: &Signature, b: &Signature) -> Result<usize> {
    check_same_k(a, b)?;
    match (&a.inner, &b.inner) {
        (Some(ai), Some(bi)) => {
            let profile = correlation_profile(
                &a.samples,
                &b.samples,
                Some(&ai.samples),
                Some(&bi.samples),
            )?;
            Ok(argmax(&profile))
        }
        _ => align(a, b),
    }
}

/// Point-count-weighted average of the outer and inner similarities at the
/// given shift; equals [`similarity`] when either inner part is absent.
pub fn similarity_joint(a: &Signature, b: &Signature, k_star: usize) -> Result<f64> {
    check_same_k(a, b)?;
    let psi_out = similarity(a, b, k_star)?;
    match (&a.inner, &b.inner) {
        (Some(ai), Some(bi)) => {
            let shifted = cyclic_shift(&bi.samples, k_star as i64);
            let psi_in = cosine_similarity(&ai.samples, &shifted);
            let w_out = (a.n_points + b.n_points) as f64 / 2.0;
            let w_in = (ai.n_points + bi.n_points) as f64 / 2.0;
            Ok((w_out * psi_out + w_in * psi_in) / (w_out + w_in))
        }
        _ => Ok(psi_out),
    }
}

/// Aligns and scores in one step, using the joint variants when both sides
/// carry inner signatures.
pub fn match_signatures(a: &Signature, b: &Signature) -> Result<MatchResult> {
    let joint = a.inner.is_some() && b.inner.is_some();
    let k_star = if joint { align_joint(a, b)? } else { align(a, b)? };
    let psi = if joint {
        similarity_joint(a, b, k_star)?
    } else {
        similarity(a, b, k_star)?
    };
    Ok(MatchResult {
        k_star,
        theta_star: TAU * k_star as f64 / a.k() as f64,
        psi,
    })
}

/// Scores the query against every database entry and ranks by similarity.
pub fn classify(db: &SigDb, query: &Signature) -> Result<RankedMatches> {
    if db.entries().is_empty() {
        return Err(AnsigError::EmptyDatabase);
    }
    let mut entries = Vec::with_capacity(db.entries().len());
    for entry in db.entries() {
        let result = match_signatures(query, &entry.signature)?;
        entries.push((entry.label.clone(), result));
    }
    // stable sort keeps insertion order on equal psi
    entries.sort_by(|a, b| b.1.psi.partial_cmp(&a.1.psi).unwrap());
    Ok(RankedMatches { entries })
}
