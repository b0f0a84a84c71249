//! The analytic signature of a point set: the value of the entire function
//! (1/n) sum_m e^{w_m xi} sampled at the K-th roots of unity, after the shape
//! has been centered and scale-fixed. Optional variants: a log-modulus
//! weighting of the landmarks, and a paired signature of the inner landmarks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{AnsigError, Result};
use crate::shape::{normalize, NormalizedShape, PointSet};

pub const DEFAULT_K: usize = 512;
pub const MIN_K: usize = 8;

/// Parameters controlling how a signature is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignConfig {
    /// Number of unit-circle samples; power of two, at least 8.
    pub k: usize,
    /// Replace each landmark modulus rho by ln(1 + rho) before signing.
    pub weighted: bool,
    /// Also sign the subset of inner landmarks and keep both.
    pub two_ansig: bool,
    /// Modulus cutoff on the normalized shape selecting the inner subset.
    pub inner_threshold: f64,
}

impl Default for SignConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            weighted: false,
            two_ansig: false,
            inner_threshold: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSignature {
    pub samples: Vec<Complex64>,
    pub n_points: usize,
}

/// A sampled signature plus the metadata needed to compare it with others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    pub samples: Vec<Complex64>,
    pub weighted: bool,
    pub n_points: usize,
    pub inner: Option<InnerSignature>,
    /// Set when a two-ANSIG signature was requested but the inner subset had
    /// fewer than 2 points, so only the outer signature is present.
    pub inner_degraded: bool,
}

impl Signature {
    pub fn k(&self) -> usize {
        self.samples.len()
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < MIN_K || !k.is_power_of_two() {
        return Err(AnsigError::BadK(k));
    }
    Ok(())
}

/// Evaluates (1/n) sum_m e^{w_m xi} at xi = W_K^i for i = 0..K.
pub fn ansig_raw(points: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    check_k(k)?;
    if points.is_empty() {
        return Err(AnsigError::EmptyPointSet);
    }
    let grid: Vec<Complex64> = (0..k)
        .map(|i| Complex64::from_polar(1.0, TAU * i as f64 / k as f64))
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); k];
    for &w in points {
        for (slot, &xi) in out.iter_mut().zip(&grid) {
            *slot += (w * xi).exp();
        }
    }
    let inv_n = 1.0 / points.len() as f64;
    for slot in out.iter_mut() {
        *slot *= inv_n;
    }
    Ok(out)
}

/// Maps each entry rho e^{i theta} to ln(1 + rho) e^{i theta}; zero maps to zero.
pub fn weight_map(points: &[Complex64]) -> Vec<Complex64> {
    points
        .iter()
        .map(|&w| {
            let rho = w.norm();
            if rho == 0.0 {
                w
            } else {
                w * (rho.ln_1p() / rho)
            }
        })
        .collect()
}

/// The subsequence of landmarks with modulus below the threshold, in order.
pub fn inner_subset(w: &NormalizedShape, threshold: f64) -> Vec<Complex64> {
    w.points()
        .iter()
        .copied()
        .filter(|p| p.norm() < threshold)
        .collect()
}

/// Full signing pipeline: normalize, optionally weight, sample on the grid;
/// with `two_ansig` the inner landmarks get their own signature, aligned
/// jointly at match time.
pub fn sign(z: &PointSet, cfg: &SignConfig) -> Result<Signature> {
    check_k(cfg.k)?;
    let w = normalize(z)?;
    let outer_pts = if cfg.weighted {
        weight_map(w.points())
    } else {
        w.points().to_vec()
    };
    let samples = ansig_raw(&outer_pts, cfg.k)?;

    let mut inner = None;
    let mut degraded = false;
    if cfg.two_ansig {
        let inner_pts = inner_subset(&w, cfg.inner_threshold);
        if inner_pts.len() >= 2 {
            let inner_pts = if cfg.weighted {
                weight_map(&inner_pts)
            } else {
                inner_pts
            };
            inner = Some(InnerSignature {
                samples: ansig_raw(&inner_pts, cfg.k)?,
                n_points: inner_pts.len(),
            });
        } else {
            degraded = true;
        }
    }

    Ok(Signature {
        samples,
        weighted: cfg.weighted,
        n_points: z.len(),
        inner,
        inner_degraded: degraded,
    })
}
