//! Point sets in the complex plane and the group of shape-preserving
//! transformations (relabeling, translation, rotation, scale) acting on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AnsigError, Result};

/// An ordered list of complex landmarks. The order carries no meaning for the
/// shape itself; it is just the order the points happened to be stored in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Complex64>,
}

impl PointSet {
    /// Requires at least one point and finite coordinates.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(AnsigError::EmptyPointSet);
        }
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(AnsigError::Parse {
                path: String::from("<points>"),
                line: 0,
                msg: String::from("non-finite coordinate"),
            });
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Complex64> {
        self.points
    }
}

/// A centered, scale-fixed shape vector: mean zero and squared norm n, so the
/// RMS modulus is 1. Produced by [`normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedShape {
    points: Vec<Complex64>,
}

impl NormalizedShape {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

/// One element of the transformation group: a relabeling plus a similarity
/// transform z -> lambda * e^{i theta} * z + t.
#[derive(Debug, Clone)]
pub struct RigidTransform {
    /// Maps output index i to input index `permutation[i]`. Empty means identity.
    pub permutation: Vec<usize>,
    pub translation: Complex64,
    pub rotation: f64,
    pub scale: f64,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            permutation: Vec::new(),
            translation: Complex64::new(0.0, 0.0),
            rotation: 0.0,
            scale: 1.0,
        }
    }

    /// Composition: applying `self` after `other` equals applying the result.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = if self.permutation.is_empty() {
            other.permutation.clone()
        } else if other.permutation.is_empty() {
            self.permutation.clone()
        } else {
            self.permutation
                .iter()
                .map(|&i| other.permutation[i])
                .collect()
        };
        let phase = Complex64::from_polar(self.scale, self.rotation);
        Self {
            permutation: perm,
            translation: phase * other.translation + self.translation,
            rotation: (self.rotation + other.rotation).rem_euclid(std::f64::consts::TAU),
            scale: self.scale * other.scale,
        }
    }
}

/// True iff the landmarks do not all collapse to a single point.
pub fn validate_nondegenerate(z: &PointSet) -> bool {
    let pts = z.points();
    if pts.len() < 2 {
        return false;
    }
    let first = pts[0];
    let max_mod = pts.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    let spread = pts
        .iter()
        .map(|p| (p - first).norm())
        .fold(0.0f64, f64::max);
    spread > 1e-12 * (1.0 + max_mod)
}

/// Centers the shape and fixes its scale: w = sqrt(n) * (z - mean) / ||z - mean||,
/// with the Hermitian 2-norm. Point order is preserved.
pub fn normalize(z: &PointSet) -> Result<NormalizedShape> {
    if !validate_nondegenerate(z) {
        return Err(AnsigError::DegenerateShape);
    }
    let pts = z.points();
    let n = pts.len() as f64;
    let mean = pts.iter().sum::<Complex64>() / n;
    let norm = pts
        .iter()
        .map(|p| (p - mean).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let factor = n.sqrt() / norm;
    Ok(NormalizedShape {
        points: pts.iter().map(|p| (p - mean) * factor).collect(),
    })
}

/// Applies a group element: output[i] = lambda * e^{i theta} * z[perm(i)] + t.
pub fn apply_transform(z: &PointSet, g: &RigidTransform) -> Result<PointSet> {
    let pts = z.points();
    if !g.permutation.is_empty() && g.permutation.len() != pts.len() {
        return Err(AnsigError::SizeMismatch {
            expected: pts.len(),
            got: g.permutation.len(),
        });
    }
    let phase = Complex64::from_polar(g.scale, g.rotation);
    let mapped: Vec<Complex64> = if g.permutation.is_empty() {
        pts.iter().map(|p| phase * p + g.translation).collect()
    } else {
        g.permutation
            .iter()
            .map(|&i| phase * pts[i] + g.translation)
            .collect()
    };
    PointSet::new(mapped)
}

/// Power sums mu_k = sum_m z_m^k for k = 1..=kmax.
pub fn power_sums(z: &PointSet, kmax: usize) -> Vec<Complex64> {
    let pts = z.points();
    let mut out = vec![Complex64::new(0.0, 0.0); kmax];
    for &p in pts {
        let mut pow = Complex64::new(1.0, 0.0);
        for slot in out.iter_mut() {
            pow *= p;
            *slot += pow;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degenerate_all_equal() {
        let z = PointSet::new(vec![c(1.0, 1.0); 3]).unwrap();
        assert!(!validate_nondegenerate(&z));
    }

    #[test]
    fn degenerate_single_point() {
        let z = PointSet::new(vec![c(2.0, -1.0)]).unwrap();
        assert!(!validate_nondegenerate(&z));
    }

    #[test]
    fn nondegenerate_two_points() {
        let z = PointSet::new(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(validate_nondegenerate(&z));
    }

    #[test]
    fn normalize_two_points() {
        let z = PointSet::new(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let w = normalize(&z).unwrap();
        assert!((w.points()[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((w.points()[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalize_four_points_imaginary() {
        // [0, 2i, 0, -2i]: mean 0, norm sqrt(8), factor 2/sqrt(8) = 1/sqrt(2)
        let z = PointSet::new(vec![c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(0.0, -2.0)]).unwrap();
        let w = normalize(&z).unwrap();
        let s = std::f64::consts::SQRT_2;
        assert!((w.points()[1] - c(0.0, s)).norm() < 1e-15);
        assert!((w.points()[3] - c(0.0, -s)).norm() < 1e-15);
    }

    #[test]
    fn normalize_rejects_degenerate() {
        let z = PointSet::new(vec![c(5.0, 5.0); 4]).unwrap();
        assert!(matches!(normalize(&z), Err(AnsigError::DegenerateShape)));
    }

    #[test]
    fn normalize_similarity_equivariance() {
        // normalize(lambda e^{i theta} z + t) == e^{i theta} normalize(z)
        let z = PointSet::new(vec![c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.9), c(1.1, 1.4)]).unwrap();
        let g = RigidTransform {
            permutation: Vec::new(),
            translation: c(5.0, -2.0),
            rotation: 1.2,
            scale: 3.7,
        };
        let zt = apply_transform(&z, &g).unwrap();
        let wa = normalize(&zt).unwrap();
        let wb = normalize(&z).unwrap();
        let phase = Complex64::from_polar(1.0, 1.2);
        for (a, b) in wa.points().iter().zip(wb.points()) {
            assert!((a - phase * b).norm() < 1e-9);
        }
    }

    #[test]
    fn apply_identity() {
        let z = PointSet::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let out = apply_transform(&z, &RigidTransform::identity()).unwrap();
        assert_eq!(out, z);
    }

    #[test]
    fn apply_quarter_turn() {
        let z = PointSet::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let g = RigidTransform {
            rotation: std::f64::consts::FRAC_PI_2,
            ..RigidTransform::identity()
        };
        let out = apply_transform(&z, &g).unwrap();
        assert!((out.points()[0] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((out.points()[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_rejects_bad_permutation() {
        let z = PointSet::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let g = RigidTransform {
            permutation: vec![0, 1, 2],
            ..RigidTransform::identity()
        };
        assert!(apply_transform(&z, &g).is_err());
    }

    #[test]
    fn composition_law() {
        let z = PointSet::new(vec![c(0.4, 0.1), c(-1.3, 2.2), c(0.9, -0.8)]).unwrap();
        let g1 = RigidTransform {
            permutation: vec![2, 0, 1],
            translation: c(1.0, -0.5),
            rotation: 0.7,
            scale: 1.8,
        };
        let g2 = RigidTransform {
            permutation: vec![1, 2, 0],
            translation: c(-0.2, 0.3),
            rotation: 2.4,
            scale: 0.6,
        };
        let lhs = apply_transform(&apply_transform(&z, &g2).unwrap(), &g1).unwrap();
        let rhs = apply_transform(&z, &g1.compose(&g2)).unwrap();
        for (a, b) in lhs.points().iter().zip(rhs.points()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn power_sums_roots_of_unity() {
        let z =
            PointSet::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]).unwrap();
        let mu = power_sums(&z, 4);
        for k in 0..3 {
            assert!(mu[k].norm() < 1e-14);
        }
        assert!((mu[3] - c(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn power_sums_zeros() {
        let z = PointSet::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mu = power_sums(&z, 3);
        assert!(mu.iter().all(|m| m.norm() == 0.0));
    }

    #[test]
    fn power_sums_matches_direct_summation() {
        let pts = vec![c(0.3, 0.4), c(-1.1, 0.2), c(0.8, -0.9), c(0.1, 1.3)];
        let z = PointSet::new(pts.clone()).unwrap();
        let mu = power_sums(&z, 2);
        // independent loop-based oracle
        let mut expect = c(0.0, 0.0);
        for p in &pts {
            expect += p * p;
        }
        assert!((mu[1] - expect).norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn power_sums_permutation_invariant(
            raw in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..40),
            rot in 0usize..40,
        ) {
            let pts: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            let mut rotated = pts.clone();
            rotated.rotate_left(rot % pts.len());
            let a = power_sums(&PointSet::new(pts).unwrap(), 6);
            let b = power_sums(&PointSet::new(rotated).unwrap(), 6);
            for (x, y) in a.iter().zip(&b) {
                let scale = 1.0 + x.norm().max(y.norm());
                prop_assert!((x - y).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn normalize_invariants_hold(
            raw in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..60),
        ) {
            let pts: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            let z = PointSet::new(pts).unwrap();
            prop_assume!(validate_nondegenerate(&z));
            let w = normalize(&z).unwrap();
            let n = w.len() as f64;
            let mean: Complex64 = w.points().iter().sum::<Complex64>() / n;
            let norm_sq: f64 = w.points().iter().map(|p| p.norm_sqr()).sum();
            prop_assert!(mean.norm() <= 1e-12);
            prop_assert!((norm_sq - n).abs() <= 1e-9 * n);
        }
    }
}
