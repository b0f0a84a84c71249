//! Permutation-invariant analytic signatures for 2D shapes given as bags of
//! unlabeled points.
//!
//! A shape is a multiset of complex landmarks. Its signature is the entire
//! function xi -> (1/n) sum_m e^{w_m xi}, stored by its values at K roots of
//! unity after centering and scale normalization. Reordering, translating, or
//! rescaling the points leaves the signature unchanged; rotating the shape
//! cyclically shifts the samples, so the best alignment between two shapes is
//! found with FFTs and scored as a normalized inner product.

pub mod error;
pub mod ingest;
pub mod matching;
pub mod shape;
pub mod sigdb;
pub mod signature;
pub mod spectral;
pub mod synth;

pub use error::{AnsigError, Result};
pub use matching::{classify, match_signatures, MatchResult, RankedMatches};
pub use shape::{normalize, PointSet, RigidTransform};
pub use sigdb::SigDb;
pub use signature::{sign, SignConfig, Signature};
