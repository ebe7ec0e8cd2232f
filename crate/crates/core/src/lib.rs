//! Canonical coordinates for word embeddings.
//!
//! A word matrix `W` (one row per vocabulary word) is rotated by the right
//! singular vectors of its SVD, `WV = UΣ`. In these coordinates the leading
//! components carry the largest share of the interpretability measure
//! `interp_k W = (WᵀW WᵀW)_kk`, and two independent trainings of the same
//! model become comparable component by component.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the tolerances quoted in the
//! docs refer to.

pub mod align;
pub mod canon;
pub mod cluster;
pub mod embeddings;
mod error;
pub mod format;
pub mod interp;
pub mod linalg;
mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use align::{AlignedPair, AlignmentResult, ComponentWordSet, RetrainCheck, WordScore};
pub use canon::CanonicalModel;
pub use cluster::{Cluster, ClusterSet};
pub use embeddings::{EmbeddingModel, Vocabulary, WordMatrix};
pub use interp::{InterpReport, RestrictedInterp};
pub use linalg::{DenseMatrix, SvdFactors};

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Svd = SvdFactors<f64>;
pub type Svd32 = SvdFactors<f32>;
pub type Model = EmbeddingModel<f64>;
pub type Model32 = EmbeddingModel<f32>;
pub type Canonical = CanonicalModel<f64>;
pub type Canonical32 = CanonicalModel<f32>;
