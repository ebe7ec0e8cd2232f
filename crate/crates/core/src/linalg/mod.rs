//! Dense matrices and the kernels built on them: Gram matrices, Jacobi
//! eigendecomposition, tall-skinny SVD and orthogonal-matrix utilities.

mod eigen;
mod matrix;
mod ortho;
mod svd;

pub use eigen::{default_tolerance, eigh, gram, jacobi_eigh, DEFAULT_MAX_SWEEPS};
pub use matrix::{dot, norm, DenseMatrix};
pub use ortho::{orthogonality_residual, procrustes_rotation, random_givens, random_orthogonal};
pub use svd::{svd_tall, SvdFactors};

pub(crate) use svd::right_factors;
