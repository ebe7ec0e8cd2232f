use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{dot, DenseMatrix};
use crate::{Error, Result, Scalar};

/// `‖QᵀQ − I‖_max`.
pub fn orthogonality_residual<T: Scalar>(q: &DenseMatrix<T>) -> Result<T> {
    if !q.is_square() {
        return Err(Error::invalid(format!(
            "orthogonality of a non-square {}x{} matrix",
            q.rows(),
            q.cols()
        )));
    }
    let n = q.cols();
    let cols: Vec<Vec<T>> = (0..n).map(|j| q.column(j)).collect();
    let mut worst = T::zero();
    for a in 0..n {
        for b in a..n {
            let target = if a == b { T::one() } else { T::zero() };
            worst = worst.max((dot(&cols[a], &cols[b]) - target).abs());
        }
    }
    Ok(worst)
}

/// Rotation `Q = V₁·V₂ᵀ` carrying the right singular basis of a second
/// training onto the first: if `M₁ = UΣV₁ᵀ` and `M₂ = UΣV₂ᵀ` then `M₂ = M₁·Q`.
pub fn procrustes_rotation<T: Scalar>(
    v1: &DenseMatrix<T>,
    v2: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>> {
    if !v1.is_square() || v1.shape() != v2.shape() {
        return Err(Error::invalid(format!(
            "procrustes needs two d×d matrices, got {}x{} and {}x{}",
            v1.rows(),
            v1.cols(),
            v2.rows(),
            v2.cols()
        )));
    }
    for (name, v) in [("first", v1), ("second", v2)] {
        let r = orthogonality_residual(v)?;
        if r > T::orthogonality_tolerance() {
            return Err(Error::invalid(format!(
                "{name} factor is not orthogonal (residual {r:e})"
            )));
        }
    }
    v1.matmul_transposed(v2)
}

/// Seeded random orthogonal matrix: a standard Gaussian matrix orthonormalized
/// column by column (modified Gram-Schmidt, two passes). Deterministic for a
/// fixed `(dim, seed)` on every platform.
pub fn random_orthogonal<T: Scalar>(dim: usize, seed: u64) -> DenseMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut x: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = dot(c, &x);
                for (xi, ci) in x.iter_mut().zip(c) {
                    *xi -= p * ci;
                }
            }
        }
        let nx = dot(&x, &x).sqrt();
        // a draw this close to the current span has probability ~0; redraw
        if nx > 1e-3 {
            x.iter_mut().for_each(|xi| *xi /= nx);
            cols.push(x);
        }
    }
    DenseMatrix::from_fn(dim, dim, |i, j| T::of(cols[j][i]))
}

/// Composition of `count` plane rotations with seeded random planes and angles.
pub fn random_givens<T: Scalar>(dim: usize, count: usize, seed: u64) -> DenseMatrix<T> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = DenseMatrix::<f64>::identity(dim).into_vec();
    if dim >= 2 {
        for _ in 0..count {
            let p = rng.random_range(0..dim);
            let mut r = rng.random_range(0..dim - 1);
            if r >= p {
                r += 1;
            }
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            for k in 0..dim {
                let a = q[k * dim + p];
                let b = q[k * dim + r];
                q[k * dim + p] = c * a - s * b;
                q[k * dim + r] = s * a + c * b;
            }
        }
    }
    DenseMatrix::from_fn(dim, dim, |i, j| T::of(q[i * dim + j]))
}
