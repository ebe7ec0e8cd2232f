//! Seeded synthetic matrices and models for tests, benchmarks and demos.
//!
//! Everything here is deterministic for a fixed seed (ChaCha8 stream).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::embeddings::{EmbeddingModel, Vocabulary};
use crate::linalg::{random_orthogonal, DenseMatrix};
use crate::{Result, Scalar};

/// `rows×cols` matrix of independent standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DenseMatrix::from_vec(rows, cols, data).expect("gaussian entries are finite")
}

/// Tokens `w0, w1, …`.
pub fn numbered_vocabulary(n: usize) -> Vocabulary {
    Vocabulary::new((0..n).map(|i| format!("w{i}")).collect()).expect("distinct tokens")
}

/// Isotropic Gaussian word vectors, rows normalized.
pub fn gaussian_model<T: Scalar>(n: usize, d: usize, seed: u64) -> EmbeddingModel<T> {
    EmbeddingModel::new(numbered_vocabulary(n), gaussian_matrix(n, d, seed).cast())
        .and_then(|m| m.normalize_rows())
        .expect("gaussian rows are non-zero")
}

/// Word vectors with a decaying spectrum, like trained embeddings.
///
/// Column `k` of a Gaussian matrix is scaled by `exp(−k·decay)`, the result is
/// rotated by a random orthogonal matrix (so the principal axes are not the
/// coordinate axes) and rows are normalized. Adjacent singular values differ
/// by roughly a factor `exp(−decay)`.
pub fn spectral_model(n: usize, d: usize, decay: f64, seed: u64) -> EmbeddingModel<f64> {
    let g = gaussian_matrix(n, d, seed);
    let scaled = DenseMatrix::from_fn(n, d, |i, k| g.get(i, k) * (-(k as f64) * decay).exp());
    let r = random_orthogonal::<f64>(d, seed.wrapping_add(0x9e37_79b9));
    let w = scaled.matmul(&r).expect("square rotation");
    EmbeddingModel::new(numbered_vocabulary(n), w)
        .and_then(|m| m.normalize_rows())
        .expect("rows are non-zero")
}

/// Same vocabulary, matrix multiplied by `rotation`; keeps the normalized flag
/// since orthogonal maps preserve row norms.
pub fn rotate_model(
    model: &EmbeddingModel<f64>,
    rotation: &DenseMatrix<f64>,
) -> Result<EmbeddingModel<f64>> {
    let w = model.matrix().matmul(rotation)?;
    let m = EmbeddingModel::new(model.vocab().clone(), w)?;
    Ok(if model.is_normalized() {
        m.assume_normalized()
    } else {
        m
    })
}

/// Adds independent `N(0, sigma²)` noise to every entry and re-normalizes rows.
pub fn perturb_model(
    model: &EmbeddingModel<f64>,
    sigma: f64,
    seed: u64,
) -> Result<EmbeddingModel<f64>> {
    let (n, d) = model.matrix().shape();
    let noise = gaussian_matrix(n, d, seed);
    let w = DenseMatrix::from_fn(n, d, |i, j| model.matrix().get(i, j) + sigma * noise.get(i, j));
    EmbeddingModel::new(model.vocab().clone(), w)?.normalize_rows()
}
