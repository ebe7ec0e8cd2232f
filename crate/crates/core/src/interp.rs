//! Interpretability of embedding components.
//!
//! For row-normalized `W`, the interpretability of component `k` is
//!
//! ```text
//! interp_k W = Σ_{i,j} W_ik W_jk (W_i · W_j) = (WᵀW WᵀW)_kk
//! ```
//!
//! i.e. words that are similar to each other and load on `k` with the same
//! sign raise the score. The sum over `k` is the trace of `(WᵀW)²`, which no
//! orthogonal change of coordinates can alter; the rotation to principal
//! axes concentrates it in the leading components (`interp_k = σ_k⁴` there).

use crate::embeddings::WordMatrix;
use crate::linalg::{dot, gram, DenseMatrix};
use crate::{Error, Result, Scalar};

/// Interpretability of every component of a word matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpReport<T> {
    pub per_component: Vec<T>,
    /// `Σ_k interp_k`, equal to `tr((WᵀW)²)`.
    pub total: T,
    /// `interp_k / total` (all zero when the total is zero).
    pub normalized: Vec<T>,
}

/// Interpretability of one component restricted to a subset `S` of words.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestrictedInterp<T> {
    /// `Σ_{i,j∈S} W_ik W_jk (W_i · W_j)`.
    pub value: T,
    /// `value / Σ_{i,j∈S} |W_ik W_jk|`; in `[−1, 1]` for unit rows, 0 when
    /// every selected word has a zero component.
    pub normalized: T,
}

/// `(WᵀW WᵀW)_kk` as `‖(WᵀW)·e_k‖²`.
pub fn interp_component<T: Scalar>(w: &DenseMatrix<T>, k: usize) -> Result<T> {
    Error::check_index(k, w.cols())?;
    Ok(column_sq_norm(&gram(w)?, k))
}

/// The same quantity as the literal double sum over all ordered word pairs
/// (diagonal included). `O(N²d)`; meant for small matrices and as a check.
pub fn interp_bruteforce<T: Scalar>(w: &DenseMatrix<T>, k: usize) -> Result<T> {
    Error::check_index(k, w.cols())?;
    let all: Vec<usize> = (0..w.rows()).collect();
    Ok(pair_sum(w, k, &all).0)
}

/// All components from a single Gram matrix.
pub fn interp_all<T: Scalar>(w: &DenseMatrix<T>) -> Result<InterpReport<T>> {
    if w.cols() == 0 {
        return Err(Error::invalid("interpretability of a matrix with no columns"));
    }
    let g = gram(w)?;
    let per_component: Vec<T> = (0..w.cols()).map(|k| column_sq_norm(&g, k)).collect();
    Ok(InterpReport::from_components(per_component))
}

impl<T: Scalar> InterpReport<T> {
    pub fn from_components(per_component: Vec<T>) -> Self {
        let total = per_component.iter().fold(T::zero(), |a, &b| a + b);
        let normalized = per_component
            .iter()
            .map(|&v| if total > T::zero() { v / total } else { T::zero() })
            .collect();
        Self {
            per_component,
            total,
            normalized,
        }
    }
}

/// Interpretability of component `k` over the word subset `word_set` (row
/// indices, distinct), with its scale-free normalization.
pub fn restricted_interp<T: Scalar, M: WordMatrix<T> + ?Sized>(
    model: &M,
    k: usize,
    word_set: &[usize],
) -> Result<RestrictedInterp<T>> {
    restricted_interp_matrix(model.coords(), k, word_set)
}

pub fn restricted_interp_matrix<T: Scalar>(
    w: &DenseMatrix<T>,
    k: usize,
    word_set: &[usize],
) -> Result<RestrictedInterp<T>> {
    Error::check_index(k, w.cols())?;
    if word_set.is_empty() {
        return Err(Error::invalid("empty word set"));
    }
    let mut seen = std::collections::HashSet::with_capacity(word_set.len());
    for &i in word_set {
        Error::check_index(i, w.rows())?;
        if !seen.insert(i) {
            return Err(Error::invalid(format!("word index {i} listed twice")));
        }
    }
    let (value, scale) = pair_sum(w, k, word_set);
    let normalized = if scale > T::zero() {
        value / scale
    } else {
        T::zero()
    };
    Ok(RestrictedInterp { value, normalized })
}

fn column_sq_norm<T: Scalar>(g: &DenseMatrix<T>, k: usize) -> T {
    (0..g.rows()).fold(T::zero(), |acc, j| {
        let x = g.get(j, k);
        acc + x * x
    })
}

/// `(Σ W_ik W_jk (W_i·W_j), Σ |W_ik W_jk|)` over ordered pairs from `rows`.
fn pair_sum<T: Scalar>(w: &DenseMatrix<T>, k: usize, rows: &[usize]) -> (T, T) {
    let mut value = T::zero();
    let mut scale = T::zero();
    for &i in rows {
        for &j in rows {
            let weight = w.get(i, k) * w.get(j, k);
            value = value + weight * dot(w.row(i), w.row(j));
            scale = scale + weight.abs();
        }
    }
    (value, scale)
}
