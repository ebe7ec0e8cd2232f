use rayon::prelude::*;

use super::eigen::{eigh, gram};
use super::{dot, DenseMatrix};
use crate::{Error, Result, Scalar};

/// Thin SVD `M = U·diag(σ)·Vᵀ` of an `N×d` matrix with `N ≥ d`.
#[derive(Clone, Debug)]
pub struct SvdFactors<T> {
    /// `N×d`, orthonormal columns.
    pub u: DenseMatrix<T>,
    /// Non-increasing, non-negative.
    pub sigma: Vec<T>,
    /// `d×d` orthogonal; the largest-magnitude entry of every column is positive.
    pub v: DenseMatrix<T>,
    /// Components with `σ_k ≤ rank_tolerance·σ₁`; their `U` columns are an
    /// orthonormal completion rather than `M·v_k/σ_k`.
    pub rank_deficient: Vec<usize>,
    /// Components whose σ is within `tie_tolerance·σ₁` of a neighbour; their
    /// singular vectors are not uniquely determined.
    pub near_ties: Vec<usize>,
}

impl<T: Scalar> SvdFactors<T> {
    /// Sorted union of `rank_deficient` and `near_ties`.
    pub fn degenerate_components(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .rank_deficient
            .iter()
            .chain(&self.near_ties)
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let d = self.sigma.len();
        let us = DenseMatrix::from_fn(self.u.rows(), d, |i, k| self.u.get(i, k) * self.sigma[k]);
        us.matmul_transposed(&self.v).expect("factor shapes agree")
    }

    /// Flips column pairs `(u_k, v_k)` so that every `u_k` points the same way
    /// as `reference.u_k`. The product `UΣVᵀ` is unchanged.
    pub fn align_signs_to(&self, reference: &SvdFactors<T>) -> Result<SvdFactors<T>> {
        if self.u.shape() != reference.u.shape() {
            return Err(Error::invalid(format!(
                "cannot align {}x{} factors to {}x{}",
                self.u.rows(),
                self.u.cols(),
                reference.u.rows(),
                reference.u.cols()
            )));
        }
        let d = self.sigma.len();
        let flip: Vec<bool> = (0..d)
            .map(|k| {
                let c: T = (0..self.u.rows())
                    .fold(T::zero(), |acc, i| acc + self.u.get(i, k) * reference.u.get(i, k));
                c < T::zero()
            })
            .collect();
        let signed = |m: &DenseMatrix<T>| {
            DenseMatrix::from_fn(m.rows(), m.cols(), |i, k| {
                if flip[k] {
                    -m.get(i, k)
                } else {
                    m.get(i, k)
                }
            })
        };
        Ok(SvdFactors {
            u: signed(&self.u),
            sigma: self.sigma.clone(),
            v: signed(&self.v),
            rank_deficient: self.rank_deficient.clone(),
            near_ties: self.near_ties.clone(),
        })
    }
}

/// Right factor of a tall matrix: σ, V (sign-fixed) and the product `M·V`.
#[derive(Clone, Debug)]
pub(crate) struct RightFactors<T> {
    pub sigma: Vec<T>,
    pub v: DenseMatrix<T>,
    pub mv: DenseMatrix<T>,
    pub rank_deficient: Vec<usize>,
    pub near_ties: Vec<usize>,
}

pub(crate) fn right_factors<T: Scalar>(m: &DenseMatrix<T>) -> Result<RightFactors<T>> {
    let (rows, cols) = m.shape();
    if cols == 0 || rows < cols {
        return Err(Error::UnsupportedShape { rows, cols });
    }
    let (_, vecs) = eigh(&gram(m)?)?;
    let v = fix_signs(&vecs);
    let mv = m.matmul(&v)?;
    // ‖M·v_k‖ equals √λ_k but keeps ε·σ₁ absolute accuracy instead of √ε·σ₁,
    // which is what lets exactly rank-deficient input fall under the rank cut
    let norms: Vec<T> = (0..cols)
        .map(|k| (0..rows).fold(T::zero(), |acc, i| acc + mv.get(i, k) * mv.get(i, k)).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite norms"));
    let (v, mv) = if order.iter().enumerate().all(|(i, &k)| i == k) {
        (v, mv)
    } else {
        (v.select_columns(&order)?, mv.select_columns(&order)?)
    };
    let sigma: Vec<T> = order.iter().map(|&k| norms[k]).collect();

    let top = sigma[0];
    let rank_cut = T::rank_tolerance() * top;
    let rank_deficient = (0..cols)
        .filter(|&k| top == T::zero() || sigma[k] <= rank_cut)
        .collect();
    let tie_cut = T::tie_tolerance() * top;
    let mut near_ties = Vec::new();
    for k in 0..cols.saturating_sub(1) {
        if sigma[k] - sigma[k + 1] <= tie_cut {
            if near_ties.last() != Some(&k) {
                near_ties.push(k);
            }
            near_ties.push(k + 1);
        }
    }
    Ok(RightFactors {
        sigma,
        v,
        mv,
        rank_deficient,
        near_ties,
    })
}

/// Thin SVD through the eigendecomposition of the `d×d` Gram matrix.
///
/// `σ_k = ‖M·v_k‖` (the square root of the k-th Gram eigenvalue), `V` holds
/// the eigenvectors (sign-fixed so each column's largest-magnitude entry is
/// positive, first such row on ties) and `u_k = M·v_k/σ_k`. Columns of `U` for numerically zero σ are completed to an
/// orthonormal set and listed in `rank_deficient`.
pub fn svd_tall<T: Scalar>(m: &DenseMatrix<T>) -> Result<SvdFactors<T>> {
    let RightFactors {
        sigma,
        v,
        mv,
        rank_deficient,
        near_ties,
    } = right_factors(m)?;
    let (n, d) = m.shape();

    let mut cols: Vec<Option<Vec<T>>> = (0..d)
        .into_par_iter()
        .map(|k| {
            if rank_deficient.contains(&k) {
                None
            } else {
                let inv = T::one() / sigma[k];
                Some((0..n).map(|i| mv.get(i, k) * inv).collect())
            }
        })
        .collect();
    complete_orthonormal(&mut cols, n);

    let u = DenseMatrix::from_fn(n, d, |i, k| cols[k].as_ref().expect("completed")[i]);
    Ok(SvdFactors {
        u,
        sigma,
        v,
        rank_deficient,
        near_ties,
    })
}

fn fix_signs<T: Scalar>(v: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (n, d) = v.shape();
    let flip: Vec<bool> = (0..d)
        .map(|k| {
            let mut best = 0;
            for i in 1..n {
                // strict: the first row wins ties
                if v.get(i, k).abs() > v.get(best, k).abs() {
                    best = i;
                }
            }
            v.get(best, k) < T::zero()
        })
        .collect();
    DenseMatrix::from_fn(n, d, |i, k| if flip[k] { -v.get(i, k) } else { v.get(i, k) })
}

/// Fills every `None` with a unit vector orthogonal to all other columns.
///
/// Standard basis vectors are projected out of the current span in order; the
/// first residual longer than 1/2 is taken, else the longest one seen.
fn complete_orthonormal<T: Scalar>(cols: &mut [Option<Vec<T>>], n: usize) {
    let half = T::one() / (T::one() + T::one());
    for k in 0..cols.len() {
        if cols[k].is_some() {
            continue;
        }
        let mut best: Option<(T, Vec<T>)> = None;
        for candidate in 0..n {
            let mut x = vec![T::zero(); n];
            x[candidate] = T::one();
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for c in cols.iter().flatten() {
                    let p = dot(c, &x);
                    for (xi, &ci) in x.iter_mut().zip(c) {
                        *xi = *xi - p * ci;
                    }
                }
            }
            let nx = dot(&x, &x).sqrt();
            if best.as_ref().is_none_or(|(b, _)| nx > *b) {
                best = Some((nx, x));
            }
            if nx > half {
                break;
            }
        }
        let (nx, mut x) = best.expect("at least one candidate");
        x.iter_mut().for_each(|xi| *xi = *xi / nx);
        cols[k] = Some(x);
    }
}
