use rayon::prelude::*;

use super::DenseMatrix;
use crate::{Error, Result, Scalar};

/// Default sweep cap for [`jacobi_eigh`].
pub const DEFAULT_MAX_SWEEPS: usize = 50;

// rows of the Gram matrix handled by one task; each task streams the input once
const GRAM_BLOCK: usize = 8;

/// `MᵀM`, exactly symmetric.
///
/// Entry `(a, b)` is accumulated over the rows of `m` in ascending order and
/// the lower triangle is a copy of the upper one.
pub fn gram<T: Scalar>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let (n, d) = m.shape();
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("gram of an empty {n}x{d} matrix")));
    }
    let mut g = vec![T::zero(); d * d];
    g.par_chunks_mut(GRAM_BLOCK * d)
        .enumerate()
        .for_each(|(block, out)| {
            let first = block * GRAM_BLOCK;
            let count = out.len() / d;
            for row in m.row_iter() {
                for local in 0..count {
                    let a = first + local;
                    let wa = row[a];
                    let acc = &mut out[local * d..(local + 1) * d];
                    for b in a..d {
                        acc[b] = acc[b] + wa * row[b];
                    }
                }
            }
        });
    for a in 0..d {
        for b in 0..a {
            g[a * d + b] = g[b * d + a];
        }
    }
    DenseMatrix::from_vec(d, d, g)
}

/// Default convergence threshold for `s`: a precision-dependent multiple of `‖s‖_max`.
pub fn default_tolerance<T: Scalar>(s: &DenseMatrix<T>) -> T {
    T::jacobi_tolerance() * s.max_abs()
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Iterates until the Frobenius norm of the off-diagonal part is `≤ tol`.
/// Eigenvalues come back in descending order (ties keep their diagonal
/// position order) and the columns of the returned matrix are the matching
/// orthonormal eigenvectors.
pub fn jacobi_eigh<T: Scalar>(
    s: &DenseMatrix<T>,
    tol: T,
    max_sweeps: usize,
) -> Result<(Vec<T>, DenseMatrix<T>)> {
    if !s.is_square() || s.rows() == 0 {
        return Err(Error::invalid(format!(
            "eigendecomposition needs a non-empty square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let scale = T::one().max(s.max_abs());
    let asym = s.asymmetry()?;
    if asym > T::symmetry_tolerance() * scale {
        return Err(Error::invalid(format!(
            "matrix is not symmetric (max asymmetry {asym:e})"
        )));
    }
    if tol.is_nan() || tol < T::zero() {
        return Err(Error::invalid("tolerance must be non-negative"));
    }

    let n = s.rows();
    // work on the symmetrized copy
    let mut a: Vec<T> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i <= j {
                s.get(i, j)
            } else {
                s.get(j, i)
            }
        })
        .collect();
    let mut v = DenseMatrix::<T>::identity(n).into_vec();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= tol {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off.to_f64_lossy(),
            });
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep ascending index order
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = DenseMatrix::from_raw(n, n, v).select_columns(&order)?;
    Ok((values, vectors))
}

/// [`jacobi_eigh`] with [`default_tolerance`] and [`DEFAULT_MAX_SWEEPS`].
pub fn eigh<T: Scalar>(s: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    jacobi_eigh(s, default_tolerance(s), DEFAULT_MAX_SWEEPS)
}

fn off_diagonal_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + a[i * n + j] * a[i * n + j];
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with the rotation `J`, updating `a ← JᵀaJ` and `v ← vJ`.
fn rotate<T: Scalar>(a: &mut [T], v: &mut [T], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == T::zero() {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let two = T::one() + T::one();
    let tau = (aqq - app) / (two * apq);
    let t = if tau.abs() > T::one() / T::epsilon().sqrt() {
        // tau² would lose everything; first-order expansion is exact to rounding
        T::one() / (two * tau)
    } else {
        let sign = if tau >= T::zero() { T::one() } else { -T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    a[p * n + q] = T::zero();
    a[q * n + p] = T::zero();
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}
