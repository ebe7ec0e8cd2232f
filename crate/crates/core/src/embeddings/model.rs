use crate::linalg::{dot, norm, DenseMatrix};
use crate::{Error, Result, Scalar};

use super::Vocabulary;

/// Vocabulary plus an `N×d` matrix whose row `i` is the vector of token `i`.
#[derive(Clone, Debug)]
pub struct EmbeddingModel<T> {
    vocab: Vocabulary,
    matrix: DenseMatrix<T>,
    normalized: bool,
}

impl<T: Scalar> EmbeddingModel<T> {
    pub fn new(vocab: Vocabulary, matrix: DenseMatrix<T>) -> Result<Self> {
        if vocab.len() != matrix.rows() {
            return Err(Error::invalid(format!(
                "{} tokens but {} matrix rows",
                vocab.len(),
                matrix.rows()
            )));
        }
        Ok(Self {
            vocab,
            matrix,
            normalized: false,
        })
    }

    /// Marks the rows as unit-norm without checking.
    pub(crate) fn assume_normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn vector(&self, i: usize) -> Result<&[T]> {
        Error::check_index(i, self.len())?;
        Ok(self.matrix.row(i))
    }

    /// Copy with every row scaled to unit Euclidean norm.
    ///
    /// A model already flagged as normalized is returned unchanged, and rows
    /// whose norm is exactly 1 are left untouched, so the operation is
    /// idempotent bit for bit.
    pub fn normalize_rows(&self) -> Result<Self> {
        if self.normalized {
            return Ok(self.clone());
        }
        if let Some(i) = self.matrix.row_iter().position(|r| norm(r) == T::zero()) {
            return Err(Error::DegenerateVector {
                token: self.vocab.token(i).unwrap_or_default().to_string(),
            });
        }
        let matrix = self.matrix.map_rows(|_, row| {
            let n = norm(row);
            if n == T::one() {
                row.to_vec()
            } else {
                row.iter().map(|&x| x / n).collect()
            }
        });
        Ok(Self {
            vocab: self.vocab.clone(),
            matrix: matrix?,
            normalized: true,
        })
    }

    /// Cosine similarity of rows `i` and `j` (a plain dot product when normalized).
    pub fn cosine(&self, i: usize, j: usize) -> Result<T> {
        let a = self.vector(i)?;
        let b = self.vector(j)?;
        let d = dot(a, b);
        if self.normalized {
            return Ok(d);
        }
        let (na, nb) = (norm(a), norm(b));
        for (n, idx) in [(na, i), (nb, j)] {
            if n == T::zero() {
                return Err(Error::DegenerateVector {
                    token: self.vocab.token(idx).unwrap_or_default().to_string(),
                });
            }
        }
        Ok(d / (na * nb))
    }

    /// First `limit` words.
    pub fn truncate(&self, limit: usize) -> Self {
        if limit >= self.len() {
            return self.clone();
        }
        let rows: Vec<usize> = (0..limit).collect();
        self.select_rows(&rows)
    }

    /// Sub-model made of the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            vocab: self.vocab.select(rows),
            matrix: self.matrix.select_rows(rows).expect("row indices in range"),
            normalized: self.normalized,
        }
    }

    /// Both models restricted to their shared tokens, in `self`'s order.
    pub fn intersect(&self, other: &Self) -> (Self, Self) {
        let (mine, theirs): (Vec<usize>, Vec<usize>) = self
            .vocab
            .tokens()
            .iter()
            .enumerate()
            .filter_map(|(i, t)| other.vocab.index_of(t).map(|j| (i, j)))
            .unzip();
        (self.select_rows(&mine), other.select_rows(&theirs))
    }

    /// Largest `| ‖row‖ − 1 |`.
    pub fn max_norm_deviation(&self) -> T {
        self.matrix
            .row_iter()
            .fold(T::zero(), |acc, r| acc.max((norm(r) - T::one()).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(rows: &[&[f64]]) -> EmbeddingModel<f64> {
        let vocab = Vocabulary::new((0..rows.len()).map(|i| format!("t{i}")).collect()).unwrap();
        EmbeddingModel::new(vocab, DenseMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let m = model(&[&[3.0, 4.0], &[1.0, 0.0]]).normalize_rows().unwrap();
        assert!(m.is_normalized());
        assert_eq!(m.matrix().row(0), &[0.6, 0.8]);
        assert_eq!(m.matrix().row(1), &[1.0, 0.0]);
    }

    #[test]
    fn random_rows_become_unit() {
        let m: EmbeddingModel<f64> = crate::synth::gaussian_model(20, 5, 4);
        for r in m.matrix().row_iter() {
            let n = norm(r);
            assert!((n - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_row_names_token() {
        let err = model(&[&[1.0, 0.0], &[0.0, 0.0]]).normalize_rows().unwrap_err();
        assert!(matches!(err, Error::DegenerateVector { ref token } if token == "t1"));
    }

    #[test]
    fn normalization_leaves_source_alone() {
        let m = model(&[&[3.0, 4.0]]);
        let _ = m.normalize_rows().unwrap();
        assert_eq!(m.matrix().row(0), &[3.0, 4.0]);
        assert!(!m.is_normalized());
    }

    #[test]
    fn cosine_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = model(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[h, h]]);
        assert_eq!(m.cosine(0, 2).unwrap(), 1.0);
        assert_eq!(m.cosine(0, 1).unwrap(), 0.0);
        assert!((m.cosine(3, 0).unwrap() - h).abs() <= 1e-12);
        assert!(matches!(m.cosine(0, 9), Err(Error::Index { index: 9, len: 4 })));
    }

    #[test]
    fn intersect_uses_first_order() {
        let a = model(&[&[1.0], &[2.0], &[3.0]]);
        let vb = Vocabulary::new(vec!["t2".into(), "x".into(), "t0".into()]).unwrap();
        let b = EmbeddingModel::new(vb, DenseMatrix::from_rows(&[[20.0], [0.5], [10.0]]).unwrap())
            .unwrap();
        let (a2, b2) = a.intersect(&b);
        assert_eq!(a2.vocab().tokens(), &["t0", "t2"]);
        assert_eq!(b2.vocab().tokens(), &["t0", "t2"]);
        assert_eq!(b2.matrix().as_slice(), &[10.0, 20.0]);
    }
}
