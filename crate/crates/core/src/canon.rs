//! Rotation of an embedding into its principal coordinates `WV = UΣ`.

use log::debug;

use crate::embeddings::{EmbeddingModel, Vocabulary, WordMatrix};
use crate::linalg::{right_factors, DenseMatrix};
use crate::{Error, Result, Scalar};

/// An embedding expressed in the right singular basis of its word matrix.
///
/// Column `k` of `rotated` is the `k`-th principal component; its norm is
/// `sigma[k]`. Dot products between words are the same as in the source.
#[derive(Clone, Debug)]
pub struct CanonicalModel<T> {
    vocab: Vocabulary,
    rotated: DenseMatrix<T>,
    sigma: Vec<T>,
    v: DenseMatrix<T>,
    degenerate_components: Vec<usize>,
    normalized: bool,
}

/// Rotates a row-normalized model into canonical coordinates.
pub fn canonicalize<T: Scalar>(model: &EmbeddingModel<T>) -> Result<CanonicalModel<T>> {
    if !model.is_normalized() {
        return Err(Error::Precondition(
            "word vectors must be normalized before canonicalization".into(),
        ));
    }
    canonicalize_raw(model)
}

/// [`canonicalize`] without the normalization requirement. The
/// interpretability identities only hold for unit rows.
pub fn canonicalize_raw<T: Scalar>(model: &EmbeddingModel<T>) -> Result<CanonicalModel<T>> {
    let f = right_factors(model.matrix())?;
    let mut degenerate: Vec<usize> = f.rank_deficient.iter().chain(&f.near_ties).copied().collect();
    degenerate.sort_unstable();
    degenerate.dedup();
    debug!(
        "canonicalized {}x{} model, sigma_1 = {}, {} degenerate components",
        model.len(),
        model.dim(),
        f.sigma[0],
        degenerate.len()
    );
    Ok(CanonicalModel {
        vocab: model.vocab().clone(),
        rotated: f.mv,
        sigma: f.sigma,
        v: f.v,
        degenerate_components: degenerate,
        normalized: model.is_normalized(),
    })
}

impl<T: Scalar> CanonicalModel<T> {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    /// `W·V`, `N×d`.
    pub fn rotated(&self) -> &DenseMatrix<T> {
        &self.rotated
    }

    pub fn sigma(&self) -> &[T] {
        &self.sigma
    }

    /// The rotation applied to the source coordinates.
    pub fn v(&self) -> &DenseMatrix<T> {
        &self.v
    }

    /// Components with near-tied or numerically zero singular values; their
    /// axes are not uniquely determined.
    pub fn degenerate_components(&self) -> &[usize] {
        &self.degenerate_components
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn len(&self) -> usize {
        self.rotated.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.rotated.rows() == 0
    }

    /// Singular values, non-increasing.
    pub fn spectrum(&self) -> Vec<T> {
        self.sigma.clone()
    }

    /// The rotated vectors as an ordinary model (normalized flag inherited
    /// from the source, since rotation preserves row norms).
    pub fn as_model(&self) -> EmbeddingModel<T> {
        let m = EmbeddingModel::new(self.vocab.clone(), self.rotated.clone())
            .expect("vocabulary and rotated rows agree");
        if self.normalized {
            m.assume_normalized()
        } else {
            m
        }
    }
}

impl<T: Scalar> WordMatrix<T> for CanonicalModel<T> {
    fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }
    fn coords(&self) -> &DenseMatrix<T> {
        &self.rotated
    }
}
