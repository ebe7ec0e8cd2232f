//! Vocabularies, embedding models and word2vec text I/O.

mod model;
mod vocab;
mod word2vec;

pub use model::EmbeddingModel;
pub use vocab::Vocabulary;
pub use word2vec::{load_word2vec_text, read_word2vec_text, save_word2vec_text, write_word2vec_text};

use crate::linalg::DenseMatrix;

/// Anything that pairs a vocabulary with per-word coordinates: a source
/// model or its canonical rotation.
pub trait WordMatrix<T> {
    fn vocab(&self) -> &Vocabulary;
    fn coords(&self) -> &DenseMatrix<T>;
}

impl<T: crate::Scalar> WordMatrix<T> for EmbeddingModel<T> {
    fn vocab(&self) -> &Vocabulary {
        EmbeddingModel::vocab(self)
    }
    fn coords(&self) -> &DenseMatrix<T> {
        self.matrix()
    }
}
