//! Comparing components across models: top/bottom word sets, greedy
//! component matching, and the rotation relating two trainings.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use log::warn;
use rayon::prelude::*;

use crate::embeddings::{EmbeddingModel, WordMatrix};
use crate::linalg::{orthogonality_residual, procrustes_rotation, svd_tall, DenseMatrix};
use crate::{Error, Result, Scalar};

/// Default number of top and bottom words per component.
pub const DEFAULT_TOP_T: usize = 50;

/// Below this shared-vocabulary fraction alignments are not meaningful.
pub const MIN_VOCAB_OVERLAP: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct WordScore<T> {
    /// Row in the vocabulary (frequency rank).
    pub index: usize,
    pub token: String,
    pub value: T,
}

/// The `t` words with the largest and the `t` with the smallest value on
/// one component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentWordSet<T> {
    pub component: usize,
    /// Descending by value; equal values in vocabulary order.
    pub positive: Vec<WordScore<T>>,
    /// Ascending by value; equal values in vocabulary order.
    pub negative: Vec<WordScore<T>>,
    /// Tokens of `positive ∪ negative`. Component directions are arbitrary,
    /// so comparisons use this set rather than the signed halves.
    pub joined: BTreeSet<String>,
}

impl<T: Scalar> ComponentWordSet<T> {
    /// Distinct row indices of the joined set in vocabulary order.
    pub fn joined_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .positive
            .iter()
            .chain(&self.negative)
            .map(|w| w.index)
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignedPair {
    /// Component of the first model.
    pub i: usize,
    /// Component of the second model.
    pub j: usize,
    pub overlap: usize,
}

impl AlignedPair {
    pub fn shift(&self) -> i64 {
        self.i as i64 - self.j as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentResult {
    /// In greedy pick order (non-increasing overlap).
    pub pairs: Vec<AlignedPair>,
    /// `i − j` for each pair, same order.
    pub shifts: Vec<i64>,
    /// Shared tokens over the smaller vocabulary, when known.
    pub vocab_overlap: Option<f64>,
}

impl AlignmentResult {
    /// Pairs ordered by the first model's component index.
    pub fn by_first_component(&self) -> Vec<AlignedPair> {
        let mut p = self.pairs.clone();
        p.sort_by_key(|p| p.i);
        p
    }

    pub fn partner_of(&self, i: usize) -> Option<AlignedPair> {
        self.pairs.iter().copied().find(|p| p.i == i)
    }
}

/// Diagnostics of the orthogonal map between two trainings.
#[derive(Clone, Debug)]
pub struct RetrainCheck<T> {
    /// `V₁V₂ᵀ`, so that `M₂ ≈ M₁·Q`.
    pub q: DenseMatrix<T>,
    /// `‖QᵀQ − I‖_max`.
    pub orthogonality: T,
    /// `‖M₁Q − M₂‖_F / ‖M₂‖_F`.
    pub relative_residual: T,
    /// Words used after vocabulary intersection.
    pub shared_words: usize,
    /// Whether the vocabularies differed and were intersected.
    pub reordered: bool,
}

/// Top and bottom `t` words of component `k`.
pub fn component_word_set<T: Scalar, M: WordMatrix<T> + ?Sized>(
    model: &M,
    k: usize,
    t: usize,
) -> Result<ComponentWordSet<T>> {
    let w = model.coords();
    Error::check_index(k, w.cols())?;
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    let values = w.column(k);
    let vocab = model.vocab();
    let take = |desc: bool| -> Vec<WordScore<T>> {
        let cmp = |&a: &usize, &b: &usize| -> Ordering {
            let by_value = values[a].partial_cmp(&values[b]).expect("finite values");
            let by_value = if desc { by_value.reverse() } else { by_value };
            by_value.then(a.cmp(&b))
        };
        let mut idx: Vec<usize> = (0..values.len()).collect();
        let t = t.min(idx.len());
        if t < idx.len() {
            idx.select_nth_unstable_by(t, cmp);
            idx.truncate(t);
        }
        idx.sort_by(cmp);
        idx.into_iter()
            .map(|i| WordScore {
                index: i,
                token: vocab.tokens()[i].clone(),
                value: values[i],
            })
            .collect()
    };
    let positive = take(true);
    let negative = take(false);
    let joined = positive
        .iter()
        .chain(&negative)
        .map(|w| w.token.clone())
        .collect();
    Ok(ComponentWordSet {
        component: k,
        positive,
        negative,
        joined,
    })
}

/// [`component_word_set`] for every component.
pub fn component_word_sets<T: Scalar, M: WordMatrix<T> + Sync + ?Sized>(
    model: &M,
    t: usize,
) -> Result<Vec<ComponentWordSet<T>>> {
    (0..model.coords().cols())
        .into_par_iter()
        .map(|k| component_word_set(model, k, t))
        .collect()
}

/// Number of tokens the two joined sets share.
pub fn overlap<T>(a: &ComponentWordSet<T>, b: &ComponentWordSet<T>) -> usize {
    a.joined.intersection(&b.joined).count()
}

/// Greedy matching of components by joined-set overlap.
///
/// Repeatedly picks the free pair `(i, j)` with the largest overlap (smallest
/// `i`, then smallest `j` on ties) until one side runs out.
pub fn greedy_match<T: Scalar>(
    a: &[ComponentWordSet<T>],
    b: &[ComponentWordSet<T>],
) -> AlignmentResult {
    let table: Vec<Vec<usize>> = a
        .par_iter()
        .map(|sa| b.iter().map(|sb| overlap(sa, sb)).collect())
        .collect();
    let mut candidates: Vec<AlignedPair> = table
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, &overlap)| AlignedPair { i, j, overlap })
        })
        .collect();
    candidates.sort_by(|x, y| {
        y.overlap
            .cmp(&x.overlap)
            .then(x.i.cmp(&y.i))
            .then(x.j.cmp(&y.j))
    });

    let wanted = a.len().min(b.len());
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::with_capacity(wanted);
    for c in candidates {
        if pairs.len() == wanted {
            break;
        }
        if !used_a[c.i] && !used_b[c.j] {
            used_a[c.i] = true;
            used_b[c.j] = true;
            pairs.push(c);
        }
    }
    let shifts = pairs.iter().map(AlignedPair::shift).collect();
    AlignmentResult {
        pairs,
        shifts,
        vocab_overlap: None,
    }
}

/// Word sets of size `t` for every component of both models, matched greedily.
/// Warns when the vocabularies share less than half of the smaller one.
pub fn greedy_align<T, A, B>(a: &A, b: &B, t: usize) -> Result<AlignmentResult>
where
    T: Scalar,
    A: WordMatrix<T> + Sync + ?Sized,
    B: WordMatrix<T> + Sync + ?Sized,
{
    let shared = a.vocab().shared_count(b.vocab());
    let smaller = a.vocab().len().min(b.vocab().len()).max(1);
    let fraction = shared as f64 / smaller as f64;
    if fraction < MIN_VOCAB_OVERLAP {
        warn!(
            "models share only {shared} of {smaller} words ({:.1}%); component overlaps will be small",
            100.0 * fraction
        );
    }
    let sa = component_word_sets(a, t)?;
    let sb = component_word_sets(b, t)?;
    let mut result = greedy_match(&sa, &sb);
    result.vocab_overlap = Some(fraction);
    Ok(result)
}

/// Orthogonal factor relating two trainings of the same model.
///
/// Both word matrices are decomposed; with the left factors sign-matched,
/// `M₁ = UΣV₁ᵀ` and `M₂ ≈ UΣV₂ᵀ`, hence `M₂ ≈ M₁·V₁V₂ᵀ`. Models with
/// different vocabularies are first restricted to their shared words in the
/// first model's order.
pub fn retrain_rotation<T: Scalar>(
    m1: &EmbeddingModel<T>,
    m2: &EmbeddingModel<T>,
) -> Result<RetrainCheck<T>> {
    if m1.dim() != m2.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            m1.dim(),
            m2.dim()
        )));
    }
    let reordered = m1.vocab() != m2.vocab();
    let (a, b);
    let (m1, m2) = if reordered {
        (a, b) = m1.intersect(m2);
        warn!(
            "vocabularies differ; using {} shared words in first-model order",
            a.len()
        );
        (&a, &b)
    } else {
        (m1, m2)
    };
    if m1.is_empty() {
        return Err(Error::invalid("the models share no words"));
    }
    let f1 = svd_tall(m1.matrix())?;
    let f2 = svd_tall(m2.matrix())?.align_signs_to(&f1)?;
    let q = procrustes_rotation(&f1.v, &f2.v)?;
    let orthogonality = orthogonality_residual(&q)?;
    let residual = m1.matrix().matmul(&q)?.sub(m2.matrix())?.frobenius_norm();
    let scale = m2.matrix().frobenius_norm();
    let relative_residual = if scale > T::zero() {
        residual / scale
    } else {
        residual
    };
    Ok(RetrainCheck {
        q,
        orthogonality,
        relative_residual,
        shared_words: m1.len(),
        reordered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonicalize;
    use crate::embeddings::Vocabulary;
    use crate::linalg::random_orthogonal;
    use crate::synth::{gaussian_model, rotate_model, spectral_model};

    fn column_model(values: &[f64]) -> EmbeddingModel<f64> {
        let vocab = Vocabulary::new((0..values.len()).map(|i| format!("t{i}")).collect()).unwrap();
        let m = DenseMatrix::from_fn(values.len(), 1, |i, _| values[i]);
        EmbeddingModel::new(vocab, m).unwrap()
    }

    #[test]
    fn single_word_each_side() {
        let s = component_word_set(&column_model(&[0.9, -0.8, 0.1]), 0, 1).unwrap();
        assert_eq!(s.positive[0].token, "t0");
        assert_eq!(s.negative[0].token, "t1");
        assert_eq!(s.joined.len(), 2);
    }

    #[test]
    fn saturation_and_ties() {
        let s = component_word_set(&column_model(&[0.5, 0.5, -1.0]), 0, 10).unwrap();
        assert_eq!(s.positive.len(), 3);
        let order: Vec<_> = s.positive.iter().map(|w| w.index).collect();
        assert_eq!(order, vec![0, 1, 2]);
        let order: Vec<_> = s.negative.iter().map(|w| w.index).collect();
        assert_eq!(order, vec![2, 0, 1]);
        assert_eq!(s.joined.len(), 3);
    }

    #[test]
    fn matches_full_sort() {
        let m = gaussian_model::<f64>(100, 10, 13);
        let c = canonicalize(&m).unwrap();
        for k in 0..10 {
            let s = component_word_set(&c, k, 10).unwrap();
            let mut idx: Vec<usize> = (0..100).collect();
            idx.sort_by(|&a, &b| c.rotated().get(b, k).partial_cmp(&c.rotated().get(a, k)).unwrap());
            let top: BTreeSet<String> = idx[..10].iter().map(|&i| format!("w{i}")).collect();
            let bottom: BTreeSet<String> = idx[90..].iter().map(|&i| format!("w{i}")).collect();
            let want: BTreeSet<String> = top.union(&bottom).cloned().collect();
            assert_eq!(s.joined, want);
            assert_eq!(s.positive[0].index, idx[0]);
            assert_eq!(s.negative[0].index, idx[99]);
        }
    }

    #[test]
    fn bad_arguments() {
        let m = column_model(&[1.0, 2.0]);
        assert!(component_word_set(&m, 1, 3).is_err());
        assert!(component_word_set(&m, 0, 0).is_err());
    }

    #[test]
    fn overlap_cases() {
        let a = component_word_set(&column_model(&[1.0, 2.0, 3.0]), 0, 1).unwrap();
        assert_eq!(overlap(&a, &a), a.joined.len());
        let vocab = Vocabulary::new(vec!["x".into(), "y".into()]).unwrap();
        let other = EmbeddingModel::new(vocab, DenseMatrix::from_rows(&[[1.0], [2.0]]).unwrap()).unwrap();
        let b = component_word_set(&other, 0, 1).unwrap();
        assert_eq!(overlap(&a, &b), 0);
    }

    #[test]
    fn self_alignment_is_identity() {
        let c = canonicalize(&gaussian_model::<f64>(200, 8, 2)).unwrap();
        let r = greedy_align(&c, &c, 10).unwrap();
        assert_eq!(r.pairs.len(), 8);
        assert!(r.shifts.iter().all(|&s| s == 0));
        for p in &r.pairs {
            assert_eq!(p.i, p.j);
            assert_eq!(p.overlap, component_word_set(&c, p.i, 10).unwrap().joined.len());
        }
        assert!(r.pairs.windows(2).all(|w| w[0].overlap >= w[1].overlap));
        assert_eq!(r.vocab_overlap, Some(1.0));
    }

    #[test]
    fn swapped_columns_give_unit_shifts() {
        let c = canonicalize(&gaussian_model::<f64>(200, 6, 7)).unwrap();
        let swapped = c.rotated().select_columns(&[1, 0, 2, 3, 4, 5]).unwrap();
        let b = EmbeddingModel::new(c.vocab().clone(), swapped).unwrap();
        let r = greedy_align(&c, &b, 10).unwrap();
        assert_eq!(r.partner_of(0).unwrap().j, 1);
        assert_eq!(r.partner_of(1).unwrap().j, 0);
        let by_i = r.by_first_component();
        assert_eq!(by_i[0].shift(), -1);
        assert_eq!(by_i[1].shift(), 1);
        assert!(by_i[2..].iter().all(|p| p.shift() == 0));
    }

    #[test]
    fn greedy_tie_breaking() {
        let m = column_model(&[1.0, 2.0, 3.0]);
        let s = component_word_set(&m, 0, 1).unwrap();
        // every overlap equals 2; smallest (i, j) first
        let r = greedy_match(&[s.clone(), s.clone()], &[s.clone(), s.clone(), s]);
        let got: Vec<_> = r.pairs.iter().map(|p| (p.i, p.j)).collect();
        assert_eq!(got, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn retrain_identical_models() {
        let m = spectral_model(300, 10, 0.15, 1);
        let r = retrain_rotation(&m, &m).unwrap();
        assert!(r.q.max_abs_diff(&DenseMatrix::identity(10)).unwrap() <= 1e-8);
        assert!(r.relative_residual <= 1e-8);
        assert!(!r.reordered);
    }

    #[test]
    fn retrain_exact_rotation() {
        let m = spectral_model(400, 12, 0.15, 4);
        let rot = random_orthogonal::<f64>(12, 99);
        let m2 = rotate_model(&m, &rot).unwrap();
        let r = retrain_rotation(&m, &m2).unwrap();
        assert!(r.relative_residual <= 1e-6, "{}", r.relative_residual);
        assert!(r.orthogonality <= 1e-8);
        assert!(r.q.max_abs_diff(&rot).unwrap() <= 1e-6);
    }

    #[test]
    fn retrain_intersects_vocabularies() {
        let m = spectral_model(100, 5, 0.3, 2);
        let rows: Vec<usize> = (0..100).rev().filter(|i| i % 7 != 0).collect();
        let shuffled = m.select_rows(&rows);
        let r = retrain_rotation(&m, &shuffled).unwrap();
        assert!(r.reordered);
        assert_eq!(r.shared_words, rows.len());
        assert!(r.relative_residual <= 1e-8);
    }

    #[test]
    fn retrain_errors() {
        let a = gaussian_model::<f64>(10, 3, 1);
        let b = gaussian_model::<f64>(10, 4, 1);
        assert!(retrain_rotation(&a, &b).is_err());
        let vocab = Vocabulary::new((0..10).map(|i| format!("z{i}")).collect()).unwrap();
        let c = EmbeddingModel::new(vocab, a.matrix().clone()).unwrap();
        assert!(retrain_rotation(&a, &c).is_err());
    }
}
