//! Single-pass greedy clustering of a component's selected words.
//!
//! Words are visited in the given (frequency) order. Each word joins the
//! existing cluster whose centroid is most similar to it, provided that
//! cosine exceeds the threshold; otherwise it starts a new cluster. The result
//! depends on the visiting order.

use crate::linalg::{dot, norm};
use crate::{Error, Result, Scalar};

/// Default cosine a word must exceed to join a cluster.
pub const DEFAULT_THRESHOLD: f64 = 0.6;

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<T> {
    /// Tokens in the order they joined.
    pub members: Vec<String>,
    /// Positions of the members in the input list.
    pub positions: Vec<usize>,
    /// Mean of the member vectors (not re-normalized).
    pub centroid: Vec<T>,
    sum: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSet<T> {
    pub clusters: Vec<Cluster<T>>,
    pub threshold: T,
}

impl<T: Scalar> ClusterSet<T> {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Clusters separated by `"; "`, members by `", "`.
    pub fn render(&self) -> String {
        self.clusters
            .iter()
            .map(|c| c.members.join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Number of clusters; fewer clusters means a more coherent word list.
pub fn cluster_count<T: Scalar>(cs: &ClusterSet<T>) -> usize {
    cs.cluster_count()
}

/// Clusters `tokens` (with their vectors, same order) greedily at `threshold`.
pub fn greedy_cluster<T, S, V>(tokens: &[S], vectors: &[V], threshold: T) -> Result<ClusterSet<T>>
where
    T: Scalar,
    S: AsRef<str>,
    V: AsRef<[T]>,
{
    if tokens.len() != vectors.len() {
        return Err(Error::invalid(format!(
            "{} tokens but {} vectors",
            tokens.len(),
            vectors.len()
        )));
    }
    if !(threshold >= -T::one() && threshold <= T::one()) {
        return Err(Error::invalid(format!(
            "threshold {threshold} outside [-1, 1]"
        )));
    }
    let dim = vectors.first().map_or(0, |v| v.as_ref().len());
    let mut clusters: Vec<Cluster<T>> = Vec::new();

    for (pos, (token, vector)) in tokens.iter().zip(vectors).enumerate() {
        let x = vector.as_ref();
        if x.len() != dim {
            return Err(Error::invalid(format!(
                "vector {pos} has length {}, expected {dim}",
                x.len()
            )));
        }
        let nx = norm(x);
        if nx == T::zero() {
            return Err(Error::DegenerateVector {
                token: token.as_ref().to_string(),
            });
        }

        let mut best: Option<(usize, T)> = None;
        for (ci, c) in clusters.iter().enumerate() {
            let nc = norm(&c.centroid);
            if nc == T::zero() {
                continue;
            }
            let cos = dot(x, &c.centroid) / (nx * nc);
            // strict: the earlier cluster keeps ties
            if best.is_none_or(|(_, b)| cos > b) {
                best = Some((ci, cos));
            }
        }

        match best {
            Some((ci, cos)) if cos > threshold => {
                let c = &mut clusters[ci];
                c.members.push(token.as_ref().to_string());
                c.positions.push(pos);
                for (s, &xi) in c.sum.iter_mut().zip(x) {
                    *s = *s + xi;
                }
                let count = T::of(c.members.len() as f64);
                c.centroid = c.sum.iter().map(|&s| s / count).collect();
            }
            _ => clusters.push(Cluster {
                members: vec![token.as_ref().to_string()],
                positions: vec![pos],
                centroid: x.to_vec(),
                sum: x.to_vec(),
            }),
        }
    }
    Ok(ClusterSet {
        clusters,
        threshold,
    })
}
