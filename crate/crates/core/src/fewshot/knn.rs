use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::taskgen::Class;

/// Stored training vectors; fitting performs no learning.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnClassifier {
    vectors: Vec<Vec<f64>>,
    labels: Vec<Class>,
}

/// Stores the training set. Requires at least one sample of each class
/// and equal vector lengths.
pub fn knn_fit(train: Vec<(Vec<f64>, Class)>) -> Result<KnnClassifier> {
    if train.is_empty() {
        return Err(Error::Classifier("empty training set".into()));
    }
    let dim = train[0].0.len();
    if train.iter().any(|(v, _)| v.len() != dim) {
        return Err(Error::Classifier("training vectors differ in length".into()));
    }
    let ones = train.iter().filter(|(_, c)| *c == Class::One).count();
    if ones == 0 || ones == train.len() {
        return Err(Error::Classifier("training set holds a single class".into()));
    }
    let (vectors, labels) = train.into_iter().unzip();
    Ok(KnnClassifier { vectors, labels })
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl KnnClassifier {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k.is_multiple_of(2) {
            return Err(Error::Classifier(format!("k must be odd, got {k}")));
        }
        if k > self.len() {
            return Err(Error::Classifier(format!("k = {k} exceeds {} training samples", self.len())));
        }
        Ok(())
    }

    /// Training indices ordered by Euclidean distance, lower index first on ties.
    pub fn neighbors(&self, query: &[f64]) -> Result<Vec<usize>> {
        if query.len() != self.vectors[0].len() {
            return Err(Error::Classifier(format!(
                "query length {} differs from training length {}",
                query.len(),
                self.vectors[0].len()
            )));
        }
        let mut order: Vec<(f64, usize)> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (squared_distance(v, query), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(order.into_iter().map(|(_, i)| i).collect())
    }

    /// Majority label among the first `k` of `neighbors`.
    pub fn vote(&self, neighbors: &[usize], k: usize) -> Result<Class> {
        self.check_k(k)?;
        let ones = neighbors[..k].iter().filter(|&&i| self.labels[i] == Class::One).count();
        Ok(if 2 * ones > k { Class::One } else { Class::Two })
    }

    pub fn predict(&self, query: &[f64], k: usize) -> Result<Class> {
        self.check_k(k)?;
        let n = self.neighbors(query)?;
        self.vote(&n, k)
    }
}

/// Free-function form of [`KnnClassifier::predict`].
pub fn knn_predict(state: &KnnClassifier, query: &[f64], k: usize) -> Result<Class> {
    state.predict(query, k)
}
