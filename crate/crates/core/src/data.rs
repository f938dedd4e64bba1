//! Synthetic dataset generators, balanced subsampling and labeled-set
//! sampling. Every function is a deterministic function of its arguments
//! and seed.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::labels::LabelSet;
use crate::rng::{SeededRng, Stream};

pub const RING_CLUSTERS: usize = 8;
pub const RING_RADIUS: f64 = 5.0;
pub const RING_VARIANCE: f64 = 0.5;
pub const GMM_VARIANCE: f64 = 1.5;

/// Center of ring cluster `i`.
pub fn ring_center(i: usize) -> (f64, f64) {
    let theta = 2.0 * PI * i as f64 / RING_CLUSTERS as f64;
    (RING_RADIUS * libm::cos(theta), RING_RADIUS * libm::sin(theta))
}

/// Eight isotropic Gaussian clusters (variance 0.5) equally spaced on a
/// circle of radius 5, `n / 8` points each, stored cluster by cluster.
/// Cluster `i` has label 1 when `i` is even, else 0.
pub fn gen_ring_of_gaussians(n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 || !n.is_multiple_of(RING_CLUSTERS) {
        return Err(Error::param(format!("ring size {n} must be a positive multiple of 8")));
    }
    let per = n / RING_CLUSTERS;
    let sd = libm::sqrt(RING_VARIANCE);
    let mut rng = SeededRng::new(seed, Stream::Generate);
    let mut features = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for c in 0..RING_CLUSTERS {
        let (mx, my) = ring_center(c);
        for _ in 0..per {
            features.push(mx + sd * rng.normal());
            features.push(my + sd * rng.normal());
            labels.push(usize::from(c % 2 == 0));
        }
    }
    Dataset::new("ring", n, 2, features, Some(labels))
}

/// Two Gaussians with covariance `1.5 I`: the first `n / 2` points around
/// `(1, 1)` with label 1, the rest around `(-1, -1)` with label 0.
pub fn gen_gaussian_mixture(n: usize, seed: u64) -> Result<Dataset> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::param(format!("mixture size {n} must be even and >= 2")));
    }
    let sd = libm::sqrt(GMM_VARIANCE);
    let mut rng = SeededRng::new(seed, Stream::Generate);
    let mut features = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (center, label) = if i < n / 2 { (1.0, 1) } else { (-1.0, 0) };
        features.push(center + sd * rng.normal());
        features.push(center + sd * rng.normal());
        labels.push(label);
    }
    Dataset::new("gmm", n, 2, features, Some(labels))
}

/// Uniform points on `[0, 1] x [0, beta]`; label 1 iff `y >= beta / 2`.
pub fn gen_rectangle(n: usize, beta: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::param("rectangle needs n >= 2"));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param(format!("beta = {beta} must lie in (0, 1]")));
    }
    let mut rng = SeededRng::new(seed, Stream::Generate);
    let mut features = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.uniform();
        let y = beta * rng.uniform();
        features.push(x);
        features.push(y);
        labels.push(rectangle_label(y, beta));
    }
    // Tiny n can draw a single class, which the dataset type rejects.
    Dataset::new(format!("rectangle-{beta}"), n, 2, features, Some(labels))
}

pub fn rectangle_label(y: f64, beta: f64) -> usize {
    usize::from(y >= beta / 2.0)
}

/// `n / 2` rows of each of the two classes, sampled uniformly without
/// replacement. `classes.0` is relabeled 0 and `classes.1` is relabeled 1;
/// rows keep their original relative order.
pub fn balanced_subsample(
    data: &Dataset,
    n: usize,
    classes: (usize, usize),
    seed: u64,
) -> Result<Dataset> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::param(format!("subsample size {n} must be even and >= 2")));
    }
    if classes.0 == classes.1 {
        return Err(Error::param("subsample classes must differ"));
    }
    if data.labels().is_none() {
        return Err(Error::input("balanced subsampling needs labels"));
    }
    let half = n / 2;
    let mut rng = SeededRng::new(seed, Stream::Subsample);
    let mut picked: Vec<(usize, usize)> = Vec::with_capacity(n);
    for (new_label, c) in [(0, classes.0), (1, classes.1)] {
        let pool = data.class_indices(c);
        if pool.len() < half {
            return Err(Error::param(format!(
                "class {c} has {} rows, need {half}",
                pool.len()
            )));
        }
        for i in rng.sample_without_replacement(&pool, half) {
            picked.push((i, new_label));
        }
    }
    picked.sort_unstable();
    let rows: Vec<usize> = picked.iter().map(|p| p.0).collect();
    let labels: Vec<usize> = picked.iter().map(|p| p.1).collect();
    data.select(&rows, Some(labels))
}

/// Label budget split equally across classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelBudget {
    pub total: usize,
    pub seed: u64,
}

impl LabelBudget {
    pub fn new(total: usize, seed: u64) -> Self {
        Self { total, seed }
    }

    pub fn per_class(&self, classes: usize) -> Result<usize> {
        if classes == 0 || !self.total.is_multiple_of(classes) || self.total < classes {
            return Err(Error::param(format!(
                "budget {} is not a positive multiple of {classes} classes",
                self.total
            )));
        }
        Ok(self.total / classes)
    }
}

/// Per class, `budget.per_class` indices sampled uniformly without
/// replacement.
pub fn sample_labeled(data: &Dataset, budget: LabelBudget) -> Result<LabelSet> {
    let truth = data
        .labels()
        .ok_or_else(|| Error::input("labeled sampling needs ground-truth labels"))?;
    let classes = data.num_classes();
    let per = budget.per_class(classes)?;
    let mut rng = SeededRng::new(budget.seed, Stream::Labels);
    let mut pairs = Vec::with_capacity(budget.total);
    for c in 0..classes {
        let pool = data.class_indices(c);
        if pool.len() < per {
            return Err(Error::param(format!(
                "class {c} has {} points, budget needs {per}",
                pool.len()
            )));
        }
        for i in rng.sample_without_replacement(&pool, per) {
            pairs.push((i, truth[i]));
        }
    }
    LabelSet::new(data.len(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn ring_layout() {
        let (x0, y0) = ring_center(0);
        let (x2, y2) = ring_center(2);
        assert!((x0 - 5.0).abs() < 1e-15 && y0.abs() < 1e-15);
        assert!(x2.abs() < 1e-15 && (y2 - 5.0).abs() < 1e-15);
        let d = gen_ring_of_gaussians(3000, 1).unwrap();
        assert_eq!(d.class_indices(1).len(), 1500);
        assert_eq!(d.labels().unwrap()[0], 1);
        assert_eq!(d.labels().unwrap()[375], 0);
        assert!(gen_ring_of_gaussians(3001, 1).is_err());
    }

    #[test]
    fn gmm_and_rectangle_validation() {
        assert!(gen_gaussian_mixture(11, 0).is_err());
        assert!(gen_rectangle(10, 0.0, 0).is_err());
        assert!(gen_rectangle(10, 1.5, 0).is_err());
        assert_eq!(rectangle_label(0.25, 0.5), 1);
        assert_eq!(rectangle_label(0.2499, 0.5), 0);
    }

    #[test]
    fn generated_labels_match_predicate() {
        let d = gen_rectangle(500, 0.3, 4).unwrap();
        for i in 0..d.len() {
            assert_eq!(d.labels().unwrap()[i], rectangle_label(d.row(i)[1], 0.3));
            assert!(d.row(i)[0] >= 0.0 && d.row(i)[0] < 1.0);
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(gen_gaussian_mixture(40, 9).unwrap(), gen_gaussian_mixture(40, 9).unwrap());
        let a = gen_gaussian_mixture(40, 9).unwrap();
        let b = gen_gaussian_mixture(40, 10).unwrap();
        assert_ne!(a.features(), b.features());
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn subsample_counts() {
        let labels: Vec<usize> = (0..12).map(|i| i % 2).collect();
        let feats: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let d = Dataset::new("t", 12, 1, feats, Some(labels)).unwrap();
        let s = balanced_subsample(&d, 4, (0, 1), 5).unwrap();
        assert_eq!(s.class_indices(0).len(), 2);
        assert_eq!(s.class_indices(1).len(), 2);
        assert_eq!(s, balanced_subsample(&d, 4, (0, 1), 5).unwrap());
        assert!(balanced_subsample(&d, 14, (0, 1), 5).is_err());
    }

    #[test]
    fn labeled_sampling() {
        let d = gen_ring_of_gaussians(80, 2).unwrap();
        let l = sample_labeled(&d, LabelBudget::new(8, 3)).unwrap();
        assert_eq!(l.positives().len(), 4);
        assert_eq!(l.negatives().len(), 4);
        let full = sample_labeled(&d, LabelBudget::new(80, 3)).unwrap();
        assert_eq!(full.len(), 80);
        assert!(sample_labeled(&d, LabelBudget::new(7, 3)).is_err());
        assert!(sample_labeled(&d, LabelBudget::new(82, 3)).is_err());
    }
}
