use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `n` feature vectors in `R^d`, stored row-major, with optional class ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    n: usize,
    d: usize,
    features: Vec<f64>,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    /// Checks `n >= 2`, `d >= 1`, finiteness, and that every class id
    /// below the maximum id occurs at least once.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        d: usize,
        features: Vec<f64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("dataset needs at least 2 points"));
        }
        if d == 0 {
            return Err(Error::input("dataset needs at least 1 feature"));
        }
        if features.len() != n * d {
            return Err(Error::LengthMismatch {
                expected: n * d,
                found: features.len(),
            });
        }
        if let Some(index) = features.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(ls) = &labels {
            if ls.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: ls.len(),
                });
            }
            let classes = ls.iter().max().map_or(0, |m| m + 1);
            let mut seen = alloc::vec![false; classes];
            for &c in ls {
                seen[c] = true;
            }
            if let Some(c) = seen.iter().position(|s| !s) {
                return Err(Error::input(alloc::format!(
                    "class id {c} does not appear (class ids must be contiguous from 0)"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            d,
            features,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of distinct classes (0 when unlabeled).
    pub fn num_classes(&self) -> usize {
        self.labels
            .as_ref()
            .and_then(|l| l.iter().max())
            .map_or(0, |m| m + 1)
    }

    /// Indices of the points carrying class `c`, ascending.
    pub fn class_indices(&self, c: usize) -> Vec<usize> {
        match &self.labels {
            Some(ls) => ls
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == c)
                .map(|(i, _)| i)
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// New dataset made of the given rows, in order.
    pub fn select(&self, rows: &[usize], labels: Option<Vec<usize>>) -> Result<Self> {
        let mut features = Vec::with_capacity(rows.len() * self.d);
        for &r in rows {
            features.extend_from_slice(self.row(r));
        }
        Dataset::new(self.name.clone(), rows.len(), self.d, features, labels)
    }
}
