use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The labeled subset of the nodes with a class id per labeled node.
///
/// In binary use, class 1 is the positive set `P` and class 0 the negative
/// set `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    n: usize,
    indices: Vec<usize>,
    classes: Vec<usize>,
}

impl LabelSet {
    /// Pairs are sorted by node index; duplicates or out-of-range indices
    /// are rejected.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::input(alloc::format!("node {} labeled twice", w[0].0)));
            }
        }
        if let Some(&(i, _)) = pairs.iter().find(|(i, _)| *i >= n) {
            return Err(Error::input(alloc::format!("labeled index {i} out of range for n = {n}")));
        }
        Ok(Self {
            n,
            indices: pairs.iter().map(|p| p.0).collect(),
            classes: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Binary label set from explicit positive and negative index lists.
    pub fn binary(n: usize, positives: &[usize], negatives: &[usize]) -> Result<Self> {
        Self::new(
            n,
            positives
                .iter()
                .map(|&i| (i, 1))
                .chain(negatives.iter().map(|&i| (i, 0))),
        )
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Labeled node indices, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices.iter().copied().zip(self.classes.iter().copied())
    }

    pub fn num_classes(&self) -> usize {
        self.classes.iter().max().map_or(0, |m| m + 1)
    }

    pub fn of_class(&self, c: usize) -> Vec<usize> {
        self.iter().filter(|&(_, y)| y == c).map(|(i, _)| i).collect()
    }

    pub fn positives(&self) -> Vec<usize> {
        self.of_class(1)
    }

    pub fn negatives(&self) -> Vec<usize> {
        self.of_class(0)
    }

    /// Per-node mask of labeled nodes.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = alloc::vec![false; self.n];
        for &i in &self.indices {
            m[i] = true;
        }
        m
    }

    /// Indices not in the label set, ascending.
    pub fn unlabeled(&self) -> Vec<usize> {
        let mask = self.mask();
        (0..self.n).filter(|&i| !mask[i]).collect()
    }

    /// Checks the set is binary (classes in {0, 1}) with both classes present.
    pub fn require_binary(&self) -> Result<()> {
        if self.classes.iter().any(|&c| c > 1) {
            return Err(Error::param("binary method given class ids above 1"));
        }
        if !self.classes.contains(&1) {
            return Err(Error::EmptyClass("no positive (class 1) labels".into()));
        }
        if !self.classes.contains(&0) {
            return Err(Error::EmptyClass("no negative (class 0) labels".into()));
        }
        Ok(())
    }

    /// One-vs-rest view: class `c` becomes 1, everything else 0.
    pub fn one_vs_rest(&self, c: usize) -> Self {
        Self {
            n: self.n,
            indices: self.indices.clone(),
            classes: self.classes.iter().map(|&y| usize::from(y == c)).collect(),
        }
    }

    /// Relabel nodes through `perm` (new index of node i is `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        Self::new(self.n, self.iter().map(|(i, c)| (perm[i], c)))
    }
}
