//! Semi-supervised methods behind one interface.
//!
//! A method is prepared once per graph (for graph-only precomputation such
//! as an eigenbasis) and then asked for predictions on any number of label
//! sets. New methods plug in by implementing [`SslMethod`].

mod auc_spec;
mod eigenvectors;
mod label_propagation;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::SparseGraph;
use crate::labels::LabelSet;

pub use auc_spec::{
    auc_gradient, auc_spec_binary, auc_spec_multiclass, auc_spec_traced, best_threshold, AucSpec, AucSpecConfig,
    InitMode, ThresholdMode,
};
pub use eigenvectors::{
    leading_eigs_classify, leading_eigs_classify_with_basis, LeadingEigenvectors, DEFAULT_EIGS_K,
    DEFAULT_RIDGE,
};
pub use label_propagation::{label_propagation, LabelPropagation, DEFAULT_LP_MAX_ITER, DEFAULT_LP_TOL};

/// Output of a method run.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionVector {
    /// Continuous score per node. For multi-class runs, the score of the
    /// predicted class.
    pub scores: Vec<f64>,
    /// Per-class score vectors of one-vs-rest runs; empty for binary runs.
    pub class_scores: Vec<Vec<f64>>,
    pub hard_labels: Vec<usize>,
    /// Decision threshold used for binary hard labels.
    pub threshold: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Connected components that contain no labeled node.
    pub unlabeled_components: usize,
}

impl PredictionVector {
    pub(crate) fn binary(scores: Vec<f64>, threshold: f64, iterations: usize, converged: bool) -> Self {
        let hard_labels = scores.iter().map(|&s| usize::from(s >= threshold)).collect();
        Self {
            scores,
            class_scores: Vec::new(),
            hard_labels,
            threshold: Some(threshold),
            iterations,
            converged,
            unlabeled_components: 0,
        }
    }
}

/// A graph SSL method.
pub trait SslMethod: Send + Sync {
    /// Stable identifier used in result tables.
    fn name(&self) -> &str;

    /// Graph-only precomputation. The returned predictor is reused across
    /// label sets on the same graph.
    fn prepare<'g>(&self, graph: &'g SparseGraph) -> Result<Box<dyn Predictor + 'g>>;
}

pub trait Predictor: Send + Sync {
    fn predict(&self, labels: &LabelSet) -> Result<PredictionVector>;
}

/// One-vs-rest prediction: argmax over per-class scores for unlabeled
/// nodes (ties to the smallest class id), given labels for labeled nodes.
pub(crate) fn one_vs_rest_combine(
    class_scores: Vec<Vec<f64>>,
    labels: &LabelSet,
    iterations: usize,
    converged: bool,
) -> PredictionVector {
    let n = labels.num_nodes();
    let mut hard_labels = alloc::vec![0usize; n];
    let mut scores = alloc::vec![0.0; n];
    for i in 0..n {
        let mut best = 0;
        for c in 1..class_scores.len() {
            if class_scores[c][i] > class_scores[best][i] {
                best = c;
            }
        }
        hard_labels[i] = best;
        scores[i] = class_scores[best][i];
    }
    for (i, c) in labels.iter() {
        hard_labels[i] = c;
    }
    PredictionVector {
        scores,
        class_scores,
        hard_labels,
        threshold: None,
        iterations,
        converged,
        unlabeled_components: 0,
    }
}
