use alloc::boxed::Box;
use alloc::vec;

use super::{PredictionVector, Predictor, SslMethod};
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::labels::LabelSet;

pub const DEFAULT_LP_TOL: f64 = 1e-4;
pub const DEFAULT_LP_MAX_ITER: usize = 1000;

/// Binary label propagation: `v <- D^{-1} W v` followed by clamping the
/// labeled entries to their 0/1 labels, until `|v^{t+1} - v^t| <= tol`.
///
/// Unlabeled entries start at 0.5, so a component without labeled nodes
/// stays at 0.5; the count of such components is reported in the output.
/// Hard labels are `1(v_i >= 0.5)`.
pub fn label_propagation(
    graph: &SparseGraph,
    labels: &LabelSet,
    tol: f64,
    max_iter: usize,
) -> Result<PredictionVector> {
    let n = graph.len();
    if labels.num_nodes() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: labels.num_nodes(),
        });
    }
    labels.require_binary()?;
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::param("tol and max_iter must be positive"));
    }
    let mut v = vec![0.5; n];
    for (i, c) in labels.iter() {
        v[i] = c as f64;
    }
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        graph.random_walk_apply_into(&v, &mut next);
        for (i, c) in labels.iter() {
            next[i] = c as f64;
        }
        let diff: f64 = next.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
        core::mem::swap(&mut v, &mut next);
        iterations += 1;
        if libm::sqrt(diff) <= tol {
            converged = true;
            break;
        }
    }
    let mut out = PredictionVector::binary(v, 0.5, iterations, converged);
    out.unlabeled_components = unlabeled_components(graph, labels);
    Ok(out)
}

fn unlabeled_components(graph: &SparseGraph, labels: &LabelSet) -> usize {
    let (comp, count) = graph.connected_components();
    let mut has_label = vec![false; count];
    for &i in labels.indices() {
        has_label[comp[i]] = true;
    }
    has_label.iter().filter(|h| !**h).count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelPropagation {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LabelPropagation {
    fn default() -> Self {
        Self {
            tol: DEFAULT_LP_TOL,
            max_iter: DEFAULT_LP_MAX_ITER,
        }
    }
}

struct Prepared<'g> {
    graph: &'g SparseGraph,
    cfg: LabelPropagation,
}

impl Predictor for Prepared<'_> {
    fn predict(&self, labels: &LabelSet) -> Result<PredictionVector> {
        label_propagation(self.graph, labels, self.cfg.tol, self.cfg.max_iter)
    }
}

impl SslMethod for LabelPropagation {
    fn name(&self) -> &str {
        "lp"
    }

    fn prepare<'g>(&self, graph: &'g SparseGraph) -> Result<Box<dyn Predictor + 'g>> {
        Ok(Box::new(Prepared { graph, cfg: *self }))
    }
}
