use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{one_vs_rest_combine, PredictionVector, Predictor, SslMethod};
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::labels::LabelSet;
use crate::linalg::cholesky_solve;
use crate::spectral::{leading_eigenpairs, EigenBasis, DEFAULT_EIGEN_MAX_ITER, DEFAULT_EIGEN_TOL};

pub const DEFAULT_EIGS_K: usize = 5;
pub const DEFAULT_RIDGE: f64 = 1e-3;

/// Node features from an eigenbasis: every eigenvector rescaled to
/// Euclidean norm `sqrt(n)`, so entries are O(1) whatever the degrees.
fn feature_columns(basis: &EigenBasis) -> Vec<Vec<f64>> {
    basis
        .vectors
        .iter()
        .map(|v| {
            let n = v.len() as f64;
            let s = libm::sqrt(n) / libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
            v.iter().map(|x| x * s).collect()
        })
        .collect()
}

/// Ridge least squares `min |Phi_L w - t|^2 + ridge |w|^2` on labeled rows.
fn ridge_fit(columns: &[Vec<f64>], rows: &[usize], targets: &[f64], ridge: f64) -> Result<Vec<f64>> {
    let k = columns.len();
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for a in 0..k {
        for b in a..k {
            let g: f64 = rows.iter().map(|&r| columns[a][r] * columns[b][r]).sum();
            gram[a * k + b] = g;
            gram[b * k + a] = g;
        }
        rhs[a] = rows.iter().zip(targets).map(|(&r, t)| columns[a][r] * t).sum();
    }
    let solve = |lambda: f64| {
        let mut m = gram.clone();
        for a in 0..k {
            m[a * k + a] += lambda;
        }
        cholesky_solve(&m, &rhs, k)
    };
    if let Some(w) = solve(ridge) {
        return Ok(w);
    }
    let trace: f64 = (0..k).map(|a| gram[a * k + a]).sum();
    let retry = (10.0 * ridge).max(1e-8 * trace.max(1.0));
    solve(retry).ok_or(Error::SingularSystem)
}

fn scores_for(columns: &[Vec<f64>], w: &[f64], n: usize) -> Vec<f64> {
    let mut s = vec![0.0; n];
    for (col, &wc) in columns.iter().zip(w) {
        for (si, x) in s.iter_mut().zip(col) {
            *si += wc * x;
        }
    }
    s
}

/// Linear classifier on a precomputed eigenbasis. Binary label sets fit
/// +1/-1 targets and threshold the score at 0; more classes use
/// one-vs-rest over the same features.
pub fn leading_eigs_classify_with_basis(
    basis: &EigenBasis,
    labels: &LabelSet,
    ridge: f64,
) -> Result<PredictionVector> {
    let n = labels.num_nodes();
    if basis.vectors.first().is_none_or(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: basis.vectors.first().map_or(0, Vec::len),
        });
    }
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(Error::param("ridge must be finite and non-negative"));
    }
    let classes = labels.num_classes();
    for c in 0..classes.max(2) {
        if labels.of_class(c).is_empty() {
            return Err(Error::EmptyClass(alloc::format!("class {c} has no labeled node")));
        }
    }
    let columns = feature_columns(basis);
    let rows = labels.indices();
    let fit = |c: usize| -> Result<Vec<f64>> {
        let targets: Vec<f64> = labels
            .classes()
            .iter()
            .map(|&y| if y == c { 1.0 } else { -1.0 })
            .collect();
        let w = ridge_fit(&columns, rows, &targets, ridge)?;
        Ok(scores_for(&columns, &w, n))
    };
    if classes <= 2 {
        return Ok(PredictionVector::binary(fit(1)?, 0.0, basis.iterations, true));
    }
    let class_scores = (0..classes).map(fit).collect::<Result<Vec<_>>>()?;
    Ok(one_vs_rest_combine(class_scores, labels, basis.iterations, true))
}

/// Compute the `k` leading generalized eigenvectors and classify on them.
pub fn leading_eigs_classify(
    graph: &SparseGraph,
    labels: &LabelSet,
    k: usize,
    ridge: f64,
) -> Result<PredictionVector> {
    let basis = leading_eigenpairs(graph, k, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER)?;
    leading_eigs_classify_with_basis(&basis, labels, ridge)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingEigenvectors {
    pub k: usize,
    pub ridge: f64,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for LeadingEigenvectors {
    fn default() -> Self {
        Self {
            k: DEFAULT_EIGS_K,
            ridge: DEFAULT_RIDGE,
            eigen_tol: DEFAULT_EIGEN_TOL,
            eigen_max_iter: DEFAULT_EIGEN_MAX_ITER,
        }
    }
}

struct Prepared {
    basis: EigenBasis,
    ridge: f64,
}

impl Predictor for Prepared {
    fn predict(&self, labels: &LabelSet) -> Result<PredictionVector> {
        leading_eigs_classify_with_basis(&self.basis, labels, self.ridge)
    }
}

impl SslMethod for LeadingEigenvectors {
    fn name(&self) -> &str {
        "eigs"
    }

    fn prepare<'g>(&self, graph: &'g SparseGraph) -> Result<Box<dyn Predictor + 'g>> {
        let basis = leading_eigenpairs(graph, self.k, self.eigen_tol, self.eigen_max_iter)?;
        Ok(Box::new(Prepared {
            basis,
            ridge: self.ridge,
        }))
    }
}
