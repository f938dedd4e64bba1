//! AUC-guided spectral optimization.
//!
//! The score vector follows normalized power iterations with the random-walk
//! operator plus the gradient of the sigmoid-relaxed AUC over the labeled
//! (positive, negative) pairs:
//!
//! ```text
//! v <- normalize(v + gamma * (D^{-1} W v + grad_AUC(v)))
//! ```
//!
//! `gamma` is `warmup_step` for the first `warmup_iters` iterations and
//! `main_step` afterwards. Iteration stops once a post-warm-up step moves
//! `v` by at most `tol` in Euclidean norm.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{one_vs_rest_combine, PredictionVector, Predictor, SslMethod};
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::labels::LabelSet;
use crate::linalg::norm;
use crate::metrics::sigmoid;
use crate::rng::{SeededRng, Stream};

/// How the starting vector is filled before normalization. Labeled
/// entries are always +1 for positives and -1 for negatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMode {
    /// Unlabeled entries -1. The constant component then dominates the
    /// iterate and a zero threshold marks nearly every unlabeled node
    /// negative; use with [`ThresholdMode::BestOnLabeled`].
    Negative,
    /// Unlabeled entries 0 (the default).
    Zero,
    /// Unlabeled entries uniform on [-1, 1), drawn from `seed`.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// `y_i = 1(v_i >= 0)`.
    Zero,
    /// Threshold maximizing accuracy on the labeled nodes.
    BestOnLabeled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AucSpecConfig {
    pub warmup_iters: usize,
    pub warmup_step: f64,
    pub main_step: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub init_mode: InitMode,
    pub threshold_mode: ThresholdMode,
    /// Only used by [`InitMode::Random`].
    pub seed: u64,
}

impl Default for AucSpecConfig {
    fn default() -> Self {
        Self {
            warmup_iters: 20,
            warmup_step: 0.1,
            main_step: 0.01,
            tol: 1e-4,
            max_iter: 1000,
            init_mode: InitMode::Zero,
            threshold_mode: ThresholdMode::Zero,
            seed: 0,
        }
    }
}

impl AucSpecConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.warmup_step > 0.0 && self.main_step > 0.0) {
            return Err(Error::param("step sizes must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol must be positive"));
        }
        if self.max_iter < self.warmup_iters || self.max_iter == 0 {
            return Err(Error::param("max_iter must be positive and >= warmup_iters"));
        }
        Ok(())
    }
}

fn accumulate_gradient(v: &[f64], pos: &[usize], neg: &[usize], out: &mut [f64]) {
    let scale = 1.0 / (pos.len() * neg.len()) as f64;
    for &i in pos {
        out[i] = 0.0;
    }
    for &j in neg {
        out[j] = 0.0;
    }
    for &i in pos {
        let vi = v[i];
        for &j in neg {
            let s = sigmoid(vi - v[j]);
            let g = scale * s * (1.0 - s);
            out[i] += g;
            out[j] -= g;
        }
    }
}

/// Gradient of `(1 / |P||N|) sum_{i in P, j in N} sigmoid(v_i - v_j)`:
/// positive entries gain, negative entries lose, unlabeled entries are 0.
pub fn auc_gradient(v: &[f64], labels: &LabelSet) -> Result<Vec<f64>> {
    if v.len() != labels.num_nodes() {
        return Err(Error::LengthMismatch {
            expected: labels.num_nodes(),
            found: v.len(),
        });
    }
    labels.require_binary()?;
    let mut out = vec![0.0; v.len()];
    accumulate_gradient(v, &labels.positives(), &labels.negatives(), &mut out);
    Ok(out)
}

/// Threshold maximizing accuracy of `1(v_i >= theta)` on the labeled
/// nodes. Candidates are midpoints between consecutive distinct labeled
/// scores plus one value outside each end; ties prefer the smallest
/// `|theta|`.
pub fn best_threshold(v: &[f64], labels: &LabelSet) -> f64 {
    let mut pts: Vec<(f64, usize)> = labels.iter().map(|(i, c)| (v[i], c)).collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let mut candidates = Vec::with_capacity(pts.len() + 1);
    candidates.push(pts[0].0 - 1.0);
    for w in pts.windows(2) {
        if w[1].0 > w[0].0 {
            candidates.push(0.5 * (w[0].0 + w[1].0));
        }
    }
    candidates.push(pts[pts.len() - 1].0 + 1.0);
    let score = |t: f64| pts.iter().filter(|(s, c)| usize::from(*s >= t) == *c).count();
    let mut best = candidates[0];
    let mut best_hits = score(best);
    for &t in &candidates[1..] {
        let hits = score(t);
        if hits > best_hits || (hits == best_hits && t.abs() < best.abs()) {
            best = t;
            best_hits = hits;
        }
    }
    best
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = norm(v);
    for x in v.iter_mut() {
        *x /= nrm;
    }
    nrm
}

/// Binary AUC-Spec. The returned scores have unit Euclidean norm.
pub fn auc_spec_binary(
    graph: &SparseGraph,
    labels: &LabelSet,
    cfg: &AucSpecConfig,
) -> Result<PredictionVector> {
    auc_spec_traced(graph, labels, cfg, |_, _| {})
}

/// [`auc_spec_binary`] calling `observe(iteration, v)` after every update.
pub fn auc_spec_traced(
    graph: &SparseGraph,
    labels: &LabelSet,
    cfg: &AucSpecConfig,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<PredictionVector> {
    cfg.validate()?;
    let n = graph.len();
    if labels.num_nodes() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: labels.num_nodes(),
        });
    }
    labels.require_binary()?;
    let pos = labels.positives();
    let neg = labels.negatives();

    let mut v = match cfg.init_mode {
        InitMode::Negative => vec![-1.0; n],
        InitMode::Zero => vec![0.0; n],
        InitMode::Random => {
            let mut rng = SeededRng::new(cfg.seed, Stream::Init);
            (0..n).map(|_| 2.0 * rng.uniform() - 1.0).collect()
        }
    };
    for &i in &pos {
        v[i] = 1.0;
    }
    for &j in &neg {
        v[j] = -1.0;
    }
    normalize(&mut v);

    let mut walk = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let step = if iterations < cfg.warmup_iters {
            cfg.warmup_step
        } else {
            cfg.main_step
        };
        graph.random_walk_apply_into(&v, &mut walk);
        accumulate_gradient(&v, &pos, &neg, &mut grad);
        // walk <- v + step * (walk + grad), i.e. the next iterate.
        for i in 0..n {
            walk[i] = v[i] + step * walk[i];
        }
        for &i in pos.iter().chain(&neg) {
            walk[i] += step * grad[i];
        }
        let nrm = normalize(&mut walk);
        iterations += 1;
        if !nrm.is_finite() || nrm == 0.0 || walk.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericFailure { iteration: iterations });
        }
        let diff = libm::sqrt(walk.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>());
        core::mem::swap(&mut v, &mut walk);
        observe(iterations, &v);
        if iterations >= cfg.warmup_iters && diff <= cfg.tol {
            converged = true;
            break;
        }
    }
    let threshold = match cfg.threshold_mode {
        ThresholdMode::Zero => 0.0,
        ThresholdMode::BestOnLabeled => best_threshold(&v, labels),
    };
    Ok(PredictionVector::binary(v, threshold, iterations, converged))
}

/// One-vs-rest AUC-Spec over `C >= 2` classes.
///
/// For C = 2 this is an argmax over two runs and can differ from the
/// thresholded binary run.
pub fn auc_spec_multiclass(
    graph: &SparseGraph,
    labels: &LabelSet,
    cfg: &AucSpecConfig,
) -> Result<PredictionVector> {
    let classes = labels.num_classes();
    if classes < 2 {
        return Err(Error::param("one-vs-rest needs at least two classes"));
    }
    let mut class_scores = Vec::with_capacity(classes);
    let mut iterations = 0;
    let mut converged = true;
    for c in 0..classes {
        if labels.of_class(c).is_empty() {
            return Err(Error::EmptyClass(alloc::format!("class {c} has no labeled node")));
        }
        let run = auc_spec_binary(graph, &labels.one_vs_rest(c), cfg)?;
        iterations += run.iterations;
        converged &= run.converged;
        class_scores.push(run.scores);
    }
    Ok(one_vs_rest_combine(class_scores, labels, iterations, converged))
}

/// AUC-Spec as a pluggable method; binary label sets run the binary
/// algorithm, larger ones run one-vs-rest.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AucSpec {
    pub config: AucSpecConfig,
}

struct Prepared<'g> {
    graph: &'g SparseGraph,
    config: AucSpecConfig,
}

impl Predictor for Prepared<'_> {
    fn predict(&self, labels: &LabelSet) -> Result<PredictionVector> {
        if labels.num_classes() <= 2 {
            auc_spec_binary(self.graph, labels, &self.config)
        } else {
            auc_spec_multiclass(self.graph, labels, &self.config)
        }
    }
}

impl SslMethod for AucSpec {
    fn name(&self) -> &str {
        "auc_spec"
    }

    fn prepare<'g>(&self, graph: &'g SparseGraph) -> Result<Box<dyn Predictor + 'g>> {
        self.config.validate()?;
        Ok(Box::new(Prepared {
            graph,
            config: self.config,
        }))
    }
}
