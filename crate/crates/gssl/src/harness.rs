//! Benchmark protocol: per dataset, one graph; per (budget, trial), one
//! labeled set shared by every method; trial seed = base seed + trial.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use gssl_core::algorithms::{PredictionVector, Predictor};
use gssl_core::data::{sample_labeled, LabelBudget};
use gssl_core::metrics::{accuracy, exact_auc_on, mean_rank};
use gssl_core::{Dataset, LabelSet, SparseGraph};
use log::{info, warn};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::graph::build_graph_parallel;

pub const RESULTS_HEADER: &str = "dataset,method,n_labeled,trial,seed,auc,accuracy,runtime_ms,iterations,converged";
pub const SUMMARY_HEADER: &str =
    "dataset,method,n_labeled,trials,failed,mean_auc,mean_accuracy,mean_runtime_ms,mean_iterations,converged_fraction";
pub const RANK_HEADER: &str = "metric,n_labeled,method,mean_rank";

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub dataset: String,
    pub method: String,
    pub n_labeled: usize,
    pub trial: usize,
    pub seed: u64,
    /// `None` for non-binary tasks and failed trials.
    pub auc: Option<f64>,
    pub accuracy: Option<f64>,
    pub runtime_ms: f64,
    pub iterations: usize,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: String,
    pub n_labeled: usize,
    pub trials: usize,
    pub failed: usize,
    pub mean_auc: Option<f64>,
    pub mean_accuracy: Option<f64>,
    pub mean_runtime_ms: f64,
    pub mean_iterations: f64,
    pub converged_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub metric: &'static str,
    /// `None` aggregates over every budget.
    pub n_labeled: Option<usize>,
    pub method: String,
    pub mean_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkOutput {
    pub rows: Vec<TrialRow>,
    pub summary: Vec<SummaryRow>,
    pub ranks: Vec<RankRow>,
}

/// Metrics of one prediction over the unlabeled nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub auc: Option<f64>,
    pub accuracy: f64,
}

pub fn evaluate(data: &Dataset, labels: &LabelSet, pred: &PredictionVector) -> Result<Evaluation> {
    let truth = data
        .labels()
        .ok_or_else(|| Error::Usage(format!("dataset '{}' has no ground-truth labels", data.name())))?;
    let eval = labels.unlabeled();
    let acc = accuracy(&pred.hard_labels, truth, &eval)?;
    let auc = if data.num_classes() == 2 {
        // An evaluation set missing a class has no defined AUC.
        exact_auc_on(&pred.scores, truth, &eval).ok()
    } else {
        None
    };
    Ok(Evaluation { auc, accuracy: acc })
}

/// Timed `predict`; the duration covers the method call only.
pub fn timed_predict(predictor: &dyn Predictor, labels: &LabelSet) -> (gssl_core::Result<PredictionVector>, f64) {
    let start = Instant::now();
    let out = predictor.predict(labels);
    (out, start.elapsed().as_secs_f64() * 1e3)
}

pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    base_seed.wrapping_add(trial as u64)
}

pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(Error::Usage("--jobs must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start thread pool: {e}")))
}

struct TrialContext<'a> {
    data: &'a Dataset,
    methods: &'a [(String, gssl_core::Result<Box<dyn Predictor + 'a>>)],
}

fn failed_row(base: &TrialRow, err: String) -> TrialRow {
    TrialRow {
        error: Some(err),
        ..base.clone()
    }
}

fn run_trial(ctx: &TrialContext<'_>, budget: usize, trial: usize, seed: u64) -> Vec<(usize, TrialRow, bool)> {
    let template = |method: &str| TrialRow {
        dataset: ctx.data.name().to_string(),
        method: method.to_string(),
        n_labeled: budget,
        trial,
        seed,
        auc: None,
        accuracy: None,
        runtime_ms: 0.0,
        iterations: 0,
        converged: false,
        error: None,
    };
    let labels = sample_labeled(ctx.data, LabelBudget::new(budget, seed));
    let mut out = Vec::with_capacity(ctx.methods.len());
    for (m, (name, predictor)) in ctx.methods.iter().enumerate() {
        let base = template(name);
        let (labels, predictor) = match (&labels, predictor) {
            (Ok(l), Ok(p)) => (l, p),
            (Err(e), _) | (_, Err(e)) => {
                out.push((m, failed_row(&base, e.to_string()), false));
                continue;
            }
        };
        let (pred, runtime_ms) = timed_predict(predictor.as_ref(), labels);
        let row = match pred.map_err(Error::from).and_then(|p| evaluate(ctx.data, labels, &p).map(|e| (p, e))) {
            Ok((p, e)) => {
                let isolated = p.unlabeled_components > 0;
                let row = TrialRow {
                    auc: e.auc,
                    accuracy: Some(e.accuracy),
                    runtime_ms,
                    iterations: p.iterations,
                    converged: p.converged,
                    ..base
                };
                out.push((m, row, isolated));
                continue;
            }
            Err(e) => failed_row(&TrialRow { runtime_ms, ..base }, e.to_string()),
        };
        out.push((m, row, false));
    }
    out
}

/// Runs the full matrix on a pool of `jobs` threads.
pub fn run_benchmark(cfg: &ExperimentConfig, jobs: usize) -> Result<BenchmarkOutput> {
    cfg.validate()?;
    let pool = thread_pool(jobs)?;
    let methods: Vec<_> = cfg.methods.iter().map(|m| cfg.method(m)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for spec in &cfg.datasets {
        let data = spec.load()?;
        info!("dataset {}: n = {}, d = {}", data.name(), data.len(), data.dim());
        let graph: SparseGraph = pool.install(|| build_graph_parallel(&data, cfg.scale_k, cfg.neighbor_k))?;
        info!("graph: {} edges", graph.num_edges());
        let prepared: Vec<_> = methods
            .iter()
            .map(|m| (m.name().to_string(), pool.install(|| m.prepare(&graph))))
            .collect();
        for (name, p) in &prepared {
            if let Err(e) = p {
                warn!("{}: {name} preparation failed: {e}", data.name());
            }
        }
        let ctx = TrialContext {
            data: &data,
            methods: &prepared,
        };
        let tasks: Vec<(usize, usize)> = cfg
            .budgets
            .iter()
            .flat_map(|&b| (0..cfg.trials).map(move |t| (b, t)))
            .collect();
        let results: Vec<Vec<(usize, TrialRow, bool)>> = pool.install(|| {
            tasks
                .par_iter()
                .map(|&(b, t)| run_trial(&ctx, b, t, trial_seed(cfg.base_seed, t)))
                .collect()
        });
        let mut isolated = vec![0usize; prepared.len()];
        let mut block: Vec<(usize, TrialRow)> = Vec::with_capacity(results.len() * prepared.len());
        for (m, row, iso) in results.into_iter().flatten() {
            if let Some(e) = &row.error {
                warn!(
                    "{} {} budget {} trial {}: {e}",
                    row.dataset, row.method, row.n_labeled, row.trial
                );
            }
            isolated[m] += usize::from(iso);
            block.push((m, row));
        }
        for (m, count) in isolated.iter().enumerate() {
            if *count > 0 {
                warn!(
                    "{}: {} left unlabeled connected components in {count} trials (scores there stay at the initial value)",
                    data.name(),
                    prepared[m].0
                );
            }
        }
        block.sort_by_key(|(m, r)| (*m, r.n_labeled, r.trial));
        rows.extend(block.into_iter().map(|(_, r)| r));
    }
    let summary = summarize(&rows);
    let ranks = rank_methods(cfg, &summary);
    Ok(BenchmarkOutput { rows, summary, ranks })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut s, mut c) = (0.0, 0usize);
    for x in xs {
        s += x;
        c += 1;
    }
    (c > 0).then(|| s / c as f64)
}

/// Means per (dataset, method, budget), in row order.
pub fn summarize(rows: &[TrialRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = (&rows[start].dataset, &rows[start].method, rows[start].n_labeled);
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| (&r.dataset, &r.method, r.n_labeled) == key)
                .count();
        let group = &rows[start..end];
        let ok: Vec<&TrialRow> = group.iter().filter(|r| r.error.is_none()).collect();
        out.push(SummaryRow {
            dataset: key.0.clone(),
            method: key.1.clone(),
            n_labeled: key.2,
            trials: group.len(),
            failed: group.len() - ok.len(),
            mean_auc: if ok.iter().all(|r| r.auc.is_some()) {
                mean(ok.iter().filter_map(|r| r.auc))
            } else {
                None
            },
            mean_accuracy: mean(ok.iter().filter_map(|r| r.accuracy)),
            mean_runtime_ms: mean(ok.iter().map(|r| r.runtime_ms)).unwrap_or(0.0),
            mean_iterations: mean(ok.iter().map(|r| r.iterations as f64)).unwrap_or(0.0),
            converged_fraction: ok.iter().filter(|r| r.converged).count() as f64 / group.len() as f64,
        });
        start = end;
    }
    out
}

/// Mean rank of each configured method, ranking by per-dataset mean metric:
/// one block per budget plus one over every (dataset, budget) pair.
pub fn rank_methods(cfg: &ExperimentConfig, summary: &[SummaryRow]) -> Vec<RankRow> {
    let datasets: Vec<&str> = {
        let mut seen: Vec<&str> = Vec::new();
        for s in summary {
            if !seen.contains(&s.dataset.as_str()) {
                seen.push(&s.dataset);
            }
        }
        seen
    };
    let lookup = |d: &str, m: &str, b: usize, metric: &str| -> Option<f64> {
        let s = summary.iter().find(|s| s.dataset == d && s.method == m && s.n_labeled == b)?;
        if metric == "auc" {
            s.mean_auc
        } else {
            s.mean_accuracy
        }
    };
    let mut out = Vec::new();
    for metric in ["auc", "accuracy"] {
        let mut all_rows = Vec::new();
        for &b in &cfg.budgets {
            let table: Vec<Vec<Option<f64>>> = datasets
                .iter()
                .map(|d| cfg.methods.iter().map(|m| lookup(d, m, b, metric)).collect())
                .collect();
            push_ranks(&mut out, metric, Some(b), &cfg.methods, &table);
            all_rows.extend(table);
        }
        push_ranks(&mut out, metric, None, &cfg.methods, &all_rows);
    }
    out
}

fn push_ranks(
    out: &mut Vec<RankRow>,
    metric: &'static str,
    n_labeled: Option<usize>,
    methods: &[String],
    table: &[Vec<Option<f64>>],
) {
    match mean_rank(table) {
        Ok(ranks) => out.extend(methods.iter().zip(ranks).map(|(m, r)| RankRow {
            metric,
            n_labeled,
            method: m.clone(),
            mean_rank: r,
        })),
        Err(e) => {
            let scope = n_labeled.map_or("all budgets".to_string(), |b| format!("budget {b}"));
            warn!("no {metric} ranks for {scope}: {e}");
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchmarkOutput {
    pub fn results_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{RESULTS_HEADER}").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{:.3},{},{}",
                csv_field(&r.dataset),
                csv_field(&r.method),
                r.n_labeled,
                r.trial,
                r.seed,
                opt(r.auc),
                opt(r.accuracy),
                r.runtime_ms,
                r.iterations,
                r.converged
            )
            .unwrap();
        }
        s
    }

    /// Per-cell means, a blank line, then the mean-rank block.
    pub fn summary_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{SUMMARY_HEADER}").unwrap();
        for r in &self.summary {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{:.3},{},{}",
                csv_field(&r.dataset),
                csv_field(&r.method),
                r.n_labeled,
                r.trials,
                r.failed,
                opt(r.mean_auc),
                opt(r.mean_accuracy),
                r.mean_runtime_ms,
                r.mean_iterations,
                r.converged_fraction
            )
            .unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "{RANK_HEADER}").unwrap();
        for r in &self.ranks {
            let b = r.n_labeled.map_or("all".to_string(), |b| b.to_string());
            writeln!(s, "{},{b},{},{}", r.metric, csv_field(&r.method), r.mean_rank).unwrap();
        }
        s
    }

    /// Writes `results.csv`, `summary.csv` and the resolved `config.toml`
    /// into `dir`.
    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (file, text) in [
            ("results.csv", self.results_csv()),
            ("summary.csv", self.summary_csv()),
            ("config.toml", cfg.to_toml()),
        ] {
            let p = dir.join(file);
            std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        }
        Ok(())
    }
}
