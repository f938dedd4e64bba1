//! AUC (exact and sigmoid-relaxed), accuracy, mean-rank aggregation and the
//! smoothness diagnostics `Delta(v)` and `kappa(v)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::labels::LabelSet;

/// Per-trial evaluation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMetrics {
    pub auc: f64,
    pub accuracy: f64,
    pub runtime_ms: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Logistic function, evaluated without overflow for large `|z|`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counted
/// 1/2 (Mann–Whitney U / (|P||N|)). `truth[i]` is true for positives.
/// O(m log m) via average ranks.
pub fn exact_auc(scores: &[f64], truth: &[bool]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            found: scores.len(),
        });
    }
    if let Some(index) = scores.iter().position(|s| s.is_nan()) {
        return Err(Error::NonFinite { index });
    }
    let n_pos = truth.iter().filter(|&&t| t).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::EmptyClass("AUC needs both positives and negatives".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Sum of (doubled) ranks of positives; doubling keeps tie averages integral.
    let mut rank_sum2: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // Ranks start+1 ..= end; their average times two is start + end + 1.
        let avg2 = (start + end + 1) as u128;
        let pos_in_group = order[start..end].iter().filter(|&&i| truth[i]).count() as u128;
        rank_sum2 += avg2 * pos_in_group;
        start = end;
    }
    let np = n_pos as u128;
    let u2 = rank_sum2 - np * (np + 1);
    Ok(u2 as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

/// Exact AUC of `scores` restricted to `eval` with binary `truth` (class 1
/// positive).
pub fn exact_auc_on(scores: &[f64], truth: &[usize], eval: &[usize]) -> Result<f64> {
    let s: Vec<f64> = eval.iter().map(|&i| scores[i]).collect();
    let t: Vec<bool> = eval.iter().map(|&i| truth[i] == 1).collect();
    exact_auc(&s, &t)
}

fn binary_sets(labels: &LabelSet) -> Result<(Vec<usize>, Vec<usize>)> {
    labels.require_binary()?;
    Ok((labels.positives(), labels.negatives()))
}

/// `(1 / |P||N|) * sum_{i in P, j in N} sigmoid(v_i - v_j)`.
pub fn soft_auc(v: &[f64], labels: &LabelSet) -> Result<f64> {
    if v.len() != labels.num_nodes() {
        return Err(Error::LengthMismatch {
            expected: labels.num_nodes(),
            found: v.len(),
        });
    }
    let (p, n) = binary_sets(labels)?;
    let mut total = 0.0;
    for &i in &p {
        for &j in &n {
            total += sigmoid(v[i] - v[j]);
        }
    }
    Ok(total / (p.len() * n.len()) as f64)
}

/// `Delta(v) = mean_{P} v - mean_{N} v`.
pub fn pairwise_mean_gap(v: &[f64], labels: &LabelSet) -> Result<f64> {
    if v.len() != labels.num_nodes() {
        return Err(Error::LengthMismatch {
            expected: labels.num_nodes(),
            found: v.len(),
        });
    }
    let (p, n) = binary_sets(labels)?;
    let mean = |idx: &[usize]| idx.iter().map(|&i| v[i]).sum::<f64>() / idx.len() as f64;
    Ok(mean(&p) - mean(&n))
}

/// `kappa = (soft_auc - 1/2) / Delta`; errors when `Delta = 0`.
pub fn kappa(v: &[f64], labels: &LabelSet) -> Result<f64> {
    let delta = pairwise_mean_gap(v, labels)?;
    if delta == 0.0 {
        return Err(Error::param("kappa is undefined when the mean gap is zero"));
    }
    Ok((soft_auc(v, labels)? - 0.5) / delta)
}

/// Fraction of `eval` where `pred` equals `truth`.
pub fn accuracy(pred: &[usize], truth: &[usize], eval: &[usize]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            found: pred.len(),
        });
    }
    if eval.is_empty() {
        return Err(Error::param("accuracy over an empty evaluation set"));
    }
    if let Some(&i) = eval.iter().find(|&&i| i >= pred.len()) {
        return Err(Error::input(alloc::format!("evaluation index {i} out of range")));
    }
    let hits = eval.iter().filter(|&&i| pred[i] == truth[i]).count();
    Ok(hits as f64 / eval.len() as f64)
}

/// Mean rank per method. `table[d][m]` is the metric of method `m` on
/// dataset `d`; higher is better and gets rank 1. Ties share the average of
/// their ranks.
pub fn mean_rank(table: &[Vec<Option<f64>>]) -> Result<Vec<f64>> {
    let methods = table.first().map_or(0, Vec::len);
    if table.is_empty() || methods == 0 {
        return Err(Error::param("mean_rank needs at least one dataset and one method"));
    }
    let mut totals = vec![0.0; methods];
    for (row, cells) in table.iter().enumerate() {
        if cells.len() != methods {
            return Err(Error::MissingCell {
                row,
                column: cells.len().min(methods),
            });
        }
        let mut vals = Vec::with_capacity(methods);
        for (column, c) in cells.iter().enumerate() {
            match c {
                Some(x) if !x.is_nan() => vals.push(*x),
                _ => return Err(Error::MissingCell { row, column }),
            }
        }
        for (m, total) in totals.iter_mut().enumerate() {
            let better = vals.iter().filter(|&&x| x > vals[m]).count();
            let equal = vals.iter().filter(|&&x| x == vals[m]).count();
            // Tied block occupies ranks better+1 ..= better+equal.
            *total += better as f64 + (equal as f64 + 1.0) / 2.0;
        }
    }
    Ok(totals.into_iter().map(|t| t / table.len() as f64).collect())
}
