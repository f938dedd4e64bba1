//! Smallest generalized eigenpairs of `L v = lambda D v`.
//!
//! Solved as the largest eigenpairs of `S = D^{-1/2} W D^{-1/2}` with a
//! block iteration: Rayleigh–Ritz on a growing orthonormal basis that is
//! expanded by the residuals of the unconverged Ritz pairs and restarted
//! from the current Ritz vectors when it reaches ten blocks. Each pair maps
//! back through `v = D^{-1/2} u`, `lambda = 1 - mu`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::linalg::{axpy, dot, norm, orthonormalize_against, symmetric_eigen};
use crate::rng::{SeededRng, Stream};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 2000;

/// Basis size cap, in blocks, before a restart.
const RESTART_BLOCKS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    /// Generalized eigenvalues, ascending.
    pub values: Vec<f64>,
    /// `vectors[j]` is the j-th generalized eigenvector, D-normalized.
    pub vectors: Vec<Vec<f64>>,
    /// `|L v - lambda D v|_2` per pair.
    pub residuals: Vec<f64>,
    /// Outer iterations performed.
    pub iterations: usize,
}

impl EigenBasis {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

struct SymmetricOp<'a> {
    graph: &'a SparseGraph,
    inv_sqrt_deg: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> SymmetricOp<'a> {
    fn new(graph: &'a SparseGraph) -> Self {
        let inv_sqrt_deg = graph.degrees().iter().map(|d| 1.0 / libm::sqrt(*d)).collect();
        Self {
            graph,
            inv_sqrt_deg,
            scratch: vec![0.0; graph.len()],
        }
    }

    fn apply(&mut self, u: &[f64]) -> Vec<f64> {
        for ((s, x), c) in self.scratch.iter_mut().zip(u).zip(&self.inv_sqrt_deg) {
            *s = x * c;
        }
        let mut out = vec![0.0; u.len()];
        self.graph.adjacency_apply_into(&self.scratch, &mut out);
        for (o, c) in out.iter_mut().zip(&self.inv_sqrt_deg) {
            *o *= c;
        }
        out
    }
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64], stride: usize, col: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, b) in basis.iter().enumerate() {
        let c = coeffs[i * stride + col];
        if c != 0.0 {
            axpy(c, b, &mut out);
        }
    }
    out
}

/// The `k` smallest generalized eigenpairs of `(L, D)`.
///
/// Converged when every symmetric residual `|S u - mu u|` is at most `tol`;
/// the generalized residual is then bounded by `tol * sqrt(max degree)`.
/// Each eigenvector is sign-fixed so its largest-magnitude entry is positive.
pub fn leading_eigenpairs(
    graph: &SparseGraph,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<EigenBasis> {
    let n = graph.len();
    if k == 0 || k > n {
        return Err(Error::param(alloc::format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::param("tol and max_iter must be positive"));
    }
    let block = (k + 2).min(n);
    let max_basis = (RESTART_BLOCKS * block).min(n);
    let mut op = SymmetricOp::new(graph);
    let mut rng = SeededRng::new(0, Stream::Eigen);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    // D^{1/2} 1 spans the top eigenvector of S on a connected graph.
    let mut seed_vecs: Vec<Vec<f64>> = Vec::with_capacity(block);
    seed_vecs.push(graph.degrees().iter().map(|d| libm::sqrt(*d)).collect());
    while seed_vecs.len() < block {
        seed_vecs.push((0..n).map(|_| rng.uniform() - 0.5).collect());
    }
    for mut v in seed_vecs {
        if orthonormalize_against(&basis, &mut v, 1e-10) {
            images.push(op.apply(&v));
            basis.push(v);
        }
    }

    let mut best_residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let m = basis.len();
        let mut h = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let x = 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]));
                h[i * m + j] = x;
                h[j * m + i] = x;
            }
        }
        let (theta, y) = symmetric_eigen(&h, m);
        let wanted = block.min(m);
        let mut ritz = Vec::with_capacity(wanted);
        let mut residuals = Vec::with_capacity(wanted);
        let mut res_norms = Vec::with_capacity(wanted);
        for c in 0..wanted {
            let u = combine(&basis, &y, m, c, n);
            let su = combine(&images, &y, m, c, n);
            let mut r = su.clone();
            axpy(-theta[c], &u, &mut r);
            res_norms.push(norm(&r));
            residuals.push(r);
            ritz.push((u, su));
        }
        let worst = res_norms[..k.min(wanted)].iter().cloned().fold(0.0, f64::max);
        best_residual = best_residual.min(worst);
        // A full-dimensional basis makes the Ritz pairs exact.
        if worst <= tol || m == n {
            return Ok(finish(graph, &mut op, &theta[..k], ritz, iteration, k));
        }

        let unconverged: Vec<usize> = (0..wanted).filter(|&c| res_norms[c] > tol).collect();
        if basis.len() + unconverged.len() > max_basis {
            // Restart from the current Ritz block, re-orthonormalized to
            // shed rounding drift.
            let mut fresh_basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
            let mut fresh_images = Vec::with_capacity(max_basis);
            for (mut u, _) in ritz {
                if orthonormalize_against(&fresh_basis, &mut u, 1e-10) {
                    fresh_images.push(op.apply(&u));
                    fresh_basis.push(u);
                }
            }
            basis = fresh_basis;
            images = fresh_images;
        }
        let mut added = 0;
        for c in unconverged {
            let mut r = residuals[c].clone();
            if basis.len() < max_basis && orthonormalize_against(&basis, &mut r, 1e-8) {
                images.push(op.apply(&r));
                basis.push(r);
                added += 1;
            }
        }
        if added == 0 && basis.len() < max_basis {
            let mut v: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
            if orthonormalize_against(&basis, &mut v, 1e-10) {
                images.push(op.apply(&v));
                basis.push(v);
            }
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: best_residual,
    })
}

fn finish(
    graph: &SparseGraph,
    op: &mut SymmetricOp<'_>,
    mu: &[f64],
    ritz: Vec<(Vec<f64>, Vec<f64>)>,
    iterations: usize,
    k: usize,
) -> EigenBasis {
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (c, (u, _)) in ritz.into_iter().take(k).enumerate() {
        let mut v: Vec<f64> = u.iter().zip(&op.inv_sqrt_deg).map(|(x, s)| x * s).collect();
        let d_norm = libm::sqrt(
            v.iter()
                .zip(graph.degrees())
                .map(|(x, d)| d * x * x)
                .sum::<f64>(),
        );
        for x in v.iter_mut() {
            *x /= d_norm;
        }
        let mut pivot = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        if v[pivot] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        let lambda = 1.0 - mu[c];
        let lv = graph.laplacian_apply(&v).expect("length checked");
        let res = libm::sqrt(
            lv.iter()
                .zip(&v)
                .zip(graph.degrees())
                .map(|((l, x), d)| {
                    let r = l - lambda * d * x;
                    r * r
                })
                .sum::<f64>(),
        );
        values.push(lambda);
        vectors.push(v);
        residuals.push(res);
    }
    EigenBasis {
        values,
        vectors,
        residuals,
        iterations,
    }
}
