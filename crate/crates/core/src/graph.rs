//! kNN graphs with the adaptive Gaussian kernel
//! `W_ij = exp(-|x_i - x_j|^2 / (d_K(x_i) d_K(x_j)))`, where `d_K(x)` is the
//! distance from `x` to its K-th nearest neighbor, and the operator actions
//! of `L = D - W` and `L_rw = D^{-1} W`.
//!
//! Edges come from the `neighbor_k` nearest neighbors of every point and are
//! symmetrized by union. Storage is compressed rows holding both `(i, j)` and
//! `(j, i)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const DEFAULT_SCALE_K: usize = 20;
pub const DEFAULT_NEIGHBOR_K: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The `k` nearest neighbors of point `i` (excluding itself), sorted by
/// distance ascending with ties broken by smaller index. Exact brute force.
pub fn knn_row(data: &Dataset, i: usize, k: usize) -> Vec<Neighbor> {
    let xi = data.row(i);
    let mut cand: Vec<(f64, usize)> = (0..data.len())
        .filter(|&j| j != i)
        .map(|j| (squared_distance(xi, data.row(j)), j))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, cmp);
        cand.truncate(k);
    }
    cand.sort_unstable_by(cmp);
    cand.into_iter()
        .map(|(d2, j)| Neighbor {
            index: j,
            distance: libm::sqrt(d2),
        })
        .collect()
}

fn check_k(data: &Dataset, k: usize, what: &str) -> Result<()> {
    if k == 0 || k >= data.len() {
        return Err(Error::param(alloc::format!(
            "{what} = {k} must satisfy 1 <= k < n = {}",
            data.len()
        )));
    }
    Ok(())
}

/// Exact kNN lists for every point.
pub fn knn_distances(data: &Dataset, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    check_k(data, k, "k")?;
    Ok((0..data.len()).map(|i| knn_row(data, i, k)).collect())
}

/// Symmetric weighted adjacency in compressed-row form plus degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseGraph {
    n: usize,
    scale_k: usize,
    neighbor_k: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

/// kNN graph with the adaptive kernel. Runs an exact kNN search with
/// `max(scale_k, neighbor_k)` neighbors.
pub fn build_graph(data: &Dataset, scale_k: usize, neighbor_k: usize) -> Result<SparseGraph> {
    check_k(data, scale_k, "scale_k")?;
    check_k(data, neighbor_k, "neighbor_k")?;
    let knn = knn_distances(data, scale_k.max(neighbor_k))?;
    SparseGraph::from_knn(&knn, scale_k, neighbor_k)
}

impl SparseGraph {
    /// Assemble the graph from precomputed kNN lists; each list must hold
    /// at least `max(scale_k, neighbor_k)` sorted neighbors.
    pub fn from_knn(knn: &[Vec<Neighbor>], scale_k: usize, neighbor_k: usize) -> Result<Self> {
        let n = knn.len();
        if scale_k == 0 || neighbor_k == 0 {
            return Err(Error::param("scale_k and neighbor_k must be positive"));
        }
        let need = scale_k.max(neighbor_k);
        if let Some(i) = knn.iter().position(|row| row.len() < need) {
            return Err(Error::param(alloc::format!(
                "kNN list of point {i} has {} entries, need {need}",
                knn[i].len()
            )));
        }
        let bandwidth: Vec<f64> = knn.iter().map(|row| row[scale_k - 1].distance).collect();
        if let Some(index) = bandwidth.iter().position(|&b| b <= 0.0) {
            return Err(Error::DuplicatePoint { index, scale_k });
        }
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * neighbor_k);
        for (i, row) in knn.iter().enumerate() {
            for nb in &row[..neighbor_k] {
                let j = nb.index;
                let w = libm::exp(-(nb.distance * nb.distance) / (bandwidth[i] * bandwidth[j]));
                edges.push((i.min(j), i.max(j), w));
            }
        }
        edges.sort_unstable_by_key(|e| (e.0, e.1));
        edges.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        // Underflowed weights carry no information; W_ij = 0 means no edge.
        edges.retain(|e| e.2 > 0.0);
        Self::from_edges(n, scale_k, neighbor_k, &edges)
    }

    /// Build from undirected edge triples `(i, j, w)` with `i != j`, each
    /// unordered pair listed once, `0 < w <= 1`.
    pub fn from_edges(
        n: usize,
        scale_k: usize,
        neighbor_k: usize,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("graph needs at least 2 nodes"));
        }
        let mut directed: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * edges.len());
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::input(alloc::format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::input(alloc::format!("self-loop at node {i}")));
            }
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::input(alloc::format!(
                    "edge ({i}, {j}) weight {w} outside (0, 1]"
                )));
            }
            directed.push((i, j, w));
            directed.push((j, i, w));
        }
        directed.sort_unstable_by_key(|e| (e.0, e.1));
        if let Some(pair) = directed.windows(2).find(|p| p[0].0 == p[1].0 && p[0].1 == p[1].1) {
            return Err(Error::input(alloc::format!(
                "edge ({}, {}) listed twice",
                pair[0].0, pair[0].1
            )));
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in &directed {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols: Vec<usize> = directed.iter().map(|e| e.1).collect();
        let weights: Vec<f64> = directed.iter().map(|e| e.2).collect();
        let degrees: Vec<f64> = (0..n)
            .map(|i| weights[row_ptr[i]..row_ptr[i + 1]].iter().sum())
            .collect();
        if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::input(alloc::format!("node {i} has no neighbors")));
        }
        Ok(Self {
            n,
            scale_k,
            neighbor_k,
            row_ptr,
            cols,
            weights,
            degrees,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scale_k(&self) -> usize {
        self.scale_k
    }

    pub fn neighbor_k(&self) -> usize {
        self.neighbor_k
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.cols.len() / 2
    }

    /// `(j, W_ij)` for every neighbor `j` of `i`, ascending in `j`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    /// Each undirected edge once as `(i, j, w)` with `i < j`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn row_dot(&self, i: usize, v: &[f64]) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&j, &w)| w * v[j])
            .sum()
    }

    /// `out = W v`. Panics on length mismatch.
    pub fn adjacency_apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row_dot(i, v);
        }
    }

    /// `out = D^{-1} W v`. Panics on length mismatch.
    pub fn random_walk_apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row_dot(i, v) / self.degrees[i];
        }
    }

    /// `out = (D - W) v`. Panics on length mismatch.
    pub fn laplacian_apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.degrees[i] * v[i] - self.row_dot(i, v);
        }
    }

    pub fn laplacian_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut out = vec![0.0; self.n];
        self.laplacian_apply_into(v, &mut out);
        Ok(out)
    }

    pub fn random_walk_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let mut out = vec![0.0; self.n];
        self.random_walk_apply_into(v, &mut out);
        Ok(out)
    }

    /// `v^T L v = sum over undirected edges of W_ij (v_i - v_j)^2`, any `v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        self.check_len(v)?;
        Ok(self
            .edges()
            .map(|(i, j, w)| w * (v[i] - v[j]) * (v[i] - v[j]))
            .sum())
    }

    /// Total variation `v^T L v` of a unit-norm vector.
    pub fn total_variation(&self, v: &[f64]) -> Result<f64> {
        self.check_len(v)?;
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::param(alloc::format!(
                "total_variation expects a unit vector, got norm {norm}"
            )));
        }
        self.quadratic_form(v)
    }

    /// Connected component id per node (ids in order of first appearance)
    /// and the number of components.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for (v, _) in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }
}
