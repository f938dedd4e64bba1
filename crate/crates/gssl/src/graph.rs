use gssl_core::graph::knn_row;
use gssl_core::{Dataset, Error as CoreError, SparseGraph};
use rayon::prelude::*;

use crate::error::Result;

/// Same graph as [`gssl_core::graph::build_graph`], with the kNN search
/// spread over the current rayon pool.
pub fn build_graph_parallel(data: &Dataset, scale_k: usize, neighbor_k: usize) -> Result<SparseGraph> {
    let n = data.len();
    for (what, k) in [("scale_k", scale_k), ("neighbor_k", neighbor_k)] {
        if k == 0 || k >= n {
            return Err(CoreError::InvalidParameter(format!("{what} = {k} must satisfy 1 <= k < n = {n}")).into());
        }
    }
    let k = scale_k.max(neighbor_k);
    let knn: Vec<_> = (0..n).into_par_iter().map(|i| knn_row(data, i, k)).collect();
    Ok(SparseGraph::from_knn(&knn, scale_k, neighbor_k)?)
}
