#![allow(dead_code)]

use gssl_core::graph::build_graph;
use gssl_core::rng::{SeededRng, Stream};
use gssl_core::{Dataset, SparseGraph};

pub fn random_dataset(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = SeededRng::new(seed, Stream::Generate);
    let feats = (0..n * d).map(|_| rng.normal()).collect();
    Dataset::new("rand", n, d, feats, None).unwrap()
}

/// kNN graph on Gaussian points; connected in practice for these sizes.
pub fn random_graph(n: usize, seed: u64) -> SparseGraph {
    let data = random_dataset(n, 2 + (seed as usize % 3), seed);
    let scale_k = 1 + (seed as usize % 4).min(n - 2);
    let neighbor_k = (3 + seed as usize % 5).min(n - 1);
    build_graph(&data, scale_k, neighbor_k).unwrap()
}

pub fn random_connected_graph(n: usize, seed: u64) -> SparseGraph {
    let mut s = seed;
    loop {
        let g = random_graph(n, s);
        if g.connected_components().1 == 1 {
            return g;
        }
        s += 1000;
    }
}

/// Dense `W` as row-major n x n.
pub fn dense_adjacency(g: &SparseGraph) -> Vec<f64> {
    let n = g.len();
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for (j, x) in g.neighbors(i) {
            w[i * n + j] = x;
        }
    }
    w
}

pub fn random_vec(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    (0..n).map(|_| rng.normal()).collect()
}

pub fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

pub fn cliques(sizes: &[usize], weight: f64) -> SparseGraph {
    let mut edges = Vec::new();
    let mut off = 0;
    for &s in sizes {
        for i in 0..s {
            for j in (i + 1)..s {
                edges.push((off + i, off + j, weight));
            }
        }
        off += s;
    }
    SparseGraph::from_edges(off, 1, 1, &edges).unwrap()
}
