//! Graph-based semi-supervised learning.
//!
//! Builds adaptive-kernel kNN graphs and runs label propagation, a
//! leading-eigenvector classifier and AUC-guided spectral optimization on
//! them. The crate is `no_std` and only needs an allocator; file formats,
//! the benchmark harness and the command line live in the `gssl` crate.
//!
//! ```
//! use gssl_core::{data, graph, algorithms, metrics};
//!
//! let ds = data::gen_ring_of_gaussians(400, 1).unwrap();
//! let g = graph::build_graph(&ds, 10, 15).unwrap();
//! let labels = data::sample_labeled(&ds, data::LabelBudget::new(40, 7)).unwrap();
//! let out = algorithms::auc_spec_binary(&g, &labels, &Default::default()).unwrap();
//! let eval = labels.unlabeled();
//! let auc = metrics::exact_auc_on(&out.scores, ds.labels().unwrap(), &eval).unwrap();
//! assert!(auc > 0.5);
//! ```

#![no_std]

extern crate alloc;

pub mod algorithms;
pub mod data;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod labels;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod spectral;

pub use dataset::Dataset;
pub use error::{Error, ErrorKind, Result};
pub use graph::SparseGraph;
pub use labels::LabelSet;
