//! Plain-text graph cache.
//!
//! ```text
//! GSSL-GRAPH-1
//! <n> <scale_k> <neighbor_k> <edges>
//! <i> <j> <w>        (one line per undirected edge, i < j)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use gssl_core::SparseGraph;

use crate::error::{Error, Result};

pub const MAGIC: &str = "GSSL-GRAPH-1";

pub fn write_graph(graph: &SparseGraph, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "{MAGIC}").map_err(io)?;
    writeln!(
        w,
        "{} {} {} {}",
        graph.len(),
        graph.scale_k(),
        graph.neighbor_k(),
        graph.num_edges()
    )
    .map_err(io)?;
    for (i, j, x) in graph.edges() {
        writeln!(w, "{i} {j} {x}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_graph(path: &Path) -> Result<SparseGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let mut line_no = 0u64;
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut next = |line_no: &mut u64| -> Result<Option<String>> {
        *line_no += 1;
        lines.next().transpose().map_err(|e| Error::io(path, e))
    };

    match next(&mut line_no)? {
        Some(l) if l.trim() == MAGIC => {}
        _ => return Err(parse_err(1, format!("not a graph cache (expected '{MAGIC}')"))),
    }
    let header = next(&mut line_no)?.ok_or_else(|| parse_err(2, "missing size line".into()))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(2, format!("bad size line '{header}'")))?;
    let [n, scale_k, neighbor_k, m] = fields[..] else {
        return Err(parse_err(2, format!("size line needs 4 fields, got '{header}'")));
    };

    let mut edges = Vec::with_capacity(m);
    while let Some(l) = next(&mut line_no)? {
        if l.trim().is_empty() {
            continue;
        }
        let mut it = l.split_whitespace();
        let parsed = (|| {
            let i: usize = it.next()?.parse().ok()?;
            let j: usize = it.next()?.parse().ok()?;
            let w: f64 = it.next()?.parse().ok()?;
            it.next().is_none().then_some((i, j, w))
        })();
        edges.push(parsed.ok_or_else(|| parse_err(line_no, format!("bad edge line '{l}'")))?);
    }
    if edges.len() != m {
        return Err(parse_err(
            line_no,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Ok(SparseGraph::from_edges(n, scale_k, neighbor_k, &edges)?)
}
