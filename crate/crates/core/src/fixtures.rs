//! Bundled named graphs.

use crate::graph::{Laplacian, SparseSymMatrix};
use crate::io::read_graph;

/// Idit: two triangles joined through a single vertex (7 vertices, 8 edges).
pub const IDIT_SPG: &str = include_str!("../fixtures/idit.spg");

pub fn idit_adjacency() -> SparseSymMatrix {
    read_graph(IDIT_SPG.as_bytes()).expect("bundled fixture parses")
}

pub fn idit_laplacian() -> Laplacian {
    Laplacian::from_adjacency(&idit_adjacency()).expect("bundled fixture is a simple graph")
}
