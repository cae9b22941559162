//! Deterministic test-graph and test-system generators.
//!
//! Random graphs use `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`,
//! whose output stream is fixed by the ChaCha specification and identical on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SparseSymMatrix;

/// An `m x n` five-point grid: `m` rows, `n` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn vertex_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Row-major index of grid point `(i, j)`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    pub fn edge_count(&self) -> usize {
        self.rows * (self.cols - 1) + self.cols * (self.rows - 1)
    }

    fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            Err(Error::EmptyGridSpec)
        } else {
            Ok(())
        }
    }

    fn neighbor_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(self.edge_count());
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j + 1 < self.cols {
                    pairs.push((self.index(i, j), self.index(i, j + 1)));
                }
                if i + 1 < self.rows {
                    pairs.push((self.index(i, j), self.index(i + 1, j)));
                }
            }
        }
        pairs
    }
}

/// Adjacency matrix of the five-point grid graph.
pub fn grid_graph(spec: GridSpec) -> Result<SparseSymMatrix> {
    spec.validate()?;
    SparseSymMatrix::from_edges(spec.vertex_count(), &spec.neighbor_pairs())
}

/// Five-point Dirichlet operator: 4 on the diagonal, -1 per grid neighbor.
pub fn dirichlet_matrix(spec: GridSpec) -> Result<SparseSymMatrix> {
    spec.validate()?;
    let mut upper: Vec<_> = (0..spec.vertex_count()).map(|i| (i, i, 4.0)).collect();
    upper.extend(spec.neighbor_pairs().into_iter().map(|(i, j)| (i, j, -1.0)));
    SparseSymMatrix::from_upper(spec.vertex_count(), &upper)
}

/// Random graph with edges confined to the band `i < j < i + bandwidth`.
///
/// Each in-band pair is kept independently with probability
/// `min(1, avg_degree / (2 * (bandwidth - 1)))`, which makes the expected
/// degree of an interior vertex equal to `avg_degree`. The result may be
/// disconnected.
pub fn random_banded_graph(n: usize, avg_degree: f64, bandwidth: usize, seed: u64) -> Result<SparseSymMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 vertices, got {n}")));
    }
    if bandwidth < 1 {
        return Err(Error::InvalidParameter("bandwidth must be at least 1".into()));
    }
    if !(avg_degree >= 0.0) || !avg_degree.is_finite() {
        return Err(Error::InvalidParameter(format!("average degree {avg_degree} must be finite and >= 0")));
    }
    let partners = 2 * (bandwidth - 1);
    let prob = if partners == 0 { 0.0 } else { (avg_degree / partners as f64).min(1.0) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n.min(i + bandwidth) {
            // Draw for every pair so the stream does not depend on `prob`.
            let u: f64 = rng.random();
            if u < prob {
                edges.push((i, j));
            }
        }
    }
    SparseSymMatrix::from_edges(n, &edges)
}
