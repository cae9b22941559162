//! Three-way vertex partitions `N = A ∪ B ∪ S` from a Fiedler valuation.

mod boundary;
mod cover;
mod report;
mod split;

pub use boundary::{cut_edges, BoundaryGraph};
pub use cover::{cover, exact_min_cover, greedy_cover, maximum_matching, CoverMode};
pub use report::{format_significant, report, DEFAULT_PRINT_TOL};
pub use split::{median_split, median_split_with_tol, MedianSplit};

use crate::eigen::{fiedler, EigenOptions};
use crate::error::{Error, Result};
use crate::graph::{Laplacian, VertexSet};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartitionOptions {
    pub cover: CoverMode,
    /// Relative tolerance for treating a valuation as equal to the median.
    pub tie_tol: f64,
}

impl PartitionOptions {
    pub fn with_cover(cover: CoverMode) -> Self {
        Self { cover, ..Self::default() }
    }
}

/// Banks `a`, `b` and the separator `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub s: VertexSet,
    pub boundary: BoundaryGraph,
    pub lambda2: f64,
}

impl Partition {
    /// `|A'|` and `|B'|`, the halves before the separator was removed.
    pub fn split_sizes(&self) -> (usize, usize) {
        let sa = self.s.intersection(&self.boundary.a1).len();
        let sb = self.s.len() - sa;
        (self.a.len() + sa, self.b.len() + sb)
    }

    /// Checks disjointness, coverage of `0..n` and that no edge joins `a` to `b`.
    pub fn validate(&self, l: &Laplacian) -> Result<()> {
        let n = l.n();
        if !self.a.is_disjoint(&self.b) || !self.a.is_disjoint(&self.s) || !self.b.is_disjoint(&self.s) {
            return Err(Error::InvalidParameter("partition sets overlap".into()));
        }
        let total = self.a.len() + self.b.len() + self.s.len();
        if total != n {
            return Err(Error::DimensionMismatch { expected: n, found: total });
        }
        for set in [&self.a, &self.b, &self.s] {
            set.check_bounds(n)?;
        }
        for a in self.a.iter() {
            if let Some(b) = l.neighbors(a).find(|&b| self.b.contains(b)) {
                return Err(Error::NotASeparator { a, b });
            }
        }
        Ok(())
    }
}

/// Partitions by a given valuation `y`: median split, crossing edges, cover.
/// Banks may come out empty; see [`spectral_partition`] for the checked form.
pub fn partition_by_valuation(l: &Laplacian, y: &[f64], lambda2: f64, opts: &PartitionOptions) -> Result<Partition> {
    let split = median_split_with_tol(y, opts.tie_tol)?;
    let boundary = cut_edges(l, y, &split)?;
    let s = cover(&boundary, opts.cover);
    Ok(Partition {
        a: split.a_prime.difference(&s),
        b: split.b_prime.difference(&s),
        s,
        boundary,
        lambda2,
    })
}

/// Fiedler vector, median split, crossing edges and cover, end to end.
pub fn spectral_partition(l: &Laplacian, eigen: &EigenOptions, cover: CoverMode) -> Result<Partition> {
    spectral_partition_with(l, eigen, &PartitionOptions::with_cover(cover))
}

pub fn spectral_partition_with(l: &Laplacian, eigen: &EigenOptions, opts: &PartitionOptions) -> Result<Partition> {
    if l.n() < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 vertices, got {}", l.n())));
    }
    let f = fiedler(l, eigen)?;
    let p = partition_by_valuation(l, &f.y, f.lambda2, opts)?;
    if p.a.is_empty() {
        return Err(Error::DegeneratePartition("A"));
    }
    if p.b.is_empty() {
        return Err(Error::DegeneratePartition("B"));
    }
    Ok(p)
}
