use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Laplacian, VertexSet};
use crate::partition::split::MedianSplit;

/// The bipartite graph `H = (A₁, B₁, E₁)` of edges crossing a split.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGraph {
    pub a1: VertexSet,
    pub b1: VertexSet,
    /// Crossing edges `(A'-end, B'-end)`, ordered by `(max, min)` endpoint.
    pub e1: Vec<(usize, usize)>,
    /// Number of `E₁` edges at each vertex of `A₁ ∪ B₁`.
    pub degrees: BTreeMap<usize, usize>,
    /// `|y_v - x_m|` for each boundary vertex when the split came from a
    /// valuation; empty for hand-built boundaries.
    pub median_distance: BTreeMap<usize, f64>,
}

impl BoundaryGraph {
    /// Builds `H` from oriented edges `(a, b)`. Duplicates are dropped.
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut e1: Vec<(usize, usize)> = edges.into_iter().collect();
        e1.sort_by_key(|&(a, b)| (a.max(b), a.min(b)));
        e1.dedup();
        let a1: VertexSet = e1.iter().map(|e| e.0).collect();
        let b1: VertexSet = e1.iter().map(|e| e.1).collect();
        if let Some(v) = a1.intersection(&b1).iter().next() {
            return Err(Error::InvalidParameter(format!("vertex {v} on both sides of the boundary")));
        }
        let mut degrees = BTreeMap::new();
        for &(a, b) in &e1 {
            *degrees.entry(a).or_insert(0) += 1;
            *degrees.entry(b).or_insert(0) += 1;
        }
        Ok(Self { a1, b1, e1, degrees, median_distance: BTreeMap::new() })
    }

    pub fn with_median_distance(mut self, y: &[f64], median: f64) -> Self {
        self.median_distance = self.degrees.keys().map(|&v| (v, (y[v] - median).abs())).collect();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.e1.is_empty()
    }

    /// Vertices in order of first appearance in `E₁` (A-end before B-end).
    pub fn appearance_order(&self) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::new();
        let mut order = Vec::with_capacity(self.degrees.len());
        for &(a, b) in &self.e1 {
            for v in [a, b] {
                if seen.insert(v) {
                    order.push(v);
                }
            }
        }
        order
    }

    /// True iff every edge of `E₁` has an endpoint in `s`.
    pub fn is_covered_by(&self, s: &VertexSet) -> bool {
        self.e1.iter().all(|&(a, b)| s.contains(a) || s.contains(b))
    }
}

/// Edges of `L` joining `A'` to `B'`, oriented `(A'-end, B'-end)`.
///
/// Membership comes from the (rebalanced) split, so median-valued vertices
/// moved to `B'` are classified with `B'`.
pub fn cut_edges(l: &Laplacian, y: &[f64], split: &MedianSplit) -> Result<BoundaryGraph> {
    let n = l.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    let mut in_a = vec![false; n];
    for v in split.a_prime.iter() {
        in_a[v] = true;
    }
    let crossing = l
        .edges()
        .filter(|&(i, j)| in_a[i] != in_a[j])
        .map(|(i, j)| if in_a[i] { (i, j) } else { (j, i) });
    let h = BoundaryGraph::new(crossing)?.with_median_distance(y, split.median);
    if h.is_empty() && !split.a_prime.is_empty() && !split.b_prime.is_empty() {
        return Err(Error::EmptyCut);
    }
    Ok(h)
}
