//! Row-compressed symmetric sparse matrices, graph Laplacians and vertex sets.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Row-compressed sparse matrix intended to hold symmetric data.
///
/// Rows are stored with strictly increasing column indices. Most
/// constructors enforce symmetry; [`SparseSymMatrix::from_triplets`] does
/// not, so that [`check_symmetry`] has something to reject.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds a matrix from entries stored as given. Entries must be in range
    /// and not repeated; symmetry is not checked.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(i, j, _) in &t {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange { vertex: i.max(j), n });
            }
        }
        t.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = t.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::InvalidAdjacency(format!(
                "duplicate entry ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in &t {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            row_ptr,
            cols: t.iter().map(|e| e.1).collect(),
            vals: t.iter().map(|e| e.2).collect(),
        })
    }

    /// Builds a symmetric matrix from its upper triangle (`i <= j`); each
    /// off-diagonal entry is mirrored.
    pub fn from_upper(n: usize, upper: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t = Vec::with_capacity(2 * upper.len());
        for &(i, j, v) in upper {
            if i > j {
                return Err(Error::InvalidAdjacency(format!(
                    "entry ({i}, {j}) is below the diagonal"
                )));
            }
            t.push((i, j, v));
            if i != j {
                t.push((j, i, v));
            }
        }
        Self::from_triplets(n, &t)
    }

    /// Unit-weight adjacency matrix of an undirected simple graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut upper = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidAdjacency(format!("self-loop at {u}")));
            }
            upper.push((u.min(v), u.max(v), 1.0));
        }
        Self::from_upper(n, &upper)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total stored entries, counting both triangles and the diagonal.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .binary_search(&j)
            .ok()
            .map(|k| self.vals[r.start + k])
    }

    /// Off-diagonal column indices of row `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).map(|(j, _)| j).filter(move |&j| j != i)
    }

    /// Upper-triangle entries `(i, j, v)` with `i <= j`, in ascending order.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).filter(move |&(j, _)| j >= i).map(move |(j, v)| (i, j, v)))
    }

    /// Undirected edges `(i, j)`, `i < j`, of the off-diagonal pattern.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.upper_entries().filter(|&(i, j, _)| i < j).map(|(i, j, _)| (i, j))
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y);
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    /// Returns `P A P^T`, where `order[k]` is the old index placed at `k`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: order.len() });
        }
        let mut new_of_old = vec![usize::MAX; self.n];
        for (k, &old) in order.iter().enumerate() {
            if old >= self.n || new_of_old[old] != usize::MAX {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
            new_of_old[old] = k;
        }
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                t.push((new_of_old[i], new_of_old[j], v));
            }
        }
        Self::from_triplets(self.n, &t)
    }

    /// Returns `self + shift * I`, inserting diagonal entries as needed.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut t: Vec<(usize, usize, f64)> = Vec::with_capacity(self.nnz() + self.n);
        for i in 0..self.n {
            let mut has_diag = false;
            for (j, v) in self.row(i) {
                if j == i {
                    has_diag = true;
                    t.push((i, j, v + shift));
                } else {
                    t.push((i, j, v));
                }
            }
            if !has_diag {
                t.push((i, i, shift));
            }
        }
        Self::from_triplets(self.n, &t).expect("shift preserves a valid pattern")
    }
}

/// Structural and numerical symmetry by a full scan.
pub fn check_symmetry(m: &SparseSymMatrix) -> bool {
    first_asymmetry(m).is_none()
}

fn first_asymmetry(m: &SparseSymMatrix) -> Option<(usize, usize)> {
    (0..m.n()).find_map(|i| {
        m.row(i)
            .find(|&(j, v)| m.get(j, i) != Some(v))
            .map(|(j, _)| (i, j))
    })
}

/// True iff every row sums to zero within `n * eps`.
pub fn check_zero_row_sums(m: &SparseSymMatrix) -> bool {
    let tol = m.n() as f64 * f64::EPSILON;
    (0..m.n()).all(|i| m.row(i).map(|(_, v)| v).sum::<f64>().abs() <= tol)
}

/// Graph Laplacian `L = D - M` of a simple undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    matrix: SparseSymMatrix,
    max_degree: usize,
}

impl Laplacian {
    /// Builds `L = D - M` from a unit-weight adjacency matrix with an empty
    /// diagonal.
    pub fn from_adjacency(adjacency: &SparseSymMatrix) -> Result<Self> {
        if let Some((row, col)) = first_asymmetry(adjacency) {
            return Err(Error::NotSymmetric { row, col });
        }
        let n = adjacency.n();
        let mut t = Vec::with_capacity(adjacency.nnz() + n);
        let mut max_degree = 0;
        for i in 0..n {
            let mut degree = 0usize;
            for (j, v) in adjacency.row(i) {
                if j == i {
                    return Err(Error::InvalidAdjacency(format!("nonzero diagonal at {i}")));
                }
                if v != 1.0 {
                    return Err(Error::InvalidAdjacency(format!(
                        "entry ({i}, {j}) = {v}, expected 1"
                    )));
                }
                t.push((i, j, -1.0));
                degree += 1;
            }
            t.push((i, i, degree as f64));
            max_degree = max_degree.max(degree);
        }
        Ok(Self { matrix: SparseSymMatrix::from_triplets(n, &t)?, max_degree })
    }

    /// Validates an already assembled Laplacian.
    pub fn from_matrix(matrix: SparseSymMatrix) -> Result<Self> {
        if let Some((row, col)) = first_asymmetry(&matrix) {
            return Err(Error::NotSymmetric { row, col });
        }
        let mut max_degree = 0;
        for i in 0..matrix.n() {
            let mut degree = 0usize;
            let mut diag = 0.0;
            for (j, v) in matrix.row(i) {
                if j == i {
                    diag = v;
                } else if v != -1.0 {
                    return Err(Error::InvalidLaplacian(format!("off-diagonal ({i}, {j}) = {v}")));
                } else {
                    degree += 1;
                }
            }
            if diag != degree as f64 {
                return Err(Error::InvalidLaplacian(format!(
                    "diagonal {diag} at row {i} does not equal degree {degree}"
                )));
            }
            max_degree = max_degree.max(degree);
        }
        Ok(Self { matrix, max_degree })
    }

    pub fn matrix(&self) -> &SparseSymMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, i: usize) -> usize {
        self.matrix.row_len(i) - 1
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.matrix.neighbors(i)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.matrix.edges()
    }

    pub fn edge_count(&self) -> usize {
        (self.matrix.nnz() - self.n()) / 2
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.apply(x)
    }

    /// The adjacency matrix `M = D - L`.
    pub fn adjacency(&self) -> SparseSymMatrix {
        let upper: Vec<_> = self.edges().map(|(i, j)| (i, j, 1.0)).collect();
        SparseSymMatrix::from_upper(self.n(), &upper).expect("edges of a valid Laplacian")
    }

    /// Gershgorin enclosure `[0, 2Δ]` of the spectrum.
    pub fn gershgorin_interval(&self) -> (f64, f64) {
        gershgorin_interval(self)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(members));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }
}

pub fn gershgorin_interval(l: &Laplacian) -> (f64, f64) {
    (0.0, 2.0 * l.max_degree() as f64)
}

/// Sorted set of distinct vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Sorts and removes duplicates.
    pub fn from_unsorted(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn range(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        Self::from_unsorted(self.iter().chain(other.iter()).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Checks all members are below `n`.
    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn idit_laplacian_matches_printed_matrix() {
        let l = fixtures::idit_laplacian();
        let expected = [
            [2., -1., -1., 0., 0., 0., 0.],
            [-1., 2., -1., 0., 0., 0., 0.],
            [-1., -1., 3., -1., 0., 0., 0.],
            [0., 0., -1., 2., -1., 0., 0.],
            [0., 0., 0., -1., 3., -1., -1.],
            [0., 0., 0., 0., -1., 2., -1.],
            [0., 0., 0., 0., -1., -1., 2.],
        ];
        let dense = l.matrix().to_dense();
        for i in 0..7 {
            assert_eq!(dense[i], expected[i].to_vec(), "row {i}");
        }
        assert_eq!(l.max_degree(), 3);
        assert_eq!(l.edge_count(), 8);
    }

    #[test]
    fn single_edge_laplacian() {
        let adj = SparseSymMatrix::from_edges(2, &[(0, 1)]).unwrap();
        let l = Laplacian::from_adjacency(&adj).unwrap();
        assert_eq!(l.matrix().to_dense(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert_eq!(gershgorin_interval(&l), (0.0, 2.0));
    }

    #[test]
    fn build_rejects_bad_adjacency() {
        let asym = SparseSymMatrix::from_triplets(2, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(Laplacian::from_adjacency(&asym), Err(Error::NotSymmetric { .. })));
        let diag = SparseSymMatrix::from_upper(2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert!(matches!(Laplacian::from_adjacency(&diag), Err(Error::InvalidAdjacency(_))));
        let weighted = SparseSymMatrix::from_upper(2, &[(0, 1, 2.0)]).unwrap();
        assert!(matches!(Laplacian::from_adjacency(&weighted), Err(Error::InvalidAdjacency(_))));
    }

    #[test]
    fn symmetry_scan() {
        assert!(check_symmetry(fixtures::idit_laplacian().matrix()));
        let broken = SparseSymMatrix::from_triplets(2, &[(0, 1, -1.0)]).unwrap();
        assert!(!check_symmetry(&broken));
        let unequal = SparseSymMatrix::from_triplets(2, &[(0, 1, -1.0), (1, 0, -2.0)]).unwrap();
        assert!(!check_symmetry(&unequal));
    }

    #[test]
    fn perturbed_row_sum_detected() {
        let l = fixtures::idit_laplacian();
        assert!(check_zero_row_sums(l.matrix()));
        let mut t: Vec<_> = (0..7)
            .flat_map(|i| l.matrix().row(i).map(move |(j, v)| (i, j, v)))
            .collect();
        t[0].2 = 3.0;
        let bad = SparseSymMatrix::from_triplets(7, &t).unwrap();
        assert!(!check_zero_row_sums(&bad));
        assert!(matches!(Laplacian::from_matrix(bad), Err(Error::InvalidLaplacian(_))));
    }

    #[test]
    fn components_of_two_edges() {
        let adj = SparseSymMatrix::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let l = Laplacian::from_adjacency(&adj).unwrap();
        let comps = l.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].as_slice(), &[2, 3]);
        assert!(!l.is_connected());
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_unsorted(vec![5, 1, 3, 1]);
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        let b: VertexSet = [3, 4].into_iter().collect();
        assert_eq!(a.difference(&b).as_slice(), &[1, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[3]);
        assert!(a.check_bounds(6).is_ok());
        assert!(a.check_bounds(5).is_err());
    }

    #[test]
    fn permuted_matrix() {
        let adj = SparseSymMatrix::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = adj.permuted(&[1, 0, 2]).unwrap();
        // new 0 = old 1 (the middle vertex)
        assert_eq!(p.neighbors(0).collect::<Vec<_>>(), vec![1, 2]);
        assert!(adj.permuted(&[0, 0, 1]).is_err());
    }
}
