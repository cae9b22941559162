//! Recursive spectral dissection into a separator tree and the nested
//! dissection ordering it induces.

use std::fmt::Write;

use crate::eigen::{fiedler, EigenOptions};
use crate::error::{Error, Result};
use crate::graph::{Laplacian, SparseSymMatrix, VertexSet};
use crate::partition::{partition_by_valuation, PartitionOptions};

/// Old-to-new index map of an induced subgraph. New index `k` is the `k`-th
/// smallest kept vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    keep: VertexSet,
}

impl IndexMap {
    pub fn to_new(&self, old: usize) -> Option<usize> {
        self.keep.as_slice().binary_search(&old).ok()
    }

    pub fn to_old(&self, new: usize) -> usize {
        self.keep.as_slice()[new]
    }

    pub fn kept(&self) -> &VertexSet {
        &self.keep
    }

    pub fn len(&self) -> usize {
        self.keep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keep.is_empty()
    }
}

/// Laplacian of the subgraph induced by `keep`, degrees recomputed.
pub fn induced_laplacian(l: &Laplacian, keep: &VertexSet) -> Result<(Laplacian, IndexMap)> {
    if keep.is_empty() {
        return Err(Error::EmptySet);
    }
    keep.check_bounds(l.n())?;
    let map = IndexMap { keep: keep.clone() };
    let mut edges = Vec::new();
    for (new_i, old_i) in keep.iter().enumerate() {
        for old_j in l.neighbors(old_i).filter(|&j| j > old_i) {
            if let Some(new_j) = map.to_new(old_j) {
                edges.push((new_i, new_j));
            }
        }
    }
    let adj = SparseSymMatrix::from_edges(keep.len(), &edges)?;
    Ok((Laplacian::from_adjacency(&adj)?, map))
}

/// Binary tree of separators over original vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparatorTree {
    Leaf(VertexSet),
    Internal { separator: VertexSet, left: Box<SeparatorTree>, right: Box<SeparatorTree> },
}

impl SeparatorTree {
    pub fn internal(separator: VertexSet, left: SeparatorTree, right: SeparatorTree) -> Self {
        Self::Internal { separator, left: Box::new(left), right: Box::new(right) }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Self::Leaf(v) => v.len(),
            Self::Internal { separator, left, right } => {
                separator.len() + left.vertex_count() + right.vertex_count()
            }
        }
    }

    /// All vertices in the subtree.
    pub fn vertices(&self) -> VertexSet {
        flatten(self).0.into_iter().collect()
    }

    /// Number of internal levels on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Self::Leaf(_) => 0,
            Self::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn max_leaf(&self) -> usize {
        match self {
            Self::Leaf(v) => v.len(),
            Self::Internal { left, right, .. } => left.max_leaf().max(right.max_leaf()),
        }
    }

    /// Checks the tree against `l`: the vertex sets partition `0..n`, leaves
    /// hold at most `atom_size` vertices, and at every internal node no edge
    /// joins the left subtree to the right one.
    pub fn validate(&self, l: &Laplacian, atom_size: Option<usize>) -> Result<()> {
        let order = flatten(self);
        Permutation::new(order.0.clone()).and_then(|p| {
            if p.len() == l.n() {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: l.n(), found: p.len() })
            }
        })?;
        if let Some(atom) = atom_size {
            if self.max_leaf() > atom {
                return Err(Error::InvalidParameter(format!(
                    "leaf of size {} exceeds atom size {atom}",
                    self.max_leaf()
                )));
            }
        }
        self.check_separators(l).map(|_| ())
    }

    fn check_separators(&self, l: &Laplacian) -> Result<VertexSet> {
        match self {
            Self::Leaf(v) => Ok(v.clone()),
            Self::Internal { separator, left, right } => {
                let a = left.check_separators(l)?;
                let b = right.check_separators(l)?;
                let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
                for u in small.iter() {
                    if let Some(v) = l.neighbors(u).find(|&v| large.contains(v)) {
                        return Err(Error::NotASeparator { a: u, b: v });
                    }
                }
                Ok(a.union(&b).union(separator))
            }
        }
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let join = |s: &VertexSet| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Self::Leaf(v) => writeln!(out, "{pad}leaf [{}]", join(v)).unwrap(),
            Self::Internal { separator, left, right } => {
                writeln!(out, "{pad}sep [{}]", join(separator)).unwrap();
                left.render_into(out, depth + 1);
                right.render_into(out, depth + 1);
            }
        }
    }
}

/// A vertex ordering: position `k` holds the vertex eliminated `k`-th.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Checks that `order` is a bijection on `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("vertex {v} appears twice in permutation")));
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
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

    /// `inverse()[v]` is the position of vertex `v`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        inv
    }
}

/// Left subtree, then right subtree, then the separator; leaves ascending.
/// The result is an ordering of the tree's vertices, not necessarily a
/// bijection on `0..n` for a subtree.
pub fn flatten(tree: &SeparatorTree) -> Permutation {
    let mut out = Vec::with_capacity(tree.vertex_count());
    flatten_into(tree, &mut out);
    Permutation(out)
}

fn flatten_into(tree: &SeparatorTree, out: &mut Vec<usize>) {
    match tree {
        SeparatorTree::Leaf(v) => out.extend(v.iter()),
        SeparatorTree::Internal { separator, left, right } => {
            flatten_into(left, out);
            flatten_into(right, out);
            out.extend(separator.iter());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissectOptions {
    /// Banks of at most this many vertices become leaves.
    pub atom_size: usize,
    pub eigen: EigenOptions,
    pub partition: PartitionOptions,
    /// Stop splitting below this many levels; `None` recurses to atoms.
    pub max_depth: Option<usize>,
}

impl Default for DissectOptions {
    fn default() -> Self {
        Self {
            atom_size: 3,
            eigen: EigenOptions::default(),
            partition: PartitionOptions::default(),
            max_depth: None,
        }
    }
}

/// Dissects `l` recursively and returns the tree with its flattened order.
///
/// Each node computes a spectral partition of its induced subgraph and
/// recurses on both banks; the two recursions run in parallel. Disconnected
/// subgraphs are split into components, chained under empty separators.
/// Errors carry the path of the failing node, e.g. `root/A/B`.
pub fn recursive_decompose(l: &Laplacian, opts: &DissectOptions) -> Result<(SeparatorTree, Permutation)> {
    if opts.atom_size == 0 {
        return Err(Error::InvalidParameter("atom size must be at least 1".into()));
    }
    if l.n() == 0 {
        return Err(Error::EmptySet);
    }
    let tree = decompose(l, &VertexSet::range(l.n()), opts, 0, "root")?;
    let perm = flatten(&tree);
    Ok((tree, perm))
}

fn wrap(path: &str, e: Error) -> Error {
    match e {
        e @ Error::InDissection { .. } => e,
        e => Error::InDissection { path: path.to_string(), source: Box::new(e) },
    }
}

/// `ids[k]` is the original index of local vertex `k`.
fn decompose(l: &Laplacian, ids: &VertexSet, opts: &DissectOptions, depth: usize, path: &str) -> Result<SeparatorTree> {
    let to_global = |local: &VertexSet| -> VertexSet { local.iter().map(|k| ids.as_slice()[k]).collect() };
    if l.n() <= opts.atom_size || opts.max_depth.is_some_and(|d| depth >= d) {
        return Ok(SeparatorTree::Leaf(ids.clone()));
    }

    let components = l.components();
    if components.len() > 1 {
        let mut subtrees = Vec::with_capacity(components.len());
        for (c, comp) in components.iter().enumerate() {
            let sub_path = format!("{path}/c{c}");
            subtrees.push(child(l, comp, ids, opts, depth, &sub_path)?);
        }
        let mut tree = subtrees.pop().expect("at least two components");
        while let Some(prev) = subtrees.pop() {
            tree = SeparatorTree::internal(VertexSet::new(), prev, tree);
        }
        return Ok(tree);
    }

    let f = fiedler(l, &opts.eigen).map_err(|e| wrap(path, e))?;
    let p = partition_by_valuation(l, &f.y, f.lambda2, &opts.partition).map_err(|e| wrap(path, e))?;
    let (a_path, b_path) = (format!("{path}/A"), format!("{path}/B"));
    let (left, right) = rayon::join(
        || child(l, &p.a, ids, opts, depth + 1, &a_path),
        || child(l, &p.b, ids, opts, depth + 1, &b_path),
    );
    Ok(SeparatorTree::internal(to_global(&p.s), left?, right?))
}

/// Recurses on the subgraph induced by the local set `keep`.
fn child(
    l: &Laplacian,
    keep: &VertexSet,
    ids: &VertexSet,
    opts: &DissectOptions,
    depth: usize,
    path: &str,
) -> Result<SeparatorTree> {
    let global: VertexSet = keep.iter().map(|k| ids.as_slice()[k]).collect();
    if keep.len() <= opts.atom_size {
        return Ok(SeparatorTree::Leaf(global));
    }
    let (sub, _) = induced_laplacian(l, keep).map_err(|e| wrap(path, e))?;
    decompose(&sub, &global, opts, depth, path)
}
