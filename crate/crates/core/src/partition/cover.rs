//! Vertex covers of the boundary graph `H`.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::VertexSet;
use crate::partition::boundary::BoundaryGraph;

/// How the edge separator is turned into a vertex separator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CoverMode {
    /// Max-degree greedy cover with the smaller-side fallback.
    #[default]
    Greedy,
    /// Minimum cover from a maximum matching.
    Exact,
}

pub fn cover(h: &BoundaryGraph, mode: CoverMode) -> VertexSet {
    match mode {
        CoverMode::Greedy => greedy_cover(h),
        CoverMode::Exact => exact_min_cover(h),
    }
}

/// Greedy cover: repeatedly take the vertex covering the most uncovered
/// edges. Ties go to the vertex whose valuation is closest to the median
/// (when known), then to the earliest vertex in `E₁` order. If `A₁` or `B₁`
/// is smaller than the result, that side is returned instead.
pub fn greedy_cover(h: &BoundaryGraph) -> VertexSet {
    let order = h.appearance_order();
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &v)| (v, r)).collect();
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in h.e1.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut degree = h.degrees.clone();
    let mut covered = vec![false; h.e1.len()];
    let mut uncovered = h.e1.len();
    let distance = |v: usize| h.median_distance.get(&v).copied().unwrap_or(0.0);

    let mut s = Vec::new();
    while uncovered > 0 {
        let pick = order
            .iter()
            .copied()
            .filter(|v| degree[v] > 0)
            .min_by(|&u, &v| {
                degree[&v]
                    .cmp(&degree[&u])
                    .then(distance(u).total_cmp(&distance(v)))
                    .then(rank[&u].cmp(&rank[&v]))
            })
            .expect("an uncovered edge has an endpoint of positive degree");
        s.push(pick);
        for &k in &incident[&pick] {
            if !covered[k] {
                covered[k] = true;
                uncovered -= 1;
                let (a, b) = h.e1[k];
                let other = if a == pick { b } else { a };
                *degree.get_mut(&other).unwrap() -= 1;
            }
        }
        degree.insert(pick, 0);
    }
    let mut s = VertexSet::from_unsorted(s);
    if s.len() > h.a1.len() {
        s = h.a1.clone();
    }
    if s.len() > h.b1.len() {
        s = h.b1.clone();
    }
    s
}

/// Left/right local indexing of `H` used by the matching code.
struct Bipartite {
    left: Vec<usize>,
    right: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Bipartite {
    fn new(h: &BoundaryGraph) -> Self {
        let left: Vec<usize> = h.a1.iter().collect();
        let right: Vec<usize> = h.b1.iter().collect();
        let mut adj = vec![Vec::new(); left.len()];
        for &(a, b) in &h.e1 {
            let li = left.binary_search(&a).expect("A-end in A1");
            let ri = right.binary_search(&b).expect("B-end in B1");
            adj[li].push(ri);
        }
        Self { left, right, adj }
    }

    /// Hopcroft-Karp. Returns `(match_left, match_right)`.
    fn max_matching(&self) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let nl = self.left.len();
        let mut ml: Vec<Option<usize>> = vec![None; nl];
        let mut mr: Vec<Option<usize>> = vec![None; self.right.len()];
        let mut dist = vec![usize::MAX; nl];
        loop {
            // layered BFS from free left vertices
            let mut queue = VecDeque::new();
            for u in 0..nl {
                if ml[u].is_none() {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = usize::MAX;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &r in &self.adj[u] {
                    match mr[r] {
                        None => found = true,
                        Some(w) if dist[w] == usize::MAX => {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                        _ => {}
                    }
                }
            }
            if !found {
                break;
            }
            for u in 0..nl {
                if ml[u].is_none() {
                    self.augment(u, &mut ml, &mut mr, &mut dist);
                }
            }
        }
        (ml, mr)
    }

    fn augment(
        &self,
        u: usize,
        ml: &mut [Option<usize>],
        mr: &mut [Option<usize>],
        dist: &mut [usize],
    ) -> bool {
        for &r in &self.adj[u] {
            let ok = match mr[r] {
                None => true,
                Some(w) => dist[w] == dist[u] + 1 && self.augment(w, ml, mr, dist),
            };
            if ok {
                ml[u] = Some(r);
                mr[r] = Some(u);
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }
}

/// A maximum matching of `H` as `(A₁-vertex, B₁-vertex)` pairs.
pub fn maximum_matching(h: &BoundaryGraph) -> Vec<(usize, usize)> {
    let g = Bipartite::new(h);
    let (ml, _) = g.max_matching();
    ml.iter()
        .enumerate()
        .filter_map(|(u, r)| r.map(|r| (g.left[u], g.right[r])))
        .collect()
}

/// Minimum vertex cover of `H`. The greedy cover is returned when it is as
/// small as a maximum matching (and therefore minimum); otherwise the cover
/// comes from König's construction.
pub fn exact_min_cover(h: &BoundaryGraph) -> VertexSet {
    let g = Bipartite::new(h);
    let (ml, mr) = g.max_matching();
    let matched = ml.iter().flatten().count();
    let greedy = greedy_cover(h);
    if greedy.len() == matched {
        return greedy;
    }
    konig_cover(&g, &ml, &mr)
}

/// With `Z` the vertices reachable from unmatched `A₁` vertices along
/// alternating paths, the cover is `(A₁ \ Z) ∪ (B₁ ∩ Z)`.
fn konig_cover(g: &Bipartite, ml: &[Option<usize>], mr: &[Option<usize>]) -> VertexSet {
    let mut zl = vec![false; g.left.len()];
    let mut zr = vec![false; g.right.len()];
    let mut queue: VecDeque<usize> = (0..g.left.len()).filter(|&u| ml[u].is_none()).collect();
    for &u in &queue {
        zl[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &r in &g.adj[u] {
            if ml[u] == Some(r) || zr[r] {
                continue;
            }
            zr[r] = true;
            if let Some(w) = mr[r] {
                if !zl[w] {
                    zl[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let from_left = (0..g.left.len()).filter(|&u| !zl[u]).map(|u| g.left[u]);
    let from_right = (0..g.right.len()).filter(|&r| zr[r]).map(|r| g.right[r]);
    from_left.chain(from_right).collect()
}
