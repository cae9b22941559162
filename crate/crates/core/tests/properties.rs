use std::collections::VecDeque;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_dissect::dissect::{recursive_decompose, DissectOptions, SeparatorTree};
use spectral_dissect::eigen::{dense_spectrum, fiedler, EigenOptions};
use spectral_dissect::generators::{grid_graph, random_banded_graph, GridSpec};
use spectral_dissect::graph::check_symmetry;
use spectral_dissect::partition::{
    exact_min_cover, greedy_cover, maximum_matching, median_split, spectral_partition, BoundaryGraph, CoverMode,
};
use spectral_dissect::{fixtures, Laplacian, SparseSymMatrix, VertexSet};

fn laplacian(adj: &SparseSymMatrix) -> Laplacian {
    Laplacian::from_adjacency(adj).unwrap()
}

/// Random banded graph made connected by adding the path `0-1-...-(n-1)`.
fn connected_banded(n: usize, q: usize, seed: u64) -> Laplacian {
    let g = random_banded_graph(n, 4.0, q, seed).unwrap();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.extend((0..n - 1).map(|i| (i, i + 1)));
    edges.sort_unstable();
    edges.dedup();
    laplacian(&SparseSymMatrix::from_edges(n, &edges).unwrap())
}

/// Vertices reachable from `start` without entering `blocked`.
fn reachable(l: &Laplacian, start: &VertexSet, blocked: &VertexSet) -> Vec<bool> {
    let mut seen = vec![false; l.n()];
    let mut queue: VecDeque<usize> = start.iter().collect();
    for v in start.iter() {
        seen[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for w in l.neighbors(u) {
            if !seen[w] && !blocked.contains(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

fn induces_connected(l: &Laplacian, set: &VertexSet) -> bool {
    let Some(first) = set.iter().next() else { return true };
    let outside: VertexSet = (0..l.n()).filter(|&v| !set.contains(v)).collect();
    let seen = reachable(l, &VertexSet::from_unsorted(vec![first]), &outside);
    set.iter().all(|v| seen[v])
}

fn quadratic_form(l: &Laplacian, x: &[f64]) -> f64 {
    l.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_annihilates_ones(n in 2usize..120, q in 1usize..8, seed in any::<u64>()) {
        let l = laplacian(&random_banded_graph(n, 4.0, q, seed).unwrap());
        prop_assert!(l.apply(&vec![1.0; n]).iter().all(|&v| v == 0.0));
        prop_assert!(check_symmetry(l.matrix()));
    }

    #[test]
    fn quadratic_form_is_sum_over_edges(n in 2usize..80, q in 2usize..8, seed in any::<u64>()) {
        let l = laplacian(&random_banded_graph(n, 4.0, q, seed).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let by_edges: f64 = l.edges().map(|(i, j)| (x[i] - x[j]).powi(2)).sum();
        let q_form = quadratic_form(&l, &x);
        prop_assert!((q_form - by_edges).abs() <= n as f64 * f64::EPSILON * by_edges.max(1.0) * 8.0);
    }

    #[test]
    fn spectrum_lies_in_gershgorin_interval(n in 2usize..60, q in 1usize..6, seed in any::<u64>()) {
        let l = laplacian(&random_banded_graph(n, 4.0, q, seed).unwrap());
        let (lo, hi) = l.gershgorin_interval();
        let eps = 1e-10 * hi.max(1.0);
        for ev in dense_spectrum(l.matrix()).unwrap() {
            prop_assert!(ev >= lo - eps && ev <= hi + eps);
        }
    }

    #[test]
    fn random_graphs_are_reproducible(n in 2usize..200, q in 1usize..10, seed in any::<u64>()) {
        let a = random_banded_graph(n, 3.0, q, seed).unwrap();
        let b = random_banded_graph(n, 3.0, q, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn median_split_balance_and_scale(y in proptest::collection::vec(-3i32..3, 2..60), c in 0.1f64..50.0) {
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let s = median_split(&y).unwrap();
        prop_assert!((s.a_prime.len() as i64 - s.b_prime.len() as i64).abs() <= 1);
        let scaled: Vec<f64> = y.iter().map(|v| v * c).collect();
        prop_assert_eq!(median_split(&scaled).unwrap().a_prime, s.a_prime);
    }
}

#[test]
fn laplacian_is_positive_semidefinite() {
    let l = laplacian(&grid_graph(GridSpec::new(7, 9)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let x: Vec<f64> = (0..l.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(quadratic_form(&l, &x) >= 0.0);
    }
}

#[test]
fn grid_connectivity_matches_formula() {
    for (m, n) in [(1, 2), (2, 2), (3, 3), (3, 7), (5, 11), (4, 9), (9, 4), (6, 6)] {
        let l = laplacian(&grid_graph(GridSpec::new(m, n)).unwrap());
        let exact = (4.0 * (std::f64::consts::PI / (2.0 * m as f64)).sin().powi(2))
            .min(4.0 * (std::f64::consts::PI / (2.0 * n as f64)).sin().powi(2));
        let ev = dense_spectrum(l.matrix()).unwrap();
        assert!((ev[1] - exact).abs() < 1e-9, "{m}x{n}: {} vs {exact}", ev[1]);
    }
}

#[test]
fn separator_property_on_random_connected_graphs() {
    for seed in 0..100u64 {
        let n = 20 + (seed as usize * 13) % 180;
        let l = connected_banded(n, 2 + seed as usize % 6, seed);
        for mode in [CoverMode::Greedy, CoverMode::Exact] {
            let p = spectral_partition(&l, &EigenOptions::default(), mode).unwrap();
            p.validate(&l).unwrap();
            let from_a = reachable(&l, &p.a, &p.s);
            assert!(p.b.iter().all(|v| !from_a[v]), "seed {seed} {mode:?}");
            assert!(p.boundary.is_covered_by(&p.s));
            assert!(p.s.len() <= p.boundary.a1.len().min(p.boundary.b1.len()));
            let degree_sum: usize = p.boundary.degrees.values().sum();
            assert_eq!(degree_sum, 2 * p.boundary.e1.len());
            assert!(!p.boundary.e1.is_empty());
        }
    }
}

#[test]
fn exact_cover_never_larger_than_greedy() {
    for seed in 0..100u64 {
        let l = connected_banded(60 + seed as usize, 5, seed);
        let g = spectral_partition(&l, &EigenOptions::default(), CoverMode::Greedy).unwrap();
        let e = spectral_partition(&l, &EigenOptions::default(), CoverMode::Exact).unwrap();
        assert!(e.s.len() <= g.s.len(), "seed {seed}");
    }
}

#[test]
fn lower_bank_is_connected_before_cover() {
    // for a Fiedler vector y and r >= 0, {y <= r} induces a connected graph
    let mut graphs = vec![fixtures::idit_laplacian()];
    for (m, n) in [(5, 11), (5, 21), (7, 10)] {
        graphs.push(laplacian(&grid_graph(GridSpec::new(m, n)).unwrap()));
    }
    graphs.extend((0..20).map(|s| connected_banded(50 + s as usize, 4, s)));
    for l in &graphs {
        let f = fiedler(l, &EigenOptions::default()).unwrap();
        let s = median_split(&f.y).unwrap();
        let y: Vec<f64> = if s.median >= 0.0 { f.y.clone() } else { f.y.iter().map(|v| -v).collect() };
        let xm = s.median.abs();
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // stay clear of the threshold where the approximate y may sit on either side
        let bank: VertexSet = (0..l.n()).filter(|&v| y[v] <= xm - 1e-6 * scale).collect();
        assert!(induces_connected(l, &bank), "n = {}", l.n());
    }
}

fn brute_force_min_cover(h: &BoundaryGraph) -> usize {
    let verts: Vec<usize> = h.degrees.keys().copied().collect();
    let k = verts.len();
    (0u32..1 << k)
        .filter(|mask| {
            h.e1.iter().all(|&(a, b)| {
                let ia = verts.iter().position(|&v| v == a).unwrap();
                let ib = verts.iter().position(|&v| v == b).unwrap();
                mask & (1 << ia) != 0 || mask & (1 << ib) != 0
            })
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

#[test]
fn cover_properties_on_random_bipartite_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let na = rng.random_range(1..9);
        let nb = rng.random_range(1..9);
        let p: f64 = rng.random_range(0.1..0.7);
        let mut edges = Vec::new();
        for a in 0..na {
            for b in 0..nb {
                if rng.random::<f64>() < p {
                    edges.push((a, 100 + b));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 100));
        }
        let h = BoundaryGraph::new(edges).unwrap();
        let g = greedy_cover(&h);
        let e = exact_min_cover(&h);
        assert!(h.is_covered_by(&g) && h.is_covered_by(&e));
        assert!(g.len() <= h.a1.len().min(h.b1.len()));
        assert_eq!(e.len(), maximum_matching(&h).len());
        assert!(e.len() <= g.len());
        if h.degrees.len() <= 12 {
            assert_eq!(e.len(), brute_force_min_cover(&h));
        }
    }
}

fn check_tree_by_bfs(l: &Laplacian, tree: &SeparatorTree) -> VertexSet {
    match tree {
        SeparatorTree::Leaf(v) => v.clone(),
        SeparatorTree::Internal { separator, left, right } => {
            let a = check_tree_by_bfs(l, left);
            let b = check_tree_by_bfs(l, right);
            let node = a.union(&b).union(separator);
            let outside: VertexSet = (0..l.n()).filter(|&v| !node.contains(v)).collect();
            let blocked = outside.union(separator);
            let seen = reachable(l, &a, &blocked);
            assert!(b.iter().all(|v| !seen[v]));
            node
        }
    }
}

#[test]
fn dissection_invariants_on_random_graphs() {
    for seed in 0..50u64 {
        let l = connected_banded(30 + seed as usize * 2, 2 + seed as usize % 5, seed);
        let (tree, perm) = recursive_decompose(&l, &DissectOptions::default()).unwrap();
        tree.validate(&l, Some(3)).unwrap();
        assert_eq!(check_tree_by_bfs(&l, &tree), VertexSet::range(l.n()));
        assert!(tree.max_leaf() <= 3);
        assert_eq!(perm.len(), l.n());
    }
}

#[test]
fn separators_follow_their_subtrees() {
    let l = laplacian(&grid_graph(GridSpec::new(11, 11)).unwrap());
    let (tree, perm) = recursive_decompose(&l, &DissectOptions::default()).unwrap();
    let pos = perm.inverse();
    fn walk(t: &SeparatorTree, pos: &[usize]) {
        if let SeparatorTree::Internal { separator, left, right } = t {
            let latest = left.vertices().iter().chain(right.vertices().iter()).map(|v| pos[v]).max();
            for s in separator.iter() {
                assert!(latest.is_none_or(|m| pos[s] > m));
            }
            walk(left, pos);
            walk(right, pos);
        }
    }
    walk(&tree, &pos);
    check_tree_by_bfs(&l, &tree);
}

#[test]
fn dissection_is_deterministic() {
    let l = laplacian(&grid_graph(GridSpec::new(9, 14)).unwrap());
    let first = recursive_decompose(&l, &DissectOptions::default()).unwrap();
    for _ in 0..3 {
        assert_eq!(recursive_decompose(&l, &DissectOptions::default()).unwrap(), first);
    }
}
