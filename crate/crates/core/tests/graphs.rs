use std::collections::BTreeSet;

use qgraph::graph::{build_pi_graph, build_relation_graph, graph_union, DirectedGraph, GraphJson};
use qgraph::linalg::SparseMat;
use qgraph::magic::{commuting_magic_unitaries, pi_n, ScalarMagicUnitary, DEFAULT_COMMUTANT_LIMIT};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn same_json(g: &DirectedGraph, file: &str) {
    let want: serde_json::Value = serde_json::from_str(&golden(file)).unwrap();
    let got = serde_json::to_value(g.to_json()).unwrap();
    assert_eq!(got, want, "{file}");
}

/// Ordered pairs of generators related by the quantum-matrix relations:
/// same row or same column (lower index first), and both orientations of an
/// antidiagonal pair.
fn relation_pairs(n: usize) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for (a, b, c, d) in itertools::iproduct!(1..=n, 1..=n, 1..=n, 1..=n) {
        let related = (a == c && b < d) || (b == d && a < c) || (a < c && b > d) || (a > c && b < d);
        if related {
            out.insert((format!("x{a}{b}"), format!("x{c}{d}")));
        }
    }
    out
}

#[test]
fn relation_graph_matches_figure() {
    same_json(&build_relation_graph(2).unwrap(), "relation_graph_n2.json");
    assert_eq!(build_relation_graph(2).unwrap().to_dot(), golden("relation_graph_n2.dot"));
}

#[test]
fn involution_graph_matches_figure() {
    let g = build_pi_graph(2).unwrap();
    same_json(&g, "pi_graph_n2.json");
    same_json(&g.line_graph(), "pi_graph_n2_line.json");
    let displayed =
        SparseMat::from_dense_ints(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap();
    assert_eq!(g.adjacency_matrix(), displayed);
}

#[test]
fn json_round_trip() {
    let g = build_relation_graph(3).unwrap();
    let text = serde_json::to_string(&g.to_json()).unwrap();
    let back: GraphJson = serde_json::from_str(&text).unwrap();
    assert_eq!(DirectedGraph::from_json(&back).unwrap().edge_pairs(), g.edge_pairs());
}

#[test]
fn relation_edges_match_pair_classification() {
    for n in 2..=6 {
        let g = build_relation_graph(n).unwrap();
        let oracle = relation_pairs(n);
        assert_eq!(g.edge_pairs(), oracle, "n = {n}");
        assert_eq!(g.edge_count(), (n * n * n + n * n) * (n - 1) / 2);
        assert_eq!(g.sinks(), vec![format!("x{n}{n}")]);
        assert_eq!(g.sources(), vec!["x11".to_string()]);
    }
}

#[test]
fn edge_matrix_is_line_graph_adjacency() {
    for n in 2..=4 {
        for g in [build_relation_graph(n).unwrap(), build_pi_graph(n).unwrap()] {
            assert_eq!(g.edge_matrix(), g.line_graph().adjacency_matrix());
        }
        assert!(build_relation_graph(n).unwrap().line_graph().is_simple());
    }
}

#[test]
fn involution_adjacency_is_symmetric_permutation() {
    for n in 2..=5 {
        let a = build_pi_graph(n).unwrap().adjacency_matrix();
        assert_eq!(a.transpose(), a);
        assert_eq!(a.mul(&a).unwrap(), SparseMat::identity(n * n));
        assert_eq!(a, pi_n(n).unwrap().to_matrix());
    }
}

#[test]
fn union_laws() {
    let family: Vec<DirectedGraph> =
        (2..=3).flat_map(|n| [build_relation_graph(n).unwrap(), build_pi_graph(n).unwrap()]).collect();
    for a in &family {
        assert_eq!(graph_union(a, a).edge_pairs(), a.edge_pairs());
        for b in &family {
            assert_eq!(graph_union(a, b).edge_pairs(), graph_union(b, a).edge_pairs());
            for c in &family {
                let left = graph_union(&graph_union(a, b), c);
                let right = graph_union(a, &graph_union(b, c));
                assert_eq!(left.edge_pairs(), right.edge_pairs());
                assert_eq!(left.vertices(), right.vertices());
            }
        }
    }
}

#[test]
fn commutant_is_a_group() {
    for n in 2..=3 {
        for g in [build_relation_graph(n).unwrap(), build_pi_graph(n).unwrap()] {
            let c = commuting_magic_unitaries(&g.adjacency_matrix(), DEFAULT_COMMUTANT_LIMIT).unwrap();
            assert!(!c.overflow);
            let set: BTreeSet<Vec<usize>> = c.permutations.iter().map(|p| p.word().to_vec()).collect();
            assert!(set.contains(ScalarMagicUnitary::identity(n * n).word()));
            for p in &c.permutations {
                assert!(set.contains(p.inverse().word()));
                for q in &c.permutations {
                    assert!(set.contains(p.compose(q).word()));
                }
            }
        }
    }
}

#[test]
fn transpose_permutation_commutes_with_relation_graph() {
    for n in 2..=4 {
        let a = build_relation_graph(n).unwrap().adjacency_matrix();
        let p = pi_n(n).unwrap().to_matrix();
        assert_eq!(p.mul(&a).unwrap(), a.mul(&p).unwrap(), "n = {n}");
    }
}
