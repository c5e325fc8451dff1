//! Directed graphs of the quantum-matrix relations and of their commuting
//! involution, with adjacency/edge matrices, line graphs and exports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMat};

/// The generator `x_{ij}`; vertices are numbered row-major from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    pub row: usize,
    pub col: usize,
}

impl VertexLabel {
    pub fn new(row: usize, col: usize) -> Self {
        VertexLabel { row, col }
    }

    /// 1-based canonical index in `1..=n^2`.
    pub fn index(&self, n: usize) -> usize {
        (self.row - 1) * n + self.col
    }

    pub fn from_index(n: usize, idx: usize) -> Self {
        VertexLabel { row: (idx - 1) / n + 1, col: (idx - 1) % n + 1 }
    }

    pub fn transpose(&self) -> Self {
        VertexLabel { row: self.col, col: self.row }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let body = s.strip_prefix('x')?;
        let (r, c) = match body.split_once(',') {
            Some((r, c)) => (r.parse().ok()?, c.parse().ok()?),
            None if body.len() == 2 => (body[..1].parse().ok()?, body[1..].parse().ok()?),
            None => return None,
        };
        (r >= 1 && c >= 1).then_some(VertexLabel { row: r, col: c })
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row < 10 && self.col < 10 {
            write!(f, "x{}{}", self.row, self.col)
        } else {
            write!(f, "x{},{}", self.row, self.col)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// Simple directed graph (loops allowed, no parallel edges).
///
/// Vertices and edges are indexed from 0 internally; edges keep insertion
/// order, which fixes the row order of [`DirectedGraph::edge_matrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge>,
    pairs: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph { n, vertices: vec![], index: BTreeMap::new(), edges: vec![], pairs: BTreeSet::new() }
    }

    /// Graph on the `n^2` generators `x_{ij}` in canonical order, no edges.
    pub fn with_generators(n: usize) -> Self {
        let mut g = DirectedGraph::new(n);
        for i in 1..=n {
            for j in 1..=n {
                g.add_vertex(VertexLabel::new(i, j).to_string());
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adds a vertex (no-op if the label exists) and returns its index.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(label.clone(), i);
        self.vertices.push(label);
        i
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn add_edge(&mut self, source: &str, target: &str, label: impl Into<String>) -> Result<usize> {
        let s = self.vertex_index(source)?;
        let t = self.vertex_index(target)?;
        if !self.pairs.insert((s, t)) {
            return Err(Error::DuplicateEdge(source.into(), target.into()));
        }
        self.edges.push(Edge { source: s, target: t, label: label.into() });
        Ok(self.edges.len() - 1)
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.pairs.contains(&(source, target))
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edges[e].label
    }

    /// Index of the edge `source -> target`, if present.
    pub fn find_edge(&self, source: usize, target: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.source == source && e.target == target)
    }

    pub fn entry_degree(&self, v: &str) -> Result<usize> {
        let v = self.vertex_index(v)?;
        Ok(self.edges.iter().filter(|e| e.target == v).count())
    }

    pub fn exit_degree(&self, v: &str) -> Result<usize> {
        let v = self.vertex_index(v)?;
        Ok(self.edges.iter().filter(|e| e.source == v).count())
    }

    pub fn in_degree_of(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.target == v).count()
    }

    pub fn out_degree_of(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    /// Vertices emitting no edge.
    pub fn sinks(&self) -> Vec<String> {
        (0..self.vertex_count()).filter(|&v| self.out_degree_of(v) == 0).map(|v| self.vertices[v].clone()).collect()
    }

    /// Vertices receiving no edge.
    pub fn sources(&self) -> Vec<String> {
        (0..self.vertex_count()).filter(|&v| self.in_degree_of(v) == 0).map(|v| self.vertices[v].clone()).collect()
    }

    pub fn adjacency_matrix(&self) -> SparseMat {
        let d = self.vertex_count();
        SparseMat::from_entries(d, d, self.edges.iter().map(|e| (e.source + 1, e.target + 1, Scalar::one())))
            .expect("edge endpoints are vertices")
    }

    /// Entry `(e1, e2)` is 1 iff `r(e1) = s(e2)`; edges in insertion order.
    pub fn edge_matrix(&self) -> SparseMat {
        let m = self.edge_count();
        let mut entries = vec![];
        for (a, e1) in self.edges.iter().enumerate() {
            for (b, e2) in self.edges.iter().enumerate() {
                if e1.target == e2.source {
                    entries.push((a + 1, b + 1, Scalar::one()));
                }
            }
        }
        SparseMat::from_entries(m, m, entries).expect("in range")
    }

    pub fn line_graph(&self) -> DirectedGraph {
        let mut lg = DirectedGraph::new(0);
        for e in &self.edges {
            lg.add_vertex(e.label.clone());
        }
        for (a, e1) in self.edges.iter().enumerate() {
            for (b, e2) in self.edges.iter().enumerate() {
                if e1.target == e2.source {
                    let label = format!("{}.{}", e1.label, e2.label);
                    lg.add_edge_by_index(a, b, label);
                }
            }
        }
        lg
    }

    fn add_edge_by_index(&mut self, s: usize, t: usize, label: String) {
        if self.pairs.insert((s, t)) {
            self.edges.push(Edge { source: s, target: t, label });
        }
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.source != e.target)
    }

    /// Deterministic Graphviz export in vertex and edge order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[e.source], self.vertices[e.target], e.label
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            schema: 1,
            n: self.n,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| (self.vertices[e.source].clone(), self.vertices[e.target].clone(), e.label.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut g = DirectedGraph::new(json.n);
        for v in &json.vertices {
            g.add_vertex(v.clone());
        }
        for (s, t, l) in &json.edges {
            g.add_edge(s, t, l.clone())?;
        }
        Ok(g)
    }

    /// Set of `(source label, target label)` pairs.
    pub fn edge_pairs(&self) -> BTreeSet<(String, String)> {
        self.edges.iter().map(|e| (self.vertices[e.source].clone(), self.vertices[e.target].clone())).collect()
    }
}

/// Wire form: `{"schema":1,"n":N,"vertices":[...],"edges":[[s,t,label],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub n: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

fn schema_one() -> u32 {
    1
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

type Letter = ((usize, usize), (usize, usize), &'static str);

/// Edge letters used for the `n = 2` relation graph.
const RELATION2_LETTERS: [Letter; 6] = [
    ((1, 1), (1, 2), "e"),
    ((1, 1), (2, 1), "f"),
    ((1, 2), (2, 2), "h"),
    ((2, 1), (2, 2), "g"),
    ((1, 2), (2, 1), "i"),
    ((2, 1), (1, 2), "j"),
];

/// Graph of the defining relations of the quantum `n x n` matrices.
///
/// For `x_{ij}` and `x_{kl}`: an edge along a shared row (`j < l`) or column
/// (`i < k`) pointing to the larger index, both directions for antidiagonal
/// pairs (`i < k`, `j > l`) and nothing for diagonal pairs. Edges are ordered
/// by (source, target) canonical index. At `n = 2` edges carry the letters
/// `e f h g i j`; otherwise labels read `x11>x12`.
pub fn build_relation_graph(n: usize) -> Result<DirectedGraph> {
    check_n(n)?;
    let mut g = DirectedGraph::with_generators(n);
    let labels: Vec<VertexLabel> = (1..=n * n).map(|k| VertexLabel::from_index(n, k)).collect();
    for a in &labels {
        for b in &labels {
            if a == b {
                continue;
            }
            let connected = (a.row == b.row && a.col < b.col)
                || (a.col == b.col && a.row < b.row)
                || (a.row != b.row && a.col != b.col && (a.row < b.row) != (a.col < b.col));
            if !connected {
                continue;
            }
            let label = if n == 2 {
                RELATION2_LETTERS
                    .iter()
                    .find(|(s, t, _)| *s == (a.row, a.col) && *t == (b.row, b.col))
                    .map(|(_, _, l)| l.to_string())
                    .expect("every n = 2 edge has a letter")
            } else {
                format!("{a}>{b}")
            };
            g.add_edge(&a.to_string(), &b.to_string(), label)?;
        }
    }
    Ok(g)
}

/// Graph of the transposition involution: a loop at every `x_{ii}` and the
/// pair `x_{ij} <-> x_{ji}` for `i != j`.
///
/// At `n = 2` labels follow the figure names `e11 e24 e42 e33`; in general a
/// loop is `e{i},{i}` and `x_{ij} -> x_{ji}` is `e{2i},{2j}`.
pub fn build_pi_graph(n: usize) -> Result<DirectedGraph> {
    check_n(n)?;
    let mut g = DirectedGraph::with_generators(n);
    for k in 1..=n * n {
        let a = VertexLabel::from_index(n, k);
        let b = a.transpose();
        let label = match (n, a.row == a.col) {
            (2, _) => match (a.row, a.col) {
                (1, 1) => "e11".to_string(),
                (1, 2) => "e24".to_string(),
                (2, 1) => "e42".to_string(),
                _ => "e33".to_string(),
            },
            (_, true) => format!("e{},{}", a.row, a.row),
            (_, false) => format!("e{},{}", 2 * a.row, 2 * a.col),
        };
        g.add_edge(&a.to_string(), &b.to_string(), label)?;
    }
    Ok(g)
}

/// Union of vertex and edge sets, identifying equal labels.
///
/// Vertices of `x_{ij}` form are sorted canonically (row-major); other labels
/// keep first-seen order after them. Edges are ordered by endpoint indices; a
/// pair present in both graphs keeps the label from `g1`.
pub fn graph_union(g1: &DirectedGraph, g2: &DirectedGraph) -> DirectedGraph {
    graph_union_with(g1, g2, |s| s.to_string())
}

/// [`graph_union`] after relabelling the vertices of `g2` through `embed`.
pub fn graph_union_with(g1: &DirectedGraph, g2: &DirectedGraph, embed: impl Fn(&str) -> String) -> DirectedGraph {
    let mut structured: BTreeSet<VertexLabel> = BTreeSet::new();
    let mut opaque: Vec<String> = vec![];
    let mapped2: Vec<String> = g2.vertices.iter().map(|v| embed(v)).collect();
    for v in g1.vertices.iter().chain(mapped2.iter()) {
        match VertexLabel::parse(v) {
            Some(l) if l.to_string() == *v => {
                structured.insert(l);
            }
            _ => {
                if !opaque.contains(v) {
                    opaque.push(v.clone());
                }
            }
        }
    }
    let mut out = DirectedGraph::new(g1.n.max(g2.n));
    // sort by (row, col) which is the canonical order for any n
    for l in &structured {
        out.add_vertex(l.to_string());
    }
    for v in opaque {
        out.add_vertex(v);
    }
    let mut edges: BTreeMap<(usize, usize), String> = BTreeMap::new();
    let ends1 = g1.edges.iter().map(|e| (&g1.vertices[e.source], &g1.vertices[e.target], &e.label));
    for (s, t, l) in ends1 {
        let key = (out.index[s], out.index[t]);
        edges.entry(key).or_insert_with(|| l.clone());
    }
    for e in &g2.edges {
        let key = (out.index[&mapped2[e.source]], out.index[&mapped2[e.target]]);
        edges.entry(key).or_insert_with(|| e.label.clone());
    }
    for ((s, t), l) in edges {
        out.add_edge_by_index(s, t, l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent pair classification: count ordered pairs by relation kind.
    fn classify_count(n: usize) -> usize {
        let mut same_row = 0;
        let mut same_col = 0;
        let mut anti = 0;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        if i == k && j < l {
                            same_row += 1;
                        }
                        if j == l && i < k {
                            same_col += 1;
                        }
                        if i < k && j > l {
                            anti += 2;
                        }
                    }
                }
            }
        }
        same_row + same_col + anti
    }

    #[test]
    fn relation_graph_edge_count_matches_formula() {
        for n in 2..=6 {
            let g = build_relation_graph(n).unwrap();
            let formula = (n * n * n + n * n) * (n - 1) / 2;
            assert_eq!(g.edge_count(), formula, "n = {n}");
            assert_eq!(g.edge_count(), n * n * (n * n - 1) / 2);
            assert_eq!(g.edge_count(), classify_count(n));
        }
        assert_eq!(build_relation_graph(3).unwrap().edge_count(), 36);
    }

    #[test]
    fn relation_graph_n2_matches_figure() {
        let g = build_relation_graph(2).unwrap();
        let (u, v, w, k) = ("x11", "x12", "x21", "x22");
        let want: BTreeSet<(String, String)> = [(u, v), (u, w), (v, k), (w, k), (v, w), (w, v)]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(g.edge_pairs(), want);
        assert_eq!(g.exit_degree(k).unwrap(), 0);
        assert_eq!(g.exit_degree(v).unwrap(), 2);
        assert_eq!(g.sinks(), vec![k.to_string()]);
        assert_eq!(g.sources(), vec![u.to_string()]);
        let a = g.adjacency_matrix();
        let row_sums: Vec<usize> =
            (1..=4).map(|i| (1..=4).filter(|&j| !a.get(i, j).unwrap().is_zero()).count()).collect();
        assert_eq!(row_sums, vec![2, 2, 2, 0]);
    }

    #[test]
    fn relation_graph_single_sink_and_source() {
        for n in 2..=6 {
            let g = build_relation_graph(n).unwrap();
            assert_eq!(g.sinks(), vec![VertexLabel::new(n, n).to_string()]);
            assert_eq!(g.sources(), vec!["x11".to_string()]);
        }
    }

    #[test]
    fn pi_graph_shape() {
        let g = build_pi_graph(2).unwrap();
        let labels: BTreeSet<&str> = g.edges().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["e11", "e24", "e42", "e33"].into_iter().collect());
        let pi2 = SparseMat::from_dense_ints(&[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]])
            .unwrap();
        assert_eq!(g.adjacency_matrix(), pi2);
        assert_eq!(build_pi_graph(3).unwrap().edge_count(), 9);
        for n in 2..=5 {
            let g = build_pi_graph(n).unwrap();
            assert!(g.sinks().is_empty());
            assert!(g.sources().is_empty());
            let a = g.adjacency_matrix();
            assert_eq!(a, a.transpose());
            assert_eq!(a.mul(&a).unwrap(), SparseMat::identity(n * n));
        }
    }

    #[test]
    fn small_n_rejected() {
        assert!(build_relation_graph(1).is_err());
        assert!(build_pi_graph(0).is_err());
    }

    #[test]
    fn edge_matrix_is_line_graph_adjacency() {
        for n in 2..=4 {
            for g in [build_relation_graph(n).unwrap(), build_pi_graph(n).unwrap()] {
                assert_eq!(g.edge_matrix(), g.line_graph().adjacency_matrix());
            }
        }
    }

    #[test]
    fn line_graph_of_single_loop() {
        let mut g = DirectedGraph::new(0);
        g.add_vertex("a");
        g.add_edge("a", "a", "l").unwrap();
        let lg = g.line_graph();
        assert_eq!(lg.vertex_count(), 1);
        assert_eq!(lg.edge_count(), 1);
        assert!(!lg.is_simple());
    }

    #[test]
    fn pi2_line_graph_has_no_multi_edges() {
        // loops in the line graph come from loops of the base graph
        let lg = build_pi_graph(2).unwrap().line_graph();
        assert_eq!(lg.edge_pairs().len(), lg.edge_count());
    }

    #[test]
    fn degrees_and_unknown_vertex() {
        let mut g = DirectedGraph::new(0);
        g.add_vertex("lonely");
        assert_eq!(g.entry_degree("lonely").unwrap(), 0);
        assert_eq!(g.exit_degree("lonely").unwrap(), 0);
        assert!(matches!(g.exit_degree("nope"), Err(Error::UnknownVertex(_))));
        assert!(g.adjacency_matrix().is_zero());
    }

    #[test]
    fn duplicate_edges_rejected() {
        let mut g = DirectedGraph::with_generators(2);
        g.add_edge("x11", "x12", "a").unwrap();
        assert!(g.add_edge("x11", "x12", "b").is_err());
    }

    #[test]
    fn union_laws() {
        let p2 = build_pi_graph(2).unwrap();
        let p3 = build_pi_graph(3).unwrap();
        let r2 = build_relation_graph(2).unwrap();
        let u = graph_union(&p2, &p2);
        assert_eq!(u.edge_pairs(), p2.edge_pairs());
        assert_eq!(u.vertices(), p2.vertices());
        let u23 = graph_union(&p2, &p3);
        assert_eq!(u23.vertex_count(), 9);
        assert_eq!(u23.edge_count(), 9);
        let empty = DirectedGraph::new(0);
        assert_eq!(graph_union(&r2, &empty).edge_pairs(), r2.edge_pairs());
        // commutative and associative on the structure
        assert_eq!(graph_union(&r2, &p3).edge_pairs(), graph_union(&p3, &r2).edge_pairs());
        let left = graph_union(&graph_union(&r2, &p2), &p3);
        let right = graph_union(&r2, &graph_union(&p2, &p3));
        assert_eq!(left.edge_pairs(), right.edge_pairs());
        assert_eq!(left.vertices(), right.vertices());
    }

    #[test]
    fn union_with_embedding() {
        let p2 = build_pi_graph(2).unwrap();
        let p3 = build_pi_graph(3).unwrap();
        // shift the 2x2 block to the bottom-right corner of the 3x3 labels
        let shifted = graph_union_with(&p3, &p2, |s| {
            let l = VertexLabel::parse(s).unwrap();
            VertexLabel::new(l.row + 1, l.col + 1).to_string()
        });
        assert_eq!(shifted.edge_count(), 9);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(VertexLabel::parse("x12"), Some(VertexLabel::new(1, 2)));
        assert_eq!(VertexLabel::parse("x10,3"), Some(VertexLabel::new(10, 3)));
        assert_eq!(VertexLabel::parse("u"), None);
        assert_eq!(VertexLabel::new(10, 3).to_string(), "x10,3");
    }

    #[test]
    fn json_round_trip() {
        let g = build_relation_graph(2).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = DirectedGraph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
