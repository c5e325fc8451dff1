use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pattern::PatternOperator;
use crate::error::{Error, Result};
use crate::graph::{build_pi_graph, build_relation_graph, DirectedGraph, VertexLabel};
use crate::linalg::SparseMat;

/// Where the operators of a family live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backing {
    /// Honest operators in `M_dim`.
    Finite { dim: usize },
    /// `dim x dim` corners of operators on `l^2(N)`; identities are compared
    /// on the leading `window x window` block only.
    Truncated { dim: usize, margin: usize, window: usize },
}

impl Backing {
    pub fn dim(&self) -> usize {
        match *self {
            Backing::Finite { dim } | Backing::Truncated { dim, .. } => dim,
        }
    }

    pub fn window(&self) -> usize {
        match *self {
            Backing::Finite { dim } => dim,
            Backing::Truncated { window, .. } => window,
        }
    }
}

/// Which endpoint of an edge carries the initial projection `S_e* S_e`.
///
/// `Range` is `S_e* S_e = P_{r(e)}` with `P_v = sum_{s(e) = v} S_e S_e*` at
/// non-sinks. `Source` is the mirrored convention `S_e* S_e = P_{s(e)}` with
/// `P_v = sum_{r(e) = v} S_e S_e*` at vertices receiving an edge; the explicit
/// constructions below are all stated in this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Range,
    Source,
}

impl Orientation {
    /// Vertex whose projection must equal `S_e* S_e`.
    pub fn initial_vertex(&self, g: &DirectedGraph, e: usize) -> usize {
        let edge = &g.edges()[e];
        match self {
            Orientation::Range => edge.target,
            Orientation::Source => edge.source,
        }
    }

    /// Vertex at which `S_e S_e*` is summed.
    pub fn final_vertex(&self, g: &DirectedGraph, e: usize) -> usize {
        let edge = &g.edges()[e];
        match self {
            Orientation::Range => edge.source,
            Orientation::Source => edge.target,
        }
    }
}

/// Vertex projections and edge partial isometries over a directed graph.
#[derive(Debug, Clone, Serialize)]
pub struct CKFamily {
    pub name: String,
    pub description: String,
    #[serde(skip)]
    pub graph: DirectedGraph,
    /// Indexed like `graph.edges()`.
    pub isometries: Vec<SparseMat>,
    /// Indexed like `graph.vertices()`.
    pub projections: Vec<SparseMat>,
    /// Patterns the truncated operators were cut from.
    pub patterns: Option<Vec<PatternOperator>>,
    /// Projections as written alongside the construction, kept for comparison
    /// with the derived ones.
    pub stated_projections: Option<Vec<SparseMat>>,
    pub backing: Backing,
    pub orientation: Orientation,
    pub experimental: bool,
}

impl CKFamily {
    /// Builds a family and derives every projection from the isometries: the
    /// initial projection of the first edge anchored at the vertex, otherwise
    /// the sum of final projections of the edges feeding it, otherwise zero.
    pub fn from_operators(
        name: impl Into<String>,
        graph: DirectedGraph,
        isometries: Vec<SparseMat>,
        backing: Backing,
        orientation: Orientation,
    ) -> Result<Self> {
        let d = backing.dim();
        if isometries.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} operators for {} edges",
                isometries.len(),
                graph.edge_count()
            )));
        }
        for s in &isometries {
            if s.rows() != d || s.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "operator {}x{} on a backing of dimension {d}",
                    s.rows(),
                    s.cols()
                )));
            }
        }
        let projections = derive_projections(&graph, &isometries, d, orientation)?;
        Ok(CKFamily {
            name: name.into(),
            description: String::new(),
            graph,
            isometries,
            projections,
            patterns: None,
            stated_projections: None,
            backing,
            orientation,
            experimental: false,
        })
    }

    fn from_patterns(
        name: &str,
        graph: DirectedGraph,
        patterns: Vec<PatternOperator>,
        dim: usize,
        margin: Option<usize>,
    ) -> Result<Self> {
        let margin = margin.unwrap_or_else(|| patterns.iter().map(PatternOperator::max_stride).max().unwrap_or(1));
        if margin >= dim {
            return Err(Error::InvalidParameter(format!("margin {margin} leaves no window in dimension {dim}")));
        }
        let window = patterns.iter().map(|p| p.exact_window(dim - margin)).min().unwrap_or(dim - margin);
        let ops = patterns.iter().map(|p| p.truncate(dim)).collect::<Result<Vec<_>>>()?;
        let backing = Backing::Truncated { dim, margin, window };
        let mut f = CKFamily::from_operators(name, graph, ops, backing, Orientation::Source)?;
        f.patterns = Some(patterns);
        Ok(f)
    }

    fn describe(mut self, text: &str) -> Self {
        self.description = text.to_string();
        self
    }

    pub fn edge_operator(&self, source: &str, target: &str) -> Option<&SparseMat> {
        let s = self.graph.vertex_index(source).ok()?;
        let t = self.graph.vertex_index(target).ok()?;
        self.graph.find_edge(s, t).map(|e| &self.isometries[e])
    }

    pub fn projection(&self, vertex: &str) -> Option<&SparseMat> {
        self.graph.vertex_index(vertex).ok().map(|v| &self.projections[v])
    }
}

fn derive_projections(
    g: &DirectedGraph,
    ops: &[SparseMat],
    d: usize,
    orientation: Orientation,
) -> Result<Vec<SparseMat>> {
    let mut out = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let anchored = (0..g.edge_count()).find(|&e| orientation.initial_vertex(g, e) == v);
        let p = match anchored {
            Some(e) => ops[e].adjoint().mul(&ops[e])?,
            None => {
                let mut acc = SparseMat::zeros(d, d);
                for e in (0..g.edge_count()).filter(|&e| orientation.final_vertex(g, e) == v) {
                    acc = acc.add(&ops[e].mul(&ops[e].adjoint())?)?;
                }
                acc
            }
        };
        out.push(p);
    }
    Ok(out)
}

fn unit(d: usize, i: usize, j: usize) -> Result<SparseMat> {
    SparseMat::matrix_unit(d, i, j)
}

/// Four rank-one operators in `M_4` over the `n = 2` involution graph:
/// `x11 -> x11: E21`, `x12 -> x21: E41`, `x21 -> x12: E14`, `x22 -> x22: E31`.
pub fn pi2_finite() -> Result<CKFamily> {
    let g = build_pi_graph(2)?;
    let ops = g
        .edges()
        .iter()
        .map(|e| {
            let (s, t) = (&g.vertices()[e.source], &g.vertices()[e.target]);
            match (s.as_str(), t.as_str()) {
                ("x11", "x11") => unit(4, 2, 1),
                ("x12", "x21") => unit(4, 4, 1),
                ("x21", "x12") => unit(4, 1, 4),
                _ => unit(4, 3, 1),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut f = CKFamily::from_operators("pi2-finite", g, ops, Backing::Finite { dim: 4 }, Orientation::Source)?;
    // vertex order x11, x12, x21, x22
    f.stated_projections = Some(vec![unit(4, 1, 1)?, unit(4, 1, 1)?, unit(4, 4, 4)?, unit(4, 1, 1)?]);
    Ok(f.describe("finite rank-one family on the n = 2 involution graph in M_4"))
}

fn shift() -> Result<PatternOperator> {
    PatternOperator::single(1, -1, 1, 0)
}

fn involution_patterns(g: &DirectedGraph) -> Result<Vec<PatternOperator>> {
    let n = g.n();
    g.edges()
        .iter()
        .map(|e| {
            let a = VertexLabel::from_index(n, e.source + 1);
            match a.row.cmp(&a.col) {
                std::cmp::Ordering::Equal => shift(),
                std::cmp::Ordering::Less => PatternOperator::single(2, 0, 1, 0),
                std::cmp::Ordering::Greater => PatternOperator::single(1, 0, 2, 0),
            }
        })
        .collect()
}

/// Truncated family on the `n = 2` involution graph: unilateral shifts on the
/// loops, `sum E_{2n,n}` on `x12 -> x21` and `sum E_{n,2n}` on `x21 -> x12`.
pub fn pi2_infinite(dim: usize, margin: Option<usize>) -> Result<CKFamily> {
    if dim < 4 {
        return Err(Error::InvalidParameter(format!("truncation dimension must be at least 4, got {dim}")));
    }
    pi_n_infinite(2, dim, margin).map(|f| {
        CKFamily { name: "pi2-inf".into(), ..f }.describe("truncated shift family on the n = 2 involution graph")
    })
}

/// Pattern rules of the six-edge family on the `n = 2` relation graph,
/// keyed by (source, target).
pub const RELATION2_RULES: [(&str, &str, usize, i64, usize, i64); 6] = [
    ("x11", "x12", 6, 0, 3, 2), // e: E_{6n,3n-2}
    ("x11", "x21", 6, 4, 3, 2), // f: E_{6n-4,3n-2}
    ("x12", "x22", 6, 3, 3, 0), // h: E_{6n-3,3n}
    ("x21", "x22", 6, 4, 3, 1), // g: E_{6n-4,3n-1}
    ("x12", "x21", 6, 1, 3, 0), // i: E_{6n-1,3n}
    ("x21", "x12", 6, 3, 3, 1), // j: E_{6n-3,3n-1}
];

/// The six truncated stride-6 operators on the `n = 2` relation graph.
pub fn relation2_infinite(dim: usize, margin: Option<usize>) -> Result<CKFamily> {
    if dim < 12 {
        return Err(Error::InvalidParameter(format!("truncation dimension must be at least 12, got {dim}")));
    }
    let g = build_relation_graph(2)?;
    let patterns = g
        .edges()
        .iter()
        .map(|e| {
            let (s, t) = (&g.vertices()[e.source], &g.vertices()[e.target]);
            let &(_, _, rm, rs, cm, cs) =
                RELATION2_RULES.iter().find(|r| r.0 == s && r.1 == t).expect("all six edges have a rule");
            PatternOperator::single(rm, rs, cm, cs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CKFamily::from_patterns("Pi2-inf", g, patterns, dim, margin)?
        .describe("truncated stride-6 family on the n = 2 relation graph"))
}

/// Finite family in `M_{n^2}` on the involution graph: `E_{i+1,1}` on the
/// loop at `x_{ii}`, `E_{2j,1}` on `x_{ij} -> x_{ji}` for `i < j` and `E_{1,2j}`
/// for `i > j`.
pub fn pi_n_finite(n: usize) -> Result<CKFamily> {
    let g = build_pi_graph(n)?;
    let d = n * n;
    let ops = g
        .edges()
        .iter()
        .map(|e| {
            let a = VertexLabel::from_index(n, e.source + 1);
            let (i, j) = (a.row, a.col);
            let (r, c) = match i.cmp(&j) {
                std::cmp::Ordering::Equal => (i + 1, 1),
                std::cmp::Ordering::Less => (2 * j, 1),
                std::cmp::Ordering::Greater => (1, 2 * j),
            };
            SparseMat::matrix_unit(d, r, c)
                .map_err(|_| Error::InvalidParameter(format!("edge {} needs E_({r},{c}) outside M_{d}", e.label)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CKFamily::from_operators("pin-finite", g, ops, Backing::Finite { dim: d }, Orientation::Source)?
        .describe("finite rank-one family on the involution graph in M_{n^2}"))
}

/// Truncated family on the involution graph: shifts on loops, `sum E_{2n,n}`
/// on `x_{ij} -> x_{ji}` for `i < j` and `sum E_{n,2n}` for `i > j`.
pub fn pi_n_infinite(n: usize, dim: usize, margin: Option<usize>) -> Result<CKFamily> {
    if dim < 4 {
        return Err(Error::InvalidParameter(format!("truncation dimension must be at least 4, got {dim}")));
    }
    let g = build_pi_graph(n)?;
    let patterns = involution_patterns(&g)?;
    Ok(CKFamily::from_patterns("pin-inf", g, patterns, dim, margin)?
        .describe("truncated shift family on the involution graph"))
}

/// Per-edge parameters of the conjectured family
/// `S = sum_j E_{scale*j - a, (n^2-1) j - d}` on the relation graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClaimParams {
    pub a: i64,
    pub d: i64,
    pub e_scale: usize,
}

impl ClaimParams {
    /// `d` in `0..=n^2-2`, `e_scale = exit_degree * (n^2 - 1)` and `a` in
    /// `0..e_scale` so that the first row index is positive.
    pub fn new(n: usize, exit_degree: usize, a: i64, d: i64) -> Result<Self> {
        let m = (n * n - 1) as i64;
        if !(0..=m - 1).contains(&d) {
            return Err(Error::InvalidParameter(format!("D = {d} outside 0..={}", m - 1)));
        }
        if exit_degree == 0 {
            return Err(Error::InvalidParameter("edge source has exit degree 0".into()));
        }
        let e_scale = exit_degree * (n * n - 1);
        if !(0..e_scale as i64).contains(&a) {
            return Err(Error::InvalidParameter(format!("A = {a} outside 0..{e_scale}")));
        }
        Ok(ClaimParams { a, d, e_scale })
    }

    fn validate(&self, n: usize, exit_degree: usize) -> Result<()> {
        let ok = ClaimParams::new(n, exit_degree, self.a, self.d)?;
        if ok.e_scale != self.e_scale {
            return Err(Error::InvalidParameter(format!(
                "scale {} does not match exit degree {exit_degree} (expected {})",
                self.e_scale, ok.e_scale
            )));
        }
        Ok(())
    }

    pub fn pattern(&self, n: usize) -> Result<PatternOperator> {
        PatternOperator::single(self.e_scale, self.a, n * n - 1, self.d)
    }
}

/// The parameters reproducing [`relation2_infinite`], in relation-graph edge order.
pub fn relation2_claim_params() -> Result<Vec<ClaimParams>> {
    let g = build_relation_graph(2)?;
    g.edges()
        .iter()
        .map(|e| {
            let (s, t) = (&g.vertices()[e.source], &g.vertices()[e.target]);
            let r = RELATION2_RULES.iter().find(|r| r.0 == s && r.1 == t).expect("rule");
            ClaimParams::new(2, g.out_degree_of(e.source), r.3, r.5)
        })
        .collect()
}

/// Seeded random valid parameters, one per edge of the relation graph.
pub fn sample_claim_params(n: usize, seed: u64) -> Result<Vec<ClaimParams>> {
    let g = build_relation_graph(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (n * n - 1) as i64;
    g.edges()
        .iter()
        .map(|e| {
            let deg = g.out_degree_of(e.source);
            let a = rng.random_range(0..(deg as i64 * m));
            let d = rng.random_range(0..m);
            ClaimParams::new(n, deg, a, d)
        })
        .collect()
}

/// Conjectured family on the relation graph, one parameter set per edge.
/// Always flagged experimental.
pub fn relation_claim(n: usize, params: &[ClaimParams], dim: usize, margin: Option<usize>) -> Result<CKFamily> {
    let g = build_relation_graph(n)?;
    if params.len() != g.edge_count() {
        return Err(Error::InvalidParameter(format!("{} parameter sets for {} edges", params.len(), g.edge_count())));
    }
    let patterns = g
        .edges()
        .iter()
        .zip(params)
        .map(|(e, p)| {
            p.validate(n, g.out_degree_of(e.source))?;
            p.pattern(n)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut f = CKFamily::from_patterns("claim", g, patterns, dim, margin)?
        .describe("EXPERIMENTAL: parameterised stride family on the relation graph");
    f.experimental = true;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern_mat(d: usize, f: impl Fn(usize) -> (usize, usize), upto: usize) -> SparseMat {
        let mut m = SparseMat::zeros(d, d);
        for n in 1..=upto {
            let (i, j) = f(n);
            if i <= d && j <= d {
                m.set(i, j, crate::linalg::Scalar::one()).unwrap();
            }
        }
        m
    }

    #[test]
    fn pi2_finite_operators_and_products() {
        let f = pi2_finite().unwrap();
        let e = |i, j| SparseMat::matrix_unit(4, i, j).unwrap();
        assert_eq!(f.edge_operator("x11", "x11").unwrap(), &e(2, 1));
        assert_eq!(f.edge_operator("x12", "x21").unwrap(), &e(4, 1));
        assert_eq!(f.edge_operator("x21", "x12").unwrap(), &e(1, 4));
        assert_eq!(f.edge_operator("x22", "x22").unwrap(), &e(3, 1));
        let s = f.edge_operator("x12", "x21").unwrap();
        assert_eq!(s.adjoint().mul(s).unwrap(), e(1, 1));
        // derived projections agree with the stated ones
        assert_eq!(Some(&f.projections), f.stated_projections.as_ref());
    }

    #[test]
    fn pi2_infinite_operators() {
        let f = pi2_infinite(10, None).unwrap();
        let s = f.edge_operator("x12", "x21").unwrap();
        let want = pattern_mat(10, |n| (2 * n, n), 5);
        assert_eq!(s, &want);
        let back = f.edge_operator("x21", "x12").unwrap();
        assert_eq!(back, &s.adjoint());
        let w = f.backing.window();
        let id = SparseMat::identity(10);
        assert!(s.adjoint().mul(s).unwrap().eq_on(&id, w));
        assert!(pi2_infinite(3, None).is_err());
    }

    #[test]
    fn relation2_window() {
        let f = relation2_infinite(600, Some(12)).unwrap();
        assert_eq!(f.backing, Backing::Truncated { dim: 600, margin: 12, window: 294 });
        assert!(relation2_infinite(11, None).is_err());
    }

    #[test]
    fn pi_n_finite_index_rule() {
        let f = pi_n_finite(3).unwrap();
        let e = |i, j| SparseMat::matrix_unit(9, i, j).unwrap();
        assert_eq!(f.edge_operator("x22", "x22").unwrap(), &e(3, 1));
        assert_eq!(f.edge_operator("x13", "x31").unwrap(), &e(6, 1));
        assert_eq!(f.edge_operator("x31", "x13").unwrap(), &e(1, 2));
        assert_eq!(f.edge_operator("x32", "x23").unwrap(), &e(1, 4));
    }

    #[test]
    fn claim_params_reproduce_stride_family() {
        let p = ClaimParams::new(2, 2, 0, 2).unwrap();
        assert_eq!(p.e_scale, 6);
        assert_eq!(p.pattern(2).unwrap(), PatternOperator::single(6, 0, 3, 2).unwrap());
        let params = relation2_claim_params().unwrap();
        let claim = relation_claim(2, &params, 120, None).unwrap();
        let direct = relation2_infinite(120, None).unwrap();
        assert_eq!(claim.isometries, direct.isometries);
        assert!(claim.experimental);
    }

    #[test]
    fn claim_params_out_of_range() {
        assert!(ClaimParams::new(2, 2, 0, 3).is_err());
        assert!(ClaimParams::new(2, 2, 6, 0).is_err());
        assert!(ClaimParams::new(2, 0, 0, 0).is_err());
        let mut params = relation2_claim_params().unwrap();
        params[0].e_scale = 9;
        assert!(relation_claim(2, &params, 60, None).is_err());
        assert!(relation_claim(2, &params[..3], 60, None).is_err());
    }
}
