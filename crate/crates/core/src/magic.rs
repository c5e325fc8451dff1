//! Magic unitaries: verification of the defining relations and exhaustive
//! search for permutation matrices commuting with a 0/1 matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::VertexLabel;
use crate::linalg::{Scalar, SparseMat};

/// A magic unitary with scalar entries, i.e. a permutation matrix.
///
/// `perm[j - 1]` is the row holding the 1 of column `j` (1-based), so the
/// matrix is `sum_j E_{perm[j], j}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ScalarMagicUnitary {
    perm: Vec<usize>,
}

impl ScalarMagicUnitary {
    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &p in &perm {
            if p == 0 || p > d || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidParameter(format!("not a permutation of 1..={d}: {perm:?}")));
            }
        }
        Ok(ScalarMagicUnitary { perm })
    }

    pub fn identity(d: usize) -> Self {
        ScalarMagicUnitary { perm: (1..=d).collect() }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// The permutation word `perm[1..=d]`.
    pub fn word(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, j: usize) -> usize {
        self.perm[j - 1]
    }

    pub fn to_matrix(&self) -> SparseMat {
        let d = self.dim();
        SparseMat::from_entries(d, d, self.perm.iter().enumerate().map(|(j, &i)| (i, j + 1, Scalar::one())))
            .expect("permutation entries in range")
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &ScalarMagicUnitary) -> ScalarMagicUnitary {
        ScalarMagicUnitary { perm: other.perm.iter().map(|&j| self.perm[j - 1]).collect() }
    }

    pub fn inverse(&self) -> ScalarMagicUnitary {
        let mut inv = vec![0; self.dim()];
        for (j, &i) in self.perm.iter().enumerate() {
            inv[i - 1] = j + 1;
        }
        ScalarMagicUnitary { perm: inv }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == ScalarMagicUnitary::identity(self.dim())
    }

    pub fn to_block(&self) -> BlockMagicUnitary {
        let d = self.dim();
        let m = self.to_matrix();
        let entries = (1..=d)
            .map(|i| (1..=d).map(|j| SparseMat::identity(1).scale(&m.get(i, j).expect("in range"))).collect())
            .collect();
        BlockMagicUnitary { entries }
    }
}

/// `u = conj(u)` and `u u^t = I = u^t u`, checked on the matrix itself.
pub fn is_orthogonal_biunitary(u: &ScalarMagicUnitary) -> bool {
    let m = u.to_matrix();
    let id = SparseMat::identity(u.dim());
    m == m.conj()
        && m.mul(&m.transpose()).map(|p| p == id).unwrap_or(false)
        && m.transpose().mul(&m).map(|p| p == id).unwrap_or(false)
}

/// Involution sending the canonical index of `x_{ij}` to that of `x_{ji}`.
pub fn pi_n(n: usize) -> Result<ScalarMagicUnitary> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let perm = (1..=n * n).map(|k| VertexLabel::from_index(n, k).transpose().index(n)).collect();
    ScalarMagicUnitary::from_perm(perm)
}

/// Square matrix of operator entries, each `m x m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMagicUnitary {
    entries: Vec<Vec<SparseMat>>,
}

impl BlockMagicUnitary {
    pub fn new(entries: Vec<Vec<SparseMat>>) -> Result<Self> {
        let d = entries.len();
        let m = entries.first().and_then(|r| r.first()).map_or(0, SparseMat::rows);
        for row in &entries {
            if row.len() != d {
                return Err(Error::DimensionMismatch(format!("row of length {} in a {d}x{d} candidate", row.len())));
            }
            for e in row {
                if e.rows() != m || e.cols() != m {
                    return Err(Error::DimensionMismatch(format!(
                        "entry {}x{} with block size {m}",
                        e.rows(),
                        e.cols()
                    )));
                }
            }
        }
        Ok(BlockMagicUnitary { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn block_dim(&self) -> usize {
        self.entries.first().and_then(|r| r.first()).map_or(0, SparseMat::rows)
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparseMat {
        &self.entries[i - 1][j - 1]
    }

    /// The `d m x d m` matrix with block `(i, j)` equal to `u_{ij}`.
    pub fn flatten(&self) -> SparseMat {
        let (d, m) = (self.dim(), self.block_dim());
        let mut entries = vec![];
        for i in 1..=d {
            for j in 1..=d {
                for (a, b, v) in self.entry(i, j).iter() {
                    entries.push(((i - 1) * m + a, (j - 1) * m + b, v.clone()));
                }
            }
        }
        SparseMat::from_entries(d * m, d * m, entries).expect("in range")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MagicReport {
    pub projection_failures: Vec<(usize, usize)>,
    pub row_sum_failures: Vec<usize>,
    pub col_sum_failures: Vec<usize>,
    pub orthogonality_failures: Vec<((usize, usize), (usize, usize))>,
    pub passed: bool,
}

/// Checks the magic-unitary relations: projection entries, unit row and
/// column sums, and orthogonality of distinct entries sharing a row or column.
pub fn verify_magic(u: &BlockMagicUnitary) -> MagicReport {
    let (d, m) = (u.dim(), u.block_dim());
    let id = SparseMat::identity(m);
    let mut r = MagicReport::default();
    for i in 1..=d {
        for j in 1..=d {
            if !u.entry(i, j).is_orthogonal_projection() {
                r.projection_failures.push((i, j));
            }
        }
    }
    let sum = |it: &mut dyn Iterator<Item = &SparseMat>| {
        it.fold(SparseMat::zeros(m, m), |acc, x| acc.add(x).expect("same block size"))
    };
    for i in 1..=d {
        if sum(&mut (1..=d).map(|k| u.entry(i, k))) != id {
            r.row_sum_failures.push(i);
        }
        if sum(&mut (1..=d).map(|k| u.entry(k, i))) != id {
            r.col_sum_failures.push(i);
        }
    }
    let zero = |a: &SparseMat, b: &SparseMat| a.mul(b).map(|p| p.is_zero()).unwrap_or(false);
    for i in 1..=d {
        for j in 1..=d {
            for k in j + 1..=d {
                if !zero(u.entry(i, j), u.entry(i, k)) {
                    r.orthogonality_failures.push(((i, j), (i, k)));
                }
                if !zero(u.entry(j, i), u.entry(k, i)) {
                    r.orthogonality_failures.push(((j, i), (k, i)));
                }
            }
        }
    }
    r.passed = r.projection_failures.is_empty()
        && r.row_sum_failures.is_empty()
        && r.col_sum_failures.is_empty()
        && r.orthogonality_failures.is_empty();
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Commutant {
    pub permutations: Vec<ScalarMagicUnitary>,
    pub count: usize,
    pub overflow: bool,
}

pub const DEFAULT_COMMUTANT_LIMIT: usize = 10_000;

/// All permutation matrices `P` with `P A = A P`, i.e. the automorphisms of
/// the digraph with adjacency matrix `A`.
///
/// Vertices are assigned in index order with candidate images tried in
/// increasing order, so results come out lexicographically sorted by word and
/// a truncated list is always the lexicographically first `limit` elements.
/// Candidates are pruned by (in-degree, out-degree, loop) class and by
/// adjacency consistency with earlier assignments.
pub fn commuting_magic_unitaries(a: &SparseMat, limit: usize) -> Result<Commutant> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("adjacency matrix must be square".into()));
    }
    if !a.is_zero_one() {
        return Err(Error::NotZeroOne);
    }
    let d = a.rows();
    let mut adj = vec![vec![false; d]; d];
    for (i, j, _) in a.iter() {
        adj[i - 1][j - 1] = true;
    }
    let class: Vec<(usize, usize, bool)> = (0..d)
        .map(|v| {
            let out = adj[v].iter().filter(|&&x| x).count();
            let inn = (0..d).filter(|&u| adj[u][v]).count();
            (inn, out, adj[v][v])
        })
        .collect();

    struct Search<'a> {
        adj: &'a [Vec<bool>],
        class: &'a [(usize, usize, bool)],
        image: Vec<usize>,
        used: Vec<bool>,
        found: Vec<ScalarMagicUnitary>,
        limit: usize,
        overflow: bool,
    }

    impl Search<'_> {
        fn consistent(&self, v: usize, w: usize) -> bool {
            (0..v).all(|u| {
                let x = self.image[u];
                self.adj[u][v] == self.adj[x][w] && self.adj[v][u] == self.adj[w][x]
            })
        }

        fn run(&mut self, v: usize) {
            let d = self.adj.len();
            if self.overflow {
                return;
            }
            if v == d {
                if self.found.len() == self.limit {
                    self.overflow = true;
                    return;
                }
                // vertex v maps to image[v]; the matrix has P[image[v], v] = 1
                let word = self.image.iter().map(|&x| x + 1).collect();
                self.found.push(ScalarMagicUnitary { perm: word });
                return;
            }
            for w in 0..d {
                if self.used[w] || self.class[w] != self.class[v] || !self.consistent(v, w) {
                    continue;
                }
                self.image[v] = w;
                self.used[w] = true;
                self.run(v + 1);
                self.used[w] = false;
                if self.overflow {
                    return;
                }
            }
        }
    }

    let mut s = Search {
        adj: &adj,
        class: &class,
        image: vec![0; d],
        used: vec![false; d],
        found: vec![],
        limit,
        overflow: false,
    };
    s.run(0);
    let count = s.found.len();
    Ok(Commutant { permutations: s.found, count, overflow: s.overflow })
}
