use std::collections::BTreeMap;

use super::algebra::{function_algebra, group_algebra, matrix_algebra, permutations, FiniteAlgebra, FiniteGroup};
use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseVec};

/// Element of a `K`-fold tensor product in the product basis.
pub type Tensor<const K: usize> = BTreeMap<[usize; K], Scalar>;
pub type Tensor2 = Tensor<2>;
pub type Tensor3 = Tensor<3>;

pub fn add_to<K: Ord + Copy>(t: &mut BTreeMap<K, Scalar>, k: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_default();
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// Codomain of a comultiplication candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// `A (x) A` for the source algebra `A`.
    TensorSquare,
    /// Some other tensor product `L (x) R`.
    Other { left: FiniteAlgebra, right: FiniteAlgebra },
}

/// A linear map `A -> target` with a counit and antipode on the same basis.
#[derive(Debug, Clone)]
pub struct ComultiplicationCandidate {
    pub name: String,
    pub source: FiniteAlgebra,
    pub target: Target,
    /// `delta[i]` is the image of basis element `i`.
    pub delta: Vec<Tensor2>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<SparseVec>,
    pub antipode_convention: String,
    /// Fundamental matrix of coordinate functions, when the model has one.
    pub fundamental: Option<Vec<Vec<SparseVec>>>,
}

impl ComultiplicationCandidate {
    pub fn is_tensor_square(&self) -> bool {
        matches!(self.target, Target::TensorSquare)
    }

    pub fn target_factors(&self) -> (&FiniteAlgebra, &FiniteAlgebra) {
        match &self.target {
            Target::TensorSquare => (&self.source, &self.source),
            Target::Other { left, right } => (left, right),
        }
    }

    pub fn target_dim(&self) -> usize {
        let (l, r) = self.target_factors();
        l.dim() * r.dim()
    }

    /// Dimension the target would need for the full axiom suite.
    pub fn expected_target_dim(&self) -> usize {
        self.source.dim() * self.source.dim()
    }

    pub fn delta_of(&self, x: &SparseVec) -> Tensor2 {
        let mut out = Tensor2::new();
        for (&i, a) in x {
            for (&k, c) in &self.delta[i] {
                add_to(&mut out, k, &(a * c));
            }
        }
        out
    }

    pub fn counit_of(&self, x: &SparseVec) -> Scalar {
        x.iter().fold(Scalar::zero(), |acc, (&i, a)| acc + a * &self.counit[i])
    }

    pub fn antipode_of(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            crate::linalg::axpy(&mut out, a, &self.antipode[i]);
        }
        out
    }

    /// The same candidate with `delta` replaced by the zero map.
    pub fn with_zero_delta(mut self) -> Self {
        self.delta = vec![Tensor2::new(); self.source.dim()];
        self.name = format!("{} (zero comultiplication)", self.name);
        self
    }
}

fn unit_vec(i: usize) -> SparseVec {
    SparseVec::from([(i, Scalar::one())])
}

fn check_range(what: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
    if v < lo || v > hi {
        return Err(Error::InvalidParameter(format!("{what} = {v} outside {lo}..={hi}")));
    }
    Ok(())
}

/// `C(S_d)` with `Delta(f)(s, t) = f(st)`, `eps(f) = f(id)`, `S(f)(s) = f(s^-1)`
/// and the coordinate functions `u_ij(s) = [s(j) = i]` as fundamental matrix.
pub fn std_model(d: usize) -> Result<ComultiplicationCandidate> {
    check_range("d", d, 2, 5)?;
    let g = FiniteGroup::symmetric(d);
    let n = g.order();
    let source = function_algebra(&g, &format!("C(S{d})"));
    let mut delta = vec![Tensor2::new(); n];
    for s in 0..n {
        for t in 0..n {
            delta[g.table[s][t]].insert([s, t], Scalar::one());
        }
    }
    let counit = (0..n).map(|s| if s == g.identity { Scalar::one() } else { Scalar::zero() }).collect();
    let antipode = g.inverse.iter().map(|&i| unit_vec(i)).collect();
    let perms = permutations(d);
    let fundamental = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| perms.iter().enumerate().filter(|(_, p)| p[j] == i).map(|(s, _)| (s, Scalar::one())).collect())
                .collect()
        })
        .collect();
    Ok(ComultiplicationCandidate {
        name: format!("std_model({d})"),
        source,
        target: Target::TensorSquare,
        delta,
        counit,
        antipode,
        antipode_convention: "S(f)(s) = f(s^-1)".into(),
        fundamental: Some(fundamental),
    })
}

fn group_ring_candidate(g: &FiniteGroup, name: String) -> ComultiplicationCandidate {
    let n = g.order();
    ComultiplicationCandidate {
        source: group_algebra(g, &name),
        name,
        target: Target::TensorSquare,
        delta: (0..n).map(|a| Tensor2::from([([a, a], Scalar::one())])).collect(),
        counit: vec![Scalar::one(); n],
        antipode: g.inverse.iter().map(|&i| unit_vec(i)).collect(),
        antipode_convention: "S(g) = g^-1".into(),
        fundamental: None,
    }
}

/// Group algebra of `S_d` with `Delta(g) = g (x) g`.
pub fn group_ring_model(d: usize) -> Result<ComultiplicationCandidate> {
    check_range("d", d, 2, 5)?;
    Ok(group_ring_candidate(&FiniteGroup::symmetric(d), format!("C[S{d}]")))
}

/// Group algebra of the cyclic group of order `m`.
pub fn cyclic_group_model(m: usize) -> Result<ComultiplicationCandidate> {
    check_range("m", m, 1, 200)?;
    Ok(group_ring_candidate(&FiniteGroup::cyclic(m), format!("C[Z{m}]")))
}

/// `(l, m) -> (k, h, o, r)` with `l = (o-1)n + k` and `m = (r-1)n + h`.
pub fn literal_index(n: usize, l: usize, m: usize) -> (usize, usize, usize, usize) {
    let (o, k) = ((l - 1) / n + 1, (l - 1) % n + 1);
    let (r, h) = ((m - 1) / n + 1, (m - 1) % n + 1);
    (k, h, o, r)
}

/// Inverse of [`literal_index`]: the position of `E_or (x) E_kh` under the
/// Kronecker product.
pub fn literal_index_inverse(n: usize, k: usize, h: usize, o: usize, r: usize) -> (usize, usize) {
    ((o - 1) * n + k, (r - 1) * n + h)
}

/// The block-index map `E_{l,m} -> E_{k,h} (x) E_{o,r}` from `M_{n^2}` into
/// `M_n (x) M_n`, with `eps(E_ij) = delta_ij` and `S(E_ij) = E_ji`.
pub fn literal_delta(n: usize) -> Result<ComultiplicationCandidate> {
    check_range("n", n, 2, 6)?;
    let big = n * n;
    let source = matrix_algebra(big);
    let small = matrix_algebra(n);
    let idx = |k: usize, i: usize, j: usize| (i - 1) * k + (j - 1);
    let mut delta = Vec::with_capacity(big * big);
    let mut counit = Vec::with_capacity(big * big);
    let mut antipode = Vec::with_capacity(big * big);
    for l in 1..=big {
        for m in 1..=big {
            let (k, h, o, r) = literal_index(n, l, m);
            delta.push(Tensor2::from([([idx(n, k, h), idx(n, o, r)], Scalar::one())]));
            counit.push(if l == m { Scalar::one() } else { Scalar::zero() });
            antipode.push(unit_vec(idx(big, m, l)));
        }
    }
    Ok(ComultiplicationCandidate {
        name: format!("literal_delta({n})"),
        source,
        target: Target::Other { left: small.clone(), right: small },
        delta,
        counit,
        antipode,
        antipode_convention: "S(E_ij) = E_ji".into(),
        fundamental: None,
    })
}
