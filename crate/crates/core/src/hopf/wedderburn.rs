use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, Complex, DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::FiniteAlgebra;
use super::axioms::{check_t1_t2, cointegral_map_rank, find_cointegral, AxiomVerdict};
use super::candidate::ComultiplicationCandidate;
use crate::error::{Error, Result};
use crate::linalg::{axpy, nullspace, rank, Scalar, SparseVec};

pub const MAX_WEDDERBURN_DIM: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedderburnReport {
    pub algebra: String,
    pub dim: usize,
    pub center_dim: usize,
    /// Block sizes in ascending order.
    pub blocks: Vec<usize>,
    pub seed: u64,
    pub tolerance: f64,
}

/// Trace of left multiplication by each basis element.
fn regular_traces(alg: &FiniteAlgebra) -> Vec<Scalar> {
    let d = alg.dim();
    (0..d)
        .map(|k| {
            (0..d).fold(Scalar::zero(), |acc, i| acc + alg.basis_product(k, i).get(&i).cloned().unwrap_or_default())
        })
        .collect()
}

/// Whether the trace form `(x, y) -> Tr(L_{xy})` is nondegenerate.
pub fn is_semisimple(alg: &FiniteAlgebra) -> bool {
    let d = alg.dim();
    let tr = regular_traces(alg);
    let gram: Vec<SparseVec> = (0..d)
        .map(|i| {
            (0..d)
                .filter_map(|j| {
                    let v = alg.basis_product(i, j).iter().fold(Scalar::zero(), |acc, (&k, c)| acc + c * &tr[k]);
                    (!v.is_zero()).then_some((j, v))
                })
                .collect()
        })
        .collect();
    rank(&gram) == d
}

/// Exact basis of the center.
pub fn center(alg: &FiniteAlgebra) -> Vec<SparseVec> {
    let d = alg.dim();
    let mut rows: std::collections::BTreeMap<usize, SparseVec> = Default::default();
    for k in 0..d {
        for i in 0..d {
            let mut comm = alg.basis_product(k, i).clone();
            axpy(&mut comm, &-Scalar::one(), alg.basis_product(i, k));
            for (m, c) in comm {
                rows.entry(i * d + m).or_default().insert(k, c);
            }
        }
    }
    let rows: Vec<SparseVec> = rows.into_values().collect();
    nullspace(&rows, d)
}

/// Block sizes of a semisimple *-algebra, read off the eigenvalue
/// multiplicities of a random self-adjoint central element acting on the
/// regular representation.
pub fn artin_wedderburn(alg: &FiniteAlgebra, seed: u64, tolerance: f64) -> Result<WedderburnReport> {
    let d = alg.dim();
    if d == 0 || d > MAX_WEDDERBURN_DIM {
        return Err(Error::InvalidParameter(format!("dimension {d} outside 1..={MAX_WEDDERBURN_DIM}")));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tolerance}")));
    }
    if !is_semisimple(alg) {
        return Err(Error::NotSemisimple(format!("{} has a degenerate trace form", alg.name)));
    }
    let z_basis = center(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = SparseVec::new();
    // complex coefficients; real ones cannot separate conjugate characters
    let den = BigInt::from(1i64 << 30);
    let mut draw = || BigRational::new(rng.random_range(-(1i64 << 30)..=(1i64 << 30)).into(), den.clone());
    for c in &z_basis {
        let coeff = Scalar::new(draw(), draw());
        axpy(&mut z, &coeff, c);
    }
    let mut h = alg.star(&z);
    axpy(&mut h, &Scalar::one(), &z);

    let to_c = |c: &Scalar| {
        let (re, im) = c.to_f64_pair();
        Complex::new(re, im)
    };
    let mut lh = DMatrix::<Complex<f64>>::zeros(d, d);
    for i in 0..d {
        for (m, c) in alg.mul(&h, &alg.basis(i)) {
            lh[(m, i)] = to_c(&c);
        }
    }
    // L_h is self-adjoint for <x, y> = Tr(L_{x* y}); conjugating by the
    // Cholesky factor of that Gram matrix makes it Hermitian.
    let tr = regular_traces(alg);
    let mut gram = DMatrix::<Complex<f64>>::zeros(d, d);
    for i in 0..d {
        let si = alg.star(&alg.basis(i));
        for j in 0..d {
            let v = alg.mul(&si, &alg.basis(j)).iter().fold(Scalar::zero(), |acc, (&k, c)| acc + c * &tr[k]);
            gram[(i, j)] = to_c(&v);
        }
    }
    let chol = Cholesky::new(gram)
        .ok_or_else(|| Error::NotSemisimple(format!("{} has an indefinite trace form", alg.name)))?;
    let upper = chol.l().adjoint();
    let upper_inv = upper
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::UnresolvedClusters { tolerance, detail: "singular Gram factor".into() })?;
    let b = &upper * lh * upper_inv;
    let b = (&b + b.adjoint()).scale(0.5);
    let mut values: Vec<f64> = SymmetricEigen::new(b).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut mult: Vec<usize> = vec![];
    let mut last: Option<f64> = None;
    for v in values {
        match last {
            Some(l) if (v - l).abs() <= tolerance * scale => *mult.last_mut().expect("open cluster") += 1,
            _ => mult.push(1),
        }
        last = Some(v);
    }

    let mut blocks = Vec::with_capacity(mult.len());
    for &m in &mult {
        let s = (m as f64).sqrt().round() as usize;
        if s * s != m {
            return Err(Error::UnresolvedClusters {
                tolerance,
                detail: format!("cluster of multiplicity {m} is not a square"),
            });
        }
        blocks.push(s);
    }
    if blocks.len() != z_basis.len() {
        return Err(Error::UnresolvedClusters {
            tolerance,
            detail: format!("{} clusters for a center of dimension {}", blocks.len(), z_basis.len()),
        });
    }
    blocks.sort_unstable();
    debug_assert_eq!(blocks.iter().map(|b| b * b).sum::<usize>(), d);
    Ok(WedderburnReport { algebra: alg.name.clone(), dim: d, center_dim: z_basis.len(), blocks, seed, tolerance })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscreteQuantumGroupReport {
    pub model: String,
    pub wedderburn: AxiomVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    pub t1_surjective: AxiomVerdict,
    pub t2_surjective: AxiomVerdict,
    pub cointegral_exists: AxiomVerdict,
    pub cointegral_nondegenerate: AxiomVerdict,
    pub passed: bool,
}

fn verdict(ok: bool, checked: usize, detail: String) -> AxiomVerdict {
    AxiomVerdict::described(ok, checked, detail)
}

/// Semisimplicity, surjectivity of `T1`/`T2` and a nondegenerate cointegral.
pub fn discrete_qg_check(c: &ComultiplicationCandidate, seed: u64, tolerance: f64) -> DiscreteQuantumGroupReport {
    let (wedderburn, blocks) = match artin_wedderburn(&c.source, seed, tolerance) {
        Ok(r) => (verdict(true, r.dim, format!("blocks {:?}", r.blocks)), Some(r.blocks)),
        Err(e) => (verdict(false, 0, e.to_string()), None),
    };
    let (t1_surjective, t2_surjective) = match check_t1_t2(c) {
        Ok(t) => (
            verdict(t.t1_bijective(), t.dim, format!("rank {} of {}", t.t1_rank, t.dim)),
            verdict(t.t2_bijective(), t.dim, format!("rank {} of {}", t.t2_rank, t.dim)),
        ),
        Err(e) => (verdict(false, 0, e.to_string()), verdict(false, 0, e.to_string())),
    };
    let (cointegral_exists, cointegral_nondegenerate) = match find_cointegral(c) {
        Ok(r) if r.dimension > 0 => {
            let rank = cointegral_map_rank(c, &r.vectors[0]).unwrap_or(0);
            let d = c.source.dim();
            (
                verdict(r.right_sided && r.absorption, r.dimension, format!("cointegral {}", r.basis[0])),
                verdict(rank == d, d, format!("a -> Delta(h)(1 (x) a) has rank {rank} of {d}")),
            )
        }
        Ok(_) => (verdict(false, 0, "only the zero solution".into()), verdict(false, 0, "no cointegral".into())),
        Err(e) => (verdict(false, 0, e.to_string()), verdict(false, 0, e.to_string())),
    };
    let passed = [&wedderburn, &t1_surjective, &t2_surjective, &cointegral_exists, &cointegral_nondegenerate]
        .iter()
        .all(|v| v.passed());
    DiscreteQuantumGroupReport {
        model: c.name.clone(),
        wedderburn,
        blocks,
        t1_surjective,
        t2_surjective,
        cointegral_exists,
        cointegral_nondegenerate,
        passed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupType {
    GL,
    SL,
    SO,
    SU,
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(GroupType::GL),
            "SL" => Ok(GroupType::SL),
            "SO" => Ok(GroupType::SO),
            "SU" => Ok(GroupType::SU),
            _ => Err(Error::Parse(format!("unknown group type {s:?}"))),
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Metadata naming the coordinate ring a model run stands in for. No
/// localization arithmetic is performed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupRingDescriptor {
    pub group_type: GroupType,
    pub n: usize,
    pub localization_symbol: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<u64>,
    pub localization: String,
}

/// `shift` must not be 1; `None` means plain inversion of `t`.
pub fn group_ring_descriptor(group_type: GroupType, n: usize, shift: Option<u64>) -> Result<GroupRingDescriptor> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if shift == Some(1) {
        return Err(Error::InvalidParameter("shift 1 is excluded".into()));
    }
    let localization = match shift {
        None | Some(0) => "t^-1".to_string(),
        Some(b) => format!("(t-{b})^-1"),
    };
    Ok(GroupRingDescriptor { group_type, n, localization_symbol: "t".into(), shift, localization })
}
