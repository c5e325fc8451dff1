use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::FiniteAlgebra;
use super::candidate::{add_to, ComultiplicationCandidate, Tensor, Tensor2, Tensor3};
use crate::error::{Error, Result};
use crate::linalg::{axpy, nullspace, Echelon, Scalar, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of one axiom, with the first failing basis tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub status: Status,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn not_applicable(detail: String) -> Self {
        AxiomVerdict {
            status: Status::NotApplicable,
            checked: 0,
            mode: None,
            counterexample: None,
            detail: Some(detail),
        }
    }

    fn flag(ok: bool, checked: usize, detail: Option<String>) -> Self {
        AxiomVerdict {
            status: if ok { Status::Pass } else { Status::Fail },
            checked,
            mode: None,
            counterexample: None,
            detail: if ok { None } else { detail },
        }
    }

    pub(crate) fn described(ok: bool, checked: usize, detail: String) -> Self {
        AxiomVerdict {
            status: if ok { Status::Pass } else { Status::Fail },
            checked,
            mode: None,
            counterexample: None,
            detail: Some(detail),
        }
    }

    fn with_mode(mut self, mode: &str) -> Self {
        self.mode = Some(mode.into());
        self
    }
}

/// Runs `check` over `tuples` in order and stops at the first failure.
fn sweep<I, T, F>(alg: &FiniteAlgebra, tuples: I, check: F) -> AxiomVerdict
where
    I: IntoIterator<Item = T>,
    T: AsRef<[usize]>,
    F: Fn(&[usize]) -> bool,
{
    let mut checked = 0;
    for t in tuples {
        checked += 1;
        if !check(t.as_ref()) {
            return AxiomVerdict {
                status: Status::Fail,
                checked,
                mode: None,
                counterexample: Some(t.as_ref().iter().map(|&i| alg.label(i).to_string()).collect()),
                detail: None,
            };
        }
    }
    AxiomVerdict { status: Status::Pass, checked, mode: None, counterexample: None, detail: None }
}

fn pairs(d: usize) -> impl Iterator<Item = [usize; 2]> {
    (0..d).cartesian_product(0..d).map(|(a, b)| [a, b])
}

/// Multiplies basis element `e` into factor `slot`, on the left or right.
fn mul_factor<const K: usize>(alg: &FiniteAlgebra, t: &Tensor<K>, slot: usize, e: usize, from_left: bool) -> Tensor<K> {
    let mut out = Tensor::<K>::new();
    for (key, c) in t {
        let prod = if from_left { alg.basis_product(e, key[slot]) } else { alg.basis_product(key[slot], e) };
        for (&k, x) in prod {
            let mut nk = *key;
            nk[slot] = k;
            add_to(&mut out, nk, &(c * x));
        }
    }
    out
}

fn tensor_mul(left: &FiniteAlgebra, right: &FiniteAlgebra, x: &Tensor2, y: &Tensor2) -> Tensor2 {
    let mut out = Tensor2::new();
    for ([a, b], c1) in x {
        for ([p, q], c2) in y {
            let lp = left.basis_product(*a, *p);
            let rp = right.basis_product(*b, *q);
            if lp.is_empty() || rp.is_empty() {
                continue;
            }
            let c = c1 * c2;
            for (&u, cu) in lp {
                for (&v, cv) in rp {
                    add_to(&mut out, [u, v], &(&c * &(cu * cv)));
                }
            }
        }
    }
    out
}

/// `(a (x) 1 (x) 1)(Delta (x) id)(Delta(b)(1 (x) c))`.
fn coassoc_lhs(c: &ComultiplicationCandidate, a: usize, b: usize, cc: usize) -> Tensor3 {
    let alg = &c.source;
    let t = mul_factor(alg, &c.delta[b], 1, cc, false);
    let mut t3 = Tensor3::new();
    for ([p, q], x) in &t {
        for ([r, s], y) in &c.delta[*p] {
            add_to(&mut t3, [*r, *s, *q], &(x * y));
        }
    }
    mul_factor(alg, &t3, 0, a, true)
}

/// `(id (x) Delta)((a (x) 1)Delta(b))(1 (x) 1 (x) c)`.
fn coassoc_rhs(c: &ComultiplicationCandidate, a: usize, b: usize, cc: usize) -> Tensor3 {
    let alg = &c.source;
    let t = mul_factor(alg, &c.delta[b], 0, a, true);
    let mut t3 = Tensor3::new();
    for ([p, q], x) in &t {
        for ([r, s], y) in &c.delta[*q] {
            add_to(&mut t3, [*p, *r, *s], &(x * y));
        }
    }
    mul_factor(alg, &t3, 2, cc, false)
}

fn coassociative_at(c: &ComultiplicationCandidate, t: &[usize]) -> bool {
    coassoc_lhs(c, t[0], t[1], t[2]) == coassoc_rhs(c, t[0], t[1], t[2])
}

/// How coassociativity triples are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleSweep {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomOptions {
    pub triples: TripleSweep,
}

/// Largest source dimension checked exhaustively by default.
pub const EXHAUSTIVE_TRIPLE_LIMIT: usize = 24;
pub const DEFAULT_TRIPLE_SAMPLES: usize = 100_000;

impl AxiomOptions {
    pub fn default_for(c: &ComultiplicationCandidate, seed: u64) -> Self {
        let triples = if c.source.dim() <= EXHAUSTIVE_TRIPLE_LIMIT {
            TripleSweep::Exhaustive
        } else {
            TripleSweep::Sampled { count: DEFAULT_TRIPLE_SAMPLES, seed }
        };
        AxiomOptions { triples }
    }
}

/// Coassociativity in multiplier form over basis triples.
pub fn check_coassociativity(c: &ComultiplicationCandidate, sweep_kind: TripleSweep) -> AxiomVerdict {
    if !c.is_tensor_square() {
        return mismatch(c);
    }
    let d = c.source.dim();
    match sweep_kind {
        TripleSweep::Exhaustive => {
            let triples = (0..d).cartesian_product(0..d).cartesian_product(0..d).map(|((a, b), cc)| [a, b, cc]);
            sweep(&c.source, triples, |t| coassociative_at(c, t)).with_mode("exhaustive")
        }
        TripleSweep::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<[usize; 3]> =
                (0..count).map(|_| [rng.random_range(0..d), rng.random_range(0..d), rng.random_range(0..d)]).collect();
            let first_bad = samples.iter().filter(|t| !coassociative_at(c, &t[..])).min().copied();
            let mut v =
                AxiomVerdict::flag(first_bad.is_none(), count, None).with_mode(&format!("sampled (seed {seed})"));
            v.counterexample = first_bad.map(|t| t.iter().map(|&i| c.source.label(i).to_string()).collect());
            v
        }
    }
}

fn mismatch(c: &ComultiplicationCandidate) -> AxiomVerdict {
    AxiomVerdict::not_applicable(format!(
        "not applicable: target mismatch (target dimension {} vs {} for the tensor square)",
        c.target_dim(),
        c.expected_target_dim()
    ))
}

/// Full report for a comultiplication candidate.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub model: String,
    pub antipode_convention: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub tensor_square_dim: usize,
    pub coassociativity: AxiomVerdict,
    pub counit_left: AxiomVerdict,
    pub counit_right: AxiomVerdict,
    pub antipode_left: AxiomVerdict,
    pub antipode_right: AxiomVerdict,
    pub delta_homomorphism: AxiomVerdict,
    pub t1_injective: AxiomVerdict,
    pub t1_surjective: AxiomVerdict,
    pub t2_injective: AxiomVerdict,
    pub t2_surjective: AxiomVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magic_relations: Option<AxiomVerdict>,
    pub passed: bool,
}

impl AxiomReport {
    pub fn verdicts(&self) -> Vec<(&'static str, &AxiomVerdict)> {
        let mut v = vec![
            ("coassociativity", &self.coassociativity),
            ("counit_left", &self.counit_left),
            ("counit_right", &self.counit_right),
            ("antipode_left", &self.antipode_left),
            ("antipode_right", &self.antipode_right),
            ("delta_homomorphism", &self.delta_homomorphism),
            ("t1_injective", &self.t1_injective),
            ("t1_surjective", &self.t1_surjective),
            ("t2_injective", &self.t2_injective),
            ("t2_surjective", &self.t2_surjective),
        ];
        if let Some(m) = &self.magic_relations {
            v.push(("magic_relations", m));
        }
        v
    }
}

pub fn check_axioms(c: &ComultiplicationCandidate) -> AxiomReport {
    check_axioms_with(c, &AxiomOptions::default_for(c, 0))
}

pub fn check_axioms_with(c: &ComultiplicationCandidate, opts: &AxiomOptions) -> AxiomReport {
    let alg = &c.source;
    let d = alg.dim();
    let square = c.is_tensor_square();
    let pairwise = |f: &dyn Fn(usize, usize) -> bool| {
        if square {
            sweep(alg, pairs(d), |t| f(t[0], t[1]))
        } else {
            mismatch(c)
        }
    };

    let coassociativity = check_coassociativity(c, opts.triples);
    let counit_left = pairwise(&|a, b| {
        let t = mul_factor(alg, &c.delta[a], 1, b, false);
        let mut got = SparseVec::new();
        for ([p, q], x) in &t {
            crate::linalg::axpy(&mut got, &(x * &c.counit[*p]), &alg.basis(*q));
        }
        got == *alg.basis_product(a, b)
    });
    let counit_right = pairwise(&|a, b| {
        let t = mul_factor(alg, &c.delta[b], 0, a, true);
        let mut got = SparseVec::new();
        for ([p, q], x) in &t {
            axpy(&mut got, &(x * &c.counit[*q]), &alg.basis(*p));
        }
        got == *alg.basis_product(a, b)
    });
    let antipode_left = pairwise(&|a, b| {
        let t = mul_factor(alg, &c.delta[a], 1, b, false);
        let mut got = SparseVec::new();
        for ([p, q], x) in &t {
            axpy(&mut got, x, &alg.mul(&c.antipode[*p], &alg.basis(*q)));
        }
        got == crate::linalg::scale_vec(&alg.basis(b), &c.counit[a])
    });
    let antipode_right = pairwise(&|a, b| {
        let t = mul_factor(alg, &c.delta[b], 0, a, true);
        let mut got = SparseVec::new();
        for ([p, q], x) in &t {
            axpy(&mut got, x, &alg.mul(&alg.basis(*p), &c.antipode[*q]));
        }
        got == crate::linalg::scale_vec(&alg.basis(a), &c.counit[b])
    });
    let (tl, tr) = c.target_factors();
    let delta_homomorphism = sweep(alg, pairs(d), |t| {
        let lhs = c.delta_of(alg.basis_product(t[0], t[1]));
        lhs == tensor_mul(tl, tr, &c.delta[t[0]], &c.delta[t[1]])
    });

    let ranks = check_t1_t2(c).ok();
    let dsq = d * d;
    let rank_verdicts = |r: Option<usize>| match r {
        Some(r) => {
            let detail = Some(format!("rank {r} of {dsq}"));
            (AxiomVerdict::flag(r == dsq, dsq, detail.clone()), AxiomVerdict::flag(r == dsq, dsq, detail))
        }
        None => (mismatch(c), mismatch(c)),
    };
    let (t1_injective, t1_surjective) = rank_verdicts(ranks.as_ref().map(|r| r.t1_rank));
    let (t2_injective, t2_surjective) = rank_verdicts(ranks.as_ref().map(|r| r.t2_rank));
    let magic_relations = c.fundamental.as_ref().map(|u| check_magic_relations(alg, u));

    let mut report = AxiomReport {
        model: c.name.clone(),
        antipode_convention: c.antipode_convention.clone(),
        source_dim: d,
        target_dim: c.target_dim(),
        tensor_square_dim: c.expected_target_dim(),
        coassociativity,
        counit_left,
        counit_right,
        antipode_left,
        antipode_right,
        delta_homomorphism,
        t1_injective,
        t1_surjective,
        t2_injective,
        t2_surjective,
        t1_rank: ranks.as_ref().map(|r| r.t1_rank),
        t2_rank: ranks.as_ref().map(|r| r.t2_rank),
        magic_relations,
        passed: false,
    };
    report.passed = report.verdicts().iter().all(|(_, v)| v.passed());
    report
}

/// Entries idempotent and self-adjoint, rows and columns summing to the
/// unit, distinct entries of a row or column orthogonal.
pub fn check_magic_relations(alg: &FiniteAlgebra, u: &[Vec<SparseVec>]) -> AxiomVerdict {
    let n = u.len();
    if u.iter().any(|row| row.len() != n) {
        return AxiomVerdict::flag(false, 0, Some("matrix is not square".into()));
    }
    let mut checked = 0;
    let fail = |what: String| AxiomVerdict::flag(false, 0, Some(what));
    for i in 0..n {
        for j in 0..n {
            checked += 1;
            let x = &u[i][j];
            if alg.mul(x, x) != *x || alg.star(x) != *x {
                return fail(format!("u{}{} is not a projection", i + 1, j + 1));
            }
            for k in j + 1..n {
                if !alg.mul(x, &u[i][k]).is_empty() || !alg.mul(&u[j][i], &u[k][i]).is_empty() {
                    return fail(format!("entries in line {} are not orthogonal", i + 1));
                }
            }
        }
        let row = u[i].iter().fold(SparseVec::new(), |mut acc, x| {
            axpy(&mut acc, &Scalar::one(), x);
            acc
        });
        let col = (0..n).fold(SparseVec::new(), |mut acc, k| {
            axpy(&mut acc, &Scalar::one(), &u[k][i]);
            acc
        });
        if row != *alg.unit() || col != *alg.unit() {
            return fail(format!("line {} does not sum to the unit", i + 1));
        }
    }
    AxiomVerdict::flag(true, checked, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TRanks {
    pub dim: usize,
    pub t1_rank: usize,
    pub t2_rank: usize,
}

impl TRanks {
    pub fn t1_bijective(&self) -> bool {
        self.t1_rank == self.dim
    }

    pub fn t2_bijective(&self) -> bool {
        self.t2_rank == self.dim
    }
}

fn flatten(d: usize, t: &Tensor2) -> SparseVec {
    t.iter().map(|([p, q], x)| (p * d + q, x.clone())).collect()
}

/// Exact ranks of `T1(a (x) b) = Delta(a)(1 (x) b)` and
/// `T2(a (x) b) = (a (x) 1)Delta(b)` on the tensor square.
pub fn check_t1_t2(c: &ComultiplicationCandidate) -> Result<TRanks> {
    if !c.is_tensor_square() {
        return Err(Error::TargetMismatch { target: c.target_dim(), expected: c.expected_target_dim() });
    }
    let alg = &c.source;
    let d = alg.dim();
    let mut t1 = Echelon::new();
    let mut t2 = Echelon::new();
    for [a, b] in pairs(d) {
        t1.insert(&flatten(d, &mul_factor(alg, &c.delta[a], 1, b, false)));
        t2.insert(&flatten(d, &mul_factor(alg, &c.delta[b], 0, a, true)));
    }
    Ok(TRanks { dim: d * d, t1_rank: t1.rank(), t2_rank: t2.rank() })
}

#[derive(Debug, Clone, Serialize)]
pub struct CointegralReport {
    pub model: String,
    pub dimension: usize,
    /// Solution basis, formatted in the model's basis labels.
    pub basis: Vec<String>,
    #[serde(skip)]
    pub vectors: Vec<SparseVec>,
    /// `Delta(a)(h (x) 1) = h (x) a` for every basis `a` and solution `h`.
    pub right_sided: bool,
    /// `a h = h a = eps(a) h` for every basis `a` and solution `h`.
    pub absorption: bool,
}

/// Solves `Delta(a)(1 (x) h) = a (x) h` for all basis `a` exactly.
pub fn find_cointegral(c: &ComultiplicationCandidate) -> Result<CointegralReport> {
    if !c.is_tensor_square() {
        return Err(Error::TargetMismatch { target: c.target_dim(), expected: c.expected_target_dim() });
    }
    let alg = &c.source;
    let d = alg.dim();
    // equation rows indexed by (a, p, q), columns by the coordinate x of h
    let mut rows: std::collections::BTreeMap<usize, SparseVec> = Default::default();
    for x in 0..d {
        for a in 0..d {
            let mut t = mul_factor(alg, &c.delta[a], 1, x, false);
            add_to(&mut t, [a, x], &-Scalar::one());
            for ([p, q], v) in t {
                rows.entry(a * d * d + p * d + q).or_default().insert(x, v);
            }
        }
    }
    let rows: Vec<SparseVec> = rows.into_values().collect();
    let vectors = nullspace(&rows, d);

    let right_sided = vectors.iter().all(|h| {
        (0..d).all(|a| {
            let lhs = mul_by_left_tensor(alg, &c.delta[a], h);
            let mut rhs = Tensor2::new();
            for (k, v) in h {
                add_to(&mut rhs, [*k, a], v);
            }
            lhs == rhs
        })
    });
    let absorption = vectors.iter().all(|h| {
        (0..d).all(|a| {
            let e = alg.basis(a);
            let want = crate::linalg::scale_vec(h, &c.counit[a]);
            alg.mul(&e, h) == want && alg.mul(h, &e) == want
        })
    });
    Ok(CointegralReport {
        model: c.name.clone(),
        dimension: vectors.len(),
        basis: vectors.iter().map(|h| alg.format(h)).collect(),
        vectors,
        right_sided,
        absorption,
    })
}

/// `t (h (x) 1)`.
fn mul_by_left_tensor(alg: &FiniteAlgebra, t: &Tensor2, h: &SparseVec) -> Tensor2 {
    let mut out = Tensor2::new();
    for ([p, q], x) in t {
        for (&k, y) in &alg.mul(&alg.basis(*p), h) {
            add_to(&mut out, [k, *q], &(x * y));
        }
    }
    out
}

/// Rank of `a -> Delta(h)(1 (x) a)`; full rank means the map is injective.
pub fn cointegral_map_rank(c: &ComultiplicationCandidate, h: &SparseVec) -> Result<usize> {
    if !c.is_tensor_square() {
        return Err(Error::TargetMismatch { target: c.target_dim(), expected: c.expected_target_dim() });
    }
    let alg = &c.source;
    let d = alg.dim();
    let dh = c.delta_of(h);
    let mut ech = Echelon::new();
    for a in 0..d {
        ech.insert(&flatten(d, &mul_factor(alg, &dh, 1, a, false)));
    }
    Ok(ech.rank())
}

#[derive(Debug, Clone, Serialize)]
pub struct CorepReport {
    pub comultiplication: AxiomVerdict,
    pub counit: AxiomVerdict,
    pub antipode: AxiomVerdict,
    pub passed: bool,
}

/// `Delta(v_ij) = sum_k v_ik (x) v_kj`, `eps(v_ij) = delta_ij` and
/// `S(v_ij) = v_ji*`, entrywise.
pub fn verify_corepresentation(v: &[Vec<SparseVec>], c: &ComultiplicationCandidate) -> Result<CorepReport> {
    let n = v.len();
    if v.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("corepresentation matrix must be square".into()));
    }
    let alg = &c.source;
    let entries = || (0..n).cartesian_product(0..n);
    let first_fail = |f: &dyn Fn(usize, usize) -> bool| {
        let mut checked = 0;
        for (i, j) in entries() {
            checked += 1;
            if !f(i, j) {
                let mut out = AxiomVerdict::flag(false, checked, None);
                out.counterexample = Some(vec![format!("v{}{}", i + 1, j + 1)]);
                return out;
            }
        }
        AxiomVerdict::flag(true, checked, None)
    };
    let comultiplication = if c.is_tensor_square() {
        first_fail(&|i, j| {
            let mut rhs = Tensor2::new();
            for k in 0..n {
                for ((p, x), (q, y)) in v[i][k].iter().cartesian_product(&v[k][j]) {
                    add_to(&mut rhs, [*p, *q], &(x * y));
                }
            }
            c.delta_of(&v[i][j]) == rhs
        })
    } else {
        mismatch(c)
    };
    let counit = first_fail(&|i, j| {
        let want = if i == j { Scalar::one() } else { Scalar::zero() };
        c.counit_of(&v[i][j]) == want
    });
    let antipode = first_fail(&|i, j| c.antipode_of(&v[i][j]) == alg.star(&v[j][i]));
    let passed = comultiplication.passed() && counit.passed() && antipode.passed();
    Ok(CorepReport { comultiplication, counit, antipode, passed })
}
