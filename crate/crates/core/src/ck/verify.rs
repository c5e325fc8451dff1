use serde::Serialize;

use super::family::{Backing, CKFamily};
use crate::error::{Error, Result};
use crate::linalg::{span_closure, SparseMat};

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    fn compare(subject: impl Into<String>, lhs: &SparseMat, rhs: &SparseMat, w: usize) -> Verdict {
        let diff = lhs.first_difference_on(rhs, w);
        Verdict {
            subject: subject.into(),
            passed: diff.is_none(),
            detail: diff.map(|(i, j)| {
                format!(
                    "first difference at ({i}, {j}): {} vs {}",
                    lhs.get(i, j).expect("in range"),
                    rhs.get(i, j).expect("in range")
                )
            }),
        }
    }

    fn flag(subject: impl Into<String>, passed: bool, detail: Option<String>) -> Verdict {
        Verdict { subject: subject.into(), passed, detail }
    }
}

fn all_pass(vs: &[Verdict]) -> bool {
    vs.iter().all(|v| v.passed)
}

/// Outcome of checking the graph relations on a family.
#[derive(Debug, Clone, Serialize)]
pub struct CKReport {
    pub family: String,
    pub backing: Backing,
    pub orientation: super::family::Orientation,
    pub experimental: bool,
    /// `S_e* S_e` equals the projection at the anchoring endpoint.
    pub relation1: Vec<Verdict>,
    /// The projection equals the sum of `S_e S_e*` over the edges it feeds.
    pub relation2: Vec<Verdict>,
    /// Distinct vertex projections are orthogonal.
    pub mutual_orthogonality: Vec<Verdict>,
    /// Every operator is a partial isometry and every projection a projection.
    pub partial_isometry: Vec<Verdict>,
    pub passed: bool,
}

impl CKReport {
    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.relation1
            .iter()
            .chain(&self.relation2)
            .chain(&self.mutual_orthogonality)
            .chain(&self.partial_isometry)
            .filter(|v| !v.passed)
    }
}

/// Checks both graph relations, orthogonality of the vertex projections and
/// the partial-isometry property, on the comparison window of the backing.
/// Vertices with no feeding edge are exempt from the second relation.
pub fn verify_ck(f: &CKFamily) -> Result<CKReport> {
    let g = &f.graph;
    let w = f.backing.window();
    let label = |v: usize| g.vertices()[v].clone();
    let edge_name = |e: usize| {
        let edge = &g.edges()[e];
        format!("{} ({} -> {})", edge.label, label(edge.source), label(edge.target))
    };

    let mut relation1 = vec![];
    for (e, s) in f.isometries.iter().enumerate() {
        let v = f.orientation.initial_vertex(g, e);
        relation1.push(Verdict::compare(edge_name(e), &s.adjoint().mul(s)?, &f.projections[v], w));
    }

    let mut relation2 = vec![];
    for v in 0..g.vertex_count() {
        let feeding: Vec<usize> = (0..g.edge_count()).filter(|&e| f.orientation.final_vertex(g, e) == v).collect();
        if feeding.is_empty() {
            continue;
        }
        let mut sum = SparseMat::zeros(f.backing.dim(), f.backing.dim());
        for e in feeding {
            sum = sum.add(&f.isometries[e].mul(&f.isometries[e].adjoint())?)?;
        }
        relation2.push(Verdict::compare(label(v), &f.projections[v], &sum, w));
    }

    let mut mutual_orthogonality = vec![];
    for a in 0..g.vertex_count() {
        for b in a + 1..g.vertex_count() {
            let prod = f.projections[a].mul(&f.projections[b])?;
            let zero = SparseMat::zeros(prod.rows(), prod.cols());
            mutual_orthogonality.push(Verdict::compare(format!("{}|{}", label(a), label(b)), &prod, &zero, w));
        }
    }

    let mut partial_isometry = vec![];
    for (e, s) in f.isometries.iter().enumerate() {
        let ok = s.is_partial_isometry_on(w);
        partial_isometry.push(Verdict::flag(edge_name(e), ok, (!ok).then(|| "S S* S != S".to_string())));
    }
    for (v, p) in f.projections.iter().enumerate() {
        let ok = p.is_orthogonal_projection_on(w);
        partial_isometry.push(Verdict::flag(
            format!("P[{}]", label(v)),
            ok,
            (!ok).then(|| "not an orthogonal projection".to_string()),
        ));
    }

    let passed =
        all_pass(&relation1) && all_pass(&relation2) && all_pass(&mutual_orthogonality) && all_pass(&partial_isometry);
    Ok(CKReport {
        family: f.name.clone(),
        backing: f.backing,
        orientation: f.orientation,
        experimental: f.experimental,
        relation1,
        relation2,
        mutual_orthogonality,
        partial_isometry,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CuntzReport {
    pub generators: Verdict,
    pub isometry: Vec<Verdict>,
    pub sum_to_identity: Verdict,
    pub passed: bool,
}

/// `S_i* S_i = I` for each generator and `sum_i S_i S_i* = I`, compared on
/// the leading `window` block (whole matrix when `None`). At least two
/// generators are required for a Cuntz family.
pub fn verify_cuntz(ops: &[SparseMat], window: Option<usize>) -> Result<CuntzReport> {
    let d = ops.first().map(SparseMat::rows).unwrap_or(0);
    if ops.iter().any(|s| s.rows() != d || s.cols() != d) {
        return Err(Error::DimensionMismatch("generators must share one square shape".into()));
    }
    let w = window.unwrap_or(d);
    let id = SparseMat::identity(d);
    let generators = Verdict::flag(
        "count",
        ops.len() >= 2,
        (ops.len() < 2).then(|| format!("{} generator(s), need at least 2", ops.len())),
    );
    let isometry = ops
        .iter()
        .enumerate()
        .map(|(k, s)| Ok(Verdict::compare(format!("S{}", k + 1), &s.adjoint().mul(s)?, &id, w)))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = SparseMat::zeros(d, d);
    for s in ops {
        sum = sum.add(&s.mul(&s.adjoint())?)?;
    }
    let sum_to_identity = Verdict::compare("sum S S*", &sum, &id, w);
    let passed = generators.passed && all_pass(&isometry) && sum_to_identity.passed;
    Ok(CuntzReport { generators, isometry, sum_to_identity, passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct CKMatrixReport {
    pub isometries: Vec<Verdict>,
    pub orthogonal_ranges: Vec<Verdict>,
    pub relations: Vec<Verdict>,
    /// Some row or column of the matrix is zero.
    pub degenerate: bool,
    pub passed: bool,
}

/// Matrix-indexed relations `S_i* S_i = sum_j A[i][j] S_j S_j*` with pairwise
/// orthogonal ranges. `A` must be a square 0/1 matrix matching the generator
/// count.
pub fn verify_ck_matrix(ops: &[SparseMat], a: &SparseMat, window: Option<usize>) -> Result<CKMatrixReport> {
    let k = ops.len();
    if !a.is_square() || a.rows() != k {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for {k} generators", a.rows(), a.cols())));
    }
    if !a.is_zero_one() {
        return Err(Error::NotZeroOne);
    }
    let d = ops.first().map(SparseMat::rows).unwrap_or(0);
    if ops.iter().any(|s| s.rows() != d || s.cols() != d) {
        return Err(Error::DimensionMismatch("generators must share one square shape".into()));
    }
    let w = window.unwrap_or(d);
    let ranges: Vec<SparseMat> = ops.iter().map(|s| s.mul(&s.adjoint())).collect::<Result<_>>()?;

    let isometries: Vec<Verdict> = ops
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ok = s.is_partial_isometry_on(w);
            Verdict::flag(format!("S{}", i + 1), ok, (!ok).then(|| "S S* S != S".to_string()))
        })
        .collect();
    let mut orthogonal_ranges = vec![];
    for i in 0..k {
        for j in i + 1..k {
            let prod = ranges[i].mul(&ranges[j])?;
            orthogonal_ranges.push(Verdict::compare(
                format!("S{} S{}", i + 1, j + 1),
                &prod,
                &SparseMat::zeros(d, d),
                w,
            ));
        }
    }
    let mut relations = vec![];
    for (i, s) in ops.iter().enumerate() {
        let mut rhs = SparseMat::zeros(d, d);
        for (j, r) in ranges.iter().enumerate() {
            if !a.get(i + 1, j + 1)?.is_zero() {
                rhs = rhs.add(r)?;
            }
        }
        relations.push(Verdict::compare(format!("row {}", i + 1), &s.adjoint().mul(s)?, &rhs, w));
    }
    let degenerate = (1..=k).any(|i| {
        (1..=k).all(|j| a.get(i, j).map(|x| x.is_zero()).unwrap_or(true))
            || (1..=k).all(|j| a.get(j, i).map(|x| x.is_zero()).unwrap_or(true))
    });
    let passed = all_pass(&isometries) && all_pass(&orthogonal_ranges) && all_pass(&relations);
    Ok(CKMatrixReport { isometries, orthogonal_ranges, relations, degenerate, passed })
}

/// Dimension of the *-algebra generated by a finite family's operators and
/// whether it is all of `M_d`.
pub fn generated_dimension(f: &CKFamily) -> Result<(usize, bool)> {
    let d = match f.backing {
        Backing::Finite { dim } => dim,
        Backing::Truncated { .. } => return Err(Error::TruncatedBacking),
    };
    let closure = span_closure(&f.isometries, true, None)?;
    Ok((closure.dimension, closure.dimension == d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ck::family::*;
    use crate::linalg::Scalar;

    #[test]
    fn finite_pi2_relations() {
        let r = verify_ck(&pi2_finite().unwrap()).unwrap();
        assert!(r.relation1.iter().all(|v| v.passed));
        assert!(r.partial_isometry.iter().all(|v| v.passed));
        // E11 is shared by three vertices
        assert!(!r.mutual_orthogonality.iter().all(|v| v.passed));
        assert!(!r.passed);
        assert_eq!(generated_dimension(&pi2_finite().unwrap()).unwrap(), (16, true));
    }

    #[test]
    fn truncated_families_relation1() {
        let ok = |vs: &[Verdict]| vs.iter().all(|v| v.passed);
        for f in [
            pi2_infinite(200, None).unwrap(),
            relation2_infinite(240, None).unwrap(),
            pi_n_infinite(3, 200, None).unwrap(),
        ] {
            let r = verify_ck(&f).unwrap();
            assert!(ok(&r.relation1) && ok(&r.partial_isometry), "{}", f.name);
        }
        // every vertex projection of the shift family is the identity, and a
        // shift has range I - E11
        let r = verify_ck(&pi2_infinite(200, None).unwrap()).unwrap();
        let failing: Vec<&str> = r.relation2.iter().filter(|v| !v.passed).map(|v| v.subject.as_str()).collect();
        assert_eq!(failing, ["x11", "x22"]);
        assert!(r.mutual_orthogonality.iter().all(|v| !v.passed));

        let r = verify_ck(&relation2_infinite(240, None).unwrap()).unwrap();
        assert!(ok(&r.relation2));
        let failing: Vec<&str> = r.failures().map(|v| v.subject.as_str()).collect();
        assert_eq!(failing, ["x12|x22", "x21|x22"]);
        assert_eq!(generated_dimension(&pi2_infinite(20, None).unwrap()), Err(Error::TruncatedBacking));
    }

    #[test]
    fn stride_family_verdicts_stable_under_doubling() {
        let a = verify_ck(&relation2_infinite(300, Some(12)).unwrap()).unwrap();
        let b = verify_ck(&relation2_infinite(600, Some(12)).unwrap()).unwrap();
        let flags = |r: &CKReport| {
            [&r.relation1, &r.relation2, &r.mutual_orthogonality, &r.partial_isometry]
                .iter()
                .map(|vs| vs.iter().map(|v| (v.subject.clone(), v.passed)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(flags(&a), flags(&b));
    }

    fn cuntz_pair(d: usize, odd_offset: usize) -> Vec<SparseMat> {
        let mut a = SparseMat::zeros(d, d);
        let mut b = SparseMat::zeros(d, d);
        for n in 1..=d {
            if 2 * n - odd_offset <= d {
                a.set(2 * n - odd_offset, n, Scalar::one()).unwrap();
            }
            if 2 * n + 1 - odd_offset <= d {
                b.set(2 * n + 1 - odd_offset, n, Scalar::one()).unwrap();
            }
        }
        vec![a, b]
    }

    #[test]
    fn cuntz_pairs() {
        let one_based = cuntz_pair(40, 1);
        assert!(verify_cuntz(&one_based, Some(20)).unwrap().passed);
        let zero_based = cuntz_pair(40, 0);
        let r = verify_cuntz(&zero_based, Some(20)).unwrap();
        assert!(!r.sum_to_identity.passed);
        assert!(!verify_cuntz(&[SparseMat::identity(3)], None).unwrap().passed);
    }

    #[test]
    fn matrix_relations() {
        let ops = cuntz_pair(40, 1);
        let a = SparseMat::from_dense_ints(&[vec![1, 1], vec![1, 1]]).unwrap();
        let r = verify_ck_matrix(&ops, &a, Some(20)).unwrap();
        assert!(r.passed && !r.degenerate);
        let bad = SparseMat::from_dense_ints(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(verify_ck_matrix(&ops, &bad, None).unwrap_err(), Error::NotZeroOne);
        let deg = SparseMat::from_dense_ints(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(verify_ck_matrix(&ops, &deg, Some(20)).unwrap().degenerate);
    }
}
