use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{axpy, Scalar, SparseVec};

/// A finite-dimensional *-algebra given by structure constants on a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    pub name: String,
    labels: Vec<String>,
    /// `products[i * dim + j] = e_i e_j`.
    products: Vec<SparseVec>,
    unit: SparseVec,
    /// Image of each basis element under the (conjugate-linear) involution.
    star: Vec<SparseVec>,
}

impl FiniteAlgebra {
    pub fn from_structure_constants(
        name: impl Into<String>,
        labels: Vec<String>,
        products: Vec<SparseVec>,
        unit: SparseVec,
        star: Vec<SparseVec>,
    ) -> Result<Self> {
        let d = labels.len();
        if products.len() != d * d || star.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} products and {} involution images for dimension {d}",
                products.len(),
                star.len()
            )));
        }
        let in_range = |v: &SparseVec| v.keys().all(|&k| k < d);
        if !products.iter().chain(&star).chain(std::iter::once(&unit)).all(in_range) {
            return Err(Error::DimensionMismatch(format!("coordinate outside dimension {d}")));
        }
        Ok(FiniteAlgebra { name: name.into(), labels, products, unit, star })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        SparseVec::from([(i, Scalar::one())])
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i * self.dim() + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                axpy(&mut out, &(a * b), self.basis_product(i, j));
            }
        }
        out
    }

    pub fn star(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            axpy(&mut out, &a.conj(), &self.star[i]);
        }
        out
    }

    /// `e_i e_j` for all `i, j`, plus unit laws, checked exactly on basis triples.
    pub fn is_associative(&self) -> bool {
        let d = self.dim();
        let unit_ok = (0..d).all(|i| {
            let e = self.basis(i);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        });
        unit_ok
            && (0..d).cartesian_product(0..d).cartesian_product(0..d).all(|((i, j), k)| {
                let (a, b, c) = (self.basis(i), self.basis(j), self.basis(k));
                self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
            })
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).tuple_combinations().all(|(i, j)| self.basis_product(i, j) == self.basis_product(j, i))
    }

    /// Human-readable form such as `2*d[123] + d[213]`.
    pub fn format(&self, x: &SparseVec) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|(&k, c)| if c.is_one() { self.labels[k].clone() } else { format!("({c})*{}", self.labels[k]) })
            .join(" + ")
    }
}

/// Permutations of `0..d` in lexicographic order of their one-line words.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    (0..d).permutations(d).collect()
}

pub fn perm_word(p: &[usize]) -> String {
    if p.len() < 10 {
        p.iter().map(|x| (x + 1).to_string()).collect()
    } else {
        p.iter().map(|x| (x + 1).to_string()).join(",")
    }
}

/// `(p q)(j) = p(q(j))`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&j| p[j]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (j, &i) in p.iter().enumerate() {
        out[i] = j;
    }
    out
}

/// Finite group as an indexed multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn symmetric(d: usize) -> Self {
        let perms = permutations(d);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table = perms.iter().map(|p| perms.iter().map(|q| index(&compose(p, q))).collect()).collect();
        let inverse = perms.iter().map(|p| index(&invert(p))).collect();
        FiniteGroup { labels: perms.iter().map(|p| perm_word(p)).collect(), table, inverse, identity: 0 }
    }

    pub fn cyclic(m: usize) -> Self {
        FiniteGroup {
            labels: (0..m).map(|k| k.to_string()).collect(),
            table: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
            inverse: (0..m).map(|a| (m - a) % m).collect(),
            identity: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }
}

fn unit_vec(i: usize) -> SparseVec {
    SparseVec::from([(i, Scalar::one())])
}

/// Functions on a finite group with pointwise operations, in the basis of
/// point masses.
pub fn function_algebra(g: &FiniteGroup, name: &str) -> FiniteAlgebra {
    let n = g.order();
    let mut products = vec![SparseVec::new(); n * n];
    for i in 0..n {
        products[i * n + i] = unit_vec(i);
    }
    FiniteAlgebra {
        name: name.into(),
        labels: g.labels.iter().map(|l| format!("d[{l}]")).collect(),
        products,
        unit: (0..n).map(|i| (i, Scalar::one())).collect(),
        star: (0..n).map(unit_vec).collect(),
    }
}

/// Group algebra with `g* = g^-1`.
pub fn group_algebra(g: &FiniteGroup, name: &str) -> FiniteAlgebra {
    let n = g.order();
    FiniteAlgebra {
        name: name.into(),
        labels: g.labels.iter().map(|l| format!("g[{l}]")).collect(),
        products: (0..n).cartesian_product(0..n).map(|(a, b)| unit_vec(g.table[a][b])).collect(),
        unit: unit_vec(g.identity),
        star: g.inverse.iter().map(|&i| unit_vec(i)).collect(),
    }
}

/// `M_k` in the matrix-unit basis, `E_{ij}` at index `(i-1)k + (j-1)`.
pub fn matrix_algebra(k: usize) -> FiniteAlgebra {
    let d = k * k;
    let idx = |i: usize, j: usize| (i - 1) * k + (j - 1);
    let mut products = vec![SparseVec::new(); d * d];
    let mut labels = Vec::with_capacity(d);
    let mut star = Vec::with_capacity(d);
    for i in 1..=k {
        for j in 1..=k {
            labels.push(if k < 10 { format!("E{i}{j}") } else { format!("E{i},{j}") });
            star.push(unit_vec(idx(j, i)));
            for l in 1..=k {
                products[idx(i, j) * d + idx(j, l)] = unit_vec(idx(i, l));
            }
        }
    }
    FiniteAlgebra {
        name: format!("M{k}"),
        labels,
        products,
        unit: (1..=k).map(|i| (idx(i, i), Scalar::one())).collect(),
        star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_tables() {
        let g = FiniteGroup::symmetric(3);
        assert_eq!(g.order(), 6);
        assert_eq!(g.labels[0], "123");
        for a in 0..6 {
            assert_eq!(g.table[a][g.inverse[a]], g.identity);
        }
        assert_eq!(compose(&[1, 0, 2], &[0, 2, 1]), vec![1, 2, 0]);
    }

    #[test]
    fn models_are_associative() {
        let s3 = FiniteGroup::symmetric(3);
        for alg in [function_algebra(&s3, "C(S3)"), group_algebra(&s3, "CS3"), matrix_algebra(2)] {
            assert!(alg.is_associative(), "{}", alg.name);
        }
        assert!(function_algebra(&s3, "C(S3)").is_commutative());
        assert!(!group_algebra(&s3, "CS3").is_commutative());
        assert!(group_algebra(&FiniteGroup::cyclic(4), "C4").is_commutative());
    }

    #[test]
    fn matrix_units_multiply() {
        let m = matrix_algebra(3);
        let e = |i: usize, j: usize| m.basis((i - 1) * 3 + j - 1);
        assert_eq!(m.mul(&e(1, 2), &e(2, 3)), e(1, 3));
        assert!(m.mul(&e(1, 2), &e(1, 3)).is_empty());
        assert_eq!(m.star(&e(1, 2)), e(2, 1));
        assert_eq!(m.format(&e(2, 3)), "E23");
    }

    #[test]
    fn shape_validation() {
        assert!(
            FiniteAlgebra::from_structure_constants("x", vec!["a".into()], vec![], SparseVec::new(), vec![]).is_err()
        );
    }
}
