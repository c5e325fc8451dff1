use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::{format_rational, parse_rational, Scalar};
use crate::error::{Error, Result};

/// Exact sparse matrix with 1-based indices.
///
/// Entries are kept in a row-major ordered map and never store zero, so two
/// matrices are equal exactly when their shapes and maps agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = SparseMat::zeros(d, d);
        for k in 1..=d {
            m.entries.insert((k, k), Scalar::one());
        }
        m
    }

    /// The matrix unit `E_{ij}` in `M_d`.
    pub fn matrix_unit(d: usize, i: usize, j: usize) -> Result<Self> {
        let mut m = SparseMat::zeros(d, d);
        m.set(i, j, Scalar::one())?;
        Ok(m)
    }

    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = SparseMat::zeros(rows, cols);
        for (i, j, v) in entries {
            let acc = m.get(i, j)? + &v;
            m.set(i, j, acc)?;
        }
        Ok(m)
    }

    /// 0/1 matrix from a dense row list (test and CLI convenience).
    pub fn from_dense_ints(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = SparseMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged dense rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i + 1, j + 1, Scalar::from_int(v))?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || j == 0 || i > self.rows || j > self.cols {
            return Err(Error::IndexOutOfRange { row: i, col: j, rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Scalar> {
        self.check(i, j)?;
        Ok(self.entries.get(&(i, j)).cloned().unwrap_or_default())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) -> Result<()> {
        self.check(i, j)?;
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.range((i, 0)..(i + 1, 0)).map(|(&(_, j), v)| (j, v))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseMat {
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.conj())).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMat {
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn conj(&self) -> SparseMat {
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&k, v)| (k, v.conj())).collect(),
        }
    }

    pub fn mul(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (j, b) in other.row(k) {
                *acc.entry((i, j)).or_default() += &(a * b);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(SparseMat { rows: self.rows, cols: other.cols, entries: acc })
    }

    fn same_shape(&self, other: &SparseMat, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} {op} {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseMat) -> Result<SparseMat> {
        self.same_shape(other, "+")?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            let e = out.entries.entry(k).or_default();
            *e += v;
            if e.is_zero() {
                out.entries.remove(&k);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseMat) -> Result<SparseMat> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        if c.is_zero() {
            return SparseMat::zeros(self.rows, self.cols);
        }
        SparseMat { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Kronecker product with `E_{a,b} (x) E_{c,d} -> E_{(a-1)q+c, (b-1)q'+d}`
    /// where `q x q'` is the shape of `other`.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let (q, qc) = (other.rows, other.cols);
        let mut entries = BTreeMap::new();
        for (&(a, b), x) in &self.entries {
            for (&(c, d), y) in &other.entries {
                entries.insert(((a - 1) * q + c, (b - 1) * qc + d), x * y);
            }
        }
        SparseMat { rows: self.rows * q, cols: self.cols * qc, entries }
    }

    /// `A A* A = A`, exactly.
    pub fn is_partial_isometry(&self) -> bool {
        self.is_partial_isometry_on(usize::MAX)
    }

    /// `P = P*` and `P^2 = P`, exactly.
    pub fn is_orthogonal_projection(&self) -> bool {
        self.is_orthogonal_projection_on(usize::MAX)
    }

    /// Partial-isometry test restricted to the leading `w x w` window.
    pub fn is_partial_isometry_on(&self, w: usize) -> bool {
        if !self.is_square() {
            return false;
        }
        let aaa = self.mul(&self.adjoint()).and_then(|p| p.mul(self)).expect("square");
        aaa.window(w) == self.window(w)
    }

    pub fn is_orthogonal_projection_on(&self, w: usize) -> bool {
        if !self.is_square() {
            return false;
        }
        let sq = self.mul(self).expect("square");
        self.window(w) == self.adjoint().window(w) && sq.window(w) == self.window(w)
    }

    /// The leading `w x w` corner (clamped to the shape); the result keeps the
    /// original shape so windowed matrices of equal backing compare directly.
    pub fn window(&self, w: usize) -> SparseMat {
        if w >= self.rows && w >= self.cols {
            return self.clone();
        }
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .filter(|(&(i, j), _)| i <= w && j <= w)
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    /// First entry (row-major) where `self` and `other` differ inside the
    /// window, if any.
    pub fn first_difference_on(&self, other: &SparseMat, w: usize) -> Option<(usize, usize)> {
        let a = self.window(w);
        let b = other.window(w);
        let keys: std::collections::BTreeSet<(usize, usize)> =
            a.entries.keys().chain(b.entries.keys()).copied().collect();
        let first = keys.into_iter().find(|k| a.entries.get(k) != b.entries.get(k));
        first
    }

    pub fn eq_on(&self, other: &SparseMat, w: usize) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.first_difference_on(other, w).is_none()
    }

    /// Row-major vectorization (0-based coordinates `(i-1)*cols + (j-1)`).
    pub fn vectorize(&self) -> BTreeMap<usize, Scalar> {
        self.entries.iter().map(|(&(i, j), v)| ((i - 1) * self.cols + (j - 1), v.clone())).collect()
    }

    pub fn from_vector(rows: usize, cols: usize, v: &BTreeMap<usize, Scalar>) -> SparseMat {
        SparseMat {
            rows,
            cols,
            entries: v
                .iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|(&k, x)| ((k / cols + 1, k % cols + 1), x.clone()))
                .collect(),
        }
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.values().all(Scalar::is_one)
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for k in 1..=self.rows.min(self.cols) {
            if let Some(v) = self.entries.get(&(k, k)) {
                t += v;
            }
        }
        t
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.iter().map(|(i, j, v)| (i, j, format_rational(v.re()), format_rational(v.im()))).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<SparseMat> {
        let mut m = SparseMat::zeros(json.rows, json.cols);
        for (i, j, re, im) in &json.entries {
            let v = Scalar::new(parse_rational(re)?, parse_rational(im)?);
            let acc = m.get(*i, *j)? + &v;
            m.set(*i, *j, acc)?;
        }
        Ok(m)
    }
}

/// Wire form: `{"rows":R,"cols":C,"entries":[[i,j,"re","im"],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String, String)>,
}

impl Serialize for SparseMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        SparseMat::from_json(&json).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMat({}x{}", self.rows, self.cols)?;
        for (i, j, v) in self.iter() {
            write!(f, " [{i},{j}]={v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize, j: usize) -> SparseMat {
        SparseMat::matrix_unit(d, i, j).unwrap()
    }

    fn pattern(d: usize, n_max: usize, f: impl Fn(usize) -> (usize, usize)) -> SparseMat {
        SparseMat::from_entries(
            d,
            d,
            (1..=n_max).map(|n| {
                let (i, j) = f(n);
                (i, j, Scalar::one())
            }),
        )
        .unwrap()
    }

    #[test]
    fn matrix_unit_products() {
        assert_eq!(e(4, 2, 1).nnz(), 1);
        assert_eq!(e(4, 2, 1).mul(&e(4, 1, 4)).unwrap(), e(4, 2, 4));
        assert!(e(4, 2, 1).mul(&e(4, 3, 4)).unwrap().is_zero());
        assert_eq!(e(4, 1, 4).mul(&e(4, 4, 1)).unwrap(), e(4, 1, 1));
        assert!(SparseMat::matrix_unit(4, 5, 1).is_err());
        assert!(SparseMat::matrix_unit(4, 0, 1).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(e(6, 6, 1).adjoint(), e(6, 1, 6));
        let s = pattern(60, 10, |n| (6 * n, 3 * n - 2));
        let t = pattern(60, 10, |n| (3 * n - 2, 6 * n));
        assert_eq!(s.adjoint(), t);
        let ie12 = e(2, 1, 2).scale(&Scalar::i());
        assert_eq!(ie12.adjoint(), e(2, 2, 1).scale(&-Scalar::i()));
    }

    #[test]
    fn shifted_pattern_product() {
        // sparse-product oracle: only n = m survives and 6n <= 60 limits to n <= 10
        let a = pattern(120, 20, |n| (3 * n - 2, 6 * n));
        let b = pattern(120, 10, |m| (6 * m, 3 * m - 2));
        let expected = pattern(120, 10, |n| (3 * n - 2, 3 * n - 2));
        assert_eq!(a.mul(&b).unwrap(), expected);
        let i = SparseMat::identity(120);
        assert_eq!(a.mul(&i).unwrap(), a);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(e(2, 1, 1).kron(&e(2, 1, 1)), e(4, 1, 1));
        assert_eq!(e(2, 2, 1).kron(&e(2, 1, 2)), e(4, 3, 2));
        assert_eq!(SparseMat::identity(2).kron(&SparseMat::identity(2)), SparseMat::identity(4));
    }

    #[test]
    fn predicates() {
        assert!(e(3, 2, 1).is_partial_isometry());
        assert!(!e(3, 1, 1).scale(&Scalar::from_int(2)).is_partial_isometry());
        assert!(e(3, 1, 1).is_orthogonal_projection());
        assert!(!e(3, 1, 2).is_orthogonal_projection());
        let s = pattern(60, 10, |n| (6 * n, 3 * n - 2));
        assert!(s.is_partial_isometry());
        assert!(s.adjoint().mul(&s).unwrap().is_orthogonal_projection());
    }

    #[test]
    fn dimension_errors() {
        let a = SparseMat::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&SparseMat::zeros(3, 2)).is_err());
    }

    #[test]
    fn json_wire_form() {
        let m = e(2, 1, 2).scale(&Scalar::from_ratio(1, 2));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[[1,2,"1/2","0"]]}"#);
        let back: SparseMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SparseMat>(r#"{"rows":2,"cols":2,"entries":[[3,1,"1","0"]]}"#).is_err());
    }
}
