use super::matrix::SparseMat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Finite sum of simple tensors `c * (A (x) B)` of matrices.
///
/// Equality is decided on the Kronecker flattening, so different expansions of
/// the same tensor compare equal.
#[derive(Debug, Clone)]
pub struct TensorElement {
    left_dim: usize,
    right_dim: usize,
    terms: Vec<(SparseMat, SparseMat, Scalar)>,
}

impl TensorElement {
    pub fn zero(left_dim: usize, right_dim: usize) -> Self {
        TensorElement { left_dim, right_dim, terms: vec![] }
    }

    pub fn simple(a: SparseMat, b: SparseMat) -> Result<Self> {
        let mut t = TensorElement::zero(a.rows(), b.rows());
        t.push(a, b, Scalar::one())?;
        Ok(t)
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn terms(&self) -> &[(SparseMat, SparseMat, Scalar)] {
        &self.terms
    }

    pub fn push(&mut self, a: SparseMat, b: SparseMat, c: Scalar) -> Result<()> {
        let ok = |m: &SparseMat, d: usize| m.rows() == d && m.cols() == d;
        if !ok(&a, self.left_dim) || !ok(&b, self.right_dim) {
            return Err(Error::DimensionMismatch(format!(
                "tensor factor shapes {}x{} (x) {}x{} in M_{} (x) M_{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                self.left_dim,
                self.right_dim
            )));
        }
        if !c.is_zero() {
            self.terms.push((a, b, c));
        }
        Ok(())
    }

    pub fn flatten(&self) -> SparseMat {
        let n = self.left_dim * self.right_dim;
        self.terms
            .iter()
            .fold(SparseMat::zeros(n, n), |acc, (a, b, c)| acc.add(&a.kron(b).scale(c)).expect("conformable"))
    }

    /// Re-expands a flattened matrix as a sum of matrix-unit tensors.
    pub fn from_flat(m: &SparseMat, left_dim: usize, right_dim: usize) -> Result<Self> {
        if m.rows() != left_dim * right_dim || m.cols() != left_dim * right_dim {
            return Err(Error::DimensionMismatch("flattened tensor shape".into()));
        }
        let q = right_dim;
        let mut t = TensorElement::zero(left_dim, right_dim);
        for (i, j, v) in m.iter() {
            let (a, c) = ((i - 1) / q + 1, (i - 1) % q + 1);
            let (b, d) = ((j - 1) / q + 1, (j - 1) % q + 1);
            t.push(SparseMat::matrix_unit(left_dim, a, b)?, SparseMat::matrix_unit(right_dim, c, d)?, v.clone())?;
        }
        Ok(t)
    }

    pub fn mul(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.left_dim != other.left_dim || self.right_dim != other.right_dim {
            return Err(Error::DimensionMismatch("tensor product spaces differ".into()));
        }
        let mut out = TensorElement::zero(self.left_dim, self.right_dim);
        for (a, b, c) in &self.terms {
            for (x, y, z) in &other.terms {
                out.push(a.mul(x)?, b.mul(y)?, c * z)?;
            }
        }
        Ok(out)
    }
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.left_dim == other.left_dim && self.right_dim == other.right_dim && self.flatten() == other.flatten()
    }
}
