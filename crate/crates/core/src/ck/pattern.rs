use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMat};

/// `n -> (row_mul * n - row_sub, col_mul * n - col_sub)` for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AffineRule {
    pub row_mul: usize,
    pub row_sub: i64,
    pub col_mul: usize,
    pub col_sub: i64,
}

impl AffineRule {
    pub fn new(row_mul: usize, row_sub: i64, col_mul: usize, col_sub: i64) -> Self {
        AffineRule { row_mul, row_sub, col_mul, col_sub }
    }

    fn at(&self, n: usize) -> (i64, i64) {
        let n = n as i64;
        (self.row_mul as i64 * n - self.row_sub, self.col_mul as i64 * n - self.col_sub)
    }
}

impl fmt::Display for AffineRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |m: usize, s: i64| match s {
            0 => format!("{m}n"),
            s if s > 0 => format!("{m}n-{s}"),
            s => format!("{m}n+{}", -s),
        };
        write!(f, "E[{},{}]", term(self.row_mul, self.row_sub), term(self.col_mul, self.col_sub))
    }
}

/// An operator on `l^2(N)` given by `c * sum_{rules} sum_{n >= 1} E_{rule(n)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternOperator {
    rules: Vec<AffineRule>,
    coefficient: Scalar,
}

impl PatternOperator {
    /// Every rule must have positive multipliers and produce indices `>= 1`
    /// from `n = 1` on.
    pub fn new(rules: Vec<AffineRule>) -> Result<Self> {
        for r in &rules {
            if r.row_mul == 0 || r.col_mul == 0 {
                return Err(Error::InvalidParameter(format!("rule {r} has a zero multiplier")));
            }
            let (i, j) = r.at(1);
            if i < 1 || j < 1 {
                return Err(Error::InvalidParameter(format!("rule {r} yields index ({i}, {j}) at n = 1")));
            }
        }
        Ok(PatternOperator { rules, coefficient: Scalar::one() })
    }

    pub fn single(row_mul: usize, row_sub: i64, col_mul: usize, col_sub: i64) -> Result<Self> {
        PatternOperator::new(vec![AffineRule::new(row_mul, row_sub, col_mul, col_sub)])
    }

    pub fn with_coefficient(mut self, c: Scalar) -> Self {
        self.coefficient = c;
        self
    }

    pub fn rules(&self) -> &[AffineRule] {
        &self.rules
    }

    /// Largest multiplier over all rules.
    pub fn max_stride(&self) -> usize {
        self.rules.iter().map(|r| r.row_mul.max(r.col_mul)).max().unwrap_or(1)
    }

    /// The adjoint pattern (rows and columns swapped, coefficient conjugated).
    pub fn adjoint(&self) -> PatternOperator {
        PatternOperator {
            rules: self.rules.iter().map(|r| AffineRule::new(r.col_mul, r.col_sub, r.row_mul, r.row_sub)).collect(),
            coefficient: self.coefficient.conj(),
        }
    }

    /// Largest `w` such that every index `<= w` on one side of a rule is paired
    /// with an index `<= limit` on the other side, i.e.
    /// `floor(limit * min(mul) / max(mul))` over the rules.
    pub fn exact_window(&self, limit: usize) -> usize {
        self.rules.iter().map(|r| limit * r.row_mul.min(r.col_mul) / r.row_mul.max(r.col_mul)).min().unwrap_or(limit)
    }

    /// The `dim x dim` corner: every pattern entry with both indices `<= dim`.
    pub fn truncate(&self, dim: usize) -> Result<SparseMat> {
        let mut seen = BTreeSet::new();
        let mut entries = vec![];
        for r in &self.rules {
            for n in 1.. {
                let (i, j) = r.at(n);
                if i > dim as i64 && j > dim as i64 {
                    break;
                }
                if i > dim as i64 || j > dim as i64 {
                    continue;
                }
                let (i, j) = (i as usize, j as usize);
                if !seen.insert((i, j)) {
                    return Err(Error::PatternCollision(i, j));
                }
                entries.push((i, j, self.coefficient.clone()));
            }
        }
        SparseMat::from_entries(dim, dim, entries)
    }
}

impl fmt::Display for PatternOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rules.iter().map(|r| format!("sum {r}")).collect();
        if self.coefficient.is_one() {
            write!(f, "{}", parts.join(" + "))
        } else {
            write!(f, "({}) * ({})", self.coefficient, parts.join(" + "))
        }
    }
}
