//! Exact row reduction over sparse vectors.

use std::collections::BTreeMap;

use super::scalar::Scalar;

/// Sparse vector with 0-based coordinates; zero coefficients are never stored.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn axpy(y: &mut SparseVec, a: &Scalar, x: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (&k, v) in x {
        let e = y.entry(k).or_default();
        *e += &(a * v);
        if e.is_zero() {
            y.remove(&k);
        }
    }
}

pub fn scale_vec(x: &SparseVec, a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(&k, v)| (k, v * a)).collect()
}

/// Incrementally maintained echelon basis.
///
/// Each stored row has a distinct pivot (its smallest coordinate) with
/// coefficient one; rows are not back-substituted against later pivots.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot it touches.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let hit = v.range(cursor..).find(|(k, _)| self.rows.contains_key(k)).map(|(&k, c)| (k, c.clone()));
            match hit {
                None => return v,
                Some((k, c)) => {
                    axpy(&mut v, &-c, &self.rows[&k]);
                    cursor = k + 1;
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` if it is independent of the current rows; returns whether the
    /// rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.iter().next() {
            None => false,
            Some((&pivot, lead)) => {
                let inv = lead.inv().expect("nonzero lead");
                self.rows.insert(pivot, scale_vec(&r, &inv));
                true
            }
        }
    }
}

pub fn rank<'a, I: IntoIterator<Item = &'a SparseVec>>(vectors: I) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : sum_k row[k] x_k = 0 for every row}` in `ncols` unknowns.
///
/// Uses Gauss-Jordan elimination; each returned vector has coefficient one on
/// its free variable and zero on the other free variables.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    // fully reduced rows keyed by pivot column
    let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        for (p, prow) in &reduced {
            if let Some(c) = r.get(p).cloned() {
                axpy(&mut r, &-c, prow);
            }
        }
        let Some((&pivot, lead)) = r.iter().next() else { continue };
        let r = scale_vec(&r, &lead.inv().expect("nonzero lead"));
        for prow in reduced.values_mut() {
            if let Some(c) = prow.get(&pivot).cloned() {
                axpy(prow, &-c, &r);
            }
        }
        reduced.insert(pivot, r);
    }
    (0..ncols)
        .filter(|c| !reduced.contains_key(c))
        .map(|free| {
            let mut x = SparseVec::new();
            x.insert(free, Scalar::one());
            for (&p, prow) in &reduced {
                if let Some(c) = prow.get(&free) {
                    x.insert(p, -c.clone());
                }
            }
            x
        })
        .collect()
}
