use super::echelon::Echelon;
use super::matrix::SparseMat;
use crate::error::{Error, Result};

/// Result of closing a set of square matrices under products (and
/// optionally adjoints).
#[derive(Debug, Clone)]
pub struct SpanClosure {
    pub basis: Vec<SparseMat>,
    pub dimension: usize,
    pub closed: bool,
    pub passes: usize,
}

/// Exact basis of the algebra generated by `generators` inside `M_d`.
///
/// Each pass multiplies every pair of basis elements in which at least one
/// factor was added by the previous pass; the sweep stops at a fixed point or
/// after `max_passes` passes (`None` means `d^2`).
pub fn span_closure(
    generators: &[SparseMat],
    include_adjoints: bool,
    max_passes: Option<usize>,
) -> Result<SpanClosure> {
    let Some(first) = generators.first() else {
        return Ok(SpanClosure { basis: vec![], dimension: 0, closed: true, passes: 0 });
    };
    let d = first.rows();
    for g in generators {
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "generator {}x{} in a family of {d}x{d}",
                g.rows(),
                g.cols()
            )));
        }
    }
    let max_passes = max_passes.unwrap_or(d * d).max(1);

    let mut echelon = Echelon::new();
    let mut basis: Vec<SparseMat> = Vec::new();
    let mut push = |m: SparseMat, basis: &mut Vec<SparseMat>| {
        if echelon.insert(&m.vectorize()) {
            basis.push(m);
            true
        } else {
            false
        }
    };

    for g in generators {
        push(g.clone(), &mut basis);
        if include_adjoints {
            push(g.adjoint(), &mut basis);
        }
    }

    let mut fresh_from = 0usize;
    let mut passes = 0usize;
    let mut closed = false;
    while passes < max_passes {
        passes += 1;
        let snapshot = basis.len();
        for a in 0..snapshot {
            for b in 0..snapshot {
                if a < fresh_from && b < fresh_from {
                    continue;
                }
                let p = basis[a].mul(&basis[b])?;
                if !p.is_zero() {
                    push(p, &mut basis);
                }
            }
            if include_adjoints && a >= fresh_from {
                let adj = basis[a].adjoint();
                push(adj, &mut basis);
            }
        }
        if basis.len() == snapshot {
            closed = true;
            break;
        }
        fresh_from = snapshot;
    }
    let dimension = basis.len();
    Ok(SpanClosure { basis, dimension, closed, passes })
}
