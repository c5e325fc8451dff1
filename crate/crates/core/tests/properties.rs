use proptest::prelude::*;

use qgraph::linalg::{rank, span_closure, Echelon, Scalar, SparseMat};

fn unit_scalar(k: u8) -> Scalar {
    match k % 4 {
        0 => Scalar::one(),
        1 => -Scalar::one(),
        2 => Scalar::i(),
        _ => -Scalar::i(),
    }
}

/// Sparse matrix with entries in {0, ±1, ±i}.
fn sparse(rows: usize, cols: usize) -> impl Strategy<Value = SparseMat> {
    prop::collection::vec(0u8..8, rows * cols).prop_map(move |cells| {
        let entries = cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= 4)
            .map(|(k, &c)| (k / cols + 1, k % cols + 1, unit_scalar(c)));
        SparseMat::from_entries(rows, cols, entries).unwrap()
    })
}

fn square(max: usize) -> impl Strategy<Value = SparseMat> {
    (1..=max).prop_flat_map(|d| sparse(d, d))
}

/// Partial permutation with unit-modulus phases: always a partial isometry.
fn phased_partial_permutation(d: usize) -> impl Strategy<Value = SparseMat> {
    (Just((1..=d).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(0u8..5, d)).prop_map(
        move |(perm, phase)| {
            let entries = perm
                .iter()
                .zip(&phase)
                .enumerate()
                .filter(|(_, (_, &p))| p < 4)
                .map(|(j, (&i, &p))| (i, j + 1, unit_scalar(p)));
            SparseMat::from_entries(d, d, entries).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_reverses_products((a, b) in (1usize..5, 1usize..5, 1usize..5)
        .prop_flat_map(|(r, k, c)| (sparse(r, k), sparse(k, c)))) {
        let lhs = a.mul(&b).unwrap().adjoint();
        let rhs = b.adjoint().mul(&a.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projections_are_partial_isometries(v in (1usize..6).prop_flat_map(phased_partial_permutation)) {
        let p = v.mul(&v.adjoint()).unwrap();
        prop_assert!(p.is_orthogonal_projection());
        prop_assert!(p.is_partial_isometry());
    }

    #[test]
    fn partial_isometry_iff_adjoint_is(a in square(4)) {
        prop_assert_eq!(a.is_partial_isometry(), a.adjoint().is_partial_isometry());
    }

    #[test]
    fn partial_isometry_iff_initial_and_final_projections(a in square(4)) {
        let initial = a.adjoint().mul(&a).unwrap();
        let fin = a.mul(&a.adjoint()).unwrap();
        let both = initial.is_orthogonal_projection() && fin.is_orthogonal_projection();
        prop_assert_eq!(a.is_partial_isometry(), both);
    }

    #[test]
    fn constructed_partial_isometries(v in (1usize..6).prop_flat_map(phased_partial_permutation)) {
        prop_assert!(v.is_partial_isometry());
        prop_assert!(v.adjoint().is_partial_isometry());
        prop_assert!(v.adjoint().mul(&v).unwrap().is_orthogonal_projection());
        prop_assert!(v.mul(&v.adjoint()).unwrap().is_orthogonal_projection());
    }

    #[test]
    fn kron_mixed_product((a, c, b, d) in (1usize..4, 1usize..4, 1usize..4, 1usize..4, 1usize..3, 1usize..3)
        .prop_flat_map(|(r1, k1, c1, r2, k2, c2)| (sparse(r1, k1), sparse(k1, c1), sparse(r2, k2), sparse(k2, c2)))) {
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_bilinear((a1, a2, b) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
        .prop_flat_map(|(r, c, r2, c2)| (sparse(r, c), sparse(r, c), sparse(r2, c2))),
        k in 0u8..4) {
        let s = unit_scalar(k) + Scalar::from_int(2);
        let lhs = a1.scale(&s).add(&a2).unwrap().kron(&b);
        let rhs = a1.kron(&b).scale(&s).add(&a2.kron(&b)).unwrap();
        prop_assert_eq!(lhs, rhs.clone());
        let lhs = b.kron(&a1.scale(&s).add(&a2).unwrap());
        let rhs = b.kron(&a1).scale(&s).add(&b.kron(&a2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn span_closure_is_independent_and_closed(gens in (2usize..4).prop_flat_map(|d| prop::collection::vec(sparse(d, d), 1..3)),
        adjoints in any::<bool>()) {
        let c = span_closure(&gens, adjoints, None).unwrap();
        prop_assert!(c.closed);
        let vecs: Vec<_> = c.basis.iter().map(SparseMat::vectorize).collect();
        prop_assert_eq!(rank(&vecs), c.basis.len());
        prop_assert_eq!(c.dimension, c.basis.len());
        let mut span = Echelon::new();
        for v in &vecs {
            span.insert(v);
        }
        for x in &c.basis {
            for y in &c.basis {
                prop_assert!(span.contains(&x.mul(y).unwrap().vectorize()));
            }
            if adjoints {
                prop_assert!(span.contains(&x.adjoint().vectorize()));
            }
        }
        for g in &gens {
            prop_assert!(span.contains(&g.vectorize()));
        }
    }
}
