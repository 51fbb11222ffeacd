use nsgrade::algebra::{subspace_product, Algebra, FamilySpec, Identity, Subspace};
use nsgrade::exactla::{rat, Matrix, Rational};
use proptest::prelude::*;

fn algebra(max_dim: usize) -> impl Strategy<Value = Algebra> {
    (1usize..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n * n).prop_map(move |c| {
            let names = (0..n).map(|i| format!("x{i}")).collect();
            Algebra::from_table(names, c.into_iter().map(rat).collect()).unwrap()
        })
    })
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(rat).collect())
}

/// Entries biased towards zero so that associative instances are common.
fn sparse_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -2i64..=2], n * n)
        .prop_map(move |v| Matrix::from_entries(n, n, v.into_iter().map(rat).collect()).unwrap())
}

fn family() -> impl Strategy<Value = FamilySpec> {
    (1usize..=3).prop_flat_map(|n| {
        (
            sparse_matrix(n),
            sparse_matrix(n),
            sparse_matrix(n),
            sparse_matrix(n),
        )
            .prop_map(|(a, b, c, d)| FamilySpec::new(a, b, c, d).unwrap())
    })
}

fn combo(s: &Rational, x: &[Rational], t: &Rational, y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| s * a + t * b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_bilinear(
        (alg, x, y, z) in algebra(3).prop_flat_map(|a| {
            let n = a.dim();
            (Just(a), vector(n), vector(n), vector(n))
        }),
        s in -3i64..=3,
        t in -3i64..=3,
    ) {
        let (s, t) = (rat(s), rat(t));
        let left = alg.product(&combo(&s, &x, &t, &y), &z).unwrap();
        let expected = combo(&s, &alg.product(&x, &z).unwrap(), &t, &alg.product(&y, &z).unwrap());
        prop_assert_eq!(left, expected);
        let right = alg.product(&z, &combo(&s, &x, &t, &y)).unwrap();
        let expected = combo(&s, &alg.product(&z, &x).unwrap(), &t, &alg.product(&z, &y).unwrap());
        prop_assert_eq!(right, expected);
    }

    #[test]
    fn family_conditions_match_full_check(spec in family()) {
        let conditions = spec.associativity_conditions();
        let full = spec.build().check_identity(Identity::Associative);
        prop_assert_eq!(conditions.is_empty(), full.is_pass(), "{:?}", conditions);
    }

    #[test]
    fn symmetric_family_is_commutative(n in 1usize..=3, seed in any::<u64>()) {
        let f = Matrix::from_entries(n, n, (0..n * n).map(|i| rat(((seed >> (i % 60)) & 3) as i64 - 1)).collect()).unwrap();
        let g = f.transpose();
        let spec = FamilySpec::new(f.clone(), f, g.clone(), g).unwrap();
        prop_assert!(spec.build().check_identity(Identity::Commutative).is_pass());
    }

    #[test]
    fn subspace_product_matches_double_loop(
        (alg, us, ws) in algebra(3).prop_flat_map(|a| {
            let n = a.dim();
            (Just(a), prop::collection::vec(vector(n), 0..3), prop::collection::vec(vector(n), 0..3))
        })
    ) {
        let n = alg.dim();
        let (u, w) = (Subspace::span(n, &us), Subspace::span(n, &ws));
        let mut products = Vec::new();
        for x in &us {
            for y in &ws {
                products.push(alg.product(x, y).unwrap());
            }
        }
        let expected = Subspace::span(n, &products);
        prop_assert_eq!(subspace_product(&alg, &u, &w).unwrap(), expected.clone());
        // canonical form is stable
        prop_assert_eq!(Subspace::span(n, &expected.basis_vectors()), expected);
    }
}

#[test]
fn zero_algebra_passes_everything() {
    let alg = Algebra::with_dim(3);
    for id in [
        Identity::Associative,
        Identity::Commutative,
        Identity::Anticommutative,
        Identity::Jacobi(Default::default()),
    ] {
        assert!(alg.check_identity(id).is_pass());
    }
}
