use proptest::prelude::*;

use twistlab::expr::{antipode_eval, counit_eval, eval_expr, Expr, Morphism};
use twistlab::hopf::{twisted_coproduct, Witness};
use twistlab::sparse::{analytic_apply, kron, permute_legs, AnalyticFn, SparseMatrix};
use twistlab::twist::{chain_twist, jordanian_factor};
use twistlab::{Rational, TwistSequence};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| Rational::new(n, d))
}

/// Strictly upper triangular entries, then a basis permutation.
fn nilpotent(max_dim: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max_dim).prop_flat_map(|dim| {
        let slots = dim * (dim - 1) / 2;
        (
            proptest::collection::vec(proptest::option::weighted(0.5, small_rational()), slots),
            Just((0..dim).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(vals, perm)| {
                let mut trips = Vec::new();
                let mut k = 0;
                for i in 1..=dim {
                    for j in i + 1..=dim {
                        if let Some(v) = &vals[k] {
                            trips.push((i, j, v.clone()));
                        }
                        k += 1;
                    }
                }
                SparseMatrix::from_triplets(dim, trips)
                    .unwrap()
                    .permute_basis(&perm)
            })
    })
}

fn square(dim: usize) -> impl Strategy<Value = SparseMatrix> {
    proptest::collection::vec(proptest::option::weighted(0.4, small_rational()), dim * dim)
        .prop_map(move |vals| {
            let trips = vals
                .into_iter()
                .enumerate()
                .filter_map(|(k, v)| v.map(|v| (k / dim + 1, k % dim + 1, v)));
            SparseMatrix::from_triplets(dim, trips).unwrap()
        })
}

fn general(max_dim: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max_dim).prop_flat_map(square)
}

fn same_dim_pair(max_dim: usize) -> impl Strategy<Value = (SparseMatrix, SparseMatrix)> {
    (1..=max_dim).prop_flat_map(|d| (square(d), square(d)))
}

fn exp(m: &SparseMatrix) -> SparseMatrix {
    analytic_apply(&AnalyticFn::Exp, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mixed_product_law(ac in same_dim_pair(3), bd in same_dim_pair(3)) {
        let ((a, c), (b, d)) = (ac, bd);
        prop_assert_eq!(kron(&a, &b).mul(&kron(&c, &d)), kron(&a.mul(&c), &b.mul(&d)));
    }

    #[test]
    fn exp_log_round_trip(n in nilpotent(6)) {
        let id = SparseMatrix::identity(n.dim());
        let back = analytic_apply(&AnalyticFn::Log1p, &exp(&n).sub(&id)).unwrap();
        prop_assert_eq!(back, n.clone());
        let there = exp(&analytic_apply(&AnalyticFn::Log1p, &n).unwrap());
        prop_assert_eq!(there, n.add(&id));
    }

    #[test]
    fn pow1p_inverse_law(n in nilpotent(6), q in small_rational()) {
        let up = analytic_apply(&AnalyticFn::Pow1p(q.clone()), &n).unwrap();
        let down = analytic_apply(&AnalyticFn::Pow1p(-q), &n).unwrap();
        prop_assert!(up.mul(&down).is_identity());
    }

    #[test]
    fn pow1p_matches_exp_of_log(n in nilpotent(5), q in small_rational()) {
        let via_exp = exp(&analytic_apply(&AnalyticFn::Log1p, &n).unwrap().scale(&q));
        prop_assert_eq!(analytic_apply(&AnalyticFn::Pow1p(q), &n).unwrap(), via_exp);
    }

    #[test]
    fn exp_additive_on_commuting(a in nilpotent(6), c1 in small_rational(), c2 in small_rational()) {
        let b = a.scale(&c1).add(&a.mul(&a).scale(&c2));
        prop_assert_eq!(exp(&a.add(&b)), exp(&a).mul(&exp(&b)));
    }

    #[test]
    fn exp_additive_across_legs(a in nilpotent(3), b in nilpotent(3)) {
        let (ia, ib) = (SparseMatrix::identity(a.dim()), SparseMatrix::identity(b.dim()));
        let x = kron(&a, &ib);
        let y = kron(&ia, &b);
        prop_assert_eq!(exp(&x.add(&y)), kron(&exp(&a), &exp(&b)));
    }

    #[test]
    fn unipotent_inverse(n in nilpotent(6)) {
        let u = n.add(&SparseMatrix::identity(n.dim()));
        prop_assert!(u.mul(&u.inverse().unwrap()).is_identity());
    }

    #[test]
    fn swap_is_involution(ab in same_dim_pair(3)) {
        let (a, b) = ab;
        let d = a.dim();
        let m = kron(&a, &b);
        prop_assert_eq!(permute_legs(&m, d, &[1, 0]), kron(&b, &a));
        prop_assert_eq!(permute_legs(&permute_legs(&m, d, &[1, 0]), d, &[1, 0]), m);
    }

    #[test]
    fn dump_round_trip(m in general(5)) {
        prop_assert_eq!(SparseMatrix::from_dump_str(&m.to_dump_string()).unwrap(), m);
    }
}

/// Random elements of U(gl(3)) built from generators, scalars, sums,
/// products and power series in strictly upper generators.
fn element() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1usize..=3, 1usize..=3).prop_map(|(i, j)| Expr::gen(i, j)),
        small_rational().prop_map(Expr::scalar),
        (small_rational(), 1usize..=2).prop_map(|(q, i)| Expr::exp_sigma(q, i, 3)),
        Just(Expr::sigma(1, 3)),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Expr::sum),
            proptest::collection::vec(inner, 2..=3).prop_map(Expr::prod),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluation_is_a_morphism(x in element(), y in element()) {
        for phi in [Morphism::fundamental(3).unwrap(), Morphism::doubled(3).unwrap()] {
            let (ex, ey) = (eval_expr(&x, &phi).unwrap(), eval_expr(&y, &phi).unwrap());
            prop_assert_eq!(eval_expr(&(x.clone() * y.clone()), &phi).unwrap(), ex.mul(&ey));
            prop_assert_eq!(eval_expr(&(x.clone() + y.clone()), &phi).unwrap(), ex.add(&ey));
        }
    }

    #[test]
    fn antipode_is_an_antimorphism(x in element(), y in element()) {
        let phi = Morphism::fundamental(3).unwrap();
        let lhs = antipode_eval(&(x.clone() * y.clone()), &phi).unwrap();
        let rhs = antipode_eval(&y, &phi).unwrap().mul(&antipode_eval(&x, &phi).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(antipode_eval(&x.antipode(), &phi).unwrap(), eval_expr(&x, &phi).unwrap());
    }

    #[test]
    fn counit_is_the_zero_morphism(x in element(), y in element()) {
        let zero = Morphism::zero(3, 2).unwrap();
        let cx = counit_eval(&x).unwrap();
        prop_assert_eq!(eval_expr(&x, &zero).unwrap(), SparseMatrix::scalar(2, cx.clone()));
        prop_assert_eq!(counit_eval(&(x.clone() * y.clone())).unwrap(), &cx * &counit_eval(&y).unwrap());
    }

    #[test]
    fn undeformed_coproduct_is_coassociative(x in element()) {
        let phi = Morphism::fundamental(3).unwrap();
        let delta = Morphism::coproduct(&phi).unwrap();
        let left = Morphism::tensor_sum(&delta, &phi).unwrap();
        let right = Morphism::tensor_sum(&phi, &delta).unwrap();
        prop_assert_eq!(eval_expr(&x, &left).unwrap(), eval_expr(&x, &right).unwrap());
    }

    #[test]
    fn twisted_coproduct_is_multiplicative(x in element(), y in element()) {
        let w = Witness::fundamental(3).unwrap();
        let f = TwistSequence::single(jordanian_factor(3, 1).unwrap());
        let dxy = twisted_coproduct(&f, &(x.clone() * y.clone()), &w).unwrap();
        let dx = twisted_coproduct(&f, &x, &w).unwrap();
        let dy = twisted_coproduct(&f, &y, &w).unwrap();
        prop_assert_eq!(dxy, dx.mul(&dy));
    }
}

#[test]
fn chain_twisted_coproduct_is_multiplicative_on_generator_pairs() {
    let w = Witness::fundamental(6).unwrap();
    let f = chain_twist(6, 1).unwrap();
    let pairs = [
        ((1, 3), (3, 6)),
        ((2, 4), (4, 5)),
        ((1, 2), (2, 1)),
        ((5, 6), (1, 5)),
    ];
    for ((a, b), (c, d)) in pairs {
        let (x, y) = (Expr::gen(a, b), Expr::gen(c, d));
        let dxy = twisted_coproduct(&f, &(x.clone() * y.clone()), &w).unwrap();
        let prod = twisted_coproduct(&f, &x, &w)
            .unwrap()
            .mul(&twisted_coproduct(&f, &y, &w).unwrap());
        assert_eq!(dxy, prod);
    }
}
