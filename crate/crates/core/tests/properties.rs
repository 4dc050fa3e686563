use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use qdouble_core::algebra::{multiply, tensor_multiply, Element};
use qdouble_core::cocycle::{coboundary, is_coboundary, is_cocycle, smith_normal_form, AdditiveCochain};
use qdouble_core::{
    build_uqb, validate_params, Algebra, CartanType, CycScalar, CyclotomicField, HopfAlgebra, IdempotentAlgebra,
    Monomial, Uqb,
};

fn scalar(order: u32) -> impl Strategy<Value = CycScalar> {
    prop::collection::vec((0..order as i64, -3i64..=3), 0..5).prop_map(move |terms| {
        let f = CyclotomicField::get(order);
        terms
            .into_iter()
            .fold(f.zero(), |acc, (k, c)| acc + f.zeta_pow(k) * f.from_int(c))
    })
}

/// Cofactor expansion, independent of the elimination code.
fn laplace(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * laplace(&minor);
            if j % 2 == 0 { term } else { -term }
        })
        .sum()
}

fn field_order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![9u32, 25, 12, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_axioms((a, b, c) in field_order().prop_flat_map(|m| (scalar(m), scalar(m), scalar(m)))) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &a.field().one(), a);
    }

    #[test]
    fn cyclotomic_inverse(a in field_order().prop_flat_map(scalar)) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn zeta_is_primitive(m in field_order(), k in -60i64..60) {
        let f = CyclotomicField::get(m);
        prop_assert_eq!(f.zeta_pow(k), f.zeta_pow(k + m as i64));
        prop_assert_eq!(f.zeta_pow(k).as_zeta_power(), Some(k.rem_euclid(m as i64) as u32));
        prop_assert_eq!(f.zeta_pow(k).is_one(), k.rem_euclid(m as i64) == 0);
    }

    #[test]
    fn snf_decomposes(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-6i64..=6, 16)) {
        let m: Vec<Vec<BigInt>> = (0..rows)
            .map(|r| (0..cols).map(|c| BigInt::from(seed[r * 4 + c])).collect())
            .collect();
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify());
        if rows == cols {
            let prod = snf.diagonal.iter().fold(BigInt::from(1), |acc, d| acc * d);
            let det = laplace(&m).abs();
            if snf.rank == rows {
                prop_assert_eq!(prod.abs(), det);
            } else {
                prop_assert_eq!(det, BigInt::from(0));
            }
        }
    }

    #[test]
    fn coboundaries_are_trivial(n in prop::sample::select(vec![3u32, 5]), vals in prop::collection::vec(0u32..5, 25)) {
        let mu = AdditiveCochain::from_fn(n, 2, |x| vals[(x[0] * n + x[1]) as usize] as i64);
        let w = coboundary(&mu);
        prop_assert!(is_cocycle(&w));
        prop_assert!(is_coboundary(&w).unwrap().is_trivial());
    }

    #[test]
    fn shifted_class_stays_nontrivial(
        n in prop::sample::select(vec![3u32, 5]),
        k in 1u32..5,
        vals in prop::collection::vec(0u32..5, 25),
    ) {
        prop_assume!(k % n != 0);
        let mu = AdditiveCochain::from_fn(n, 2, |x| vals[(x[0] * n + x[1]) as usize] as i64);
        let dm = coboundary(&mu);
        let ni = n as i64;
        let w = AdditiveCochain::from_fn(n, 3, |x| {
            let (b, c, d) = (x[0] as i64, x[1] as i64, x[2] as i64);
            let omega = 2 * b * ((c + d) % ni - c - d) / ni;
            k as i64 * omega + dm.get(x) as i64
        });
        prop_assert!(is_cocycle(&w));
        prop_assert!(!is_coboundary(&w).unwrap().is_trivial());
    }

    #[test]
    fn parameter_rule(n in -2i64..40) {
        let expected = n >= 3 && n % 2 == 1;
        prop_assert_eq!(validate_params(CartanType::A1, n).is_ok(), expected);
        prop_assert_eq!(validate_params(CartanType::A2, n).is_ok(), expected && n % 3 != 0);
    }
}

fn a1() -> Arc<Uqb> {
    build_uqb(CartanType::A1, 3).unwrap()
}

fn a2() -> Arc<Uqb> {
    build_uqb(CartanType::A2, 5).unwrap()
}

fn monomial_a1() -> impl Strategy<Value = Monomial> {
    (0u32..9, 0u32..9).prop_map(|(g, e)| a1().monomial(&[g], &[e]))
}

fn monomial_a2() -> impl Strategy<Value = Monomial> {
    (0u32..25, 0u32..25, 0u32..4, 0u32..3, 0u32..4).prop_map(|(g1, g2, e1, e12, e2)| a2().monomial(&[g1, g2], &[e1, e12, e2]))
}

fn basis(u: &Uqb, m: Monomial) -> Element<Monomial> {
    Element::basis(m, u.field().one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uqb_a2_associative(a in monomial_a2(), b in monomial_a2(), c in monomial_a2()) {
        let u = a2();
        let (a, b, c) = (basis(&u, a), basis(&u, b), basis(&u, c));
        prop_assert_eq!(multiply(&*u, &multiply(&*u, &a, &b), &c), multiply(&*u, &a, &multiply(&*u, &b, &c)));
    }

    #[test]
    fn uqb_a1_coproduct_multiplicative(a in monomial_a1(), b in monomial_a1()) {
        let u = a1();
        let (x, y) = (basis(&u, a), basis(&u, b));
        let lhs = u.coproduct(&multiply(&*u, &x, &y));
        let rhs = tensor_multiply(&*u, &u.coproduct(&x), &u.coproduct(&y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn idempotent_change_of_basis_round_trips(a in monomial_a1(), b in monomial_a1()) {
        let u = a1();
        let x = basis(&u, a).add(&basis(&u, b).scale(&u.field().zeta_pow(2)));
        for modulus in [3, 9] {
            let alg = IdempotentAlgebra::new(u.clone(), modulus);
            match alg.to_idempotent(&x) {
                Ok(xi) => prop_assert_eq!(alg.to_group(&xi), x.clone()),
                // only the fine basis spans all of u_q(b)
                Err(_) => prop_assert_eq!(modulus, 3),
            }
        }
    }
}
