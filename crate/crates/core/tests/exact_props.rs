use abns::exact::rational::{int, ratio};
use abns::{Poly, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..max_len).prop_map(Poly::new)
}

/// Polynomial whose nonzero terms all have the parity of `n`.
fn parity_poly(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), n / 2 + 1).prop_map(move |halves| {
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, c) in halves.into_iter().enumerate() {
            coeffs[n % 2 + 2 * i] = c;
        }
        Poly::new(coeffs)
    })
}

proptest! {
    #[test]
    fn reciprocal_product_is_one(a in nonzero_rational(), b in nonzero_rational()) {
        let q = &a / &b;
        prop_assert!((&q * (&b / &a)).is_one());
        // Normalized form: positive denominator, coprime parts.
        prop_assert!(q.denom() > &num_bigint::BigInt::zero());
        prop_assert_eq!(Rational::new(q.numer().clone(), q.denom().clone()), q);
    }

    #[test]
    fn unit_scale_is_identity((n, p) in (0usize..12).prop_flat_map(|n| (Just(n), parity_poly(n)))) {
        prop_assert_eq!(p.scaled_compose(&int(1), n).unwrap(), p);
    }

    #[test]
    fn scaling_round_trip((n, p) in (0usize..12).prop_flat_map(|n| (Just(n), parity_poly(n))),
                          c in (1i64..50, 1i64..50).prop_map(|(a, b)| ratio(a, b))) {
        let there = p.scaled_compose(&c, n).unwrap();
        let back = there.scaled_compose(&(Rational::one() / &c), n).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn derivative_is_linear(p in poly(10), q in poly(10), a in rational(), b in rational()) {
        let lhs = (p.scale(&a) + q.scale(&b)).differentiate();
        let rhs = p.differentiate().scale(&a) + q.differentiate().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_reconstructs(p in poly(10), d in poly(6).prop_filter("nonzero", |d| !d.is_zero())) {
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert!(r.is_zero() || r.degree() < d.degree());
        prop_assert_eq!(&q * &d + r, p);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(8), q in poly(8), x in rational()) {
        prop_assert_eq!((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
        prop_assert_eq!((&p + &q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x));
    }
}
