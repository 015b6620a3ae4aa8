use proptest::prelude::*;

use super::*;
use crate::strategies::{nonzero_poly, point, poly, space};

fn triple() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    space().prop_flat_map(|s| (poly(s), poly(s), poly(s)))
}

fn pair_at_point() -> impl Strategy<Value = (Poly, Poly, Vec<GaussianRational>)> {
    space().prop_flat_map(|s| (poly(s), poly(s), point(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let s = a.space();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Poly::zero(s), a.clone());
        prop_assert_eq!(&a * &Poly::one(s), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn terms_stay_sorted_and_nonzero((a, b, _c) in triple()) {
        for p in [&a * &b, &a + &b, &a - &b] {
            prop_assert!(p.terms().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(p.terms().iter().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map((a, b, _c) in triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        if a.space().mode() == Mode::Real {
            prop_assert_eq!(a.conj(), a.clone());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b, pt) in pair_at_point()) {
        let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
        prop_assert_eq!((&a + &b).eval(&pt).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!(a.conj().eval(&pt).unwrap(), ea.conj());
    }

    #[test]
    fn exact_division_inverts_product((a, b) in space().prop_flat_map(|s| (poly(s), nonzero_poly(s)))) {
        let q = (&a * &b).div_exact(&b);
        prop_assert_eq!(q, Some(a));
    }

    #[test]
    fn division_detects_remainder((a, b) in space().prop_flat_map(|s| (poly(s), nonzero_poly(s)))) {
        prop_assume!(!b.is_constant());
        let shifted = &(&a * &b) + &Poly::one(a.space());
        prop_assert!(shifted.div_exact(&b).is_none());
    }

    #[test]
    fn gcd_divides_and_keeps_common_factor((a, b, f) in space().prop_flat_map(|s| (nonzero_poly(s), nonzero_poly(s), nonzero_poly(s)))) {
        let (af, bf) = (&a * &f, &b * &f);
        let g = af.gcd(&bf).unwrap();
        prop_assert!(af.div_exact(&g).is_some());
        prop_assert!(bf.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&f).is_some());
        prop_assert!(g.leading_coeff().unwrap().is_one());
    }

    #[test]
    fn budgeted_gcd_still_divides((a, b) in space().prop_flat_map(|s| (nonzero_poly(s), nonzero_poly(s)))) {
        let out = gcd_with_budget(&a, &b, GcdBudget::limited(1)).unwrap();
        prop_assert!(a.div_exact(&out.gcd).is_some());
        prop_assert!(b.div_exact(&out.gcd).is_some());
    }

    #[test]
    fn rational_functions_evaluate_consistently(
        (a, b, c, d, pt) in space().prop_flat_map(|s| (poly(s), nonzero_poly(s), poly(s), nonzero_poly(s), point(s)))
    ) {
        let (bv, dv) = (b.eval(&pt).unwrap(), d.eval(&pt).unwrap());
        prop_assume!(!bv.is_zero() && !dv.is_zero());
        let x = RationalFn::new(a.clone(), b.clone()).unwrap();
        let y = RationalFn::new(c.clone(), d.clone()).unwrap();
        let xv = &a.eval(&pt).unwrap() / &bv;
        let yv = &c.eval(&pt).unwrap() / &dv;
        prop_assert_eq!(x.add(&y).eval(&pt).unwrap(), &xv + &yv);
        prop_assert_eq!(x.mul(&y).eval(&pt).unwrap(), &xv * &yv);
        prop_assert!(x.den().leading_coeff().unwrap().is_one());
        prop_assert_eq!(x.add(&y).sub(&y), x);
    }
}
