use linksig_core::{LaurentPoly, TorusPoint};
use num_rational::Ratio;
use proptest::prelude::*;

fn poly(mu: usize) -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((proptest::collection::vec(-3i32..=3, mu), -6i64..=6), 0..6).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(LaurentPoly::zero(mu), |acc, (e, c)| acc + LaurentPoly::monomial(mu, &e, c))
    })
}

fn nonzero_poly(mu: usize) -> impl Strategy<Value = LaurentPoly> {
    poly(mu).prop_filter("nonzero", |p| !p.is_zero())
}

fn point(mu: usize) -> impl Strategy<Value = TorusPoint> {
    proptest::collection::vec((0i64..200, 1i64..200), mu).prop_map(|v| {
        TorusPoint::new(v.into_iter().map(|(k, d)| Ratio::new(k % d, d)).collect()).unwrap()
    })
}

fn unit(mu: usize) -> impl Strategy<Value = LaurentPoly> {
    (proptest::collection::vec(-4i32..=4, mu), prop::bool::ANY)
        .prop_map(move |(e, neg)| LaurentPoly::monomial(mu, &e, if neg { -1 } else { 1 }))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(2), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn gcd_divides_both(a in poly(2), b in poly(2), c in nonzero_poly(2)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y).unwrap();
        if g.is_zero() {
            prop_assert!(x.is_zero() && y.is_zero());
            return Ok(());
        }
        prop_assert!(x.exact_div(&g).is_ok());
        prop_assert!(y.exact_div(&g).is_ok());
        prop_assert!(g.exact_div(&c).is_ok(), "{} lacks the common factor {}", g, c);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(3), b in nonzero_poly(3)) {
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn eval_is_a_homomorphism(a in poly(2), b in poly(2), w in point(2)) {
        let prod = (&a * &b).eval(&w).unwrap() - a.eval(&w).unwrap() * b.eval(&w).unwrap();
        prop_assert!(prod.norm() <= 1e-12 * (1.0 + a.coeff_mass() * b.coeff_mass()));
        let sum = (&a + &b).eval(&w).unwrap() - a.eval(&w).unwrap() - b.eval(&w).unwrap();
        prop_assert!(sum.norm() <= 1e-12 * (1.0 + a.coeff_mass() + b.coeff_mass()));
    }

    #[test]
    fn normal_form_absorbs_units(a in nonzero_poly(2), u in unit(2)) {
        let n = a.unit_normalize();
        prop_assert_eq!(n.poly().unit_normalize(), n.clone());
        prop_assert_eq!((&a * &u).unit_normalize(), n.clone());
        prop_assert!(a.eq_up_to_units(&(&a * &u)));
        prop_assert!(n.poly().min_exponents().iter().all(|&e| e == 0));
    }

    #[test]
    fn display_parses_back(a in poly(3)) {
        prop_assert_eq!(LaurentPoly::parse(&a.to_string(), 3).unwrap(), a.clone());
        let h = a.to_half_step().unwrap();
        prop_assert_eq!(LaurentPoly::parse_half_step(&h.to_string(), 3).unwrap(), h.clone());
        prop_assert_eq!(h.from_half_step().unwrap(), a);
    }

    #[test]
    fn involution_twice_is_identity(a in poly(2), w in point(2)) {
        prop_assert_eq!(a.conj_involution().conj_involution(), a.clone());
        let lhs = a.conj_involution().eval(&w).unwrap();
        let rhs = a.eval(&w.conj()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + a.coeff_mass()));
    }
}
