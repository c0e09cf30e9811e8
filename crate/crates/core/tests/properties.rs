use proptest::prelude::*;

use odelin::jetcore::{jet, rat, total_derivative_poly, total_derivative_ratfunc, MPoly, Monomial, Rat, RatFunc};
use odelin::linalg::{charpoly, inverse, mat_mul, Matrix};
use odelin::odeparse::{parse_ode, print_ode, OdeSpec};
use odelin::recover::{affine_class, affine_equivalent, transform, CharPoly};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| *r != rat(0, 1))
}

/// Polynomial in `x` and the jet coordinates up to `y^(top)`.
fn poly(top: usize, terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, jet(top) + 1), small_rat()), 0..=terms)
        .prop_map(|ts| MPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::from_exps(e), c))))
}

fn nonzero_poly(top: usize, terms: usize) -> impl Strategy<Value = MPoly> {
    poly(top, terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(small_rat(), n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn total_derivative_is_a_derivation(p in poly(2, 4), q in poly(2, 4)) {
        let lhs = total_derivative_poly(&(&p * &q));
        let rhs = &(&total_derivative_poly(&p) * &q) + &(&p * &total_derivative_poly(&q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivative_quotient_rule(p in poly(1, 3), q in nonzero_poly(1, 3)) {
        let r = RatFunc::new(p.clone(), q.clone()).unwrap();
        let dp = RatFunc::from_poly(total_derivative_poly(&p));
        let dq = RatFunc::from_poly(total_derivative_poly(&q));
        let (pf, qf) = (RatFunc::from_poly(p), RatFunc::from_poly(q));
        let expected = (&(&dp * &qf) - &(&pf * &dq)).div(&(&qf * &qf)).unwrap();
        prop_assert_eq!(total_derivative_ratfunc(&r), expected);
    }

    #[test]
    fn ratfunc_is_canonical(p in poly(1, 3), q in nonzero_poly(1, 3), s in nonzero_poly(1, 2)) {
        let r = RatFunc::new(p.clone(), q.clone()).unwrap();
        let scaled = RatFunc::new(&p * &s, &q * &s).unwrap();
        prop_assert_eq!(&r, &scaled);
        prop_assert_eq!(r.den().leading_coeff(), rat(1, 1));
        if r.is_zero() {
            prop_assert!(r.den().is_one());
        }
    }

    #[test]
    fn ode_print_parse_round_trip(n in 2usize..=4, num in poly(1, 4), den in nonzero_poly(1, 2)) {
        let f = RatFunc::new(num, den).unwrap();
        let ode = OdeSpec::new(n, f).unwrap();
        let text = print_ode(&ode);
        let back = parse_ode(&text).unwrap();
        prop_assert_eq!(back, ode, "{}", text);
    }

    #[test]
    fn affine_class_is_invariant(
        cs in prop::collection::vec(small_rat(), 2..=5),
        k in nonzero_rat(),
        b in small_rat(),
    ) {
        let p = CharPoly::new(cs);
        let q = transform(&p, &k, &b).unwrap();
        prop_assert_eq!(affine_class(&p), affine_class(&q));
        prop_assert!(affine_equivalent(&q, &p));
    }

    #[test]
    fn charpoly_is_similarity_invariant(a in matrix(3), m in matrix(3)) {
        if let Some(inv) = inverse(&m) {
            let b = mat_mul(&mat_mul(&inv, &a), &m);
            prop_assert_eq!(charpoly(&a), charpoly(&b));
        }
    }
}
