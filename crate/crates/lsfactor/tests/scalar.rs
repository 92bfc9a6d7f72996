use lsfactor::scalar::{float, CycContext, CycScalar, Poly, RatFunc};
use num_complex::Complex64;
use proptest::prelude::*;

fn ctx(q: u64) -> lsfactor::scalar::Cyc {
    CycContext::new(q, &[]).unwrap()
}

#[test]
fn cube_roots_sum_to_minus_one() {
    let c = CycContext::new(3, &[3]).unwrap();
    let z3 = CycScalar::root_of_unity_of_order(&c, 3, 1).unwrap();
    let z3sq = CycScalar::root_of_unity_of_order(&c, 3, 2).unwrap();
    assert_eq!(&z3 + &z3sq, CycScalar::from_int(&c, -1));
}

#[test]
fn root_of_unity_times_conjugate_is_one() {
    let c = CycContext::new(2, &[8]).unwrap();
    let z8 = CycScalar::root_of_unity_of_order(&c, 8, 1).unwrap();
    assert!((&z8.conj() * &z8).is_one());
}

#[test]
fn sqrt_q_squares_to_q_and_is_real() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 25, 27] {
        let c = ctx(q);
        let s = CycScalar::sqrt_q(&c);
        assert_eq!(&s * &s, CycScalar::from_int(&c, q as i64), "q = {q}");
        assert_eq!(s.conj(), s, "q = {q}");
        assert!((s.to_complex() - Complex64::new((q as f64).sqrt(), 0.0)).norm() < 1e-9);
    }
}

#[test]
fn order_overflow_is_an_error() {
    let c = ctx(3);
    assert!(CycScalar::root_of_unity_of_order(&c, 5, 1).is_err());
}

#[test]
fn context_mismatch_is_an_error() {
    let a = CycScalar::one(&ctx(3));
    let b = CycScalar::one(&ctx(5));
    assert!(a.checked_add(&b).is_err());
    assert!(a.checked_mul(&b).is_err());
}

#[test]
fn inverse_of_zero_fails() {
    assert!(CycScalar::zero(&ctx(3)).inv().is_err());
}

#[test]
fn json_round_trip() {
    let c = ctx(5);
    let x = &CycScalar::sqrt_q(&c) + &CycScalar::from_frac(&c, 3, 7);
    let back = CycScalar::from_json(&c, &x.to_json()).unwrap();
    assert_eq!(x, back);
}

fn one_minus_z(c: &lsfactor::scalar::Cyc) -> Poly {
    Poly::one_minus(&CycScalar::one(c), 1)
}

#[test]
fn subst_double_of_geometric_series() {
    let c = ctx(3);
    let g = RatFunc::new(Poly::one(&c), one_minus_z(&c)).unwrap();
    let expect = RatFunc::new(Poly::one(&c), Poly::one_minus(&CycScalar::one(&c), 2)).unwrap();
    assert_eq!(g.subst_double(), expect);
}

#[test]
fn cancellation_to_one() {
    let c = ctx(3);
    let a = RatFunc::from_poly(one_minus_z(&c));
    let b = RatFunc::new(Poly::one(&c), one_minus_z(&c)).unwrap();
    assert!(a.mul(&b).is_one());
}

#[test]
fn unramified_twist_by_one() {
    let c = ctx(3);
    let g = RatFunc::new(Poly::one(&c), one_minus_z(&c)).unwrap();
    let qinv = CycScalar::sqrt_q(&c).pow(-2).unwrap();
    let expect = RatFunc::new(Poly::one(&c), Poly::one_minus(&qinv, 1)).unwrap();
    assert_eq!(g.subst_scale(&qinv).unwrap(), expect);
}

#[test]
fn numerator_normalization_reads_off_coprime_form() {
    let c = ctx(3);
    let q = CycScalar::from_int(&c, 3);
    let num = Poly::new(&c, vec![CycScalar::zero(&c), q.clone(), -&q]);
    let den = Poly::new(&c, vec![CycScalar::from_int(&c, -1), q.clone()]);
    let g = RatFunc::new(num, den).unwrap();
    let split = g.numerator_normalized().unwrap();
    assert_eq!(split.numerator, one_minus_z(&c));
    assert_eq!(split.monomial.exp, 1);
    assert_eq!(split.monomial.coeff, -&q);
    let five = RatFunc::constant(CycScalar::from_int(&c, 5));
    assert!(five.numerator_normalized().unwrap().numerator.is_one());
    assert!(RatFunc::zero(&c).numerator_normalized().is_err());
}

#[test]
fn dual_substitution_is_an_involution() {
    let c = ctx(5);
    let qinv = CycScalar::from_frac(&c, 1, 5);
    let g = RatFunc::new(
        Poly::new(
            &c,
            vec![
                CycScalar::from_int(&c, 2),
                CycScalar::sqrt_q(&c),
                CycScalar::from_int(&c, 1),
            ],
        ),
        Poly::one_minus(&CycScalar::from_int(&c, 3), 2),
    )
    .unwrap();
    assert_eq!(g.subst_dual(&qinv).unwrap().subst_dual(&qinv).unwrap(), g);
}

#[test]
fn float_roots_recover_linear_factors() {
    let c = ctx(3);
    let p = &Poly::one_minus(&CycScalar::from_int(&c, 2), 1)
        * &Poly::one_minus(&CycScalar::from_frac(&c, 1, 3), 1);
    let roots = float::roots(&float::poly_to_complex(&p));
    let expect = [Complex64::new(0.5, 0.0), Complex64::new(3.0, 0.0)];
    assert!(float::same_roots(&roots, &expect, 1e-9));
}

fn arb_scalar(c: lsfactor::scalar::Cyc) -> impl Strategy<Value = CycScalar> {
    let m = c.order() as i64;
    proptest::collection::vec((-5i64..=5, 0..m), 1..4).prop_map(move |terms| {
        terms.iter().fold(CycScalar::zero(&c), |acc, &(k, e)| {
            &acc + &(&CycScalar::from_int(&c, k) * &CycScalar::root_of_unity(&c, e))
        })
    })
}

fn arb_ratfunc(c: lsfactor::scalar::Cyc) -> impl Strategy<Value = RatFunc> {
    let cc = c.clone();
    (
        proptest::collection::vec(arb_scalar(c.clone()), 1..4),
        proptest::collection::vec(arb_scalar(c), 1..3),
    )
        .prop_filter_map("nonzero", move |(n, d)| {
            let mut d = d;
            d.insert(0, CycScalar::one(&cc));
            RatFunc::new(Poly::new(&cc, n), Poly::new(&cc, d))
                .ok()
                .filter(|g| !g.is_zero())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_scalar(ctx(5)), b in arb_scalar(ctx(5)), c in arb_scalar(ctx(5))) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        let diff = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
        prop_assert!(diff.norm() < 1e-9);
    }

    #[test]
    fn ratfunc_times_inverse_is_one(g in arb_ratfunc(ctx(3))) {
        prop_assert!(g.mul(&g.inv().unwrap()).is_one());
    }

    #[test]
    fn scale_substitutions_compose(g in arb_ratfunc(ctx(3)), a in arb_scalar(ctx(3)), b in arb_scalar(ctx(3))) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let lhs = g.subst_scale(&a).unwrap().subst_scale(&b).unwrap();
        prop_assert_eq!(lhs, g.subst_scale(&(&a * &b)).unwrap());
    }

    #[test]
    fn float_mirror_agrees(g in arb_ratfunc(ctx(3))) {
        let z = CycScalar::from_frac(g.ctx(), 2, 7);
        if let Ok(v) = g.eval(&z) {
            let f = float::ratfunc_eval(&g, Complex64::new(2.0 / 7.0, 0.0));
            prop_assert!((v.to_complex() - f).norm() < 1e-9 * (1.0 + f.norm()));
        }
    }
}

fn arb_poly(c: lsfactor::scalar::Cyc) -> impl Strategy<Value = Poly> {
    let cc = c.clone();
    proptest::collection::vec(arb_scalar(c), 1..4).prop_map(move |v| Poly::new(&cc, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gcd_contains_common_factor(a in arb_poly(ctx(5)), b in arb_poly(ctx(5)), c in arb_poly(ctx(5))) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y).unwrap();
        prop_assert!(x.divrem(&g).unwrap().1.is_zero());
        prop_assert!(y.divrem(&g).unwrap().1.is_zero());
        prop_assert!(g.divrem(&c).unwrap().1.is_zero());
        let (xs, ys) = (x.unshift(x.z_order()), y.unshift(y.z_order()));
        if let Some(bound) = xs.gcd_degree_bound(&ys) {
            prop_assert!(bound >= g.unshift(g.z_order()).degree().unwrap());
        }
    }
}
