use std::collections::HashSet;

use lsfactor::characters::AddChar;
use lsfactor::localfield::{
    EElem, FiniteField, LaurentElem, LocalField, QuadEtale, QuadKind, StepFunction,
};
use lsfactor::scalar::CycScalar;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(q: u64) -> LocalField {
    LocalField::for_levels(q, 3, &QuadEtale::required_orders(q, 3), 24).unwrap()
}

#[test]
fn finite_field_axioms() {
    for q in [2u64, 3, 4, 8, 9, 25] {
        let k = FiniteField::of_order(q).unwrap();
        let qq = k.q();
        for a in 1..qq {
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            assert_eq!(k.pow(a, qq as u64 - 1), 1);
            assert_eq!(k.frob(a, k.n()), a);
            assert_eq!(k.exp(k.log(a).unwrap() as i64), a);
            for b in 0..qq {
                assert_eq!(k.sub(k.add(a, b), b), a);
            }
        }
        let squares = (1..qq).filter(|&a| k.is_square(a)).count() as u32;
        assert_eq!(squares, if q % 2 == 0 { qq - 1 } else { (qq - 1) / 2 });
    }
}

#[test]
fn laurent_inverse_and_truncation() {
    let f = field(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let x = f.random_nonzero(&mut rng, -3, 3, 4);
        let y = f.inv_mod(&x, 6).unwrap();
        let v = x.val().unwrap();
        let prod = f.mul_trunc(&x, &y, 6 + v);
        assert_eq!(prod, LaurentElem::one());
    }
}

#[test]
fn trace_norm_and_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [3u64, 4, 5] {
        let f = field(q);
        for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
            let Ok(e) = QuadEtale::new(&f, kind) else {
                assert_eq!(kind, QuadKind::Ramified);
                continue;
            };
            for _ in 0..20 {
                let x = f.random_nonzero(&mut rng, -2, 2, 3);
                let ex = e.embed(&x);
                assert_eq!(e.norm(&ex).unwrap(), f.mul(&x, &x));
                assert_eq!(e.trace(&ex).unwrap(), f.add(&x, &x));
                assert_eq!(e.conj(&ex), ex);
                let y = random_e(&e, &mut rng);
                let z = random_e(&e, &mut rng);
                assert_eq!(e.conj(&e.conj(&y)), y);
                let nyz = e.norm(&e.mul(&y, &z).unwrap()).unwrap();
                assert_eq!(nyz, f.mul(&e.norm(&y).unwrap(), &e.norm(&z).unwrap()));
                let s = e.norm(&y).unwrap();
                let t = e.norm(&z).unwrap();
                assert_eq!(e.eta(&f.mul(&s, &t)).unwrap(), 1);
            }
            let b = e.beta();
            let tr = e.trace(&b).unwrap();
            assert_eq!(tr.val(), Some(0));
        }
    }
}

fn random_e(e: &QuadEtale, rng: &mut ChaCha8Rng) -> EElem {
    match e.ext() {
        None => EElem::Split(
            e.base().random_nonzero(rng, -2, 2, 3),
            e.base().random_nonzero(rng, -2, 2, 3),
        ),
        Some(ext) => EElem::Field(ext.random_nonzero(rng, -2, 2, 3)),
    }
}

#[test]
fn eta_matches_brute_force_norm_group() {
    for q in [3u64, 5, 9] {
        let f = field(q);
        for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
            let e = QuadEtale::new(&f, kind).unwrap();
            let mut norms = HashSet::new();
            let sources: Vec<EElem> = match e.ext() {
                None => (1..q as u32)
                    .flat_map(|a| {
                        (-2..=2).map(move |v| {
                            EElem::Split(LaurentElem::monomial(a, v), LaurentElem::one())
                        })
                    })
                    .collect(),
                Some(ext) => (1..ext.q() as u32)
                    .flat_map(|a| (-4..=4).map(move |v| EElem::Field(LaurentElem::monomial(a, v))))
                    .collect(),
            };
            for y in sources {
                let n = e.norm(&y).unwrap();
                norms.insert((n.val().unwrap(), n.leading().unwrap()));
            }
            for v in -2..=2i64 {
                for a in 1..q as u32 {
                    let x = LaurentElem::new(v, vec![a, 1]);
                    let expect = if norms.contains(&(v, a)) { 1 } else { -1 };
                    assert_eq!(e.eta(&x).unwrap(), expect, "q={q} {kind:?} v={v} a={a}");
                }
            }
        }
    }
}

#[test]
fn eta_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [3u64, 5, 7] {
        let f = field(q);
        for kind in [QuadKind::Unramified, QuadKind::Ramified] {
            let e = QuadEtale::new(&f, kind).unwrap();
            for _ in 0..40 {
                let x = f.random_nonzero(&mut rng, -3, 3, 2);
                let y = f.random_nonzero(&mut rng, -3, 3, 2);
                assert_eq!(
                    e.eta(&f.mul(&x, &y)).unwrap(),
                    e.eta(&x).unwrap() * e.eta(&y).unwrap()
                );
            }
        }
    }
}

#[test]
fn additive_character_level() {
    for q in [2u64, 4, 5] {
        let f = field(q);
        for l in -2..=2 {
            let psi = AddChar::with_level(&f, l);
            assert_eq!(psi.level(), l);
            for a in 0..q as u32 {
                assert!(psi.eval(&LaurentElem::monomial(a, l)).is_one());
            }
            let nontrivial =
                (1..q as u32).any(|a| !psi.eval(&LaurentElem::monomial(a, l - 1)).is_one());
            assert!(nontrivial);
        }
    }
}

#[test]
fn fourier_transform_of_a_coset_of_units() {
    let f = field(3);
    let c = f.cyc();
    let psi = AddChar::standard(&f);
    let g = StepFunction::indicator(&f, &LaurentElem::one(), 2);
    let h = g.fourier(&f, &psi);
    let vol = CycScalar::from_frac(c, 1, 9);
    assert_eq!(h.level(), 0);
    assert_eq!(h.cells().count(), 9);
    for (x, w) in h.cells() {
        assert_eq!(w, &(&vol * &psi.eval(x)));
    }
}

fn random_step(f: &LocalField, rng: &mut ChaCha8Rng) -> StepFunction {
    let lo = rng.gen_range(-2..=1i64);
    let level = lo + rng.gen_range(1..=2i64);
    let mut out = StepFunction::zero(level);
    for _ in 0..rng.gen_range(1..4) {
        let a = if rng.gen_bool(0.2) {
            LaurentElem::zero()
        } else {
            f.random_nonzero(rng, lo, level - 1, 3)
        };
        let ind = StepFunction::indicator(f, &a, level)
            .scale(&CycScalar::from_int(f.cyc(), rng.gen_range(1..4)));
        out = out.add(f, &ind);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_inversion_gives_reflection(seed in 0u64..10_000, qi in 0usize..4, l in -2i64..=2) {
        let q = [2u64, 3, 4, 5][qi];
        let f = field(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_step(&f, &mut rng);
        let psi = AddChar::with_level(&f, l);
        let back = g.fourier(&f, &psi).fourier(&f, &psi);
        let minus = LaurentElem::monomial(f.res().from_int(-1), 0);
        prop_assert!(back.equals(&f, &g.dilate(&f, &minus).unwrap()));
    }

    #[test]
    fn fourier_of_dilate(seed in 0u64..10_000, l in -1i64..=1) {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_step(&f, &mut rng);
        let a = f.random_nonzero(&mut rng, -1, 1, 2);
        let psi = AddChar::with_level(&f, l);
        let lhs = g.fourier(&f, &psi.twist(&a).unwrap());
        let half_abs = CycScalar::sqrt_p_pow(f.cyc(), -(f.f() as i64) * a.val().unwrap());
        let rhs = g.fourier(&f, &psi).dilate(&f, &a).unwrap().scale(&half_abs);
        prop_assert!(lhs.equals(&f, &rhs));
    }
}
