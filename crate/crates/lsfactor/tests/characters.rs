use lsfactor::characters::{
    base_change, hilbert90_extend, norm_one_classes, restrict_to_f, E1Char, EChar, MulChar,
};
use lsfactor::localfield::{EElem, LaurentElem, LocalField, QuadEtale, QuadKind};
use lsfactor::scalar::CycScalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(q: u64) -> LocalField {
    LocalField::for_levels(q, 3, &QuadEtale::required_orders(q, 3), 24).unwrap()
}

#[test]
fn random_characters_are_multiplicative_with_exact_conductor() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [2u64, 3, 4, 5] {
        let f = field(q);
        for m in 0..=3usize {
            for _ in 0..8 {
                let chi = MulChar::random_unitary(&f, m, &mut rng).unwrap();
                let n = chi.conductor();
                assert!(n <= m);
                for _ in 0..10 {
                    let x = f.random_nonzero(&mut rng, -2, 2, 4);
                    let y = f.random_nonzero(&mut rng, -2, 2, 4);
                    let lhs = chi.eval(&f.mul(&x, &y)).unwrap();
                    assert_eq!(lhs, &chi.eval(&x).unwrap() * &chi.eval(&y).unwrap());
                }
                if n >= 1 {
                    let deeper = (1..q as u32)
                        .map(|c| {
                            if n == 1 {
                                LaurentElem::monomial(c, 0)
                            } else {
                                LaurentElem::new(0, [vec![1], vec![0; n - 2], vec![c]].concat())
                            }
                        })
                        .any(|u| !chi.eval(&u).unwrap().is_one());
                    assert!(deeper, "q={q} conductor {n} not attained");
                }
            }
        }
    }
}

#[test]
fn enumeration_counts_and_distinctness() {
    for (q, m) in [(2u64, 3usize), (3, 2), (4, 2), (5, 1)] {
        let f = field(q);
        let all = MulChar::enumerate(&f, m, &CycScalar::one(f.cyc())).unwrap();
        let expect = if m == 0 {
            1
        } else {
            (q as usize - 1) * (q as usize).pow(m as u32 - 1)
        };
        assert_eq!(all.len(), expect);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!(a != b);
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = field(5);
    let chi = MulChar::random_unitary(&f, 2, &mut rng).unwrap();
    assert_eq!(MulChar::from_json(&f, &chi.to_json()).unwrap(), chi);
}

#[test]
fn base_change_restricts_to_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for q in [3u64, 5] {
        let f = field(q);
        for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
            let e = QuadEtale::new(&f, kind).unwrap();
            for _ in 0..6 {
                let chi = MulChar::random_unitary(&f, 2, &mut rng).unwrap();
                let chi_e = base_change(&chi, &e).unwrap();
                assert_eq!(restrict_to_f(&chi_e, &e).unwrap(), chi.square().reduced());
                let y = match e.ext() {
                    None => EElem::Split(
                        f.random_nonzero(&mut rng, -2, 2, 3),
                        f.random_nonzero(&mut rng, -2, 2, 3),
                    ),
                    Some(ext) => EElem::Field(ext.random_nonzero(&mut rng, -2, 2, 3)),
                };
                assert_eq!(
                    chi_e.eval(&y).unwrap(),
                    chi.eval(&e.norm(&y).unwrap()).unwrap()
                );
                assert_eq!(
                    chi_e.conj(&e).unwrap().eval(&y).unwrap(),
                    chi_e.eval(&y).unwrap()
                );
            }
        }
    }
}

#[test]
fn hilbert90_pullback_on_norm_one_and_on_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = field(3);
    let e = QuadEtale::new(&f, QuadKind::Unramified).unwrap();
    let ext = e.ext().unwrap();
    let m = ext.cyc().order() as i64;
    for _ in 0..6 {
        let chi = MulChar::random_unitary(ext, 1, &mut rng).unwrap();
        let nu1 = E1Char::restrict(&EChar::Field(chi), &e).unwrap();
        let nu = hilbert90_extend(&nu1, &e).unwrap();
        for z in norm_one_classes(&e, 1).unwrap() {
            let expect = CycScalar::root_of_unity(
                ext.cyc(),
                (-2 * nu1.exponent(&e, &z).unwrap()).rem_euclid(m),
            );
            assert_eq!(nu.eval(&EElem::Field(z)).unwrap(), expect);
        }
        for a in 1..3u32 {
            for v in -2..=2 {
                let x = e.embed(&LaurentElem::monomial(a, v));
                assert!(nu.eval(&x).unwrap().is_one());
            }
        }
    }
}

#[test]
fn hilbert90_order_two_on_nine_elements() {
    let f = field(3);
    let e = QuadEtale::new(&f, QuadKind::Unramified).unwrap();
    let ext = e.ext().unwrap();
    let half = ext.cyc().order() as i64 / 2;
    let quarter = ext.cyc().order() as i64 / 4;
    let order_four = MulChar::from_fn(ext, 1, CycScalar::one(ext.cyc()), |u| {
        Ok(ext.res().log(u.leading().unwrap())? as i64 * quarter)
    })
    .unwrap();
    let nu1 = E1Char::restrict(&EChar::Field(order_four), &e).unwrap();
    let classes = norm_one_classes(&e, 1).unwrap();
    assert_eq!(classes.len(), 4);
    assert!(classes.iter().any(|z| nu1.exponent(&e, z).unwrap() == half));
    let nu = hilbert90_extend(&nu1, &e).unwrap();
    for z in classes {
        assert!(nu.eval(&EElem::Field(z)).unwrap().is_one());
    }
    assert!(!nu.is_unramified());
}

#[test]
fn split_hilbert90_is_inverse_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let f = field(5);
    let e = QuadEtale::new(&f, QuadKind::Split).unwrap();
    let nu0 = MulChar::random_unitary(&f, 2, &mut rng).unwrap();
    match hilbert90_extend(&E1Char::Split(nu0.clone()), &e).unwrap() {
        EChar::Split(a, b) => {
            assert_eq!(a, nu0.inv());
            assert_eq!(b, nu0);
        }
        EChar::Field(_) => panic!("split algebra"),
    }
}
