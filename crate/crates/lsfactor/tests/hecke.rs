use lsfactor::abelian::dual;
use lsfactor::hecke::{
    crude_fe_check, functional_equation_sides, CrudeCase, FPoly, HeckeChar, PolyRing, UnitGroup,
};
use lsfactor::scalar::{CycScalar, Poly, RatFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn primitive_characters(q: u64, max_deg: usize) -> Vec<HeckeChar> {
    let ring = PolyRing::new(q).unwrap();
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for m in ring.monic_of_degree(d) {
            out.extend(
                HeckeChar::enumerate_primitive(&ring, &m)
                    .unwrap()
                    .into_iter()
                    .filter(|c| !c.is_trivial()),
            );
        }
    }
    out
}

#[test]
fn parse_and_format_round_trip() {
    let ring = PolyRing::new(3).unwrap();
    let p = ring.parse("t^3 + 2t + 1").unwrap();
    assert_eq!(p, vec![1, 2, 0, 1]);
    assert_eq!(ring.parse(&ring.format(&p)).unwrap(), p);
    assert_eq!(ring.parse("t^2 - t").unwrap(), vec![0, 2, 1]);
    assert!(ring.parse("t^2 + 3").is_err());
    let f = ring
        .factor(&ring.mul(&ring.pow(&[1, 1], 2), &[0, 1]))
        .unwrap();
    assert_eq!(f, vec![(vec![0, 1], 1), (vec![1, 1], 2)]);
}

#[test]
fn character_counts_and_conductors() {
    for (q, max_deg) in [(2u64, 4usize), (3, 3)] {
        let ring = PolyRing::new(q).unwrap();
        for d in 1..=max_deg {
            for m in ring.monic_of_degree(d) {
                let all = HeckeChar::enumerate(&ring, &m).unwrap();
                assert_eq!(all.len(), UnitGroup::new(&ring, &m).unwrap().order());
                let mut by_conductor = 0;
                for c in &all {
                    let f = c.conductor().unwrap();
                    assert!(ring.rem(&m, &f).unwrap().is_empty());
                    let prim = c.primitive().unwrap();
                    assert!(prim.is_primitive().unwrap());
                    if f == m {
                        by_conductor += 1;
                    }
                }
                assert_eq!(
                    by_conductor,
                    HeckeChar::enumerate_primitive(&ring, &m).unwrap().len()
                );
            }
        }
    }
}

#[test]
fn dirichlet_sums_basic_values() {
    for q in [2u64, 3] {
        let ring = PolyRing::new(q).unwrap();
        let triv = HeckeChar::enumerate(&ring, &[1]).unwrap().pop().unwrap();
        let cyc = triv.context(&[]).unwrap();
        for d in 0..=4 {
            assert_eq!(
                triv.dirichlet_sum(d, &cyc),
                CycScalar::from_int(&cyc, (q as i64).pow(d as u32))
            );
        }
        for chi in primitive_characters(q, 2) {
            let cyc = chi.context(&[]).unwrap();
            assert!(chi.dirichlet_sum(0, &cyc).is_one());
            let deg = chi.modulus().len() - 1;
            for d in deg..deg + 3 {
                assert!(chi.dirichlet_sum(d, &cyc).is_zero());
            }
        }
    }
}

#[test]
fn order_four_character_mod_t_cubed() {
    let ring = PolyRing::new(2).unwrap();
    let m = ring.parse("t^3").unwrap();
    let chars: Vec<HeckeChar> = HeckeChar::enumerate(&ring, &m)
        .unwrap()
        .into_iter()
        .filter(|c| c.value_order() == 4 && c.pow(2) != HeckeChar::trivial(c.group()))
        .collect();
    assert_eq!(chars.len(), 2);
    for chi in chars {
        let cyc = chi.context(&[]).unwrap();
        let a = chi.value(&[1, 1], &cyc).unwrap();
        assert_eq!(chi.dirichlet_sum(1, &cyc), a);
        let adelic = chi.localize(&cyc, &[]).unwrap();
        let completed = adelic.completed_l().unwrap();
        let one = CycScalar::one(&cyc);
        assert_eq!(
            completed,
            RatFunc::from_poly(Poly::new(&cyc, vec![one.clone(), &one + &a]))
        );
        let eps = adelic.epsilon().unwrap();
        assert_eq!(eps.exp, 1);
    }
}

#[test]
fn even_cubic_character_mod_t_squared() {
    let ring = PolyRing::new(3).unwrap();
    let m = ring.parse("t^2").unwrap();
    let chi = HeckeChar::enumerate_primitive(&ring, &m)
        .unwrap()
        .into_iter()
        .find(|c| c.is_even())
        .unwrap();
    let cyc = chi.context(&[]).unwrap();
    let d1 = (1..3u32).fold(CycScalar::zero(&cyc), |acc, c| {
        &acc + &chi.value(&[c, 1], &cyc).unwrap()
    });
    assert_eq!(chi.dirichlet_sum(1, &cyc), d1);
    assert!(chi
        .localize(&cyc, &[])
        .unwrap()
        .completed_l()
        .unwrap()
        .is_one());
}

#[test]
fn product_formula_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for q in [2u64, 3, 4] {
        let ring = PolyRing::new(q).unwrap();
        for chi in primitive_characters(q, 2).into_iter().take(12) {
            let cyc = chi.context(&[]).unwrap();
            let adelic = chi.localize(&cyc, &[]).unwrap();
            for _ in 0..6 {
                let len = rng.gen_range(1..6);
                let mut g: FPoly = (0..len).map(|_| rng.gen_range(0..q as u32)).collect();
                g.push(rng.gen_range(1..q as u32));
                if rng.gen_bool(0.5) {
                    g = ring.mul(&g, chi.modulus());
                }
                assert_eq!(
                    adelic.product_formula(&g).unwrap(),
                    0,
                    "{chi:?} at {}",
                    ring.format(&g)
                );
            }
        }
    }
}

#[test]
fn functional_equation_for_small_moduli() {
    for (q, deg) in [(2u64, 3usize), (3, 2), (4, 1)] {
        for chi in primitive_characters(q, deg) {
            let (lhs, rhs) = functional_equation_sides(&chi).unwrap();
            assert_eq!(lhs, rhs, "{chi:?}");
            assert!(lhs.is_polynomial());
            let total = chi.modulus().len() - 1 + usize::from(!chi.is_even());
            assert_eq!(lhs.num().degree(), Some(total - 2), "{chi:?}");
        }
    }
}

#[test]
fn epsilon_pairing_and_psi_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for q in [2u64, 3] {
        let ring = PolyRing::new(q).unwrap();
        for chi in primitive_characters(q, 2) {
            let cyc = chi.context(&[]).unwrap();
            let a = chi.localize(&cyc, &[]).unwrap();
            let b = chi.conj().localize(&cyc, &[]).unwrap();
            let pair = a.epsilon().unwrap().to_ratfunc().mul(&dual(
                &b.epsilon().unwrap().to_ratfunc(),
                a.infinity.completion.field(),
            ));
            assert!(pair.is_one(), "{chi:?}");
            let mut s: FPoly = (0..rng.gen_range(1..4))
                .map(|_| rng.gen_range(0..q as u32))
                .collect();
            s.push(rng.gen_range(1..q as u32));
            assert_eq!(
                a.epsilon_scaled(&s).unwrap(),
                a.epsilon().unwrap(),
                "{chi:?} scaled by {}",
                ring.format(&s)
            );
        }
    }
}

#[test]
fn crude_functional_equations_for_rank_one_groups() {
    let ring2 = PolyRing::new(2).unwrap();
    let mut count = [0usize; 3];
    for chi in primitive_characters(2, 3)
        .into_iter()
        .chain(primitive_characters(3, 2))
    {
        let ring = chi.ring().clone();
        let extra: Vec<FPoly> = ring
            .monic_of_degree(2)
            .into_iter()
            .filter(|p| ring.is_irreducible(p) && ring.coprime(p, chi.modulus()))
            .take(1)
            .collect();
        assert!(
            crude_fe_check(CrudeCase::Sl2, &chi, None, &extra).unwrap(),
            "{chi:?}"
        );
        count[0] += 1;
        if !chi.pow(2).is_trivial() {
            assert!(
                crude_fe_check(CrudeCase::So3, &chi, None, &[]).unwrap(),
                "{chi:?}"
            );
            count[1] += 1;
        }
        let others = HeckeChar::enumerate(&ring, chi.modulus()).unwrap();
        let mu = &others[others.len() / 2];
        if !chi.mul(mu).unwrap().is_trivial() {
            assert!(
                crude_fe_check(CrudeCase::Gl11, &chi, Some(mu), &extra).unwrap(),
                "{chi:?} {mu:?}"
            );
            count[2] += 1;
        }
    }
    assert!(count.iter().all(|&c| c >= 10), "{count:?}");
    let t3 = ring2.parse("t^3").unwrap();
    let even = HeckeChar::enumerate_primitive(&ring2, &t3)
        .unwrap()
        .into_iter()
        .find(|c| c.is_even())
        .unwrap();
    assert!(crude_fe_check(CrudeCase::Sl2, &even, None, &[]).unwrap());
}

#[test]
fn unitary_crude_functional_equations() {
    let mut done = 0;
    for q in [4u64, 9] {
        let ring = PolyRing::new(q).unwrap();
        for e in 1..=2usize {
            let m = ring.pow(&[0, 1], e);
            let chars: Vec<HeckeChar> = HeckeChar::enumerate(&ring, &m)
                .unwrap()
                .into_iter()
                .filter(|c| !c.is_trivial())
                .take(3)
                .collect();
            for chi in chars {
                let extra = vec![vec![1, 1], vec![1, 0, 1]];
                let extra: Vec<FPoly> = extra
                    .into_iter()
                    .filter(|p| PolyRing::new(q.isqrt()).unwrap().is_irreducible(p))
                    .collect();
                for case in [CrudeCase::UEven, CrudeCase::UOdd] {
                    assert!(
                        crude_fe_check(case, &chi, None, &extra).unwrap(),
                        "{} {chi:?}",
                        case.name()
                    );
                }
                done += 1;
            }
        }
    }
    assert!(done >= 10);
}
