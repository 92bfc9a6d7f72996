use lsfactor::characters::{hilbert90_extend, AddChar, EChar, MulChar};
use lsfactor::localfield::{LocalField, QuadEtale, QuadKind};
use lsfactor::lscoeff::{
    classical_coefficient, coefficient_factors, cross_factors, eval_factors, gamma_pair,
    gcd_numerator, local_factors, local_fe_check, min_pole_modulus, psi_dependence, random_datum,
    rank_one_coefficient, rankin_selberg_gamma, theorem_prime_check, twist_check, Block, GroupTag,
    InducingDatum,
};
use lsfactor::scalar::{CycScalar, Poly, RatFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(q: u64, m: usize) -> LocalField {
    LocalField::for_levels(q, m, &QuadEtale::required_orders(q, m), 24).unwrap()
}

fn groups(f: &LocalField, n: usize) -> Vec<GroupTag> {
    let mut out = vec![
        GroupTag::Gl(n, 1),
        GroupTag::SoOdd(n),
        GroupTag::Sp(n),
        GroupTag::SoEven(n),
    ];
    for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
        if let Ok(e) = QuadEtale::new(f, kind) {
            out.push(GroupTag::UEven(n, e.clone()));
            out.push(GroupTag::UOdd(n, e));
        }
    }
    out
}

#[test]
fn rank_one_closed_forms_match_general_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for q in [3u64, 5] {
        let f = field(q, 2);
        for g in groups(&f, 1) {
            for _ in 0..4 {
                let d = random_datum(&g, &f, 2, 1, 1, &mut rng).unwrap();
                let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
                assert_eq!(
                    rank_one_coefficient(&g, &d, &psi).unwrap(),
                    classical_coefficient(&g, &d, &psi).unwrap(),
                    "{}",
                    g.name()
                );
            }
        }
    }
}

#[test]
fn multiplicativity_for_degree_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let f = field(3, 2);
    for g in groups(&f, 3)
        .into_iter()
        .filter(|g| g.gl_degrees().is_none())
    {
        for _ in 0..3 {
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            let d1 = random_datum(&g.with_degree(1), &f, 2, 1, 1, &mut rng).unwrap();
            let mut d2 = random_datum(&g.with_degree(2), &f, 2, 2, 1, &mut rng).unwrap();
            d2.nu1 = d1.nu1.clone();
            let whole = d1.concat(&d2);
            let lhs = classical_coefficient(&g, &whole, &psi).unwrap();
            let cross = eval_factors(&g, &cross_factors(&g, &f, &d1, &d2).unwrap(), &psi).unwrap();
            let rhs = classical_coefficient(&g.with_degree(1), &d1, &psi)
                .unwrap()
                .mul(&classical_coefficient(&g.with_degree(2), &d2, &psi).unwrap())
                .mul(&cross);
            assert_eq!(lhs, rhs, "{}", g.name());
        }
    }
}

#[test]
fn regrouping_into_two_gamma_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for q in [3u64, 5] {
        let f = field(q, 2);
        for n in 1..=3 {
            for g in groups(&f, n) {
                let d = random_datum(&g, &f, 2, 2, 2, &mut rng).unwrap();
                let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
                assert!(
                    theorem_prime_check(&g, &d, &psi).unwrap(),
                    "{} {:?}",
                    g.name(),
                    d.to_json()
                );
            }
        }
    }
}

#[test]
fn split_unitary_groups_reduce_to_general_linear_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let f = field(5, 2);
    let e = QuadEtale::new(&f, QuadKind::Split).unwrap();
    for n in 1..=3 {
        for _ in 0..3 {
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            let ue = GroupTag::UEven(n, e.clone());
            let d = random_datum(&ue, &f, 2, 2, 1, &mut rng).unwrap();
            let (p1, p2) = components(&d.blocks);
            assert_eq!(
                classical_coefficient(&ue, &d, &psi).unwrap(),
                rankin_selberg_gamma(&p1, &p2, &psi).unwrap()
            );

            let uo = GroupTag::UOdd(n, e.clone());
            let d = random_datum(&uo, &f, 2, 2, 1, &mut rng).unwrap();
            let (p1, p2) = components(&d.blocks);
            let (nu_a, nu_b) = match hilbert90_extend(d.nu1.as_ref().unwrap(), &e).unwrap() {
                EChar::Split(a, b) => (a, b),
                EChar::Field(_) => unreachable!(),
            };
            let expect = rankin_selberg_gamma(&p1, &[Block::of_f(nu_a)], &psi)
                .unwrap()
                .mul(&rankin_selberg_gamma(&p2, &[Block::of_f(nu_b)], &psi).unwrap())
                .mul(&rankin_selberg_gamma(&p1, &p2, &psi).unwrap().subst_double());
            assert_eq!(classical_coefficient(&uo, &d, &psi).unwrap(), expect);
        }
    }
}

fn components(blocks: &[Block]) -> (Vec<Block>, Vec<Block>) {
    blocks
        .iter()
        .map(|b| match &b.chi {
            EChar::Split(x, y) => (
                Block {
                    chi: EChar::Field(x.clone()),
                    ..b.clone()
                },
                Block {
                    chi: EChar::Field(y.clone()),
                    ..b.clone()
                },
            ),
            EChar::Field(_) => unreachable!(),
        })
        .unzip()
}

#[test]
fn local_functional_equation_twist_law_and_psi_dependence() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let f = field(3, 2);
    for n in 1..=3 {
        for g in groups(&f, n) {
            for _ in 0..2 {
                let d = random_datum(&g, &f, 2, 2, 2, &mut rng).unwrap();
                let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
                assert!(local_fe_check(&g, &d, &psi).unwrap(), "{}", g.name());
                assert!(
                    twist_check(&g, &d, &psi, 2 * rng.gen_range(-2..=2)).unwrap(),
                    "{}",
                    g.name()
                );
                let a = f.random_nonzero(&mut rng, -1, 1, 2);
                let (got, want) = psi_dependence(&g, &d, &psi, &a).unwrap();
                assert_eq!(got, want, "{}", g.name());
            }
        }
    }
}

#[test]
fn half_integral_twist_law_for_standard_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let f = field(5, 1);
    for g in [GroupTag::Gl(2, 1), GroupTag::Sp(1)] {
        let d = random_datum(&g, &f, 1, 1, 0, &mut rng).unwrap();
        let psi = AddChar::standard(&f);
        assert!(twist_check(&g, &d, &psi, 1).unwrap());
        assert!(twist_check(&g, &d, &psi, -3).unwrap());
    }
}

#[test]
fn tempered_factors_are_holomorphic_with_monomial_epsilon() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let f = field(3, 2);
    for n in 1..=3 {
        for g in groups(&f, n) {
            let d = random_datum(&g, &f, 2, 2, 0, &mut rng).unwrap();
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            for lf in local_factors(&g, &d, &psi).unwrap() {
                assert!(min_pole_modulus(&lf.l) > 1.0 - 1e-6, "{}", g.name());
            }
        }
    }
}

#[test]
fn untwisted_factors_agree_with_gamma_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let f = field(5, 1);
    for g in [GroupTag::Sp(2), GroupTag::SoOdd(2)] {
        let d = random_datum(&g, &f, 1, 1, 0, &mut rng).unwrap();
        let psi = AddChar::standard(&f);
        let lfs = local_factors(&g, &d, &psi).unwrap();
        let gammas = gamma_pair(&g, &d, &psi).unwrap();
        let expect = lfs[0]
            .epsilon
            .to_ratfunc()
            .mul(&lfs[0].l_dual)
            .div(&lfs[0].l)
            .unwrap();
        assert_eq!(expect, gammas.gamma1);
    }
}

#[test]
fn segment_pair_l_function_has_min_inverse_factors() {
    let f = field(5, 1);
    let psi = AddChar::standard(&f);
    let c = f.cyc();
    for a in 1..=3usize {
        for b in 1..=3usize {
            let chi = MulChar::unramified(&f, CycScalar::root_of_unity(c, 1));
            let mu = MulChar::unramified(&f, CycScalar::root_of_unity(c, 3));
            let d = InducingDatum::gl(
                vec![Block::segment(EChar::Field(chi.clone()), a)],
                vec![Block::segment(EChar::Field(mu.clone()), b)],
            );
            let g = GroupTag::Gl(a, b);
            let lf = &local_factors(&g, &d, &psi).unwrap()[0];
            let pieces: Vec<RatFunc> = coefficient_factors(&g, &f, &d)
                .unwrap()
                .iter()
                .map(|x| eval_factors(&g, std::slice::from_ref(x), &psi).unwrap())
                .collect();
            let oracle = gcd_numerator(&pieces).unwrap();
            assert_eq!(lf.l.inv().unwrap(), RatFunc::from_poly(oracle));
            let wm = chi.w() * mu.w();
            let mut closed = Poly::one(c);
            for k in 1..=a.min(b) as i64 {
                let e2 = (a + b) as i64 - 2 * k;
                closed = &closed * &Poly::one_minus(&(&wm * &CycScalar::sqrt_p_pow(c, -e2)), 1);
            }
            assert_eq!(
                lf.l.inv().unwrap(),
                RatFunc::from_poly(closed),
                "a={a} b={b}"
            );
        }
    }
}

#[test]
fn coefficient_rejects_wrong_degree() {
    let f = field(3, 1);
    let psi = AddChar::standard(&f);
    let d = InducingDatum::new(vec![Block::of_f(MulChar::trivial(&f))]);
    assert!(classical_coefficient(&GroupTag::Sp(2), &d, &psi).is_err());
}
