use lsfactor::characters::{AddChar, MulChar};
use lsfactor::localfield::{LocalField, QuadEtale, QuadKind};
use lsfactor::lscoeff::{random_datum, Block, GroupTag, InducingDatum};
use lsfactor::satake::{
    asai_closed_form, asai_matrix, det_one_minus, unramified_identity_check, unramified_l, Rep,
    SatakeClass,
};
use lsfactor::scalar::{CycScalar, Poly, RatFunc};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(q: u64) -> LocalField {
    LocalField::for_levels(q, 1, &QuadEtale::required_orders(q, 1), 24).unwrap()
}

fn random_class(f: &LocalField, n: usize, rng: &mut ChaCha8Rng) -> Vec<CycScalar> {
    let m = f.cyc().order() as i64;
    (0..n)
        .map(|_| {
            let u = CycScalar::root_of_unity(f.cyc(), rng.gen_range(0..m));
            &u * &CycScalar::sqrt_p_pow(f.cyc(), rng.gen_range(-2..=2))
        })
        .collect()
}

fn inverse_power(a: &CycScalar, k: usize) -> RatFunc {
    RatFunc::new(Poly::one(a.ctx()), Poly::one_minus(a, 1).pow(k)).unwrap()
}

#[test]
fn small_examples() {
    let f = field(3);
    let c = f.cyc();
    let one = CycScalar::one(c);
    let z3 = unramified_l(&SatakeClass::new(vec![one.clone(), one.clone()]), Rep::Sym2).unwrap();
    assert_eq!(z3, inverse_power(&one, 3));
    let w = CycScalar::root_of_unity(c, 5);
    let e = unramified_l(
        &SatakeClass::new(vec![w.clone(), w.inv().unwrap()]),
        Rep::Ext2,
    )
    .unwrap();
    assert_eq!(e, inverse_power(&one, 1));
}

#[test]
fn asai_determinant_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let f = field(3);
    for n in 1..=4 {
        for _ in 0..3 {
            let cls = SatakeClass::pair(
                random_class(&f, n, &mut rng),
                random_class(&f, n, &mut rng),
                true,
            );
            assert_eq!(
                det_one_minus(&asai_matrix(&cls).unwrap()).unwrap(),
                asai_closed_form(&cls).unwrap()
            );
        }
    }
}

#[test]
fn asai_without_theta_is_tensor_and_square_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let f = field(5);
    for n in 1..=3 {
        let x = random_class(&f, n, &mut rng);
        let y = random_class(&f, n, &mut rng);
        let plain = SatakeClass::pair(x.clone(), y, false);
        assert_eq!(
            unramified_l(&plain, Rep::Asai).unwrap(),
            unramified_l(&plain, Rep::Tensor).unwrap()
        );
        let sq = SatakeClass::pair(x.clone(), x.clone(), false);
        let single = SatakeClass::new(x);
        let parts = unramified_l(&single, Rep::Sym2)
            .unwrap()
            .mul(&unramified_l(&single, Rep::Ext2).unwrap());
        assert_eq!(unramified_l(&sq, Rep::Tensor).unwrap(), parts);
        assert_eq!(Rep::Sym2.dim(n) + Rep::Ext2.dim(n), Rep::Tensor.dim(n));
    }
}

#[test]
fn identity_examples() {
    let f = field(3);
    let psi = AddChar::standard(&f);
    let w = CycScalar::root_of_unity(f.cyc(), 1);
    let d = InducingDatum::new(vec![Block::of_f(MulChar::unramified(&f, w.clone()))]);
    assert!(unramified_identity_check(&GroupTag::SoOdd(1), &d, &psi).unwrap());
    let d2 = InducingDatum::new(vec![
        Block::of_f(MulChar::unramified(&f, w)),
        Block::of_f(MulChar::trivial(&f)),
    ]);
    assert!(unramified_identity_check(&GroupTag::SoEven(2), &d2, &psi).unwrap());
    let triv = InducingDatum::new(vec![
        Block::of_f(MulChar::trivial(&f)),
        Block::of_f(MulChar::trivial(&f)),
    ]);
    assert!(unramified_identity_check(&GroupTag::Sp(2), &triv, &psi).unwrap());
}

#[test]
fn identity_rejects_ramified_data() {
    let f = field(3);
    let chi = MulChar::enumerate(&f, 1, &CycScalar::one(f.cyc()))
        .unwrap()
        .into_iter()
        .find(|c| !c.is_unramified())
        .unwrap();
    let d = InducingDatum::new(vec![Block::of_f(chi)]);
    assert!(unramified_identity_check(&GroupTag::Sp(1), &d, &AddChar::standard(&f)).is_err());
}

fn unitary_groups(f: &LocalField, n: usize) -> Vec<GroupTag> {
    [QuadKind::Split, QuadKind::Unramified]
        .into_iter()
        .flat_map(|k| {
            let e = QuadEtale::new(f, k).unwrap();
            [GroupTag::UEven(n, e.clone()), GroupTag::UOdd(n, e)]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unramified_identity_for_random_classes(seed in 0u64..10_000, qi in 0usize..2, n in 1usize..=3) {
        let q = [2u64, 3][qi];
        let f = field(q);
        let psi = AddChar::standard(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut groups = vec![GroupTag::Gl(n, 2), GroupTag::SoOdd(n), GroupTag::Sp(n), GroupTag::SoEven(n)];
        groups.extend(unitary_groups(&f, n));
        for g in groups {
            let d = random_datum(&g, &f, 0, 2, 1, &mut rng).unwrap();
            prop_assert!(unramified_identity_check(&g, &d, &psi).unwrap(), "{} {}", g.name(), d.to_json());
        }
    }
}
