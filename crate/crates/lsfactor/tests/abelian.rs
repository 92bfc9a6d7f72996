use lsfactor::abelian::{
    base_change_identity_check, dual, epsilon_factor, gamma_inverse, gauss_gamma, l_factor,
    lambda_factor, lambda_from_base_change, zeta_oracle_gamma,
};
use lsfactor::characters::{AddChar, MulChar};
use lsfactor::localfield::{LocalField, QuadEtale, QuadKind};
use lsfactor::scalar::{CycScalar, Poly, RatFunc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(q: u64, m: usize) -> LocalField {
    LocalField::for_levels(q, m, &QuadEtale::required_orders(q, m), 24).unwrap()
}

#[test]
fn trivial_character_gamma_closed_form() {
    let f = field(3, 1);
    let c = f.cyc();
    let g = gauss_gamma(&MulChar::trivial(&f), &AddChar::standard(&f)).unwrap();
    let q = CycScalar::from_int(c, 3);
    let num = Poly::new(c, vec![CycScalar::zero(c), q.clone(), -&q]);
    let den = Poly::new(c, vec![CycScalar::from_int(c, -1), q.clone()]);
    assert_eq!(g, RatFunc::new(num, den).unwrap());
}

#[test]
fn gamma_agrees_with_zeta_oracle_and_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u64, 3, 4, 5] {
        let f = field(q, 3);
        for _ in 0..12 {
            let m = rand::Rng::gen_range(&mut rng, 0..=3usize);
            let chi = MulChar::random_unitary(&f, m, &mut rng).unwrap();
            let l = rand::Rng::gen_range(&mut rng, -2..=2i64);
            let psi = AddChar::with_level(&f, l);
            let g = gauss_gamma(&chi, &psi).unwrap();
            assert_eq!(
                g,
                zeta_oracle_gamma(&chi, &psi).unwrap(),
                "q={q} m={m} l={l}"
            );
            assert!(
                g.mul(&gamma_inverse(&chi, &psi).unwrap()).is_one(),
                "q={q} m={m} l={l}"
            );
            let back = dual(&gauss_gamma(&chi.inv(), &psi.conj()).unwrap(), &f);
            assert!(g.mul(&back).is_one(), "q={q} m={m} l={l}");
            let eps = epsilon_factor(&chi, &psi).unwrap();
            assert_eq!(eps.exp, chi.conductor() as i64 - l);
            assert!(
                (&eps.coeff * &eps.coeff.conj())
                    == CycScalar::sqrt_p_pow(
                        f.cyc(),
                        2 * f.f() as i64 * (chi.conductor() as i64 - l)
                    )
            );
            assert!(l_factor(&chi).is_one() != chi.is_unramified());
        }
    }
}

#[test]
fn lambda_is_unitary_and_satisfies_base_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3u64, 5] {
        let f = field(q, 2);
        for kind in [QuadKind::Split, QuadKind::Unramified, QuadKind::Ramified] {
            let e = QuadEtale::new(&f, kind).unwrap();
            for l in -1..=1 {
                let psi = AddChar::with_level(&f, l);
                let lam = lambda_factor(&e, &psi).unwrap();
                assert!((&lam * &lam.conj()).is_one());
                for _ in 0..4 {
                    let m = rand::Rng::gen_range(&mut rng, 0..=2usize);
                    let chi = MulChar::random_unitary(&f, m, &mut rng).unwrap();
                    assert!(
                        base_change_identity_check(&chi, &e, &psi).unwrap(),
                        "q={q} {kind:?} l={l} m={m}"
                    );
                    assert_eq!(lambda_from_base_change(&chi, &e, &psi).unwrap(), lam);
                }
            }
        }
    }
}
