//! Randomized identity suites over the whole library, each deterministic in its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian::{
    base_change_identity_check, dual, epsilon_factor, gamma_inverse, gauss_gamma, l_factor,
    lambda_factor, lambda_from_base_change, oracle_test_functions, zeta_oracle_gamma,
    zeta_quotient,
};
use crate::characters::{hilbert90_extend, AddChar, EChar, MulChar};
use crate::hecke::{
    crude_fe_check, functional_equation_sides, CrudeCase, FPoly, HeckeChar, PolyRing,
};
use crate::localfield::{LaurentElem, LocalField, QuadEtale, QuadKind, StepFunction};
use crate::lscoeff::{
    classical_coefficient, coefficient_factors, cross_factors, eval_factors, gcd_numerator,
    local_factors, local_fe_check, min_pole_modulus, psi_dependence, random_datum,
    rank_one_coefficient, rankin_selberg_gamma, theorem_prime_check, twist_check, Block, GroupTag,
    InducingDatum,
};
use crate::satake::{
    asai_closed_form, asai_matrix, det_one_minus, unramified_identity_check, SatakeClass,
};
use crate::scalar::{CycScalar, Poly, RatFunc};
use crate::{Error, Result};

/// Outcome of one suite: the number of cases run and a description of each failure.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }
    /// Records one case; an error counts as a failure.
    fn record(&mut self, label: impl FnOnce() -> String, outcome: Result<bool>) {
        self.cases += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(label()),
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }
    pub fn merge(name: impl Into<String>, parts: Vec<SuiteReport>) -> Self {
        let mut out = SuiteReport::new(name);
        for p in parts {
            out.cases += p.cases;
            out.failures
                .extend(p.failures.into_iter().map(|f| format!("{}: {f}", p.name)));
        }
        out
    }
    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "cases": self.cases, "failed": self.failures.len(), "failures": self.failures, "pass": self.passed() })
    }
}

/// A field admitting characters of conductor `≤ m` of `F` and of its quadratic algebras.
pub fn test_field(q: u64, m: usize) -> Result<LocalField> {
    if crate::scalar::prime_power(q).is_none() {
        return Err(Error::Invalid(format!("{q} is not a prime power")));
    }
    LocalField::for_levels(q, m, &QuadEtale::required_orders(q, m), 24)
}

/// `GL`, `SO_odd`, `Sp`, `SO_even` and the unitary groups of every quadratic algebra of `f`.
pub fn group_variants(f: &LocalField, n: usize) -> Vec<GroupTag> {
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

fn variant_name(g: &GroupTag) -> String {
    match g {
        GroupTag::UEven(_, e) | GroupTag::UOdd(_, e) => {
            format!("{}[{}]", g.name(), e.kind().name())
        }
        _ => g.name().to_string(),
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

/// `χ(a)(√q Z)^{v(a)}`.
fn scaling(chi: &MulChar, a: &LaurentElem) -> Result<RatFunc> {
    let f = chi.field();
    let v = a.val().unwrap_or(0);
    let c = &chi.eval(a)? * &CycScalar::sqrt_p_pow(f.cyc(), f.f() as i64 * v);
    Ok(RatFunc::monomial(c, v))
}

/// Fourier reflection, the local functional equation, scaling and unramified laws for γ and ε,
/// and agreement with the ζ-integral oracle, on random `(χ, ψ)` over `F_q((t))`.
pub fn abelian_suite(q: u64, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("abelian q={q}"));
    for i in 0..cases {
        let m = rng.gen_range(0..=3usize);
        let chi = MulChar::random_unitary(&f, m, &mut rng)?;
        let l = rng.gen_range(-2..=2i64);
        let psi = AddChar::with_level(&f, l);
        let a = f.random_nonzero(&mut rng, -2, 2, 3);
        let b = f.random_nonzero(&mut rng, -2, 2, 3);
        let step = random_step(&f, &mut rng);
        let label = || format!("case {i}: m={m} level={l}");
        rep.record(label, abelian_case(&chi, &psi, &a, &b, &step));
    }
    Ok(rep)
}

fn abelian_case(
    chi: &MulChar,
    psi: &AddChar,
    a: &LaurentElem,
    b: &LaurentElem,
    step: &StepFunction,
) -> Result<bool> {
    let f = chi.field();
    let pa = psi.twist(a)?;
    let pb = psi.twist(b)?;
    let c = f.neg(&f.mul_trunc(a, &f.inv_mod(b, 12)?, 12));
    let vc = a.val().unwrap_or(0) - b.val().unwrap_or(0);
    let half_abs = CycScalar::sqrt_p_pow(f.cyc(), -(f.f() as i64) * vc);
    let fourier = step
        .fourier(f, &pb)
        .fourier(f, &pa)
        .equals(f, &step.dilate(f, &c)?.scale(&half_abs));

    let g = gauss_gamma(chi, psi)?;
    let local_fe = g
        .mul(&dual(&gauss_gamma(&chi.inv(), &psi.conj())?, f))
        .is_one();
    let scale_gamma = gauss_gamma(chi, &pa)? == g.mul(&scaling(chi, a)?);
    let eps = epsilon_factor(chi, psi)?.to_ratfunc();
    let eps_pair = eps
        .mul(&dual(
            &epsilon_factor(&chi.inv(), &psi.conj())?.to_ratfunc(),
            f,
        ))
        .is_one();
    let scale_eps = epsilon_factor(chi, &pa)?.to_ratfunc() == eps.mul(&scaling(chi, a)?);
    let unramified = if chi.is_unramified() {
        let g0 = gauss_gamma(chi, &AddChar::standard(f))?;
        g0.mul(&l_factor(chi)) == dual(&l_factor(&chi.inv()), f)
    } else {
        true
    };
    Ok(fourier && local_fe && scale_gamma && eps_pair && scale_eps && unramified)
}

/// `γ` by Gauss sums against the ζ-integral oracle with two test functions, and against `γ^{-1}`.
pub fn oracle_suite(q: u64, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("oracle q={q}"));
    for i in 0..cases {
        let m = rng.gen_range(0..=3usize);
        let chi = MulChar::random_unitary(&f, m, &mut rng)?;
        let l = rng.gen_range(-2..=2i64);
        let psi = AddChar::with_level(&f, l);
        let outcome = (|| -> Result<bool> {
            let g = gauss_gamma(&chi, &psi)?;
            let (f1, f2) = oracle_test_functions(&chi);
            let z1 = zeta_quotient(&chi, &psi, &f1)?;
            let z2 = zeta_quotient(&chi, &psi, &f2)?;
            Ok(g == zeta_oracle_gamma(&chi, &psi)?
                && g == z1
                && z1 == z2
                && g.mul(&gamma_inverse(&chi, &psi)?).is_one())
        })();
        rep.record(|| format!("case {i}: m={m} level={l}"), outcome);
    }
    Ok(rep)
}

/// `λλ̄ = 1`, the base-change identity for `γ`, and `λ` recovered from it being constant in `χ`.
pub fn lambda_suite(q: u64, kind: QuadKind, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 2)?;
    let e = QuadEtale::new(&f, kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32) ^ kind as u64);
    let mut rep = SuiteReport::new(format!("lambda q={q} {}", kind.name()));
    for i in 0..cases {
        let l = rng.gen_range(-1..=1i64);
        let psi = AddChar::with_level(&f, l);
        let m = rng.gen_range(0..=2usize);
        let chi = MulChar::random_unitary(&f, m, &mut rng)?;
        let outcome = (|| -> Result<bool> {
            let lam = lambda_factor(&e, &psi)?;
            Ok((&lam * &lam.conj()).is_one()
                && base_change_identity_check(&chi, &e, &psi)?
                && lambda_from_base_change(&chi, &e, &psi)? == lam)
        })();
        rep.record(|| format!("case {i}: m={m} level={l}"), outcome);
    }
    Ok(rep)
}

/// Rank-one closed forms, multiplicativity at `n = 3`, the two-factor regrouping and the split
/// unitary reductions.
pub fn coefficient_suite(q: u64, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("coefficients q={q}"));
    for i in 0..cases {
        for g in group_variants(&f, 1) {
            let d = random_datum(&g, &f, 2, 1, 1, &mut rng)?;
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            let outcome = (|| {
                Ok(rank_one_coefficient(&g, &d, &psi)? == classical_coefficient(&g, &d, &psi)?)
            })();
            rep.record(
                || format!("rank one {} case {i}", variant_name(&g)),
                outcome,
            );
        }
        for g in group_variants(&f, 3)
            .into_iter()
            .filter(|g| g.gl_degrees().is_none())
        {
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            let d1 = random_datum(&g.with_degree(1), &f, 2, 1, 1, &mut rng)?;
            let mut d2 = random_datum(&g.with_degree(2), &f, 2, 2, 1, &mut rng)?;
            d2.nu1 = d1.nu1.clone();
            let outcome = (|| -> Result<bool> {
                let whole = classical_coefficient(&g, &d1.concat(&d2), &psi)?;
                let cross = eval_factors(&g, &cross_factors(&g, &f, &d1, &d2)?, &psi)?;
                let parts = classical_coefficient(&g.with_degree(1), &d1, &psi)?
                    .mul(&classical_coefficient(&g.with_degree(2), &d2, &psi)?)
                    .mul(&cross);
                Ok(whole == parts)
            })();
            rep.record(
                || format!("multiplicativity {} case {i}", variant_name(&g)),
                outcome,
            );
        }
        let n = 1 + i % 3;
        for g in group_variants(&f, n) {
            let d = random_datum(&g, &f, 2, 2, 2, &mut rng)?;
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            rep.record(
                || format!("regrouping {} n={n} case {i}", variant_name(&g)),
                theorem_prime_check(&g, &d, &psi),
            );
        }
        {
            let e = QuadEtale::new(&f, QuadKind::Split)?;
            let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
            let ue = GroupTag::UEven(n, e.clone());
            let d = random_datum(&ue, &f, 2, 2, 1, &mut rng)?;
            let outcome = (|| -> Result<bool> {
                let (p1, p2) = split_components(&d.blocks);
                Ok(classical_coefficient(&ue, &d, &psi)? == rankin_selberg_gamma(&p1, &p2, &psi)?)
            })();
            rep.record(|| format!("split U_even n={n} case {i}"), outcome);
            let uo = GroupTag::UOdd(n, e.clone());
            let d = random_datum(&uo, &f, 2, 2, 1, &mut rng)?;
            let outcome = (|| -> Result<bool> {
                let (p1, p2) = split_components(&d.blocks);
                let nu1 = d
                    .nu1
                    .as_ref()
                    .ok_or_else(|| crate::Error::Invariant("U_odd datum without ν".into()))?;
                let (na, nb) = match hilbert90_extend(nu1, &e)? {
                    EChar::Split(a, b) => (a, b),
                    EChar::Field(_) => return Ok(false),
                };
                let expect = rankin_selberg_gamma(&p1, &[Block::of_f(na)], &psi)?
                    .mul(&rankin_selberg_gamma(&p2, &[Block::of_f(nb)], &psi)?)
                    .mul(&rankin_selberg_gamma(&p1, &p2, &psi)?.subst_double());
                Ok(classical_coefficient(&uo, &d, &psi)? == expect)
            })();
            rep.record(|| format!("split U_odd n={n} case {i}"), outcome);
        }
    }
    Ok(rep)
}

fn split_components(blocks: &[Block]) -> (Vec<Block>, Vec<Block>) {
    blocks
        .iter()
        .filter_map(|b| match &b.chi {
            EChar::Split(x, y) => Some((
                Block {
                    chi: EChar::Field(x.clone()),
                    ..b.clone()
                },
                Block {
                    chi: EChar::Field(y.clone()),
                    ..b.clone()
                },
            )),
            EChar::Field(_) => None,
        })
        .unzip()
}

/// The local functional equation, the twist law and ψ-dependence for one group variant,
/// over random inducing data with `n ≤ 3`.
pub fn local_fe_suite(q: u64, variant: usize, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32) ^ ((variant as u64) << 16));
    let name = variant_name(&group_variants(&f, 1)[variant]);
    let mut rep = SuiteReport::new(format!("local FE q={q} {name}"));
    for i in 0..cases {
        let n = 1 + i % 3;
        let g = group_variants(&f, n).swap_remove(variant);
        let d = random_datum(&g, &f, 2, 2, 2, &mut rng)?;
        let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
        let k2 = 2 * rng.gen_range(-2..=2i64);
        let a = f.random_nonzero(&mut rng, -1, 1, 2);
        let outcome = (|| -> Result<bool> {
            let (got, want) = psi_dependence(&g, &d, &psi, &a)?;
            Ok(local_fe_check(&g, &d, &psi)? && twist_check(&g, &d, &psi, k2)? && got == want)
        })();
        rep.record(
            || format!("case {i}: n={n} k2={k2} datum {}", d.to_json()),
            outcome,
        );
    }
    Ok(rep)
}

/// Number of group variants over `F_q((t))`.
pub fn variant_count(q: u64) -> Result<usize> {
    Ok(group_variants(&test_field(q, 1)?, 1).len())
}

/// Unramified identities for random unitary unramified classes, one group variant, `n ≤ 3`.
pub fn unramified_suite(q: u64, variant: usize, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 1)?;
    let psi = AddChar::standard(&f);
    let groups = |n| -> Vec<GroupTag> {
        let mut g = vec![
            GroupTag::Gl(n, 2),
            GroupTag::SoOdd(n),
            GroupTag::Sp(n),
            GroupTag::SoEven(n),
        ];
        for kind in [QuadKind::Split, QuadKind::Unramified] {
            let e = QuadEtale::new(&f, kind).expect("split and unramified algebras exist");
            g.push(GroupTag::UEven(n, e.clone()));
            g.push(GroupTag::UOdd(n, e));
        }
        g
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32) ^ ((variant as u64) << 16));
    let mut rep = SuiteReport::new(format!(
        "unramified q={q} {}",
        variant_name(&groups(1)[variant])
    ));
    for i in 0..cases {
        let n = 1 + i % 3;
        let g = groups(n).swap_remove(variant);
        let d = random_datum(&g, &f, 0, 2, 1, &mut rng)?;
        rep.record(
            || format!("case {i}: n={n} datum {}", d.to_json()),
            unramified_identity_check(&g, &d, &psi),
        );
    }
    Ok(rep)
}

pub const UNRAMIFIED_VARIANTS: usize = 8;

/// The Asai determinant against its closed form for random classes, `n ≤ 4`.
pub fn asai_suite(q: u64, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 1)?;
    let ctx = f.cyc();
    let order = ctx.order() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("asai q={q}"));
    let class = |n: usize, rng: &mut ChaCha8Rng| -> Vec<CycScalar> {
        (0..n)
            .map(|_| {
                &CycScalar::root_of_unity(ctx, rng.gen_range(0..order))
                    * &CycScalar::sqrt_p_pow(ctx, rng.gen_range(-2..=2))
            })
            .collect()
    };
    for i in 0..cases {
        let n = 1 + i % 4;
        let cls = SatakeClass::pair(class(n, &mut rng), class(n, &mut rng), true);
        let outcome = (|| Ok(det_one_minus(&asai_matrix(&cls)?)? == asai_closed_form(&cls)?))();
        rep.record(|| format!("case {i}: n={n}"), outcome);
    }
    Ok(rep)
}

/// Tempered data: every extracted `L` has its poles on or outside the unit circle.
pub fn tempered_suite(q: u64, cases: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("tempered q={q}"));
    for i in 0..cases {
        let n = 1 + i % 3;
        let mut gs = group_variants(&f, n);
        let g = gs.swap_remove(i % gs.len());
        let d = random_datum(&g, &f, 2, 2, 0, &mut rng)?;
        let psi = AddChar::with_level(&f, rng.gen_range(-1..=1));
        let outcome = (|| -> Result<bool> {
            Ok(local_factors(&g, &d, &psi)?
                .iter()
                .all(|lf| min_pole_modulus(&lf.l) > 1.0 - 1e-6))
        })();
        rep.record(|| format!("case {i}: {} n={n}", variant_name(&g)), outcome);
    }
    Ok(rep)
}

/// The global functional equation for every primitive nontrivial character with
/// modulus degree `≤ max_deg` over `F_q`.
pub fn hecke_suite(q: u64, max_deg: usize) -> Result<SuiteReport> {
    let ring = PolyRing::new(q)?;
    let mut rep = SuiteReport::new(format!("hecke q={q} deg≤{max_deg}"));
    for d in 1..=max_deg {
        for m in ring.monic_of_degree(d) {
            for chi in HeckeChar::enumerate_primitive(&ring, &m)? {
                if chi.is_trivial() {
                    continue;
                }
                let outcome =
                    functional_equation_sides(&chi).map(|(l, r)| l == r && l.is_polynomial());
                rep.record(
                    || {
                        format!(
                            "mod {} values {:?}",
                            ring.format(&m),
                            chi.to_json()["values"]
                        )
                    },
                    outcome,
                );
            }
        }
    }
    Ok(rep)
}

/// Primitive nontrivial characters of modulus degree `≤ max_deg`, in enumeration order.
pub fn primitive_characters(q: u64, max_deg: usize) -> Result<Vec<HeckeChar>> {
    let ring = PolyRing::new(q)?;
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for m in ring.monic_of_degree(d) {
            out.extend(
                HeckeChar::enumerate_primitive(&ring, &m)?
                    .into_iter()
                    .filter(|c| !c.is_trivial()),
            );
        }
    }
    Ok(out)
}

fn extra_place(ring: &PolyRing, m: &[u32], deg: usize) -> Vec<FPoly> {
    ring.monic_of_degree(deg)
        .into_iter()
        .filter(|p| ring.is_irreducible(p) && ring.coprime(p, m))
        .take(1)
        .collect()
}

/// The crude functional equation for one rank-one case over characters mod small moduli.
pub fn crude_suite(case: CrudeCase, count: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(format!("crude {}", case.name()));
    match case {
        CrudeCase::UEven | CrudeCase::UOdd => {
            'outer: for q in [4u64, 9] {
                let ring = PolyRing::new(q)?;
                let base = PolyRing::new(if q == 4 { 2 } else { 3 })?;
                for e in 1..=3usize {
                    let m = ring.pow(&[0, 1], e);
                    for chi in HeckeChar::enumerate(&ring, &m)?
                        .into_iter()
                        .filter(|c| !c.is_trivial())
                    {
                        if rep.cases >= count {
                            break 'outer;
                        }
                        let mut extra = extra_place(&base, &[0, 1], 1);
                        extra.extend(extra_place(&base, &[0, 1], 2));
                        rep.record(
                            || format!("{chi:?}"),
                            crude_fe_check(case, &chi, None, &extra),
                        );
                    }
                }
            }
        }
        _ => {
            let mut chars = primitive_characters(2, 3)?;
            chars.extend(primitive_characters(3, 2)?);
            for chi in chars {
                if rep.cases >= count {
                    break;
                }
                let ring = chi.ring().clone();
                let extra = extra_place(&ring, chi.modulus(), 2);
                let outcome = match case {
                    CrudeCase::So3 if chi.pow(2).is_trivial() => continue,
                    CrudeCase::Gl11 => {
                        let all = HeckeChar::enumerate(&ring, chi.modulus())?;
                        let mu = all
                            .iter()
                            .rev()
                            .find(|mu| !chi.mul(mu).map(|x| x.is_trivial()).unwrap_or(true))
                            .cloned();
                        match mu {
                            Some(mu) => crude_fe_check(case, &chi, Some(&mu), &extra),
                            None => continue,
                        }
                    }
                    _ => crude_fe_check(case, &chi, None, &extra),
                };
                rep.record(|| format!("{chi:?}"), outcome);
            }
        }
    }
    Ok(rep)
}

/// `L(s, δ(χ,a) × δ(μ,b))` extracted from γ against the gcd oracle and the closed form with
/// `min(a, b)` inverse linear factors.
pub fn segment_suite(q: u64, max_len: usize, seed: u64) -> Result<SuiteReport> {
    let f = test_field(q, 1)?;
    let psi = AddChar::standard(&f);
    let c = f.cyc();
    let order = c.order() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (q << 32));
    let mut rep = SuiteReport::new(format!("segments q={q}"));
    for a in 1..=max_len {
        for b in 1..=max_len {
            let chi = MulChar::unramified(&f, CycScalar::root_of_unity(c, rng.gen_range(0..order)));
            let mu = MulChar::unramified(&f, CycScalar::root_of_unity(c, rng.gen_range(0..order)));
            let outcome = (|| -> Result<bool> {
                let d = InducingDatum::gl(
                    vec![Block::segment(EChar::Field(chi.clone()), a)],
                    vec![Block::segment(EChar::Field(mu.clone()), b)],
                );
                let g = GroupTag::Gl(a, b);
                let lf = &local_factors(&g, &d, &psi)?[0];
                let pieces = coefficient_factors(&g, &f, &d)?
                    .iter()
                    .map(|x| eval_factors(&g, std::slice::from_ref(x), &psi))
                    .collect::<Result<Vec<_>>>()?;
                let inv = lf.l.inv()?;
                let oracle = RatFunc::from_poly(gcd_numerator(&pieces)?);
                let wm = chi.w() * mu.w();
                let mut closed = Poly::one(c);
                for k in 1..=a.min(b) as i64 {
                    let e2 = (a + b) as i64 - 2 * k;
                    closed = &closed
                        * &Poly::one_minus(
                            &(&wm * &CycScalar::sqrt_p_pow(c, -(f.f() as i64) * e2)),
                            1,
                        );
                }
                Ok(inv == oracle
                    && inv == RatFunc::from_poly(closed)
                    && inv.num().degree() == Some(a.min(b)))
            })();
            rep.record(|| format!("a={a} b={b}"), outcome);
        }
    }
    Ok(rep)
}
