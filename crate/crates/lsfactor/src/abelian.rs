//! Tate's abelian local factors: γ by exact Gauss-sum shells, L, ε, the
//! Langlands λ-factor, and an independent ζ-integral oracle for γ.

use serde_json::{json, Value};

use crate::characters::{base_change, AddChar, EChar, MulChar};
use crate::localfield::{LaurentElem, LocalField, QuadEtale, QuadKind, StepFunction};
use crate::scalar::{CycScalar, Monomial, Poly, RatFunc};
use crate::{Error, Result};

/// γ, L, the dual L and ε of one character.
#[derive(Clone, Debug)]
pub struct AbelianFactorSet {
    pub gamma: RatFunc,
    pub l: RatFunc,
    pub l_dual: RatFunc,
    pub epsilon: Monomial,
}

impl AbelianFactorSet {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma": self.gamma.to_json(),
            "L": self.l.to_json(),
            "L_dual": self.l_dual.to_json(),
            "eps": self.epsilon.to_json(),
        })
    }
}

fn sqrt_q_pow(field: &LocalField, e: i64) -> CycScalar {
    CycScalar::sqrt_p_pow(field.cyc(), field.f() as i64 * e)
}

/// `Q^{-1}` for the residue field of `field`.
pub fn q_inv(field: &LocalField) -> CycScalar {
    sqrt_q_pow(field, -2)
}

/// `g(1 - s)`: the substitution `Z ↦ Q^{-1} Z^{-1}`.
pub fn dual(g: &RatFunc, field: &LocalField) -> RatFunc {
    g.subst_dual(&q_inv(field))
        .expect("nonzero substitution constant")
}

/// `L(s, χ)`.
pub fn l_factor(chi: &MulChar) -> RatFunc {
    if chi.is_unramified() {
        RatFunc::inv_one_minus(chi.w(), 1)
    } else {
        RatFunc::one(chi.cyc())
    }
}

/// `L(s, χ)` for a character of `E`, in the variable `Z_E = q_E^{-s}`.
pub fn l_factor_e(chi: &EChar) -> RatFunc {
    match chi {
        EChar::Field(c) => l_factor(c),
        EChar::Split(a, b) => l_factor(a).mul(&l_factor(b)),
    }
}

/// `Σ_{u ∈ (O/ϖ^k)^×} χ(u)^sign ψ(ϖ^j u)`.
fn shell_sum(chi: &MulChar, sign: i64, psi: &AddChar, j: i64, k: usize) -> CycScalar {
    let field = chi.field();
    let ctx = field.cyc();
    let m = ctx.order();
    let step = m / field.p() as usize;
    let chi_k = chi
        .at_level(k.max(chi.level()))
        .expect("level above conductor");
    let mut counts = vec![0i64; m];
    let n = (field.q() as usize).pow(k as u32);
    for i in 0..n {
        if let Some(u) = field.unit_from_index(i, k) {
            let e = chi_k.unit_exponent(&u).expect("unit") as i64 * sign;
            let a = psi.exponent(&u.shift(j)) as i64 * step as i64;
            counts[(e + a).rem_euclid(m as i64) as usize] += 1;
        }
    }
    CycScalar::from_root_counts(ctx, &counts)
}

/// `γ(s, χ, ψ) = ∫ χ^{-1}(x) |x|^{-s} ψ(x) dμ_ψ(x)` as a finite shell computation.
pub fn gauss_gamma(chi: &MulChar, psi: &AddChar) -> Result<RatFunc> {
    let field = chi.field();
    if field.q() != psi.field().q() {
        return Err(Error::AlgebraMismatch(
            "χ and ψ over different fields".into(),
        ));
    }
    let ctx = field.cyc();
    let n = chi.conductor();
    let k = n.max(1);
    let l = psi.level();
    let winv = chi.w().inv()?;
    let mut total = RatFunc::zero(ctx);
    for j in (l - k as i64)..l {
        let s = shell_sum(chi, -1, psi, j, k);
        if n >= 1 && j != l - n as i64 {
            if !s.is_zero() {
                return Err(Error::Invariant(format!(
                    "shell {j} of a ramified γ does not vanish"
                )));
            }
            continue;
        }
        let coeff = &(&winv.pow(j)? * &sqrt_q_pow(field, l - 2 * j - 2 * k as i64)) * &s;
        total = total.add(&RatFunc::monomial(coeff, -j));
    }
    if n == 0 {
        let c = &winv * &q_inv(field);
        let mu_o = sqrt_q_pow(field, l);
        let frac = &mu_o * &(&CycScalar::one(ctx) - &q_inv(field));
        let head = RatFunc::monomial(&frac * &c.pow(l)?, 1 - l);
        let tail = RatFunc::new(
            Poly::one(ctx),
            Poly::new(ctx, vec![-&c, CycScalar::one(ctx)]),
        )?;
        total = total.add(&head.mul(&tail));
    }
    if total.is_zero() {
        return Err(Error::Invariant("γ-factor vanished".into()));
    }
    Ok(total)
}

/// `∫_{F^×} χ(x) |x|^s ψ(x) dμ_ψ^×(x)`, with the geometric tail summed in closed form.
pub fn tate_integral(chi: &MulChar, psi: &AddChar) -> Result<RatFunc> {
    let field = chi.field();
    let ctx = field.cyc();
    let n = chi.conductor();
    let k = n.max(1);
    let l = psi.level();
    let qq = CycScalar::from_int(ctx, field.q() as i64);
    let qfac = &qq * &(&qq - &CycScalar::one(ctx)).inv()?;
    let mut total = RatFunc::zero(ctx);
    for j in (l - k as i64)..l {
        let s = shell_sum(chi, 1, psi, j, k);
        if s.is_zero() {
            continue;
        }
        let vol = sqrt_q_pow(field, l - 2 * k as i64);
        let coeff = &(&(&qfac * &vol) * &chi.w().pow(j)?) * &s;
        total = total.add(&RatFunc::monomial(coeff, j));
    }
    if n == 0 {
        let mu_o = sqrt_q_pow(field, l);
        let head = RatFunc::monomial(&mu_o * &chi.w().pow(l)?, l);
        total = total.add(&head.mul(&RatFunc::inv_one_minus(chi.w(), 1)));
    }
    Ok(total)
}

/// `γ(s, χ, ψ)^{-1} = (1 - q^{-1}) ∫ χ(x) |x|^s ψ̄(x) dμ_ψ^×(x)`.
pub fn gamma_inverse(chi: &MulChar, psi: &AddChar) -> Result<RatFunc> {
    let field = chi.field();
    let c = &CycScalar::one(field.cyc()) - &q_inv(field);
    Ok(tate_integral(chi, &psi.conj())?.scale(&c))
}

/// `ζ_ψ(s, χ, f)` for a step function, as an exact rational function of `Z`.
pub fn zeta_integral(chi: &MulChar, psi: &AddChar, f: &StepFunction) -> Result<RatFunc> {
    let field = chi.field();
    let ctx = field.cyc();
    let n = chi.conductor() as i64;
    let l = psi.level();
    let qq = CycScalar::from_int(ctx, field.q() as i64);
    let qfac = &qq * &(&qq - &CycScalar::one(ctx)).inv()?;
    let level = f.level();
    let mut total = RatFunc::zero(ctx);
    for (a, w) in f.cells() {
        if w.is_zero() {
            continue;
        }
        match a.val() {
            None => {
                if n == 0 {
                    let head = RatFunc::monomial(
                        &(w * &sqrt_q_pow(field, l)) * &chi.w().pow(level)?,
                        level,
                    );
                    total = total.add(&head.mul(&RatFunc::inv_one_minus(chi.w(), 1)));
                }
            }
            Some(v) => {
                let fine = level.max(v + n);
                let cell = StepFunction::indicator(field, a, level).refine(field, fine);
                let m = ctx.order();
                let mut counts = vec![0i64; m];
                for (b, _) in cell.cells() {
                    let e = chi.unit_exponent(&b.unit_part())? as usize;
                    counts[e] += 1;
                }
                let chisum = &CycScalar::from_root_counts(ctx, &counts) * &chi.w().pow(v)?;
                let vol = &qfac * &sqrt_q_pow(field, 2 * v + l - 2 * fine);
                total = total.add(&RatFunc::monomial(&(w * &vol) * &chisum, v));
            }
        }
    }
    Ok(total)
}

/// The ζ-side quotient `ζ(1-s, χ^{-1}, F_ψ f) / ζ(s, χ, f)`.
pub fn zeta_quotient(chi: &MulChar, psi: &AddChar, f: &StepFunction) -> Result<RatFunc> {
    let field = chi.field();
    let ff = f.fourier(field, psi);
    let lhs = dual(&zeta_integral(&chi.inv(), psi, &ff)?, field);
    let rhs = zeta_integral(chi, psi, f)?;
    if rhs.is_zero() {
        return Err(Error::Invariant(
            "test function has vanishing ζ-integral".into(),
        ));
    }
    lhs.div(&rhs)
}

/// The two test functions of the oracle: `1_{1+p^N}` and `1_O` (unramified χ) or a
/// unit coset `gϖ(1+p^N)` (ramified χ).
pub fn oracle_test_functions(chi: &MulChar) -> (StepFunction, StepFunction) {
    let field = chi.field();
    let n = chi.conductor() as i64;
    let f1 = StepFunction::indicator(field, &LaurentElem::one(), n.max(1));
    let f2 = if n == 0 {
        StepFunction::indicator(field, &LaurentElem::zero(), 0)
    } else {
        let g = field.res().exp(1);
        StepFunction::indicator(field, &LaurentElem::monomial(g, 1), n + 1)
    };
    (f1, f2)
}

/// γ from Tate's local functional equation, cross-checked on two test functions.
pub fn zeta_oracle_gamma(chi: &MulChar, psi: &AddChar) -> Result<RatFunc> {
    let (f1, f2) = oracle_test_functions(chi);
    let g1 = zeta_quotient(chi, psi, &f1)?;
    let g2 = zeta_quotient(chi, psi, &f2)?;
    if g1 != g2 {
        return Err(Error::Invariant(
            "ζ-quotient depends on the test function".into(),
        ));
    }
    Ok(g1)
}

/// `ε(s, χ, ψ) = γ(s, χ, ψ) L(s, χ) / L(1-s, χ^{-1})`.
pub fn epsilon_factor(chi: &MulChar, psi: &AddChar) -> Result<Monomial> {
    Ok(factor_set(chi, psi)?.epsilon)
}

pub fn factor_set(chi: &MulChar, psi: &AddChar) -> Result<AbelianFactorSet> {
    let gamma = gauss_gamma(chi, psi)?;
    let l = l_factor(chi);
    let l_dual = dual(&l_factor(&chi.inv()), chi.field());
    let eps = gamma.mul(&l).div(&l_dual)?;
    let epsilon = eps
        .as_monomial()
        .ok_or_else(|| Error::Invariant(format!("ε is not a monomial: {eps}")))?;
    Ok(AbelianFactorSet {
        gamma,
        l,
        l_dual,
        epsilon,
    })
}

/// `γ_E(s, χ, ψ_E)` in the variable `Z_E`.
pub fn gamma_e(e: &QuadEtale, chi: &EChar, psi: &AddChar) -> Result<RatFunc> {
    match chi {
        EChar::Split(a, b) => Ok(gauss_gamma(a, psi)?.mul(&gauss_gamma(b, psi)?)),
        EChar::Field(c) => gauss_gamma(c, &psi.lift(e)?),
    }
}

/// Rewrites a function of `Z_E` in the variable `Z_F`.
pub fn to_f_variable(e: &QuadEtale, g: &RatFunc) -> RatFunc {
    g.subst_power(e.z_power())
}

/// `η_{E/F}` as a character of `F^×`.
pub fn eta_character(e: &QuadEtale) -> Result<MulChar> {
    let base = e.base();
    let ctx = base.cyc();
    match e.kind() {
        QuadKind::Split => Ok(MulChar::trivial(base)),
        QuadKind::Unramified => Ok(MulChar::unramified(base, CycScalar::from_int(ctx, -1))),
        QuadKind::Ramified => {
            let half = ctx.order() as i64 / 2;
            let w = CycScalar::from_int(ctx, e.eta(&LaurentElem::monomial(1, 1))? as i64);
            MulChar::from_fn(base, 1, w, |u| Ok(if e.eta(u)? == 1 { 0 } else { half }))
        }
    }
}

fn rational_sqrt(r: &num_rational::BigRational) -> Option<num_rational::BigRational> {
    use num_traits::Signed;
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().clone(), r.denom().clone());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == n && &sd * &sd == d).then(|| num_rational::BigRational::new(sn, sd))
}

/// `|x|` for `x` with `x·x̄ = p^k · r²`, `r` rational.
fn abs_value(x: &CycScalar, p: u64) -> Result<CycScalar> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let ctx = x.ctx();
    let nn = (x * &x.conj())
        .to_rational()
        .ok_or_else(|| Error::Invariant("|x|² is not rational".into()))?;
    if nn.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let pb = BigInt::from(p);
    let (mut num, mut den) = (nn.numer().clone(), nn.denom().clone());
    let mut e = 0i64;
    while (&num % &pb).is_zero() {
        num /= &pb;
        e += 1;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
        e -= 1;
    }
    let rest = num_rational::BigRational::new(num, den);
    let r = rational_sqrt(&rest)
        .ok_or_else(|| Error::Invariant("|x|² is not p^k times a square".into()))?;
    Ok(&CycScalar::sqrt_p_pow(ctx, e) * &CycScalar::from_rational(ctx, &r))
}

/// `λ(E/F, ψ) = I / |I|` with `I = ∫ η_{E/F}(x) ψ(x) dμ_ψ^×(x)` (Abel-summed tail).
pub fn lambda_factor(e: &QuadEtale, psi: &AddChar) -> Result<CycScalar> {
    let ctx = e.base().cyc();
    if e.kind() == QuadKind::Split {
        return Ok(CycScalar::one(ctx));
    }
    let eta = eta_character(e)?;
    let i = tate_integral(&eta, psi)?.eval(&CycScalar::one(ctx))?;
    let lam = &i * &abs_value(&i, e.base().p())?.inv()?;
    if !(&lam * &lam.conj()).is_one() {
        return Err(Error::Invariant("λ is not of absolute value one".into()));
    }
    Ok(lam)
}

/// Both sides of `λ(E/F,ψ) γ_E(s, χ∘N, ψ_E) = γ(s, χ, ψ) γ(s, η χ, ψ)` in the `F`-variable.
pub fn base_change_sides(
    chi: &MulChar,
    e: &QuadEtale,
    psi: &AddChar,
) -> Result<(RatFunc, RatFunc)> {
    let chi_e = base_change(chi, e)?;
    let lam = lambda_factor(e, psi)?;
    let lhs = to_f_variable(e, &gamma_e(e, &chi_e, psi)?).scale(&lam);
    let g = gauss_gamma(chi, psi)?;
    let rhs = match e.kind() {
        QuadKind::Split => g.mul(&g),
        _ => g.mul(&gauss_gamma(&eta_character(e)?.mul(chi)?, psi)?),
    };
    Ok((lhs, rhs))
}

pub fn base_change_identity_check(chi: &MulChar, e: &QuadEtale, psi: &AddChar) -> Result<bool> {
    let (lhs, rhs) = base_change_sides(chi, e, psi)?;
    Ok(lhs == rhs)
}

/// λ recovered as `γ(χ)γ(ηχ) / γ_E(χ∘N)`; fails unless the quotient is constant.
pub fn lambda_from_base_change(chi: &MulChar, e: &QuadEtale, psi: &AddChar) -> Result<CycScalar> {
    let chi_e = base_change(chi, e)?;
    let ge = to_f_variable(e, &gamma_e(e, &chi_e, psi)?);
    let g = gauss_gamma(chi, psi)?;
    let rhs = match e.kind() {
        QuadKind::Split => g.mul(&g),
        _ => g.mul(&gauss_gamma(&eta_character(e)?.mul(chi)?, psi)?),
    };
    let q = rhs.div(&ge)?;
    match q.as_monomial() {
        Some(m) if m.exp == 0 => Ok(m.coeff),
        _ => Err(Error::Invariant(format!("λ quotient is not constant: {q}"))),
    }
}
