//! Langlands–Shahidi local coefficients of Siegel Levi subgroups built from
//! abelian γ-factors, their regroupings, and the attached L- and ε-factors.

use rand::Rng;
use serde_json::{json, Value};

use crate::abelian::{dual, eta_character, gamma_e, gauss_gamma, lambda_factor, to_f_variable};
use crate::characters::{hilbert90_extend, restrict_to_f, AddChar, E1Char, EChar, MulChar};
use crate::localfield::{LaurentElem, LocalField, QuadEtale};
use crate::scalar::{CycScalar, Monomial, RatFunc};
use crate::{Error, Result};

/// The ambient group; unitary groups carry their quadratic algebra.
#[derive(Clone, Debug)]
pub enum GroupTag {
    Gl(usize, usize),
    SoOdd(usize),
    Sp(usize),
    SoEven(usize),
    UEven(usize, QuadEtale),
    UOdd(usize, QuadEtale),
}

impl GroupTag {
    pub fn name(&self) -> String {
        match self {
            GroupTag::Gl(a, b) => format!("GL({a},{b})"),
            GroupTag::SoOdd(n) => format!("SO_odd({n})"),
            GroupTag::Sp(n) => format!("Sp({n})"),
            GroupTag::SoEven(n) => format!("SO_even({n})"),
            GroupTag::UEven(n, e) => format!("U_even({n},{})", e.kind().name()),
            GroupTag::UOdd(n, e) => format!("U_odd({n},{})", e.kind().name()),
        }
    }
    /// The degree `n` (for `GL(n₁,n₂)`, the pair is returned by [`GroupTag::gl_degrees`]).
    pub fn degree(&self) -> usize {
        match self {
            GroupTag::Gl(a, _) => *a,
            GroupTag::SoOdd(n) | GroupTag::Sp(n) | GroupTag::SoEven(n) => *n,
            GroupTag::UEven(n, _) | GroupTag::UOdd(n, _) => *n,
        }
    }
    pub fn gl_degrees(&self) -> Option<(usize, usize)> {
        match self {
            GroupTag::Gl(a, b) => Some((*a, *b)),
            _ => None,
        }
    }
    pub fn algebra(&self) -> Option<&QuadEtale> {
        match self {
            GroupTag::UEven(_, e) | GroupTag::UOdd(_, e) => Some(e),
            _ => None,
        }
    }
    /// Number `m_r` of γ-factors attached to the group.
    pub fn factor_count(&self) -> usize {
        match self {
            GroupTag::Sp(n) if *n >= 2 => 2,
            GroupTag::UOdd(..) => 2,
            _ => 1,
        }
    }
    /// The same group type with a different degree.
    pub fn with_degree(&self, n: usize) -> Self {
        match self {
            GroupTag::Gl(_, b) => GroupTag::Gl(n, *b),
            GroupTag::SoOdd(_) => GroupTag::SoOdd(n),
            GroupTag::Sp(_) => GroupTag::Sp(n),
            GroupTag::SoEven(_) => GroupTag::SoEven(n),
            GroupTag::UEven(_, e) => GroupTag::UEven(n, e.clone()),
            GroupTag::UOdd(_, e) => GroupTag::UOdd(n, e.clone()),
        }
    }
}

/// `δ(χ, a)` twisted by `|det|^{u2/2}`; `a = 1` is the character itself.
#[derive(Clone, Debug)]
pub struct Block {
    pub chi: EChar,
    pub u2: i64,
    pub a: usize,
}

impl Block {
    pub fn new(chi: EChar) -> Self {
        Block { chi, u2: 0, a: 1 }
    }
    pub fn of_f(chi: MulChar) -> Self {
        Block::new(EChar::Field(chi))
    }
    pub fn segment(chi: EChar, a: usize) -> Self {
        Block { chi, u2: 0, a }
    }
    pub fn twisted(mut self, u2: i64) -> Self {
        self.u2 = u2;
        self
    }
    /// `χ·|·|^{u + (a-1)/2 - i}` for `0 ≤ i < a`, or without the outer twist `u`.
    pub fn expand(&self, with_twist: bool) -> Vec<EChar> {
        let outer = if with_twist { self.u2 } else { 0 };
        (0..self.a)
            .map(|i| {
                self.chi
                    .twist_unramified(outer + self.a as i64 - 1 - 2 * i as i64)
            })
            .collect()
    }
    pub fn contragredient(&self) -> Self {
        Block {
            chi: self.chi.inv(),
            u2: -self.u2,
            a: self.a,
        }
    }
    pub fn to_json(&self) -> Value {
        json!({"chi": self.chi.to_json(), "u2": self.u2, "a": self.a})
    }
}

/// Inducing data: ordered blocks, a second list for `GL(n₁,n₂)`, and `ν′` for odd unitary groups.
#[derive(Clone, Debug, Default)]
pub struct InducingDatum {
    pub blocks: Vec<Block>,
    pub second: Vec<Block>,
    pub nu1: Option<E1Char>,
}

impl InducingDatum {
    pub fn new(blocks: Vec<Block>) -> Self {
        InducingDatum {
            blocks,
            ..Default::default()
        }
    }
    pub fn gl(first: Vec<Block>, second: Vec<Block>) -> Self {
        InducingDatum {
            blocks: first,
            second,
            nu1: None,
        }
    }
    pub fn with_nu(mut self, nu1: E1Char) -> Self {
        self.nu1 = Some(nu1);
        self
    }
    pub fn degree(&self) -> usize {
        self.blocks.iter().map(|b| b.a).sum()
    }
    pub fn second_degree(&self) -> usize {
        self.second.iter().map(|b| b.a).sum()
    }
    pub fn contragredient(&self, e: Option<&QuadEtale>) -> Result<Self> {
        let nu1 = match (&self.nu1, e) {
            (Some(nu), Some(e)) => Some(e1_inverse(nu, e)?),
            _ => None,
        };
        Ok(InducingDatum {
            blocks: self.blocks.iter().map(Block::contragredient).collect(),
            second: self.second.iter().map(Block::contragredient).collect(),
            nu1,
        })
    }
    /// Concatenation of two data of the same group type.
    pub fn concat(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        InducingDatum {
            blocks,
            second: self.second.clone(),
            nu1: self.nu1.clone(),
        }
    }
    /// `true` when all characters are unitary and no block is twisted.
    pub fn is_tempered(&self) -> bool {
        self.blocks
            .iter()
            .chain(&self.second)
            .all(|b| b.u2 == 0 && b.chi.is_unitary())
    }
    pub fn twist_all(&self, u2: i64) -> Self {
        let tw = |b: &Block| Block {
            u2: b.u2 + u2,
            ..b.clone()
        };
        InducingDatum {
            blocks: self.blocks.iter().map(tw).collect(),
            second: self.second.clone(),
            nu1: self.nu1.clone(),
        }
    }
    pub fn to_json(&self) -> Value {
        json!({
            "blocks": self.blocks.iter().map(Block::to_json).collect::<Vec<_>>(),
            "second": self.second.iter().map(Block::to_json).collect::<Vec<_>>(),
            "nu": self.nu1.is_some(),
        })
    }
}

fn e1_inverse(nu: &E1Char, _e: &QuadEtale) -> Result<E1Char> {
    Ok(match nu {
        E1Char::Split(c) => E1Char::Split(c.inv()),
        E1Char::Field { m, values } => E1Char::Field {
            m: *m,
            values: values.iter().map(|(k, v)| (*k, -v)).collect(),
        },
    })
}

/// `γ₁` and `γ₂`, with `C′ = γ₁(s) γ₂(2s)`.
#[derive(Clone, Debug)]
pub struct GammaPair {
    pub gamma1: RatFunc,
    pub gamma2: RatFunc,
}

/// One abelian factor of a local coefficient.
#[derive(Clone, Debug)]
pub enum Factor {
    /// `γ(s, χ, ψ)` or `γ(2s, χ, ψ)` over `F`.
    F { chi: MulChar, doubled: bool },
    /// `γ_E(s, χ, ψ_E)` or its value at `2s`, in the `F`-variable.
    E { chi: EChar, doubled: bool },
    /// `λ(E/F, ψ̄)^k`.
    Lambda { power: i64 },
}

fn as_f(chi: &EChar) -> Result<&MulChar> {
    match chi {
        EChar::Field(c) => Ok(c),
        EChar::Split(..) => Err(Error::AlgebraMismatch(
            "split character for a group over F".into(),
        )),
    }
}

struct Env<'a> {
    group: &'a GroupTag,
    base: &'a LocalField,
}

impl<'a> Env<'a> {
    fn e(&self) -> Result<&'a QuadEtale> {
        self.group
            .algebra()
            .ok_or_else(|| Error::AlgebraMismatch("group has no quadratic algebra".into()))
    }
    fn check_field(&self, chi: &EChar) -> Result<()> {
        let ok = match (chi, self.group.algebra()) {
            (EChar::Field(c), None) => c.field().q() == self.base.q(),
            (EChar::Field(c), Some(e)) => e.ext().is_some_and(|x| x.q() == c.field().q()),
            (EChar::Split(..), Some(e)) => e.ext().is_none(),
            (EChar::Split(..), None) => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "character does not match {}",
                self.group.name()
            )))
        }
    }
    fn restrict(&self, chi: &EChar) -> Result<MulChar> {
        restrict_to_f(chi, self.e()?)
    }
    fn conj_pair(&self, a: &EChar, b: &EChar) -> Result<EChar> {
        a.mul(&b.conj(self.e()?)?)
    }
    fn nu(&self, d: &InducingDatum) -> Result<EChar> {
        let e = self.e()?;
        match &d.nu1 {
            Some(nu1) => hilbert90_extend(nu1, e),
            None => Ok(EChar::trivial(e)),
        }
    }
    fn eta_restrict(&self, chi: &EChar) -> Result<MulChar> {
        eta_character(self.e()?)?.mul(&self.restrict(chi)?)
    }
}

fn validate(group: &GroupTag, base: &LocalField, d: &InducingDatum) -> Result<()> {
    let env = Env { group, base };
    for b in d.blocks.iter().chain(&d.second) {
        if b.a == 0 {
            return Err(Error::Invalid("segment length must be positive".into()));
        }
        env.check_field(&b.chi)?;
    }
    match group {
        GroupTag::Gl(n1, n2) => {
            if d.degree() != *n1 || d.second_degree() != *n2 {
                return Err(Error::Invalid(format!(
                    "data of degree ({},{}) for {}",
                    d.degree(),
                    d.second_degree(),
                    group.name()
                )));
            }
        }
        _ => {
            if d.degree() != group.degree() {
                return Err(Error::Invalid(format!(
                    "data of degree {} for {}",
                    d.degree(),
                    group.name()
                )));
            }
        }
    }
    if group.degree() == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    Ok(())
}

fn flat(blocks: &[Block]) -> Vec<EChar> {
    blocks.iter().flat_map(|b| b.expand(true)).collect()
}

/// The abelian factors of the local coefficient in the order of the case table.
pub fn coefficient_factors(
    group: &GroupTag,
    base: &LocalField,
    d: &InducingDatum,
) -> Result<Vec<Factor>> {
    validate(group, base, d)?;
    let env = Env { group, base };
    let chars = flat(&d.blocks);
    let n = chars.len();
    let mut out = Vec::new();
    let single = |c: MulChar| Factor::F {
        chi: c,
        doubled: false,
    };
    match group {
        GroupTag::Gl(..) => {
            for c in &chars {
                for m in flat(&d.second) {
                    out.push(single(as_f(c)?.mul(as_f(&m)?)?));
                }
            }
        }
        GroupTag::SoOdd(_) => {
            for c in &chars {
                out.push(single(as_f(c)?.square()));
            }
            for i in 0..n {
                for j in i + 1..n {
                    out.push(single(as_f(&chars[i])?.mul(as_f(&chars[j])?)?));
                }
            }
        }
        GroupTag::Sp(_) => {
            for c in &chars {
                out.push(single(as_f(c)?.clone()));
            }
            for i in 0..n {
                for j in i + 1..n {
                    out.push(Factor::F {
                        chi: as_f(&chars[i])?.mul(as_f(&chars[j])?)?,
                        doubled: true,
                    });
                }
            }
        }
        GroupTag::SoEven(_) => {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(single(as_f(&chars[i])?.mul(as_f(&chars[j])?)?));
                }
            }
        }
        GroupTag::UEven(..) => {
            for c in &chars {
                out.push(single(env.restrict(c)?));
            }
            for i in 0..n {
                for j in i + 1..n {
                    out.push(Factor::E {
                        chi: env.conj_pair(&chars[i], &chars[j])?,
                        doubled: false,
                    });
                }
            }
        }
        GroupTag::UOdd(..) => {
            let nu = env.nu(d)?;
            out.push(Factor::Lambda { power: n as i64 });
            for c in &chars {
                out.push(Factor::E {
                    chi: c.mul(&nu)?,
                    doubled: false,
                });
                out.push(Factor::F {
                    chi: env.eta_restrict(c)?,
                    doubled: true,
                });
            }
            for i in 0..n {
                for j in i + 1..n {
                    out.push(Factor::E {
                        chi: env.conj_pair(&chars[i], &chars[j])?,
                        doubled: true,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Cross terms between the parts `d1`, `d2` of a concatenated datum.
pub fn cross_factors(
    group: &GroupTag,
    base: &LocalField,
    d1: &InducingDatum,
    d2: &InducingDatum,
) -> Result<Vec<Factor>> {
    let env = Env { group, base };
    let (a, b) = (flat(&d1.blocks), flat(&d2.blocks));
    let mut out = Vec::new();
    for x in &a {
        for y in &b {
            let f = match group {
                GroupTag::SoOdd(_) | GroupTag::SoEven(_) => Factor::F {
                    chi: as_f(x)?.mul(as_f(y)?)?,
                    doubled: false,
                },
                GroupTag::Sp(_) => Factor::F {
                    chi: as_f(x)?.mul(as_f(y)?)?,
                    doubled: true,
                },
                GroupTag::UEven(..) => Factor::E {
                    chi: env.conj_pair(x, y)?,
                    doubled: false,
                },
                GroupTag::UOdd(..) => Factor::E {
                    chi: env.conj_pair(x, y)?,
                    doubled: true,
                },
                GroupTag::Gl(..) => {
                    return Err(Error::Unsupported(
                        "cross terms for GL are the pairs themselves".into(),
                    ))
                }
            };
            out.push(f);
        }
    }
    Ok(out)
}

/// Value of one factor at `ψ`, in the `F`-variable.
pub fn eval_factor(group: &GroupTag, f: &Factor, psi: &AddChar) -> Result<RatFunc> {
    let dbl = |g: RatFunc, d: bool| if d { g.subst_double() } else { g };
    match f {
        Factor::F { chi, doubled } => Ok(dbl(gauss_gamma(chi, psi)?, *doubled)),
        Factor::E { chi, doubled } => {
            let e = group
                .algebra()
                .ok_or_else(|| Error::AlgebraMismatch("E-factor without algebra".into()))?;
            Ok(dbl(to_f_variable(e, &gamma_e(e, chi, psi)?), *doubled))
        }
        Factor::Lambda { power } => {
            let e = group
                .algebra()
                .ok_or_else(|| Error::AlgebraMismatch("λ without algebra".into()))?;
            Ok(RatFunc::constant(
                lambda_factor(e, &psi.conj())?.pow(*power)?,
            ))
        }
    }
}

pub fn eval_factors(group: &GroupTag, factors: &[Factor], psi: &AddChar) -> Result<RatFunc> {
    let mut acc = RatFunc::one(psi.field().cyc());
    for f in factors {
        acc = acc.mul(&eval_factor(group, f, psi)?);
    }
    Ok(acc)
}

/// `C_ψ(s, π, w₀)` for principal-series data.
pub fn classical_coefficient(
    group: &GroupTag,
    d: &InducingDatum,
    psi: &AddChar,
) -> Result<RatFunc> {
    let factors = coefficient_factors(group, psi.field(), d)?;
    eval_factors(group, &factors, psi)
}

/// Rank-one local coefficients in closed form.
pub fn rank_one_coefficient(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<RatFunc> {
    validate(group, psi.field(), d)?;
    let env = Env {
        group,
        base: psi.field(),
    };
    if group.degree() != 1 || d.blocks.len() != 1 || d.blocks[0].a != 1 {
        return Err(Error::Invalid(format!(
            "{} is not of rank one",
            group.name()
        )));
    }
    let chi = &d.blocks[0].expand(true)[0];
    match group {
        GroupTag::Gl(1, 1) => {
            let mu = &d.second[0].expand(true)[0];
            gauss_gamma(&as_f(chi)?.mul(as_f(mu)?)?, psi)
        }
        GroupTag::SoOdd(_) => gauss_gamma(&as_f(chi)?.square(), psi),
        GroupTag::Sp(_) => gauss_gamma(as_f(chi)?, psi),
        GroupTag::SoEven(_) => Ok(RatFunc::one(psi.field().cyc())),
        GroupTag::UEven(..) => gauss_gamma(&env.restrict(chi)?, psi),
        GroupTag::UOdd(_, e) => {
            let lam = lambda_factor(e, &psi.conj())?;
            let ge = to_f_variable(e, &gamma_e(e, &chi.mul(&env.nu(d)?)?, psi)?);
            let g2 = gauss_gamma(&env.eta_restrict(chi)?, psi)?.subst_double();
            Ok(ge.mul(&g2).scale(&lam))
        }
        GroupTag::Gl(..) => Err(Error::Invalid(
            "GL(n₁,n₂) of rank one needs n₁ = n₂ = 1".into(),
        )),
    }
}

/// `γ(s, π₁ × π₂, ψ) = ∏ γ(s, χ_i μ_j, ψ)` over expanded characters.
pub fn rankin_selberg_gamma(d1: &[Block], d2: &[Block], psi: &AddChar) -> Result<RatFunc> {
    let mut acc = RatFunc::one(psi.field().cyc());
    for c in flat(d1) {
        for m in flat(d2) {
            acc = acc.mul(&gauss_gamma(&as_f(&c)?.mul(as_f(&m)?)?, psi)?);
        }
    }
    Ok(acc)
}

/// `λ(E/F, w₀)`: `λ(E/F, ψ̄)^n` for odd unitary groups, `1` otherwise.
pub fn lambda_normalization(group: &GroupTag, psi: &AddChar) -> Result<CycScalar> {
    match group {
        GroupTag::UOdd(n, e) => lambda_factor(e, &psi.conj())?.pow(*n as i64),
        _ => Ok(CycScalar::one(psi.field().cyc())),
    }
}

/// A block-level piece of a local coefficient: the product of abelian factors coming
/// from blocks `k` (and `l`), computed without the outer twists and shifted by
/// `shift2/2` in `s`.
#[derive(Clone, Debug)]
pub struct Term {
    pub index: usize,
    pub doubled: bool,
    pub shift2: i64,
    pub base: RatFunc,
    pub blocks: (usize, Option<usize>),
}

/// `f(s + k2/2)`.
pub fn shift_half(f: &RatFunc, field: &LocalField, k2: i64) -> RatFunc {
    if k2 == 0 {
        return f.clone();
    }
    let c = CycScalar::sqrt_p_pow(field.cyc(), -(field.f() as i64) * k2);
    f.subst_scale(&c).expect("nonzero scale")
}

impl Term {
    /// The term with its twist restored, still in its own argument (`s` or `2s` not applied).
    pub fn undoubled(&self, field: &LocalField) -> RatFunc {
        shift_half(&self.base, field, self.shift2)
    }
    pub fn value(&self, field: &LocalField) -> RatFunc {
        let g = self.undoubled(field);
        if self.doubled {
            g.subst_double()
        } else {
            g
        }
    }
}

/// Block-level decomposition used for the `γ₁, γ₂` regrouping and for L-factors.
pub fn terms(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<Vec<Term>> {
    let base = psi.field();
    validate(group, base, d)?;
    let env = Env { group, base };
    let blocks: Vec<Vec<EChar>> = d.blocks.iter().map(|b| b.expand(false)).collect();
    let u2: Vec<i64> = d.blocks.iter().map(|b| b.u2).collect();
    let gf = |c: &MulChar| gauss_gamma(c, psi);
    let ge = |c: &EChar| -> Result<RatFunc> {
        let e = env.e()?;
        Ok(to_f_variable(e, &gamma_e(e, c, psi)?))
    };
    let mut out = Vec::new();
    let mut push =
        |index: usize, doubled: bool, shift2: i64, base: RatFunc, k: usize, l: Option<usize>| {
            if !base.is_one() || index == 1 {
                out.push(Term {
                    index,
                    doubled,
                    shift2,
                    base,
                    blocks: (k, l),
                });
            }
        };
    let one = RatFunc::one(base.cyc());
    let nb = blocks.len();
    match group {
        GroupTag::Gl(..) => {
            let second: Vec<Vec<EChar>> = d.second.iter().map(|b| b.expand(false)).collect();
            for (k, bk) in blocks.iter().enumerate() {
                for (l, bl) in second.iter().enumerate() {
                    let mut g = one.clone();
                    for x in bk {
                        for y in bl {
                            g = g.mul(&gf(&as_f(x)?.mul(as_f(y)?)?)?);
                        }
                    }
                    push(1, false, u2[k] + d.second[l].u2, g, k, Some(l));
                }
            }
        }
        GroupTag::SoOdd(_) | GroupTag::SoEven(_) | GroupTag::Sp(_) => {
            let (diag_sq, pair_doubled) = match group {
                GroupTag::SoOdd(_) => (true, false),
                GroupTag::SoEven(_) => (false, false),
                _ => (false, true),
            };
            let pair_index = if pair_doubled { 2 } else { 1 };
            for (k, bk) in blocks.iter().enumerate() {
                if pair_doubled {
                    let mut g = one.clone();
                    for x in bk {
                        g = g.mul(&gf(as_f(x)?)?);
                    }
                    push(1, false, u2[k], g, k, None);
                }
                let mut g = one.clone();
                for (i, x) in bk.iter().enumerate() {
                    if diag_sq {
                        g = g.mul(&gf(&as_f(x)?.square())?);
                    }
                    for y in &bk[i + 1..] {
                        g = g.mul(&gf(&as_f(x)?.mul(as_f(y)?)?)?);
                    }
                }
                push(pair_index, pair_doubled, 2 * u2[k], g, k, Some(k));
                for l in k + 1..nb {
                    let mut g = one.clone();
                    for x in bk {
                        for y in &blocks[l] {
                            g = g.mul(&gf(&as_f(x)?.mul(as_f(y)?)?)?);
                        }
                    }
                    push(pair_index, pair_doubled, u2[k] + u2[l], g, k, Some(l));
                }
            }
        }
        GroupTag::UEven(..) | GroupTag::UOdd(..) => {
            let odd = matches!(group, GroupTag::UOdd(..));
            let nu = if odd { Some(env.nu(d)?) } else { None };
            let pair_index = if odd { 2 } else { 1 };
            for (k, bk) in blocks.iter().enumerate() {
                if let Some(nu) = &nu {
                    let mut g = one.clone();
                    for x in bk {
                        g = g.mul(&ge(&x.mul(nu)?)?);
                    }
                    push(1, false, u2[k], g, k, None);
                }
                let mut g = one.clone();
                for (i, x) in bk.iter().enumerate() {
                    let r = if odd {
                        env.eta_restrict(x)?
                    } else {
                        env.restrict(x)?
                    };
                    g = g.mul(&gf(&r)?);
                    for y in &bk[i + 1..] {
                        g = g.mul(&ge(&env.conj_pair(x, y)?)?);
                    }
                }
                push(pair_index, odd, 2 * u2[k], g, k, Some(k));
                for l in k + 1..nb {
                    let mut g = one.clone();
                    for x in bk {
                        for y in &blocks[l] {
                            g = g.mul(&ge(&env.conj_pair(x, y)?)?);
                        }
                    }
                    push(pair_index, odd, u2[k] + u2[l], g, k, Some(l));
                }
            }
        }
    }
    Ok(out)
}

/// `(γ₁, γ₂)` with `C_ψ = λ(E/F, w₀) γ₁(s) γ₂(2s)`; `γ₂ = 1` when `m_r = 1`.
pub fn gamma_pair(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<GammaPair> {
    let field = psi.field();
    let mut g1 = RatFunc::one(field.cyc());
    let mut g2 = RatFunc::one(field.cyc());
    for t in terms(group, d, psi)? {
        if t.index == 1 {
            g1 = g1.mul(&t.value(field));
        } else {
            g2 = g2.mul(&t.undoubled(field));
        }
    }
    Ok(GammaPair {
        gamma1: g1,
        gamma2: g2,
    })
}

/// `γ₁(s) γ₂(2s) λ(E/F, w₀)` equals the directly assembled coefficient.
pub fn theorem_prime_check(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<bool> {
    let pair = gamma_pair(group, d, psi)?;
    let lam = lambda_normalization(group, psi)?;
    let lhs = pair.gamma1.mul(&pair.gamma2.subst_double()).scale(&lam);
    Ok(lhs == classical_coefficient(group, d, psi)?)
}

/// ψ-scaling of a single factor: `χ(a)|a|^{s-1/2}` per abelian γ, `η(a)` per λ.
fn factor_scaling(
    group: &GroupTag,
    f: &Factor,
    a: &LaurentElem,
    field: &LocalField,
) -> Result<Monomial> {
    let v = a.val().ok_or(Error::ZeroArgument)?;
    let fe = field.f() as i64;
    let ctx = field.cyc();
    Ok(match f {
        Factor::F { chi, doubled } => {
            let k = if *doubled { 2 * v } else { v };
            Monomial::new(&chi.eval(a)? * &CycScalar::sqrt_p_pow(ctx, fe * v), k)
        }
        Factor::E { chi, doubled } => {
            let e = group.algebra().expect("unitary group");
            let val = chi.eval(&e.embed(a))?;
            let k = if *doubled { 4 * v } else { 2 * v };
            Monomial::new(&val * &CycScalar::sqrt_p_pow(ctx, 2 * fe * v), k)
        }
        Factor::Lambda { power } => {
            let e = group.algebra().expect("unitary group");
            let s = e.eta(a)? as i64;
            Monomial::new(
                CycScalar::from_int(ctx, s.pow(power.unsigned_abs() as u32)),
                0,
            )
        }
    })
}

/// The recomputed coefficient at `ψ^a` and the value predicted from `ψ` by the scaling laws.
pub fn psi_dependence(
    group: &GroupTag,
    d: &InducingDatum,
    psi: &AddChar,
    a: &LaurentElem,
) -> Result<(RatFunc, RatFunc)> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let field = psi.field();
    let factors = coefficient_factors(group, field, d)?;
    let recomputed = eval_factors(group, &factors, &psi.twist(a)?)?;
    let mut predicted = eval_factors(group, &factors, psi)?;
    for f in &factors {
        predicted = predicted.mul(&factor_scaling(group, f, a, field)?.to_ratfunc());
    }
    Ok((recomputed, predicted))
}

/// L, the dual L at `1-s`, and ε of one γ-factor.
#[derive(Clone, Debug)]
pub struct LocalFactors {
    pub l: RatFunc,
    pub l_dual: RatFunc,
    pub epsilon: Monomial,
}

impl LocalFactors {
    pub fn to_json(&self) -> Value {
        json!({"L": self.l.to_json(), "L_dual": self.l_dual.to_json(), "eps": self.epsilon.to_json()})
    }
}

/// `1/P` with `P(0) = 1` the normalized numerator of `γ`.
pub fn l_from_gamma(gamma: &RatFunc) -> Result<RatFunc> {
    let split = gamma.numerator_normalized()?;
    RatFunc::from_poly(split.numerator).inv()
}

/// Tempered extraction: `L = 1/P_γ`, `L̃ = 1/P_{γ̃}`, `ε = γ L / L̃(1-s)`.
pub fn local_factors_from_gamma(
    gamma: &RatFunc,
    dual_gamma: &RatFunc,
    field: &LocalField,
) -> Result<LocalFactors> {
    let l = l_from_gamma(gamma)?;
    let l_dual = dual(&l_from_gamma(dual_gamma)?, field);
    let eps = gamma.mul(&l).div(&l_dual)?;
    let epsilon = eps
        .as_monomial()
        .ok_or_else(|| Error::Invariant(format!("ε is not a monomial: {eps}")))?;
    Ok(LocalFactors { l, l_dual, epsilon })
}

/// L- and ε-factors for each `r_i`, assembled from tempered block terms and twists.
pub fn local_factors(
    group: &GroupTag,
    d: &InducingDatum,
    psi: &AddChar,
) -> Result<Vec<LocalFactors>> {
    let field = psi.field();
    let ctx = field.cyc();
    let all_unitary = d.blocks.iter().chain(&d.second).all(|b| b.chi.is_unitary());
    if !all_unitary {
        return Err(Error::Unsupported(
            "non-unitary characters must be written as unitary blocks with twists".into(),
        ));
    }
    let ts = terms(group, d, psi)?;
    let dual_d = d.contragredient(group.algebra())?;
    let dual_ts = terms(group, &dual_d, &psi.conj())?;
    if ts.len() != dual_ts.len() {
        return Err(Error::Invariant("term lists of π and π̃ differ".into()));
    }
    let mut out: Vec<(RatFunc, RatFunc, Monomial)> = (0..group.factor_count())
        .map(|_| (RatFunc::one(ctx), RatFunc::one(ctx), Monomial::one(ctx)))
        .collect();
    for (t, td) in ts.iter().zip(&dual_ts) {
        let lf = local_factors_from_gamma(&t.base, &td.base, field)?;
        let l_shift = shift_half(&lf.l, field, t.shift2);
        let ld_base = l_from_gamma(&td.base)?;
        let ld_shift = dual(&shift_half(&ld_base, field, -t.shift2), field);
        let eps_shift = shift_half(&lf.epsilon.to_ratfunc(), field, t.shift2);
        let (l, ld, e) = if t.doubled {
            (
                l_shift.subst_double(),
                ld_shift.subst_double(),
                eps_shift.subst_double(),
            )
        } else {
            (l_shift, ld_shift, eps_shift)
        };
        let slot = &mut out[t.index - 1];
        slot.0 = slot.0.mul(&l);
        slot.1 = slot.1.mul(&ld);
        let em = e
            .as_monomial()
            .ok_or_else(|| Error::Invariant("shifted ε is not a monomial".into()))?;
        slot.2 = slot.2.mul(&em);
    }
    Ok(out
        .into_iter()
        .map(|(l, l_dual, epsilon)| LocalFactors { l, l_dual, epsilon })
        .collect())
}

/// γ-factors `γ(s, π, r_i, ψ)` for each `r_i` (the `λ` normalization removed).
pub fn gamma_factors(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<Vec<RatFunc>> {
    let pair = gamma_pair(group, d, psi)?;
    Ok(if group.factor_count() == 2 {
        vec![pair.gamma1, pair.gamma2]
    } else {
        vec![pair.gamma1]
    })
}

/// `γ(s, π, r_i, ψ) γ(1-s, π̃, r_i, ψ̄) = 1` for every `i`.
pub fn local_fe_check(group: &GroupTag, d: &InducingDatum, psi: &AddChar) -> Result<bool> {
    let field = psi.field();
    let g = gamma_factors(group, d, psi)?;
    let gd = gamma_factors(group, &d.contragredient(group.algebra())?, &psi.conj())?;
    Ok(g.iter()
        .zip(&gd)
        .all(|(a, b)| a.mul(&dual(b, field)).is_one()))
}

/// Twist law: `γ_i(s + s₀, π) = γ_i(s, π·|det|^{c_i s₀})`, with `s₀ = k2/2` and
/// `c_i = 1` for `GL` and `r₁` of `Sp`/`U_odd`, `c_i = 1/2` otherwise.
pub fn twist_check(group: &GroupTag, d: &InducingDatum, psi: &AddChar, k2: i64) -> Result<bool> {
    let field = psi.field();
    let g = gamma_factors(group, d, psi)?;
    for (i, gi) in g.iter().enumerate() {
        let full = matches!(group, GroupTag::Gl(..))
            || (i == 0 && matches!(group, GroupTag::Sp(_) | GroupTag::UOdd(..)));
        let tw2 = if full {
            k2
        } else {
            if k2 % 2 != 0 {
                return Err(Error::Invalid(
                    "halved twist needs an integral shift".into(),
                ));
            }
            k2 / 2
        };
        let twisted = gamma_factors(group, &d.twist_all(tw2), psi)?;
        if shift_half(gi, field, k2) != twisted[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct `gcd` extraction of the normalized numerator of `∏ num_i / ∏ den_i`.
pub fn gcd_numerator(factors: &[RatFunc]) -> Result<crate::scalar::Poly> {
    let ctx = factors
        .first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?
        .ctx()
        .clone();
    let mut num = crate::scalar::Poly::one(&ctx);
    let mut den = crate::scalar::Poly::one(&ctx);
    for f in factors {
        num = &num * f.num();
        den = &den * f.den();
    }
    let g = num.gcd(&den)?;
    let (reduced, rem) = num.divrem(&g)?;
    if !rem.is_zero() {
        return Err(Error::Invariant("gcd does not divide".into()));
    }
    let low = reduced
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroArgument)?;
    let shifted = crate::scalar::Poly::new(&ctx, reduced.coeffs()[low..].to_vec());
    let c0 = shifted.coeffs()[0].inv()?;
    Ok(shifted.scale(&c0))
}

/// Smallest modulus of a pole of `l` in `Z`, or `∞` without poles.
pub fn min_pole_modulus(l: &RatFunc) -> f64 {
    crate::scalar::float::roots(&crate::scalar::float::poly_to_complex(l.den()))
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min)
}

/// A random character of the algebra attached to `group` of conductor at most `m`.
pub fn random_char(
    group: &GroupTag,
    base: &LocalField,
    m: usize,
    rng: &mut impl Rng,
) -> Result<EChar> {
    Ok(match group.algebra() {
        None => EChar::Field(MulChar::random_unitary(base, m, rng)?),
        Some(e) => match e.ext() {
            Some(ext) => EChar::Field(MulChar::random_unitary(ext, m, rng)?),
            None => EChar::Split(
                MulChar::random_unitary(base, m, rng)?,
                MulChar::random_unitary(base, m, rng)?,
            ),
        },
    })
}

fn random_blocks(
    group: &GroupTag,
    base: &LocalField,
    n: usize,
    m: usize,
    max_a: usize,
    max_u2: i64,
    rng: &mut impl Rng,
) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let a = rng.gen_range(1..=left.min(max_a.max(1)));
        let u2 = rng.gen_range(-max_u2..=max_u2);
        out.push(Block {
            chi: random_char(group, base, m, rng)?,
            u2,
            a,
        });
        left -= a;
    }
    Ok(out)
}

/// Random unitary inducing data with segments of length at most `max_a` and
/// twists `|u2| ≤ max_u2`; `ν′` is random for odd unitary groups.
pub fn random_datum(
    group: &GroupTag,
    base: &LocalField,
    m: usize,
    max_a: usize,
    max_u2: i64,
    rng: &mut impl Rng,
) -> Result<InducingDatum> {
    let blocks = random_blocks(group, base, group.degree(), m, max_a, max_u2, rng)?;
    let second = match group {
        GroupTag::Gl(_, n2) => random_blocks(group, base, *n2, m, max_a, max_u2, rng)?,
        _ => Vec::new(),
    };
    let nu1 = match group {
        GroupTag::UOdd(_, e) => Some(E1Char::restrict(&random_char(group, base, m, rng)?, e)?),
        _ => None,
    };
    Ok(InducingDatum {
        blocks,
        second,
        nu1,
    })
}
