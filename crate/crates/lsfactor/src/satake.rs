//! Unramified L-factors from diagonal Satake parameters and the identities
//! relating them to local coefficients.

use serde_json::{json, Value};

use crate::abelian::dual;
use crate::characters::{hilbert90_extend, AddChar, EChar, MulChar};
use crate::localfield::{LocalField, QuadEtale, QuadKind};
use crate::lscoeff::{classical_coefficient, GroupTag, InducingDatum};
use crate::scalar::{Cyc, CycScalar, Poly, RatFunc};
use crate::{Error, Result};

/// Finite-dimensional representations of the dual group applied to a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Std,
    Tensor,
    Sym2,
    Ext2,
    Asai,
}

impl Rep {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "std" => Rep::Std,
            "tensor" => Rep::Tensor,
            "sym2" => Rep::Sym2,
            "ext2" => Rep::Ext2,
            "asai" => Rep::Asai,
            _ => return Err(Error::Invalid(format!("unknown representation {s}"))),
        })
    }
    pub fn name(self) -> &'static str {
        match self {
            Rep::Std => "std",
            Rep::Tensor => "tensor",
            Rep::Sym2 => "sym2",
            Rep::Ext2 => "ext2",
            Rep::Asai => "asai",
        }
    }
    /// Dimension of the representation on a class of size `n`.
    pub fn dim(self, n: usize) -> usize {
        match self {
            Rep::Std => n,
            Rep::Tensor | Rep::Asai => n * n,
            Rep::Sym2 => n * (n + 1) / 2,
            Rep::Ext2 => n * n.saturating_sub(1) / 2,
        }
    }
}

/// A diagonal class `(x, y, θ)`; `y` is used by `tensor` and `asai`.
#[derive(Clone, Debug)]
pub struct SatakeClass {
    pub x: Vec<CycScalar>,
    pub y: Option<Vec<CycScalar>>,
    pub theta: bool,
}

impl SatakeClass {
    pub fn new(x: Vec<CycScalar>) -> Self {
        SatakeClass {
            x,
            y: None,
            theta: false,
        }
    }
    pub fn pair(x: Vec<CycScalar>, y: Vec<CycScalar>, theta: bool) -> Self {
        SatakeClass {
            x,
            y: Some(y),
            theta,
        }
    }
    pub fn inverse(&self) -> Result<Self> {
        let inv = |v: &Vec<CycScalar>| v.iter().map(CycScalar::inv).collect::<Result<Vec<_>>>();
        Ok(SatakeClass {
            x: inv(&self.x)?,
            y: self.y.as_ref().map(inv).transpose()?,
            theta: self.theta,
        })
    }
    fn check(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(Error::Invalid("empty Satake class".into()));
        }
        if self
            .x
            .iter()
            .chain(self.y.iter().flatten())
            .any(CycScalar::is_zero)
        {
            return Err(Error::Invalid("Satake parameters must be nonzero".into()));
        }
        Ok(())
    }
    fn y_or_err(&self) -> Result<&Vec<CycScalar>> {
        let y = self
            .y
            .as_ref()
            .ok_or_else(|| Error::Invalid("representation needs y".into()))?;
        if y.len() != self.x.len() {
            return Err(Error::Invalid(format!(
                "x has {} entries, y has {}",
                self.x.len(),
                y.len()
            )));
        }
        Ok(y)
    }
    pub fn to_json(&self) -> Value {
        let v = |s: &[CycScalar]| s.iter().map(CycScalar::to_json).collect::<Vec<_>>();
        json!({"x": v(&self.x), "y": self.y.as_deref().map(v), "theta": self.theta})
    }
}

/// `∏ (1 - a Z^k)^{-1}` over the given `(a, k)`.
fn euler_product(ctx: &Cyc, eig: impl IntoIterator<Item = (CycScalar, usize)>) -> Result<RatFunc> {
    let mut den = Poly::one(ctx);
    for (a, k) in eig {
        den = &den * &Poly::one_minus(&a, k);
    }
    RatFunc::new(Poly::one(ctx), den)
}

/// The matrix of `(x, y, θ)` acting on `V ⊗ V`: `e_i ⊗ e_j ↦ x_i y_j e_j ⊗ e_i`
/// with `θ`, and `x_i y_j e_i ⊗ e_j` without.
pub fn asai_matrix(cls: &SatakeClass) -> Result<Vec<Vec<CycScalar>>> {
    let y = cls.y_or_err()?;
    let n = cls.x.len();
    let ctx = cls.x[0].ctx();
    let mut t = vec![vec![CycScalar::zero(ctx); n * n]; n * n];
    for (i, xi) in cls.x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            let src = i * n + j;
            let dst = if cls.theta { j * n + i } else { src };
            t[dst][src] = xi * yj;
        }
    }
    Ok(t)
}

/// `det(I - T Z)` by Faddeev–LeVerrier.
pub fn det_one_minus(t: &[Vec<CycScalar>]) -> Result<Poly> {
    let n = t.len();
    let ctx = t
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::Invalid("empty matrix".into()))?
        .ctx()
        .clone();
    let matmul = |a: &[Vec<CycScalar>], b: &[Vec<CycScalar>]| -> Vec<Vec<CycScalar>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .filter(|&k| !a[i][k].is_zero() && !b[k][j].is_zero())
                            .fold(CycScalar::zero(&ctx), |acc, k| {
                                &acc + &(&a[i][k] * &b[k][j])
                            })
                    })
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![CycScalar::one(&ctx)];
    let mut m: Vec<Vec<CycScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CycScalar::one(&ctx)
                    } else {
                        CycScalar::zero(&ctx)
                    }
                })
                .collect()
        })
        .collect();
    for k in 1..=n {
        let am = matmul(t, &m);
        let trace = (0..n).fold(CycScalar::zero(&ctx), |acc, i| &acc + &am[i][i]);
        let c = &(-&trace) * &CycScalar::from_frac(&ctx, 1, k as i64);
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if i == j {
                    &am[i][j] + &c
                } else {
                    am[i][j].clone()
                };
            }
        }
        coeffs.push(c);
    }
    Ok(Poly::new(&ctx, coeffs))
}

/// `L(s, π, ρ) = det(I - ρ(A) Z)^{-1}`.
pub fn unramified_l(cls: &SatakeClass, rep: Rep) -> Result<RatFunc> {
    cls.check()?;
    let ctx = cls.x[0].ctx().clone();
    let x = &cls.x;
    let n = x.len();
    match rep {
        Rep::Std => euler_product(&ctx, x.iter().map(|a| (a.clone(), 1))),
        Rep::Tensor => {
            let y = cls.y_or_err()?;
            euler_product(
                &ctx,
                x.iter().flat_map(|a| y.iter().map(move |b| (a * b, 1))),
            )
        }
        Rep::Sym2 => euler_product(
            &ctx,
            (0..n).flat_map(|i| (i..n).map(move |j| (&x[i] * &x[j], 1))),
        ),
        Rep::Ext2 => euler_product(
            &ctx,
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (&x[i] * &x[j], 1))),
        ),
        Rep::Asai => RatFunc::new(Poly::one(&ctx), det_one_minus(&asai_matrix(cls)?)?),
    }
}

/// `∏ (1 - x_i y_i Z) ∏_{i<j} (1 - x_i x_j y_i y_j Z²)`.
pub fn asai_closed_form(cls: &SatakeClass) -> Result<Poly> {
    let y = cls.y_or_err()?;
    let ctx = cls.x[0].ctx();
    let n = cls.x.len();
    let mut p = Poly::one(ctx);
    for i in 0..n {
        p = &p * &Poly::one_minus(&(&cls.x[i] * &y[i]), 1);
        for j in i + 1..n {
            p = &p * &Poly::one_minus(&(&(&cls.x[i] * &cls.x[j]) * &(&y[i] * &y[j])), 2);
        }
    }
    Ok(p)
}

fn w_of(chi: &MulChar) -> Result<CycScalar> {
    if !chi.is_unramified() {
        return Err(Error::Invalid(
            "ramified character at an unramified place".into(),
        ));
    }
    Ok(chi.w().clone())
}

fn w_pair(chi: &EChar) -> Result<(CycScalar, Option<CycScalar>)> {
    match chi {
        EChar::Field(c) => Ok((w_of(c)?, None)),
        EChar::Split(a, b) => Ok((w_of(a)?, Some(w_of(b)?))),
    }
}

fn flat(d: &InducingDatum) -> Vec<EChar> {
    d.blocks.iter().flat_map(|b| b.expand(true)).collect()
}

fn flat_second(d: &InducingDatum) -> Vec<EChar> {
    d.second.iter().flat_map(|b| b.expand(true)).collect()
}

fn unramified_algebra(e: &QuadEtale) -> Result<()> {
    if e.kind() == QuadKind::Ramified {
        return Err(Error::Invalid(
            "ramified quadratic algebra is not an unramified place".into(),
        ));
    }
    Ok(())
}

fn nu_of(d: &InducingDatum, e: &QuadEtale) -> Result<EChar> {
    let nu = match &d.nu1 {
        Some(n1) => hilbert90_extend(n1, e)?,
        None => EChar::trivial(e),
    };
    if !nu.is_unramified() {
        return Err(Error::Invalid(
            "ν must be unramified at an unramified place".into(),
        ));
    }
    Ok(nu)
}

/// `L(s, π, r_i)` for each `r_i`, from the Satake class of unramified data.
///
/// At inert places of unitary groups the class is `x = χ_i(ϖ)`, `y = 1` with `θ`,
/// and the `η`-twist of `r₂` negates `x`.
pub fn satake_l_factors(
    group: &GroupTag,
    d: &InducingDatum,
    field: &LocalField,
) -> Result<Vec<RatFunc>> {
    let ctx = field.cyc();
    let one = CycScalar::one(ctx);
    let xs = || -> Result<Vec<CycScalar>> { flat(d).iter().map(|c| Ok(w_pair(c)?.0)).collect() };
    Ok(match group {
        GroupTag::Gl(..) => {
            let y = flat_second(d)
                .iter()
                .map(|c| Ok(w_pair(c)?.0))
                .collect::<Result<Vec<_>>>()?;
            let x = xs()?;
            let l = euler_product(
                ctx,
                x.iter().flat_map(|a| y.iter().map(move |b| (a * b, 1))),
            )?;
            vec![l]
        }
        GroupTag::SoOdd(_) => vec![unramified_l(&SatakeClass::new(xs()?), Rep::Sym2)?],
        GroupTag::SoEven(_) => vec![unramified_l(&SatakeClass::new(xs()?), Rep::Ext2)?],
        GroupTag::Sp(n) => {
            let cls = SatakeClass::new(xs()?);
            let l1 = unramified_l(&cls, Rep::Std)?;
            if *n >= 2 {
                vec![l1, unramified_l(&cls, Rep::Ext2)?]
            } else {
                vec![l1]
            }
        }
        GroupTag::UEven(_, e) => {
            unramified_algebra(e)?;
            vec![unitary_asai(&flat(d), false, &one)?]
        }
        GroupTag::UOdd(_, e) => {
            unramified_algebra(e)?;
            let nu = nu_of(d, e)?;
            let chars = flat(d);
            let twisted: Vec<EChar> = chars.iter().map(|c| c.mul(&nu)).collect::<Result<_>>()?;
            let mut eig = Vec::new();
            for c in &twisted {
                match w_pair(c)? {
                    (a, Some(b)) => {
                        eig.push((a, 1));
                        eig.push((b, 1));
                    }
                    (a, None) => eig.push((a, 2)),
                }
            }
            vec![euler_product(ctx, eig)?, unitary_asai(&chars, true, &one)?]
        }
    })
}

/// Asai-type factor of unitary data: `tensor` of the two components when split,
/// `θ`-twisted class `(±w, 1)` when inert.
fn unitary_asai(chars: &[EChar], eta_twist: bool, one: &CycScalar) -> Result<RatFunc> {
    let pairs: Vec<(CycScalar, Option<CycScalar>)> =
        chars.iter().map(w_pair).collect::<Result<_>>()?;
    let split = pairs.iter().all(|p| p.1.is_some());
    if split {
        let x = pairs.iter().map(|p| p.0.clone()).collect();
        let y = pairs.iter().map(|p| p.1.clone().expect("split")).collect();
        unramified_l(&SatakeClass::pair(x, y, false), Rep::Tensor)
    } else {
        let x = pairs
            .iter()
            .map(|p| if eta_twist { -&p.0 } else { p.0.clone() })
            .collect();
        let y = vec![one.clone(); pairs.len()];
        unramified_l(&SatakeClass::pair(x, y, true), Rep::Asai)
    }
}

/// Both sides of `C L(s, r₁) L(2s, r₂) = L(1-s, π̃, r₁) L(1-2s, π̃, r₂)`.
pub fn unramified_identity_sides(
    group: &GroupTag,
    d: &InducingDatum,
    psi: &AddChar,
) -> Result<(RatFunc, RatFunc)> {
    if psi.level() != 0 {
        return Err(Error::Invalid(
            "unramified identity needs ψ of level 0".into(),
        ));
    }
    let field = psi.field();
    let ls = satake_l_factors(group, d, field)?;
    let dual_d = d.contragredient(group.algebra())?;
    let lds = satake_l_factors(group, &dual_d, field)?;
    let mut lhs = classical_coefficient(group, d, psi)?;
    let mut rhs = RatFunc::one(field.cyc());
    for (i, (l, ld)) in ls.iter().zip(&lds).enumerate() {
        let back = dual(ld, field);
        if i == 0 {
            lhs = lhs.mul(l);
            rhs = rhs.mul(&back);
        } else {
            lhs = lhs.mul(&l.subst_double());
            rhs = rhs.mul(&back.subst_double());
        }
    }
    Ok((lhs, rhs))
}

pub fn unramified_identity_check(
    group: &GroupTag,
    d: &InducingDatum,
    psi: &AddChar,
) -> Result<bool> {
    let (lhs, rhs) = unramified_identity_sides(group, d, psi)?;
    Ok(lhs == rhs)
}
