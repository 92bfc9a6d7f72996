//! Rational functions of `Z = q^{-s}` in canonical coprime form.

use std::fmt;

use serde_json::{json, Value};

use super::cyclotomic::{Cyc, CycScalar};
use super::poly::Poly;
use crate::{Error, Result};

/// `coeff · Z^exp`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coeff: CycScalar,
    pub exp: i64,
}

impl Monomial {
    pub fn new(coeff: CycScalar, exp: i64) -> Self {
        Monomial { coeff, exp }
    }
    pub fn one(ctx: &Cyc) -> Self {
        Monomial {
            coeff: CycScalar::one(ctx),
            exp: 0,
        }
    }
    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.coeff.is_one()
    }
    pub fn mul(&self, other: &Self) -> Self {
        Monomial {
            coeff: &self.coeff * &other.coeff,
            exp: self.exp + other.exp,
        }
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(Monomial {
            coeff: self.coeff.inv()?,
            exp: -self.exp,
        })
    }
    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::monomial(self.coeff.clone(), self.exp)
    }
    pub fn to_json(&self) -> Value {
        json!({"coeff": self.coeff.to_json(), "exp": self.exp})
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·Z^{}", self.coeff, self.exp)
    }
}

/// A monomial factor, the normalized numerator `P` with `P(0) = 1`, and the
/// denominator `D` with `D(0) = 1`, so that `g = m · P / D`.
#[derive(Clone, Debug)]
pub struct NumeratorSplit {
    pub monomial: Monomial,
    pub numerator: Poly,
    pub denominator: Poly,
}

/// `num / den` with coprime parts and the lowest nonzero coefficient of `den` equal to 1.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den)?;
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        Self::normalized(n, d)
    }

    fn normalized(num: Poly, den: Poly) -> Result<Self> {
        let ctx = den.ctx().clone();
        if num.is_zero() {
            return Ok(Self::zero(&ctx));
        }
        let low = den.coeff(den.z_order());
        if low.is_one() {
            return Ok(RatFunc { num, den });
        }
        let inv = low.inv()?;
        Ok(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let ctx = p.ctx().clone();
        RatFunc {
            num: p,
            den: Poly::one(&ctx),
        }
    }
    pub fn zero(ctx: &Cyc) -> Self {
        RatFunc {
            num: Poly::zero(ctx),
            den: Poly::one(ctx),
        }
    }
    pub fn one(ctx: &Cyc) -> Self {
        RatFunc {
            num: Poly::one(ctx),
            den: Poly::one(ctx),
        }
    }
    pub fn constant(c: CycScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }
    /// `c · Z^k` for any integer `k`.
    pub fn monomial(c: CycScalar, k: i64) -> Self {
        let ctx = c.ctx().clone();
        if c.is_zero() {
            return Self::zero(&ctx);
        }
        if k >= 0 {
            RatFunc {
                num: Poly::monomial(c, k as usize),
                den: Poly::one(&ctx),
            }
        } else {
            RatFunc {
                num: Poly::constant(c),
                den: Poly::monomial(CycScalar::one(&ctx), (-k) as usize),
            }
        }
    }
    /// `1 / (1 - a·Z^k)`.
    pub fn inv_one_minus(a: &CycScalar, k: usize) -> Self {
        let ctx = a.ctx().clone();
        RatFunc::new(Poly::one(&ctx), Poly::one_minus(a, k)).expect("nonzero denominator")
    }

    pub fn ctx(&self) -> &Cyc {
        self.den.ctx()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx());
        }
        let g1 = self.num.gcd(&other.den).expect("gcd");
        let g2 = other.num.gcd(&self.den).expect("gcd");
        let a = self.num.div_exact(&g1).expect("exact");
        let d = other.den.div_exact(&g1).expect("exact");
        let c = other.num.div_exact(&g2).expect("exact");
        let b = self.den.div_exact(&g2).expect("exact");
        Self::normalized(&a * &c, &b * &d).expect("normalize")
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let g = self.den.gcd(&other.den).expect("gcd");
        let b1 = self.den.div_exact(&g).expect("exact");
        let d1 = other.den.div_exact(&g).expect("exact");
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        Self::new(num, &self.den * &d1).expect("nonzero denominator")
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.ctx());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `Z ↦ Z^d`.
    pub fn subst_power(&self, d: usize) -> Self {
        RatFunc {
            num: self.num.subst_power(d),
            den: self.den.subst_power(d),
        }
    }

    /// `Z ↦ Z^2`, i.e. `s ↦ 2s`.
    pub fn subst_double(&self) -> Self {
        self.subst_power(2)
    }

    /// `Z ↦ c·Z`, i.e. `s ↦ s + s₀` with `q^{-s₀} = c`.
    pub fn subst_scale(&self, c: &CycScalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Self::normalized(self.num.subst_scale(c), self.den.subst_scale(c))
    }

    /// `Z ↦ c / Z`; with `c = q^{-1}` this realizes `s ↦ 1 - s`.
    pub fn subst_dual(&self, c: &CycScalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let n = self.num.reverse_scaled(c);
        let d = self.den.reverse_scaled(c);
        let k = dd - dn;
        if k >= 0 {
            Self::new(n.shift(k as usize), d)
        } else {
            Self::new(n, d.shift((-k) as usize))
        }
    }

    pub fn eval(&self, z: &CycScalar) -> Result<CycScalar> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(z) * &d.inv()?)
    }

    /// The monomial `c·Z^k` when the function is one.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let a = self.num.z_order() as i64;
        let b = self.den.z_order() as i64;
        let c = self.num.coeff(a as usize);
        let d = self.den.coeff(b as usize);
        Some(Monomial {
            coeff: &c * &d.inv().ok()?,
            exp: a - b,
        })
    }

    /// Splits off the monomial part and normalizes numerator and denominator to constant term 1.
    pub fn numerator_normalized(&self) -> Result<NumeratorSplit> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let a = self.num.z_order();
        let b = self.den.z_order();
        let n1 = self.num.unshift(a);
        let d1 = self.den.unshift(b);
        let n0 = n1.coeff(0);
        let d0 = d1.coeff(0);
        let numerator = n1.scale(&n0.inv()?);
        let denominator = d1.scale(&d0.inv()?);
        Ok(NumeratorSplit {
            monomial: Monomial {
                coeff: &n0 * &d0.inv()?,
                exp: a as i64 - b as i64,
            },
            numerator,
            denominator,
        })
    }

    pub fn to_json(&self) -> Value {
        let enc = |p: &Poly| -> Vec<Value> { p.coeffs().iter().map(CycScalar::to_json).collect() };
        json!({"num": enc(&self.num), "den": enc(&self.den)})
    }

    pub fn from_json(ctx: &Cyc, v: &Value) -> Result<Self> {
        let dec = |key: &str| -> Result<Poly> {
            let arr = v
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Invalid(format!("rational function JSON: missing {key}")))?;
            let c = arr
                .iter()
                .map(|x| CycScalar::from_json(ctx, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::new(ctx, c))
        };
        Self::new(dec("num")?, dec("den")?)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (zeta_{})", self, self.ctx().order())
    }
}
