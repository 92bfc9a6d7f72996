//! Dense univariate polynomials in `Z` over a cyclotomic field.

use std::fmt;

use super::cyclotomic::{mul_mod, pow_mod, Cyc, CycScalar, Residue};
use crate::{Error, Result};

/// Ascending coefficient vector with trailing zeros stripped.
#[derive(Clone)]
pub struct Poly {
    ctx: Cyc,
    c: Vec<CycScalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn new(ctx: &Cyc, mut c: Vec<CycScalar>) -> Self {
        while c.last().is_some_and(CycScalar::is_zero) {
            c.pop();
        }
        Poly {
            ctx: ctx.clone(),
            c,
        }
    }
    pub fn zero(ctx: &Cyc) -> Self {
        Poly {
            ctx: ctx.clone(),
            c: Vec::new(),
        }
    }
    pub fn one(ctx: &Cyc) -> Self {
        Self::constant(CycScalar::one(ctx))
    }
    pub fn constant(c: CycScalar) -> Self {
        let ctx = c.ctx().clone();
        Self::new(&ctx, vec![c])
    }
    /// `c·Z^k`.
    pub fn monomial(c: CycScalar, k: usize) -> Self {
        let ctx = c.ctx().clone();
        let mut v = vec![CycScalar::zero(&ctx); k];
        v.push(c);
        Self::new(&ctx, v)
    }
    /// `1 - a·Z^k`.
    pub fn one_minus(a: &CycScalar, k: usize) -> Self {
        let ctx = a.ctx();
        &Self::one(ctx) - &Self::monomial(a.clone(), k)
    }
    /// `Z`.
    pub fn var(ctx: &Cyc) -> Self {
        Self::monomial(CycScalar::one(ctx), 1)
    }

    pub fn ctx(&self) -> &Cyc {
        &self.ctx
    }
    pub fn coeffs(&self) -> &[CycScalar] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> CycScalar {
        self.c
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycScalar::zero(&self.ctx))
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> Option<&CycScalar> {
        self.c.last()
    }
    /// Largest `k` with `Z^k` dividing the polynomial (0 for the zero polynomial).
    pub fn z_order(&self) -> usize {
        self.c.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }
    /// `true` when exactly one coefficient is nonzero.
    pub fn is_monomial(&self) -> bool {
        self.c.iter().filter(|c| !c.is_zero()).count() == 1
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        Self::new(&self.ctx, self.c.iter().map(|x| x * s).collect())
    }

    /// Multiplication by `Z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![CycScalar::zero(&self.ctx); k];
        v.extend(self.c.iter().cloned());
        Self::new(&self.ctx, v)
    }

    /// Exact division by `Z^k`; panics if `Z^k` does not divide.
    pub fn unshift(&self, k: usize) -> Self {
        assert!(
            self.is_zero() || self.z_order() >= k,
            "Z^{k} does not divide"
        );
        Self::new(&self.ctx, self.c.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, z: &CycScalar) -> CycScalar {
        let mut acc = CycScalar::zero(&self.ctx);
        for c in self.c.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// `P(Z^d)`.
    pub fn subst_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        if d == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut v = vec![CycScalar::zero(&self.ctx); (self.c.len() - 1) * d + 1];
        for (i, x) in self.c.iter().enumerate() {
            v[i * d] = x.clone();
        }
        Self::new(&self.ctx, v)
    }

    /// `P(c·Z)`.
    pub fn subst_scale(&self, s: &CycScalar) -> Self {
        let mut pw = CycScalar::one(&self.ctx);
        let mut v = Vec::with_capacity(self.c.len());
        for x in &self.c {
            v.push(x * &pw);
            pw = &pw * s;
        }
        Self::new(&self.ctx, v)
    }

    /// `Z^{deg}·P(c/Z)`, the reversed polynomial with powers of `c`.
    pub fn reverse_scaled(&self, s: &CycScalar) -> Self {
        let d = match self.degree() {
            Some(d) => d,
            None => return self.clone(),
        };
        let mut v = vec![CycScalar::zero(&self.ctx); d + 1];
        let mut pw = CycScalar::one(&self.ctx);
        for (i, x) in self.c.iter().enumerate() {
            v[d - i] = x * &pw;
            pw = &pw * s;
        }
        Self::new(&self.ctx, v)
    }

    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        let lead = b.lead().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        let db = b.c.len() - 1;
        if self.c.len() <= db {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut rem = self.c.clone();
        let mut quo = vec![CycScalar::zero(&self.ctx); self.c.len() - db];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + db] * &inv;
            if !c.is_zero() {
                for (j, y) in b.c.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &(&c * y);
                }
            }
            quo[i] = c;
        }
        rem.truncate(db);
        Ok((Self::new(&self.ctx, quo), Self::new(&self.ctx, rem)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        if b.is_one() {
            return Ok(self.clone());
        }
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn make_monic(&self) -> Result<Self> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) if l.is_one() => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }

    /// Image in `F_ℓ[Z]`, or `None` when a denominator or the leading coefficient vanishes.
    fn reduce(&self, r: &Residue) -> Option<Vec<u64>> {
        let v: Option<Vec<u64>> = self.c.iter().map(|x| x.reduce(r)).collect();
        v.filter(|v| v.last().is_some_and(|&l| l != 0))
    }

    /// An upper bound for the degree of `gcd(self, other)` from a reduction modulo a
    /// prime where both degrees are preserved.
    pub fn gcd_degree_bound(&self, other: &Self) -> Option<usize> {
        self.ctx.residues().iter().find_map(|r| {
            let a = self.reduce(r)?;
            let b = other.reduce(r)?;
            Some(gcd_mod(a, b, r.ell).len() - 1)
        })
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return other.make_monic();
        }
        if other.is_zero() {
            return self.make_monic();
        }
        let k = self.z_order().min(other.z_order());
        let mut a = self.unshift(self.z_order());
        let mut b = other.unshift(other.z_order());
        if a.is_constant() || b.is_constant() {
            return Ok(Self::monomial(CycScalar::one(&self.ctx), k));
        }
        if a.gcd_degree_bound(&b) == Some(0) {
            return Ok(Self::monomial(CycScalar::one(&self.ctx), k));
        }
        if a.c.len() < b.c.len() {
            std::mem::swap(&mut a, &mut b);
        }
        b = b.make_monic()?;
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r.make_monic()?;
        }
        Ok(a.make_monic()?.shift(k))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl std::ops::Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let v = (0..n)
            .map(|i| match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.ctx, v)
    }
}

impl std::ops::Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.ctx, self.c.iter().map(|x| -x).collect())
    }
}

impl std::ops::Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut v = vec![CycScalar::zero(&self.ctx); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        Poly::new(&self.ctx, v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let s = c.to_string();
                let s = s.split(" [").next().unwrap_or("").to_string();
                match i {
                    0 => format!("({s})"),
                    1 => format!("({s})Z"),
                    _ => format!("({s})Z^{i}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, ell: u64) -> Vec<u64> {
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().expect("nonzero"), ell - 2, ell);
        let db = b.len() - 1;
        while a.len() > db {
            let c = mul_mod(*a.last().expect("nonzero"), inv, ell);
            let off = a.len() - 1 - db;
            for (j, y) in b.iter().enumerate() {
                a[off + j] = (a[off + j] + ell - mul_mod(c, *y, ell)) % ell;
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}
