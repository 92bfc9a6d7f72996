//! Laurent polynomials over a finite field, viewed inside `F_Q((ϖ))`.

use rand::Rng;
use serde_json::{json, Value};

use super::gf::{FiniteField, Gf};
use crate::scalar::{Cyc, CycContext};
use crate::{Error, Result};

/// A finite Laurent polynomial `Σ coeffs[i] ϖ^{val+i}` with nonzero leading
/// coefficient; zero has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentElem {
    val: i64,
    coeffs: Vec<u32>,
}

impl LaurentElem {
    pub fn zero() -> Self {
        LaurentElem {
            val: 0,
            coeffs: Vec::new(),
        }
    }
    pub fn new(val: i64, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => Self::zero(),
            Some(k) => LaurentElem {
                val: val + k as i64,
                coeffs: coeffs.split_off(k),
            },
        }
    }
    /// `c·ϖ^k`.
    pub fn monomial(c: u32, k: i64) -> Self {
        Self::new(k, vec![c])
    }
    pub fn one() -> Self {
        Self::monomial(1, 0)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Valuation; `None` for zero.
    pub fn val(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }
    /// Coefficients starting at the valuation.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
    /// Coefficient of `ϖ^k`.
    pub fn coeff(&self, k: i64) -> u32 {
        if self.is_zero() || k < self.val {
            return 0;
        }
        self.coeffs
            .get((k - self.val) as usize)
            .copied()
            .unwrap_or(0)
    }
    pub fn leading(&self) -> Option<u32> {
        self.coeffs.first().copied()
    }
    /// Largest exponent present.
    pub fn top(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.val + self.coeffs.len() as i64 - 1)
    }
    /// The unit `ϖ^{-v} x`.
    pub fn unit_part(&self) -> Self {
        LaurentElem {
            val: 0,
            coeffs: self.coeffs.clone(),
        }
    }
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentElem {
            val: self.val + k,
            coeffs: self.coeffs.clone(),
        }
    }
    /// Drops all terms of exponent `≥ k`.
    pub fn truncate(&self, k: i64) -> Self {
        if self.is_zero() || k <= self.val {
            return Self::zero();
        }
        let keep = ((k - self.val) as usize).min(self.coeffs.len());
        Self::new(self.val, self.coeffs[..keep].to_vec())
    }
    /// Applies an index map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|&c| f(c)).collect())
    }
    /// Replaces `ϖ^k` by `ϖ^{dk}`.
    pub fn subst_power(&self, d: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let d = d as usize;
        let mut c = vec![0u32; (self.coeffs.len() - 1) * d + 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[i * d] = x;
        }
        Self::new(self.val * d as i64, c)
    }
    /// Inverse of `subst_power(d)`; fails unless only exponents divisible by `d` occur.
    pub fn unsubst_power(&self, d: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let top = self.top().expect("nonzero");
        let lo = self.val.div_euclid(d);
        let mut c = Vec::new();
        for k in self.val..=top {
            let x = self.coeff(k);
            if k.rem_euclid(d) != 0 {
                if x != 0 {
                    return Err(Error::Invariant(format!(
                        "exponent {k} not divisible by {d}"
                    )));
                }
                continue;
            }
            c.push(x);
        }
        Ok(Self::new(
            if self.val.rem_euclid(d) == 0 {
                lo
            } else {
                lo + 1
            },
            c,
        ))
    }

    pub fn to_json(&self) -> Value {
        json!({"val": self.val, "coeffs": self.coeffs})
    }
    pub fn from_json(v: &Value) -> Result<Self> {
        let val = v
            .get("val")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Invalid("element JSON: val".into()))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("element JSON: coeffs".into()))?
            .iter()
            .map(|c| {
                c.as_u64()
                    .map(|x| x as u32)
                    .ok_or_else(|| Error::Invalid("element JSON: coefficient".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(val, coeffs))
    }
}

/// The local field `F_Q((ϖ))` with residue field `res`, coefficient context
/// `cyc`, and a precision bound for truncated inverses.
#[derive(Clone, Debug)]
pub struct LocalField {
    res: Gf,
    cyc: Cyc,
    prec: usize,
}

impl LocalField {
    pub fn new(res: Gf, cyc: Cyc, prec: usize) -> Result<Self> {
        if cyc.p() != res.p() as u64 {
            return Err(Error::Invalid(
                "residue characteristic differs from coefficient context".into(),
            ));
        }
        Ok(LocalField { res, cyc, prec })
    }
    /// `F_q((t))` with a coefficient context admitting every character of conductor
    /// at most `m` and the additional root-of-unity orders `extra`.
    pub fn for_levels(q: u64, m: usize, extra: &[u64], prec: usize) -> Result<Self> {
        let res = FiniteField::of_order(q)?;
        let mut orders = vec![unit_exponent(q, m)];
        orders.extend_from_slice(extra);
        let cyc = CycContext::new(q, &orders)?;
        Self::new(res, cyc, prec)
    }
    pub fn res(&self) -> &Gf {
        &self.res
    }
    pub fn cyc(&self) -> &Cyc {
        &self.cyc
    }
    pub fn prec(&self) -> usize {
        self.prec
    }
    /// Residue field size `Q`.
    pub fn q(&self) -> u64 {
        self.res.q() as u64
    }
    /// Exponent of `p` in `Q`.
    pub fn f(&self) -> u32 {
        self.res.n()
    }
    pub fn p(&self) -> u64 {
        self.res.p() as u64
    }

    pub fn add(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let lo = a.val.min(b.val);
        let hi = a.top().expect("nonzero").max(b.top().expect("nonzero"));
        let c = (lo..=hi)
            .map(|k| self.res.add(a.coeff(k), b.coeff(k)))
            .collect();
        LaurentElem::new(lo, c)
    }
    pub fn neg(&self, a: &LaurentElem) -> LaurentElem {
        a.map_coeffs(|c| self.res.neg(c))
    }
    pub fn sub(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        self.add(a, &self.neg(b))
    }
    pub fn mul(&self, a: &LaurentElem, b: &LaurentElem) -> LaurentElem {
        if a.is_zero() || b.is_zero() {
            return LaurentElem::zero();
        }
        let mut c = vec![0u32; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                c[i + j] = self.res.add(c[i + j], self.res.mul(x, y));
            }
        }
        LaurentElem::new(a.val + b.val, c)
    }
    /// Product truncated to exponents `< k`.
    pub fn mul_trunc(&self, a: &LaurentElem, b: &LaurentElem, k: i64) -> LaurentElem {
        if a.is_zero() || b.is_zero() {
            return LaurentElem::zero();
        }
        let base = a.val + b.val;
        if k <= base {
            return LaurentElem::zero();
        }
        let n = ((k - base) as usize).min(a.coeffs.len() + b.coeffs.len() - 1);
        let mut c = vec![0u32; n];
        for (i, &x) in a.coeffs.iter().enumerate().take(n) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = self.res.add(c[i + j], self.res.mul(x, y));
            }
        }
        LaurentElem::new(base, c)
    }
    pub fn scale(&self, a: &LaurentElem, c: u32) -> LaurentElem {
        a.map_coeffs(|x| self.res.mul(x, c))
    }
    pub fn pow(&self, a: &LaurentElem, e: u64) -> LaurentElem {
        let mut acc = LaurentElem::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
    /// Inverse of a unit modulo `ϖ^k`.
    pub fn inv_unit_mod(&self, u: &LaurentElem, k: usize) -> Result<LaurentElem> {
        if u.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if u.val != 0 {
            return Err(Error::Invalid("inverse of a non-unit".into()));
        }
        if k > self.prec {
            return Err(Error::PrecisionExhausted {
                needed: k,
                window: self.prec,
            });
        }
        let c0inv = self.res.inv(u.coeffs[0])?;
        let mut inv = vec![0u32; k];
        for n in 0..k {
            let mut s = if n == 0 { 1 } else { 0 };
            for i in 1..=n {
                s = self.res.sub(s, self.res.mul(u.coeff(i as i64), inv[n - i]));
            }
            inv[n] = self.res.mul(s, c0inv);
        }
        Ok(LaurentElem::new(0, inv))
    }
    /// `x^{-1}` with all terms of exponent `< k` exact.
    pub fn inv_mod(&self, x: &LaurentElem, k: i64) -> Result<LaurentElem> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        let need = k + v;
        if need <= 0 {
            return Ok(LaurentElem::zero());
        }
        Ok(self.inv_unit_mod(&x.unit_part(), need as usize)?.shift(-v))
    }
    /// Frobenius `c ↦ c^{p^k}` on every coefficient.
    pub fn frob(&self, a: &LaurentElem, k: u32) -> LaurentElem {
        a.map_coeffs(|c| self.res.frob(c, k))
    }
    /// `ϖ ↦ -ϖ`.
    pub fn negate_uniformizer(&self, a: &LaurentElem) -> LaurentElem {
        if a.is_zero() {
            return a.clone();
        }
        let c = a
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if (a.val + i as i64).rem_euclid(2) == 1 {
                    self.res.neg(x)
                } else {
                    x
                }
            })
            .collect();
        LaurentElem::new(a.val, c)
    }

    /// Index of `x` modulo `1 + ϖ^m`: the first `m` unit-part coefficients read in base `Q`.
    pub fn unit_index(&self, x: &LaurentElem, m: usize) -> usize {
        let q = self.q() as usize;
        let mut idx = 0usize;
        for i in (0..m).rev() {
            idx = idx * q + x.coeffs.get(i).copied().unwrap_or(0) as usize;
        }
        idx
    }
    /// The unit with the given index modulo `ϖ^m`; `None` when the constant term vanishes.
    pub fn unit_from_index(&self, mut idx: usize, m: usize) -> Option<LaurentElem> {
        let q = self.q() as usize;
        let mut c = Vec::with_capacity(m);
        for _ in 0..m {
            c.push((idx % q) as u32);
            idx /= q;
        }
        if m > 0 && c[0] == 0 {
            return None;
        }
        if m == 0 {
            return Some(LaurentElem::one());
        }
        Some(LaurentElem::new(0, c))
    }
    /// Product of unit indices modulo `ϖ^m`.
    pub fn mul_index(&self, a: usize, b: usize, m: usize) -> usize {
        let x = self.unit_from_index(a, m).expect("unit index");
        let y = self.unit_from_index(b, m).expect("unit index");
        self.unit_index(&self.mul_trunc(&x, &y, m as i64), m)
    }
    /// Exponent of `(O/ϖ^m)^×`.
    pub fn unit_group_exponent(&self, m: usize) -> u64 {
        let mut e = if m == 0 { 1 } else { self.q() - 1 };
        let p = self.p();
        let mut pk = 1usize;
        while m > 1 && pk < m {
            pk *= p as usize;
            e *= p;
        }
        e
    }

    pub fn random_unit(&self, rng: &mut impl Rng, len: usize) -> LaurentElem {
        let q = self.res.q();
        let mut c: Vec<u32> = (0..len.max(1)).map(|_| rng.gen_range(0..q)).collect();
        c[0] = rng.gen_range(1..q);
        LaurentElem::new(0, c)
    }
    pub fn random_nonzero(
        &self,
        rng: &mut impl Rng,
        vmin: i64,
        vmax: i64,
        len: usize,
    ) -> LaurentElem {
        let v = rng.gen_range(vmin..=vmax);
        self.random_unit(rng, len).shift(v)
    }
}

/// Exponent of `(F_q[[t]]/t^m)^×`.
pub fn unit_exponent(q: u64, m: usize) -> u64 {
    if m == 0 {
        return 1;
    }
    let (p, _) = crate::scalar::prime_power(q).expect("prime power");
    let mut e = q - 1;
    let mut pk = 1usize;
    while pk < m {
        pk *= p as usize;
        e *= p;
    }
    e
}
