//! Locally constant compactly supported functions on `F` and their exact Fourier transforms.

use std::collections::BTreeMap;

use super::laurent::{LaurentElem, LocalField};
use crate::characters::AddChar;
use crate::scalar::CycScalar;
use crate::{Error, Result};

/// `Σ w · 1_{a + ϖ^level O}` over cosets of one common level, keyed by the
/// representative `a` truncated below `level`.
#[derive(Clone, Debug)]
pub struct StepFunction {
    level: i64,
    cells: BTreeMap<LaurentElem, CycScalar>,
}

impl StepFunction {
    pub fn zero(level: i64) -> Self {
        StepFunction {
            level,
            cells: BTreeMap::new(),
        }
    }
    /// `1_{a + p^j}`.
    pub fn indicator(field: &LocalField, a: &LaurentElem, j: i64) -> Self {
        let mut cells = BTreeMap::new();
        cells.insert(a.truncate(j), CycScalar::one(field.cyc()));
        StepFunction { level: j, cells }
    }
    pub fn level(&self) -> i64 {
        self.level
    }
    pub fn cells(&self) -> impl Iterator<Item = (&LaurentElem, &CycScalar)> {
        self.cells.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.cells.values().all(CycScalar::is_zero)
    }
    /// Smallest valuation occurring in the support, or `level` for zero.
    pub fn support_bound(&self) -> i64 {
        self.cells
            .keys()
            .map(|a| a.val().unwrap_or(self.level))
            .min()
            .unwrap_or(self.level)
            .min(self.level)
    }

    /// Re-expresses the function on cosets of level `j ≥ level`.
    pub fn refine(&self, field: &LocalField, j: i64) -> Self {
        if j <= self.level {
            return self.clone();
        }
        let q = field.q() as usize;
        let width = (j - self.level) as u32;
        let mut cells = BTreeMap::new();
        for (a, w) in &self.cells {
            for k in 0..q.pow(width) {
                let mut idx = k;
                let mut c = Vec::with_capacity(width as usize);
                for _ in 0..width {
                    c.push((idx % q) as u32);
                    idx /= q;
                }
                let rep = field.add(a, &LaurentElem::new(self.level, c));
                cells.insert(rep, w.clone());
            }
        }
        StepFunction { level: j, cells }
    }

    pub fn add(&self, field: &LocalField, other: &Self) -> Self {
        let j = self.level.max(other.level);
        let mut a = self.refine(field, j);
        let b = other.refine(field, j);
        for (k, w) in b.cells {
            let e = a
                .cells
                .entry(k)
                .or_insert_with(|| CycScalar::zero(field.cyc()));
            *e = &*e + &w;
        }
        a.cells.retain(|_, w| !w.is_zero());
        a
    }
    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut cells: BTreeMap<LaurentElem, CycScalar> =
            self.cells.iter().map(|(k, w)| (k.clone(), w * c)).collect();
        cells.retain(|_, w| !w.is_zero());
        StepFunction {
            level: self.level,
            cells,
        }
    }
    pub fn eval(&self, x: &LaurentElem) -> Option<&CycScalar> {
        self.cells.get(&x.truncate(self.level))
    }
    /// Exact equality as functions.
    pub fn equals(&self, field: &LocalField, other: &Self) -> bool {
        let diff = self.add(field, &other.scale(&-CycScalar::one(field.cyc())));
        diff.is_zero()
    }

    /// `f^c(x) = f(cx)`.
    pub fn dilate(&self, field: &LocalField, c: &LaurentElem) -> Result<Self> {
        let v = c.val().ok_or(Error::ZeroArgument)?;
        let level = self.level - v;
        let mut cells = BTreeMap::new();
        for (a, w) in &self.cells {
            let rep = if a.is_zero() {
                LaurentElem::zero()
            } else {
                let need = level - a.val().expect("nonzero");
                let cinv = field.inv_mod(c, need.max(0))?;
                field.mul_trunc(&cinv, a, level)
            };
            cells.insert(rep, w.clone());
        }
        Ok(StepFunction { level, cells })
    }

    /// `F_ψ(f)(x) = ∫ f(y) ψ(xy) dμ_ψ(y)`, exactly.
    pub fn fourier(&self, field: &LocalField, psi: &AddChar) -> Self {
        let l = psi.level();
        let ctx = field.cyc();
        let f = field.f() as i64;
        let lo = l - self.level;
        let hi = l - self.support_bound();
        let width = (hi - lo).max(0) as u32;
        let q = field.q() as usize;
        let mut cells = BTreeMap::new();
        for k in 0..q.pow(width) {
            let mut idx = k;
            let mut c = Vec::with_capacity(width as usize);
            for _ in 0..width {
                c.push((idx % q) as u32);
                idx /= q;
            }
            let x = LaurentElem::new(lo, c);
            let mut total = CycScalar::zero(ctx);
            for (a, w) in &self.cells {
                let vol = CycScalar::sqrt_p_pow(ctx, f * (l - 2 * self.level));
                let chi = psi.eval(&field.mul(a, &x));
                total = &total + &(&(w * &vol) * &chi);
            }
            if !total.is_zero() {
                cells.insert(x, total);
            }
        }
        StepFunction { level: hi, cells }
    }
}
