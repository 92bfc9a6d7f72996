//! The cyclotomic field `Q(ζ_M)` with a designated positive square root of `q`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(M)-1}` as integer
//! numerators over one positive common denominator, always in lowest terms, so
//! equality is structural.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::{Error, Result};

/// Shared handle to a cyclotomic context.
pub type Cyc = Arc<CycContext>;

/// The ambient field `Q(ζ_M)` together with the prime power `q = p^f`.
pub struct CycContext {
    order: usize,
    phi: usize,
    p: u64,
    f: u32,
    cyclo: Vec<i64>,
    powers: Vec<Vec<i64>>,
    sqrt_p: Vec<i64>,
    residues: OnceLock<Vec<Residue>>,
}

/// A prime `ℓ ≡ 1 mod M` with the image `z` of `ζ_M` in `F_ℓ`.
#[derive(Clone, Copy, Debug)]
pub struct Residue {
    pub ell: u64,
    pub zeta: u64,
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn find_residues(m: u64, count: usize) -> Vec<Residue> {
    let factors = prime_factors(m);
    let mut out = Vec::new();
    let mut k = (1u64 << 61) / m;
    while out.len() < count {
        let ell = k * m + 1;
        k -= 1;
        if !is_prime_u64(ell) {
            continue;
        }
        for g in 2..ell {
            let z = pow_mod(g, (ell - 1) / m, ell);
            if factors.iter().all(|&p| pow_mod(z, m / p, ell) != 1) {
                out.push(Residue { ell, zeta: z });
                break;
            }
        }
    }
    out
}

fn registry() -> &'static Mutex<HashMap<(usize, u64), Cyc>> {
    static REG: OnceLock<Mutex<HashMap<(usize, u64), Cyc>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Splits `q` as `p^f` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut r = q;
    let mut f = 0;
    while r.is_multiple_of(p) {
        r /= p;
        f += 1;
    }
    (r == 1).then_some((p, f))
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

fn poly_divexact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut out = vec![0i128; num.len() - dn];
    for i in (0..out.len()).rev() {
        let c = rem[i + dn] / den[dn];
        out[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    out
}

fn cyclotomic_poly(m: usize, memo: &mut HashMap<usize, Vec<i128>>) -> Vec<i128> {
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d, memo);
            num = poly_divexact(&num, &phi_d);
        }
    }
    memo.insert(m, num.clone());
    num
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

impl CycContext {
    /// Smallest admissible context for `q`: `M = lcm(4p, q-1, extra orders)`.
    pub fn new(q: u64, extra_orders: &[u64]) -> Result<Cyc> {
        let (p, _) =
            prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        let mut m = lcm(4 * p, q - 1);
        for &e in extra_orders {
            if e == 0 {
                return Err(Error::Invalid("zero order requested".into()));
            }
            m = lcm(m, e);
        }
        Self::with_order(q, m as usize)
    }

    /// Context of a prescribed order `M`, which must be divisible by `4p` and `q-1`.
    pub fn with_order(q: u64, m: usize) -> Result<Cyc> {
        let (p, f) =
            prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        if !(m as u64).is_multiple_of(4 * p) || !(m as u64).is_multiple_of(q - 1) {
            return Err(Error::Invalid(format!(
                "order {m} must be divisible by 4p and q-1 for q={q}"
            )));
        }
        let mut reg = registry().lock().expect("cyclotomic registry poisoned");
        if let Some(c) = reg.get(&(m, q)) {
            return Ok(c.clone());
        }
        let ctx = Arc::new(Self::build(m, p, f));
        reg.insert((m, q), ctx.clone());
        Ok(ctx)
    }

    fn build(m: usize, p: u64, f: u32) -> Self {
        let mut memo = HashMap::new();
        let cyclo: Vec<i64> = cyclotomic_poly(m, &mut memo)
            .into_iter()
            .map(|c| c as i64)
            .collect();
        let phi = cyclo.len() - 1;
        let mut powers = Vec::with_capacity(m);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1] - top * cyclo[j];
            }
            cur[0] = -top * cyclo[0];
        }
        let mut sqrt_p = vec![0i64; phi];
        if p == 2 {
            for k in [m / 8, m - m / 8] {
                for (s, c) in sqrt_p.iter_mut().zip(&powers[k]) {
                    *s += c;
                }
            }
        } else {
            let step = m / p as usize;
            let shift = if p % 4 == 1 { 0 } else { 3 * m / 4 };
            for a in 1..p {
                let sign = legendre(a, p);
                let k = (a as usize * step + shift) % m;
                for (s, c) in sqrt_p.iter_mut().zip(&powers[k]) {
                    *s += sign * c;
                }
            }
        }
        CycContext {
            order: m,
            phi,
            p,
            f,
            cyclo,
            powers,
            sqrt_p,
            residues: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }
    /// Primes `ℓ ≡ 1 mod M` near `2^61` with a primitive `M`-th root of unity in `F_ℓ`.
    pub fn residues(&self) -> &[Residue] {
        self.residues
            .get_or_init(|| find_residues(self.order as u64, 3))
    }
    pub fn phi(&self) -> usize {
        self.phi
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }
    /// Coefficients of the `M`-th cyclotomic polynomial, ascending.
    pub fn cyclotomic(&self) -> &[i64] {
        &self.cyclo
    }
}

fn same_ctx(a: &Cyc, b: &Cyc) -> bool {
    Arc::ptr_eq(a, b) || (a.order == b.order && a.p == b.p && a.f == b.f)
}

/// An element of `Q(ζ_M)`.
#[derive(Clone)]
pub struct CycScalar {
    ctx: Cyc,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.den == other.den && self.num == other.num
    }
}
impl Eq for CycScalar {}

impl std::hash::Hash for CycScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

fn to_small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|c| c.to_i64()).collect()
}

impl CycScalar {
    fn from_parts(ctx: &Cyc, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return CycScalar {
                ctx: ctx.clone(),
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        CycScalar {
            ctx: ctx.clone(),
            num,
            den,
        }
    }

    fn from_small(ctx: &Cyc, v: &[i128]) -> Self {
        Self::from_parts(
            ctx,
            v.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
        )
    }

    pub fn zero(ctx: &Cyc) -> Self {
        CycScalar {
            ctx: ctx.clone(),
            num: Vec::new(),
            den: BigInt::one(),
        }
    }
    pub fn one(ctx: &Cyc) -> Self {
        Self::from_int(ctx, 1)
    }
    pub fn from_int(ctx: &Cyc, n: i64) -> Self {
        Self::from_parts(ctx, vec![BigInt::from(n)], BigInt::one())
    }
    pub fn from_bigint(ctx: &Cyc, n: BigInt) -> Self {
        Self::from_parts(ctx, vec![n], BigInt::one())
    }
    pub fn from_rational(ctx: &Cyc, r: &BigRational) -> Self {
        Self::from_parts(ctx, vec![r.numer().clone()], r.denom().clone())
    }
    pub fn from_frac(ctx: &Cyc, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_parts(ctx, vec![BigInt::from(n)], BigInt::from(d))
    }

    /// `ζ_M^k`.
    pub fn root_of_unity(ctx: &Cyc, k: i64) -> Self {
        let m = ctx.order as i64;
        let idx = k.rem_euclid(m) as usize;
        let v: Vec<i128> = ctx.powers[idx].iter().map(|&c| c as i128).collect();
        Self::from_small(ctx, &v)
    }

    /// `ζ_n^k`, failing when `n` does not divide `M`.
    pub fn root_of_unity_of_order(ctx: &Cyc, n: u64, k: i64) -> Result<Self> {
        if n == 0 || !(ctx.order as u64).is_multiple_of(n) {
            return Err(Error::OrderOverflow {
                order: n,
                modulus: ctx.order,
            });
        }
        Ok(Self::root_of_unity(ctx, k * (ctx.order as u64 / n) as i64))
    }

    /// `Σ_k counts[k] ζ_M^k`; `counts` has length `M`.
    pub fn from_root_counts(ctx: &Cyc, counts: &[i64]) -> Self {
        assert_eq!(
            counts.len(),
            ctx.order,
            "root count vector has wrong length"
        );
        let mut acc = vec![0i128; ctx.phi];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &b) in acc.iter_mut().zip(&ctx.powers[k]) {
                    *a += c as i128 * b as i128;
                }
            }
        }
        Self::from_small(ctx, &acc)
    }

    /// The positive square root of `p`.
    pub fn sqrt_p(ctx: &Cyc) -> Self {
        let v: Vec<i128> = ctx.sqrt_p.iter().map(|&c| c as i128).collect();
        Self::from_small(ctx, &v)
    }

    /// `√p^e` for any integer `e`.
    pub fn sqrt_p_pow(ctx: &Cyc, e: i64) -> Self {
        let half = e.div_euclid(2);
        let p = BigInt::from(ctx.p);
        let r = if half >= 0 {
            BigRational::from_integer(num_traits::pow(p, half as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(p, (-half) as usize))
        };
        let base = Self::from_rational(ctx, &r);
        if e.rem_euclid(2) == 1 {
            &base * &Self::sqrt_p(ctx)
        } else {
            base
        }
    }

    /// The designated square root of `q`.
    pub fn sqrt_q(ctx: &Cyc) -> Self {
        Self::sqrt_p_pow(ctx, ctx.f as i64)
    }

    pub fn ctx(&self) -> &Cyc {
        &self.ctx
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Image under `ζ ↦ r.zeta` in `F_ℓ`, or `None` when `ℓ` divides the denominator.
    pub fn reduce(&self, r: &Residue) -> Option<u64> {
        let ell = BigInt::from(r.ell);
        let red = |x: &BigInt| x.mod_floor(&ell).to_u64().expect("reduced");
        let d = red(&self.den);
        if d == 0 {
            return None;
        }
        let mut acc = 0u64;
        let mut pw = 1u64;
        for n in &self.num {
            acc = (acc + mul_mod(red(n), pw, r.ell)) % r.ell;
            pw = mul_mod(pw, r.zeta, r.ell);
        }
        Some(mul_mod(acc, pow_mod(d, r.ell - 2, r.ell), r.ell))
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Power-basis coefficients, padded to length `φ(M)`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.ctx.phi)
            .map(|i| {
                let n = self.num.get(i).cloned().unwrap_or_default();
                BigRational::new(n, self.den.clone())
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx.order, other.ctx.order))
        }
    }

    fn assert_ctx(&self, other: &Self) {
        if let Err(e) = self.check(other) {
            panic!("{e}");
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_raw(other, false))
    }

    fn add_raw(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let n = self.num.len().max(other.num.len());
        let mut out = Vec::with_capacity(n);
        if self.den == other.den {
            for i in 0..n {
                let a = self.num.get(i).cloned().unwrap_or_default();
                let b = other.num.get(i).cloned().unwrap_or_default();
                out.push(if negate { a - b } else { a + b });
            }
            return Self::from_parts(&self.ctx, out, self.den.clone());
        }
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        for i in 0..n {
            let a = self.num.get(i).map(|c| c * &fa).unwrap_or_default();
            let b = other.num.get(i).map(|c| c * &fb).unwrap_or_default();
            out.push(if negate { a - b } else { a + b });
        }
        Self::from_parts(&self.ctx, out, l)
    }

    fn reduce_small(&self, mut v: Vec<i128>) -> Option<Vec<i128>> {
        let phi = self.ctx.phi;
        let cyc = &self.ctx.cyclo;
        for i in (phi..v.len()).rev() {
            let c = v[i];
            if c != 0 {
                for j in 0..phi {
                    let t = c.checked_mul(cyc[j] as i128)?;
                    v[i - phi + j] = v[i - phi + j].checked_sub(t)?;
                }
                v[i] = 0;
            }
        }
        v.truncate(phi);
        Some(v)
    }

    fn mul_small(&self, a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
        let mut v = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = v[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
        self.reduce_small(v)
    }

    fn reduce_big(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.ctx.phi;
        let cyc = &self.ctx.cyclo;
        for i in (phi..v.len()).rev() {
            if !v[i].is_zero() {
                let c = std::mem::take(&mut v[i]);
                for j in 0..phi {
                    if cyc[j] != 0 {
                        v[i - phi + j] -= &c * cyc[j];
                    }
                }
            }
        }
        v.truncate(phi);
        v
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_raw(other))
    }

    fn mul_raw(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let den = &self.den * &other.den;
        if self.num.len() == 1 {
            let c = &self.num[0];
            return Self::from_parts(&self.ctx, other.num.iter().map(|x| x * c).collect(), den);
        }
        if other.num.len() == 1 {
            let c = &other.num[0];
            return Self::from_parts(&self.ctx, self.num.iter().map(|x| x * c).collect(), den);
        }
        if let (Some(a), Some(b)) = (to_small(&self.num), to_small(&other.num)) {
            if let Some(v) = self.mul_small(&a, &b) {
                return Self::from_parts(&self.ctx, v.into_iter().map(BigInt::from).collect(), den);
            }
        }
        let mut v = vec![BigInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        let v = self.reduce_big(v);
        Self::from_parts(&self.ctx, v, den)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_M`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.num.len() == 1 {
            return Ok(Self::from_parts(
                &self.ctx,
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        let q_of = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let mut r0: Vec<BigRational> = self
            .ctx
            .cyclo
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        let mut r1 = q_of(&self.num);
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        trim_q(&mut r1);
        while r1.len() > 1 {
            let (quo, rem) = divrem_q(&r0, &r1);
            let s2 = sub_q(&s0, &mul_q(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return Err(Error::Invariant(
                "element shares a factor with the cyclotomic polynomial".into(),
            ));
        }
        let c = &r1[0] / BigRational::from_integer(self.den.clone());
        let inv: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_rationals(&self.ctx, &inv))
    }

    fn from_rationals(ctx: &Cyc, v: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in v {
            den = den.lcm(c.denom());
        }
        let num = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_parts(ctx, num, den)
    }

    /// Builds an element from power-basis rational coefficients (reduced mod `Φ_M`).
    pub fn from_coeffs(ctx: &Cyc, v: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in v {
            den = den.lcm(c.denom());
        }
        let num: Vec<BigInt> = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let tmp = Self::zero(ctx);
        let num = tmp.reduce_big(num);
        Self::from_parts(ctx, num, den)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_raw(&other.inv()?))
    }

    /// The automorphism `ζ ↦ ζ^j`, `gcd(j, M) = 1`.
    pub fn galois(&self, j: i64) -> Self {
        let m = self.ctx.order as i64;
        assert_eq!(
            j.rem_euclid(m).gcd(&m),
            1,
            "galois exponent not coprime to the order"
        );
        if self.num.len() <= 1 {
            return self.clone();
        }
        let small = to_small(&self.num);
        let phi = self.ctx.phi;
        if let Some(a) = small {
            let mut acc = vec![0i128; phi];
            let mut ok = true;
            'outer: for (k, &c) in a.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let idx = (k as i64 * j).rem_euclid(m) as usize;
                for (x, &b) in acc.iter_mut().zip(&self.ctx.powers[idx]) {
                    match (c as i128)
                        .checked_mul(b as i128)
                        .and_then(|t| x.checked_add(t))
                    {
                        Some(v) => *x = v,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                return Self::from_parts(
                    &self.ctx,
                    acc.into_iter().map(BigInt::from).collect(),
                    self.den.clone(),
                );
            }
        }
        let mut acc = vec![BigInt::zero(); phi];
        for (k, c) in self.num.iter().enumerate() {
            let idx = (k as i64 * j).rem_euclid(m) as usize;
            for (x, &b) in acc.iter_mut().zip(&self.ctx.powers[idx]) {
                *x += c * b;
            }
        }
        Self::from_parts(&self.ctx, acc, self.den.clone())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ctx);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Value under the embedding `ζ_M ↦ e^{2πi/M}`.
    pub fn to_complex(&self) -> Complex64 {
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        let m = self.ctx.order as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / d;
            z += Complex64::from_polar(c, 2.0 * std::f64::consts::PI * k as f64 / m);
        }
        z
    }

    /// `{"order": M, "coeffs": [["num","den"], ...]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .num
            .iter()
            .map(|c| {
                let r = BigRational::new(c.clone(), self.den.clone());
                json!([r.numer().to_string(), r.denom().to_string()])
            })
            .collect();
        json!({"order": self.ctx.order, "coeffs": coeffs})
    }

    pub fn from_json(ctx: &Cyc, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("scalar JSON: {m}"));
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing order"))?;
        if order as usize != ctx.order {
            return Err(Error::ContextMismatch(order as usize, ctx.order));
        }
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coeffs"))?;
        let mut out = Vec::with_capacity(arr.len());
        for c in arr {
            let pair = c
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("coefficient must be [num, den]"))?;
            let parse = |x: &Value| -> Result<BigInt> {
                x.as_str()
                    .and_then(|s| s.parse::<BigInt>().ok())
                    .or_else(|| x.as_i64().map(BigInt::from))
                    .ok_or_else(|| bad("coefficient is not an integer string"))
            };
            let (n, d) = (parse(&pair[0])?, parse(&pair[1])?);
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            out.push(BigRational::new(n, d));
        }
        Ok(Self::from_coeffs(ctx, &out))
    }
}

fn trim_q(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim_q(&mut v);
    v
}

fn sub_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut v: Vec<BigRational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim_q(&mut v);
    v
}

fn divrem_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim_q(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quo = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + b.len() - 1] / &lead;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                rem[i + j] -= &c * y;
            }
        }
        quo[i] = c;
    }
    trim_q(&mut rem);
    trim_q(&mut quo);
    (quo, rem)
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                self.assert_ctx(rhs);
                let f: fn(&CycScalar, &CycScalar) -> CycScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_raw(b, false));
forward_binop!(Sub, sub, |a, b| a.add_raw(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_raw(b));
forward_binop!(Div, div, |a, b| a
    .mul_raw(&b.inv().expect("division by zero")));

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}
impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            let sign = if r.is_negative() { "-" } else { "+" };
            let a = r.abs();
            if first {
                if r.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{a}*z^{k}")?,
            }
        }
        write!(f, " [z=zeta_{}]", self.ctx.order)
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::fmt::Debug for CycContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q(ζ_{}) for q={}", self.order, self.q())
    }
}
