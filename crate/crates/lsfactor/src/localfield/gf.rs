//! Finite fields `F_{p^n}` with elements encoded as integer indices.
//!
//! The index of an element is its coefficient vector in the power basis of a
//! canonical primitive modulus, read as base-`p` digits, so `0` is zero, `1`
//! is one, and `F_p` is the index range `0..p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Shared handle to a finite field.
pub type Gf = Arc<FiniteField>;

const ADD_TABLE_LIMIT: u32 = 256;

pub struct FiniteField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    trace: Vec<u32>,
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Gf>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Gf>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Powers of `t` modulo the monic polynomial with low coefficients `low`, or
/// `None` when `t` is not a generator of the multiplicative group.
fn powers_of_t(p: u32, low: &[u32]) -> Option<Vec<Vec<u32>>> {
    let n = low.len();
    let q = (p as usize).pow(n as u32);
    let mut cur = vec![0u32; n];
    cur[0] = 1;
    let mut out = Vec::with_capacity(q - 1);
    for i in 0..q - 1 {
        if i > 0 && cur.iter().enumerate().all(|(j, &c)| c == u32::from(j == 0)) {
            return None;
        }
        out.push(cur.clone());
        let top = cur[n - 1];
        for j in (1..n).rev() {
            cur[j] = (cur[j - 1] + p * p - top * low[j] % p) % p;
        }
        cur[0] = (p * p - top * low[0] % p) % p;
    }
    let back_to_one = cur.iter().enumerate().all(|(j, &c)| c == u32::from(j == 0));
    back_to_one.then_some(out)
}

impl FiniteField {
    /// The field `F_{p^n}` with its canonical primitive modulus.
    pub fn new(p: u32, n: u32) -> Result<Gf> {
        if !is_prime(p) || n == 0 {
            return Err(Error::Invalid(format!(
                "F_{{{p}^{n}}} is not a finite field"
            )));
        }
        let q = (p as u64).pow(n);
        if q > 1 << 20 {
            return Err(Error::Unsupported(format!("finite field of order {q}")));
        }
        let mut reg = registry().lock().expect("finite field registry poisoned");
        if let Some(f) = reg.get(&(p, n)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(p, n));
        reg.insert((p, n), f.clone());
        Ok(f)
    }

    /// The field with `q` elements.
    pub fn of_order(q: u64) -> Result<Gf> {
        let (p, n) = crate::scalar::prime_power(q)
            .ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        Self::new(p as u32, n)
    }

    fn build(p: u32, n: u32) -> Self {
        let q = p.pow(n);
        let mut low = vec![0u32; n as usize];
        let (low, pows) = loop {
            if let Some(pows) = powers_of_t(p, &low) {
                break (low, pows);
            }
            let mut i = 0;
            loop {
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
            }
        };
        let index = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let exp: Vec<u32> = pows.iter().map(|d| index(d)).collect();
        let mut log = vec![u32::MAX; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let mut modulus = low;
        modulus.push(1);
        let mut field = FiniteField {
            p,
            n,
            q,
            modulus,
            exp,
            log,
            add: None,
            trace: Vec::new(),
        };
        if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add = Some(t);
        }
        let trace = (0..q)
            .map(|x| {
                let mut acc = 0;
                let mut y = x;
                for _ in 0..n {
                    acc = field.add(acc, y);
                    y = field.pow(y, p as u64);
                }
                acc
            })
            .collect();
        field.trace = trace;
        field
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus coefficients over `F_p`, ascending.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }
    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }
    /// The image of an integer in the prime field.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }
    pub fn neg(&self, a: u32) -> u32 {
        self.mul(a, self.from_int(-1))
    }
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }
    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }
    /// Discrete logarithm to the canonical generator.
    pub fn log(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.log[a as usize])
    }
    /// `g^k` for the canonical generator `g`.
    pub fn exp(&self, k: i64) -> u32 {
        self.exp[k.rem_euclid(self.q as i64 - 1) as usize]
    }
    /// Absolute trace to `F_p`, as an integer in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize]
    }
    /// `a^{p^k}`.
    pub fn frob(&self, a: u32, k: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(k % self.n))
    }
    /// `true` for nonzero squares; every nonzero element is a square in characteristic 2.
    pub fn is_square(&self, a: u32) -> bool {
        a != 0 && (self.p == 2 || self.log[a as usize].is_multiple_of(2))
    }

    /// Image of each element of `self` under the canonical embedding into `target`.
    pub fn embedding(&self, target: &FiniteField) -> Result<Vec<u32>> {
        if self.p != target.p || !target.n.is_multiple_of(self.n) {
            return Err(Error::Invalid(format!(
                "F_{} does not embed in F_{}",
                self.q, target.q
            )));
        }
        let root = (0..target.q)
            .find(|&y| {
                let v = self
                    .modulus
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| target.add(target.mul(acc, y), c));
                v == 0
            })
            .ok_or_else(|| Error::Invariant("modulus has no root in extension".into()))?;
        Ok((0..self.q)
            .map(|x| {
                self.digits(x)
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| target.add(target.mul(acc, root), c))
            })
            .collect())
    }

    /// Roots in `self` of a polynomial with coefficients in `self` (ascending).
    pub fn roots(&self, poly: &[u32]) -> Vec<u32> {
        (0..self.q)
            .filter(|&y| {
                poly.iter()
                    .rev()
                    .fold(0, |acc, &c| self.add(self.mul(acc, y), c))
                    == 0
            })
            .collect()
    }
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}
