//! Dirichlet characters of `F_Q[t]`, their idelic local components, and global
//! L-functions over `F_Q(t)`.
//!
//! A character mod `m` is viewed as a Hecke character of finite order. Its
//! components at the places dividing `m` are read off from CRT lifts, the
//! component at `∞` and the values on uniformizers are solved from the product
//! formula, and the additive character is the residue of `x·dt`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::abelian::{dual, epsilon_factor, l_factor};
use crate::characters::{AddChar, E1Char, EChar, MulChar};
use crate::localfield::{
    unit_exponent, FiniteField, Gf, LaurentElem, LocalField, QuadEtale, QuadKind,
};
use crate::lscoeff::{classical_coefficient, Block, GroupTag, InducingDatum};
use crate::scalar::{Cyc, CycContext, CycScalar, Monomial, Poly, RatFunc};
use crate::{Error, Result};

/// Working precision of completions.
pub const PREC: usize = 24;

/// A polynomial over `F_Q`, ascending coefficients, no trailing zeros.
pub type FPoly = Vec<u32>;

/// `F_Q[t]`.
#[derive(Clone)]
pub struct PolyRing {
    k: Gf,
}

impl PolyRing {
    pub fn new(q: u64) -> Result<Self> {
        Ok(PolyRing {
            k: FiniteField::of_order(q)?,
        })
    }
    pub fn field(&self) -> &Gf {
        &self.k
    }
    pub fn q(&self) -> u64 {
        self.k.q() as u64
    }

    fn trim(mut a: FPoly) -> FPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }
    pub fn degree(a: &[u32]) -> Option<usize> {
        a.len().checked_sub(1)
    }
    pub fn add(&self, a: &[u32], b: &[u32]) -> FPoly {
        let n = a.len().max(b.len());
        let c = (0..n)
            .map(|i| {
                self.k.add(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::trim(c)
    }
    pub fn sub(&self, a: &[u32], b: &[u32]) -> FPoly {
        let nb: FPoly = b.iter().map(|&c| self.k.neg(c)).collect();
        self.add(a, &nb)
    }
    pub fn scale(&self, a: &[u32], c: u32) -> FPoly {
        Self::trim(a.iter().map(|&x| self.k.mul(x, c)).collect())
    }
    pub fn mul(&self, a: &[u32], b: &[u32]) -> FPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = self.k.add(c[i + j], self.k.mul(x, y));
            }
        }
        Self::trim(c)
    }
    pub fn pow(&self, a: &[u32], e: usize) -> FPoly {
        (0..e).fold(vec![1], |acc, _| self.mul(&acc, a))
    }
    pub fn divrem(&self, a: &[u32], b: &[u32]) -> Result<(FPoly, FPoly)> {
        let db = Self::degree(b).ok_or(Error::DivisionByZero)?;
        let inv = self.k.inv(b[db])?;
        let mut r = a.to_vec();
        if r.len() <= db {
            return Ok((Vec::new(), r));
        }
        let mut quo = vec![0u32; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.k.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            quo[i - db] = c;
            for (j, &y) in b.iter().enumerate() {
                r[i - db + j] = self.k.sub(r[i - db + j], self.k.mul(c, y));
            }
        }
        r.truncate(db);
        Ok((Self::trim(quo), Self::trim(r)))
    }
    pub fn rem(&self, a: &[u32], b: &[u32]) -> Result<FPoly> {
        Ok(self.divrem(a, b)?.1)
    }
    pub fn monic(&self, a: &[u32]) -> Result<FPoly> {
        let lead = *a.last().ok_or(Error::ZeroArgument)?;
        Ok(self.scale(a, self.k.inv(lead)?))
    }
    /// Monic `gcd(a, b)` with `u a + v b = gcd`.
    pub fn xgcd(&self, a: &[u32], b: &[u32]) -> Result<(FPoly, FPoly, FPoly)> {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut u0, mut u1) = (vec![1u32], Vec::new());
        let (mut v0, mut v1) = (Vec::new(), vec![1u32]);
        while !r1.is_empty() {
            let (qt, r) = self.divrem(&r0, &r1)?;
            let u = self.sub(&u0, &self.mul(&qt, &u1));
            let v = self.sub(&v0, &self.mul(&qt, &v1));
            (r0, r1) = (r1, r);
            (u0, u1) = (u1, u);
            (v0, v1) = (v1, v);
        }
        let lead = *r0.last().ok_or(Error::ZeroArgument)?;
        let inv = self.k.inv(lead)?;
        Ok((
            self.scale(&r0, inv),
            self.scale(&u0, inv),
            self.scale(&v0, inv),
        ))
    }
    pub fn gcd(&self, a: &[u32], b: &[u32]) -> Result<FPoly> {
        Ok(self.xgcd(a, b)?.0)
    }
    pub fn coprime(&self, a: &[u32], b: &[u32]) -> bool {
        self.gcd(a, b).map(|g| g == [1]).unwrap_or(false)
    }
    pub fn derivative(&self, a: &[u32]) -> FPoly {
        Self::trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.k.mul(self.k.from_int(i as i64), c))
                .collect(),
        )
    }
    pub fn eval(&self, a: &[u32], x: u32) -> u32 {
        a.iter()
            .rev()
            .fold(0, |acc, &c| self.k.add(self.k.mul(acc, x), c))
    }
    /// All polynomials of degree `< d`, the zero polynomial included.
    pub fn below(&self, d: usize) -> Vec<FPoly> {
        let q = self.q() as usize;
        (0..q.pow(d as u32))
            .map(|mut i| {
                let c = (0..d)
                    .map(|_| {
                        let x = (i % q) as u32;
                        i /= q;
                        x
                    })
                    .collect();
                Self::trim(c)
            })
            .collect()
    }
    /// Monic polynomials of degree `d`.
    pub fn monic_of_degree(&self, d: usize) -> Vec<FPoly> {
        self.below(d)
            .into_iter()
            .map(|mut c| {
                c.resize(d, 0);
                c.push(1);
                c
            })
            .collect()
    }
    pub fn is_irreducible(&self, p: &[u32]) -> bool {
        let d = match Self::degree(p) {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        (1..=d / 2).all(|e| {
            self.monic_of_degree(e)
                .iter()
                .all(|f| !self.rem(p, f).map(|r| r.is_empty()).unwrap_or(true))
        })
    }
    /// Monic irreducible factors of a nonzero polynomial with multiplicities.
    pub fn factor(&self, m: &[u32]) -> Result<Vec<(FPoly, usize)>> {
        let mut rest = self.monic(m)?;
        let mut out = Vec::new();
        let mut d = 1;
        while rest.len() > 1 {
            if 2 * d > rest.len() - 1 {
                out.push((rest.clone(), 1));
                break;
            }
            for f in self.monic_of_degree(d) {
                let mut e = 0;
                loop {
                    let (qt, r) = self.divrem(&rest, &f)?;
                    if !r.is_empty() {
                        break;
                    }
                    rest = qt;
                    e += 1;
                }
                if e > 0 {
                    out.push((f, e));
                }
            }
            d += 1;
        }
        out.sort();
        Ok(out)
    }

    /// Parses `t^3 + 2t + 1`; coefficients are element indices of `F_Q`.
    pub fn parse(&self, s: &str) -> Result<FPoly> {
        let bad = || Error::Invalid(format!("cannot parse polynomial '{s}'"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = Vec::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, exp) = match body.find('t') {
                None => (body, 0usize),
                Some(i) => {
                    let e = match &body[i + 1..] {
                        "" => 1,
                        tail => tail
                            .strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse()
                            .map_err(|_| bad())?,
                    };
                    (body[..i].trim_end_matches('*'), e)
                }
            };
            let c: u32 = if coef.is_empty() {
                1
            } else {
                coef.parse().map_err(|_| bad())?
            };
            if c >= self.k.q() {
                return Err(bad());
            }
            let c = if neg { self.k.neg(c) } else { c };
            let mut mono = vec![0u32; exp];
            mono.push(c);
            acc = self.add(&acc, &mono);
        }
        Ok(acc)
    }
    pub fn format(&self, a: &[u32]) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        parts.join(" + ")
    }
}

/// `(F_Q[t]/m)^×`.
pub struct UnitGroup {
    ring: PolyRing,
    modulus: FPoly,
    elems: Vec<FPoly>,
    index: HashMap<FPoly, usize>,
    exponent: u64,
}

impl UnitGroup {
    pub fn new(ring: &PolyRing, modulus: &[u32]) -> Result<Arc<Self>> {
        let modulus = ring.monic(modulus)?;
        let deg = modulus.len() - 1;
        let elems: Vec<FPoly> = ring
            .below(deg)
            .into_iter()
            .filter(|g| ring.coprime(g, &modulus))
            .collect();
        let index: HashMap<FPoly, usize> = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let mut g = UnitGroup {
            ring: ring.clone(),
            modulus,
            elems,
            index,
            exponent: 1,
        };
        let one = g.one();
        let mut exponent = 1u64;
        for i in 0..g.elems.len() {
            let mut x = i;
            let mut k = 1u64;
            while x != one {
                x = g.mul(x, i);
                k += 1;
            }
            exponent = exponent.lcm(&k);
        }
        g.exponent = exponent;
        Ok(Arc::new(g))
    }
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }
    pub fn modulus(&self) -> &FPoly {
        &self.modulus
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn exponent(&self) -> u64 {
        self.exponent
    }
    pub fn elements(&self) -> &[FPoly] {
        &self.elems
    }
    fn one(&self) -> usize {
        self.index[&self.ring.rem(&[1], &self.modulus).expect("nonzero modulus")]
    }
    /// Index of the class of `f`, `None` when `f` is not a unit.
    pub fn class(&self, f: &[u32]) -> Option<usize> {
        let r = self.ring.rem(f, &self.modulus).ok()?;
        self.index.get(&r).copied()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let prod = self.ring.mul(&self.elems[a], &self.elems[b]);
        self.class(&prod).expect("units are closed under products")
    }
}

/// A character of `(F_Q[t]/m)^×`, with values `ζ_E^{k}` for the group exponent `E`.
#[derive(Clone)]
pub struct HeckeChar {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
}

impl PartialEq for HeckeChar {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exps == other.exps
    }
}

impl std::fmt::Debug for HeckeChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "HeckeChar(mod {}, {:?})",
            self.group.ring.format(&self.group.modulus),
            self.exps
        )
    }
}

impl HeckeChar {
    pub fn trivial(group: &Arc<UnitGroup>) -> Self {
        HeckeChar {
            group: group.clone(),
            exps: vec![0; group.order()],
        }
    }

    /// All characters mod `m`, each extended step by step along a greedy generating set.
    pub fn enumerate(ring: &PolyRing, m: &[u32]) -> Result<Vec<Self>> {
        let group = UnitGroup::new(ring, m)?;
        let n = group.order();
        let e = group.exponent;
        let one = group.one();
        let mut members = vec![one];
        let mut inside = vec![false; n];
        inside[one] = true;
        let mut tables: Vec<Vec<u64>> = vec![{
            let mut t = vec![0u64; n];
            t[one] = 0;
            t
        }];
        while let Some(g) = (0..n).find(|&i| !inside[i]) {
            let mut powers = vec![one, g];
            while !inside[*powers.last().expect("nonempty")] {
                let next = group.mul(*powers.last().expect("nonempty"), g);
                powers.push(next);
            }
            let k = powers.len() - 1;
            let gk = powers[k];
            let cells: Vec<(usize, usize, usize)> = members
                .iter()
                .flat_map(|&h| (1..k).map(move |j| (h, j)))
                .map(|(h, j)| (h, j, group.mul(h, powers[j])))
                .collect();
            let mut next_tables = Vec::with_capacity(tables.len() * k);
            for t in &tables {
                for x in (0..e).filter(|x| (x * k as u64) % e == t[gk] % e) {
                    let mut nt = t.clone();
                    for &(h, j, hg) in &cells {
                        nt[hg] = (t[h] + j as u64 * x) % e;
                    }
                    next_tables.push(nt);
                }
            }
            for &(_, _, hg) in &cells {
                if !inside[hg] {
                    inside[hg] = true;
                    members.push(hg);
                }
            }
            tables = next_tables;
        }
        if tables.len() != n {
            return Err(Error::Invariant(format!(
                "found {} characters of a group of order {n}",
                tables.len()
            )));
        }
        let chars: Vec<Self> = tables
            .into_iter()
            .map(|exps| HeckeChar {
                group: group.clone(),
                exps,
            })
            .collect();
        for c in &chars {
            c.check_homomorphism()?;
        }
        Ok(chars)
    }

    /// Characters of exact conductor `m`.
    pub fn enumerate_primitive(ring: &PolyRing, m: &[u32]) -> Result<Vec<Self>> {
        let all = Self::enumerate(ring, m)?;
        let mut out = Vec::new();
        for c in all {
            if c.is_primitive()? {
                out.push(c);
            }
        }
        Ok(out)
    }

    fn check_homomorphism(&self) -> Result<()> {
        let g = &self.group;
        let n = g.order();
        let step = (n / 12).max(1);
        for a in (0..n).step_by(step) {
            for b in (0..n).step_by(step) {
                if (self.exps[a] + self.exps[b]) % g.exponent != self.exps[g.mul(a, b)] {
                    return Err(Error::Invariant(
                        "character table is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }
    pub fn ring(&self) -> &PolyRing {
        &self.group.ring
    }
    pub fn modulus(&self) -> &FPoly {
        &self.group.modulus
    }
    /// Order `E` of the root of unity in which exponents are expressed.
    pub fn value_order(&self) -> u64 {
        self.group.exponent
    }
    /// `k` with `χ(f) = ζ_E^k`, `None` when `f` is not prime to `m`.
    pub fn exponent(&self, f: &[u32]) -> Option<u64> {
        self.group.class(f).map(|i| self.exps[i])
    }
    /// The exponent of `χ(f)` as a power of `ζ_M`, `M` the order of `cyc`.
    pub fn cyc_exponent(&self, f: &[u32], cyc: &Cyc) -> Option<i64> {
        let scale = cyc.order() as u64 / self.group.exponent;
        self.exponent(f).map(|k| (k * scale) as i64)
    }
    pub fn value(&self, f: &[u32], cyc: &Cyc) -> Option<CycScalar> {
        self.cyc_exponent(f, cyc)
            .map(|k| CycScalar::root_of_unity(cyc, k))
    }
    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }
    /// Trivial on the constants `F_Q^×`.
    pub fn is_even(&self) -> bool {
        (1..self.ring().field().q()).all(|c| self.exponent(&[c]) == Some(0))
    }
    pub fn conj(&self) -> Self {
        let e = self.group.exponent;
        HeckeChar {
            group: self.group.clone(),
            exps: self.exps.iter().map(|&k| (e - k) % e).collect(),
        }
    }
    pub fn pow(&self, n: i64) -> Self {
        let e = self.group.exponent as i64;
        HeckeChar {
            group: self.group.clone(),
            exps: self
                .exps
                .iter()
                .map(|&k| (k as i64 * n).rem_euclid(e) as u64)
                .collect(),
        }
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group.modulus != other.group.modulus {
            return Err(Error::Invalid("characters have different moduli".into()));
        }
        let e = self.group.exponent;
        Ok(HeckeChar {
            group: self.group.clone(),
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| (a + b) % e)
                .collect(),
        })
    }

    fn trivial_on_kernel(&self, sub: &[u32]) -> Result<bool> {
        let ring = self.ring();
        for (i, g) in self.group.elems.iter().enumerate() {
            if ring.rem(g, sub)? == ring.rem(&[1], sub)? && self.exps[i] != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The conductor: the least divisor of `m` through which `χ` factors.
    pub fn conductor(&self) -> Result<FPoly> {
        let ring = self.ring().clone();
        let mut cur = self.modulus().clone();
        loop {
            let mut shrunk = false;
            for (p, _) in ring.factor(&cur)? {
                let smaller = ring.divrem(&cur, &p)?.0;
                if self.trivial_on_kernel(&smaller)? {
                    cur = smaller;
                    shrunk = true;
                    break;
                }
            }
            if !shrunk {
                return Ok(cur);
            }
        }
    }
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.conductor()?.len() == self.modulus().len())
    }
    /// The primitive character inducing `χ`.
    pub fn primitive(&self) -> Result<Self> {
        let m0 = self.conductor()?;
        if m0.len() == self.modulus().len() {
            return Ok(self.clone());
        }
        let ring = self.ring();
        let group = UnitGroup::new(ring, &m0)?;
        let mut exps = vec![None; group.order()];
        for (i, g) in self.group.elems.iter().enumerate() {
            let j = group.class(g).expect("units reduce to units");
            if exps[j].is_none() {
                exps[j] = Some(self.exps[i] * group.exponent / self.group.exponent);
            }
        }
        let exps = exps
            .into_iter()
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::Invariant("unit lift missing".into()))?;
        Ok(HeckeChar { group, exps })
    }

    /// Restriction to `F_p[t] ⊂ F_{p^2}[t]` for a modulus with coefficients in `F_p`.
    pub fn restrict(&self, base: &PolyRing) -> Result<Self> {
        let sub = base.field().embedding(self.ring().field())?;
        let unembed: HashMap<u32, u32> = sub
            .iter()
            .enumerate()
            .map(|(x, &y)| (y, x as u32))
            .collect();
        let m: FPoly = self
            .modulus()
            .iter()
            .map(|c| unembed.get(c).copied())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid("modulus is not defined over the base field".into()))?;
        let group = UnitGroup::new(base, &m)?;
        let mut exps = Vec::with_capacity(group.order());
        for g in &group.elems {
            let up: FPoly = g.iter().map(|&c| sub[c as usize]).collect();
            let k = self
                .exponent(&up)
                .ok_or_else(|| Error::Invariant("restricted unit is not a unit".into()))?;
            let num = k * group.exponent;
            if num % self.group.exponent != 0 {
                return Err(Error::Invariant(
                    "restricted value outside the base exponent".into(),
                ));
            }
            exps.push(num / self.group.exponent);
        }
        Ok(HeckeChar { group, exps })
    }

    /// `D_d = Σ χ(f)` over monic `f` of degree `d`.
    pub fn dirichlet_sum(&self, d: usize, cyc: &Cyc) -> CycScalar {
        let mut counts = vec![0i64; cyc.order()];
        for f in self.ring().monic_of_degree(d) {
            if let Some(k) = self.cyc_exponent(&f, cyc) {
                counts[k as usize] += 1;
            }
        }
        CycScalar::from_root_counts(cyc, &counts)
    }

    /// `L(s, χ) = Σ_f χ(f) Z^{deg f}` for a primitive character.
    pub fn l_function(&self, cyc: &Cyc) -> Result<RatFunc> {
        if !self.is_primitive()? {
            return Err(Error::Invalid(
                "L-function of an imprimitive character".into(),
            ));
        }
        let deg = self.modulus().len() - 1;
        if deg == 0 {
            return Ok(RatFunc::inv_one_minus(
                &CycScalar::from_int(cyc, self.ring().q() as i64),
                1,
            ));
        }
        for d in [deg, deg + 1] {
            if !self.dirichlet_sum(d, cyc).is_zero() {
                return Err(Error::Invariant(format!(
                    "D_{d} does not vanish for a nontrivial character"
                )));
            }
        }
        Ok(RatFunc::from_poly(Poly::new(
            cyc,
            (0..deg).map(|d| self.dirichlet_sum(d, cyc)).collect(),
        )))
    }

    /// `L^S(s, χ)`: the primitive L-function without the Euler factors at `removed`.
    pub fn partial_l(&self, removed: &[FPoly], cyc: &Cyc) -> Result<RatFunc> {
        let prim = self.primitive()?;
        let mut acc = prim.l_function(cyc)?;
        let ring = self.ring();
        let mut seen = HashSet::new();
        let mut places: Vec<FPoly> = ring
            .factor(self.modulus())?
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        places.extend(removed.iter().cloned());
        for p in places {
            if !seen.insert(p.clone()) {
                continue;
            }
            if let Some(k) = prim.cyc_exponent(&p, cyc) {
                let w = CycScalar::root_of_unity(cyc, k);
                acc = acc.mul(&RatFunc::from_poly(Poly::one_minus(&w, p.len() - 1)));
            }
        }
        Ok(acc)
    }

    /// Root-of-unity orders needed to localize `χ` with the given extra places.
    pub fn orders(&self, extra: &[FPoly]) -> Result<Vec<u64>> {
        let q = self.ring().q();
        let mut out = vec![self.group.exponent, q - 1];
        for (p, e) in self.ring().factor(self.modulus())? {
            let qd = q.pow((p.len() - 1) as u32);
            out.push(qd - 1);
            out.push(unit_exponent(qd, e));
        }
        for p in extra {
            out.push(q.pow((p.len() - 1) as u32) - 1);
        }
        Ok(out)
    }

    /// A coefficient context for `χ`, its conjugate and its powers.
    pub fn context(&self, extra: &[FPoly]) -> Result<Cyc> {
        CycContext::new(self.ring().field().p() as u64, &self.orders(extra)?)
    }

    /// Local components at the places of `m`, at `∞`, and at unramified `extra` places.
    pub fn localize(&self, cyc: &Cyc, extra: &[FPoly]) -> Result<Adelic> {
        let ring = self.ring();
        let ram = ring
            .factor(self.modulus())?
            .into_iter()
            .map(|(p, _)| Completion::finite(ring, &p, cyc))
            .collect::<Result<Vec<_>>>()?;
        let extra = extra
            .iter()
            .map(|p| Completion::finite(ring, p, cyc))
            .collect::<Result<Vec<_>>>()?;
        self.localize_at(cyc, ram, Completion::infinity(ring, cyc)?, extra)
    }

    /// As [`HeckeChar::localize`] with prescribed completions, listed in the factor order of `m`.
    pub fn localize_at(
        &self,
        cyc: &Cyc,
        ram: Vec<Completion>,
        inf: Completion,
        extra: Vec<Completion>,
    ) -> Result<Adelic> {
        let ring = self.ring();
        let order = cyc.order() as i64;
        if !(cyc.order() as u64).is_multiple_of(self.group.exponent) {
            return Err(Error::OrderOverflow {
                order: self.group.exponent,
                modulus: cyc.order(),
            });
        }
        let factors = ring.factor(self.modulus())?;
        if factors.len() != ram.len() {
            return Err(Error::Invalid(
                "one completion per prime of the modulus expected".into(),
            ));
        }
        let mut tables = Vec::with_capacity(ram.len());
        for ((p, e), comp) in factors.iter().zip(&ram) {
            if comp.prime() != Some(p) {
                return Err(Error::Invalid("completion does not match the prime".into()));
            }
            tables.push(self.unit_table(p, *e, comp, cyc)?);
        }
        let unit_exp = |i: usize, x: &LaurentElem| -> i64 {
            let (comp, tab) = (&ram[i], &tables[i]);
            tab[comp.field.unit_index(&x.unit_part(), factors[i].1)] as i64
        };
        let ramified_units =
            |f: &[u32]| -> i64 { (0..ram.len()).map(|i| unit_exp(i, &ram[i].image(f))).sum() };

        let q = ring.q() as u32;
        let mut inf_table = vec![-1i32; q as usize];
        for c in 1..q {
            inf_table[inf.embed[c as usize] as usize] =
                (-ramified_units(&[c])).rem_euclid(order) as i32;
        }
        let inf_level = if inf_table[1..].iter().all(|&x| x == 0) {
            0
        } else {
            1
        };
        let mut samples = Vec::new();
        for d in 1..=4 {
            samples.extend(
                ring.monic_of_degree(d)
                    .into_iter()
                    .filter(|f| self.exponent(f).is_some())
                    .take(16),
            );
        }
        let targets: Vec<(i64, i64)> = samples
            .iter()
            .map(|f| {
                let chi = self.cyc_exponent(f, cyc).expect("coprime sample");
                (
                    (f.len() - 1) as i64,
                    (-(chi + ramified_units(f))).rem_euclid(order),
                )
            })
            .collect();
        let solutions: Vec<i64> = (0..order)
            .filter(|w| {
                targets
                    .iter()
                    .all(|&(d, t)| (-d * w - t).rem_euclid(order) == 0)
            })
            .collect();
        let w_inf = match solutions.as_slice() {
            [w] => *w,
            [] => {
                return Err(Error::Invariant(
                    "no component at ∞ satisfies the product formula".into(),
                ))
            }
            _ => {
                return Err(Error::Invariant(
                    "component at ∞ is not determined by the samples".into(),
                ))
            }
        };
        let inf_chi = if inf_level == 0 {
            MulChar::unramified(&inf.field, CycScalar::root_of_unity(cyc, w_inf))
        } else {
            let table = (0..q as usize).map(|i| inf_table[i]).collect();
            MulChar::from_table(&inf.field, 1, table, CycScalar::root_of_unity(cyc, w_inf))?
        };
        let infinity = LocalComponent {
            completion: inf,
            chi: inf_chi,
            w_exp: w_inf,
        };

        let mut ramified = Vec::with_capacity(ram.len());
        for (i, comp) in ram.iter().enumerate() {
            let p = &factors[i].0;
            let others: i64 = (0..ram.len())
                .filter(|&j| j != i)
                .map(|j| unit_exp(j, &ram[j].image(p)))
                .sum();
            let w = (-(others + infinity.exponent_at(&infinity.completion.image(p))?))
                .rem_euclid(order);
            let chi = MulChar::from_table(
                &comp.field,
                factors[i].1,
                tables[i].clone(),
                CycScalar::root_of_unity(cyc, w),
            )?;
            ramified.push(LocalComponent {
                completion: comp.clone(),
                chi,
                w_exp: w,
            });
        }

        let mut unramified = Vec::with_capacity(extra.len());
        for comp in extra {
            let p = comp
                .prime()
                .ok_or_else(|| Error::Invalid("extra places must be finite".into()))?
                .clone();
            let w = self
                .cyc_exponent(&p, cyc)
                .ok_or_else(|| Error::Invalid("extra places must not divide the modulus".into()))?;
            let chi = MulChar::unramified(&comp.field, CycScalar::root_of_unity(cyc, w));
            unramified.push(LocalComponent {
                completion: comp,
                chi,
                w_exp: w,
            });
        }
        Ok(Adelic {
            chi: self.clone(),
            cyc: cyc.clone(),
            ramified,
            infinity,
            unramified,
        })
    }

    /// `u ↦ χ(ũ)^{-1}` on units mod `P^e`, `ũ` the CRT lift that is `1` at the other primes.
    fn unit_table(&self, p: &[u32], e: usize, comp: &Completion, cyc: &Cyc) -> Result<Vec<i32>> {
        let ring = self.ring();
        let order = cyc.order() as i64;
        let pe = ring.pow(p, e);
        let rest = ring.divrem(self.modulus(), &pe)?.0;
        let (g, _, b) = ring.xgcd(&pe, &rest)?;
        if g != [1] {
            return Err(Error::Invariant(
                "prime powers of the modulus are not coprime".into(),
            ));
        }
        let br = ring.mul(&b, &rest);
        let one_part = ring.sub(&[1], &br);
        let size = (comp.field.q() as usize).pow(e as u32);
        let mut table = vec![-1i32; size];
        for g in ring.below(e * (p.len() - 1)) {
            if !ring.coprime(&g, p) {
                continue;
            }
            let lift = ring.add(&ring.mul(&g, &br), &one_part);
            let k = self
                .cyc_exponent(&lift, cyc)
                .ok_or_else(|| Error::Invariant("CRT lift is not a unit".into()))?;
            let idx = comp.field.unit_index(&comp.image(&g), e);
            table[idx] = (-k).rem_euclid(order) as i32;
        }
        let filled = table.iter().filter(|&&x| x >= 0).count();
        let units = (comp.field.q() as usize - 1) * (comp.field.q() as usize).pow(e as u32 - 1);
        if filled != units {
            return Err(Error::Invariant("local unit table is incomplete".into()));
        }
        Ok(table)
    }

    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        json!({
            "q": ring.q(),
            "modulus": ring.format(self.modulus()),
            "order": self.value_order(),
            "values": self.group.elems.iter().zip(&self.exps).map(|(g, k)| json!([ring.format(g), k])).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(FPoly),
    Infinity,
}

/// The completion of `F_Q(t)` at a place, with `t` transported into `F_{Q^d}((ϖ))`.
#[derive(Clone)]
pub struct Completion {
    place: Place,
    degree: usize,
    field: LocalField,
    embed: Vec<u32>,
    t_image: LaurentElem,
}

impl Completion {
    /// The completion at `P`, choosing the least root of `P` in `F_{Q^d}`.
    pub fn finite(ring: &PolyRing, p: &[u32], cyc: &Cyc) -> Result<Self> {
        let d = PolyRing::degree(p).ok_or(Error::ZeroArgument)?;
        let res = FiniteField::of_order(ring.q().pow(d as u32))?;
        let field = LocalField::new(res, cyc.clone(), PREC)?;
        let embed = ring.field().embedding(field.res())?;
        let image: FPoly = p.iter().map(|&c| embed[c as usize]).collect();
        let root = *field
            .res()
            .roots(&image)
            .first()
            .ok_or_else(|| Error::Invalid("polynomial is not irreducible".into()))?;
        Self::finite_on(ring, p, field, root)
    }

    /// The completion at `P` realised on `field`, with `t ≡ root` mod `ϖ`.
    pub fn finite_on(ring: &PolyRing, p: &[u32], field: LocalField, root: u32) -> Result<Self> {
        if !ring.is_irreducible(p) || p.last() != Some(&1) {
            return Err(Error::Invalid(format!(
                "{} is not monic irreducible",
                ring.format(p)
            )));
        }
        let d = p.len() - 1;
        if field.res().q() as u64 != ring.q().pow(d as u32) {
            return Err(Error::Invalid("residue field has the wrong size".into()));
        }
        let embed = ring.field().embedding(field.res())?;
        let pe: FPoly = p.iter().map(|&c| embed[c as usize]).collect();
        let dp: FPoly = ring
            .derivative(p)
            .iter()
            .map(|&c| embed[c as usize])
            .collect();
        let prec = field.prec() as i64;
        let horner = |a: &[u32], x: &LaurentElem| -> LaurentElem {
            a.iter().rev().fold(LaurentElem::zero(), |acc, &c| {
                field.add(
                    &field.mul_trunc(&acc, x, prec),
                    &LaurentElem::monomial(c, 0),
                )
            })
        };
        if !horner(&pe, &LaurentElem::monomial(root, 0)).is_zero() {
            return Err(Error::Invalid("residue is not a root of the prime".into()));
        }
        let pi = LaurentElem::monomial(1, 1);
        let mut t = LaurentElem::monomial(root, 0);
        let mut steps = 0;
        while (1usize << steps) < field.prec() + 1 {
            steps += 1;
        }
        for _ in 0..=steps {
            let f = field.sub(&horner(&pe, &t), &pi);
            let df = field.inv_unit_mod(&horner(&dp, &t), field.prec())?;
            t = field.sub(&t, &field.mul_trunc(&f, &df, prec));
        }
        if !field.sub(&horner(&pe, &t), &pi).truncate(prec).is_zero() {
            return Err(Error::Invariant("Hensel iteration did not converge".into()));
        }
        Ok(Completion {
            place: Place::Finite(p.to_vec()),
            degree: d,
            field,
            embed,
            t_image: t,
        })
    }

    /// The completion at `∞` with uniformizer `1/t`.
    pub fn infinity(ring: &PolyRing, cyc: &Cyc) -> Result<Self> {
        let field = LocalField::new(ring.field().clone(), cyc.clone(), PREC)?;
        Self::infinity_on(ring, field)
    }
    pub fn infinity_on(ring: &PolyRing, field: LocalField) -> Result<Self> {
        let embed = ring.field().embedding(field.res())?;
        if field.res().q() != ring.field().q() {
            return Err(Error::Invalid("residue field at ∞ must be F_Q".into()));
        }
        Ok(Completion {
            place: Place::Infinity,
            degree: 1,
            field,
            embed,
            t_image: LaurentElem::monomial(1, -1),
        })
    }

    pub fn place(&self) -> &Place {
        &self.place
    }
    pub fn prime(&self) -> Option<&FPoly> {
        match &self.place {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn field(&self) -> &LocalField {
        &self.field
    }
    pub fn t_image(&self) -> &LaurentElem {
        &self.t_image
    }

    /// The image of a polynomial.
    pub fn image(&self, g: &[u32]) -> LaurentElem {
        match self.place {
            Place::Infinity => {
                let n = g.len() as i64 - 1;
                LaurentElem::new(
                    -n,
                    g.iter().rev().map(|&c| self.embed[c as usize]).collect(),
                )
            }
            Place::Finite(_) => {
                let prec = self.field.prec() as i64;
                g.iter().rev().fold(LaurentElem::zero(), |acc, &c| {
                    self.field.add(
                        &self.field.mul_trunc(&acc, &self.t_image, prec),
                        &LaurentElem::monomial(self.embed[c as usize], 0),
                    )
                })
            }
        }
    }

    /// The local component of `x ↦ ψ_p(Tr Σ_v Res_v(x dt))`.
    pub fn psi(&self, ring: &PolyRing) -> Result<AddChar> {
        match &self.place {
            Place::Infinity => AddChar::new(
                &self.field,
                LaurentElem::monomial(self.embed[ring.field().neg(1) as usize], -2),
            ),
            Place::Finite(p) => {
                let dp = self.image(&ring.derivative(p));
                AddChar::new(
                    &self.field,
                    self.field.inv_unit_mod(&dp, self.field.prec())?,
                )
            }
        }
    }
}

/// A local component `χ_v` with the exponent of `χ_v(ϖ_v)` as a power of `ζ_M`.
#[derive(Clone)]
pub struct LocalComponent {
    pub completion: Completion,
    pub chi: MulChar,
    pub w_exp: i64,
}

impl LocalComponent {
    /// Exponent of `χ_v(x)` as a power of `ζ_M`.
    pub fn exponent_at(&self, x: &LaurentElem) -> Result<i64> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        let order = self.chi.cyc().order() as i64;
        Ok((v * self.w_exp + self.chi.unit_exponent(&x.unit_part())? as i64).rem_euclid(order))
    }
}

/// A character with its local components on a finite set of places.
#[derive(Clone)]
pub struct Adelic {
    pub chi: HeckeChar,
    pub cyc: Cyc,
    pub ramified: Vec<LocalComponent>,
    pub infinity: LocalComponent,
    pub unramified: Vec<LocalComponent>,
}

impl Adelic {
    /// The components at the primes of the modulus, then `∞`, then the extra places.
    pub fn components(&self) -> impl Iterator<Item = &LocalComponent> {
        self.ramified
            .iter()
            .chain(std::iter::once(&self.infinity))
            .chain(&self.unramified)
    }

    /// Exponent of `∏_v χ_v(g)` for a nonzero polynomial `g`; zero by the product formula.
    pub fn product_formula(&self, g: &[u32]) -> Result<i64> {
        let ring = self.chi.ring();
        let order = self.cyc.order() as i64;
        let mut total = self
            .infinity
            .exponent_at(&self.infinity.completion.image(g))?;
        for c in &self.ramified {
            total += c.exponent_at(&c.completion.image(g))?;
        }
        for (p, e) in ring.factor(g)? {
            if let Some(k) = self.chi.cyc_exponent(&p, &self.cyc) {
                total += e as i64 * k;
            }
        }
        Ok(total.rem_euclid(order))
    }

    /// `ε(s, χ) = ∏_v ε(s, χ_v, ψ_v)` over the ramified places and `∞`.
    pub fn epsilon(&self) -> Result<Monomial> {
        let ring = self.chi.ring();
        let mut acc = Monomial::one(&self.cyc);
        for c in self.ramified.iter().chain(std::iter::once(&self.infinity)) {
            let eps = epsilon_factor(&c.chi, &c.completion.psi(ring)?)?;
            acc = acc.mul(&Monomial::new(
                eps.coeff,
                eps.exp * c.completion.degree as i64,
            ));
        }
        Ok(acc)
    }

    /// `ε(s, χ)` for the additive character `x ↦ ψ(a x)`, `a` a nonzero polynomial.
    pub fn epsilon_scaled(&self, a: &[u32]) -> Result<Monomial> {
        let ring = self.chi.ring();
        let mut comps: Vec<LocalComponent> = self
            .ramified
            .iter()
            .chain(std::iter::once(&self.infinity))
            .cloned()
            .collect();
        for (p, _) in ring.factor(a)? {
            if let Some(k) = self.chi.cyc_exponent(&p, &self.cyc) {
                let completion = Completion::finite(ring, &p, &self.cyc)?;
                let chi =
                    MulChar::unramified(completion.field(), CycScalar::root_of_unity(&self.cyc, k));
                comps.push(LocalComponent {
                    completion,
                    chi,
                    w_exp: k,
                });
            }
        }
        let mut acc = Monomial::one(&self.cyc);
        for c in &comps {
            let psi = c.completion.psi(ring)?.twist(&c.completion.image(a))?;
            let eps = epsilon_factor(&c.chi, &psi)?;
            acc = acc.mul(&Monomial::new(
                eps.coeff,
                eps.exp * c.completion.degree as i64,
            ));
        }
        Ok(acc)
    }

    /// `L(s, χ) L_∞(s, χ_∞)` for a primitive character.
    pub fn completed_l(&self) -> Result<RatFunc> {
        Ok(self
            .chi
            .l_function(&self.cyc)?
            .mul(&l_factor(&self.infinity.chi)))
    }
}

/// Both sides of `Λ(s, χ) = ε(s, χ) Λ(1-s, χ̄)` for a primitive character.
pub fn functional_equation_sides(chi: &HeckeChar) -> Result<(RatFunc, RatFunc)> {
    let cyc = chi.context(&[])?;
    let a = chi.localize(&cyc, &[])?;
    let b = chi.conj().localize(&cyc, &[])?;
    let lhs = a.completed_l()?;
    let rhs = a
        .epsilon()?
        .to_ratfunc()
        .mul(&dual(&b.completed_l()?, a.infinity.completion.field()));
    Ok((lhs, rhs))
}

pub fn functional_equation_check(chi: &HeckeChar) -> Result<bool> {
    let (l, r) = functional_equation_sides(chi)?;
    Ok(l == r)
}

/// Groups whose rank-one local coefficients are tested against global L-functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrudeCase {
    Sl2,
    So3,
    Gl11,
    UEven,
    UOdd,
}

impl CrudeCase {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "SL2" | "sl2" => Ok(CrudeCase::Sl2),
            "SO3" | "so3" => Ok(CrudeCase::So3),
            "GL11" | "gl11" => Ok(CrudeCase::Gl11),
            "U_even" | "ueven" => Ok(CrudeCase::UEven),
            "U_odd" | "uodd" => Ok(CrudeCase::UOdd),
            _ => Err(Error::Invalid(format!("unknown case '{s}'"))),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            CrudeCase::Sl2 => "SL2",
            CrudeCase::So3 => "SO3",
            CrudeCase::Gl11 => "GL11",
            CrudeCase::UEven => "U_even",
            CrudeCase::UOdd => "U_odd",
        }
    }
}

fn dedup_places(ring: &PolyRing, modulus: &[u32], extra: &[FPoly]) -> Result<Vec<FPoly>> {
    let mut out: Vec<FPoly> = Vec::new();
    for p in extra {
        if !ring.is_irreducible(p) || p.last() != Some(&1) {
            return Err(Error::Invalid(format!(
                "{} is not monic irreducible",
                ring.format(p)
            )));
        }
        if !ring.coprime(p, modulus) {
            return Err(Error::Invalid(
                "extra places must not divide the modulus".into(),
            ));
        }
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Both sides of `L^S(s, θ) = ∏_{v∈S} C_v(s) · L^S(1-s, θ^{-1})` for `SL_2`, `SO_3` and `GL_1 × GL_1`.
///
/// `θ` is `χ`, `χ²` and `χ₁χ₂` respectively; `S` is the primes of the modulus, `∞`
/// and the extra places.
pub fn crude_fe_sides(
    case: CrudeCase,
    chi: &HeckeChar,
    second: Option<&HeckeChar>,
    extra: &[FPoly],
) -> Result<(RatFunc, RatFunc)> {
    let ring = chi.ring();
    let extra = dedup_places(ring, chi.modulus(), extra)?;
    let (theta, group) = match case {
        CrudeCase::Sl2 => (chi.clone(), GroupTag::Sp(1)),
        CrudeCase::So3 => (chi.pow(2), GroupTag::SoOdd(1)),
        CrudeCase::Gl11 => {
            let mu =
                second.ok_or_else(|| Error::Invalid("GL(1)×GL(1) needs two characters".into()))?;
            (chi.mul(mu)?, GroupTag::Gl(1, 1))
        }
        _ => {
            return Err(Error::Invalid(
                "unitary cases live over a quadratic extension".into(),
            ))
        }
    };
    let cyc = chi.context(&extra)?;
    let a = chi.localize(&cyc, &extra)?;
    let b = match second {
        Some(mu) if case == CrudeCase::Gl11 => Some(mu.localize_at(
            &cyc,
            a.ramified.iter().map(|c| c.completion.clone()).collect(),
            a.infinity.completion.clone(),
            a.unramified.iter().map(|c| c.completion.clone()).collect(),
        )?),
        _ => None,
    };
    let mut coeff = RatFunc::one(&cyc);
    let pieces: Vec<(&LocalComponent, Option<&LocalComponent>)> = match &b {
        Some(b) => a.components().zip(b.components().map(Some)).collect(),
        None => a.components().map(|c| (c, None)).collect(),
    };
    for (c, other) in pieces {
        let d = match other {
            Some(o) => InducingDatum::gl(
                vec![Block::of_f(c.chi.clone())],
                vec![Block::of_f(o.chi.clone())],
            ),
            None => InducingDatum::new(vec![Block::of_f(c.chi.clone())]),
        };
        let local = classical_coefficient(&group, &d, &c.completion.psi(ring)?)?;
        coeff = coeff.mul(&local.subst_power(c.completion.degree));
    }
    let lhs = theta.partial_l(&extra, &cyc)?;
    let rhs = coeff.mul(&dual(
        &theta.conj().partial_l(&extra, &cyc)?,
        a.infinity.completion.field(),
    ));
    Ok((lhs, rhs))
}

/// Both sides of the unitary identities over `K = F_{Q²}(t) ⊃ k = F_Q(t)` for `χ` a character of
/// `K` whose modulus has coefficients in `F_Q` and only odd-degree prime factors over `F_Q`.
///
/// `U_even`: `L^S_k(s, χ|_k) = ∏ C_v · L^S_k(1-s, χ̄|_k)`.
/// `U_odd` (trivial `ν`): `L^S_K(s, χ) L^S_k(2s, η χ|_k) = ∏ C_v · L^S_K(1-s, χ̄) L^S_k(1-2s, η χ̄|_k)`.
pub fn unitary_crude_fe_sides(
    case: CrudeCase,
    chi: &HeckeChar,
    extra: &[FPoly],
) -> Result<(RatFunc, RatFunc)> {
    let big = chi.ring();
    let (p, two) = crate::scalar::prime_power(big.q())
        .ok_or_else(|| Error::Invalid("bad field size".into()))?;
    if two != 2 {
        return Err(Error::Unsupported(
            "unitary identities need K = F_{p²}(t)".into(),
        ));
    }
    let ring = PolyRing::new(p)?;
    let restricted = chi.restrict(&ring)?;
    let m = restricted.modulus().clone();
    let extra = dedup_places(&ring, &m, extra)?;
    let factors = ring.factor(&m)?;
    if factors.iter().any(|(f, _)| (f.len() - 1) % 2 == 0) {
        return Err(Error::Unsupported("modulus primes must stay inert".into()));
    }

    let mut orders = chi.orders(&[])?;
    orders.extend(restricted.orders(&extra)?);
    for (f, e) in &factors {
        let qd = p.pow((f.len() - 1) as u32);
        orders.extend(QuadEtale::required_orders(qd, *e));
        orders.push(qd * qd - 1);
    }
    orders.push(p * p - 1);
    for f in &extra {
        orders.push(p.pow(2 * (f.len() - 1) as u32) - 1);
    }
    let cyc = CycContext::new(p, &orders)?;

    let small_ram: Vec<Completion> = factors
        .iter()
        .map(|(f, _)| Completion::finite(&ring, f, &cyc))
        .collect::<Result<_>>()?;
    let small_inf = Completion::infinity(&ring, &cyc)?;
    let small_extra: Vec<Completion> = extra
        .iter()
        .map(|f| Completion::finite(&ring, f, &cyc))
        .collect::<Result<_>>()?;

    let lift = |f: &[u32]| -> Result<FPoly> {
        let emb = ring.field().embedding(big.field())?;
        Ok(f.iter().map(|&x| emb[x as usize]).collect())
    };
    let inert = |c: &Completion| -> Result<(QuadEtale, Completion)> {
        let e = QuadEtale::new(c.field(), QuadKind::Unramified)?;
        let ext = e.ext().expect("unramified algebra is a field").clone();
        let up = match c.prime() {
            Some(f) => {
                let lifted = lift(f)?;
                let root = e.residue_embedding()[c.t_image().coeff(0) as usize];
                Completion::finite_on(big, &lifted, ext, root)?
            }
            None => Completion::infinity_on(big, ext)?,
        };
        Ok((e, up))
    };

    let mut ram_algebras = Vec::new();
    let mut big_ram = Vec::new();
    for c in &small_ram {
        let (e, up) = inert(c)?;
        ram_algebras.push(e);
        big_ram.push(up);
    }
    let (inf_algebra, big_inf) = inert(&small_inf)?;
    let mut big_extra = Vec::new();
    let mut extra_data = Vec::new();
    let mut big_removed = Vec::new();
    for c in &small_extra {
        let f = c.prime().expect("finite place");
        let lifted = lift(f)?;
        if (f.len() - 1) % 2 == 1 {
            let (e, up) = inert(c)?;
            big_extra.push(up);
            extra_data.push((e, None));
            big_removed.push(lifted);
        } else {
            let e = QuadEtale::new(c.field(), QuadKind::Split)?;
            let parts: Vec<FPoly> = big.factor(&lifted)?.into_iter().map(|(r, _)| r).collect();
            if parts.len() != 2 {
                return Err(Error::Invariant(
                    "even-degree prime does not split in K".into(),
                ));
            }
            let w: Vec<MulChar> = parts
                .iter()
                .map(|r| {
                    chi.value(r, &cyc)
                        .map(|x| MulChar::unramified(c.field(), x))
                        .ok_or_else(|| Error::Invalid("extra place divides the modulus".into()))
                })
                .collect::<Result<_>>()?;
            extra_data.push((e, Some(EChar::Split(w[0].clone(), w[1].clone()))));
            big_removed.extend(parts);
        }
    }

    let big_adelic = chi.localize_at(&cyc, big_ram, big_inf, big_extra)?;
    let mut places: Vec<(&Completion, QuadEtale, EChar)> = Vec::new();
    for ((c, e), comp) in small_ram.iter().zip(ram_algebras).zip(&big_adelic.ramified) {
        places.push((c, e, EChar::Field(comp.chi.clone())));
    }
    places.push((
        &small_inf,
        inf_algebra,
        EChar::Field(big_adelic.infinity.chi.clone()),
    ));
    let mut inert_iter = big_adelic.unramified.iter();
    for (c, (e, split)) in small_extra.iter().zip(extra_data) {
        let ec = match split {
            Some(s) => s,
            None => EChar::Field(inert_iter.next().expect("inert component").chi.clone()),
        };
        places.push((c, e, ec));
    }

    let mut coeff = RatFunc::one(&cyc);
    for (c, e, ec) in places {
        let (group, nu1) = match case {
            CrudeCase::UEven => (GroupTag::UEven(1, e.clone()), None),
            CrudeCase::UOdd => (GroupTag::UOdd(1, e.clone()), Some(E1Char::trivial(&e))),
            _ => return Err(Error::Invalid("not a unitary case".into())),
        };
        let mut d = InducingDatum::new(vec![Block::new(ec)]);
        d.nu1 = nu1;
        let local = classical_coefficient(&group, &d, &c.psi(&ring)?)?;
        coeff = coeff.mul(&local.subst_power(c.degree()));
    }

    let field = small_inf.field();
    let minus_one = CycScalar::from_int(&cyc, -1);
    let small = |x: &HeckeChar| -> Result<RatFunc> { x.partial_l(&extra, &cyc) };
    match case {
        CrudeCase::UEven => {
            let lhs = small(&restricted)?;
            let rhs = coeff.mul(&dual(&small(&restricted.conj())?, field));
            Ok((lhs, rhs))
        }
        _ => {
            let big_l = |x: &HeckeChar| -> Result<RatFunc> {
                Ok(x.partial_l(&big_removed, &cyc)?.subst_power(2))
            };
            let eta = |x: &HeckeChar| -> Result<RatFunc> { small(x)?.subst_scale(&minus_one) };
            let lhs = big_l(chi)?.mul(&eta(&restricted)?.subst_double());
            let conj = chi.conj();
            let rhs = coeff
                .mul(&dual(&big_l(&conj)?, field))
                .mul(&dual(&eta(&conj.restrict(&ring)?)?, field).subst_double());
            Ok((lhs, rhs))
        }
    }
}

pub fn crude_fe_check(
    case: CrudeCase,
    chi: &HeckeChar,
    second: Option<&HeckeChar>,
    extra: &[FPoly],
) -> Result<bool> {
    let (l, r) = match case {
        CrudeCase::UEven | CrudeCase::UOdd => unitary_crude_fe_sides(case, chi, extra)?,
        _ => crude_fe_sides(case, chi, second, extra)?,
    };
    Ok(l == r)
}
