//! Additive and multiplicative characters of local fields and quadratic étale algebras.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::localfield::{EElem, LaurentElem, LocalField, QuadEtale, QuadKind};
use crate::scalar::{Cyc, CycScalar};
use crate::{Error, Result};

/// `ψ = ψ_std^a`, where `ψ_std(x) = ζ_p^{Tr(coefficient of ϖ^{-1} in x)}` has level 0.
#[derive(Clone, Debug)]
pub struct AddChar {
    field: LocalField,
    scale: LaurentElem,
}

impl AddChar {
    pub fn new(field: &LocalField, scale: LaurentElem) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(AddChar {
            field: field.clone(),
            scale,
        })
    }
    pub fn standard(field: &LocalField) -> Self {
        AddChar {
            field: field.clone(),
            scale: LaurentElem::one(),
        }
    }
    /// `ψ_std^{ϖ^{-l}}`, of level `l`.
    pub fn with_level(field: &LocalField, l: i64) -> Self {
        AddChar {
            field: field.clone(),
            scale: LaurentElem::monomial(1, -l),
        }
    }
    pub fn field(&self) -> &LocalField {
        &self.field
    }
    pub fn scale(&self) -> &LaurentElem {
        &self.scale
    }
    pub fn level(&self) -> i64 {
        -self.scale.val().expect("nonzero scale")
    }
    /// `ψ^a(x) = ψ(ax)`.
    pub fn twist(&self, a: &LaurentElem) -> Result<Self> {
        Self::new(&self.field, self.field.mul(&self.scale, a))
    }
    /// `ψ̄ = ψ^{-1}`.
    pub fn conj(&self) -> Self {
        AddChar {
            field: self.field.clone(),
            scale: self.field.neg(&self.scale),
        }
    }
    /// Exponent `e ∈ F_p` with `ψ(x) = ζ_p^e`.
    pub fn exponent(&self, x: &LaurentElem) -> u32 {
        if x.is_zero() {
            return 0;
        }
        let res = self.field.res();
        let sv = self.scale.val().expect("nonzero scale");
        let mut acc = 0;
        for (i, &s) in self.scale.coeffs().iter().enumerate() {
            if s == 0 {
                continue;
            }
            let c = x.coeff(-1 - (sv + i as i64));
            if c != 0 {
                acc = res.add(acc, res.mul(s, c));
            }
        }
        res.trace(acc)
    }
    pub fn eval(&self, x: &LaurentElem) -> CycScalar {
        let ctx = self.field.cyc();
        let m = ctx.order() as i64;
        CycScalar::root_of_unity(ctx, self.exponent(x) as i64 * (m / self.field.p() as i64))
    }
    /// `ψ_E = ψ ∘ Tr_{E/F}` as a character of the field `E` (non-split algebras).
    pub fn lift(&self, e: &QuadEtale) -> Result<Self> {
        let ext = e
            .ext()
            .ok_or_else(|| Error::AlgebraMismatch("split algebra has no field lift".into()))?;
        let a = e.embed_field(&self.scale);
        let scale = match e.kind() {
            QuadKind::Unramified => a,
            QuadKind::Ramified => {
                let two = ext.res().from_int(2);
                ext.mul(&a, &LaurentElem::monomial(two, 1))
            }
            QuadKind::Split => unreachable!(),
        };
        Self::new(ext, scale)
    }
    pub fn to_json(&self) -> Value {
        json!({"level": self.level(), "scale": self.scale.to_json()})
    }
}

fn modinv(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// A character of `F_Q((ϖ))^×`: exponents of `ζ_M` on `(O/ϖ^m)^×`, indexed by
/// unit index (`-1` marks non-units), and its value `w` at `ϖ`.
#[derive(Clone, Debug)]
pub struct MulChar {
    field: LocalField,
    m: usize,
    table: Arc<Vec<i32>>,
    w: CycScalar,
}

impl PartialEq for MulChar {
    fn eq(&self, other: &Self) -> bool {
        if self.field.q() != other.field.q() || self.w != other.w {
            return false;
        }
        let m = self.m.max(other.m);
        let n = (self.field.q() as usize).pow(m as u32);
        (0..n)
            .filter_map(|i| self.field.unit_from_index(i, m))
            .all(|u| {
                self.table[self.field.unit_index(&u, self.m)]
                    == other.table[other.field.unit_index(&u, other.m)]
            })
    }
}

impl MulChar {
    pub fn trivial(field: &LocalField) -> Self {
        Self::unramified(field, CycScalar::one(field.cyc()))
    }
    /// The unramified character with `χ(ϖ) = w`.
    pub fn unramified(field: &LocalField, w: CycScalar) -> Self {
        MulChar {
            field: field.clone(),
            m: 0,
            table: Arc::new(vec![0]),
            w,
        }
    }

    /// Builds a character from exponents on the unit group mod `ϖ^m`, checking the homomorphism property.
    pub fn from_table(field: &LocalField, m: usize, table: Vec<i32>, w: CycScalar) -> Result<Self> {
        let n = (field.q() as usize).pow(m as u32);
        if table.len() != n {
            return Err(Error::Invalid(format!(
                "character table has {} entries, expected {n}",
                table.len()
            )));
        }
        if w.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let order = field.cyc().order() as i32;
        let table: Vec<i32> = table
            .into_iter()
            .map(|e| if e < 0 { -1 } else { e.rem_euclid(order) })
            .collect();
        let chi = MulChar {
            field: field.clone(),
            m,
            table: Arc::new(table),
            w,
        };
        chi.check_homomorphism()?;
        Ok(chi)
    }

    /// Builds a character from a function giving `ζ_M`-exponents on units mod `ϖ^m`.
    pub fn from_fn(
        field: &LocalField,
        m: usize,
        w: CycScalar,
        f: impl Fn(&LaurentElem) -> Result<i64>,
    ) -> Result<Self> {
        let n = (field.q() as usize).pow(m as u32);
        let order = field.cyc().order() as i64;
        let mut table = vec![-1i32; n];
        for (i, slot) in table.iter_mut().enumerate() {
            if let Some(u) = field.unit_from_index(i, m) {
                *slot = f(&u)?.rem_euclid(order) as i32;
            }
        }
        Self::from_table(field, m, table, w)
    }

    fn check_homomorphism(&self) -> Result<()> {
        let n = self.table.len();
        if self.table[if self.m == 0 { 0 } else { 1 }] != 0 {
            return Err(Error::Invalid("character is not 1 at 1".into()));
        }
        let units: Vec<usize> = (0..n).filter(|&i| self.table[i] >= 0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let order = self.field.cyc().order() as i32;
        let trials = if units.len() <= 12 {
            units.len() * units.len()
        } else {
            128
        };
        for t in 0..trials {
            let (a, b) = if units.len() <= 12 {
                (units[t / units.len()], units[t % units.len()])
            } else {
                (
                    units[rng.gen_range(0..units.len())],
                    units[rng.gen_range(0..units.len())],
                )
            };
            let ab = self.field.mul_index(a, b, self.m);
            if (self.table[a] + self.table[b]).rem_euclid(order) != self.table[ab] {
                return Err(Error::Invalid(
                    "character table is not a homomorphism".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }
    pub fn cyc(&self) -> &Cyc {
        self.field.cyc()
    }
    /// Level `m` of the stored table.
    pub fn level(&self) -> usize {
        self.m
    }
    pub fn w(&self) -> &CycScalar {
        &self.w
    }
    pub fn table(&self) -> &[i32] {
        &self.table
    }

    /// `ζ_M`-exponent of `χ(u)` for a unit `u`.
    pub fn unit_exponent(&self, u: &LaurentElem) -> Result<i32> {
        if u.val() != Some(0) {
            return Err(Error::Invalid("unit expected".into()));
        }
        Ok(self.table[self.field.unit_index(u, self.m)])
    }

    pub fn eval(&self, x: &LaurentElem) -> Result<CycScalar> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        let e = self.table[self.field.unit_index(&x.unit_part(), self.m)];
        let z = CycScalar::root_of_unity(self.cyc(), e as i64);
        if v == 0 {
            return Ok(z);
        }
        Ok(&z * &self.w.pow(v)?)
    }

    /// Conductor exponent: the least `N` with `χ` trivial on `1 + ϖ^N`.
    pub fn conductor(&self) -> usize {
        let q = self.field.q() as usize;
        for c in 0..=self.m {
            let step = q.pow(c as u32);
            let base = if c == 0 { 0 } else { 1 };
            let trivial = (0..self.table.len())
                .filter(|i| i % step == base % step.max(1) && self.table[*i] >= 0)
                .all(|i| self.table[i] == 0);
            if trivial {
                return c;
            }
        }
        self.m
    }
    pub fn is_unramified(&self) -> bool {
        self.conductor() == 0
    }
    /// `true` when all values have absolute value one.
    pub fn is_unitary(&self) -> bool {
        (&self.w * &self.w.conj()).is_one()
    }

    /// The same character stored at level `m'`.
    pub fn at_level(&self, m: usize) -> Result<Self> {
        if m < self.conductor() {
            return Err(Error::Invalid(format!("level {m} is below the conductor")));
        }
        let n = (self.field.q() as usize).pow(m as u32);
        let table = (0..n)
            .map(|i| match self.field.unit_from_index(i, m) {
                Some(u) => self.table[self.field.unit_index(&u, self.m)],
                None => -1,
            })
            .collect();
        Ok(MulChar {
            field: self.field.clone(),
            m,
            table: Arc::new(table),
            w: self.w.clone(),
        })
    }
    /// The same character stored at its conductor.
    pub fn reduced(&self) -> Self {
        self.at_level(self.conductor()).expect("conductor level")
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field.q() != other.field.q() || self.cyc().order() != other.cyc().order() {
            return Err(Error::AlgebraMismatch(
                "characters of different fields".into(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let m = self.m.max(other.m);
        let a = self.at_level(m)?;
        let b = other.at_level(m)?;
        let order = self.cyc().order() as i32;
        let table = a
            .table
            .iter()
            .zip(b.table.iter())
            .map(|(&x, &y)| if x < 0 { -1 } else { (x + y).rem_euclid(order) })
            .collect();
        Ok(MulChar {
            field: self.field.clone(),
            m,
            table: Arc::new(table),
            w: &self.w * &other.w,
        })
    }
    pub fn inv(&self) -> Self {
        let order = self.cyc().order() as i32;
        let table = self
            .table
            .iter()
            .map(|&x| if x < 0 { -1 } else { (-x).rem_euclid(order) })
            .collect();
        MulChar {
            field: self.field.clone(),
            m: self.m,
            table: Arc::new(table),
            w: self.w.inv().expect("nonzero uniformizer value"),
        }
    }
    pub fn pow(&self, k: i64) -> Self {
        let order = self.cyc().order() as i64;
        let table = self
            .table
            .iter()
            .map(|&x| {
                if x < 0 {
                    -1
                } else {
                    (x as i64 * k).rem_euclid(order) as i32
                }
            })
            .collect();
        MulChar {
            field: self.field.clone(),
            m: self.m,
            table: Arc::new(table),
            w: self.w.pow(k).expect("nonzero uniformizer value"),
        }
    }
    pub fn square(&self) -> Self {
        self.pow(2)
    }
    /// Multiplies `w` by `c`, i.e. twists by the unramified character `ϖ ↦ c`.
    pub fn twist_by(&self, c: &CycScalar) -> Self {
        MulChar {
            field: self.field.clone(),
            m: self.m,
            table: self.table.clone(),
            w: &self.w * c,
        }
    }
    /// Twist by `|·|^{k2/2}`: multiplies `w` by `√Q^{-k2}`.
    pub fn twist_unramified(&self, k2: i64) -> Self {
        let c = CycScalar::sqrt_p_pow(self.cyc(), -(self.field.f() as i64) * k2);
        self.twist_by(&c)
    }

    /// A uniformly random character of `(O/ϖ^m)^×` with `χ(ϖ) = w`.
    pub fn random(field: &LocalField, m: usize, w: CycScalar, rng: &mut impl Rng) -> Result<Self> {
        let table = extend_characters(field, m, HashMap::new(), &mut |d| rng.gen_range(0..d))?;
        Self::from_table(field, m, table, w)
    }
    /// A random character with a random root-of-unity value at `ϖ`.
    pub fn random_unitary(field: &LocalField, m: usize, rng: &mut impl Rng) -> Result<Self> {
        let k = rng.gen_range(0..field.cyc().order() as i64);
        let w = CycScalar::root_of_unity(field.cyc(), k);
        Self::random(field, m, w, rng)
    }
    /// Every character of `(O/ϖ^m)^×`, with `χ(ϖ) = w`.
    pub fn enumerate(field: &LocalField, m: usize, w: &CycScalar) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        loop {
            let mut depth = 0;
            let mut limits = Vec::new();
            let table = extend_characters(field, m, HashMap::new(), &mut |d| {
                let c = path.get(depth).copied().unwrap_or(0);
                if depth >= limits.len() {
                    limits.push(d);
                }
                depth += 1;
                c
            })?;
            out.push(Self::from_table(field, m, table, w.clone())?);
            path.resize(limits.len(), 0);
            let mut i = limits.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                path[i] += 1;
                if path[i] < limits[i] {
                    path.truncate(i + 1);
                    break;
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let c = self.reduced();
        json!({
            "q": self.field.q(),
            "m": c.m,
            "order": self.cyc().order(),
            "table": *c.table,
            "w": self.w.to_json(),
        })
    }
    pub fn from_json(field: &LocalField, v: &Value) -> Result<Self> {
        let q = v
            .get("q")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("character JSON: q".into()))?;
        if q != field.q() {
            return Err(Error::AlgebraMismatch(format!(
                "character over F_{q} used with F_{}",
                field.q()
            )));
        }
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("character JSON: m".into()))?;
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .unwrap_or(field.cyc().order() as u64);
        let own = field.cyc().order() as u64;
        if !own.is_multiple_of(order) {
            return Err(Error::OrderOverflow {
                order,
                modulus: own as usize,
            });
        }
        let mult = (own / order) as i64;
        let table = v
            .get("table")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("character JSON: table".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .map(|e| if e < 0 { -1 } else { (e * mult) as i32 })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("character JSON: table entries".into()))?;
        let w = match v.get("w") {
            Some(w) => CycScalar::from_json(field.cyc(), w)?,
            None => CycScalar::one(field.cyc()),
        };
        Self::from_table(field, m as usize, table, w)
    }
}

/// Extends a partial character (unit index → exponent) to all of `(O/ϖ^m)^×`,
/// adding one element at a time; `choose(d)` picks one of the `d` admissible roots.
fn extend_characters(
    field: &LocalField,
    m: usize,
    seed: HashMap<usize, i64>,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<Vec<i32>> {
    let n = (field.q() as usize).pow(m as u32);
    let order = field.cyc().order() as i64;
    let one = if m == 0 { 0 } else { 1 };
    let mut val: Vec<Option<i64>> = vec![None; n];
    let mut members = vec![one];
    val[one] = Some(0);
    for (&k, &e) in &seed {
        if val[k].is_none() {
            members.push(k);
        }
        val[k] = Some(e.rem_euclid(order));
    }
    for g in 0..n {
        if val[g].is_some() || field.unit_from_index(g, m).is_none() {
            continue;
        }
        let mut pw = g;
        let mut k = 1usize;
        while val[pw].is_none() {
            pw = field.mul_index(pw, g, m);
            k += 1;
        }
        let e = val[pw].expect("member");
        let d = (k as i64).gcd(&order);
        if e % d != 0 {
            return Err(Error::OrderOverflow {
                order: (k as i64 * order / d) as u64,
                modulus: order as usize,
            });
        }
        let step = order / d;
        let base = (e / d) * modinv(k as i64 / d, step).unwrap_or(0) % step;
        let root = (base + step * choose(d as usize) as i64).rem_euclid(order);
        let snapshot = members.clone();
        let mut gi = one;
        for i in 0..k {
            if i > 0 {
                for &h in &snapshot {
                    let x = field.mul_index(gi, h, m);
                    if val[x].is_none() {
                        val[x] =
                            Some((i as i64 * root + val[h].expect("member")).rem_euclid(order));
                        members.push(x);
                    }
                }
            }
            gi = field.mul_index(gi, g, m);
        }
    }
    Ok(val
        .into_iter()
        .map(|v| v.map_or(-1, |e| e as i32))
        .collect())
}

/// Character data of `E^×` for a quadratic étale algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum EChar {
    /// A character of the field `E` (unramified or ramified algebra).
    Field(MulChar),
    /// `χ₁ ⊗ χ₂` on `F × F`.
    Split(MulChar, MulChar),
}

impl EChar {
    pub fn trivial(e: &QuadEtale) -> Self {
        match e.ext() {
            Some(ext) => EChar::Field(MulChar::trivial(ext)),
            None => EChar::Split(MulChar::trivial(e.base()), MulChar::trivial(e.base())),
        }
    }
    pub fn eval(&self, x: &EElem) -> Result<CycScalar> {
        match (self, x) {
            (EChar::Field(c), EElem::Field(a)) => c.eval(a),
            (EChar::Split(c1, c2), EElem::Split(a, b)) => Ok(&c1.eval(a)? * &c2.eval(b)?),
            _ => Err(Error::AlgebraMismatch(
                "character and element of different algebras".into(),
            )),
        }
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (EChar::Field(a), EChar::Field(b)) => Ok(EChar::Field(a.mul(b)?)),
            (EChar::Split(a1, a2), EChar::Split(b1, b2)) => {
                Ok(EChar::Split(a1.mul(b1)?, a2.mul(b2)?))
            }
            _ => Err(Error::AlgebraMismatch(
                "characters of different algebras".into(),
            )),
        }
    }
    pub fn inv(&self) -> Self {
        match self {
            EChar::Field(a) => EChar::Field(a.inv()),
            EChar::Split(a, b) => EChar::Split(a.inv(), b.inv()),
        }
    }
    /// `χ^conj(x) = χ(x̄)`.
    pub fn conj(&self, e: &QuadEtale) -> Result<Self> {
        match self {
            EChar::Split(a, b) => Ok(EChar::Split(b.clone(), a.clone())),
            EChar::Field(c) => {
                let w = match e.kind() {
                    QuadKind::Ramified => {
                        let minus_one = LaurentElem::monomial(c.field().res().from_int(-1), 0);
                        &c.eval(&minus_one)? * c.w()
                    }
                    _ => c.w().clone(),
                };
                let chi = MulChar::from_fn(c.field(), c.level(), w, |u| {
                    Ok(c.unit_exponent(&e.conj_field(u))? as i64)
                })?;
                Ok(EChar::Field(chi))
            }
        }
    }
    /// Twist by `|·|_E^{k2/2}`.
    pub fn twist_unramified(&self, k2: i64) -> Self {
        match self {
            EChar::Field(c) => EChar::Field(c.twist_unramified(k2)),
            EChar::Split(a, b) => EChar::Split(a.twist_unramified(k2), b.twist_unramified(k2)),
        }
    }
    pub fn twist_by(&self, c: &CycScalar) -> Self {
        match self {
            EChar::Field(a) => EChar::Field(a.twist_by(c)),
            EChar::Split(a, b) => EChar::Split(a.twist_by(c), b.twist_by(c)),
        }
    }
    pub fn is_unitary(&self) -> bool {
        match self {
            EChar::Field(a) => a.is_unitary(),
            EChar::Split(a, b) => a.is_unitary() && b.is_unitary(),
        }
    }
    pub fn is_unramified(&self) -> bool {
        match self {
            EChar::Field(a) => a.is_unramified(),
            EChar::Split(a, b) => a.is_unramified() && b.is_unramified(),
        }
    }
    pub fn to_json(&self) -> Value {
        match self {
            EChar::Field(a) => json!({"field": a.to_json()}),
            EChar::Split(a, b) => json!({"split": [a.to_json(), b.to_json()]}),
        }
    }
}

/// `χ ∘ N_{E/F}`.
pub fn base_change(chi: &MulChar, e: &QuadEtale) -> Result<EChar> {
    match e.kind() {
        QuadKind::Split => Ok(EChar::Split(chi.clone(), chi.clone())),
        kind => {
            let ext = e.ext().expect("field");
            let m = chi.conductor();
            let m_e = if kind == QuadKind::Ramified { 2 * m } else { m };
            let w = chi.eval(&e.norm_field(&LaurentElem::monomial(1, 1))?)?;
            let c = MulChar::from_fn(ext, m_e, w, |u| {
                Ok(chi.unit_exponent(&e.norm_field(u)?)? as i64)
            })?;
            Ok(EChar::Field(c))
        }
    }
}

/// `χ|_{F^×}` along the diagonal embedding.
pub fn restrict_to_f(chi: &EChar, e: &QuadEtale) -> Result<MulChar> {
    match chi {
        EChar::Split(a, b) => a.mul(b),
        EChar::Field(c) => {
            let m_e = c.conductor();
            let m = if e.kind() == QuadKind::Ramified {
                m_e.div_ceil(2)
            } else {
                m_e
            };
            let w = c.eval(&e.embed_field(&LaurentElem::monomial(1, 1)))?;
            Ok(MulChar::from_fn(e.base(), m, w, |u| {
                Ok(c.unit_exponent(&e.embed_field(u))? as i64)
            })?
            .reduced())
        }
    }
}

/// A character of `E¹ = ker N_{E/F}`.
#[derive(Clone, Debug)]
pub enum E1Char {
    /// Values on norm-one classes modulo `1 + ϖ_E^m`, keyed by unit index, for field algebras.
    Field {
        m: usize,
        values: HashMap<usize, i64>,
    },
    /// `(z, z^{-1}) ↦ ν₀(z)` for the split algebra.
    Split(MulChar),
}

impl E1Char {
    pub fn trivial(e: &QuadEtale) -> Self {
        match e.kind() {
            QuadKind::Split => E1Char::Split(MulChar::trivial(e.base())),
            _ => E1Char::Field {
                m: 0,
                values: HashMap::from([(0, 0)]),
            },
        }
    }
    /// Restriction of a character of `E^×` to `E¹`.
    pub fn restrict(chi: &EChar, e: &QuadEtale) -> Result<Self> {
        match chi {
            EChar::Split(a, b) => Ok(E1Char::Split(a.mul(&b.inv())?)),
            EChar::Field(c) => {
                let m = c.conductor().max(1);
                let ext = e.ext().expect("field");
                let mut values = HashMap::new();
                for z in norm_one_classes(e, m)? {
                    values.insert(ext.unit_index(&z, m), c.unit_exponent(&z)? as i64);
                }
                Ok(E1Char::Field { m, values })
            }
        }
    }
    /// Value exponent at a norm-one element (field algebras).
    pub fn exponent(&self, e: &QuadEtale, z: &LaurentElem) -> Result<i64> {
        match self {
            E1Char::Field { m, values } => {
                let ext = e.ext().expect("field");
                let idx = ext.unit_index(z, *m);
                values
                    .get(&idx)
                    .copied()
                    .ok_or_else(|| Error::Invalid("element is not of norm one".into()))
            }
            E1Char::Split(_) => Err(Error::AlgebraMismatch("split E¹ character".into())),
        }
    }
}

/// The classes `ū/u` modulo `1 + ϖ_E^m`, plus `-1` in the ramified case.
pub fn norm_one_classes(e: &QuadEtale, m: usize) -> Result<Vec<LaurentElem>> {
    let ext = e
        .ext()
        .ok_or_else(|| Error::AlgebraMismatch("split algebra".into()))?;
    let n = (ext.q() as usize).pow(m as u32);
    let mut seen = HashMap::new();
    for i in 0..n {
        if let Some(u) = ext.unit_from_index(i, m) {
            let z = ext.mul_trunc(&e.conj_field(&u), &ext.inv_unit_mod(&u, m)?, m as i64);
            seen.entry(ext.unit_index(&z, m)).or_insert(z);
        }
    }
    if e.kind() == QuadKind::Ramified {
        let minus = LaurentElem::monomial(ext.res().from_int(-1), 0);
        let mut extra = Vec::new();
        for z in seen.values() {
            let y = ext.mul_trunc(&minus, z, m as i64);
            extra.push((ext.unit_index(&y, m), y));
        }
        for (k, y) in extra {
            seen.entry(k).or_insert(y);
        }
    }
    let mut out: Vec<(usize, LaurentElem)> = seen.into_iter().collect();
    out.sort_by_key(|(k, _)| *k);
    Ok(out.into_iter().map(|(_, z)| z).collect())
}

/// `ν(z) = ν′(z̄ z^{-1})`.
pub fn hilbert90_extend(nu1: &E1Char, e: &QuadEtale) -> Result<EChar> {
    match nu1 {
        E1Char::Split(nu0) => Ok(EChar::Split(nu0.inv(), nu0.clone())),
        E1Char::Field { m, .. } => {
            let ext = e.ext().expect("field");
            let m = *m;
            let pi = LaurentElem::monomial(1, 1);
            let ratio = ext.mul_trunc(
                &e.conj_field(&pi).shift(-1),
                &LaurentElem::one(),
                m.max(1) as i64,
            );
            let w_exp = nu1
                .exponent(e, &ratio.truncate(m.max(1) as i64))
                .or_else(|_| {
                    if m == 0 {
                        Ok(0)
                    } else {
                        Err(Error::Invalid("ν′ undefined at ϖ̄/ϖ".into()))
                    }
                })?;
            let w = CycScalar::root_of_unity(ext.cyc(), w_exp);
            let chi = MulChar::from_fn(ext, m, w, |u| {
                if m == 0 {
                    return Ok(0);
                }
                let z = ext.mul_trunc(&e.conj_field(u), &ext.inv_unit_mod(u, m)?, m as i64);
                nu1.exponent(e, &z)
            })?;
            Ok(EChar::Field(chi))
        }
    }
}
