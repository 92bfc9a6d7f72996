//! Quadratic étale algebras over `F = F_q((t))`.

use serde_json::{json, Value};

use super::gf::FiniteField;
use super::laurent::{LaurentElem, LocalField};
use crate::scalar::CycScalar;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadKind {
    Split,
    Unramified,
    Ramified,
}

impl QuadKind {
    pub fn name(self) -> &'static str {
        match self {
            QuadKind::Split => "split",
            QuadKind::Unramified => "unramified",
            QuadKind::Ramified => "tame_ramified",
        }
    }
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(QuadKind::Split),
            "unramified" | "inert" => Ok(QuadKind::Unramified),
            "ramified" | "tame_ramified" => Ok(QuadKind::Ramified),
            _ => Err(Error::Invalid(format!("unknown algebra kind {s}"))),
        }
    }
}

/// An element of `E`: a pair for `F × F`, a single series otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EElem {
    Split(LaurentElem, LaurentElem),
    Field(LaurentElem),
}

impl EElem {
    pub fn is_unit_of_algebra(&self) -> bool {
        match self {
            EElem::Split(a, b) => !a.is_zero() && !b.is_zero(),
            EElem::Field(a) => !a.is_zero(),
        }
    }
}

/// `E` over `F`. In the field cases `E` is itself a local field `F_Q((ϖ_E))`:
/// unramified `E = F_{q²}((t))`, ramified `E = F_q((ϖ))` with `ϖ² = t`.
#[derive(Clone, Debug)]
pub struct QuadEtale {
    kind: QuadKind,
    base: LocalField,
    ext: Option<LocalField>,
    embed: Vec<u32>,
    unembed: Vec<Option<u32>>,
}

impl QuadEtale {
    pub fn new(base: &LocalField, kind: QuadKind) -> Result<Self> {
        let q = base.res().q();
        match kind {
            QuadKind::Split => Ok(QuadEtale {
                kind,
                base: base.clone(),
                ext: None,
                embed: (0..q).collect(),
                unembed: (0..q).map(Some).collect(),
            }),
            QuadKind::Unramified => {
                let res_e = FiniteField::new(base.res().p(), 2 * base.res().n())?;
                let embed = base.res().embedding(&res_e)?;
                let mut unembed = vec![None; res_e.q() as usize];
                for (x, &y) in embed.iter().enumerate() {
                    unembed[y as usize] = Some(x as u32);
                }
                let ext = LocalField::new(res_e, base.cyc().clone(), base.prec())?;
                Ok(QuadEtale {
                    kind,
                    base: base.clone(),
                    ext: Some(ext),
                    embed,
                    unembed,
                })
            }
            QuadKind::Ramified => {
                if base.p() == 2 {
                    return Err(Error::Unsupported(
                        "ramified quadratic extensions in characteristic 2".into(),
                    ));
                }
                let ext =
                    LocalField::new(base.res().clone(), base.cyc().clone(), 2 * base.prec() + 2)?;
                Ok(QuadEtale {
                    kind,
                    base: base.clone(),
                    ext: Some(ext),
                    embed: (0..q).collect(),
                    unembed: (0..q).map(Some).collect(),
                })
            }
        }
    }

    /// Root-of-unity orders needed for characters of `E` of conductor at most
    /// `2m` when `F` has residue field of size `q`.
    pub fn required_orders(q: u64, m: usize) -> Vec<u64> {
        vec![super::laurent::unit_exponent(q * q, 2 * m)]
    }

    pub fn kind(&self) -> QuadKind {
        self.kind
    }
    pub fn base(&self) -> &LocalField {
        &self.base
    }
    /// The field `E` in the non-split cases.
    pub fn ext(&self) -> Option<&LocalField> {
        self.ext.as_ref()
    }
    /// Residue field embedding `F_q → F_{q_E}` as an index table.
    pub fn residue_embedding(&self) -> &[u32] {
        &self.embed
    }
    /// Power `d` with `Z_E = Z_F^d`, where `Z_E = q_E^{-s}`.
    pub fn z_power(&self) -> usize {
        match self.kind {
            QuadKind::Unramified => 2,
            _ => 1,
        }
    }
    /// Ramification index of `E/F`.
    pub fn ram_index(&self) -> i64 {
        match self.kind {
            QuadKind::Ramified => 2,
            _ => 1,
        }
    }

    pub fn embed(&self, x: &LaurentElem) -> EElem {
        match self.kind {
            QuadKind::Split => EElem::Split(x.clone(), x.clone()),
            QuadKind::Unramified => EElem::Field(x.map_coeffs(|c| self.embed[c as usize])),
            QuadKind::Ramified => EElem::Field(x.subst_power(2)),
        }
    }
    /// Embedding of `F` into the field `E` (field cases only).
    pub fn embed_field(&self, x: &LaurentElem) -> LaurentElem {
        match self.embed(x) {
            EElem::Field(y) => y,
            EElem::Split(a, _) => a,
        }
    }

    /// The element of `F` equal to `y`; fails when `y ∉ F`.
    pub fn descend(&self, y: &EElem) -> Result<LaurentElem> {
        match (self.kind, y) {
            (QuadKind::Split, EElem::Split(a, b)) => {
                if a == b {
                    Ok(a.clone())
                } else {
                    Err(Error::Invariant("split element is not diagonal".into()))
                }
            }
            (QuadKind::Unramified, EElem::Field(a)) => {
                let c = a
                    .coeffs()
                    .iter()
                    .map(|&c| self.unembed[c as usize])
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| {
                        Error::Invariant("coefficient outside the base residue field".into())
                    })?;
                Ok(LaurentElem::new(a.val().unwrap_or(0), c))
            }
            (QuadKind::Ramified, EElem::Field(a)) => a.unsubst_power(2),
            _ => Err(Error::AlgebraMismatch(
                "element does not belong to this algebra".into(),
            )),
        }
    }

    pub fn conj(&self, y: &EElem) -> EElem {
        match y {
            EElem::Split(a, b) => EElem::Split(b.clone(), a.clone()),
            EElem::Field(a) => {
                let e = self.ext.as_ref().expect("field case");
                match self.kind {
                    QuadKind::Unramified => EElem::Field(e.frob(a, self.base.f())),
                    _ => EElem::Field(e.negate_uniformizer(a)),
                }
            }
        }
    }
    /// Conjugation on the field `E`.
    pub fn conj_field(&self, a: &LaurentElem) -> LaurentElem {
        match self.conj(&EElem::Field(a.clone())) {
            EElem::Field(b) => b,
            EElem::Split(b, _) => b,
        }
    }

    pub fn add(&self, x: &EElem, y: &EElem) -> Result<EElem> {
        match (x, y) {
            (EElem::Split(a, b), EElem::Split(c, d)) => {
                Ok(EElem::Split(self.base.add(a, c), self.base.add(b, d)))
            }
            (EElem::Field(a), EElem::Field(b)) => {
                Ok(EElem::Field(self.ext.as_ref().expect("field").add(a, b)))
            }
            _ => Err(Error::AlgebraMismatch("mixed element kinds".into())),
        }
    }
    pub fn mul(&self, x: &EElem, y: &EElem) -> Result<EElem> {
        match (x, y) {
            (EElem::Split(a, b), EElem::Split(c, d)) => {
                Ok(EElem::Split(self.base.mul(a, c), self.base.mul(b, d)))
            }
            (EElem::Field(a), EElem::Field(b)) => {
                Ok(EElem::Field(self.ext.as_ref().expect("field").mul(a, b)))
            }
            _ => Err(Error::AlgebraMismatch("mixed element kinds".into())),
        }
    }
    pub fn trace(&self, y: &EElem) -> Result<LaurentElem> {
        self.descend(&self.add(y, &self.conj(y))?)
    }
    pub fn norm(&self, y: &EElem) -> Result<LaurentElem> {
        self.descend(&self.mul(y, &self.conj(y))?)
    }
    /// Norm on the field `E`.
    pub fn norm_field(&self, a: &LaurentElem) -> Result<LaurentElem> {
        self.norm(&EElem::Field(a.clone()))
    }

    /// `η_{E/F}(x)`, the quadratic character attached to `E`.
    pub fn eta(&self, x: &LaurentElem) -> Result<i32> {
        let v = x.val().ok_or(Error::ZeroArgument)?;
        Ok(match self.kind {
            QuadKind::Split => 1,
            QuadKind::Unramified => {
                if v.rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            }
            QuadKind::Ramified => {
                let res = self.base.res();
                let mut lead = x.leading().expect("nonzero");
                if v.rem_euclid(2) == 1 {
                    lead = res.neg(lead);
                }
                if res.is_square(lead) {
                    1
                } else {
                    -1
                }
            }
        })
    }

    /// The distinguished element `β` with `O_E = O_F ⊕ β O_F` and `Tr(β) ∈ O_F^×`.
    pub fn beta(&self) -> EElem {
        match self.kind {
            QuadKind::Split => EElem::Split(LaurentElem::zero(), LaurentElem::one()),
            QuadKind::Unramified => {
                let e = self.ext.as_ref().expect("field");
                let res_e = e.res();
                let b = (0..res_e.q())
                    .find(|&b| {
                        self.unembed[b as usize].is_none()
                            && res_e.add(b, res_e.frob(b, self.base.f())) != 0
                    })
                    .expect("element of nonzero trace outside the base");
                EElem::Field(LaurentElem::monomial(b, 0))
            }
            QuadKind::Ramified => {
                let res = self.base.res();
                let half = res.inv(res.from_int(2)).expect("odd characteristic");
                EElem::Field(LaurentElem::new(0, vec![half, half]))
            }
        }
    }

    /// The constant `c` with `μ_{ψ_E} = c · (μ_ψ ⊗ μ_ψ)` on `O_F ⊕ β O_F`.
    pub fn haar_constant(&self) -> CycScalar {
        let ctx = self.base.cyc();
        match self.kind {
            QuadKind::Split | QuadKind::Unramified => CycScalar::one(ctx),
            QuadKind::Ramified => {
                let l = 0i64;
                let l_e = 2 * l - 1;
                let f = self.base.f() as i64;
                let vol_e = CycScalar::sqrt_p_pow(ctx, f * l_e);
                let vol_prod = CycScalar::sqrt_p_pow(ctx, 2 * f * l);
                &vol_e * &vol_prod.inv().expect("nonzero volume")
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let beta = match self.beta() {
            EElem::Split(a, b) => json!([a.to_json(), b.to_json()]),
            EElem::Field(a) => a.to_json(),
        };
        json!({"kind": self.kind.name(), "q": self.base.q(), "beta": beta})
    }
}
