//! Exact local factors over local function fields.
//!
//! Everything is computed in a cyclotomic field containing `√q`, as rational
//! functions of the indeterminate `Z = q^{-s}`. The crate covers Tate's
//! abelian γ/L/ε-factors over `F_q((t))` and its quadratic étale algebras,
//! Langlands–Shahidi local coefficients of principal series of classical
//! groups, unramified Satake factors, and Hecke L-functions over `F_q(t)`.

pub mod abelian;
pub mod characters;
pub mod error;
pub mod hecke;
pub mod localfield;
pub mod lscoeff;
pub mod satake;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
