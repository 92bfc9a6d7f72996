//! `F = F_q((t))`, its quadratic étale algebras, and step-function Fourier analysis.

pub mod gf;
pub mod laurent;
pub mod quad;
pub mod step;

pub use gf::{FiniteField, Gf};
pub use laurent::{unit_exponent, LaurentElem, LocalField};
pub use quad::{EElem, QuadEtale, QuadKind};
pub use step::StepFunction;
