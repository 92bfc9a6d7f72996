//! Exact scalars in `Q(ζ_M)`, polynomials and rational functions of `Z = q^{-s}`.

pub mod cyclotomic;
pub mod float;
pub mod poly;
pub mod ratfunc;

pub use cyclotomic::{prime_power, Cyc, CycContext, CycScalar, Residue};
pub use poly::Poly;
pub use ratfunc::{Monomial, NumeratorSplit, RatFunc};
