//! Bracket polynomials, Gowers uniformity norms, recurrence sets and
//! Mal'cev coordinates on unitriangular nilmanifolds.
//!
//! Most of the algebra is generic over [`Scalar`], which is implemented for
//! `f32`, `f64` and the exact [`Rational`]. The aliases below fix the common
//! instantiations.

pub mod bracket;
pub mod diff;
pub mod gowers;
pub mod interval;
pub mod nil;
pub mod numeric;
pub mod recurrence;
pub mod repro;
pub mod scalar;

pub use interval::Interval;
pub use scalar::{circle_norm, frac, int_part, Rational, Scalar};

/// Realized bracket polynomial with double-precision coefficients.
pub type BracketPolyF64 = bracket::BracketPolynomial<f64>;
/// Realized bracket polynomial with exact rational coefficients.
pub type BracketPolyQ = bracket::BracketPolynomial<Rational>;
/// Symbol binding for float realizations.
pub type BindingF64 = bracket::Binding<f64>;
/// Symbol binding for exact realizations.
pub type BindingQ = bracket::Binding<Rational>;
/// Element of `T_p^r` with double-precision entries.
pub type UnitriangularF64 = nil::Unitriangular<f64>;
/// Element of `T_p^r` with exact rational entries.
pub type UnitriangularQ = nil::Unitriangular<Rational>;
/// Polynomial mapping with exact rational coefficients.
pub type PolyMappingQ = nil::PolynomialMapping<Rational>;

pub use gowers::GowersReport;
