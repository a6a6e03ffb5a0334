//! Truncated jets of functions, differential forms, vector fields and
//! diffeomorphisms at the origin of ℂⁿ, with exact coefficients, and the
//! tests built on them: integrability, isotropy of foliations, logarithmic
//! forms, blow-ups, holonomy and rigidity of homogeneous tuples.
//!
//! Everything is generic over [`coeff::Field`]. The aliases below fix the
//! field for the common cases.

pub mod blowup;
pub mod calculus;
pub mod catalog;
pub mod coeff;
pub mod germdiff;
pub mod holonomy;
pub mod jets;
pub mod linalg;
pub mod logforms;
pub mod rigidity;

#[cfg(test)]
pub(crate) mod testutil;

use num_complex::Complex64;
use num_rational::BigRational;

pub use coeff::{Cyclotomic, Field, GaussianRational};

/// ℚ coefficients.
pub type QJet = jets::Jet<BigRational>;
pub type QForm = calculus::PForm<BigRational>;
pub type QDiffeo = calculus::DiffeoJet<BigRational>;

/// ℚ(i) coefficients, the default exact field.
pub type GaussJet = jets::Jet<GaussianRational>;
pub type GaussForm = calculus::PForm<GaussianRational>;
pub type GaussVectorField = calculus::VectorField<GaussianRational>;
pub type GaussDiffeo = calculus::DiffeoJet<GaussianRational>;
pub type GaussLogForm = logforms::LogForm<GaussianRational>;

/// ℚ(ζ_m) coefficients.
pub type CycloJet = jets::Jet<Cyclotomic>;
pub type CycloForm = calculus::PForm<Cyclotomic>;
pub type CycloVectorField = calculus::VectorField<Cyclotomic>;
pub type CycloDiffeo = calculus::DiffeoJet<Cyclotomic>;
pub type CycloLogForm = logforms::LogForm<Cyclotomic>;

/// Complex floating point coefficients.
pub type FloatJet = jets::Jet<Complex64>;
pub type FloatForm = calculus::PForm<Complex64>;
pub type FloatVectorField = calculus::VectorField<Complex64>;
pub type FloatDiffeo = calculus::DiffeoJet<Complex64>;
