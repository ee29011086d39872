//! Construction and verification of a codimension-two family of exceptional
//! Hermite polynomials, the analytic solutions of their defining differential
//! equation, and the minimal surfaces those solutions induce through the
//! Enneper-Weierstrass immersion.
//!
//! The crate is organised as a pipeline:
//!
//! * [`partitions`] - integer partitions, gap sequences and the admissibility
//!   test that governs which Wronskian constructions stay nonsingular.
//! * [`hermite`] - exact rational polynomials, the classical Hermite family,
//!   and the non-polynomial extensions living on the excluded degrees.
//! * [`exceptional`] - the codimension-two family itself: Wronskian
//!   construction, closed form, weight, norms and the associated potential.
//! * [`series`] - generalized power-series solutions of the family's
//!   differential equation, their closed-form coefficients, and the constants
//!   tying the series basis to the polynomial family.
//! * [`special`] - complex error function, imaginary error function,
//!   generalized hypergeometric sums and half-integer gamma values.
//! * [`quadrature`] - deterministic weighted real-line and complex path
//!   integration with error estimates.
//! * [`weierstrass`] - immersion integrals, surface meshes, the su(2) frame
//!   and the reduced linear problem.
//! * [`verify`] - identity suites: differential-equation residuals, Wronskian
//!   identities, coefficient identities, Gram matrices, frame residuals and
//!   discrete minimality checks.
//!
//! All polynomial and series coefficients are exact `BigRational` values;
//! floating point enters only at evaluation and quadrature time.

pub mod exceptional;
pub mod hermite;
pub mod partitions;
mod poly;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod verify;
pub mod weierstrass;

pub use poly::{rational_to_f64, RationalPoly};

/// Convenience alias used throughout the crate.
pub type Rational = num_rational::BigRational;
/// Complex double-precision scalar used at evaluation time.
pub type C64 = num_complex::Complex64;
