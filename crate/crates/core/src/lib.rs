//! Real and complex spherical designs through their Gramians.
//!
//! A weighted spherical design for a unitarily invariant polynomial space `P`
//! is a cubature rule on the unit sphere of `R^d` or `C^d`. Such designs are
//! determined by the Gramian of their points, and membership is characterised
//! variationally: a "potential" `A_{F,w}(Phi) = sum_{j,k} w_j w_k F(<v_j,v_k>)`
//! built from a univariate polynomial `F` with nonnegative Gegenbauer (real
//! case) or disk-polynomial (complex case) coefficients is bounded below by
//! its constant coefficient, with equality exactly at the designs.
//!
//! This crate provides:
//!
//! - [`config`]: configurations, Gramians, angle multisets, m-weights and
//!   their JSON serialization;
//! - [`gegenbauer`]: the polynomials `Q_k^(d)` and `Q_pq^(d)`, quadrature
//!   inner products, basis conversion, products and sum identities;
//! - [`indices`]: the index-set algebra (`k.l`, `(p,q).(r,s)`, `tau*`, named
//!   design families);
//! - [`potentials`]: moment constants, canonical and monomial potentials, and
//!   potential evaluation on Gramians;
//! - [`designs`]: design verification and numerical synthesis by projected
//!   gradient descent;
//! - [`bounds`]: upper/lower/absolute/special/Fisher-type bounds, annihilator
//!   polynomials, and tightness certification;
//! - [`builtin`]: reference configurations (simplex, orthoplex, icosahedron,
//!   roots of unity, ...).
//!
//! Core numerics are generic over the scalar type through [`scalar::Scalar`]
//! (any `num_traits::Float` with conversions); the crate root exports `f64`
//! aliases which the CLI and the test suites use.

pub mod bounds;
pub mod builtin;
pub mod config;
pub mod designs;
pub mod error;
pub mod gegenbauer;
pub mod indices;
pub mod poly;
pub mod potentials;
pub mod quadrature;
pub mod roots;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar type used by the CLI and the acceptance suites.
pub type Real = f64;
/// Complex scalar over [`Real`].
pub type Complex = num_complex::Complex<Real>;

pub type Configuration = config::Configuration<Real>;
pub type Gramian = config::Gramian<Real>;
pub type AngleSet = config::AngleSet<Real>;
pub type RealPolynomial = poly::RealPolynomial<Real>;
pub type BivariatePoly = poly::BivariatePoly<Real>;
pub type MonomialPoly = poly::MonomialPoly<Real>;
pub type GegExpansion = gegenbauer::GegExpansion<Real>;
pub type Potential = potentials::Potential<Real>;
pub type PotentialValue = potentials::PotentialValue<Real>;
pub type VerificationReport = designs::VerificationReport<Real>;
pub type SynthesisResult = designs::SynthesisResult<Real>;
pub type BoundReport = bounds::BoundReport<Real>;
