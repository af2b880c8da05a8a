//! Distribution of the largest eigenvalue of a non-central complex Wishart
//! matrix with identity covariance.

pub mod distribution;
pub mod error;
pub mod exp_poly;
pub mod h_integrals;
pub mod hgm;
pub mod linalg;
pub mod mc_validator;
pub mod operators;
pub mod mpoly;
pub mod ode;
pub mod quad;
pub mod ratfunc;
pub mod scalar;
pub mod series;
pub mod special_fn;

pub use error::{Error, Result};
pub use exp_poly::{incomplete_gamma_exact, ExpPoly, ExpPolyEvaluator};
pub use mpoly::MPoly;
pub use ratfunc::RatFunc;
pub use scalar::{Coeff, FieldCoeff, Real};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// Exponential polynomials with exact rational coefficients.
pub type QExpPoly = ExpPoly<Rational>;
/// Multivariate polynomials over the rationals.
pub type QPoly = MPoly<Rational>;
/// Rational functions over the rationals.
pub type QRatFunc = RatFunc<Rational>;
