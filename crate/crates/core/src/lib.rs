//! Shape recovery for equilateral quantum trees from scattering data.
//!
//! The forward direction builds the normalized-Laplacian polynomials `ψ`, `ψ̂`
//! of a rooted tree and evaluates the zero-potential Jost and S-functions of
//! the tree with a half-infinite lead attached at the root. The inverse
//! direction fits `ψ/ψ̂` to sampled S-values and recovers every tree shape
//! whose branched continued fraction reproduces it.
//!
//! Exact algebra is generic over the coefficient type ([`Poly<T>`] with
//! `T: Coeff`); the numerical layer is generic over `F: Real` (`f32`/`f64`).
//! The aliases below fix the concrete types used throughout the pipeline.

pub mod characteristic;
pub mod error;
pub mod io;
pub mod numeric;
pub mod poly;
pub mod reconstruct;
pub mod scalar;
pub mod sfit;
pub mod tree;

pub use error::{Error, Result};
pub use poly::{Poly, RatFunc};
pub use scalar::{Coeff, Real};
pub use tree::{Forest, RootedTree};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;
/// Polynomial over the rationals; the carrier of `ψ` and `ψ̂`.
pub type QPoly = Poly<Rational>;
/// Polynomial over the Gaussian rationals.
pub type QiPoly = Poly<num_complex::Complex<Rational>>;
/// Floating-point polynomial.
pub type FPoly = Poly<f64>;
pub type Complex64 = num_complex::Complex64;

pub type Potential64 = numeric::Potential<f64>;
pub type FundamentalPair64 = numeric::FundamentalPair<f64>;
