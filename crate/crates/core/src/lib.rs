//! Exact algebraic reconstruction and high-precision numerical evaluation of
//! the Morikawa square function μ(r): the minimal side length of a square
//! inscribed in the curvilinear triangle cut out by two tangent circles of
//! radii 1 and r ≥ 1 and their common tangent line.
//!
//! The crate provides:
//! - an extended-precision minimization oracle for μ(r) and λ(k) = μ(k²)²;
//! - an exact elimination pipeline producing a bivariate polynomial
//!   P*(k, y) with P*(k, λ(k)) = 0;
//! - resultants over ℤ with Sylvester, subresultant-PRS and multi-modular
//!   backends;
//! - certified real-root counting and isolation via Sturm sequences;
//! - truncated power-series arithmetic and Newton lifting for the Taylor
//!   expansion of μ at r = 1;
//! - discriminant analysis of the exceptional set.

pub mod error;
pub mod var;
pub mod scalar;
pub mod poly;
pub mod zp;
pub mod modgcd;
pub mod resultant;
pub mod float;
pub mod oracle;
pub mod eliminator;
pub mod series;
pub mod realroots;

pub use error::{Error, Result};
pub use poly::MPoly;
pub use var::Var;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Polynomial over arbitrary-precision integers.
pub type PolyZ = MPoly<BigInt>;
/// Polynomial over reduced rationals.
pub type PolyQ = MPoly<BigRational>;
