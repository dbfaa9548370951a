//! Numerical toolkit for GL(4) automorphic objects: Hecke coefficients and
//! their identities, (hyper-)Kloosterman sums, Gamma-factor algebra and
//! Bessel functions, Mellin–Barnes transforms, Voronoi summation checks, and
//! the dyadic second-moment harness.

pub mod arith;
pub mod coeffs;
pub mod error;
pub mod expsums;
pub mod harness;
pub mod psi;
pub mod quad;
pub mod special;
pub mod voronoi;

pub use error::{Error, Result};
