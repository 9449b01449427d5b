//! Numerical library for the sample-complexity theory of Lipschitz
//! operators under Gaussian measures: spectral models, Sobolev weights,
//! certified best-first index enumeration, adaptive m-widths with their
//! decay bounds, and the Wiener-Hermite polynomial-chaos pipeline.
//!
//! The crate is organized around five blocks:
//!
//! - [`spectrum`]: eigenvalue models `lambda_b_i = lambda_i / b_i^2` and
//!   validation of the standing assumptions;
//! - [`hermite`]: normalized Hermite polynomials, capped variants,
//!   Gauss-Hermite quadrature, and Riesz-constant reports for capped
//!   systems;
//! - [`index_sets`]: Sobolev weights `u_gamma`, the certified
//!   nonincreasing rearrangement, and anisotropic total-degree sets;
//! - [`widths`]: the adaptive m-width identity `Theta_m = u_pi(m+1)`,
//!   bound curves, the Kolmogorov width closed form, and a verifier;
//! - [`approximation`]: sampling, coefficient estimation, projections,
//!   and error norms for operators on truncated Gaussian coordinates.

// `!(x > 0.0)` style checks are deliberate: they reject NaN where the
// suggested `x <= 0.0` would let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximation;
pub mod error;
pub mod hermite;
pub mod index_sets;
pub mod spectrum;
pub mod widths;

pub use error::{Error, Result};
pub use index_sets::MultiIndex;
pub use spectrum::Spectrum;
