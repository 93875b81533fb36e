//! Mixed volumes, mixed discriminants and the finite Alexandrov–Fenchel
//! operators built from them.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalar`], [`matrix`], [`exact`]: a small dense linear-algebra layer that
//!   runs over both `f64` and exact big rationals.
//! - [`geom`]: boxes, zonotopes and polygon fans with their support functions,
//!   Minkowski combinations and volumes.
//! - [`mixvol`]: mixed volumes by closed form and by inclusion–exclusion, and
//!   the Alexandrov–Fenchel inequality check.
//! - [`mixdisc`]: mixed discriminants, their identities, Alexandrov's
//!   inequality and the diagonal operator.
//! - [`spectral`]: cyclic Jacobi eigensolver, inertia, hyperbolicity and
//!   Perron–Frobenius checks.
//! - [`afop`]: operator builders for polygon fans and boxes in R³, Bochner
//!   residuals and spectrum reports.
//! - [`cli`]: the `mixed-af` command-line front end.
//!
//! Data-parallel loops (subset sums, generator tuples, Monte Carlo trials) go
//! through [`par`], which uses rayon when the `parallel` feature is enabled and
//! falls back to plain iteration otherwise.

pub mod afop;
pub mod cli;
pub mod error;
pub mod exact;
pub mod geom;
pub mod matrix;
pub mod mixdisc;
pub mod mixvol;
pub mod par;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use par::Execution;
pub use scalar::{Rational, Real, Scalar};
