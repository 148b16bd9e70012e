//! Wavefront and vacuum-point dynamics for the one-dimensional shallow water
//! equations over variable bottoms.
//!
//! The crate is organised bottom-up:
//!
//! * [`bathymetry`] closed-form bottom profiles and the parabolic scaling.
//! * [`elliptic`] Legendre elliptic integrals on top of Carlson forms.
//! * [`selfsim`] exact parabolic solutions over `b = x^2 - 1`.
//! * [`hierarchy`] series dynamics near still-water fronts and vacuum points.
//! * [`shoulder`] flat-bottom simple waves born at a corner.
//! * [`refsolver`] a well-balanced finite-volume oracle.
//! * [`validate`] the acceptance checks shared by tests and the CLI.
//!
//! All quantities are dimensionless with `g = 1`.

pub mod bathymetry;
pub mod elliptic;
pub mod error;
pub mod hierarchy;
pub mod numerics;
pub mod refsolver;
pub mod selfsim;
pub mod shoulder;
pub mod validate;

pub use error::{Error, Result};
