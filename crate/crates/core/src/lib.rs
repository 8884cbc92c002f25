//! Scenario sets for multivariate skew-t and generalized hyperbolic laws.
//!
//! The library computes half-space (Tukey) depth and expectile depth for the
//! skew-t and generalized hyperbolic families, traces depth contours, builds
//! ellipsoidal approximations of depth sets, measures deviation from angular
//! symmetry, and solves half-space reverse stress problems. Everything runs
//! through a canonical-form reduction in which all skewness sits in the first
//! coordinate.

pub mod approx;
pub mod depth;
mod error;
pub mod expectile;
pub mod multivariate;
mod quad;
pub mod specfun;
pub mod univariate;

pub use error::{Error, Result};
pub use multivariate::{CanonicalReduction, GhParams, MultivariateLaw, StParams};
pub use univariate::UnivariateLaw;
