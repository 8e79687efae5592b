//! Bound state of an attractive delta well after a uniform field is switched on.
//!
//! The crate solves the Lippmann–Schwinger equation at the well as a weakly
//! singular Volterra equation, evaluates the weak-field closed forms, extracts
//! decay rates and level shifts, and checks the Airy integral identities the
//! closed forms rest on.
//!
//! Default units are ℏ = m = B = 1, available as [`PhysParams::natural`].

pub mod analysis;
pub mod approx;
mod error;
pub mod identities;
pub mod model;
pub mod propagator;
pub mod quad;
pub mod specfun;
pub mod volterra;

pub use error::{Error, Flag, Flagged};
pub use model::{FieldScales, PhysParams};
pub use num_complex::Complex64;
pub use volterra::{ComplexSeries, TimeGrid};

pub type Result<T> = std::result::Result<T, Error>;
