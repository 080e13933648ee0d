//! Exact and numeric verification of Landau-Ginzburg mirrors for odd-dimensional
//! quadrics `Q_{2m-1}`.
//!
//! The exact side works over [`symbolic::RatFunc`], rational functions with
//! arbitrary-precision rational coefficients. The numeric side finds critical
//! points and spectra in double-precision complex arithmetic.

pub mod numerics;
pub mod quantum;
pub mod report;
pub mod richardson;
pub mod superpotential;
pub mod symbolic;
pub mod vars;
pub mod weyl;

mod error;

pub use error::{Error, Result};
pub use report::{Status, VerdictReport};
