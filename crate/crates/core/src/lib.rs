//! Exact point-symmetry analysis of scalar ODEs `y^(n) + f(x, y, ..., y^(n-1)) = 0`.
//!
//! The pipeline builds the determining system of the Lie point symmetries,
//! completes it to involutive form, extracts the structure constants of the
//! symmetry algebra from truncated power-series solutions, decides
//! linearizability from the dimension and derived algebra, and in the
//! constant-coefficient case recovers the characteristic polynomial of the
//! target linear equation up to affine maps of its roots.

pub mod detgen;
pub mod error;
pub mod janet;
pub mod jetcore;
pub mod liealg;
pub mod linalg;
pub mod odeparse;
pub mod pipeline;
pub mod recover;
pub mod xoracle;

pub use error::{Error, Result};
