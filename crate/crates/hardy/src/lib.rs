//! Numerical verification of weighted Hardy, uncertainty and Landau-type
//! inequalities on Grushin spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: the quasi-norm `rho`, dilations and power weights;
//! * [`functions`]: smooth test functions with exact partial derivatives;
//! * [`fields`]: magnetic potentials and twisted gradients;
//! * [`quadrature`]: tensor Gauss-Legendre engine plus an independent oracle;
//! * [`verifiers`]: one routine per inequality or identity, returning reports;
//! * [`cli`]: configuration files, report files and the command-line driver.

pub mod cli;
pub mod error;
pub mod fields;
pub mod functions;
pub mod geometry;
pub mod quadrature;
pub mod verifiers;

pub use error::{HardyError, Result};
