//! Exact computations on Moyal-quantized complex tori and their gerby duals.
//!
//! Everything is exact: coefficients are Gaussian rationals, `pi` is a formal
//! symbol and the deformation parameter `h` lives in truncated power series.

pub mod cocycle;
pub mod coeff;
pub mod cohomfm;
pub mod error;
pub mod expalg;
pub mod gerbe;
pub mod linalg;
pub mod picard;
pub mod poincare;
pub mod torus;
