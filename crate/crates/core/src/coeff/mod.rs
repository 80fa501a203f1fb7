//! Exact scalar tower: Gaussian rationals, polynomials in the formal symbol
//! `pi`, truncated `h`-series and rational-angle circle constants.

mod circle;
pub mod grat;
mod pipoly;
mod scalar;
mod series;
pub mod text;

pub use circle::CircleConst;
pub use grat::GRat;
pub use pipoly::PiPoly;
pub use scalar::{exp_decompose, scalar_mul, ExpDecomposition, Scalar};
pub use series::{series_exp, series_log, HbarSeries};

pub type Rat = num_rational::BigRational;
