//! Exact scalars and dense matrix kernels.

pub mod matrix;
pub mod rational;
pub mod scalar;
pub mod space;

pub use matrix::{Matrix, MatrixJson, Reduction};
pub use rational::Rational;
pub use scalar::{Field, Scalar};
pub use space::{Coords, Echelon};
