pub mod algebra;
pub mod cache;
pub mod cli;
pub mod complex;
pub mod dg;
pub mod duality;
pub mod error;
pub mod homdim;
pub mod linalg;

pub use error::{Error, Result};
