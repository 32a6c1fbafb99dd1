//! Bounded complexes, tensor and Hom complexes, resolutions and derived functors.

#[allow(clippy::module_inception)]
mod complex;
pub mod derived;
pub mod hom;
pub mod resolution;
pub mod tensor;

pub(crate) use complex::parse_degree;
pub use complex::{cone, BddComplex, BimoduleComplex, ChainMap, Extent};
pub use derived::{ext, ext_from, ext_window, tor, tor_from, tor_window};
pub use hom::{hom_bimodule, hom_complex, hom_element};
pub use resolution::{floor_for, Generator, InjectiveResolution, ProjectiveResolution};
pub use tensor::{tensor, tensor_bimodule};

/// Term dimensions, differentials and per-degree algebra actions of a built complex.
pub(crate) type GradedParts = (
    std::collections::BTreeMap<i32, usize>,
    std::collections::BTreeMap<i32, crate::linalg::Matrix>,
    std::collections::BTreeMap<i32, Vec<crate::linalg::Matrix>>,
);
