//! Finite-dimensional algebras, quivers, modules and bimodules.

#[allow(clippy::module_inception)]
pub(crate) mod algebra;
pub mod module;
pub mod quiver;
pub mod structure;

pub(crate) use algebra::combine as algebra_combine;
pub use algebra::{Algebra, RadicalHint};
pub use module::{hom_space, is_bi_equivariant, is_equivariant, is_isomorphic, Bimodule, LeftModule, ModuleMap};
pub use quiver::{Arrow, Quiver};
pub use structure::{injective_module, projective_module, radical, simple_module, simple_modules, Structure};
