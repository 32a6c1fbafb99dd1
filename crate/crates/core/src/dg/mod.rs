//! DG-rings concentrated in non-positive degrees, DG-modules and semi-free resolutions.

pub mod derived;
pub mod lift;
pub mod module;
pub mod ring;
pub mod semifree;

pub use derived::{dg_ext, dg_ext_from, dg_ext_window, dg_tor, dg_tor_from, dg_tor_window};
pub use lift::{check_lifting_identity, h0_tensor, lift_module, lift_module_mutated, lifting_holds, LiftMutation};
pub use module::{dg_cone, DGModule, DGModuleMap};
pub use ring::{trivial_extension, DGRing};
pub use semifree::{SemiFree, SemiFreeGenerator, SemiFreeResolution};
