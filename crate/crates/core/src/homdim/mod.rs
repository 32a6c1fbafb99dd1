//! Certified projective, injective and flat dimensions, finitistic dimension search and bound checks.

pub mod checks;
pub mod dims;
pub mod extdim;
pub mod family;
pub mod fpd;

pub use checks::{
    check_bass_bound, check_bass_bound_algebra, check_finite_dirsum_injdim, check_injdim_geq_inf, check_jorgensen_gap,
    check_shift_invariance, dg_check_finite_dirsum_injdim, dg_check_injdim_geq_inf, dg_check_shift_invariance,
    BassReport, GapReport, InfCheck,
};
pub use dims::{dg_flat_dim, dg_inj_dim, dg_proj_dim, dg_simple_tests, flat_dim, inj_dim, proj_dim, simple_tests};
pub use extdim::{DimKind, DimReport, ExtDim, Verdict, Witness};
pub use family::{ext1_classes, extension_module, test_family, FamilyMember, FamilySpec};
pub use fpd::{dg_fpd_search, fpd_search, FPDEntry, FPDReport};
