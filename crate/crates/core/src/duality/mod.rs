//! Dualizing complexes, the `ε`/`Ψ` construction for trivial extensions and theorem verification.

pub mod dualizing;
pub mod gorenstein;
pub mod suite;

pub use dualizing::{build_da_dualizing, is_dualizing, DualizingCertificate};
pub use gorenstein::{build_epsilon_psi, EpsilonPsi};
pub use suite::{
    tor_certificate, verify_bass_suite, verify_dualizing_suite, verify_lifting_suite, verify_lifting_suite_with,
    verify_trivial_ext_gorenstein, TheoremReport,
};
