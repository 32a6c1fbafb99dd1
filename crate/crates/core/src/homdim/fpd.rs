use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::complex::BddComplex;
use crate::dg::{lift_module, DGModule, DGRing};
use crate::error::Result;

use super::dims::{dg_proj_dim, proj_dim};
use super::extdim::ExtDim;
use super::family::{test_family, FamilySpec};

/// One family member's contribution to the search.
#[derive(Clone, Debug)]
pub struct FPDEntry {
    pub label: String,
    pub dim: usize,
    pub proj_dim: ExtDim,
    pub inf: Option<i32>,
    /// The module itself, serialized, for entries with finite projective dimension.
    pub module: Option<Value>,
    /// Projective dimension is known to be infinite, not just above the cutoff.
    pub certified_infinite: bool,
}

impl FPDEntry {
    /// `proj dim + inf`, when the projective dimension is certified finite.
    pub fn value(&self) -> Option<i64> {
        Some(self.proj_dim.finite()? + self.inf? as i64)
    }
}

/// Certified lower bound for the finitistic projective dimension over a finite family.
#[derive(Clone, Debug)]
pub struct FPDReport {
    pub subject: String,
    pub max_dim: usize,
    pub family: String,
    pub cutoff: usize,
    pub entries: Vec<FPDEntry>,
    pub observed: ExtDim,
    pub witness: Option<usize>,
}

impl FPDReport {
    fn assemble(subject: String, spec: FamilySpec, cutoff: usize, entries: Vec<FPDEntry>) -> Self {
        let mut observed = ExtDim::MinusInfinity;
        let mut witness = None;
        for (k, e) in entries.iter().enumerate() {
            if let Some(v) = e.value() {
                if observed.finite().is_none_or(|o| v > o) {
                    observed = ExtDim::Finite(v);
                    witness = Some(k);
                }
            }
        }
        FPDReport { subject, max_dim: spec.max_dim, family: spec.describe(), cutoff, entries, observed, witness }
    }

    /// Entries above the cutoff that are not certified infinite.
    pub fn uncertified(&self) -> impl Iterator<Item = &FPDEntry> {
        self.entries.iter().filter(|e| matches!(e.proj_dim, ExtDim::ExceedsCutoff(_)) && !e.certified_infinite)
    }

    pub fn finite_count(&self) -> usize {
        self.entries.iter().filter(|e| e.value().is_some()).count()
    }

    pub fn witness_entry(&self) -> Option<&FPDEntry> {
        self.witness.map(|k| &self.entries[k])
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "label": e.label,
                    "dim": e.dim,
                    "proj_dim": e.proj_dim.to_json(),
                    "inf": e.inf,
                    "certified_infinite": e.certified_infinite,
                    "value": e.value(),
                })
            })
            .collect();
        let note = if self.finite_count() == 0 { Some("no finite-projdim module found") } else { None };
        json!({
            "subject": self.subject,
            "search_space": {"max_dim": self.max_dim, "family": self.family, "cutoff": self.cutoff, "size": self.entries.len()},
            "observed": self.observed.to_json(),
            "lower_bound": true,
            "note": note,
            "uncertified": self.uncertified().map(|e| e.label.clone()).collect::<Vec<_>>(),
            "witness": self.witness_entry().map(|e| json!({"label": e.label, "module": e.module})),
            "entries": entries,
        })
    }
}

/// Search over the deterministic module family of `a`, keeping certified finite projective dimensions.
pub fn fpd_search(a: &Arc<Algebra>, max_dim: usize, cutoff: usize) -> Result<FPDReport> {
    let spec = FamilySpec::new(max_dim);
    let mut entries = Vec::new();
    for m in test_family(a, spec)? {
        let r = proj_dim(&BddComplex::module_in_degree(&m.module, 0), cutoff)?;
        let finite = r.value.is_finite();
        entries.push(FPDEntry {
            label: m.label,
            dim: m.module.dim(),
            proj_dim: r.value,
            inf: Some(0),
            module: finite.then(|| m.module.to_json()),
            certified_infinite: r.certified_infinite,
        });
    }
    Ok(FPDReport::assemble("algebra".into(), spec, cutoff, entries))
}

/// Search over `B` and the lifts of the family modules of `H^0(B)` with finite projective dimension.
pub fn dg_fpd_search(b: &Arc<DGRing>, max_dim: usize, cutoff: usize) -> Result<FPDReport> {
    let spec = FamilySpec::new(max_dim);
    let mut entries = Vec::new();
    let reg = DGModule::regular(b);
    entries.push(dg_entry("B".into(), &reg, cutoff)?);
    for m in test_family(b.h0(), spec)? {
        let r = proj_dim(&BddComplex::module_in_degree(&m.module, 0), cutoff)?;
        if !r.value.is_finite() {
            entries.push(FPDEntry {
                label: m.label,
                dim: m.module.dim(),
                proj_dim: r.value,
                inf: None,
                module: None,
                certified_infinite: r.certified_infinite,
            });
            continue;
        }
        let lift = lift_module(b, &m.module, cutoff)?;
        entries.push(dg_entry(format!("lift {}", m.label), lift.module(), cutoff)?);
    }
    Ok(FPDReport::assemble("DG-ring".into(), spec, cutoff, entries))
}

fn dg_entry(label: String, x: &DGModule, cutoff: usize) -> Result<FPDEntry> {
    let r = dg_proj_dim(x, cutoff)?;
    let finite = r.value.is_finite();
    Ok(FPDEntry {
        label,
        dim: x.dim(),
        proj_dim: r.value,
        inf: x.extent().inf,
        module: finite.then(|| x.to_json()),
        certified_infinite: r.certified_infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bimodule, Quiver};
    use crate::complex::BimoduleComplex;
    use crate::dg::trivial_extension;
    use crate::linalg::Field;

    #[test]
    fn known_finitistic_values() {
        let a2 = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let r = fpd_search(&a2, 6, 6).unwrap();
        assert_eq!(r.observed, ExtDim::Finite(1));
        assert!(r.witness_entry().unwrap().module.is_some());
        let dn = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        assert_eq!(fpd_search(&dn, 6, 6).unwrap().observed, ExtDim::Finite(0));
        let ss = Quiver::parse_short(Field::prime(5).unwrap(), &["1", "2"], &[], &[], None).unwrap();
        assert_eq!(fpd_search(&ss, 6, 6).unwrap().observed, ExtDim::Finite(0));
        assert_eq!(fpd_search(&a2, 0, 6).unwrap().observed, ExtDim::MinusInfinity);
    }

    #[test]
    fn dg_search_over_trivial_extension() {
        let a2 = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let b =
            trivial_extension(&a2, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&a2), -1)).unwrap();
        let r = dg_fpd_search(&b, 4, 6).unwrap();
        assert!(r.observed.is_finite());
        assert!(r.finite_count() >= 3);
    }
}
