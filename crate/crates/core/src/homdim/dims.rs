use std::sync::Arc;

use crate::algebra::{simple_modules, Algebra};
use crate::complex::{ext_from, tor_from, BddComplex, ProjectiveResolution};
use crate::dg::{dg_ext_from, dg_tor_from, DGModule, DGRing, SemiFreeResolution};
use crate::error::{Error, Result};

use super::extdim::{DimKind, DimReport, ExtDim, Witness};

/// Simple modules of `a`, each as a complex in degree 0.
pub fn simple_tests(a: &Arc<Algebra>) -> Result<Vec<(String, BddComplex)>> {
    Ok(simple_modules(a)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("S{i}"), BddComplex::module_in_degree(&s, 0)))
        .collect())
}

/// Simple `H^0(B)`-modules in degree 0, viewed over `B`.
pub fn dg_simple_tests(b: &Arc<DGRing>) -> Result<Vec<(String, DGModule)>> {
    simple_modules(b.h0())?
        .into_iter()
        .enumerate()
        .map(|(i, s)| Ok((format!("S{i}"), DGModule::inflate_module(b, &s, 0)?)))
        .collect()
}

/// Largest `i` in `range` (scanned downwards) with a nonzero group, and the witnesses there.
fn top_nonzero(
    range: impl DoubleEndedIterator<Item = i32>,
    tests: usize,
    mut group: impl FnMut(usize, i32) -> Result<usize>,
    label: impl Fn(usize) -> String,
) -> Result<Option<(i32, Vec<Witness>)>> {
    for i in range.rev() {
        let mut ws = Vec::new();
        for t in 0..tests {
            let d = group(t, i)?;
            if d > 0 {
                ws.push(Witness { test: label(t), degree: i, dim: d });
            }
        }
        if !ws.is_empty() {
            return Ok(Some((i, ws)));
        }
    }
    Ok(None)
}

fn report(subject: &str, kind: DimKind, cutoff: usize, value: ExtDim, witnesses: Vec<Witness>) -> DimReport {
    DimReport { subject: subject.to_string(), kind, value, window: cutoff, witnesses, certified_infinite: false }
}

/// Value from a projective resolution: Ext (or Tor) to the test objects in degree 0.
fn from_resolution(
    res: &ProjectiveResolution,
    tests: &[(String, BddComplex)],
    tor: bool,
    subject: &str,
    kind: DimKind,
) -> Result<DimReport> {
    let cutoff = res.cutoff();
    let group = |t: usize, i: i32| if tor { tor_from(&tests[t].1, res, i) } else { ext_from(res, &tests[t].1, i) };
    let label = |t: usize| tests[t].0.clone();
    if res.is_terminated() {
        let Some(lo) = res.lowest_degree() else {
            return Ok(report(subject, kind, cutoff, ExtDim::MinusInfinity, Vec::new()));
        };
        let hi = res.ranks().keys().next_back().copied().unwrap_or(lo);
        return Ok(match top_nonzero(-hi..=-lo, tests.len(), group, label)? {
            Some((i, ws)) => report(subject, kind, cutoff, ExtDim::Finite(i as i64), ws),
            None => report(subject, kind, cutoff, ExtDim::MinusInfinity, Vec::new()),
        });
    }
    // the minimal resolution reaches the floor, so the group one above the cutoff is nonzero
    let top = cutoff as i32 + 1;
    match top_nonzero(cutoff as i32..=top, tests.len(), group, label)? {
        Some((_, ws)) => {
            let mut r = report(subject, kind, cutoff, ExtDim::ExceedsCutoff(cutoff), ws);
            r.certified_infinite = res.recurrence().is_some();
            Ok(r)
        }
        None => Err(Error::Inconclusive(format!("no nonvanishing group at the edge of cutoff {cutoff}"))),
    }
}

/// Projective dimension of a bounded complex: top degree of its minimal projective resolution.
pub fn proj_dim(c: &BddComplex, cutoff: usize) -> Result<DimReport> {
    let res = ProjectiveResolution::compute(c, cutoff)?;
    from_resolution(&res, &simple_tests(c.algebra())?, false, "complex", DimKind::Proj)
}

/// Injective dimension, as the projective dimension of the dual over the opposite algebra.
pub fn inj_dim(c: &BddComplex, cutoff: usize) -> Result<DimReport> {
    let d = c.dual();
    let res = ProjectiveResolution::compute(&d, cutoff)?;
    from_resolution(&res, &simple_tests(d.algebra())?, false, "complex", DimKind::Inj)
}

/// Flat dimension: top nonvanishing `Tor_i(S, C)` over the right simple modules.
pub fn flat_dim(c: &BddComplex, cutoff: usize) -> Result<DimReport> {
    let res = ProjectiveResolution::compute(c, cutoff)?;
    let op = c.algebra().opposite();
    from_resolution(&res, &simple_tests(&op)?, true, "complex", DimKind::Flat)
}

fn from_semifree(
    res: &SemiFreeResolution,
    tests: &[(String, DGModule)],
    tor: bool,
    subject: &str,
    kind: DimKind,
) -> Result<DimReport> {
    let cutoff = res.cutoff();
    let group =
        |t: usize, i: i32| if tor { dg_tor_from(&tests[t].1, res, i) } else { dg_ext_from(res, &tests[t].1, i) };
    let label = |t: usize| tests[t].0.clone();
    if res.is_terminated() {
        let degs: Vec<i32> = res.free().generators().iter().map(|g| g.degree).collect();
        let (Some(&lo), Some(&hi)) = (degs.iter().min(), degs.iter().max()) else {
            return Ok(report(subject, kind, cutoff, ExtDim::MinusInfinity, Vec::new()));
        };
        return Ok(match top_nonzero(-hi..=-lo, tests.len(), group, label)? {
            Some((i, ws)) => report(subject, kind, cutoff, ExtDim::Finite(i as i64), ws),
            None => report(subject, kind, cutoff, ExtDim::MinusInfinity, Vec::new()),
        });
    }
    let top = -1 - res.floor();
    match top_nonzero(cutoff as i32..=top, tests.len(), group, label)? {
        Some((_, ws)) => Ok(report(subject, kind, cutoff, ExtDim::ExceedsCutoff(cutoff), ws)),
        None => Err(Error::Inconclusive(format!(
            "resolution did not terminate within cutoff {cutoff}, but Ext vanishes at its edge"
        ))),
    }
}

/// Projective dimension over a DG-ring, tested against the simple `H^0(B)`-modules.
pub fn dg_proj_dim(x: &DGModule, cutoff: usize) -> Result<DimReport> {
    let res = SemiFreeResolution::compute(x, cutoff)?;
    from_semifree(&res, &dg_simple_tests(x.ring())?, false, "DG-module", DimKind::Proj)
}

/// `inj dim_B(X) = proj dim_{B^op}(DX)`.
pub fn dg_inj_dim(x: &DGModule, cutoff: usize) -> Result<DimReport> {
    let d = x.dual();
    let res = SemiFreeResolution::compute(&d, cutoff)?;
    from_semifree(&res, &dg_simple_tests(d.ring())?, false, "DG-module", DimKind::Inj)
}

pub fn dg_flat_dim(x: &DGModule, cutoff: usize) -> Result<DimReport> {
    let res = SemiFreeResolution::compute(x, cutoff)?;
    from_semifree(&res, &dg_simple_tests(&x.ring().opposite())?, true, "DG-module", DimKind::Flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{injective_module, projective_module, simple_module, Bimodule, LeftModule, Quiver};
    use crate::complex::BimoduleComplex;
    use crate::dg::trivial_extension;
    use crate::linalg::Field;

    fn a2() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap()
    }

    fn dual_numbers() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap()
    }

    fn deg0(m: &LeftModule) -> BddComplex {
        BddComplex::module_in_degree(m, 0)
    }

    #[test]
    fn module_dimensions() {
        let a = a2();
        assert_eq!(proj_dim(&deg0(&projective_module(&a, 0).unwrap()), 4).unwrap().value, ExtDim::Finite(0));
        assert_eq!(inj_dim(&deg0(&injective_module(&a, 1).unwrap()), 4).unwrap().value, ExtDim::Finite(0));
        assert_eq!(inj_dim(&deg0(&LeftModule::regular(&a)), 4).unwrap().value, ExtDim::Finite(1));
        let mut pds: Vec<ExtDim> =
            (0..2).map(|i| proj_dim(&deg0(&simple_module(&a, i).unwrap()), 4).unwrap().value).collect();
        pds.sort_by_key(|d| d.finite());
        assert_eq!(pds, vec![ExtDim::Finite(0), ExtDim::Finite(1)]);
        let r = proj_dim(
            &deg0(&simple_module(&a, 0).unwrap()).direct_sum(&deg0(&simple_module(&a, 1).unwrap())).unwrap(),
            4,
        )
        .unwrap();
        assert_eq!(r.value, ExtDim::Finite(1));
        assert!(!r.witnesses.is_empty());
        for i in 0..2 {
            let s = deg0(&simple_module(&a, i).unwrap());
            assert_eq!(proj_dim(&s, 4).unwrap().value, flat_dim(&s, 4).unwrap().value);
        }
    }

    #[test]
    fn dual_numbers_dimensions() {
        let a = dual_numbers();
        let k = deg0(&simple_module(&a, 0).unwrap());
        for c in [2, 5] {
            assert_eq!(proj_dim(&k, c).unwrap().value, ExtDim::ExceedsCutoff(c));
            assert_eq!(flat_dim(&k, c).unwrap().value, ExtDim::ExceedsCutoff(c));
        }
        assert_eq!(inj_dim(&deg0(&LeftModule::regular(&a)), 4).unwrap().value, ExtDim::Finite(0));
    }

    #[test]
    fn shifts_and_zero() {
        let a = a2();
        let p = deg0(&LeftModule::regular(&a));
        assert_eq!(proj_dim(&p.shift(2), 4).unwrap().value, ExtDim::Finite(2));
        assert_eq!(inj_dim(&p.shift(-2), 4).unwrap().value, ExtDim::Finite(3));
        assert_eq!(proj_dim(&BddComplex::zero(a.clone()), 4).unwrap().value, ExtDim::MinusInfinity);
    }

    #[test]
    fn dg_dimensions_over_trivial_extensions() {
        let k = Algebra::ground(Field::Rationals);
        let b =
            trivial_extension(&k, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&k), -1)).unwrap();
        let reg = DGModule::regular(&b);
        assert_eq!(dg_proj_dim(&reg, 4).unwrap().value, ExtDim::Finite(0));
        assert_eq!(dg_inj_dim(&reg, 4).unwrap().value, ExtDim::Finite(-1));
        assert_eq!(dg_flat_dim(&reg, 4).unwrap().value, ExtDim::Finite(0));
        let kk = DGModule::inflate_module(&b, &simple_module(&k, 0).unwrap(), 0).unwrap();
        assert_eq!(dg_proj_dim(&kk, 4).unwrap().value, ExtDim::ExceedsCutoff(4));
        let a = a2();
        let b =
            trivial_extension(&a, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&a), -1)).unwrap();
        let inj = dg_inj_dim(&DGModule::regular(&b), 4).unwrap();
        assert!(inj.value.is_finite(), "{:?}", inj.value);
    }
}
