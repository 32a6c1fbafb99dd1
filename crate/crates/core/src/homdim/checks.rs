use std::ops::RangeInclusive;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{Algebra, LeftModule};
use crate::complex::{ext, BddComplex, BimoduleComplex};
use crate::dg::{dg_ext, DGModule, DGRing};
use crate::error::{Error, Result};

use super::dims::{dg_inj_dim, dg_proj_dim, flat_dim, inj_dim, proj_dim};
use super::extdim::{DimReport, ExtDim, Verdict};
use super::family::{test_family, FamilySpec};
use super::fpd::{dg_fpd_search, fpd_search, FPDReport};

/// `FPD ≤ inj dim(B)` over the search family, with a margin per witness.
#[derive(Clone, Debug)]
pub struct BassReport {
    pub fpd: FPDReport,
    pub injdim: DimReport,
    pub margins: Vec<(String, i64)>,
    pub verdict: Verdict,
}

impl BassReport {
    fn assemble(fpd: FPDReport, injdim: DimReport) -> Self {
        let Some(n) = injdim.value.finite() else {
            return BassReport { fpd, injdim, margins: Vec::new(), verdict: Verdict::Inconclusive };
        };
        let margins: Vec<(String, i64)> =
            fpd.entries.iter().filter_map(|e| e.value().map(|v| (e.label.clone(), n - v))).collect();
        let mut verdict = Verdict::from_bool(margins.iter().all(|(_, m)| *m >= 0));
        // a module whose projective dimension is neither finite nor certified infinite is unchecked
        if fpd.uncertified().next().is_some() {
            verdict = verdict.and(Verdict::Inconclusive);
        }
        BassReport { fpd, injdim, margins, verdict }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": "bass_bound",
            "verdict": self.verdict.as_str(),
            "fpd_observed": self.fpd.observed.to_json(),
            "injdim": self.injdim.to_json(),
            "margins": self.margins.iter().map(|(l, m)| json!({"label": l, "margin": m})).collect::<Vec<_>>(),
            "fpd": self.fpd.to_json(),
        })
    }
}

/// Bass bound over a DG-ring: family lifts against `inj dim_B(B)`.
pub fn check_bass_bound(b: &Arc<DGRing>, max_dim: usize, cutoff: usize) -> Result<BassReport> {
    let injdim = dg_inj_dim(&DGModule::regular(b), cutoff);
    let injdim = match injdim {
        Ok(r) => r,
        Err(Error::Inconclusive(_)) => return inconclusive_bass(dg_fpd_search(b, max_dim, cutoff)?, cutoff),
        Err(e) => return Err(e),
    };
    Ok(BassReport::assemble(dg_fpd_search(b, max_dim, cutoff)?, injdim))
}

/// Bass bound over an algebra, with modules and complexes in degree 0.
pub fn check_bass_bound_algebra(a: &Arc<Algebra>, max_dim: usize, cutoff: usize) -> Result<BassReport> {
    let injdim = inj_dim(&BddComplex::module_in_degree(&LeftModule::regular(a), 0), cutoff);
    let injdim = match injdim {
        Ok(r) => r,
        Err(Error::Inconclusive(_)) => return inconclusive_bass(fpd_search(a, max_dim, cutoff)?, cutoff),
        Err(e) => return Err(e),
    };
    Ok(BassReport::assemble(fpd_search(a, max_dim, cutoff)?, injdim))
}

fn inconclusive_bass(fpd: FPDReport, cutoff: usize) -> Result<BassReport> {
    let injdim = DimReport {
        subject: "regular".into(),
        kind: super::extdim::DimKind::Inj,
        value: ExtDim::ExceedsCutoff(cutoff),
        window: cutoff,
        witnesses: Vec::new(),
        certified_infinite: false,
    };
    Ok(BassReport { fpd, injdim, margins: Vec::new(), verdict: Verdict::Inconclusive })
}

fn shift_verdict(values: Vec<ExtDim>, invs: Vec<Option<i32>>) -> Verdict {
    let mut sums = Vec::new();
    for (v, inf) in values.into_iter().zip(invs) {
        match (v, inf) {
            (ExtDim::Finite(p), Some(i)) => sums.push(p + i as i64),
            (ExtDim::MinusInfinity, None) => {}
            _ => return Verdict::Inconclusive,
        }
    }
    Verdict::from_bool(sums.windows(2).all(|w| w[0] == w[1]))
}

/// `proj dim(X[j]) + inf(X[j])` is the same for every `j` in the range.
pub fn check_shift_invariance(x: &BddComplex, js: RangeInclusive<i32>, cutoff: usize) -> Result<Verdict> {
    let mut values = Vec::new();
    let mut infs = Vec::new();
    for j in js {
        let y = x.shift(j);
        values.push(proj_dim(&y, cutoff)?.value);
        infs.push(y.extent().inf);
    }
    Ok(shift_verdict(values, infs))
}

pub fn dg_check_shift_invariance(x: &DGModule, js: RangeInclusive<i32>, cutoff: usize) -> Result<Verdict> {
    let mut values = Vec::new();
    let mut infs = Vec::new();
    for j in js {
        let y = x.shift(j);
        values.push(match dg_proj_dim(&y, cutoff) {
            Ok(r) => r.value,
            Err(Error::Inconclusive(_)) => return Ok(Verdict::Inconclusive),
            Err(e) => return Err(e),
        });
        infs.push(y.extent().inf);
    }
    Ok(shift_verdict(values, infs))
}

/// Outcome of `inj dim(X) ≥ inf(X)` with its witnessing group `Ext^{inf}(H^0, X) = H^{inf}(X)`.
#[derive(Clone, Debug)]
pub struct InfCheck {
    pub inf: i32,
    pub ext_dim: usize,
    pub cohomology_dim: usize,
    pub injdim: ExtDim,
    pub verdict: Verdict,
}

impl InfCheck {
    fn assemble(inf: i32, ext_dim: usize, cohomology_dim: usize, injdim: ExtDim) -> Self {
        let witness = ext_dim == cohomology_dim && ext_dim > 0;
        let verdict = match injdim {
            _ if !witness => Verdict::Violation,
            ExtDim::Finite(n) => Verdict::from_bool(n >= inf as i64),
            ExtDim::ExceedsCutoff(_) => Verdict::Verified,
            ExtDim::MinusInfinity => Verdict::Violation,
        };
        InfCheck { inf, ext_dim, cohomology_dim, injdim, verdict }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": "injdim_geq_inf",
            "inf": self.inf,
            "ext_dim": self.ext_dim,
            "cohomology_dim": self.cohomology_dim,
            "injdim": self.injdim.to_json(),
            "verdict": self.verdict.as_str(),
        })
    }
}

pub fn check_injdim_geq_inf(x: &BddComplex, cutoff: usize) -> Result<InfCheck> {
    let inf = x.extent().inf.ok_or_else(|| Error::Inconclusive("acyclic complex has no infimum".into()))?;
    let h0 = BddComplex::module_in_degree(&LeftModule::regular(x.algebra()), 0);
    let e = ext(&h0, x, inf, cutoff)?;
    let injdim = match inj_dim(x, cutoff) {
        Ok(r) => r.value,
        Err(Error::Inconclusive(_)) => ExtDim::ExceedsCutoff(cutoff),
        Err(err) => return Err(err),
    };
    Ok(InfCheck::assemble(inf, e, x.cohomology_dim(inf), injdim))
}

pub fn dg_check_injdim_geq_inf(x: &DGModule, cutoff: usize) -> Result<InfCheck> {
    let inf = x.extent().inf.ok_or_else(|| Error::Inconclusive("acyclic DG-module has no infimum".into()))?;
    let b = x.ring();
    let h0 = DGModule::inflate_module(b, &LeftModule::regular(b.h0()), 0)?;
    let e = dg_ext(&h0, x, inf, cutoff)?;
    let injdim = match dg_inj_dim(x, cutoff) {
        Ok(r) => r.value,
        Err(Error::Inconclusive(_)) => ExtDim::ExceedsCutoff(cutoff),
        Err(err) => return Err(err),
    };
    Ok(InfCheck::assemble(inf, e, x.cohomology_dim(inf), injdim))
}

/// `inj dim(⊕ X_i) = max inj dim(X_i)` for a finite list.
pub fn check_finite_dirsum_injdim(xs: &[BddComplex], cutoff: usize) -> Result<Verdict> {
    let Some(first) = xs.first() else { return Ok(Verdict::Verified) };
    let mut sum = BddComplex::zero(first.algebra().clone());
    let mut expect = ExtDim::MinusInfinity;
    for x in xs {
        let v = inj_dim(x, cutoff)?.value;
        if !v.is_finite() && v != ExtDim::MinusInfinity {
            return Ok(Verdict::Inconclusive);
        }
        expect = expect.max(v);
        sum = sum.direct_sum(x)?;
    }
    let got = inj_dim(&sum, cutoff)?.value;
    Ok(Verdict::from_bool(got == expect))
}

pub fn dg_check_finite_dirsum_injdim(xs: &[DGModule], cutoff: usize) -> Result<Verdict> {
    let Some(first) = xs.first() else { return Ok(Verdict::Verified) };
    let mut sum = DGModule::zero(first.ring().clone());
    let mut expect = ExtDim::MinusInfinity;
    for x in xs {
        let v = match dg_inj_dim(x, cutoff) {
            Ok(r) => r.value,
            Err(Error::Inconclusive(_)) => return Ok(Verdict::Inconclusive),
            Err(e) => return Err(e),
        };
        if !v.is_finite() && v != ExtDim::MinusInfinity {
            return Ok(Verdict::Inconclusive);
        }
        expect = expect.max(v);
        sum = sum.direct_sum(x)?;
    }
    let got = match dg_inj_dim(&sum, cutoff) {
        Ok(r) => r.value,
        Err(Error::Inconclusive(_)) => return Ok(Verdict::Inconclusive),
        Err(e) => return Err(e),
    };
    Ok(Verdict::from_bool(got == expect))
}

/// `proj dim(M) ≤ flat dim(M) + N`, with `N` the injective dimension of `R` normalized to `inf(R) = 0`.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub n: i64,
    pub rows: Vec<(String, ExtDim, ExtDim)>,
    pub verdict: Verdict,
}

impl GapReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(l, p, f)| {
                let gap = p.finite().zip(f.finite()).map(|(p, f)| p - f);
                json!({"label": l, "proj_dim": p.to_json(), "flat_dim": f.to_json(), "gap": gap, "slack": gap.map(|g| self.n - g)})
            })
            .collect();
        json!({
            "check": "projdim_flatdim_gap",
            "n": self.n,
            "note": "over finite-dimensional modules flat and projective dimension agree, so every gap is 0",
            "rows": rows,
            "verdict": self.verdict.as_str(),
        })
    }
}

pub fn check_jorgensen_gap(a: &Arc<Algebra>, r: &BimoduleComplex, max_dim: usize, cutoff: usize) -> Result<GapReport> {
    let left = r.res_left();
    let inf = left.extent().inf.ok_or_else(|| Error::Inconclusive("acyclic dualizing complex".into()))?;
    let n = match inj_dim(&left.shift(inf), cutoff)?.value {
        ExtDim::Finite(n) => n,
        _ => return Ok(GapReport { n: 0, rows: Vec::new(), verdict: Verdict::Inconclusive }),
    };
    let mut rows = Vec::new();
    let mut ok = true;
    for m in test_family(a, FamilySpec::new(max_dim))? {
        let c = BddComplex::module_in_degree(&m.module, 0);
        let fd = flat_dim(&c, cutoff)?.value;
        let Some(f) = fd.finite() else { continue };
        let pd = proj_dim(&c, cutoff)?.value;
        ok &= pd.finite().is_some_and(|p| p <= f + n);
        rows.push((m.label, pd, fd));
    }
    Ok(GapReport { n, rows, verdict: Verdict::from_bool(ok) })
}
