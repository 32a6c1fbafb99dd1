use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::module::same_algebra;
use crate::algebra::{is_bi_equivariant, is_equivariant, Algebra, Bimodule, LeftModule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// Cohomological extent of a complex: `inf = None` means `+inf`, `sup = None` means `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extent {
    pub inf: Option<i32>,
    pub sup: Option<i32>,
}

impl Extent {
    pub fn amp(&self) -> Option<i32> {
        match (self.inf, self.sup) {
            (Some(i), Some(s)) => Some(s - i),
            _ => None,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.sup.is_none()
    }
}

/// Bounded cochain complex of left modules; `d^n` maps degree `n` to `n+1`.
#[derive(Clone, Debug)]
pub struct BddComplex {
    algebra: Arc<Algebra>,
    terms: BTreeMap<i32, LeftModule>,
    diffs: BTreeMap<i32, Matrix>,
}

impl PartialEq for BddComplex {
    fn eq(&self, o: &Self) -> bool {
        same_algebra(&self.algebra, &o.algebra) && self.terms == o.terms && self.diffs == o.diffs
    }
}

impl BddComplex {
    /// Validates term algebras, shapes, equivariance and `d^2 = 0`.
    pub fn new(algebra: Arc<Algebra>, terms: BTreeMap<i32, LeftModule>, diffs: BTreeMap<i32, Matrix>) -> Result<Self> {
        let c = Self::unchecked(algebra, terms, diffs)?;
        c.check()?;
        Ok(c)
    }

    /// Normalizes storage and checks shapes only.
    pub fn unchecked(
        algebra: Arc<Algebra>,
        terms: BTreeMap<i32, LeftModule>,
        diffs: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for m in terms.values() {
            if !same_algebra(m.algebra(), &algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let terms: BTreeMap<i32, LeftModule> = terms
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(n, m)| (n, m.rebase(&algebra).expect("checked above")))
            .collect();
        let mut kept = BTreeMap::new();
        for (n, d) in diffs {
            let src = terms.get(&n).map_or(0, LeftModule::dim);
            let tgt = terms.get(&(n + 1)).map_or(0, LeftModule::dim);
            if d.rows() != tgt || d.cols() != src {
                return Err(Error::ShapeMismatch(format!(
                    "differential in degree {n} is {}x{}, expected {tgt}x{src}",
                    d.rows(),
                    d.cols()
                )));
            }
            if src > 0 && tgt > 0 && !d.is_zero() {
                kept.insert(n, d);
            }
        }
        Ok(BddComplex { algebra, terms, diffs: kept })
    }

    pub fn check(&self) -> Result<()> {
        for (n, d) in &self.diffs {
            if !is_equivariant(&self.term(*n), &self.term(n + 1), d) {
                return Err(Error::InvalidStructure(format!("differential in degree {n} is not equivariant")));
            }
            if let Some(d2) = self.diffs.get(&(n + 1)) {
                if !(d2 * d).is_zero() {
                    return Err(Error::InvalidStructure(format!("d^2 != 0 starting in degree {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        BddComplex { algebra, terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// A single module placed in one degree.
    pub fn module_in_degree(m: &LeftModule, degree: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(degree, m.clone());
        Self::unchecked(m.algebra().clone(), terms, BTreeMap::new()).expect("single term")
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn term(&self, n: i32) -> LeftModule {
        self.terms.get(&n).cloned().unwrap_or_else(|| LeftModule::zero(self.algebra.clone()))
    }

    pub fn term_dim(&self, n: i32) -> usize {
        self.terms.get(&n).map_or(0, LeftModule::dim)
    }

    pub fn terms(&self) -> &BTreeMap<i32, LeftModule> {
        &self.terms
    }

    pub fn diff(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field(), self.term_dim(n + 1), self.term_dim(n)))
    }

    /// Lowest and highest degree carrying a nonzero term.
    pub fn span(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        let dim = self.term_dim(n);
        if dim == 0 {
            return 0;
        }
        dim - self.diff(n).rank() - self.diff(n - 1).rank()
    }

    /// `ker d^n / im d^{n-1}` with the induced action.
    pub fn cohomology(&self, n: i32) -> Result<LeftModule> {
        let m = self.term(n);
        if m.is_zero() {
            return Ok(m);
        }
        let k = self.diff(n).kernel();
        let i = self.diff(n - 1).column_basis();
        m.subquotient(&k, &i)
    }

    pub fn extent(&self) -> Extent {
        let nonzero: Vec<i32> = self.terms.keys().copied().filter(|&n| self.cohomology_dim(n) > 0).collect();
        Extent { inf: nonzero.first().copied(), sup: nonzero.last().copied() }
    }

    pub fn is_acyclic(&self) -> bool {
        self.terms.keys().all(|&n| self.cohomology_dim(n) == 0)
    }

    /// `X[j]`: term `n` is `X^{n+j}` and the differential picks up `(-1)^j`.
    pub fn shift(&self, j: i32) -> Self {
        let sign = self.field().sign(j as i64);
        BddComplex {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(n, m)| (n - j, m.clone())).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (n - j, d.scale(&sign))).collect(),
        }
    }

    pub fn direct_sum(&self, o: &BddComplex) -> Result<Self> {
        if !same_algebra(&self.algebra, &o.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let degs: BTreeSet<i32> = self.terms.keys().chain(o.terms.keys()).copied().collect();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &n in &degs {
            terms.insert(n, self.term(n).direct_sum(&o.term(n))?);
            diffs.insert(n, self.diff(n).block_diag(&o.diff(n)));
        }
        Self::unchecked(self.algebra.clone(), terms, diffs)
    }

    /// `Hom_k(-, k)` termwise: degree `n` holds `D(X^{-n})` over the opposite algebra.
    pub fn dual(&self) -> Self {
        let op = self.algebra.opposite();
        BddComplex {
            algebra: op,
            terms: self.terms.iter().map(|(n, m)| (-n, m.dual())).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (-n - 1, d.transpose())).collect(),
        }
    }

    pub fn rebase(&self, algebra: &Arc<Algebra>) -> Result<Self> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Self::unchecked(algebra.clone(), self.terms.clone(), self.diffs.clone())
    }

    pub fn total_dim(&self) -> usize {
        self.terms.values().map(LeftModule::dim).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: BTreeMap<String, serde_json::Value> =
            self.terms.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        let diffs: BTreeMap<String, serde_json::Value> =
            self.diffs.iter().map(|(n, d)| (n.to_string(), d.to_json())).collect();
        serde_json::json!({ "terms": terms, "differentials": diffs })
    }

    pub fn from_json(algebra: &Arc<Algebra>, v: &serde_json::Value) -> Result<Self> {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        if let Some(t) = v.get("terms").and_then(|t| t.as_object()) {
            for (k, m) in t {
                terms.insert(parse_degree(k)?, LeftModule::from_json(algebra, m)?);
            }
        } else {
            return Err(Error::Parse("complex needs a \"terms\" object".into()));
        }
        if let Some(d) = v.get("differentials").and_then(|t| t.as_object()) {
            for (k, m) in d {
                diffs.insert(parse_degree(k)?, Matrix::from_json(algebra.field(), m)?);
            }
        }
        Self::new(algebra.clone(), terms, diffs)
    }
}

pub(crate) fn parse_degree(k: &str) -> Result<i32> {
    k.trim().parse().map_err(|_| Error::Parse(format!("invalid degree key {k:?}")))
}

/// Degreewise module maps commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: BddComplex,
    pub target: BddComplex,
    components: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn new(source: BddComplex, target: BddComplex, components: BTreeMap<i32, Matrix>) -> Result<Self> {
        let m = Self::unchecked(source, target, components)?;
        m.check()?;
        Ok(m)
    }

    pub fn unchecked(source: BddComplex, target: BddComplex, components: BTreeMap<i32, Matrix>) -> Result<Self> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let mut kept = BTreeMap::new();
        for (n, m) in components {
            if m.rows() != target.term_dim(n) || m.cols() != source.term_dim(n) {
                return Err(Error::ShapeMismatch(format!("chain map component in degree {n} has the wrong shape")));
            }
            if m.rows() > 0 && m.cols() > 0 {
                kept.insert(n, m);
            }
        }
        Ok(ChainMap { source, target, components: kept })
    }

    pub fn identity(c: &BddComplex) -> Self {
        let comps = c.terms.iter().map(|(n, m)| (*n, Matrix::identity(c.field(), m.dim()))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components: comps }
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.source.field(), self.target.term_dim(n), self.source.term_dim(n)))
    }

    fn degrees(&self) -> BTreeSet<i32> {
        self.source.terms.keys().chain(self.target.terms.keys()).copied().collect()
    }

    pub fn check(&self) -> Result<()> {
        for n in self.degrees() {
            let f = self.component(n);
            if !is_equivariant(&self.source.term(n), &self.target.term(n), &f) {
                return Err(Error::InvalidStructure(format!("chain map component {n} is not equivariant")));
            }
            let lhs = &self.component(n + 1) * &self.source.diff(n);
            let rhs = &self.target.diff(n) * &f;
            if lhs != rhs {
                return Err(Error::InvalidStructure(format!("chain map does not commute with d in degree {n}")));
            }
        }
        Ok(())
    }

    /// Rank of the induced map on `H^n`.
    pub fn cohomology_rank(&self, n: i32) -> usize {
        let z = self.source.diff(n).kernel();
        let b = self.target.diff(n - 1).column_basis();
        let fz = &self.component(n) * &z;
        b.hstack(&fz).rank() - b.rank()
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.degrees().into_iter().all(|n| {
            let hs = self.source.cohomology_dim(n);
            let ht = self.target.cohomology_dim(n);
            hs == ht && self.cohomology_rank(n) == hs
        })
    }

    pub fn compose(&self, after: &ChainMap) -> Result<ChainMap> {
        let comps = self.degrees().into_iter().map(|n| (n, &after.component(n) * &self.component(n))).collect();
        ChainMap::unchecked(self.source.clone(), after.target.clone(), comps)
    }
}

/// Mapping cone: `C^n = S^{n+1} ⊕ T^n`, `d = [[-d_S, 0], [f, d_T]]`.
pub fn cone(f: &ChainMap) -> Result<BddComplex> {
    let (s, t) = (&f.source, &f.target);
    let degs: BTreeSet<i32> = s.terms.keys().map(|n| n - 1).chain(t.terms.keys().copied()).collect();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degs {
        terms.insert(n, s.term(n + 1).direct_sum(&t.term(n))?);
    }
    for &n in &degs {
        let (s1, t0) = (s.term_dim(n + 1), t.term_dim(n));
        let (s2, t1) = (s.term_dim(n + 2), t.term_dim(n + 1));
        let mut d = Matrix::zeros(s.field(), s2 + t1, s1 + t0);
        d.set_block(0, 0, &(-&s.diff(n + 1)));
        d.set_block(s2, 0, &f.component(n + 1));
        d.set_block(s2, s1, &t.diff(n));
        diffs.insert(n, d);
    }
    BddComplex::unchecked(s.algebra.clone(), terms, diffs)
}

/// Bounded complex of bimodules.
#[derive(Clone, Debug)]
pub struct BimoduleComplex {
    algebra: Arc<Algebra>,
    terms: BTreeMap<i32, Bimodule>,
    diffs: BTreeMap<i32, Matrix>,
}

impl BimoduleComplex {
    pub fn new(algebra: Arc<Algebra>, terms: BTreeMap<i32, Bimodule>, diffs: BTreeMap<i32, Matrix>) -> Result<Self> {
        for b in terms.values() {
            if !same_algebra(b.algebra(), &algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let terms: BTreeMap<i32, Bimodule> = terms.into_iter().filter(|(_, b)| b.dim() > 0).collect();
        let c = BimoduleComplex { algebra, terms, diffs };
        // shapes, left equivariance and d^2 via the left restriction
        c.res_left_checked()?;
        let mut kept = BTreeMap::new();
        for (n, d) in &c.diffs {
            let (src, tgt) = (c.term(*n), c.term(n + 1));
            if src.dim() > 0 && tgt.dim() > 0 {
                if !is_bi_equivariant(&src, &tgt, d) {
                    return Err(Error::InvalidStructure(format!("differential {n} is not a bimodule map")));
                }
                kept.insert(*n, d.clone());
            }
        }
        Ok(BimoduleComplex { diffs: kept, ..c })
    }

    fn res_left_checked(&self) -> Result<BddComplex> {
        let terms = self.terms.iter().map(|(n, b)| (*n, b.res_left())).collect();
        BddComplex::new(self.algebra.clone(), terms, self.diffs.clone())
    }

    /// A single bimodule placed in one degree.
    pub fn bimodule_in_degree(b: &Bimodule, degree: i32) -> Self {
        let mut terms = BTreeMap::new();
        if b.dim() > 0 {
            terms.insert(degree, b.clone());
        }
        BimoduleComplex { algebra: b.algebra().clone(), terms, diffs: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn term(&self, n: i32) -> Bimodule {
        self.terms.get(&n).cloned().unwrap_or_else(|| Bimodule::zero(self.algebra.clone()))
    }

    pub fn terms(&self) -> &BTreeMap<i32, Bimodule> {
        &self.terms
    }

    pub fn diff(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.algebra.field(), self.term(n + 1).dim(), self.term(n).dim()))
    }

    pub fn span(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn res_left(&self) -> BddComplex {
        let terms = self.terms.iter().map(|(n, b)| (*n, b.res_left())).collect();
        BddComplex::unchecked(self.algebra.clone(), terms, self.diffs.clone()).expect("valid bimodule complex")
    }

    /// Underlying complex of right modules, over the opposite algebra.
    pub fn res_right(&self) -> BddComplex {
        let op = self.algebra.opposite();
        let terms = self.terms.iter().map(|(n, b)| (*n, b.res_right())).collect();
        BddComplex::unchecked(op, terms, self.diffs.clone()).expect("valid bimodule complex")
    }

    /// The same complex over the opposite algebra, with actions swapped.
    pub fn swap(&self) -> Self {
        BimoduleComplex {
            algebra: self.algebra.opposite(),
            terms: self.terms.iter().map(|(n, b)| (*n, b.swap())).collect(),
            diffs: self.diffs.clone(),
        }
    }

    pub fn shift(&self, j: i32) -> Self {
        let sign = self.algebra.field().sign(j as i64);
        BimoduleComplex {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(n, b)| (n - j, b.clone())).collect(),
            diffs: self.diffs.iter().map(|(n, d)| (n - j, d.scale(&sign))).collect(),
        }
    }

    pub fn extent(&self) -> Extent {
        self.res_left().extent()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: BTreeMap<String, serde_json::Value> =
            self.terms.iter().map(|(n, m)| (n.to_string(), m.to_json())).collect();
        let diffs: BTreeMap<String, serde_json::Value> =
            self.diffs.iter().map(|(n, d)| (n.to_string(), d.to_json())).collect();
        serde_json::json!({ "terms": terms, "differentials": diffs })
    }

    pub fn from_json(algebra: &Arc<Algebra>, v: &serde_json::Value) -> Result<Self> {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let t = v
            .get("terms")
            .and_then(|t| t.as_object())
            .ok_or_else(|| Error::Parse("bimodule complex needs a \"terms\" object".into()))?;
        for (k, m) in t {
            terms.insert(parse_degree(k)?, Bimodule::from_json(algebra, m)?);
        }
        if let Some(d) = v.get("differentials").and_then(|t| t.as_object()) {
            for (k, m) in d {
                diffs.insert(parse_degree(k)?, Matrix::from_json(algebra.field(), m)?);
            }
        }
        Self::new(algebra.clone(), terms, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_module, Quiver};

    fn dual_numbers() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap()
    }

    /// `0 -> A --x--> A -> 0` in degrees -1, 0.
    fn mult_by_x(a: &Arc<Algebra>) -> BddComplex {
        let reg = LeftModule::regular(a);
        let x = a.right_mult()[1].clone();
        BddComplex::new(a.clone(), [(-1, reg.clone()), (0, reg)].into(), [(-1, x)].into()).unwrap()
    }

    #[test]
    fn regular_in_degree_zero() {
        let a = dual_numbers();
        let c = BddComplex::module_in_degree(&LeftModule::regular(&a), 0);
        assert_eq!(c.cohomology(0).unwrap().dim(), 2);
        assert_eq!(c.cohomology(1).unwrap().dim(), 0);
        let e = c.extent();
        assert_eq!((e.inf, e.sup, e.amp()), (Some(0), Some(0), Some(0)));
    }

    #[test]
    fn multiplication_by_x_complex() {
        let a = dual_numbers();
        let c = mult_by_x(&a);
        let k = simple_module(&a, 0).unwrap();
        for n in [-1, 0] {
            let h = c.cohomology(n).unwrap();
            assert_eq!(h.dim(), 1);
            assert!(crate::algebra::is_isomorphic(&h, &k).unwrap());
        }
        let e = c.extent();
        assert_eq!((e.inf, e.sup, e.amp()), (Some(-1), Some(0), Some(1)));
    }

    #[test]
    fn acyclic_identity_complex() {
        let a = Algebra::ground(Field::Rationals);
        let k = LeftModule::regular(&a);
        let c =
            BddComplex::new(a.clone(), [(0, k.clone()), (1, k)].into(), [(0, Matrix::identity(a.field(), 1))].into())
                .unwrap();
        assert!(c.is_acyclic());
        let e = c.extent();
        assert_eq!((e.inf, e.sup, e.amp()), (None, None, None));
    }

    #[test]
    fn d_squared_checked() {
        let a = Algebra::ground(Field::Rationals);
        let k = LeftModule::regular(&a);
        let i = Matrix::identity(a.field(), 1);
        let r = BddComplex::new(a, [(0, k.clone()), (1, k.clone()), (2, k)].into(), [(0, i.clone()), (1, i)].into());
        assert!(r.is_err());
    }

    #[test]
    fn shift_bookkeeping() {
        let a = dual_numbers();
        let c = mult_by_x(&a);
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).shift(-1), c);
        for j in -3..=3 {
            let s = c.shift(j);
            s.check().unwrap();
            assert_eq!(s.extent().inf, Some(-1 - j));
            for n in -5..5 {
                assert_eq!(s.cohomology_dim(n), c.cohomology_dim(n + j));
            }
        }
    }

    #[test]
    fn cones_and_quasi_isos() {
        let a = dual_numbers();
        let reg = BddComplex::module_in_degree(&LeftModule::regular(&a), 0);
        let id = ChainMap::identity(&reg);
        assert!(id.is_quasi_iso());
        assert!(cone(&id).unwrap().is_acyclic());
        let zero = ChainMap::new(reg.clone(), reg.clone(), BTreeMap::new()).unwrap();
        assert!(!zero.is_quasi_iso());
        assert!(!cone(&zero).unwrap().is_acyclic());
        // cone of 0 -> c is c
        let z = ChainMap::new(BddComplex::zero(a.clone()), reg.clone(), BTreeMap::new()).unwrap();
        let cz = cone(&z).unwrap();
        assert_eq!(cz.term_dim(0), 2);
        assert!(ChainMap::identity(&cz).is_quasi_iso());
        // x: A -> A in degree 0
        let x = a.right_mult()[1].clone();
        let fx = ChainMap::new(reg.clone(), reg, [(0, x)].into()).unwrap();
        let c = cone(&fx).unwrap();
        assert_eq!((c.cohomology_dim(-1), c.cohomology_dim(0)), (1, 1));
        assert_eq!(fx.is_quasi_iso(), c.is_acyclic());
    }

    #[test]
    fn dual_is_involutive() {
        let a = dual_numbers();
        let c = mult_by_x(&a);
        let dd = c.dual().dual();
        assert_eq!(dd, c);
        c.dual().check().unwrap();
    }
}
