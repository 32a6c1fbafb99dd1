use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::LeftModule;
use crate::complex::{parse_degree, BddComplex, ChainMap, Extent};
use crate::error::{Error, Result};
use crate::linalg::matrix::{scalar_from_json, scalar_to_json};
use crate::linalg::{Field, Matrix, Scalar};

use super::ring::{same_ring, DGRing};

/// Finite-dimensional left DG-module, stored on its total space.
///
/// `degrees[i]` is the degree of basis vector `i`; `action[b]` is the action of ring basis
/// element `b` and `diff` the differential, both as total matrices.
#[derive(Clone, Debug)]
pub struct DGModule {
    ring: Arc<DGRing>,
    degrees: Vec<i32>,
    action: Vec<Matrix>,
    diff: Matrix,
}

impl DGModule {
    pub fn new(ring: Arc<DGRing>, degrees: Vec<i32>, action: Vec<Matrix>, diff: Matrix) -> Result<Self> {
        let m = Self::unchecked(ring, degrees, action, diff)?;
        m.check()?;
        Ok(m)
    }

    /// Checks shapes only.
    pub fn unchecked(ring: Arc<DGRing>, degrees: Vec<i32>, action: Vec<Matrix>, diff: Matrix) -> Result<Self> {
        let n = degrees.len();
        if action.len() != ring.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} action matrices for a ring of dimension {}",
                action.len(),
                ring.dim()
            )));
        }
        if action.iter().chain(std::iter::once(&diff)).any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::ShapeMismatch(format!("DG-module matrices must be {n}x{n}")));
        }
        if action.iter().chain(std::iter::once(&diff)).any(|m| m.field() != ring.field()) {
            return Err(Error::FieldMismatch("DG-module over a different field".into()));
        }
        Ok(DGModule { ring, degrees, action, diff })
    }

    /// Grading, module axioms, unit, `d^2 = 0` and `d ρ(b) = ρ(db) + (-1)^{|b|} ρ(b) d`.
    pub fn check(&self) -> Result<()> {
        let r = &self.ring;
        let f = r.field();
        let n = self.dim();
        for (b, m) in self.action.iter().enumerate() {
            let shift = r.degree_of(b);
            if !self.is_homogeneous(m, shift) {
                return Err(Error::InvalidStructure(format!("ring basis {b} does not act with degree {shift}")));
            }
        }
        if !self.is_homogeneous(&self.diff, 1) {
            return Err(Error::InvalidStructure("module differential is not of degree +1".into()));
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let prod = self.act(&r.mul(&r.basis_vector(i), &r.basis_vector(j)));
                if prod != &self.action[i] * &self.action[j] {
                    return Err(Error::InvalidStructure(format!("action is not multiplicative at ({i}, {j})")));
                }
            }
        }
        if self.act(r.unit()) != Matrix::identity(f, n) {
            return Err(Error::InvalidStructure("unit does not act as the identity".into()));
        }
        if !(&self.diff * &self.diff).is_zero() {
            return Err(Error::InvalidStructure("module differential squares to a nonzero map".into()));
        }
        for b in 0..r.dim() {
            let rhs =
                &self.act(&r.diff().column(b)) + &(&self.action[b] * &self.diff).scale(&f.sign(r.degree_of(b) as i64));
            if &self.diff * &self.action[b] != rhs {
                return Err(Error::InvalidStructure(format!("Leibniz rule fails for ring basis {b}")));
            }
        }
        Ok(())
    }

    fn is_homogeneous(&self, m: &Matrix, shift: i32) -> bool {
        (0..m.rows())
            .all(|i| (0..m.cols()).all(|j| m.get(i, j).is_zero() || self.degrees[i] == self.degrees[j] + shift))
    }

    pub fn zero(ring: Arc<DGRing>) -> Self {
        let f = ring.field();
        let action = vec![Matrix::zeros(f, 0, 0); ring.dim()];
        DGModule { ring, degrees: Vec::new(), action, diff: Matrix::zeros(f, 0, 0) }
    }

    /// `B` as a module over itself.
    pub fn regular(ring: &Arc<DGRing>) -> Self {
        DGModule {
            ring: ring.clone(),
            degrees: (0..ring.dim()).map(|i| ring.degree_of(i)).collect(),
            action: ring.left_mult().to_vec(),
            diff: ring.diff().clone(),
        }
    }

    /// A complex of `H^0(B)`-modules viewed over `B` through the projection.
    pub fn inflate(ring: &Arc<DGRing>, c: &BddComplex) -> Result<Self> {
        if !crate::algebra::module::same_algebra(c.algebra(), ring.h0()) {
            return Err(Error::AlgebraMismatch);
        }
        let f = ring.field();
        let mut degrees = Vec::new();
        let mut offsets = BTreeMap::new();
        for (&n, t) in c.terms() {
            offsets.insert(n, degrees.len());
            degrees.extend(std::iter::repeat_n(n, t.dim()));
        }
        let total = degrees.len();
        let pi = ring.projection();
        let mut action = Vec::with_capacity(ring.dim());
        for b in 0..ring.dim() {
            let mut m = Matrix::zeros(f, total, total);
            if ring.degree_of(b) == 0 {
                let a = pi.column(b);
                for (&n, t) in c.terms() {
                    m.set_block(offsets[&n], offsets[&n], &t.act(&a));
                }
            }
            action.push(m);
        }
        let mut diff = Matrix::zeros(f, total, total);
        for &n in c.terms().keys() {
            if let Some(&o1) = offsets.get(&(n + 1)) {
                diff.set_block(o1, offsets[&n], &c.diff(n));
            }
        }
        Self::new(ring.clone(), degrees, action, diff)
    }

    /// An `H^0(B)`-module placed in degree `n`.
    pub fn inflate_module(ring: &Arc<DGRing>, m: &LeftModule, n: i32) -> Result<Self> {
        Self::inflate(ring, &BddComplex::module_in_degree(m, n))
    }

    pub fn ring(&self) -> &Arc<DGRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree_indices(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    pub fn degree_dim(&self, n: i32) -> usize {
        self.degrees.iter().filter(|&&d| d == n).count()
    }

    /// Lowest and highest degrees carrying a nonzero piece.
    pub fn span(&self) -> Option<(i32, i32)> {
        Some((*self.degrees.iter().min()?, *self.degrees.iter().max()?))
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of a ring element.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        crate::algebra::algebra_combine(self.field(), self.dim(), &self.action, x)
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    /// `d^n : X^n -> X^{n+1}` in degree coordinates.
    pub fn diff_block(&self, n: i32) -> Matrix {
        self.diff.select_rows(&self.degree_indices(n + 1)).select_columns(&self.degree_indices(n))
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        let dim = self.degree_dim(n);
        if dim == 0 {
            return 0;
        }
        // saturates when d² ≠ 0, which `check` reports
        dim.saturating_sub(self.diff_block(n).rank() + self.diff_block(n - 1).rank())
    }

    pub fn extent(&self) -> Extent {
        let nz: Vec<i32> =
            self.span().map(|(lo, hi)| (lo..=hi).filter(|&n| self.cohomology_dim(n) > 0).collect()).unwrap_or_default();
        Extent { inf: nz.first().copied(), sup: nz.last().copied() }
    }

    pub fn is_acyclic(&self) -> bool {
        self.extent().is_acyclic()
    }

    /// `X[j]`: degree `n` holds `X^{n+j}`, `d` scaled by `(-1)^j`, `b` acting with `(-1)^{j|b|}`.
    pub fn shift(&self, j: i32) -> Self {
        let f = self.field();
        DGModule {
            ring: self.ring.clone(),
            degrees: self.degrees.iter().map(|d| d - j).collect(),
            action: self
                .action
                .iter()
                .enumerate()
                .map(|(b, m)| m.scale(&f.sign((j * self.ring.degree_of(b)) as i64)))
                .collect(),
            diff: self.diff.scale(&f.sign(j as i64)),
        }
    }

    pub fn direct_sum(&self, o: &DGModule) -> Result<Self> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(Error::AlgebraMismatch);
        }
        let mut degrees = self.degrees.clone();
        degrees.extend(&o.degrees);
        Ok(DGModule {
            ring: self.ring.clone(),
            degrees,
            action: self.action.iter().zip(&o.action).map(|(a, b)| a.block_diag(b)).collect(),
            diff: self.diff.block_diag(&o.diff),
        })
    }

    /// `Hom_k(X, k)` over the opposite ring: degree `n` holds `D(X^{-n})`,
    /// `(b·f)(x) = (-1)^{|b||f|} f(bx)` and `df = -(-1)^{|f|} f∘d`.
    pub fn dual(&self) -> Self {
        let f = self.field();
        let op = self.ring.opposite();
        let degrees: Vec<i32> = self.degrees.iter().map(|d| -d).collect();
        let signed = |m: &Matrix, col_sign: &dyn Fn(i32) -> Scalar| {
            let t = m.transpose();
            Matrix::from_fn(f, t.rows(), t.cols(), |i, j| t.get(i, j).mul_ref(&col_sign(degrees[j])))
        };
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(b, m)| {
                let p = self.ring.degree_of(b);
                signed(m, &|n| f.sign((p * n) as i64))
            })
            .collect();
        let diff = signed(&self.diff, &|n| f.sign(n as i64 + 1));
        DGModule { ring: op, degrees, action, diff }
    }

    /// Same data over an equal ring (e.g. the opposite of the opposite).
    pub fn rebase(&self, ring: &Arc<DGRing>) -> Result<Self> {
        if !same_ring(&self.ring, ring) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(DGModule { ring: ring.clone(), ..self.clone() })
    }

    /// Restriction along the section `τ`: a complex of `H^0(B)`-modules.
    pub fn restrict_along_tau(&self) -> Result<BddComplex> {
        let tau = self.ring.section()?;
        let h0 = self.ring.h0().clone();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let Some((lo, hi)) = self.span() else { return Ok(BddComplex::zero(h0)) };
        for n in lo..=hi {
            let idx = self.degree_indices(n);
            if idx.is_empty() {
                continue;
            }
            let act: Vec<Matrix> =
                (0..h0.dim()).map(|a| self.act(&tau.column(a)).select_rows(&idx).select_columns(&idx)).collect();
            terms.insert(n, LeftModule::unchecked(h0.clone(), act)?);
            diffs.insert(n, self.diff_block(n));
        }
        BddComplex::new(h0, terms, diffs)
    }

    /// JSON: `{"degrees":{"n":dim},"action":{"p,q":[[[c]]]},"diff":{"n":matrix}}`, basis sorted by degree.
    pub fn to_json(&self) -> Value {
        let Some((lo, hi)) = self.span() else {
            return json!({"degrees": {}, "action": {}, "diff": {}});
        };
        let r = &self.ring;
        let mut degrees = serde_json::Map::new();
        let mut action = serde_json::Map::new();
        let mut diff = serde_json::Map::new();
        for q in lo..=hi {
            let iq = self.degree_indices(q);
            if iq.is_empty() {
                continue;
            }
            degrees.insert(q.to_string(), json!(iq.len()));
            for p in r.lo()..=0 {
                let (ip, ir) = (r.degree_indices(p), self.degree_indices(p + q));
                if ip.is_empty() || ir.is_empty() {
                    continue;
                }
                let t: Vec<Vec<Vec<Value>>> = ip
                    .iter()
                    .map(|&b| {
                        iq.iter()
                            .map(|&j| ir.iter().map(|&k| scalar_to_json(self.action[b].get(k, j))).collect())
                            .collect()
                    })
                    .collect();
                action.insert(format!("{p},{q}"), json!(t));
            }
            if self.degree_dim(q + 1) > 0 {
                diff.insert(q.to_string(), self.diff_block(q).to_json());
            }
        }
        json!({"degrees": degrees, "action": action, "diff": diff})
    }

    pub fn from_json(ring: &Arc<DGRing>, v: &Value) -> Result<Self> {
        let field = ring.field();
        let degrees_obj = v
            .get("degrees")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("DG-module needs a \"degrees\" object".into()))?;
        let mut dd = BTreeMap::new();
        for (k, d) in degrees_obj {
            dd.insert(
                parse_degree(k)?,
                d.as_u64().ok_or_else(|| Error::Parse("degree dimension must be a number".into()))? as usize,
            );
        }
        let mut offsets = BTreeMap::new();
        let mut degrees = Vec::new();
        for (&n, &d) in &dd {
            offsets.insert(n, degrees.len());
            degrees.extend(std::iter::repeat_n(n, d));
        }
        let total = degrees.len();
        let dim_of = |n: i32| dd.get(&n).copied().unwrap_or(0);
        let mut action = vec![Matrix::zeros(field, total, total); ring.dim()];
        if let Some(a) = v.get("action").and_then(Value::as_object) {
            for (key, t) in a {
                let (p, q) = key
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?)))
                    .ok_or_else(|| Error::Parse(format!("invalid action key {key:?}")))?;
                let ip = ring.degree_indices(p);
                let bad = || Error::ShapeMismatch(format!("action block {key} has the wrong shape"));
                let arr = t.as_array().filter(|a| a.len() == ip.len()).ok_or_else(bad)?;
                if dim_of(q) == 0 || dim_of(p + q) == 0 {
                    return Err(bad());
                }
                for (bi, row) in arr.iter().enumerate() {
                    let row = row.as_array().filter(|r| r.len() == dim_of(q)).ok_or_else(bad)?;
                    for (j, col) in row.iter().enumerate() {
                        let col = col.as_array().filter(|c| c.len() == dim_of(p + q)).ok_or_else(bad)?;
                        for (k, s) in col.iter().enumerate() {
                            action[ip[bi]].set(offsets[&(p + q)] + k, offsets[&q] + j, scalar_from_json(field, s)?);
                        }
                    }
                }
            }
        }
        let mut diff = Matrix::zeros(field, total, total);
        if let Some(d) = v.get("diff").and_then(Value::as_object) {
            for (key, m) in d {
                let n = parse_degree(key)?;
                let m = Matrix::from_json(field, m)?;
                if m.rows() != dim_of(n + 1) || m.cols() != dim_of(n) {
                    return Err(Error::ShapeMismatch(format!("differential block {n} has the wrong shape")));
                }
                if m.rows() > 0 && m.cols() > 0 {
                    diff.set_block(offsets[&(n + 1)], offsets[&n], &m);
                }
            }
        }
        Self::new(ring.clone(), degrees, action, diff)
    }
}

/// Degree-0 map of DG-modules on total spaces.
#[derive(Clone, Debug)]
pub struct DGModuleMap {
    pub source: DGModule,
    pub target: DGModule,
    matrix: Matrix,
}

impl DGModuleMap {
    pub fn new(source: DGModule, target: DGModule, matrix: Matrix) -> Result<Self> {
        let m = Self::unchecked(source, target, matrix)?;
        m.check()?;
        Ok(m)
    }

    pub fn unchecked(source: DGModule, target: DGModule, matrix: Matrix) -> Result<Self> {
        if !same_ring(source.ring(), target.ring()) {
            return Err(Error::AlgebraMismatch);
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::ShapeMismatch("DG-module map has the wrong shape".into()));
        }
        Ok(DGModuleMap { source, target, matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Degree-preserving, commuting with `d` and with every ring basis element.
    pub fn check(&self) -> Result<()> {
        let (s, t, m) = (&self.source, &self.target, &self.matrix);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() && t.degrees[i] != s.degrees[j] {
                    return Err(Error::InvalidStructure("DG-module map does not preserve degrees".into()));
                }
            }
        }
        if &t.diff * m != m * &s.diff {
            return Err(Error::InvalidStructure("DG-module map does not commute with the differentials".into()));
        }
        for (b, (ta, sa)) in t.action.iter().zip(&s.action).enumerate() {
            if ta * m != m * sa {
                return Err(Error::InvalidStructure(format!("DG-module map is not linear for ring basis {b}")));
            }
        }
        Ok(())
    }

    /// The block `X^n -> Y^n`.
    pub fn component(&self, n: i32) -> Matrix {
        self.matrix.select_rows(&self.target.degree_indices(n)).select_columns(&self.source.degree_indices(n))
    }

    /// Rank of the induced map on `H^n`.
    pub fn cohomology_rank(&self, n: i32) -> usize {
        let z = self.source.diff_block(n).kernel();
        if z.cols() == 0 {
            return 0;
        }
        let b = self.target.diff_block(n - 1);
        (&self.component(n) * &z).hstack(&b).rank() - b.rank()
    }

    pub fn is_quasi_iso(&self) -> bool {
        let degs: BTreeSet<i32> = self.source.degrees.iter().chain(&self.target.degrees).copied().collect();
        degs.into_iter().all(|n| {
            let r = self.cohomology_rank(n);
            r == self.source.cohomology_dim(n) && r == self.target.cohomology_dim(n)
        })
    }

    /// The underlying chain map of `H^0(B)`-complexes after restriction along `τ`.
    pub fn restrict_along_tau(&self) -> Result<ChainMap> {
        let s = self.source.restrict_along_tau()?;
        let t = self.target.restrict_along_tau()?;
        let comps = s.terms().keys().map(|&n| (n, self.component(n))).collect();
        ChainMap::new(s, t, comps)
    }
}

/// `cone(f)`: `F[1] ⊕ X` with `d = [[-d_F, 0], [f, d_X]]`.
pub fn dg_cone(map: &DGModuleMap) -> Result<DGModule> {
    let (s, t) = (&map.source, &map.target);
    let f = s.field();
    let sh = s.shift(1);
    let n = s.dim() + t.dim();
    let mut diff = Matrix::zeros(f, n, n);
    diff.set_block(0, 0, &sh.diff);
    diff.set_block(s.dim(), 0, &map.matrix);
    diff.set_block(s.dim(), s.dim(), &t.diff);
    let sum = sh.direct_sum(t)?;
    Ok(DGModule { diff, ..sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_module, Algebra, Bimodule, Quiver};
    use crate::complex::BimoduleComplex;
    use crate::dg::trivial_extension;

    fn k_eps() -> Arc<DGRing> {
        let k = Algebra::ground(Field::Rationals);
        trivial_extension(&k, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&k), -1)).unwrap()
    }

    fn a2_ext() -> Arc<DGRing> {
        let a = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        trivial_extension(&a, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&a), -1)).unwrap()
    }

    #[test]
    fn regular_module_checks() {
        for b in [k_eps(), a2_ext()] {
            let r = DGModule::regular(&b);
            r.check().unwrap();
            assert_eq!(r.extent(), Extent { inf: Some(b.lo()), sup: Some(0) });
            r.shift(3).check().unwrap();
            r.shift(-1).direct_sum(&r).unwrap().check().unwrap();
        }
    }

    #[test]
    fn restriction_of_regular() {
        let b = k_eps();
        let c = DGModule::regular(&b).restrict_along_tau().unwrap();
        assert_eq!((c.term_dim(-1), c.term_dim(0)), (1, 1));
        assert!(c.diff(-1).is_zero());
        let b = a2_ext();
        let c = DGModule::regular(&b).restrict_along_tau().unwrap();
        assert_eq!(c.term_dim(0), 3);
    }

    #[test]
    fn inflated_simples() {
        let b = a2_ext();
        for i in 0..2 {
            let s = simple_module(b.h0(), i).unwrap();
            let x = DGModule::inflate_module(&b, &s, 0).unwrap();
            assert_eq!(x.cohomology_dim(0), 1);
            let back = x.restrict_along_tau().unwrap();
            assert!(crate::algebra::is_isomorphic(&back.term(0), &s).unwrap());
        }
    }

    #[test]
    fn dual_is_a_module_over_the_opposite() {
        for b in [k_eps(), a2_ext()] {
            let r = DGModule::regular(&b);
            for x in [r.clone(), r.shift(2), r.shift(-1).direct_sum(&r).unwrap()] {
                let d = x.dual();
                d.check().unwrap();
                assert!(d.ring().is_opposite_of(&b));
                for n in -4..4 {
                    assert_eq!(d.cohomology_dim(n), x.cohomology_dim(-n));
                }
                d.dual().check().unwrap();
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let b = a2_ext();
        let x = DGModule::regular(&b).shift(1);
        let back = DGModule::from_json(&b, &x.to_json()).unwrap();
        assert_eq!(back.dim(), x.dim());
        assert_eq!(back.extent(), x.extent());
        assert_eq!(back.to_json(), x.to_json());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let b = a2_ext();
        let r = DGModule::regular(&b);
        let id = DGModuleMap::new(r.clone(), r.clone(), Matrix::identity(b.field(), r.dim())).unwrap();
        assert!(id.is_quasi_iso());
        let c = dg_cone(&id).unwrap();
        c.check().unwrap();
        assert!(c.is_acyclic());
    }
}
