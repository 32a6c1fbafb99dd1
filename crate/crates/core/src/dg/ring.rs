use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::algebra::{Algebra, Bimodule};
use crate::complex::BimoduleComplex;
use crate::error::{Error, Result};
use crate::linalg::matrix::{scalar_from_json, scalar_to_json};
use crate::linalg::{Field, Matrix, Scalar};

/// Non-positively graded DG-ring with finite total dimension.
///
/// The basis is sorted by degree, lowest first; `table` holds structure constants
/// over the whole basis.
pub struct DGRing {
    field: Field,
    lo: i32,
    dims: Vec<usize>,
    degree_of: Vec<i32>,
    table: Vec<Scalar>,
    diff: Matrix,
    unit: Vec<Scalar>,
    left: Vec<Matrix>,
    h0: Arc<Algebra>,
    pi: Matrix,
    tau: Option<Matrix>,
    extension: Option<(Arc<Algebra>, BimoduleComplex)>,
    opposite: OnceLock<Arc<DGRing>>,
}

impl std::fmt::Debug for DGRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d: BTreeMap<i32, usize> = self.degree_dims();
        write!(f, "DGRing<{}>(degrees {:?})", self.field, d)
    }
}

impl PartialEq for DGRing {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.dims == o.dims
            && self.lo == o.lo
            && self.table == o.table
            && self.diff == o.diff
            && self.unit == o.unit
    }
}

pub(crate) fn same_ring(a: &Arc<DGRing>, b: &Arc<DGRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl DGRing {
    /// Validates grading, associativity, unit, `d^2 = 0` and the Leibniz rule.
    ///
    /// `dims[n - lo]` is the dimension in degree `n` for `lo <= n <= 0`.
    pub fn new(
        field: Field,
        lo: i32,
        dims: Vec<usize>,
        table: Vec<Scalar>,
        diff: Matrix,
        unit: Vec<Scalar>,
    ) -> Result<Arc<DGRing>> {
        Self::build(field, lo, dims, table, diff, unit, None).map(Arc::new)
    }

    fn build(
        field: Field,
        lo: i32,
        dims: Vec<usize>,
        table: Vec<Scalar>,
        diff: Matrix,
        unit: Vec<Scalar>,
        extension: Option<(Arc<Algebra>, BimoduleComplex)>,
    ) -> Result<DGRing> {
        if lo > 0 || dims.len() != (1 - lo) as usize {
            return Err(Error::ShapeMismatch("DG-ring degrees must run from lo <= 0 up to 0".into()));
        }
        let degree_of: Vec<i32> =
            dims.iter().enumerate().flat_map(|(i, &d)| std::iter::repeat_n(lo + i as i32, d)).collect();
        let n = degree_of.len();
        if table.len() != n * n * n || unit.len() != n || diff.rows() != n || diff.cols() != n {
            return Err(Error::ShapeMismatch(format!("DG-ring data does not match total dimension {n}")));
        }
        if table.iter().chain(&unit).chain(diff.entries()).any(|s| s.field() != field) {
            return Err(Error::FieldMismatch("DG-ring entry outside the base field".into()));
        }
        let left: Vec<Matrix> =
            (0..n).map(|i| Matrix::from_fn(field, n, n, |k, j| table[(i * n + j) * n + k].clone())).collect();
        let mut r = DGRing {
            field,
            lo,
            dims,
            degree_of,
            table,
            diff,
            unit,
            left,
            h0: Algebra::ground(field),
            pi: Matrix::zeros(field, 0, 0),
            tau: None,
            extension,
            opposite: OnceLock::new(),
        };
        r.check()?;
        r.compute_h0()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        let f = self.field;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.c(i, j, k).is_zero() && self.degree_of[k] != self.degree_of[i] + self.degree_of[j] {
                        return Err(Error::InvalidStructure(format!(
                            "product of basis {i} and {j} is not homogeneous"
                        )));
                    }
                }
            }
            for k in 0..n {
                if !self.diff.get(k, i).is_zero() && self.degree_of[k] != self.degree_of[i] + 1 {
                    return Err(Error::InvalidStructure(format!("differential of basis {i} is not of degree +1")));
                }
            }
            if !self.unit[i].is_zero() && self.degree_of[i] != 0 {
                return Err(Error::InvalidStructure("unit is not of degree 0".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.left_by(&self.product(i, j));
                if lhs != &self.left[i] * &self.left[j] {
                    let k = (0..n).find(|&k| lhs.column(k) != (&self.left[i] * &self.left[j]).column(k)).unwrap_or(0);
                    return Err(Error::AssociativityFailure { i, j, k });
                }
            }
        }
        let lu = self.left_by(&self.unit);
        for i in 0..n {
            let b = self.basis_vector(i);
            if lu.apply(&b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::UnitFailure { i });
            }
        }
        if !(&self.diff * &self.diff).is_zero() {
            return Err(Error::InvalidStructure("DG-ring differential squares to a nonzero map".into()));
        }
        for i in 0..n {
            let di = self.diff.column(i);
            let rhs = &self.left_by(&di) + &(&self.left[i] * &self.diff).scale(&f.sign(self.degree_of[i] as i64));
            if &self.diff * &self.left[i] != rhs {
                return Err(Error::InvalidStructure(format!("Leibniz rule fails for basis element {i}")));
            }
        }
        Ok(())
    }

    fn compute_h0(&mut self) -> Result<()> {
        let f = self.field;
        let zero_idx = self.degree_indices(0);
        let d0 = zero_idx.len();
        let dminus = self.diff.select_rows(&zero_idx).select_columns(&self.degree_indices(-1));
        let incl = Matrix::identity(f, self.dim()).select_columns(&zero_idx);
        if dminus.is_zero() {
            let alg = match &self.extension {
                Some((a, m)) if m.term(0).dim() == 0 => a.clone(),
                _ => {
                    let mut table = Vec::with_capacity(d0 * d0 * d0);
                    for &i in &zero_idx {
                        for &j in &zero_idx {
                            for &k in &zero_idx {
                                table.push(self.c(i, j, k).clone());
                            }
                        }
                    }
                    let unit = zero_idx.iter().map(|&i| self.unit[i].clone()).collect();
                    Algebra::from_structure_constants(f, d0, table, unit, None)?
                }
            };
            self.pi = incl.transpose();
            self.tau = Some(incl);
            self.h0 = alg;
        } else {
            let mut table = Vec::with_capacity(d0 * d0 * d0);
            for &i in &zero_idx {
                for &j in &zero_idx {
                    for &k in &zero_idx {
                        table.push(self.c(i, j, k).clone());
                    }
                }
            }
            let unit = zero_idx.iter().map(|&i| self.unit[i].clone()).collect();
            let b0 = Algebra::from_structure_constants(f, d0, table, unit, None)?;
            let (q, proj, _) = b0.quotient(&dminus)?;
            self.pi = &proj * &incl.transpose();
            self.h0 = q;
            self.tau = None;
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn dim(&self) -> usize {
        self.degree_of.len()
    }

    pub fn degree_dim(&self, n: i32) -> usize {
        if n < self.lo || n > 0 {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn degree_dims(&self) -> BTreeMap<i32, usize> {
        (self.lo..=0).map(|n| (n, self.degree_dim(n))).collect()
    }

    /// Total basis indices of degree `n`.
    pub fn degree_indices(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree_of[i] == n).collect()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.degree_of[i]
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.table[(i * n + j) * n + k]
    }

    pub fn diff(&self) -> &Matrix {
        &self.diff
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    fn product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.dim();
        self.table[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.left_by(x).apply(y)
    }

    pub fn left_mult(&self) -> &[Matrix] {
        &self.left
    }

    pub fn left_by(&self, x: &[Scalar]) -> Matrix {
        crate::algebra::algebra_combine(self.field, self.dim(), &self.left, x)
    }

    /// Right multiplication by `x`.
    pub fn right_by(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(self.field, n, n, |k, i| {
            x.iter().enumerate().fold(self.field.zero(), |mut acc, (j, c)| {
                if !c.is_zero() {
                    acc.add_mul(c, self.c(i, j, k));
                }
                acc
            })
        })
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree_of_element(&self, x: &[Scalar]) -> Option<i32> {
        let degs: Vec<i32> = (0..self.dim()).filter(|&i| !x[i].is_zero()).map(|i| self.degree_of[i]).collect();
        match degs.first() {
            Some(&d) if degs.iter().all(|&e| e == d) => Some(d),
            _ => None,
        }
    }

    /// `H^0(B) = B^0 / d(B^{-1})`.
    pub fn h0(&self) -> &Arc<Algebra> {
        &self.h0
    }

    /// Projection `B -> H^0(B)`.
    pub fn projection(&self) -> &Matrix {
        &self.pi
    }

    /// Section `H^0(B) -> B`: the inclusion of `B^0`, available when `d(B^{-1}) = 0`.
    pub fn section(&self) -> Result<&Matrix> {
        self.tau.as_ref().ok_or_else(|| Error::NoCanonicalSection("the differential into degree 0 is nonzero".into()))
    }

    pub fn has_section(&self) -> bool {
        self.tau.is_some()
    }

    /// `τ(a)` as an element of `B`.
    pub fn lift(&self, a: &[Scalar]) -> Result<Vec<Scalar>> {
        Ok(self.section()?.apply(a))
    }

    /// `(A, M)` when this ring was built as `A ⋉ M`.
    pub fn extension(&self) -> Option<&(Arc<Algebra>, BimoduleComplex)> {
        self.extension.as_ref()
    }

    /// Graded opposite: `a ∘ b = (-1)^{|a||b|} b a`.
    pub fn opposite(self: &Arc<Self>) -> Arc<DGRing> {
        self.opposite
            .get_or_init(|| {
                let n = self.dim();
                let f = self.field;
                let mut table = Vec::with_capacity(n * n * n);
                for i in 0..n {
                    for j in 0..n {
                        let s = f.sign((self.degree_of[i] * self.degree_of[j]) as i64);
                        for k in 0..n {
                            table.push(self.c(j, i, k).mul_ref(&s));
                        }
                    }
                }
                let extension = self.extension.as_ref().map(|(a, m)| (a.opposite(), m.swap()));
                let mut op =
                    Self::build(f, self.lo, self.dims.clone(), table, self.diff.clone(), self.unit.clone(), extension)
                        .expect("opposite of a DG-ring is a DG-ring");
                if self.tau.is_some() && self.h0.dim() == op.h0.dim() {
                    op.h0 = self.h0.opposite();
                }
                Arc::new(op)
            })
            .clone()
    }

    /// Whether `self` is the graded opposite of `other`.
    pub fn is_opposite_of(&self, other: &DGRing) -> bool {
        let n = self.dim();
        if self.field != other.field || self.dims != other.dims || self.lo != other.lo || n != other.dim() {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = self.field.sign((self.degree_of[i] * self.degree_of[j]) as i64);
                (0..n).all(|k| *self.c(i, j, k) == other.c(j, i, k).mul_ref(&s))
            })
        })
    }

    /// A finite-dimensional algebra as a DG-ring concentrated in degree 0.
    pub fn from_algebra(a: &Arc<Algebra>) -> Arc<DGRing> {
        let f = a.field();
        let n = a.dim();
        let r = Self::build(f, 0, vec![n], a.table().to_vec(), Matrix::zeros(f, n, n), a.unit().to_vec(), None)
            .expect("an algebra is a DG-ring");
        Arc::new(DGRing { h0: a.clone(), ..r })
    }

    /// DGRing JSON: `{"field","degrees","mult":{"p,q":[[[c]]]},"diff":{"n":matrix},"unit"}`.
    pub fn to_json(&self) -> Value {
        let degrees: BTreeMap<String, usize> =
            self.degree_dims().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
        let mut mult = serde_json::Map::new();
        for p in self.lo..=0 {
            for q in self.lo..=0 {
                if p + q < self.lo {
                    continue;
                }
                let (ip, iq, ir) = (self.degree_indices(p), self.degree_indices(q), self.degree_indices(p + q));
                if ip.is_empty() || iq.is_empty() || ir.is_empty() {
                    continue;
                }
                let t: Vec<Vec<Vec<Value>>> = ip
                    .iter()
                    .map(|&i| {
                        iq.iter().map(|&j| ir.iter().map(|&k| scalar_to_json(self.c(i, j, k))).collect()).collect()
                    })
                    .collect();
                mult.insert(format!("{p},{q}"), json!(t));
            }
        }
        let mut diff = serde_json::Map::new();
        for n in self.lo..0 {
            let (src, tgt) = (self.degree_indices(n), self.degree_indices(n + 1));
            if src.is_empty() || tgt.is_empty() {
                continue;
            }
            diff.insert(n.to_string(), self.diff.select_rows(&tgt).select_columns(&src).to_json());
        }
        let unit: Vec<Value> = self.degree_indices(0).iter().map(|&i| scalar_to_json(&self.unit[i])).collect();
        let mut v = json!({
            "field": self.field,
            "degrees": degrees,
            "mult": mult,
            "diff": diff,
            "unit": unit,
        });
        if let (Some(_), Some(h)) = (&self.tau, self.h0.hint()) {
            v["h0_radical_hint"] = crate::algebra::algebra::hint_to_json(h);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Arc<DGRing>> {
        let field: Field = serde_json::from_value(
            v.get("field").cloned().ok_or_else(|| Error::Parse("DG-ring needs a field".into()))?,
        )?;
        let field = field.validate()?;
        let degrees = v
            .get("degrees")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("DG-ring needs a \"degrees\" object".into()))?;
        let mut dd = BTreeMap::new();
        for (k, d) in degrees {
            let n = crate::complex::parse_degree(k)?;
            if n > 0 {
                return Err(Error::Parse(format!("DG-ring degree {n} is positive")));
            }
            dd.insert(n, d.as_u64().ok_or_else(|| Error::Parse("degree dimension must be a number".into()))? as usize);
        }
        let lo = dd.keys().next().copied().unwrap_or(0).min(0);
        let dims: Vec<usize> = (lo..=0).map(|n| dd.get(&n).copied().unwrap_or(0)).collect();
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total: usize = dims.iter().sum();
        let off = |n: i32| offsets[(n - lo) as usize];
        let dim_of = |n: i32| if n < lo || n > 0 { 0 } else { dims[(n - lo) as usize] };
        let mut table = vec![field.zero(); total * total * total];
        if let Some(m) = v.get("mult").and_then(Value::as_object) {
            for (key, t) in m {
                let (p, q) = key
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<i32>().ok()?, b.trim().parse::<i32>().ok()?)))
                    .ok_or_else(|| Error::Parse(format!("invalid multiplication key {key:?}")))?;
                let r = p + q;
                let arr = t.as_array().ok_or_else(|| Error::Parse("multiplication tensor must be an array".into()))?;
                if arr.len() != dim_of(p) || dim_of(r) == 0 {
                    return Err(Error::ShapeMismatch(format!("multiplication block {key} has the wrong shape")));
                }
                for (i, row) in arr.iter().enumerate() {
                    let row = row
                        .as_array()
                        .filter(|r| r.len() == dim_of(q))
                        .ok_or_else(|| Error::ShapeMismatch(format!("block {key}")))?;
                    for (j, col) in row.iter().enumerate() {
                        let col = col
                            .as_array()
                            .filter(|c| c.len() == dim_of(r))
                            .ok_or_else(|| Error::ShapeMismatch(format!("block {key}")))?;
                        for (k, s) in col.iter().enumerate() {
                            table[((off(p) + i) * total + off(q) + j) * total + off(r) + k] =
                                scalar_from_json(field, s)?;
                        }
                    }
                }
            }
        }
        let mut diff = Matrix::zeros(field, total, total);
        if let Some(d) = v.get("diff").and_then(Value::as_object) {
            for (key, m) in d {
                let n = crate::complex::parse_degree(key)?;
                let m = Matrix::from_json(field, m)?;
                if m.rows() != dim_of(n + 1) || m.cols() != dim_of(n) {
                    return Err(Error::ShapeMismatch(format!("differential block {n} has the wrong shape")));
                }
                if m.rows() > 0 && m.cols() > 0 {
                    diff.set_block(off(n + 1), off(n), &m);
                }
            }
        }
        let u = v.get("unit").and_then(Value::as_array).ok_or_else(|| Error::Parse("DG-ring needs a unit".into()))?;
        if u.len() != dim_of(0) {
            return Err(Error::ShapeMismatch("unit must list the degree-0 coordinates".into()));
        }
        let mut unit = vec![field.zero(); total];
        for (i, s) in u.iter().enumerate() {
            unit[off(0) + i] = scalar_from_json(field, s)?;
        }
        let r = Self::build(field, lo, dims, table, diff, unit, None)?;
        match v.get("h0_radical_hint") {
            Some(h) if r.tau.is_some() => {
                let hint = crate::algebra::algebra::hint_from_json(field, r.h0.dim(), h)?;
                let h0 = r.h0.with_radical_hint(hint)?;
                Ok(Arc::new(DGRing { h0, ..r }))
            }
            Some(_) => Err(Error::Parse("h0_radical_hint needs d = 0 into degree 0".into())),
            None => Ok(Arc::new(r)),
        }
    }
}

/// `A ⋉ M` with `[a;m][a';m'] = [aa'; am' + ma']` and the differential of `M`.
pub fn trivial_extension(a: &Arc<Algebra>, m: &BimoduleComplex) -> Result<Arc<DGRing>> {
    if !crate::algebra::module::same_algebra(m.algebra(), a) {
        return Err(Error::AlgebraMismatch);
    }
    if let Some((_, hi)) = m.span() {
        if hi > 0 {
            return Err(Error::SupPositive { degree: hi });
        }
    }
    let f = a.field();
    let lo = m.span().map_or(0, |(lo, _)| lo.min(0));
    // basis: M^lo, ..., M^{-1}, then A followed by M^0
    let mut dims = Vec::new();
    let mut blocks: Vec<(i32, usize, Bimodule)> = Vec::new();
    let mut offset = 0;
    for n in lo..=0 {
        if n == 0 {
            offset += a.dim();
        }
        let t = m.term(n);
        blocks.push((n, offset, t.clone()));
        offset += t.dim();
        dims.push(t.dim() + if n == 0 { a.dim() } else { 0 });
    }
    let total = offset;
    let a_off = total - a.dim() - m.term(0).dim();
    let mut table = vec![f.zero(); total * total * total];
    let idx = |i: usize, j: usize, k: usize| (i * total + j) * total + k;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for k in 0..a.dim() {
                table[idx(a_off + i, a_off + j, a_off + k)] = a.c(i, j, k).clone();
            }
        }
    }
    for (_, off, b) in &blocks {
        for i in 0..a.dim() {
            let (l, r) = (&b.left()[i], &b.right()[i]);
            for j in 0..b.dim() {
                for k in 0..b.dim() {
                    table[idx(a_off + i, off + j, off + k)] = l.get(k, j).clone();
                    table[idx(off + j, a_off + i, off + k)] = r.get(k, j).clone();
                }
            }
        }
    }
    let mut diff = Matrix::zeros(f, total, total);
    for (n, off, b) in &blocks {
        if let Some((_, o1, b1)) = blocks.iter().find(|(k, _, _)| *k == n + 1) {
            if b.dim() > 0 && b1.dim() > 0 {
                diff.set_block(*o1, *off, &m.diff(*n));
            }
        }
    }
    let mut unit = vec![f.zero(); total];
    for (i, u) in a.unit().iter().enumerate() {
        unit[a_off + i] = u.clone();
    }
    DGRing::build(f, lo, dims, table, diff, unit, Some((a.clone(), m.clone()))).map(Arc::new)
}

impl DGRing {
    /// Offset of the `A` block inside `B^0` for trivial extensions.
    pub fn algebra_offset(&self) -> usize {
        self.degree_indices(0).first().copied().unwrap_or(0)
    }

    /// Element `[a; m]` of a trivial extension; `m` given in the total coordinates of `M`.
    pub fn pair(&self, a: &[Scalar], m: &[Scalar]) -> Result<Vec<Scalar>> {
        let (alg, mm) = self.extension.as_ref().ok_or(Error::NotTrivialExtension)?;
        let f = self.field;
        let mut v = vec![f.zero(); self.dim()];
        let a_off = self.algebra_offset();
        for (i, x) in a.iter().enumerate().take(alg.dim()) {
            v[a_off + i] = x.clone();
        }
        let mut src = 0;
        for n in self.lo..=0 {
            let t = mm.term(n).dim();
            let base = if n == 0 { a_off + alg.dim() } else { self.degree_indices(n).first().copied().unwrap_or(0) };
            v[base..base + t].clone_from_slice(&m[src..src + t]);
            src += t;
        }
        Ok(v)
    }

    /// Splits an element of a trivial extension into its `A` and `M` coordinates.
    pub fn unpair(&self, x: &[Scalar]) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        let (alg, mm) = self.extension.as_ref().ok_or(Error::NotTrivialExtension)?;
        let a_off = self.algebra_offset();
        let a = x[a_off..a_off + alg.dim()].to_vec();
        let mut m = Vec::new();
        for n in self.lo..=0 {
            let t = mm.term(n).dim();
            let base = if n == 0 { a_off + alg.dim() } else { self.degree_indices(n).first().copied().unwrap_or(0) };
            m.extend_from_slice(&x[base..base + t]);
        }
        Ok((a, m))
    }

    /// Total dimension of `M` for trivial extensions.
    pub fn extension_dim(&self) -> Result<usize> {
        let (_, mm) = self.extension.as_ref().ok_or(Error::NotTrivialExtension)?;
        Ok(mm.terms().values().map(Bimodule::dim).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;

    fn dual_numbers() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap()
    }

    fn da_shifted(a: &Arc<Algebra>, n: i32) -> BimoduleComplex {
        BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(a), n)
    }

    #[test]
    fn k_by_k_minus_one() {
        let k = Algebra::ground(Field::Rationals);
        let b = trivial_extension(&k, &da_shifted(&k, -1)).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.degree_dims(), [(-1, 1), (0, 1)].into());
        assert!(Arc::ptr_eq(b.h0(), &k));
    }

    #[test]
    fn dual_numbers_extension() {
        let a = dual_numbers();
        let b = trivial_extension(&a, &da_shifted(&a, -1)).unwrap();
        assert_eq!(b.dim(), 4);
        assert_eq!(b.h0().table(), a.table());
        let tau = b.section().unwrap();
        assert_eq!(&(b.projection() * tau), &Matrix::identity(a.field(), 2));
    }

    #[test]
    fn product_formula() {
        let a = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let m = da_shifted(&a, -1);
        let b = trivial_extension(&a, &m).unwrap();
        let da = m.term(-1);
        let f = a.field();
        let elems: Vec<Vec<Scalar>> =
            (0..3).map(|i| (0..3).map(|j| f.from_i64(((i * 7 + j * 3) % 5) as i64 - 2)).collect()).collect();
        for a1 in &elems {
            for m1 in &elems {
                for a2 in &elems {
                    for m2 in &elems {
                        let x = b.pair(a1, m1).unwrap();
                        let y = b.pair(a2, m2).unwrap();
                        let (pa, pm) = b.unpair(&b.mul(&x, &y)).unwrap();
                        assert_eq!(pa, a.mul(a1, a2));
                        let expect: Vec<Scalar> = da
                            .left_act(a1)
                            .apply(m2)
                            .iter()
                            .zip(da.right_act(a2).apply(m1))
                            .map(|(u, v)| u.add_ref(&v))
                            .collect();
                        assert_eq!(pm, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn positive_degree_rejected() {
        let a = dual_numbers();
        assert!(matches!(trivial_extension(&a, &da_shifted(&a, 1)), Err(Error::SupPositive { degree: 1 })));
    }

    #[test]
    fn degree_zero_extension_changes_h0() {
        let a = dual_numbers();
        let b = trivial_extension(&a, &da_shifted(&a, 0)).unwrap();
        assert_eq!(b.h0().dim(), 4);
        assert!(b.has_section());
    }

    #[test]
    fn nonzero_differential_into_degree_zero() {
        // k ⋉ (k --1--> k) in degrees -1, 0: H^0 is k again but no section exists
        let k = Algebra::ground(Field::Rationals);
        let one = Bimodule::regular(&k);
        let m = BimoduleComplex::new(
            k.clone(),
            [(-1, one.clone()), (0, one)].into(),
            [(-1, Matrix::identity(k.field(), 1))].into(),
        )
        .unwrap();
        let b = trivial_extension(&k, &m).unwrap();
        assert_eq!(b.h0().dim(), 1);
        assert!(matches!(b.section(), Err(Error::NoCanonicalSection(_))));
    }

    #[test]
    fn opposite_and_json() {
        let a = Quiver::parse_short(Field::prime(5).unwrap(), &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let b = trivial_extension(&a, &da_shifted(&a, -1)).unwrap();
        let op = b.opposite();
        assert!(op.is_opposite_of(&b));
        assert!(b.is_opposite_of(&op));
        let back = DGRing::from_json(&b.to_json()).unwrap();
        assert_eq!(*back, *b);
        assert!(back.has_section());
        assert_eq!(back.h0().structure().unwrap().radical(), a.structure().unwrap().radical());
    }

    #[test]
    fn leibniz_violation_detected() {
        // k ⋉ k²[-1] with d(m1) = 1, d(m2) = 0 breaks d(m1 m2) = d(m1) m2 - m1 d(m2)
        let f = Field::Rationals;
        let k = Algebra::ground(f);
        let two = Bimodule::regular(&k).direct_sum(&Bimodule::regular(&k)).unwrap();
        let b = trivial_extension(&k, &BimoduleComplex::bimodule_in_degree(&two, -1)).unwrap();
        let mut d = Matrix::zeros(f, 3, 3);
        d.set(2, 0, f.one());
        let r = DGRing::new(f, -1, vec![2, 1], b.table().to_vec(), d, b.unit().to_vec());
        assert!(matches!(r, Err(Error::InvalidStructure(_))));
        // d(m1) = 1 alone is a valid (acyclic) DG-ring
        let one = trivial_extension(&k, &da_shifted(&k, -1)).unwrap();
        let mut d = Matrix::zeros(f, 2, 2);
        d.set(1, 0, f.one());
        let acyclic = DGRing::new(f, -1, vec![1, 1], one.table().to_vec(), d, one.unit().to_vec()).unwrap();
        assert_eq!(acyclic.h0().dim(), 0);
    }
}
