use std::sync::{Arc, OnceLock, Weak};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::matrix::{scalar_from_json, scalar_to_json};
use crate::linalg::{Coords, Echelon, Field, Matrix, Scalar};

use super::structure::Structure;

/// Known radical data supplied by the constructor (quiver algebras).
///
/// It is never trusted blindly: [`Structure`] verifies it before use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalHint {
    /// Columns span the proposed radical.
    pub radical: Matrix,
    /// Proposed complete set of orthogonal idempotents, one per simple.
    pub idempotents: Vec<Vec<Scalar>>,
}

/// Finite-dimensional associative unital algebra given by structure constants.
pub struct Algebra {
    field: Field,
    dim: usize,
    /// `table[(i * dim + j) * dim + k]` is the coefficient of `e_k` in `e_i e_j`.
    table: Vec<Scalar>,
    unit: Vec<Scalar>,
    labels: Vec<String>,
    hint: Option<RadicalHint>,
    left: OnceLock<Vec<Matrix>>,
    right: OnceLock<Vec<Matrix>>,
    generators: OnceLock<Vec<usize>>,
    structure: OnceLock<Result<Arc<Structure>>>,
    opposite: OnceLock<Arc<Algebra>>,
    opposite_of: OnceLock<Weak<Algebra>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra<{}>(dim {}, basis {:?})", self.field, self.dim, self.labels)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.dim == o.dim && self.table == o.table && self.unit == o.unit
    }
}

impl Eq for Algebra {}

pub(crate) fn hint_to_json(h: &RadicalHint) -> Value {
    json!({
        "radical": h.radical.to_json(),
        "idempotents": h.idempotents.iter().map(|e| e.iter().map(scalar_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub(crate) fn hint_from_json(field: Field, dim: usize, v: &Value) -> Result<RadicalHint> {
    let radical = Matrix::from_json(
        field,
        v.get("radical").ok_or_else(|| Error::Parse("radical hint needs \"radical\"".into()))?,
    )?;
    let idempotents = v
        .get("idempotents")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("radical hint needs \"idempotents\"".into()))?
        .iter()
        .map(|e| {
            let e = e
                .as_array()
                .filter(|e| e.len() == dim)
                .ok_or_else(|| Error::ShapeMismatch("idempotent length".into()))?;
            e.iter().map(|x| scalar_from_json(field, x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if radical.rows() != dim {
        return Err(Error::ShapeMismatch("radical hint has the wrong length".into()));
    }
    Ok(RadicalHint { radical, idempotents })
}

impl Algebra {
    /// Validates shape, associativity and unit, returning the first witness on failure.
    pub fn from_structure_constants(
        field: Field,
        dim: usize,
        table: Vec<Scalar>,
        unit: Vec<Scalar>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Algebra>> {
        let a = Self::build(field, dim, table, unit, labels, None)?;
        a.check_associative()?;
        a.check_unit()?;
        Ok(Arc::new(a))
    }

    pub(crate) fn with_hint(
        field: Field,
        dim: usize,
        table: Vec<Scalar>,
        unit: Vec<Scalar>,
        labels: Option<Vec<String>>,
        hint: Option<RadicalHint>,
    ) -> Result<Arc<Algebra>> {
        let a = Self::build(field, dim, table, unit, labels, hint)?;
        a.check_associative()?;
        a.check_unit()?;
        Ok(Arc::new(a))
    }

    fn build(
        field: Field,
        dim: usize,
        table: Vec<Scalar>,
        unit: Vec<Scalar>,
        labels: Option<Vec<String>>,
        hint: Option<RadicalHint>,
    ) -> Result<Algebra> {
        if table.len() != dim * dim * dim {
            return Err(Error::ShapeMismatch(format!(
                "structure constants have {} entries, expected {}",
                table.len(),
                dim * dim * dim
            )));
        }
        if unit.len() != dim {
            return Err(Error::ShapeMismatch(format!("unit has length {}, expected {dim}", unit.len())));
        }
        if table.iter().chain(&unit).any(|s| s.field() != field) {
            return Err(Error::FieldMismatch("structure constant outside the base field".into()));
        }
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("b{i}")).collect());
        if labels.len() != dim {
            return Err(Error::ShapeMismatch(format!("{} basis labels for dimension {dim}", labels.len())));
        }
        Ok(Algebra {
            field,
            dim,
            table,
            unit,
            labels,
            hint,
            left: OnceLock::new(),
            right: OnceLock::new(),
            generators: OnceLock::new(),
            structure: OnceLock::new(),
            opposite: OnceLock::new(),
            opposite_of: OnceLock::new(),
        })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Arc<Algebra> {
        Self::from_structure_constants(field, 1, vec![field.one()], vec![field.one()], Some(vec!["1".into()]))
            .expect("ground field is an algebra")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn hint(&self) -> Option<&RadicalHint> {
        self.hint.as_ref()
    }

    /// The same algebra carrying verified-on-use radical data.
    pub fn with_radical_hint(&self, hint: RadicalHint) -> Result<Arc<Algebra>> {
        Self::with_hint(
            self.field,
            self.dim,
            self.table.clone(),
            self.unit.clone(),
            Some(self.labels.clone()),
            Some(hint),
        )
    }

    /// JSON: `{"field","dimension","structure_constants":[i][j][k],"unit","basis_labels"}`, plus
    /// `"radical_hint":{"radical","idempotents"}` when the algebra carries one.
    pub fn to_json(&self) -> Value {
        let d = self.dim;
        let sc: Vec<Vec<Vec<Value>>> = (0..d)
            .map(|i| (0..d).map(|j| self.product_row(i, j).iter().map(scalar_to_json).collect()).collect())
            .collect();
        let mut v = json!({
            "field": self.field,
            "dimension": d,
            "structure_constants": sc,
            "unit": self.unit.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "basis_labels": self.labels,
        });
        if let Some(h) = &self.hint {
            v["radical_hint"] = hint_to_json(h);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Arc<Algebra>> {
        let field: Field = serde_json::from_value(
            v.get("field").cloned().ok_or_else(|| Error::Parse("algebra needs a field".into()))?,
        )?;
        let field = field.validate()?;
        let d = v
            .get("dimension")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("algebra needs a \"dimension\"".into()))? as usize;
        let sc = v
            .get("structure_constants")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("algebra needs \"structure_constants\"".into()))?;
        let shape = || Error::ShapeMismatch(format!("structure constants must be {d}x{d}x{d}"));
        if sc.len() != d {
            return Err(shape());
        }
        let mut table = Vec::with_capacity(d * d * d);
        for row in sc {
            let row = row.as_array().filter(|r| r.len() == d).ok_or_else(shape)?;
            for col in row {
                let col = col.as_array().filter(|c| c.len() == d).ok_or_else(shape)?;
                for x in col {
                    table.push(scalar_from_json(field, x)?);
                }
            }
        }
        let unit = v
            .get("unit")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("algebra needs a \"unit\"".into()))?
            .iter()
            .map(|x| scalar_from_json(field, x))
            .collect::<Result<Vec<_>>>()?;
        let labels = match v.get("basis_labels") {
            Some(l) => Some(serde_json::from_value::<Vec<String>>(l.clone())?),
            None => None,
        };
        let hint = match v.get("radical_hint") {
            Some(h) => Some(hint_from_json(field, d, h)?),
            None => None,
        };
        Self::with_hint(field, d, table, unit, labels, hint)
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    fn product_row(&self, i: usize, j: usize) -> &[Scalar] {
        let s = (i * self.dim + j) * self.dim;
        &self.table[s..s + self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    /// Product of two elements in basis coordinates.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coef = xi.mul_ref(yj);
                for (o, c) in out.iter_mut().zip(self.product_row(i, j)) {
                    if !c.is_zero() {
                        o.add_mul(&coef, c);
                    }
                }
            }
        }
        out
    }

    /// Left multiplication matrices `L_i : x -> e_i x`.
    pub fn left_mult(&self) -> &[Matrix] {
        self.left.get_or_init(|| {
            (0..self.dim)
                .map(|i| Matrix::from_fn(self.field, self.dim, self.dim, |k, j| self.c(i, j, k).clone()))
                .collect()
        })
    }

    /// Right multiplication matrices `R_i : x -> x e_i`.
    pub fn right_mult(&self) -> &[Matrix] {
        self.right.get_or_init(|| {
            (0..self.dim)
                .map(|i| Matrix::from_fn(self.field, self.dim, self.dim, |k, j| self.c(j, i, k).clone()))
                .collect()
        })
    }

    pub fn left_mult_by(&self, x: &[Scalar]) -> Matrix {
        combine(self.field, self.dim, self.left_mult(), x)
    }

    pub fn right_mult_by(&self, x: &[Scalar]) -> Matrix {
        combine(self.field, self.dim, self.right_mult(), x)
    }

    fn check_associative(&self) -> Result<()> {
        let l = self.left_mult();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = combine(self.field, self.dim, l, self.product_row(i, j));
                let rhs = &l[i] * &l[j];
                if lhs != rhs {
                    let k = (0..self.dim).find(|&k| lhs.column(k) != rhs.column(k)).unwrap_or(0);
                    return Err(Error::AssociativityFailure { i, j, k });
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::UnitFailure { i });
            }
        }
        Ok(())
    }

    /// Basis indices generating the algebra, chosen greedily in basis order.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut gens = Vec::new();
            let mut span = self.subalgebra_span(&gens);
            for i in 0..self.dim {
                if span.dim() == self.dim {
                    break;
                }
                if !span.contains(&self.basis_vector(i)) {
                    gens.push(i);
                    span = self.subalgebra_span(&gens);
                }
            }
            gens
        })
    }

    fn subalgebra_span(&self, gens: &[usize]) -> Echelon {
        let mut e = Echelon::new(self.field, self.dim);
        let mut frontier = vec![self.unit.clone()];
        e.insert(&self.unit);
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.mul(&self.basis_vector(g), &v);
                if e.insert(&w) {
                    frontier.push(w);
                }
            }
        }
        e
    }

    /// The opposite algebra, cached so repeated calls share one allocation.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(back) = self.opposite_of.get().and_then(Weak::upgrade) {
            return back;
        }
        self.opposite
            .get_or_init(|| {
                let d = self.dim;
                let table = Matrix::from_fn(self.field, 1, d * d * d, |_, idx| {
                    let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
                    self.c(j, i, k).clone()
                })
                .flatten();
                let op = Algebra::build(
                    self.field,
                    d,
                    table,
                    self.unit.clone(),
                    Some(self.labels.clone()),
                    self.hint.clone(),
                )
                .expect("opposite is well formed");
                let _ = op.opposite_of.set(Arc::downgrade(self));
                Arc::new(op)
            })
            .clone()
    }

    /// Whether two algebras are opposite to each other.
    pub fn is_opposite_of(&self, other: &Algebra) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && (0..self.dim).all(|i| (0..self.dim).all(|j| self.product_row(i, j) == other.product_row(j, i)))
    }

    /// Radical, simples and idempotents, computed once.
    pub fn structure(&self) -> Result<Arc<Structure>> {
        self.structure.get_or_init(|| Structure::compute(self).map(Arc::new)).clone()
    }

    /// Quotient algebra by a two-sided ideal (columns spanning it).
    ///
    /// Returns the quotient, the projection `A -> A/I` and a linear section.
    pub fn quotient(&self, ideal: &Matrix) -> Result<(Arc<Algebra>, Matrix, Matrix)> {
        let ideal = ideal.column_basis();
        if !self.is_two_sided_ideal(&ideal) {
            return Err(Error::InvalidStructure("quotient by a subspace that is not a two-sided ideal".into()));
        }
        let comp_idx = super::module::complement_indices(&ideal, self.dim);
        let comp = Matrix::identity(self.field, self.dim).select_columns(&comp_idx);
        let full = comp.hstack(&ideal);
        let inv = full.inverse().expect("complement completes a basis");
        let q = comp.cols();
        let proj = inv.block(0, q, 0, self.dim);
        let mut table = Vec::with_capacity(q * q * q);
        for a in 0..q {
            for b in 0..q {
                let p = self.mul(&self.basis_vector(comp_idx[a]), &self.basis_vector(comp_idx[b]));
                table.extend(proj.apply(&p));
            }
        }
        let unit = proj.apply(&self.unit);
        let labels = comp_idx.iter().map(|&i| self.labels[i].clone()).collect();
        let alg = Algebra::from_structure_constants(self.field, q, table, unit, Some(labels))?;
        Ok((alg, proj, comp))
    }

    /// Checks that the columns of `sub` span a two-sided ideal.
    pub fn is_two_sided_ideal(&self, sub: &Matrix) -> bool {
        let e = Echelon::from_columns(sub);
        let gens = self.generators();
        (0..sub.cols()).all(|c| {
            let v = sub.column(c);
            gens.iter().all(|&g| {
                let b = self.basis_vector(g);
                e.contains(&self.mul(&b, &v)) && e.contains(&self.mul(&v, &b))
            })
        })
    }

    /// Product space `X·Y` of two subspaces, as spanning columns.
    pub fn product_space(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let mut e = Echelon::new(self.field, self.dim);
        for a in 0..x.cols() {
            for b in 0..y.cols() {
                e.insert(&self.mul(&x.column(a), &y.column(b)));
            }
        }
        e.basis()
    }

    /// Least `n` with `J^n = 0`, if the span is nilpotent.
    pub fn nilpotency_index(&self, j: &Matrix) -> Option<usize> {
        let mut p = j.column_basis();
        let mut n = 1;
        while p.cols() > 0 {
            if n > self.dim + 1 {
                return None;
            }
            p = self.product_space(&p, j);
            n += 1;
        }
        Some(n)
    }

    /// Coordinates helper for a subspace of the algebra.
    pub fn coords(&self, basis: &Matrix) -> Coords {
        Coords::new(basis)
    }
}

pub(crate) fn combine(field: Field, n: usize, mats: &[Matrix], x: &[Scalar]) -> Matrix {
    let mut acc = Matrix::zeros(field, n, n);
    for (m, c) in mats.iter().zip(x) {
        if !c.is_zero() {
            acc = &acc + &m.scale(c);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    pub(crate) fn dual_numbers(f: Field) -> Arc<Algebra> {
        // basis 1, x with x^2 = 0
        let z = f.zero();
        let o = f.one();
        let table = vec![o.clone(), z.clone(), z.clone(), o.clone(), z.clone(), o.clone(), z.clone(), z.clone()];
        Algebra::from_structure_constants(f, 2, table, vec![o, z], Some(vec!["1".into(), "x".into()])).unwrap()
    }

    #[test]
    fn json_round_trip_keeps_radical_hint() {
        let f = Field::prime(5).unwrap();
        let a =
            crate::algebra::Quiver::parse_short(f, &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[], None)
                .unwrap();
        let v = a.to_json();
        assert!(v.get("radical_hint").is_some());
        let b = Algebra::from_json(&v).unwrap();
        assert_eq!(b.table(), a.table());
        assert_eq!(b.structure().unwrap().radical(), a.structure().unwrap().radical());
        let mut bare = v.clone();
        bare.as_object_mut().unwrap().remove("radical_hint");
        let c = Algebra::from_json(&bare).unwrap();
        assert!(matches!(c.structure(), Err(Error::UnsupportedCharacteristic { .. })));
        let d = Algebra::from_json(&dual_numbers(q()).to_json()).unwrap();
        assert_eq!(d.labels(), &["1".to_string(), "x".to_string()]);
    }

    #[test]
    fn field_is_algebra() {
        let k = Algebra::ground(q());
        assert_eq!(k.dim(), 1);
        assert!(k.generators().is_empty());
    }

    #[test]
    fn dual_numbers_valid() {
        let a = dual_numbers(q());
        let x = a.basis_vector(1);
        assert!(a.mul(&x, &x).iter().all(Scalar::is_zero));
        assert_eq!(a.generators(), &[1]);
    }

    #[test]
    fn non_associative_rejected() {
        // e0 e0 = e1, e1 e0 = e0, everything else zero; unit check never reached
        let f = q();
        let mut t = vec![f.zero(); 8];
        t[1] = f.one(); // e0 e0 -> e1
        t[2 * 2] = f.one(); // e1 e0 -> e0
        let r = Algebra::from_structure_constants(f, 2, t, vec![f.one(), f.zero()], None);
        assert!(matches!(r, Err(Error::AssociativityFailure { .. })));
    }

    #[test]
    fn unit_failure_reported() {
        let f = q();
        let r = Algebra::from_structure_constants(f, 1, vec![f.one()], vec![f.from_i64(2)], None);
        assert_eq!(r.unwrap_err(), Error::UnitFailure { i: 0 });
    }

    #[test]
    fn opposite_involutive() {
        let a = dual_numbers(q());
        let op = a.opposite();
        assert_eq!(*op, *a);
        assert!(Arc::ptr_eq(&op.opposite(), &a));
    }

    #[test]
    fn upper_triangular_opposite_differs() {
        // basis E11, E12, E22
        let f = q();
        let d = 3;
        let mut t = vec![f.zero(); d * d * d];
        let mut set = |i: usize, j: usize, k: usize| t[(i * d + j) * d + k] = f.one();
        set(0, 0, 0);
        set(0, 1, 1);
        set(1, 2, 1);
        set(2, 2, 2);
        let unit = vec![f.one(), f.zero(), f.one()];
        let a = Algebra::from_structure_constants(f, 3, t, unit, None).unwrap();
        let op = a.opposite();
        assert_ne!(*op, *a);
        assert!(op.is_opposite_of(&a));
    }

    #[test]
    fn quotient_by_radical_of_dual_numbers() {
        let a = dual_numbers(q());
        let ideal = Matrix::column_vector(q(), &a.basis_vector(1));
        assert!(a.is_two_sided_ideal(&ideal));
        assert_eq!(a.nilpotency_index(&ideal), Some(2));
        let (qa, proj, _) = a.quotient(&ideal).unwrap();
        assert_eq!(qa.dim(), 1);
        assert_eq!(proj.rows(), 1);
    }
}
