use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::rational::Rational;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Field`]. Empty shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub rank: usize,
    /// Columns form a basis of the null space.
    pub kernel: Matrix,
    /// Independent columns of the input spanning its column space.
    pub image: Matrix,
    pub pivot_cols: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds from row-major data, checking length and field membership.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(format!("entry {bad} does not lie in {field}")));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        Self::from_fn(field, rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Self {
        Self::from_columns(field, v.len(), &[v.to_vec()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Matrix product, rejecting incompatible shapes.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch("matrices over different fields".into()));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times a vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, k);
                if !a.is_zero() {
                    o.add_mul(a, x);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    fn zip_with(&self, o: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch in elementwise op");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Overwrites the block starting at `(r0, c0)` with `b`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Self::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Self::from_fn(self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Self::from_fn(self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        Self::from_fn(self.field, self.rows * o.rows, self.cols * o.cols, |r, c| {
            self.get(r / o.rows, c / o.cols).mul_ref(o.get(r % o.rows, c % o.cols))
        })
    }

    /// Row-major flattening as a single vector.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix { field, rows, cols, data: v.to_vec() }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Full elimination using only the first `limit` columns as pivot candidates.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.data[r * cols + c].inv().expect("nonzero pivot");
            for j in c..cols {
                let v = self.data[r * cols + j].mul_ref(&inv);
                self.data[r * cols + j] = v;
            }
            let pivot_row: Vec<Scalar> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                let nf = f.neg_ref();
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        self.data[i * cols + c + off].add_mul(&nf, pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank, kernel basis, image basis and pivot columns.
    pub fn reduce(&self) -> Reduction {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let mut is_pivot = vec![usize::MAX; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            is_pivot[p] = i;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| is_pivot[c] == usize::MAX).collect();
        let mut kernel = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            kernel.set(f, k, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if !v.is_zero() {
                    kernel.set(p, k, v.neg_ref());
                }
            }
        }
        Reduction { rank, kernel, image: self.select_columns(&pivots), pivot_cols: pivots }
    }

    pub fn kernel(&self) -> Matrix {
        self.reduce().kernel
    }

    /// Independent columns spanning the column space.
    pub fn column_basis(&self) -> Matrix {
        let (_, p) = self.rref();
        self.select_columns(&p)
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is not in the column space.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch(format!("right-hand side has {} rows, matrix has {}", b.rows, self.rows)));
        }
        let n = self.cols;
        let mut aug = self.hstack(b);
        let pivots = aug.rref_in_place(n);
        let rank = pivots.len();
        for i in rank..aug.rows {
            if aug.row(i)[n..].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(self.field, n, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, aug.get(i, n + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(self.field, n));
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn trace(&self) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    pub fn pow(&self, k: usize) -> Matrix {
        let mut r = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// JSON object `{"rows","cols","entries"}` with exact entries.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("matrix serializes")
    }

    pub fn from_json(field: Field, v: &Value) -> Result<Matrix> {
        let raw: MatrixJson = serde_json::from_value(v.clone())?;
        raw.into_matrix(field)
    }
}

pub(crate) fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Q(r) => match r.to_i64() {
            Some(n) => Value::from(n),
            None => Value::from(r.to_string()),
        },
        Scalar::F { v, .. } => Value::from(*v),
    }
}

pub(crate) fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    let bad = || Error::Parse(format!("invalid field element {v}"));
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(bad)?;
            if let Field::Prime { p } = field {
                if i < 0 || i >= p as i64 {
                    return Err(Error::FieldMismatch(format!("{i} is not in [0,{p})")));
                }
            }
            Ok(field.from_i64(i))
        }
        Value::String(s) => {
            let r: Rational = s.parse().map_err(|_| bad())?;
            match field {
                Field::Rationals => Ok(Scalar::Q(r)),
                Field::Prime { .. } => {
                    let i = r.to_i64().ok_or_else(bad)?;
                    scalar_from_json(field, &Value::from(i))
                }
            }
        }
        _ => Err(bad()),
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.data.iter().map(scalar_to_json).collect() }
            .serialize(s)
    }
}

/// Field-agnostic JSON form of a matrix; the field comes from context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Value>,
}

impl MatrixJson {
    pub fn into_matrix(self, field: Field) -> Result<Matrix> {
        let data = self.entries.iter().map(|e| scalar_from_json(field, e)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(field, self.rows, self.cols, data)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}> {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.compose(o).expect("matrix product shape")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a + b)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        self.zip_with(o, |a, b| a - b)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }
}
