//! Subspace bookkeeping: incremental echelon bases and coordinate extraction.

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Semi-reduced echelon basis that grows one vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    n: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(field: Field, n: usize) -> Self {
        Echelon { field, n, rows: Vec::new() }
    }

    pub fn from_columns(m: &Matrix) -> Self {
        let mut e = Echelon::new(m.field(), m.rows());
        for c in 0..m.cols() {
            e.insert(&m.column(c));
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Residue of `v` after reduction against the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].neg_ref();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    x.add_mul(&f, r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.n, "echelon vector length");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        for x in r.iter_mut() {
            *x = x.mul_ref(&inv);
        }
        self.rows.push((p, r));
        true
    }

    /// Basis vectors (reduced form) as columns.
    pub fn basis(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.rows.iter().map(|(_, r)| r.clone()).collect();
        Matrix::from_columns(self.field, self.n, &cols)
    }
}

/// Coordinates with respect to a fixed basis of a subspace.
///
/// Selects rows on which the basis matrix is invertible, so extracting the
/// coordinates of a vector known to lie in the span costs one small product.
#[derive(Clone, Debug)]
pub struct Coords {
    basis: Matrix,
    rows: Vec<usize>,
    inv: Matrix,
}

impl Coords {
    /// `basis` must have independent columns.
    pub fn new(basis: &Matrix) -> Self {
        let (_, rows) = basis.transpose().rref();
        assert_eq!(rows.len(), basis.cols(), "basis columns must be independent");
        let inv = basis.select_rows(&rows).inverse().expect("selected rows are invertible");
        Coords { basis: basis.clone(), rows, inv }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of a vector assumed to lie in the span.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let sub: Vec<Scalar> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.apply(&sub)
    }

    /// Coordinates, or `None` when `v` is outside the span.
    pub fn coords_checked(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.coords(v);
        if self.basis.apply(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    /// Coordinates of every column of `m`, as columns.
    pub fn coords_matrix(&self, m: &Matrix) -> Matrix {
        &self.inv * &m.select_rows(&self.rows)
    }
}

/// Columns of `candidates` that extend the span of `base`, greedily in order.
pub fn extending_columns(base: &Matrix, candidates: &Matrix) -> Vec<usize> {
    let mut e = Echelon::from_columns(base);
    (0..candidates.cols()).filter(|&c| e.insert(&candidates.column(c))).collect()
}

/// Basis of a complement of `sub` inside `space` (both given by spanning columns).
pub fn complement(sub: &Matrix, space: &Matrix) -> Matrix {
    let idx = extending_columns(sub, space);
    space.select_columns(&idx)
}

/// Basis of the intersection of two column spans.
pub fn intersection(a: &Matrix, b: &Matrix) -> Matrix {
    let a = a.column_basis();
    let b = b.column_basis();
    let k = a.hstack(&(-&b)).kernel();
    let top = k.block(0, a.cols(), 0, k.cols());
    (&a * &top).column_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_tracks_span() {
        let f = Field::Rationals;
        let mut e = Echelon::new(f, 3);
        let v = |a, b, c| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        assert!(e.insert(&v(1, 2, 3)));
        assert!(e.insert(&v(0, 1, 1)));
        assert!(!e.insert(&v(2, 5, 7)));
        assert!(e.contains(&v(1, 3, 4)));
        assert!(!e.contains(&v(0, 0, 1)));
        assert_eq!(e.dim(), 2);
    }

    #[test]
    fn coordinates_recover_combination() {
        let f = Field::prime(5).unwrap();
        let b = Matrix::from_i64_rows(f, &[vec![1, 0], vec![2, 1], vec![0, 3]]);
        let c = Coords::new(&b);
        let v = b.apply(&[f.from_i64(4), f.from_i64(2)]);
        assert_eq!(c.coords(&v), vec![f.from_i64(4), f.from_i64(2)]);
        assert!(c.coords_checked(&[f.from_i64(1), f.zero(), f.zero()]).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let f = Field::Rationals;
        let a = Matrix::from_i64_rows(f, &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b = Matrix::from_i64_rows(f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let i = intersection(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(i.get(0, 0).is_zero() && i.get(2, 0).is_zero());
        assert_eq!(complement(&i, &a).cols(), 1);
    }
}
