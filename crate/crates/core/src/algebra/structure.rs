//! Jacobson radical, simple modules and primitive idempotents.

use std::sync::Arc;

use super::algebra::{Algebra, RadicalHint};
use super::module::{find_invertible, LeftModule};
use crate::error::{Error, Result};
use crate::linalg::rational::rational_roots;
use crate::linalg::{Coords, Echelon, Field, Matrix, Scalar};

/// Largest prime for which eigenvalues are found by exhaustive search.
const PRIME_SEARCH_LIMIT: u32 = 1 << 20;

/// Radical and semisimple data of an algebra.
#[derive(Debug)]
pub struct Structure {
    radical: Matrix,
    /// Action matrices of each simple, one simple per isomorphism class.
    simples: Vec<Arc<Vec<Matrix>>>,
    /// A primitive idempotent `e_i` with `e_i S_i != 0`, per class.
    idempotents: Vec<Vec<Scalar>>,
    /// Complete set of orthogonal primitive idempotents summing to one.
    complete: Vec<Vec<Scalar>>,
    complete_class: Vec<usize>,
    /// Basis (as algebra elements) of `A e_i` per class.
    projective_basis: Vec<Matrix>,
    projectives: Vec<Arc<Vec<Matrix>>>,
    hinted: bool,
}

impl Structure {
    pub(crate) fn compute(a: &Algebra) -> Result<Structure> {
        if let Some(h) = a.hint() {
            if let Some(s) = Self::from_hint(a, h) {
                return Ok(s);
            }
        }
        let p = a.field().characteristic();
        if p != 0 && p as usize <= a.dim() {
            return Err(Error::UnsupportedCharacteristic { p, dim: a.dim() });
        }
        let rad = trace_radical(a);
        Self::general(a, rad)
    }

    /// Uses constructor-supplied radical data after verifying it.
    fn from_hint(a: &Algebra, h: &RadicalHint) -> Option<Structure> {
        let f = a.field();
        let n = h.idempotents.len();
        let j = h.radical.column_basis();
        if j.cols() != h.radical.cols() || j.cols() + n != a.dim() {
            return None;
        }
        for (i, e) in h.idempotents.iter().enumerate() {
            for (k, g) in h.idempotents.iter().enumerate() {
                let p = a.mul(e, g);
                let want = if i == k { e.clone() } else { a.zero_vec() };
                if p != want {
                    return None;
                }
            }
        }
        let sum = h.idempotents.iter().fold(a.zero_vec(), |acc, e| acc.iter().zip(e).map(|(x, y)| x + y).collect());
        if sum != a.unit() {
            return None;
        }
        if !a.is_two_sided_ideal(&j) || a.nilpotency_index(&j).is_none() {
            return None;
        }
        let full = Matrix::from_columns(f, a.dim(), &h.idempotents).hstack(&j);
        let inv = full.inverse()?;
        // simple i is one-dimensional, b acts by the e_i-coordinate of b modulo J
        let simples = (0..n)
            .map(|i| Arc::new((0..a.dim()).map(|k| Matrix::from_fn(f, 1, 1, |_, _| inv.get(i, k).clone())).collect()))
            .collect();
        let mut s = Structure {
            radical: j,
            simples,
            idempotents: h.idempotents.clone(),
            complete: h.idempotents.clone(),
            complete_class: (0..n).collect(),
            projective_basis: Vec::new(),
            projectives: Vec::new(),
            hinted: true,
        };
        s.fill_projectives(a);
        Some(s)
    }

    fn general(a: &Algebra, rad: Matrix) -> Result<Structure> {
        let f = a.field();
        let (abar, proj, section) = a.quotient(&rad)?;
        let reg = LeftModule::regular(&abar);
        let summands = decompose(&reg, Matrix::identity(f, abar.dim()))?;
        let all = summands.iter().fold(Matrix::zeros(f, abar.dim(), 0), |acc, b| acc.hstack(b));
        let one = all
            .solve(&Matrix::column_vector(f, abar.unit()))?
            .ok_or_else(|| Error::InvalidStructure("semisimple decomposition does not span".into()))?;
        let mut eps = Vec::new();
        let mut off = 0;
        for b in &summands {
            let coef: Vec<Scalar> = (0..b.cols()).map(|c| one.get(off + c, 0).clone()).collect();
            eps.push(b.apply(&coef));
            off += b.cols();
        }
        let mods: Vec<LeftModule> = summands.iter().map(|b| reg.submodule(b).map(|x| x.0)).collect::<Result<_>>()?;
        let mut class_of = Vec::with_capacity(mods.len());
        let mut reps: Vec<usize> = Vec::new();
        for (j, m) in mods.iter().enumerate() {
            let found = reps.iter().position(|&r| plain_isomorphic(&mods[r], m));
            match found {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(reps.len());
                    reps.push(j);
                }
            }
        }
        let split: usize = reps.iter().map(|&r| mods[r].dim() * mods[r].dim()).sum();
        if split != abar.dim() {
            return Err(Error::NonSplitSemisimple);
        }
        // lift the orthogonal idempotents one at a time inside corner rings
        let mut complete = Vec::new();
        let mut used = a.zero_vec();
        for (j, e) in eps.iter().enumerate() {
            let rest: Vec<Scalar> = a.unit().iter().zip(&used).map(|(u, x)| u - x).collect();
            let lifted = if j + 1 == eps.len() {
                rest
            } else {
                let x = section.apply(e);
                let x = a.mul(&a.mul(&rest, &x), &rest);
                lift_idempotent(a, x)?
            };
            used = used.iter().zip(&lifted).map(|(u, x)| u + x).collect();
            complete.push(lifted);
        }
        let simples =
            reps.iter().map(|&r| Arc::new((0..a.dim()).map(|k| mods[r].act(&proj.column(k))).collect())).collect();
        let idempotents = reps.iter().map(|&r| complete[r].clone()).collect();
        let mut s = Structure {
            radical: rad,
            simples,
            idempotents,
            complete,
            complete_class: class_of,
            projective_basis: Vec::new(),
            projectives: Vec::new(),
            hinted: false,
        };
        s.fill_projectives(a);
        Ok(s)
    }

    fn fill_projectives(&mut self, a: &Algebra) {
        for e in &self.idempotents {
            let basis = a.right_mult_by(e).column_basis();
            let c = Coords::new(&basis);
            let action = a.left_mult().iter().map(|l| c.coords_matrix(&(l * &basis))).collect();
            self.projective_basis.push(basis);
            self.projectives.push(Arc::new(action));
        }
    }

    pub fn radical(&self) -> &Matrix {
        &self.radical
    }

    pub fn simple_count(&self) -> usize {
        self.simples.len()
    }

    /// Action matrices of simple `i`.
    pub fn simple_action(&self, i: usize) -> &Arc<Vec<Matrix>> {
        &self.simples[i]
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn complete_idempotents(&self) -> &[Vec<Scalar>] {
        &self.complete
    }

    pub fn complete_classes(&self) -> &[usize] {
        &self.complete_class
    }

    /// Basis of `A e_i` as columns of algebra elements.
    pub fn projective_basis(&self, i: usize) -> &Matrix {
        &self.projective_basis[i]
    }

    pub fn projective_action(&self, i: usize) -> &Arc<Vec<Matrix>> {
        &self.projectives[i]
    }

    pub fn is_hinted(&self) -> bool {
        self.hinted
    }
}

/// Kernel of the trace form `(x, y) -> tr(L_{xy})`; valid in characteristic 0 or above the dimension.
fn trace_radical(a: &Algebra) -> Matrix {
    let f = a.field();
    let d = a.dim();
    let traces: Vec<Scalar> = a.left_mult().iter().map(Matrix::trace).collect();
    let t = Matrix::from_fn(f, d, d, |i, j| {
        let p = a.mul(&a.basis_vector(i), &a.basis_vector(j));
        p.iter().zip(&traces).fold(f.zero(), |mut acc, (c, tr)| {
            acc.add_mul(c, tr);
            acc
        })
    });
    t.kernel()
}

/// Newton-type iteration `x <- 3x^2 - 2x^3` towards an idempotent congruent to `x` mod the radical.
fn lift_idempotent(a: &Algebra, mut x: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let f = a.field();
    let (three, two) = (f.from_i64(3), f.from_i64(2));
    for _ in 0..64 {
        let x2 = a.mul(&x, &x);
        if x2 == x {
            return Ok(x);
        }
        let x3 = a.mul(&x2, &x);
        x = x2.iter().zip(&x3).map(|(p, q)| &three.mul_ref(p) - &two.mul_ref(q)).collect();
    }
    Err(Error::InvalidStructure("idempotent lifting did not converge".into()))
}

/// Hom space computed without consulting the algebra's cached structure.
pub(crate) fn plain_hom(src: &LeftModule, tgt: &LeftModule) -> Vec<Matrix> {
    let f = src.field();
    let (n, m) = (tgt.dim(), src.dim());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    let mut rows: Option<Matrix> = None;
    for &g in src.algebra().generators() {
        let c =
            &Matrix::identity(f, n).kron(&src.action()[g].transpose()) - &tgt.action()[g].kron(&Matrix::identity(f, m));
        rows = Some(match rows {
            None => c,
            Some(r) => r.vstack(&c),
        });
    }
    let ker = match rows {
        Some(r) => r.kernel(),
        None => Matrix::identity(f, n * m),
    };
    (0..ker.cols()).map(|k| Matrix::from_flat(f, n, m, &ker.column(k))).collect()
}

fn plain_isomorphic(a: &LeftModule, b: &LeftModule) -> bool {
    a.dim() == b.dim() && find_invertible(a.field(), &plain_hom(a, b)).is_some()
}

/// Splits a semisimple module (with its basis inside an ambient space) into simple summands.
fn decompose(m: &LeftModule, basis: Matrix) -> Result<Vec<Matrix>> {
    let f = m.field();
    let end = plain_hom(m, m);
    if end.len() <= 1 {
        return Ok(vec![basis]);
    }
    for phi in &end {
        let Some(lambda) = eigenvalue(phi)? else { continue };
        let psi = phi - &Matrix::identity(f, m.dim()).scale(&lambda);
        if psi.is_zero() {
            continue;
        }
        let u = psi.kernel();
        let p = projection_onto(&end, &u)?;
        let w = p.kernel();
        let (um, _) = m.submodule(&u)?;
        let (wm, _) = m.submodule(&w)?;
        let mut out = decompose(&um, &basis * &u)?;
        out.extend(decompose(&wm, &basis * &w)?);
        return Ok(out);
    }
    Err(Error::NonSplitSemisimple)
}

/// An endomorphism in the span of `end` restricting to the identity on `u` with image in `u`.
fn projection_onto(end: &[Matrix], u: &Matrix) -> Result<Matrix> {
    let f = u.field();
    let n = u.rows();
    let ann = u.transpose().kernel().transpose();
    let cols: Vec<Vec<Scalar>> = end
        .iter()
        .map(|phi| {
            let mut v = (phi * u).flatten();
            v.extend((&ann * phi).flatten());
            v
        })
        .collect();
    let lhs = Matrix::from_columns(f, n * u.cols() + ann.rows() * n, &cols);
    let mut rhs = u.flatten();
    rhs.extend(vec![f.zero(); ann.rows() * n]);
    let c = lhs
        .solve(&Matrix::column_vector(f, &rhs))?
        .ok_or_else(|| Error::InvalidStructure("module is not semisimple".into()))?;
    let mut p = Matrix::zeros(f, n, n);
    for (t, phi) in end.iter().enumerate() {
        let s = c.get(t, 0);
        if !s.is_zero() {
            p = &p + &phi.scale(s);
        }
    }
    Ok(p)
}

/// Minimal polynomial of a square matrix, low degree first and monic.
pub(crate) fn minimal_polynomial(m: &Matrix) -> Vec<Scalar> {
    let f = m.field();
    let n = m.rows();
    let mut powers = vec![Matrix::identity(f, n)];
    let mut e = Echelon::new(f, n * n);
    e.insert(&powers[0].flatten());
    loop {
        let next = &powers[powers.len() - 1] * m;
        if e.contains(&next.flatten()) {
            let basis = Matrix::from_columns(f, n * n, &powers.iter().map(Matrix::flatten).collect::<Vec<_>>());
            let c = basis
                .solve(&Matrix::column_vector(f, &next.flatten()))
                .expect("shapes agree")
                .expect("dependent power");
            let mut poly: Vec<Scalar> = (0..powers.len()).map(|i| c.get(i, 0).neg_ref()).collect();
            poly.push(f.one());
            return poly;
        }
        e.insert(&next.flatten());
        powers.push(next);
    }
}

/// Some eigenvalue of `m` lying in the base field.
fn eigenvalue(m: &Matrix) -> Result<Option<Scalar>> {
    let poly = minimal_polynomial(m);
    match m.field() {
        Field::Rationals => {
            let coeffs: Vec<_> = poly.iter().map(|s| s.as_rational().expect("rational").clone()).collect();
            let roots = rational_roots(&coeffs).ok_or(Error::NonSplitSemisimple)?;
            Ok(roots.into_iter().next().map(Scalar::Q))
        }
        f @ Field::Prime { p } => {
            if p > PRIME_SEARCH_LIMIT {
                return Err(Error::NonSplitSemisimple);
            }
            for v in 0..p {
                let x = f.from_i64(v as i64);
                let val = poly.iter().rev().fold(f.zero(), |acc, c| &acc.mul_ref(&x) + c);
                if val.is_zero() {
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
    }
}

/// Simple modules, one per isomorphism class.
pub fn simple_modules(a: &Arc<Algebra>) -> Result<Vec<LeftModule>> {
    let st = a.structure()?;
    (0..st.simple_count()).map(|i| simple_module(a, i)).collect()
}

pub fn simple_module(a: &Arc<Algebra>, i: usize) -> Result<LeftModule> {
    let st = a.structure()?;
    LeftModule::unchecked(a.clone(), st.simple_action(i).to_vec())
}

/// Indecomposable projective `A e_i`.
pub fn projective_module(a: &Arc<Algebra>, i: usize) -> Result<LeftModule> {
    let st = a.structure()?;
    LeftModule::unchecked(a.clone(), st.projective_action(i).to_vec())
}

/// Indecomposable injective `D(e_i A)`, the injective envelope of simple `i`.
pub fn injective_module(a: &Arc<Algebra>, i: usize) -> Result<LeftModule> {
    let op = a.opposite();
    let st = op.structure()?;
    // the injective envelope of S_i is D of the projective cover of D(S_i)
    let ds = simple_module(a, i)?.dual();
    let j = (0..st.simple_count())
        .find(|&j| !ds.act(&st.idempotents()[j]).is_zero())
        .ok_or_else(|| Error::InvalidStructure("dual simple has no idempotent".into()))?;
    Ok(projective_module(&op, j)?.dual())
}

/// Basis of the Jacobson radical.
pub fn radical(a: &Arc<Algebra>) -> Result<Matrix> {
    Ok(a.structure()?.radical().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quiver::Quiver;

    fn q() -> Field {
        Field::Rationals
    }

    fn product_kk(f: Field) -> Arc<Algebra> {
        let d = 2;
        let mut t = vec![f.zero(); 8];
        t[0] = f.one();
        t[(d + 1) * d + 1] = f.one();
        Algebra::from_structure_constants(f, 2, t, vec![f.one(), f.one()], None).unwrap()
    }

    fn matrix_algebra(f: Field) -> Arc<Algebra> {
        // M_2(k) on E11, E12, E21, E22
        let idx = |r: usize, c: usize| r * 2 + c;
        let mut t = vec![f.zero(); 64];
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for (c, d) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                if b == c {
                    t[(idx(a, b) * 4 + idx(c, d)) * 4 + idx(a, d)] = f.one();
                }
            }
        }
        let unit = vec![f.one(), f.zero(), f.zero(), f.one()];
        Algebra::from_structure_constants(f, 4, t, unit, None).unwrap()
    }

    #[test]
    fn semisimple_product_has_zero_radical() {
        let a = product_kk(q());
        assert_eq!(radical(&a).unwrap().cols(), 0);
        let s = simple_modules(&a).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|m| m.dim() == 1));
    }

    #[test]
    fn matrix_algebra_one_simple_of_dim_two() {
        let a = matrix_algebra(q());
        let s = simple_modules(&a).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dim(), 2);
        s[0].check().unwrap();
        let st = a.structure().unwrap();
        assert_eq!(st.complete_idempotents().len(), 2);
        assert_eq!(st.projective_basis(0).cols(), 2);
    }

    #[test]
    fn complex_numbers_over_rationals_are_not_split() {
        // Q[i] with i^2 = -1
        let f = q();
        let t = vec![f.one(), f.zero(), f.zero(), f.one(), f.zero(), f.one(), f.from_i64(-1), f.zero()];
        let a = Algebra::from_structure_constants(f, 2, t, vec![f.one(), f.zero()], None).unwrap();
        assert_eq!(a.structure().unwrap_err(), Error::NonSplitSemisimple);
    }

    #[test]
    fn small_characteristic_without_hint_refused() {
        let f = Field::prime(2).unwrap();
        let a = product_kk(f);
        assert!(matches!(a.structure(), Err(Error::UnsupportedCharacteristic { p: 2, dim: 2 })));
    }

    #[test]
    fn quiver_radical_and_simples() {
        let a = Quiver::parse_short(q(), &["1", "2"], &[("a", "1", "2")], &[], None).unwrap();
        let j = radical(&a).unwrap();
        assert_eq!(j.cols(), 1);
        assert_eq!(a.nilpotency_index(&j), Some(2));
        let s = simple_modules(&a).unwrap();
        assert_eq!(s.len(), 2);
        let total: usize = s.iter().map(|m| m.dim() * m.dim()).sum();
        assert_eq!(total, a.dim() - j.cols());
    }

    #[test]
    fn trace_form_matches_quiver_hint() {
        // strip the hint by rebuilding from structure constants
        let a = Quiver::parse_short(q(), &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[], None).unwrap();
        let plain =
            Algebra::from_structure_constants(a.field(), a.dim(), a.table().to_vec(), a.unit().to_vec(), None).unwrap();
        let j1 = radical(&a).unwrap();
        let j2 = radical(&plain).unwrap();
        assert_eq!(j1.hstack(&j2).rank(), j1.cols());
        assert_eq!(j2.cols(), 3);
        assert_eq!(simple_modules(&plain).unwrap().len(), 3);
        assert!(!plain.structure().unwrap().is_hinted());
    }

    #[test]
    fn minimal_polynomial_of_nilpotent() {
        let m = Matrix::from_i64_rows(q(), &[vec![0, 1], vec![0, 0]]);
        let p = minimal_polynomial(&m);
        assert_eq!(p, vec![q().zero(), q().zero(), q().one()]);
    }
}
