use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::module::same_algebra;
use crate::algebra::{hom_space, Algebra, LeftModule};
use crate::error::{Error, Result};
use crate::linalg::{Coords, Matrix, Scalar};

use super::complex::{BddComplex, BimoduleComplex};
use super::GradedParts;

struct Block {
    p: i32,
    q: i32,
    basis: Vec<Matrix>,
    coords: Coords,
    offset: usize,
}

fn flat_basis(field: crate::linalg::Field, basis: &[Matrix], len: usize) -> Coords {
    let cols: Vec<_> = basis.iter().map(Matrix::flatten).collect();
    Coords::new(&Matrix::from_columns(field, len, &cols))
}

type Blocks = (BTreeMap<i32, Vec<Block>>, BTreeMap<i32, usize>);

fn blocks(s: &BddComplex, t: &BddComplex) -> Result<Blocks> {
    let field = t.field();
    let mut by_degree: BTreeMap<i32, Vec<Block>> = BTreeMap::new();
    for (&p, sm) in s.terms() {
        for (&q, tm) in t.terms() {
            let basis = hom_space(sm, tm)?;
            if basis.is_empty() {
                continue;
            }
            let coords = flat_basis(field, &basis, sm.dim() * tm.dim());
            by_degree.entry(q - p).or_default().push(Block { p, q, basis, coords, offset: 0 });
        }
    }
    let mut dims = BTreeMap::new();
    for (&n, blocks) in by_degree.iter_mut() {
        let mut off = 0;
        for b in blocks.iter_mut() {
            b.offset = off;
            off += b.basis.len();
        }
        dims.insert(n, off);
    }
    Ok((by_degree, dims))
}

/// Coordinates in `Hom_A(S, T)^n` (as built by [`hom_complex`] and [`hom_bimodule`]) of the
/// family of module maps `S^p -> T^{p+n}` given by `components[p]`; missing entries are zero.
pub fn hom_element(s: &BddComplex, t: &BddComplex, n: i32, components: &BTreeMap<i32, Matrix>) -> Result<Vec<Scalar>> {
    let (by_degree, dims) = blocks(s, t)?;
    let f = t.field();
    let mut v = vec![f.zero(); dims.get(&n).copied().unwrap_or(0)];
    let empty = Vec::new();
    let blocks = by_degree.get(&n).unwrap_or(&empty);
    for (&p, m) in components {
        if m.is_zero() {
            continue;
        }
        let b = blocks
            .iter()
            .find(|b| b.p == p)
            .ok_or_else(|| Error::InvalidStructure(format!("no module maps from degree {p} in degree {n}")))?;
        let c = b
            .coords
            .coords_checked(&m.flatten())
            .ok_or_else(|| Error::InvalidStructure(format!("component at degree {p} is not a module map")))?;
        for (i, x) in c.into_iter().enumerate() {
            v[b.offset + i] = x;
        }
    }
    Ok(v)
}

/// `Hom_A(S, T)` with `(df) = d_T f - (-1)^n f d_S` on degree `n` maps. When `right`
/// holds the right actions of `S`, the result carries `(a·f)(x) = f(x·a)`.
fn hom_impl(a: &Arc<Algebra>, s: &BddComplex, right: Option<&BimoduleComplex>, t: &BddComplex) -> Result<GradedParts> {
    let field = a.field();
    let (by_degree, dims) = blocks(s, t)?;
    let mut diffs = BTreeMap::new();
    for (&n, blocks) in &by_degree {
        let Some(targets) = by_degree.get(&(n + 1)) else { continue };
        let sign = field.sign(n as i64);
        let mut d = Matrix::zeros(field, dims[&(n + 1)], dims[&n]);
        for b in blocks {
            let dt = t.diff(b.q);
            let ds = s.diff(b.p - 1);
            for tb in targets {
                let img = |f: &Matrix| -> Option<Matrix> {
                    if tb.p == b.p && tb.q == b.q + 1 {
                        Some(&dt * f)
                    } else if tb.p == b.p - 1 && tb.q == b.q {
                        Some((f * &ds).scale(&sign.neg_ref()))
                    } else {
                        None
                    }
                };
                for (j, f) in b.basis.iter().enumerate() {
                    let Some(g) = img(f) else { continue };
                    let c = tb.coords.coords(&g.flatten());
                    for (i, v) in c.into_iter().enumerate() {
                        d.set(tb.offset + i, b.offset + j, v);
                    }
                }
            }
        }
        diffs.insert(n, d);
    }
    let mut actions = BTreeMap::new();
    if let Some(x) = right {
        for (&n, blocks) in &by_degree {
            let mut acts = Vec::with_capacity(a.dim());
            for e in 0..a.dim() {
                let mut m = Matrix::zeros(field, dims[&n], dims[&n]);
                for b in blocks {
                    let term = x.term(b.p);
                    let r = &term.right()[e];
                    for (j, f) in b.basis.iter().enumerate() {
                        let c = b.coords.coords(&(f * r).flatten());
                        for (i, v) in c.into_iter().enumerate() {
                            m.set(b.offset + i, b.offset + j, v);
                        }
                    }
                }
                acts.push(m);
            }
            actions.insert(n, acts);
        }
    }
    Ok((dims, diffs, actions))
}

/// `Hom_A(S, T)` as a complex of vector spaces.
pub fn hom_complex(s: &BddComplex, t: &BddComplex) -> Result<BddComplex> {
    if !same_algebra(s.algebra(), t.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let (dims, diffs, _) = hom_impl(t.algebra(), s, None, t)?;
    let field = t.field();
    let k = Algebra::ground(field);
    let mut terms = BTreeMap::new();
    for (n, d) in dims {
        terms.insert(n, LeftModule::unchecked(k.clone(), vec![Matrix::identity(field, d)])?);
    }
    BddComplex::unchecked(k, terms, diffs)
}

/// `Hom_A(X, T)` for a bimodule complex `X`, a complex of left modules via the right action of `X`.
pub fn hom_bimodule(x: &BimoduleComplex, t: &BddComplex) -> Result<BddComplex> {
    let a = t.algebra();
    if !same_algebra(x.algebra(), a) {
        return Err(Error::AlgebraMismatch);
    }
    let (dims, diffs, mut actions) = hom_impl(a, &x.res_left(), Some(x), t)?;
    let mut terms = BTreeMap::new();
    for n in dims.keys() {
        terms.insert(*n, LeftModule::unchecked(a.clone(), actions.remove(n).expect("action per degree"))?);
    }
    BddComplex::unchecked(a.clone(), terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_isomorphic, projective_module, simple_module, Bimodule, Quiver};
    use crate::linalg::Field;

    fn a2() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap()
    }

    #[test]
    fn hom_of_dual_into_itself() {
        let a = a2();
        let d = BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&a), 0);
        let h = hom_complex(&d.res_left(), &d.res_left()).unwrap();
        // End_A(DA) is A^op
        assert_eq!(h.term_dim(0), 3);
        let hb = hom_bimodule(&d, &d.res_left()).unwrap();
        hb.check().unwrap();
        assert!(is_isomorphic(&hb.term(0), &LeftModule::regular(&a)).unwrap());
    }

    #[test]
    fn hom_from_regular_is_target() {
        let a = a2();
        let r = BimoduleComplex::bimodule_in_degree(&Bimodule::regular(&a), 0);
        for i in 0..2 {
            let s = simple_module(&a, i).unwrap();
            let h = hom_bimodule(&r, &BddComplex::module_in_degree(&s, 0)).unwrap();
            assert!(is_isomorphic(&h.term(0), &s).unwrap());
        }
    }

    #[test]
    fn hom_complex_cohomology() {
        // resolution P_j -> P_i of the simple S_i, tested against S_j: Ext^1 = 1
        let a = a2();
        let p = [projective_module(&a, 0).unwrap(), projective_module(&a, 1).unwrap()];
        let (i, j) = if p[0].dim() == 2 { (0, 1) } else { (1, 0) };
        let maps = hom_space(&p[j], &p[i]).unwrap();
        assert_eq!(maps.len(), 1);
        let c =
            BddComplex::new(a.clone(), [(-1, p[j].clone()), (0, p[i].clone())].into(), [(-1, maps[0].clone())].into())
                .unwrap();
        assert_eq!(c.cohomology_dim(-1), 0);
        assert!(is_isomorphic(&c.cohomology(0).unwrap(), &simple_module(&a, i).unwrap()).unwrap());
        let sj = BddComplex::module_in_degree(&simple_module(&a, j).unwrap(), 0);
        let h = hom_complex(&c, &sj).unwrap();
        h.check().unwrap();
        assert_eq!((h.cohomology_dim(0), h.cohomology_dim(1)), (0, 1));
    }
}
