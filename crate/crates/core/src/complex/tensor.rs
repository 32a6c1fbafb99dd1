use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::module::complement_indices;
use crate::algebra::{Algebra, LeftModule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

use super::complex::{BddComplex, BimoduleComplex};
use super::GradedParts;

/// Right-hand input of a tensor product: per degree, the right action by every basis
/// element of `A`, an optional left action (for bimodules) and the differential.
struct RightSide<'a> {
    dims: BTreeMap<i32, usize>,
    right: BTreeMap<i32, &'a [Matrix]>,
    left: Option<BTreeMap<i32, &'a [Matrix]>>,
    diff: Box<dyn Fn(i32) -> Matrix + 'a>,
}

/// Quotient of `k^n` by the column span of `rel`: projection and a section.
fn quotient_maps(field: Field, rel: &Matrix, n: usize) -> (Matrix, Matrix) {
    let rel = rel.column_basis();
    let idx = complement_indices(&rel, n);
    let sec = Matrix::identity(field, n).select_columns(&idx);
    let inv = sec.hstack(&rel).inverse().expect("complement completes a basis");
    (inv.block(0, idx.len(), 0, n), sec)
}

struct Block {
    p: i32,
    q: i32,
    proj: Matrix,
    sec: Matrix,
    offset: usize,
}

/// `S ⊗_A T`, with `d(x⊗y) = dx⊗y + (-1)^p x⊗dy`. Returns terms, differentials
/// and per-degree left actions when the right side carries one.
fn tensor_impl(a: &Arc<Algebra>, s: &RightSide, t: &BddComplex) -> Result<GradedParts> {
    let field = a.field();
    let gens = a.generators();
    let mut by_degree: BTreeMap<i32, Vec<Block>> = BTreeMap::new();
    for (&p, &sd) in &s.dims {
        for (&q, tm) in t.terms() {
            let td = tm.dim();
            let n = sd * td;
            let mut rel = Matrix::zeros(field, n, 0);
            for &g in gens {
                let r = &s.right[&p][g].kron(&Matrix::identity(field, td))
                    - &Matrix::identity(field, sd).kron(&tm.action()[g]);
                rel = rel.hstack(&r);
            }
            let (proj, sec) = quotient_maps(field, &rel, n);
            if proj.rows() == 0 {
                continue;
            }
            by_degree.entry(p + q).or_default().push(Block { p, q, proj, sec, offset: 0 });
        }
    }
    let mut dims = BTreeMap::new();
    for (&n, blocks) in by_degree.iter_mut() {
        let mut off = 0;
        for b in blocks.iter_mut() {
            b.offset = off;
            off += b.proj.rows();
        }
        dims.insert(n, off);
    }
    let mut diffs = BTreeMap::new();
    for (&n, blocks) in &by_degree {
        let Some(targets) = by_degree.get(&(n + 1)) else { continue };
        let mut d = Matrix::zeros(field, dims[&(n + 1)], dims[&n]);
        for b in blocks {
            let (sd, td) = (s.dims[&b.p], t.term_dim(b.q));
            for tb in targets {
                let m = if tb.p == b.p + 1 && tb.q == b.q {
                    (s.diff)(b.p).kron(&Matrix::identity(field, td))
                } else if tb.p == b.p && tb.q == b.q + 1 {
                    Matrix::identity(field, sd).kron(&t.diff(b.q)).scale(&field.sign(b.p as i64))
                } else {
                    continue;
                };
                d.set_block(tb.offset, b.offset, &(&(&tb.proj * &m) * &b.sec));
            }
        }
        diffs.insert(n, d);
    }
    let mut actions = BTreeMap::new();
    if let Some(left) = &s.left {
        for (&n, blocks) in &by_degree {
            let mut acts = Vec::with_capacity(a.dim());
            #[allow(clippy::needless_range_loop)]
            for e in 0..a.dim() {
                let mut m = Matrix::zeros(field, dims[&n], dims[&n]);
                for b in blocks {
                    let td = t.term_dim(b.q);
                    let l = left[&b.p][e].kron(&Matrix::identity(field, td));
                    m.set_block(b.offset, b.offset, &(&(&b.proj * &l) * &b.sec));
                }
                acts.push(m);
            }
            actions.insert(n, acts);
        }
    }
    Ok((dims, diffs, actions))
}

fn check_right_over(s: &Arc<Algebra>, a: &Arc<Algebra>) -> Result<()> {
    if s.is_opposite_of(a) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

/// `S ⊗_A T` for a complex of right modules `S` (given over the opposite algebra)
/// and left modules `T`; the result is a complex of vector spaces.
pub fn tensor(s: &BddComplex, t: &BddComplex) -> Result<BddComplex> {
    let a = t.algebra();
    check_right_over(s.algebra(), a)?;
    let side = RightSide {
        dims: s.terms().iter().map(|(n, m)| (*n, m.dim())).collect(),
        right: s.terms().iter().map(|(n, m)| (*n, m.action())).collect(),
        left: None,
        diff: Box::new(|p| s.diff(p)),
    };
    let (dims, diffs, _) = tensor_impl(a, &side, t)?;
    let k = Algebra::ground(a.field());
    let terms = dims
        .into_iter()
        .map(|(n, d)| (n, LeftModule::unchecked(k.clone(), vec![Matrix::identity(a.field(), d)])))
        .map(|(n, m)| m.map(|m| (n, m)))
        .collect::<Result<_>>()?;
    BddComplex::unchecked(k, terms, diffs)
}

/// `X ⊗_A T` for a bimodule complex `X`; the result is a complex of left modules.
pub fn tensor_bimodule(x: &BimoduleComplex, t: &BddComplex) -> Result<BddComplex> {
    let a = t.algebra();
    if !crate::algebra::module::same_algebra(x.algebra(), a) {
        return Err(Error::AlgebraMismatch);
    }
    let side = RightSide {
        dims: x.terms().iter().map(|(n, b)| (*n, b.dim())).collect(),
        right: x.terms().iter().map(|(n, b)| (*n, b.right())).collect(),
        left: Some(x.terms().iter().map(|(n, b)| (*n, b.left())).collect()),
        diff: Box::new(|p| x.diff(p)),
    };
    let (dims, diffs, mut actions) = tensor_impl(a, &side, t)?;
    let mut terms = BTreeMap::new();
    for n in dims.keys() {
        terms.insert(*n, LeftModule::unchecked(a.clone(), actions.remove(n).expect("action per degree"))?);
    }
    BddComplex::unchecked(a.clone(), terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_module, Bimodule, Quiver};

    fn a2() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap()
    }

    #[test]
    fn regular_tensor_is_identity() {
        let a = a2();
        let m = BddComplex::module_in_degree(&simple_module(&a, 1).unwrap(), 0);
        let r = BimoduleComplex::bimodule_in_degree(&Bimodule::regular(&a), 0);
        let t = tensor_bimodule(&r, &m).unwrap();
        assert_eq!(t.term_dim(0), 1);
        t.check().unwrap();
        assert!(crate::algebra::is_isomorphic(&t.term(0), &m.term(0)).unwrap());
    }

    #[test]
    fn dual_tensor_simple() {
        // DA ⊗ S is D Hom(S, A): only the socle simple survives, twice
        let a = a2();
        let d = BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&a), 0);
        let mut dims: Vec<usize> = (0..2)
            .map(|i| {
                let si = BddComplex::module_in_degree(&simple_module(&a, i).unwrap(), 0);
                let t = tensor_bimodule(&d, &si).unwrap();
                assert_eq!(tensor(&d.res_right(), &si).unwrap().term_dim(0), t.term_dim(0));
                t.term_dim(0)
            })
            .collect();
        dims.sort();
        assert_eq!(dims, vec![0, 2]);
        let dn = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        let d = BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(&dn), 0);
        let k = BddComplex::module_in_degree(&simple_module(&dn, 0).unwrap(), 0);
        assert_eq!(tensor_bimodule(&d, &k).unwrap().term_dim(0), 1);
    }

    #[test]
    fn tensor_signs_give_complex() {
        let a = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        let reg = LeftModule::regular(&a);
        let x = a.right_mult()[1].clone();
        let c = BddComplex::new(a.clone(), [(-1, reg.clone()), (0, reg)].into(), [(-1, x)].into()).unwrap();
        let b = Bimodule::regular(&a);
        let bx =
            BimoduleComplex::new(a.clone(), [(-1, b.clone()), (0, b)].into(), [(-1, a.right_mult()[1].clone())].into())
                .unwrap();
        let t = tensor_bimodule(&bx, &c).unwrap();
        t.check().unwrap();
        assert_eq!((t.term_dim(-2), t.term_dim(-1), t.term_dim(0)), (2, 4, 2));
        // k ⊗ k with Koszul signs: cohomology 1, 2, 1
        assert_eq!((t.cohomology_dim(-2), t.cohomology_dim(-1), t.cohomology_dim(0)), (1, 2, 1));
    }
}
