use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::module::same_algebra;
use crate::algebra::{simple_modules, Algebra, Bimodule, LeftModule};
use crate::complex::{ext, hom_complex, hom_element, BddComplex, BimoduleComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `DA = Hom_K(A, K)` placed in degree `shift_to`.
pub fn build_da_dualizing(a: &Arc<Algebra>, shift_to: i32) -> BimoduleComplex {
    BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(a), shift_to)
}

/// Outcome of the three dualizing-complex axioms, checked on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualizingCertificate {
    pub left_inj: bool,
    pub right_inj: bool,
    pub left_fg: bool,
    pub right_fg: bool,
    pub left_homothety_qiso: bool,
    pub right_homothety_qiso: bool,
    pub window: usize,
}

impl DualizingCertificate {
    pub fn is_valid(&self) -> bool {
        self.left_inj
            && self.right_inj
            && self.left_fg
            && self.right_fg
            && self.left_homothety_qiso
            && self.right_homothety_qiso
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.is_valid(),
            "checks": {
                "left_inj": self.left_inj,
                "right_inj": self.right_inj,
                "left_fg": self.left_fg,
                "right_fg": self.right_fg,
                "left_homothety_qiso": self.left_homothety_qiso,
                "right_homothety_qiso": self.right_homothety_qiso,
            },
            "window": self.window,
        })
    }
}

/// Every term is injective: `Ext^1(S, X^n) = 0` for all simple `S`.
fn terms_injective(c: &BddComplex, cutoff: usize) -> Result<bool> {
    let simples = simple_modules(c.algebra())?;
    for m in c.terms().values() {
        let t = BddComplex::module_in_degree(m, 0);
        for s in &simples {
            if ext(&BddComplex::module_in_degree(s, 0), &t, 1, cutoff)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The map `A -> Hom(X, X)` sending `a` to the componentwise action `act(p, a)` on `X^p`.
fn homothety(a: &Arc<Algebra>, x: &BddComplex, act: impl Fn(i32, usize) -> Matrix) -> Result<bool> {
    let hom = hom_complex(x, x)?;
    let k = hom.algebra().clone();
    let f = a.field();
    let src_term = LeftModule::unchecked(k.clone(), vec![Matrix::identity(f, a.dim())])?;
    let src = BddComplex::unchecked(k, [(0, src_term)].into(), BTreeMap::new())?;
    let mut cols = Vec::with_capacity(a.dim());
    for e in 0..a.dim() {
        let comps: BTreeMap<i32, Matrix> = x.terms().keys().map(|&p| (p, act(p, e))).collect();
        cols.push(hom_element(x, x, 0, &comps)?);
    }
    let m = Matrix::from_columns(f, hom.term_dim(0), &cols);
    let map = ChainMap::new(src, hom, [(0, m)].into())?;
    Ok(map.is_quasi_iso())
}

/// Checks that `r` is a dualizing complex over `a`.
pub fn is_dualizing(a: &Arc<Algebra>, r: &BimoduleComplex, cutoff: usize) -> Result<DualizingCertificate> {
    if !same_algebra(a, r.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let left = r.res_left();
    let right = r.res_right();
    let left_inj = terms_injective(&left, cutoff)?;
    let right_inj = terms_injective(&right, cutoff)?;
    // r · a is a left-module endomorphism of r, and a · r a right-module one
    let left_homothety_qiso = homothety(a, &left, |p, e| r.term(p).right()[e].clone())?;
    let right_homothety_qiso = homothety(a, &right, |p, e| r.term(p).left()[e].clone())?;
    // finite-dimensional cohomology is always finitely generated here
    Ok(DualizingCertificate {
        left_inj,
        right_inj,
        left_fg: true,
        right_fg: true,
        left_homothety_qiso,
        right_homothety_qiso,
        window: cutoff,
    })
}
