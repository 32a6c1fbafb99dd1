//! `Ext` and `Tor` read off a projective resolution, with explicit certified windows.
//!
//! A generator `g` of kind `i` in `P^p` contributes `e_i N^q` to `Hom(P, N)^{q-p}` and
//! `S^q e_i` to `(S ⊗ P)^{q+p}`, so only the idempotent pieces are ever materialized.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{Coords, Matrix};

use super::complex::BddComplex;
use super::resolution::ProjectiveResolution;

struct Piece {
    basis: Matrix,
    coords: Option<Coords>,
}

impl Piece {
    fn new(basis: Matrix) -> Self {
        let coords = (basis.cols() > 0).then(|| Coords::new(&basis));
        Piece { basis, coords }
    }

    fn dim(&self) -> usize {
        self.basis.cols()
    }

    fn coords_of(&self, m: &Matrix) -> Matrix {
        match &self.coords {
            Some(c) => c.coords_matrix(m),
            None => Matrix::zeros(m.field(), 0, m.cols()),
        }
    }
}

/// Cache of `e_kind X^q` (or `X^q e_kind`) bases for a complex `X`.
struct Pieces<'a> {
    x: &'a BddComplex,
    idempotents: Vec<Vec<crate::linalg::Scalar>>,
    cache: HashMap<(i32, usize), Piece>,
}

impl<'a> Pieces<'a> {
    fn new(res: &ProjectiveResolution, x: &'a BddComplex) -> Result<Self> {
        let st = res.algebra().structure()?;
        Ok(Pieces { x, idempotents: st.idempotents().to_vec(), cache: HashMap::new() })
    }

    fn get(&mut self, q: i32, kind: usize) -> &Piece {
        let x = self.x;
        let e = &self.idempotents[kind];
        self.cache.entry((q, kind)).or_insert_with(|| Piece::new(x.term(q).image_of(e)))
    }
}

struct Layout {
    /// (degree of the generator, index in that degree, degree in the second argument, offset)
    blocks: Vec<(i32, usize, i32, usize)>,
    index: HashMap<(i32, usize), usize>,
    dim: usize,
}

fn layout(res: &ProjectiveResolution, x: &BddComplex, pieces: &mut Pieces, total: i32, hom: bool) -> Layout {
    let mut blocks = Vec::new();
    let mut index = HashMap::new();
    let mut off = 0;
    for &q in x.terms().keys() {
        let p = if hom { q - total } else { total - q };
        for (j, g) in res.generators(p).iter().enumerate() {
            let d = pieces.get(q, g.kind).dim();
            if d == 0 {
                continue;
            }
            index.insert((p, j), blocks.len());
            blocks.push((p, j, q, off));
            off += d;
        }
    }
    Layout { blocks, index, dim: off }
}

/// Differential `Hom(P, N)^k -> Hom(P, N)^{k+1}`.
fn hom_diff(
    res: &ProjectiveResolution,
    n: &BddComplex,
    pieces: &mut Pieces,
    k: i32,
    src: &Layout,
    tgt: &Layout,
) -> Matrix {
    let f = n.field();
    let mut d = Matrix::zeros(f, tgt.dim, src.dim);
    let sign = f.sign(k as i64).neg_ref();
    for &(p, j, q, off) in &src.blocks {
        let kind = res.generators(p)[j].kind;
        let e = pieces.get(q, kind).basis.clone();
        // d_N ∘ f
        if let Some(&b) = tgt.index.get(&(p, j)) {
            let (_, _, q1, off1) = tgt.blocks[b];
            debug_assert_eq!(q1, q + 1);
            let img = &n.diff(q) * &e;
            d.set_block(off1, off, &pieces.get(q + 1, kind).coords_of(&img));
        }
        // -(-1)^k f ∘ d_P, through generators of degree p-1 whose boundary hits g_j
        for (i, g) in res.generators(p - 1).iter().enumerate() {
            let Some(&b) = tgt.index.get(&(p - 1, i)) else { continue };
            let a = res.coefficient(p - 1, g, j);
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let off1 = tgt.blocks[b].3;
            let img = (&n.term(q).act(&a) * &e).scale(&sign);
            d.set_block(off1, off, &pieces.get(q, g.kind).coords_of(&img));
        }
    }
    d
}

/// Differential `(S ⊗ P)^m -> (S ⊗ P)^{m+1}`.
fn tensor_diff(res: &ProjectiveResolution, s: &BddComplex, pieces: &mut Pieces, src: &Layout, tgt: &Layout) -> Matrix {
    let f = s.field();
    let mut d = Matrix::zeros(f, tgt.dim, src.dim);
    for &(p, j, q, off) in &src.blocks {
        let g = &res.generators(p)[j];
        let basis = pieces.get(q, g.kind).basis.clone();
        // d_S x ⊗ g
        if let Some(b) = tgt.blocks.iter().find(|b| b.0 == p && b.1 == j && b.2 == q + 1) {
            let img = &s.diff(q) * &basis;
            d.set_block(b.3, off, &pieces.get(q + 1, g.kind).coords_of(&img));
        }
        // (-1)^q x·a ⊗ h for d(g) = Σ a h
        let sign = f.sign(q as i64);
        for (h, a) in res.boundary_terms(p, g) {
            let Some(&b) = tgt.index.get(&(p + 1, h)) else { continue };
            let kind = res.generators(p + 1)[h].kind;
            let img = (&s.term(q).act(&a) * &basis).scale(&sign);
            d.set_block(tgt.blocks[b].3, off, &pieces.get(q, kind).coords_of(&img));
        }
    }
    d
}

/// Largest `i` for which `Ext^i(C, N)` is determined by `res`; `None` when unbounded.
pub fn ext_window(res: &ProjectiveResolution, n: &BddComplex) -> Option<i32> {
    if res.is_terminated() {
        return None;
    }
    Some(match n.span() {
        Some((lo, _)) => lo - 1 - res.floor(),
        None => i32::MAX,
    })
}

/// Largest `i` for which `Tor_i(S, C)` is determined by `res`; `None` when unbounded.
pub fn tor_window(res: &ProjectiveResolution, s: &BddComplex) -> Option<i32> {
    if res.is_terminated() {
        return None;
    }
    Some(match s.span() {
        Some((_, hi)) => -1 - res.floor() - hi,
        None => i32::MAX,
    })
}

/// `dim Ext^i(C, N)` where `res` resolves `C`.
pub fn ext_from(res: &ProjectiveResolution, n: &BddComplex, i: i32) -> Result<usize> {
    if !crate::algebra::module::same_algebra(res.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if let Some(w) = ext_window(res, n) {
        if i > w {
            return Err(Error::WindowTooSmall { degree: i as i64, cutoff: res.cutoff() });
        }
    }
    let mut pieces = Pieces::new(res, n)?;
    let prev = layout(res, n, &mut pieces, i - 1, true);
    let here = layout(res, n, &mut pieces, i, true);
    if here.dim == 0 {
        return Ok(0);
    }
    let next = layout(res, n, &mut pieces, i + 1, true);
    let d_in = hom_diff(res, n, &mut pieces, i - 1, &prev, &here);
    let d_out = hom_diff(res, n, &mut pieces, i, &here, &next);
    Ok(here.dim - d_in.rank() - d_out.rank())
}

/// `dim Tor_i(S, C) = dim H^{-i}(S ⊗ P)` where `res` resolves `C` and `S` is a complex of
/// right modules (over the opposite algebra).
pub fn tor_from(s: &BddComplex, res: &ProjectiveResolution, i: i32) -> Result<usize> {
    if !s.algebra().is_opposite_of(res.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if let Some(w) = tor_window(res, s) {
        if i > w {
            return Err(Error::WindowTooSmall { degree: i as i64, cutoff: res.cutoff() });
        }
    }
    let mut pieces = Pieces::new(res, s)?;
    let m = -i;
    let prev = layout(res, s, &mut pieces, m - 1, false);
    let here = layout(res, s, &mut pieces, m, false);
    if here.dim == 0 {
        return Ok(0);
    }
    let next = layout(res, s, &mut pieces, m + 1, false);
    let d_in = tensor_diff(res, s, &mut pieces, &prev, &here);
    let d_out = tensor_diff(res, s, &mut pieces, &here, &next);
    Ok(here.dim - d_in.rank() - d_out.rank())
}

pub fn ext(m: &BddComplex, n: &BddComplex, i: i32, cutoff: usize) -> Result<usize> {
    ext_from(&ProjectiveResolution::compute(m, cutoff)?, n, i)
}

pub fn tor(s: &BddComplex, n: &BddComplex, i: i32, cutoff: usize) -> Result<usize> {
    tor_from(s, &ProjectiveResolution::compute(n, cutoff)?, i)
}
