use crate::error::{Error, Result};
use crate::linalg::{Coords, Matrix, Scalar};

use super::module::DGModule;
use super::ring::same_ring;
use super::semifree::SemiFreeResolution;

/// Per generator, a basis of `ε N^{n_g + i}` (or `N^{m - n_g} ε` for tensors).
struct Piece {
    gen: usize,
    rows: Vec<usize>,
    coords: Coords,
}

struct Layout {
    pieces: Vec<Piece>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Layout {
    fn build(res: &SemiFreeResolution, n: &DGModule, degree_of: impl Fn(i32) -> i32) -> Layout {
        let free = res.free();
        let mut pieces = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for (g, gen) in free.generators().iter().enumerate() {
            let rows = n.degree_indices(degree_of(gen.degree));
            if rows.is_empty() {
                continue;
            }
            let eps = n.act(&free.idempotent(gen.kind)).select_rows(&rows).select_columns(&rows);
            let basis = eps.column_basis();
            if basis.cols() == 0 {
                continue;
            }
            offsets.push(dim);
            dim += basis.cols();
            pieces.push(Piece { gen: g, rows, coords: Coords::new(&basis) });
        }
        Layout { pieces, offsets, dim }
    }

    fn vector(&self, k: usize, c: usize, total: usize) -> Vec<Scalar> {
        let p = &self.pieces[k];
        let f = p.coords.basis().field();
        let mut v = vec![f.zero(); total];
        for (r, &i) in p.rows.iter().enumerate() {
            v[i] = p.coords.basis().get(r, c).clone();
        }
        v
    }

    fn place(&self, d: &mut Matrix, k: usize, col: usize, v: &[Scalar]) {
        let p = &self.pieces[k];
        let local: Vec<Scalar> = p.rows.iter().map(|&i| v[i].clone()).collect();
        for (r, x) in p.coords.coords(&local).into_iter().enumerate() {
            let cur = d.get(self.offsets[k] + r, col).add_ref(&x);
            d.set(self.offsets[k] + r, col, cur);
        }
    }
}

/// `Hom_B(F, N)^i -> Hom_B(F, N)^{i+1}`, with
/// `(df)(g) = d_N f(g) - (-1)^i Σ (-1)^{i|b|} b f(h)` over `d g = Σ b h`.
fn hom_diff(res: &SemiFreeResolution, n: &DGModule, i: i32, src: &Layout, tgt: &Layout) -> Matrix {
    let f = n.field();
    let free = res.free();
    let ring = res.ring();
    let mut d = Matrix::zeros(f, tgt.dim, src.dim);
    for (k, p) in src.pieces.iter().enumerate() {
        for c in 0..p.coords.dim() {
            let y = src.vector(k, c, n.dim());
            let col = src.offsets[k] + c;
            for (t, q) in tgt.pieces.iter().enumerate() {
                if q.gen == p.gen {
                    tgt.place(&mut d, t, col, &n.diff().apply(&y));
                } else if q.gen > p.gen {
                    let b = free.coefficient(q.gen, p.gen);
                    if b.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let deg = ring.degree_of_element(&b).unwrap_or(0);
                    let sign = f.sign(i as i64 + 1 + (i * deg) as i64);
                    let img: Vec<Scalar> = n.act(&b).apply(&y).iter().map(|x| x.mul_ref(&sign)).collect();
                    tgt.place(&mut d, t, col, &img);
                }
            }
        }
    }
    d
}

/// `(S ⊗_B F)^m -> (S ⊗_B F)^{m+1}`, with `d(s⊗g) = ds⊗g + (-1)^{|s|} Σ s·b ⊗ h`
/// and `s·b = (-1)^{|s||b|} b∘s` for `S` over the opposite ring.
fn tensor_diff(s: &DGModule, res: &SemiFreeResolution, m: i32, src: &Layout, tgt: &Layout) -> Matrix {
    let f = s.field();
    let free = res.free();
    let ring = res.ring();
    let mut d = Matrix::zeros(f, tgt.dim, src.dim);
    for (k, p) in src.pieces.iter().enumerate() {
        let sdeg = m - free.generators()[p.gen].degree;
        for c in 0..p.coords.dim() {
            let x = src.vector(k, c, s.dim());
            let col = src.offsets[k] + c;
            for (t, q) in tgt.pieces.iter().enumerate() {
                if q.gen == p.gen {
                    tgt.place(&mut d, t, col, &s.diff().apply(&x));
                } else if q.gen < p.gen {
                    let b = free.coefficient(p.gen, q.gen);
                    if b.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let deg = ring.degree_of_element(&b).unwrap_or(0);
                    let sign = f.sign((sdeg + sdeg * deg) as i64);
                    let img: Vec<Scalar> = s.act(&b).apply(&x).iter().map(|v| v.mul_ref(&sign)).collect();
                    tgt.place(&mut d, t, col, &img);
                }
            }
        }
    }
    d
}

/// Largest `i` with `Ext^i(X, N)` certified by the resolution, `None` when unbounded.
pub fn dg_ext_window(res: &SemiFreeResolution, n: &DGModule) -> Option<i32> {
    if res.is_terminated() {
        return None;
    }
    let lo = n.span().map_or(0, |(lo, _)| lo);
    Some(lo - 1 - res.floor())
}

/// Largest `i` with `Tor_i(S, X)` certified by the resolution, `None` when unbounded.
pub fn dg_tor_window(res: &SemiFreeResolution, s: &DGModule) -> Option<i32> {
    if res.is_terminated() {
        return None;
    }
    let hi = s.span().map_or(0, |(_, hi)| hi);
    Some(-1 - res.floor() - hi)
}

fn window_error(i: i32, res: &SemiFreeResolution) -> Error {
    Error::WindowTooSmall { degree: i as i64, cutoff: res.cutoff() }
}

/// `dim Ext^i_B(X, N)` from a semi-free resolution of `X`.
pub fn dg_ext_from(res: &SemiFreeResolution, n: &DGModule, i: i32) -> Result<usize> {
    if !same_ring(res.ring(), n.ring()) {
        return Err(Error::AlgebraMismatch);
    }
    if dg_ext_window(res, n).is_some_and(|w| i > w) {
        return Err(window_error(i, res));
    }
    let layouts: Vec<Layout> = (i - 1..=i + 1).map(|j| Layout::build(res, n, |g| g + j)).collect();
    let d0 = hom_diff(res, n, i - 1, &layouts[0], &layouts[1]);
    let d1 = hom_diff(res, n, i, &layouts[1], &layouts[2]);
    Ok(layouts[1].dim - d0.rank() - d1.rank())
}

/// `dim Tor_i^B(S, X) = dim H^{-i}(S ⊗_B F)` for a right module `S` given over the opposite ring.
pub fn dg_tor_from(s: &DGModule, res: &SemiFreeResolution, i: i32) -> Result<usize> {
    if !s.ring().is_opposite_of(res.ring()) {
        return Err(Error::AlgebraMismatch);
    }
    if dg_tor_window(res, s).is_some_and(|w| i > w) {
        return Err(window_error(i, res));
    }
    let m = -i;
    let layouts: Vec<Layout> = (m - 1..=m + 1).map(|j| Layout::build(res, s, |g| j - g)).collect();
    let d0 = tensor_diff(s, res, m - 1, &layouts[0], &layouts[1]);
    let d1 = tensor_diff(s, res, m, &layouts[1], &layouts[2]);
    Ok(layouts[1].dim - d0.rank() - d1.rank())
}

pub fn dg_ext(m: &DGModule, n: &DGModule, i: i32, cutoff: usize) -> Result<usize> {
    dg_ext_from(&SemiFreeResolution::compute(m, cutoff)?, n, i)
}

pub fn dg_tor(s: &DGModule, n: &DGModule, i: i32, cutoff: usize) -> Result<usize> {
    dg_tor_from(s, &SemiFreeResolution::compute(n, cutoff)?, i)
}
