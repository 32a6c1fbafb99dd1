use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{hom_space, Algebra, LeftModule};
use crate::complex::BimoduleComplex;
use crate::dg::{DGModule, DGModuleMap, DGRing};
use crate::error::{Error, Result};
use crate::linalg::{Coords, Field, Matrix, Scalar};

/// A summand of `B = A ⊕ R` as a left `A`-module: `A` itself or `R^p`.
#[derive(Clone, Debug)]
struct Piece {
    /// `None` for `A`, `Some(p)` for `R^p`.
    part: Option<i32>,
    degree: i32,
    idx: Vec<usize>,
}

/// Module maps from one piece of `B` to `R^q`.
struct Block {
    piece: usize,
    q: i32,
    basis: Vec<Matrix>,
    coords: Coords,
    offset: usize,
}

/// `N = Hom_A(B, R)` with `(b·n)(c) = (-1)^{|b|(|n|+|c|)} n(c·b)`, the element `ε[a; r] = r`
/// and `Ψ(b) = b·ε`.
pub struct EpsilonPsi {
    ring: Arc<DGRing>,
    algebra: Arc<Algebra>,
    r: BimoduleComplex,
    pieces: Vec<Piece>,
    blocks: Vec<Block>,
    /// Offset of `R^q` in the total coordinates of `R`.
    r_offsets: Vec<(i32, usize)>,
    n: DGModule,
    epsilon: Vec<Scalar>,
    psi: DGModuleMap,
}

fn r_offset(offsets: &[(i32, usize)], q: i32) -> usize {
    offsets.iter().find(|(p, _)| *p == q).map_or(0, |(_, o)| *o)
}

fn find_block(blocks: &[Block], piece: usize, q: i32) -> Option<&Block> {
    blocks.iter().find(|b| b.piece == piece && b.q == q)
}

fn add_into(col: &mut [Scalar], block: &Block, m: &Matrix, scale: &Scalar) -> Result<()> {
    let c = block
        .coords
        .coords_checked(&m.flatten())
        .ok_or_else(|| Error::InvalidStructure("map leaves the A-linear maps".into()))?;
    for (i, x) in c.into_iter().enumerate() {
        let k = block.offset + i;
        col[k] = col[k].add_ref(&x.mul_ref(scale));
    }
    Ok(())
}

/// Builds `N`, `ε` and `Ψ: B -> N` for a trivial extension `B = A ⋉ R`.
pub fn build_epsilon_psi(b: &Arc<DGRing>) -> Result<EpsilonPsi> {
    let (a, r) = b.extension().cloned().ok_or(Error::NotTrivialExtension)?;
    let f = b.field();
    let d = a.dim();
    let a_off = b.algebra_offset();
    let mut pieces = vec![Piece { part: None, degree: 0, idx: (a_off..a_off + d).collect() }];
    let mut r_offsets = Vec::new();
    let mut total = 0;
    for p in b.lo()..=0 {
        let t = r.term(p).dim();
        r_offsets.push((p, total));
        total += t;
        if t == 0 {
            continue;
        }
        let idx: Vec<usize> = if p == 0 { (a_off + d..a_off + d + t).collect() } else { b.degree_indices(p) };
        pieces.push(Piece { part: Some(p), degree: p, idx });
    }
    let modules: Vec<LeftModule> = pieces
        .iter()
        .map(|pc| match pc.part {
            None => LeftModule::regular(&a),
            Some(p) => r.term(p).res_left(),
        })
        .collect();
    let mut blocks = Vec::new();
    let mut degrees = Vec::new();
    let mut offset = 0;
    for (k, pc) in pieces.iter().enumerate() {
        for (&q, t) in r.terms() {
            let basis = hom_space(&modules[k], &t.res_left())?;
            if basis.is_empty() {
                continue;
            }
            let cols: Vec<Vec<Scalar>> = basis.iter().map(Matrix::flatten).collect();
            let coords = Coords::new(&Matrix::from_columns(f, t.dim() * pc.idx.len(), &cols));
            degrees.extend(std::iter::repeat_n(q - pc.degree, basis.len()));
            let len = basis.len();
            blocks.push(Block { piece: k, q, basis, coords, offset });
            offset += len;
        }
    }
    let dim = offset;
    let zero_col = || vec![f.zero(); dim];
    // action of each ring basis element
    let mut action = Vec::with_capacity(b.dim());
    for e in 0..b.dim() {
        let deg_b = b.degree_of(e);
        let rb = b.right_by(&b.basis_vector(e));
        let mut cols = Vec::with_capacity(dim);
        for blk in &blocks {
            let s0 = &pieces[blk.piece];
            let deg_n = blk.q - s0.degree;
            for fm in &blk.basis {
                let mut col = zero_col();
                for (s, pc) in pieces.iter().enumerate() {
                    if pc.degree + deg_b != s0.degree {
                        continue;
                    }
                    let g = fm * &rb.select_rows(&s0.idx).select_columns(&pc.idx);
                    if g.is_zero() {
                        continue;
                    }
                    let target = find_block(&blocks, s, blk.q)
                        .ok_or_else(|| Error::InvalidStructure("action leaves Hom_A(B, R)".into()))?;
                    add_into(&mut col, target, &g, &f.sign((deg_b * (deg_n + pc.degree)) as i64))?;
                }
                cols.push(col);
            }
        }
        action.push(Matrix::from_columns(f, dim, &cols));
    }
    // (dn) = d_R n - (-1)^{|n|} n d_B
    let mut cols = Vec::with_capacity(dim);
    for blk in &blocks {
        let s0 = &pieces[blk.piece];
        let deg_n = blk.q - s0.degree;
        for fm in &blk.basis {
            let mut col = zero_col();
            let dr = r.diff(blk.q);
            if dr.rows() > 0 && !dr.is_zero() {
                let g = &dr * fm;
                if !g.is_zero() {
                    let target = find_block(&blocks, blk.piece, blk.q + 1)
                        .ok_or_else(|| Error::InvalidStructure("differential leaves Hom_A(B, R)".into()))?;
                    add_into(&mut col, target, &g, &f.one())?;
                }
            }
            for (s, pc) in pieces.iter().enumerate() {
                if pc.degree + 1 != s0.degree {
                    continue;
                }
                let g = fm * &b.diff().select_rows(&s0.idx).select_columns(&pc.idx);
                if g.is_zero() {
                    continue;
                }
                let target = find_block(&blocks, s, blk.q)
                    .ok_or_else(|| Error::InvalidStructure("differential leaves Hom_A(B, R)".into()))?;
                add_into(&mut col, target, &g, &f.sign(deg_n as i64 + 1))?;
            }
            cols.push(col);
        }
    }
    let diff = Matrix::from_columns(f, dim, &cols);
    let n = DGModule::new(b.clone(), degrees, action, diff)?;
    // ε restricts to the identity on each R^p and vanishes on A
    let mut epsilon = zero_col();
    for (k, pc) in pieces.iter().enumerate() {
        if let Some(p) = pc.part {
            let blk =
                find_block(&blocks, k, p).ok_or_else(|| Error::InvalidStructure("identity of R^p missing".into()))?;
            add_into(&mut epsilon, blk, &Matrix::identity(f, pc.idx.len()), &f.one())?;
        }
    }
    let psi_cols: Vec<Vec<Scalar>> = (0..b.dim()).map(|e| n.action()[e].apply(&epsilon)).collect();
    let psi = DGModuleMap::new(DGModule::regular(b), n.clone(), Matrix::from_columns(f, dim, &psi_cols))?;
    Ok(EpsilonPsi { ring: b.clone(), algebra: a, r, pieces, blocks, r_offsets, n, epsilon, psi })
}

/// Whether `f` restricted to the given index sets induces an isomorphism on cohomology.
fn induces_iso(f: Field, src: (&[i32], &Matrix, &[usize]), tgt: (&[i32], &Matrix, &[usize]), map: &Matrix) -> bool {
    let at =
        |degs: &[i32], set: &[usize], n: i32| -> Vec<usize> { set.iter().copied().filter(|&i| degs[i] == n).collect() };
    let block = |m: &Matrix, rows: &[usize], cols: &[usize]| -> Matrix {
        if rows.is_empty() || cols.is_empty() {
            Matrix::zeros(f, rows.len(), cols.len())
        } else {
            m.select_rows(rows).select_columns(cols)
        }
    };
    let degs: BTreeSet<i32> = src.2.iter().map(|&i| src.0[i]).chain(tgt.2.iter().map(|&i| tgt.0[i])).collect();
    degs.into_iter().all(|n| {
        let (s_n, s_next, s_prev) = (at(src.0, src.2, n), at(src.0, src.2, n + 1), at(src.0, src.2, n - 1));
        let (t_n, t_next, t_prev) = (at(tgt.0, tgt.2, n), at(tgt.0, tgt.2, n + 1), at(tgt.0, tgt.2, n - 1));
        let zs = if s_n.is_empty() { Matrix::zeros(f, 0, 0) } else { block(src.1, &s_next, &s_n).kernel() };
        let bs = block(src.1, &s_n, &s_prev).rank();
        let zt = if t_n.is_empty() { 0 } else { block(tgt.1, &t_next, &t_n).kernel().cols() };
        let bt_m = block(tgt.1, &t_n, &t_prev);
        let bt = bt_m.rank();
        let hs = zs.cols() - bs;
        let ht = zt - bt;
        if hs != ht {
            return false;
        }
        if hs == 0 {
            return true;
        }
        let img = &block(map, &t_n, &s_n) * &zs;
        img.hstack(&bt_m).rank() - bt == hs
    })
}

impl EpsilonPsi {
    pub fn module(&self) -> &DGModule {
        &self.n
    }

    pub fn epsilon(&self) -> &[Scalar] {
        &self.epsilon
    }

    pub fn psi(&self) -> &DGModuleMap {
        &self.psi
    }

    /// `ε` lies in degree 0 and `d(ε) = 0`.
    pub fn epsilon_is_cocycle(&self) -> bool {
        let deg_ok = self.epsilon.iter().zip(self.n.degrees()).all(|(x, &d)| x.is_zero() || d == 0);
        deg_ok && self.n.diff().apply(&self.epsilon).iter().all(Scalar::is_zero)
    }

    /// `n(c)` in the total coordinates of `R`.
    pub fn evaluate(&self, n: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
        let f = self.ring.field();
        let total = self.r.terms().values().map(|t| t.dim()).sum();
        let mut out = vec![f.zero(); total];
        for blk in &self.blocks {
            let pc = &self.pieces[blk.piece];
            let local: Vec<Scalar> = pc.idx.iter().map(|&i| c[i].clone()).collect();
            let off = r_offset(&self.r_offsets, blk.q);
            for (j, m) in blk.basis.iter().enumerate() {
                let coeff = &n[blk.offset + j];
                if coeff.is_zero() {
                    continue;
                }
                for (i, v) in m.apply(&local).into_iter().enumerate() {
                    out[off + i].add_mul(coeff, &v);
                }
            }
        }
        out
    }

    /// Applies `x ↦ act(q)·x` termwise to an element of `R`.
    fn on_r(&self, r: &[Scalar], act: impl Fn(i32) -> Matrix) -> Vec<Scalar> {
        let mut out = r.to_vec();
        for (&q, t) in self.r.terms() {
            let off = r_offset(&self.r_offsets, q);
            let img = act(q).apply(&r[off..off + t.dim()]);
            out[off..off + t.dim()].clone_from_slice(&img);
        }
        out
    }

    fn random_pair(&self, rng: &mut impl Rng) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        let f = self.ring.field();
        let a: Vec<Scalar> = (0..self.algebra.dim()).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect();
        let m: Vec<Scalar> = (0..self.ring.extension_dim()?).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect();
        Ok((a, m))
    }

    /// `(Ψ[a; 0])[a'; r'] = r'·a` on random elements.
    pub fn check_comp1(&self, rng: &mut impl Rng, trials: usize) -> Result<bool> {
        for _ in 0..trials {
            let (a, _) = self.random_pair(rng)?;
            let (a2, r2) = self.random_pair(rng)?;
            let x = self.ring.pair(&a, &vec![self.ring.field().zero(); r2.len()])?;
            let got = self.evaluate(&self.psi.matrix().apply(&x), &self.ring.pair(&a2, &r2)?);
            let want = self.on_r(&r2, |q| self.r.term(q).right_act(&a));
            if got != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(Ψ[0; r])[a'; r'] = a'·r` on random elements.
    pub fn check_comp2(&self, rng: &mut impl Rng, trials: usize) -> Result<bool> {
        for _ in 0..trials {
            let (_, r) = self.random_pair(rng)?;
            let (a2, r2) = self.random_pair(rng)?;
            let x = self.ring.pair(&vec![self.ring.field().zero(); a2.len()], &r)?;
            let got = self.evaluate(&self.psi.matrix().apply(&x), &self.ring.pair(&a2, &r2)?);
            let want = self.on_r(&r, |q| self.r.term(q).left_act(&a2));
            if got != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn split_b(&self) -> (Vec<usize>, Vec<usize>) {
        let a: Vec<usize> = self.pieces[0].idx.clone();
        let r: Vec<usize> = self.pieces[1..].iter().flat_map(|p| p.idx.iter().copied()).collect();
        (a, r)
    }

    fn split_n(&self) -> (Vec<usize>, Vec<usize>) {
        let (mut from_a, mut from_r) = (Vec::new(), Vec::new());
        for blk in &self.blocks {
            let range = blk.offset..blk.offset + blk.basis.len();
            if self.pieces[blk.piece].part.is_none() {
                from_a.extend(range);
            } else {
                from_r.extend(range);
            }
        }
        (from_a, from_r)
    }

    /// `Ψ = diag(Φ₁, Φ₂)`: `R -> Hom_A(A, R)` and `A -> Hom_A(R, R)`, with no cross terms.
    pub fn is_block_diagonal(&self) -> bool {
        let (ba, br) = self.split_b();
        let (na, nr) = self.split_n();
        let m = self.psi.matrix();
        let zero = |rows: &[usize], cols: &[usize]| {
            rows.is_empty() || cols.is_empty() || m.select_rows(rows).select_columns(cols).is_zero()
        };
        zero(&na, &ba) && zero(&nr, &br)
    }

    fn phi_iso(&self, from_a: bool) -> bool {
        let (ba, br) = self.split_b();
        let (na, nr) = self.split_n();
        let (src, tgt) = if from_a { (ba, nr) } else { (br, na) };
        let b = DGModule::regular(&self.ring);
        induces_iso(
            self.ring.field(),
            (b.degrees(), b.diff(), &src),
            (self.n.degrees(), self.n.diff(), &tgt),
            self.psi.matrix(),
        )
    }

    /// `H(Φ₁)` bijective, for `Φ₁(r)(a) = a·r`.
    pub fn phi1_is_quasi_iso(&self) -> bool {
        self.phi_iso(false)
    }

    /// `H(Φ₂)` bijective, for `Φ₂(a)(r) = r·a`.
    pub fn phi2_is_quasi_iso(&self) -> bool {
        self.phi_iso(true)
    }

    /// `Ψ` is a quasi-isomorphism after restriction to complexes of `A`-modules.
    pub fn psi_is_quasi_iso(&self) -> Result<bool> {
        Ok(self.psi.restrict_along_tau()?.is_quasi_iso())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bimodule, Quiver};
    use crate::dg::trivial_extension;
    use crate::duality::build_da_dualizing;
    use rand::SeedableRng;

    fn instances(f: Field) -> Vec<Arc<Algebra>> {
        vec![
            Algebra::ground(f),
            Quiver::parse_short(f, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap(),
            Quiver::parse_short(f, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap(),
            Quiver::parse_short(f, &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &["a*b"], None).unwrap(),
        ]
    }

    #[test]
    fn epsilon_psi_on_dual_extensions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for f in [Field::Rationals, Field::prime(5).unwrap()] {
            for a in instances(f) {
                let b = trivial_extension(&a, &build_da_dualizing(&a, -1)).unwrap();
                let ep = build_epsilon_psi(&b).unwrap();
                assert!(ep.epsilon_is_cocycle());
                assert!(ep.check_comp1(&mut rng, 5).unwrap());
                assert!(ep.check_comp2(&mut rng, 5).unwrap());
                assert!(ep.is_block_diagonal());
                assert!(ep.phi1_is_quasi_iso());
                assert!(ep.phi2_is_quasi_iso());
                assert!(ep.psi_is_quasi_iso().unwrap());
            }
        }
    }

    #[test]
    fn non_dualizing_breaks_phi2() {
        let a = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        // A/rad A as a bimodule, in degree -1
        let rad = a.structure().unwrap().radical().clone();
        let (q, pi, _) = a.quotient(&rad).unwrap();
        let left: Vec<Matrix> = (0..a.dim()).map(|e| q.left_mult_by(&pi.column(e))).collect();
        let right: Vec<Matrix> = (0..a.dim()).map(|e| q.right_mult_by(&pi.column(e))).collect();
        let top = Bimodule::new(a.clone(), left, right).unwrap();
        let b = trivial_extension(&a, &BimoduleComplex::bimodule_in_degree(&top, -1)).unwrap();
        let ep = build_epsilon_psi(&b).unwrap();
        assert!(ep.epsilon_is_cocycle());
        assert!(ep.phi1_is_quasi_iso());
        assert!(!ep.phi2_is_quasi_iso());
        assert!(!ep.psi_is_quasi_iso().unwrap());
    }

    #[test]
    fn needs_a_trivial_extension() {
        let a = Algebra::ground(Field::Rationals);
        assert!(matches!(build_epsilon_psi(&DGRing::from_algebra(&a)).map(|_| ()), Err(Error::NotTrivialExtension)));
    }
}
