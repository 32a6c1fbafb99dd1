use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{is_isomorphic, LeftModule};
use crate::complex::{BddComplex, ProjectiveResolution};
use crate::error::{Error, Result};
use crate::linalg::{Coords, Matrix, Scalar};

use super::ring::DGRing;
use super::semifree::SemiFree;

/// Ways of breaking a lift on purpose, to confirm the checks notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMutation {
    /// Replace `τ` by `τ` composed with a swap of two basis vectors of `H^0(B)` (or by zero).
    CorruptSection,
    /// Use `d(b g) = d(b) g + b d(g)` without the sign `(-1)^{|b|}`.
    DropKoszulSign,
}

/// `B ⊗_{H^0(B)} P` for a finite projective resolution `P` of `M̄`, with coefficients moved along `τ`.
pub fn lift_module(b: &Arc<DGRing>, mbar: &LeftModule, cutoff: usize) -> Result<SemiFree> {
    let tau = b.section()?.clone();
    build(b, mbar, cutoff, &tau, true)
}

/// A lift built with a deliberate defect.
pub fn lift_module_mutated(
    b: &Arc<DGRing>,
    mbar: &LeftModule,
    cutoff: usize,
    mutation: LiftMutation,
) -> Result<SemiFree> {
    let tau = b.section()?.clone();
    match mutation {
        LiftMutation::CorruptSection => {
            let d = tau.cols();
            let bad = if d >= 2 {
                let mut perm: Vec<usize> = (0..d).collect();
                perm.swap(0, 1);
                tau.select_columns(&perm)
            } else {
                Matrix::zeros(b.field(), tau.rows(), d)
            };
            build(b, mbar, cutoff, &bad, true)
        }
        LiftMutation::DropKoszulSign => build(b, mbar, cutoff, &tau, false),
    }
}

fn build(b: &Arc<DGRing>, mbar: &LeftModule, cutoff: usize, tau: &Matrix, koszul: bool) -> Result<SemiFree> {
    if !crate::algebra::module::same_algebra(mbar.algebra(), b.h0()) {
        return Err(Error::AlgebraMismatch);
    }
    let p = ProjectiveResolution::compute(&BddComplex::module_in_degree(mbar, 0), cutoff)?;
    if !p.is_terminated() {
        return Err(Error::NotFiniteProjDim { cutoff });
    }
    let structure = b.h0().structure()?;
    let idem: Vec<Vec<Scalar>> = structure.idempotents().iter().map(|e| tau.apply(e)).collect();
    let mut free = SemiFree::with_idempotents(b, idem);
    if !koszul {
        free = free.without_koszul_sign();
    }
    let f = b.field();
    // flat index of (degree, position) in the semi-free module
    let mut index: BTreeMap<(i32, usize), usize> = BTreeMap::new();
    let degrees: Vec<i32> = p.ranks().keys().rev().copied().collect();
    for n in degrees {
        for (j, g) in p.generators(n).iter().enumerate() {
            let mut boundary = vec![f.zero(); free.module().dim()];
            for (jj, c) in p.boundary_terms(n, g) {
                let h = index[&(n + 1, jj)];
                let (basis, _) = free.slice_basis(h);
                let lifted = tau.apply(&c);
                let coords = Coords::new(basis)
                    .coords_checked(&lifted)
                    .ok_or_else(|| Error::InvalidStructure("lifted coefficient leaves the generator's ideal".into()))?;
                for (k, v) in coords.into_iter().enumerate() {
                    boundary[free.offset(h) + k] = v;
                }
            }
            index.insert((n, j), free.generators().len());
            free.push(n, Some(g.kind), boundary)?;
        }
    }
    Ok(free)
}

/// `H^0(B) ⊗_B F` as a complex of `H^0(B)`-modules: `⊕ H^0(B) π(ε_g)` with `d(a⊗g) = Σ a π(b) ⊗ h`.
pub fn h0_tensor(free: &SemiFree) -> Result<BddComplex> {
    let ring = free.ring();
    let h0 = ring.h0().clone();
    let f = ring.field();
    let pi = ring.projection();
    let gens = free.generators();
    // per generator: basis of H^0 π(ε) as columns and its coordinates
    let mut pieces: Vec<Option<Coords>> = Vec::with_capacity(gens.len());
    for g in gens {
        let e = pi.apply(&free.idempotent(g.kind));
        let basis = h0.right_mult_by(&e).column_basis();
        pieces.push((basis.cols() > 0).then(|| Coords::new(&basis)));
    }
    let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (g, gen) in gens.iter().enumerate() {
        if pieces[g].is_some() {
            by_degree.entry(gen.degree).or_default().push(g);
        }
    }
    let offsets = |n: i32| -> Vec<usize> {
        by_degree
            .get(&n)
            .map(|gs| {
                gs.iter()
                    .scan(0, |acc, &g| {
                        let o = *acc;
                        *acc += pieces[g].as_ref().map_or(0, Coords::dim);
                        Some(o)
                    })
                    .collect()
            })
            .unwrap_or_default()
    };
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&n, gs) in &by_degree {
        let offs = offsets(n);
        let dim: usize = gs.iter().map(|&g| pieces[g].as_ref().unwrap().dim()).sum();
        let mut action = Vec::with_capacity(h0.dim());
        for a in 0..h0.dim() {
            let mut m = Matrix::zeros(f, dim, dim);
            for (k, &g) in gs.iter().enumerate() {
                let c = pieces[g].as_ref().unwrap();
                m.set_block(offs[k], offs[k], &c.coords_matrix(&(&h0.left_mult()[a] * c.basis())));
            }
            action.push(m);
        }
        terms.insert(n, LeftModule::unchecked(h0.clone(), action)?);
        if let Some(hs) = by_degree.get(&(n + 1)) {
            let toffs = offsets(n + 1);
            let tdim: usize = hs.iter().map(|&h| pieces[h].as_ref().unwrap().dim()).sum();
            let mut d = Matrix::zeros(f, tdim, dim);
            for (k, &g) in gs.iter().enumerate() {
                let src = pieces[g].as_ref().unwrap();
                for (t, &h) in hs.iter().enumerate() {
                    let coeff = pi.apply(&free.coefficient(g, h));
                    if coeff.iter().all(Scalar::is_zero) {
                        continue;
                    }
                    let tgt = pieces[h].as_ref().unwrap();
                    let r = h0.right_mult_by(&coeff);
                    let img = &r * src.basis();
                    for col in 0..img.cols() {
                        let c = tgt
                            .coords_checked(&img.column(col))
                            .ok_or_else(|| Error::InvalidStructure("tensor differential leaves its target".into()))?;
                        for (r, v) in c.into_iter().enumerate() {
                            d.set(toffs[t] + r, offs[k] + col, v);
                        }
                    }
                }
            }
            diffs.insert(n, d);
        }
    }
    BddComplex::new(h0, terms, diffs)
}

/// Whether `H^0(B) ⊗_B F` is quasi-isomorphic to `M̄` placed in degree 0.
pub fn lifting_holds(free: &SemiFree, mbar: &LeftModule) -> Result<bool> {
    if free.module().check().is_err() {
        return Ok(false);
    }
    let Ok(c) = h0_tensor(free) else { return Ok(false) };
    let Some((lo, hi)) = c.span() else { return Ok(mbar.dim() == 0) };
    for n in lo..=hi {
        if n != 0 && c.cohomology_dim(n) != 0 {
            return Ok(false);
        }
    }
    let h = c.cohomology(0)?;
    Ok(h.dim() == mbar.dim() && is_isomorphic(&h, mbar)?)
}

/// Builds the lift of `M̄` and tests `H^0(B) ⊗^L_B M ≅ M̄`.
pub fn check_lifting_identity(b: &Arc<DGRing>, mbar: &LeftModule, cutoff: usize) -> Result<bool> {
    lifting_holds(&lift_module(b, mbar, cutoff)?, mbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{projective_module, simple_module, Algebra, Bimodule, Quiver};
    use crate::complex::BimoduleComplex;
    use crate::dg::trivial_extension;
    use crate::linalg::Field;

    fn a2() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap()
    }

    fn ext_by_dual(a: &Arc<Algebra>) -> Arc<DGRing> {
        trivial_extension(a, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(a), -1)).unwrap()
    }

    #[test]
    fn lifts_of_a2_simples() {
        let a = a2();
        let b = ext_by_dual(&a);
        for i in 0..2 {
            let s = simple_module(&a, i).unwrap();
            let lift = lift_module(&b, &s, 4).unwrap();
            lift.module().check().unwrap();
            assert!(lifting_holds(&lift, &s).unwrap());
            let e = lift.module().extent();
            assert_eq!(e.sup, Some(0));
            assert!(e.inf.unwrap() >= b.lo() - 1);
        }
    }

    #[test]
    fn projective_lift_is_free() {
        let a = a2();
        let b = ext_by_dual(&a);
        let p = projective_module(&a, 0).unwrap();
        let lift = lift_module(&b, &p, 4).unwrap();
        assert_eq!(lift.degree_counts(), [(0, 1)].into());
        assert_eq!(lift.module().extent().sup, Some(0));
        assert!(lifting_holds(&lift, &p).unwrap());
    }

    #[test]
    fn degree_zero_ring_lift_is_the_resolution() {
        let a = a2();
        let b = DGRing::from_algebra(&a);
        for i in 0..2 {
            let s = simple_module(&a, i).unwrap();
            let lift = lift_module(&b, &s, 4).unwrap();
            let c = lift.module().restrict_along_tau().unwrap();
            assert_eq!(c.extent().inf, Some(0));
            assert!(is_isomorphic(&c.cohomology(0).unwrap(), &s).unwrap());
        }
    }

    #[test]
    fn mutations_are_caught() {
        let a = a2();
        let b = ext_by_dual(&a);
        let s = (0..2).map(|i| simple_module(&a, i).unwrap()).find(|s| {
            ProjectiveResolution::compute(&BddComplex::module_in_degree(s, 0), 3).unwrap().lowest_degree() == Some(-1)
        });
        let s = s.unwrap();
        for m in [LiftMutation::CorruptSection, LiftMutation::DropKoszulSign] {
            let ok = match lift_module_mutated(&b, &s, 4, m) {
                Ok(l) => lifting_holds(&l, &s).unwrap(),
                Err(_) => false,
            };
            assert!(!ok, "{m:?}");
        }
        let k = Algebra::ground(Field::Rationals);
        let bk = ext_by_dual(&k);
        let l = lift_module_mutated(&bk, &simple_module(&k, 0).unwrap(), 2, LiftMutation::CorruptSection).unwrap();
        assert!(!lifting_holds(&l, &simple_module(&k, 0).unwrap()).unwrap());
    }

    #[test]
    fn infinite_projective_dimension_is_refused() {
        let a = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        let b = ext_by_dual(&a);
        let k = simple_module(&a, 0).unwrap();
        assert!(matches!(lift_module(&b, &k, 3), Err(Error::NotFiniteProjDim { cutoff: 3 })));
        assert!(check_lifting_identity(&b, &LeftModule::zero(a.clone()), 3).unwrap());
    }
}
