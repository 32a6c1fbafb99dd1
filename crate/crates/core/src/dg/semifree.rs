use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::complex::floor_for;
use crate::error::{Error, Result};
use crate::linalg::matrix::{scalar_from_json, scalar_to_json};
use crate::linalg::{Coords, Echelon, Matrix, Scalar};

use super::module::{dg_cone, DGModule, DGModuleMap};
use super::ring::DGRing;

/// Homogeneous basis of the left ideal `B·ε`.
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    basis: Matrix,
    degrees: Vec<i32>,
    coords: Coords,
}

impl Slice {
    fn new(ring: &DGRing, eps: &[Scalar]) -> Slice {
        let r = ring.right_by(eps);
        let f = ring.field();
        let mut basis = Matrix::zeros(f, ring.dim(), 0);
        let mut degrees = Vec::new();
        for n in (ring.lo()..=0).rev() {
            let b = r.select_columns(&ring.degree_indices(n)).column_basis();
            degrees.extend(std::iter::repeat_n(n, b.cols()));
            basis = basis.hstack(&b);
        }
        let coords = Coords::new(&basis);
        Slice { basis, degrees, coords }
    }

    fn len(&self) -> usize {
        self.degrees.len()
    }
}

/// Generator `g` of a semi-free module: `B·ε_kind·g` placed so that `g` has degree `degree`.
/// `kind = None` stands for a free generator `B·g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiFreeGenerator {
    pub degree: i32,
    pub kind: Option<usize>,
    /// `d(g)` in total coordinates of the module built from the earlier generators.
    pub boundary: Vec<Scalar>,
}

/// A semi-free DG-module `⊕ B ε_κ g` with `d(b g) = d(b) g + (-1)^{|b|} b d(g)`.
#[derive(Clone, Debug)]
pub struct SemiFree {
    ring: Arc<DGRing>,
    idempotents: Vec<Vec<Scalar>>,
    slices: Vec<Slice>,
    whole: Slice,
    gens: Vec<SemiFreeGenerator>,
    offsets: Vec<usize>,
    module: DGModule,
    koszul: bool,
}

impl SemiFree {
    /// Empty module; with a section, generator kinds index the idempotents of `H^0(B)`.
    pub fn new(ring: &Arc<DGRing>) -> Result<SemiFree> {
        let idem = match ring.section() {
            Ok(tau) => ring.h0().structure()?.idempotents().iter().map(|e| tau.apply(e)).collect(),
            Err(_) => Vec::new(),
        };
        Ok(Self::with_idempotents(ring, idem))
    }

    /// Generator kinds given by explicit degree-0 idempotents of `B`.
    pub(crate) fn with_idempotents(ring: &Arc<DGRing>, idempotents: Vec<Vec<Scalar>>) -> SemiFree {
        let slices = idempotents.iter().map(|e| Slice::new(ring, e)).collect();
        SemiFree {
            ring: ring.clone(),
            idempotents,
            slices,
            whole: Slice::new(ring, ring.unit()),
            gens: Vec::new(),
            offsets: Vec::new(),
            module: DGModule::zero(ring.clone()),
            koszul: true,
        }
    }

    /// Drops the Koszul sign in the differential (used to build deliberately broken modules).
    pub(crate) fn without_koszul_sign(mut self) -> Self {
        self.koszul = false;
        self
    }

    fn slice(&self, kind: Option<usize>) -> &Slice {
        kind.map_or(&self.whole, |k| &self.slices[k])
    }

    /// Idempotent `ε` of a generator kind.
    pub fn idempotent(&self, kind: Option<usize>) -> Vec<Scalar> {
        kind.map_or_else(|| self.ring.unit().to_vec(), |k| self.idempotents[k].clone())
    }

    pub fn kinds(&self) -> usize {
        self.idempotents.len()
    }

    pub fn ring(&self) -> &Arc<DGRing> {
        &self.ring
    }

    pub fn module(&self) -> &DGModule {
        &self.module
    }

    pub fn generators(&self) -> &[SemiFreeGenerator] {
        &self.gens
    }

    /// Total index of `s_0 g` for generator `g`.
    pub fn offset(&self, g: usize) -> usize {
        self.offsets[g]
    }

    /// Basis of `B ε` for the generator, as ring elements (columns), and their degrees.
    pub fn slice_basis(&self, g: usize) -> (&Matrix, &[i32]) {
        let s = self.slice(self.gens[g].kind);
        (&s.basis, &s.degrees)
    }

    /// Generator counts per degree.
    pub fn degree_counts(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for g in &self.gens {
            *m.entry(g.degree).or_insert(0) += 1;
        }
        m
    }

    /// The ring element `b` with `d(g) = ... + b·h + ...`, where `h` precedes `g`.
    pub fn coefficient(&self, g: usize, h: usize) -> Vec<Scalar> {
        let z = &self.gens[g].boundary;
        let off = self.offsets[h];
        let s = self.slice(self.gens[h].kind);
        if off >= z.len() {
            return vec![self.ring.field().zero(); self.ring.dim()];
        }
        s.basis.apply(&z[off..off + s.len()])
    }

    /// Appends a generator whose boundary `d(g)` is given in the current total coordinates.
    pub fn push(&mut self, degree: i32, kind: Option<usize>, boundary: Vec<Scalar>) -> Result<()> {
        let f = self.ring.field();
        let n = self.module.dim();
        if boundary.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "boundary has length {}, module has dimension {n}",
                boundary.len()
            )));
        }
        if kind.is_some_and(|k| k >= self.slices.len()) {
            return Err(Error::InvalidStructure("generator kind out of range".into()));
        }
        let slice = self.slice(kind).clone();
        let m = slice.len();
        let total = n + m;
        let mut degrees = self.module.degrees().to_vec();
        degrees.extend(slice.degrees.iter().map(|d| d + degree));
        let mut action = Vec::with_capacity(self.ring.dim());
        let mut z_images = Matrix::zeros(f, n, 0);
        for (b, old) in self.module.action().iter().enumerate() {
            let local = slice.coords.coords_matrix(&(&self.ring.left_mult()[b] * &slice.basis));
            action.push(old.block_diag(&local));
            z_images = z_images.hstack(&Matrix::column_vector(f, &old.apply(&boundary)));
        }
        let mut diff = self.module.diff().block_diag(&Matrix::zeros(f, m, m));
        let ds = slice.coords.coords_matrix(&(self.ring.diff() * &slice.basis));
        diff.set_block(n, n, &ds);
        for c in 0..m {
            let s = slice.basis.column(c);
            let sign = if self.koszul { f.sign(slice.degrees[c] as i64) } else { f.one() };
            for (r, v) in z_images.apply(&s).into_iter().enumerate() {
                diff.set(r, n + c, v.mul_ref(&sign));
            }
        }
        self.module = DGModule::unchecked(self.ring.clone(), degrees, action, diff)?;
        debug_assert_eq!(self.module.dim(), total);
        self.offsets.push(n);
        self.gens.push(SemiFreeGenerator { degree, kind, boundary });
        Ok(())
    }
}

/// Semi-free resolution `F -> X`, exact in degrees at and above the floor.
#[derive(Clone, Debug)]
pub struct SemiFreeResolution {
    free: SemiFree,
    source: DGModule,
    augment: Matrix,
    floor: i32,
    cutoff: usize,
    terminated: bool,
}

impl SemiFreeResolution {
    /// Semi-free resolution down to `floor_for(cutoff)`, via the installed store if any.
    pub fn compute(x: &DGModule, cutoff: usize) -> Result<Self> {
        crate::cache::memo(
            "semifree-resolution",
            || vec![x.ring().to_json(), x.to_json(), cutoff.into()],
            || Self::compute_fresh(x, cutoff),
            Self::to_json,
            |v| {
                Self::from_json(x, v).and_then(|r| {
                    if r.cutoff == cutoff {
                        Ok(r)
                    } else {
                        Err(Error::Parse("cutoff".into()))
                    }
                })
            },
        )
    }

    /// Kills the cohomology of the cone top-down, one degree at a time.
    fn compute_fresh(x: &DGModule, cutoff: usize) -> Result<Self> {
        let ring = x.ring().clone();
        let floor = floor_for(cutoff);
        let mut r = SemiFreeResolution {
            free: SemiFree::new(&ring)?,
            source: x.clone(),
            augment: Matrix::zeros(ring.field(), x.dim(), 0),
            floor,
            cutoff,
            terminated: false,
        };
        let Some(sup) = x.extent().sup else {
            r.terminated = true;
            return Ok(r);
        };
        if sup <= floor + 1 {
            return Err(Error::CutoffTooSmall(format!(
                "cohomology in degree {sup} lies below the resolution floor {floor}"
            )));
        }
        for n in (floor..=sup).rev() {
            r.kill_degree(n)?;
            if r.cone()?.is_acyclic() {
                r.terminated = true;
                break;
            }
        }
        Ok(r)
    }

    fn kill_degree(&mut self, n: i32) -> Result<()> {
        let ring = self.free.ring.clone();
        let f = ring.field();
        let fm = self.free.module.clone();
        let x = self.source.clone();
        let augment = self.augment.clone();
        let (f0, f1, f2) = (fm.degree_indices(n), fm.degree_indices(n + 1), fm.degree_indices(n + 2));
        let (x_1, x0, x1) = (x.degree_indices(n - 1), x.degree_indices(n), x.degree_indices(n + 1));
        let (d1, c0) = (f1.len(), x0.len());
        if d1 + c0 == 0 {
            return Ok(());
        }
        // cone^n = F^{n+1} ⊕ X^n
        let block = |rows: (&[usize], &[usize]), cols: (&[usize], &[usize])| {
            let mut d = Matrix::zeros(f, rows.0.len() + rows.1.len(), cols.0.len() + cols.1.len());
            d.set_block(0, 0, &(-&fm.diff().select_rows(rows.0).select_columns(cols.0)));
            d.set_block(rows.0.len(), 0, &augment.select_rows(rows.1).select_columns(cols.0));
            d.set_block(rows.0.len(), cols.0.len(), &x.diff().select_rows(rows.1).select_columns(cols.1));
            d
        };
        let z = block((&f2, &x1), (&f1, &x0)).kernel();
        if z.cols() == 0 {
            return Ok(());
        }
        let act = |b: &[Scalar]| {
            let a = fm.act(b).select_rows(&f1).select_columns(&f1);
            a.block_diag(&x.act(b).select_rows(&x0).select_columns(&x0))
        };
        let mut w = Echelon::new(f, d1 + c0);
        let bd = block((&f1, &x0), (&f0, &x_1));
        for col in 0..bd.cols() {
            w.insert(&bd.column(col));
        }
        for j in &radical_lift(&ring)? {
            let jz = &act(j) * &z;
            for col in 0..jz.cols() {
                w.insert(&jz.column(col));
            }
        }
        let kinds: Vec<Option<usize>> =
            if self.free.kinds() > 0 { (0..self.free.kinds()).map(Some).collect() } else { vec![None] };
        let degree_zero = ring.degree_indices(0);
        let mut new = Vec::new();
        for kind in kinds {
            let ez = &act(&self.free.idempotent(kind)) * &z;
            for col in 0..ez.cols() {
                let v = ez.column(col);
                if !w.insert(&v) {
                    continue;
                }
                if kind.is_none() {
                    for &b in &degree_zero {
                        w.insert(&act(&ring.basis_vector(b)).apply(&v));
                    }
                }
                new.push((kind, v));
            }
        }
        for (kind, v) in new {
            let mut boundary = vec![f.zero(); fm.dim()];
            for (k, &i) in f1.iter().enumerate() {
                boundary[i] = v[k].neg_ref();
            }
            let mut a = vec![f.zero(); x.dim()];
            for (k, &i) in x0.iter().enumerate() {
                a[i] = v[d1 + k].clone();
            }
            self.attach(n, kind, boundary, &a)?;
        }
        Ok(())
    }

    /// Adds a generator with boundary in the current coordinates of `F` and image `a` in `X`.
    fn attach(&mut self, n: i32, kind: Option<usize>, mut boundary: Vec<Scalar>, a: &[Scalar]) -> Result<()> {
        let f = self.free.ring.field();
        boundary.resize(self.free.module.dim(), f.zero());
        let g = self.free.gens.len();
        self.free.push(n, kind, boundary)?;
        let (basis, _) = self.free.slice_basis(g);
        let images: Vec<Vec<Scalar>> = (0..basis.cols()).map(|c| self.source.act(&basis.column(c)).apply(a)).collect();
        self.augment = self.augment.hstack(&Matrix::from_columns(f, self.source.dim(), &images));
        Ok(())
    }

    fn cone(&self) -> Result<DGModule> {
        dg_cone(&self.augmentation()?)
    }

    pub fn ring(&self) -> &Arc<DGRing> {
        &self.free.ring
    }

    pub fn source(&self) -> &DGModule {
        &self.source
    }

    pub fn free(&self) -> &SemiFree {
        &self.free
    }

    pub fn module(&self) -> &DGModule {
        &self.free.module
    }

    pub fn augmentation(&self) -> Result<DGModuleMap> {
        DGModuleMap::unchecked(self.free.module.clone(), self.source.clone(), self.augment.clone())
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn degree_counts(&self) -> BTreeMap<i32, usize> {
        self.free.degree_counts()
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.free.gens.iter().map(|g| g.degree).min()
    }

    /// Module axioms for `F`, the augmentation, and acyclicity of the cone at and above the floor.
    pub fn verify(&self) -> Result<()> {
        self.free.module.check()?;
        let aug = self.augmentation()?;
        aug.check()?;
        let cone = self.cone()?;
        if let Some((lo, hi)) = cone.span() {
            let from = if self.terminated { lo } else { self.floor.max(lo) };
            for n in from..=hi {
                if cone.cohomology_dim(n) != 0 {
                    return Err(Error::InvalidStructure(format!(
                        "cone of the resolution has cohomology in degree {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `{"cutoff","floor","terminated","generators":[{"degree","kind","boundary","augment"}]}`.
    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .free
            .gens
            .iter()
            .enumerate()
            .map(|(g, gen)| {
                let off = self.free.offsets[g];
                let (basis, _) = self.free.slice_basis(g);
                // the generator's own image is the column for s = ε
                let eps = self.free.slice(gen.kind).coords.coords(&self.free.idempotent(gen.kind));
                let aug = self.augment.block(0, self.source.dim(), off, basis.cols()).apply(&eps);
                json!({
                    "degree": gen.degree,
                    "kind": gen.kind,
                    "boundary": gen.boundary.iter().map(scalar_to_json).collect::<Vec<_>>(),
                    "augment": aug.iter().map(scalar_to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "cutoff": self.cutoff,
            "floor": self.floor,
            "terminated": self.terminated,
            "generators": gens,
        })
    }

    /// Rebuilds a stored resolution of `x` and re-verifies it.
    pub fn from_json(x: &DGModule, v: &Value) -> Result<Self> {
        let ring = x.ring().clone();
        let f = ring.field();
        let bad = |what: &str| Error::Parse(format!("semi-free resolution: {what}"));
        let cutoff = v.get("cutoff").and_then(Value::as_u64).ok_or_else(|| bad("missing cutoff"))? as usize;
        let mut r = SemiFreeResolution {
            free: SemiFree::new(&ring)?,
            source: x.clone(),
            augment: Matrix::zeros(f, x.dim(), 0),
            floor: floor_for(cutoff),
            cutoff,
            terminated: v.get("terminated").and_then(Value::as_bool).ok_or_else(|| bad("missing terminated"))?,
        };
        for g in v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing generators"))? {
            let degree = g.get("degree").and_then(Value::as_i64).ok_or_else(|| bad("generator degree"))? as i32;
            let kind = match g.get("kind") {
                None | Some(Value::Null) => None,
                Some(k) => Some(k.as_u64().ok_or_else(|| bad("generator kind"))? as usize),
            };
            let vec = |key: &str| -> Result<Vec<Scalar>> {
                g.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad(key))?
                    .iter()
                    .map(|s| scalar_from_json(f, s))
                    .collect()
            };
            let (boundary, augment) = (vec("boundary")?, vec("augment")?);
            if augment.len() != x.dim() || boundary.len() > r.free.module.dim() {
                return Err(Error::ShapeMismatch("stored generator does not fit the module".into()));
            }
            r.attach(degree, kind, boundary, &augment)?;
        }
        r.verify()?;
        Ok(r)
    }
}

/// Degree-zero elements of `B` mapping into the radical of `H^0(B)`.
fn radical_lift(ring: &DGRing) -> Result<Vec<Vec<Scalar>>> {
    let rad = ring.h0().structure()?.radical().clone();
    let zero = ring.degree_indices(0);
    let pi0 = ring.projection().select_columns(&zero);
    let k = pi0.hstack(&(-&rad)).kernel();
    let lifted = k.block(0, zero.len(), 0, k.cols()).column_basis();
    Ok((0..lifted.cols())
        .map(|c| {
            let mut v = vec![ring.field().zero(); ring.dim()];
            for (i, &idx) in zero.iter().enumerate() {
                v[idx] = lifted.get(i, c).clone();
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_module, Algebra, Bimodule, Quiver};
    use crate::complex::BimoduleComplex;
    use crate::dg::trivial_extension;
    use crate::linalg::Field;

    fn ext_by_dual(a: &Arc<Algebra>, n: i32) -> Arc<DGRing> {
        trivial_extension(a, &BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(a), n)).unwrap()
    }

    #[test]
    fn free_module_resolves_itself() {
        let a = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let b = ext_by_dual(&a, -1);
        let r = SemiFreeResolution::compute(&DGModule::regular(&b), 4).unwrap();
        r.verify().unwrap();
        assert!(r.is_terminated());
        assert_eq!(r.degree_counts(), [(0, 2)].into());
        assert_eq!(r.module().dim(), b.dim());
    }

    #[test]
    fn ground_field_over_exterior_ring() {
        // k over k ⋉ k[-1]: one generator in every even degree
        for f in [Field::Rationals, Field::prime(5).unwrap()] {
            let b = ext_by_dual(&Algebra::ground(f), -1);
            let k = DGModule::inflate_module(&b, &simple_module(b.h0(), 0).unwrap(), 0).unwrap();
            let r = SemiFreeResolution::compute(&k, 6).unwrap();
            r.verify().unwrap();
            assert!(!r.is_terminated());
            let expect: BTreeMap<i32, usize> = (0..=4).map(|i| (-2 * i, 1)).collect();
            assert_eq!(r.degree_counts(), expect);
        }
    }

    #[test]
    fn acyclic_module_resolves_to_zero() {
        let k = Algebra::ground(Field::Rationals);
        let b = ext_by_dual(&k, -1);
        let r = DGModule::regular(&b);
        let id = DGModuleMap::new(r.clone(), r.clone(), Matrix::identity(k.field(), 2)).unwrap();
        let c = dg_cone(&id).unwrap();
        let res = SemiFreeResolution::compute(&c, 3).unwrap();
        assert!(res.is_terminated());
        assert_eq!(res.module().dim(), 0);
    }

    #[test]
    fn ring_without_section_uses_free_generators() {
        // k ⋉ (k --1--> k) is acyclic
        let k = Algebra::ground(Field::Rationals);
        let one = Bimodule::regular(&k);
        let m = BimoduleComplex::new(
            k.clone(),
            [(-1, one.clone()), (0, one)].into(),
            [(-1, Matrix::identity(k.field(), 1))].into(),
        )
        .unwrap();
        let b = trivial_extension(&k, &m).unwrap();
        let r = SemiFreeResolution::compute(&DGModule::regular(&b), 3).unwrap();
        assert!(r.is_terminated());
        // k ⋉ k[0] ⋉ ... with a nontrivial section-free degree 0
        let two = Bimodule::regular(&k).direct_sum(&Bimodule::regular(&k)).unwrap();
        let d = Matrix::from_i64_rows(k.field(), &[vec![1, 0], vec![0, 0]]);
        let m = BimoduleComplex::new(k.clone(), [(-1, two.clone()), (0, two)].into(), [(-1, d)].into()).unwrap();
        let b = trivial_extension(&k, &m).unwrap();
        assert!(!b.has_section());
        let x = DGModule::regular(&b);
        let r = SemiFreeResolution::compute(&x, 3).unwrap();
        r.verify().unwrap();
        assert!(r.is_terminated());
        assert_eq!(r.degree_counts(), [(0, 1)].into());
    }

    #[test]
    fn json_round_trip() {
        let a = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        let b = ext_by_dual(&a, -1);
        let s = DGModule::inflate_module(&b, &simple_module(b.h0(), 0).unwrap(), 0).unwrap();
        let r = SemiFreeResolution::compute(&s, 3).unwrap();
        r.verify().unwrap();
        let back = SemiFreeResolution::from_json(&s, &r.to_json()).unwrap();
        assert_eq!(back.degree_counts(), r.degree_counts());
        assert_eq!(back.to_json(), r.to_json());
    }
}
