use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{is_isomorphic, Algebra, LeftModule, Structure};
use crate::error::{Error, Result};
use crate::linalg::matrix::{scalar_from_json, scalar_to_json};
use crate::linalg::{Coords, Echelon, Matrix, Scalar};

use super::complex::{cone, parse_degree, BddComplex, ChainMap};

/// One free generator `A e_kind · g` of a term of the resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub kind: usize,
    /// `d(g)` in the coordinates of the next term.
    pub boundary: Vec<Scalar>,
    /// Image of `g` in the resolved complex, same degree.
    pub augment: Vec<Scalar>,
}

/// Projective resolution `P -> C` of a bounded complex, computed by killing the
/// cohomology of the mapping cone one degree at a time, then reduced to a minimal one.
///
/// Terms are known in every degree `>= floor`; when `terminated` the resolution is
/// complete and all lower terms vanish.
#[derive(Clone, Debug)]
pub struct ProjectiveResolution {
    algebra: Arc<Algebra>,
    structure: Arc<Structure>,
    source: BddComplex,
    gens: BTreeMap<i32, Vec<Generator>>,
    floor: i32,
    cutoff: usize,
    terminated: bool,
    minimal: bool,
    recurrence: Option<(i32, i32)>,
}

/// Lowest degree computed for a given cutoff. One degree of slack below `-(cutoff+1)` makes
/// every term in degrees `>= -(cutoff+1)` agree with the minimal resolution.
pub fn floor_for(cutoff: usize) -> i32 {
    -(cutoff as i32) - 2
}

impl ProjectiveResolution {
    /// Minimal projective resolution down to `floor_for(cutoff)`, via the installed store if any.
    pub fn compute(c: &BddComplex, cutoff: usize) -> Result<Self> {
        crate::cache::memo(
            "projective-resolution",
            || vec![c.algebra().to_json(), c.to_json(), cutoff.into()],
            || Self::compute_fresh(c, cutoff),
            Self::to_json,
            |v| {
                Self::from_json(c, v).and_then(|r| {
                    if r.cutoff == cutoff {
                        Ok(r)
                    } else {
                        Err(Error::Parse("cutoff".into()))
                    }
                })
            },
        )
    }

    fn compute_fresh(c: &BddComplex, cutoff: usize) -> Result<Self> {
        let a = c.algebra().clone();
        let structure = a.structure()?;
        let floor = floor_for(cutoff);
        let mut r = ProjectiveResolution {
            algebra: a,
            structure,
            source: c.clone(),
            gens: BTreeMap::new(),
            floor,
            cutoff,
            terminated: false,
            minimal: true,
            recurrence: None,
        };
        let Some((lo, hi)) = c.span() else {
            r.terminated = true;
            return Ok(r);
        };
        if hi <= floor + 1 {
            return Err(Error::CutoffTooSmall(format!(
                "complex lives in degrees <= {hi}, below the resolution floor {floor}"
            )));
        }
        let mut syzygies: Vec<(i32, LeftModule)> = Vec::new();
        for n in (floor..=hi).rev() {
            let new = r.kill_degree(n, lo, &mut syzygies)?;
            match new {
                Some(g) if !g.is_empty() => {
                    r.gens.insert(n, g);
                }
                _ if n < lo => {
                    r.terminated = true;
                    break;
                }
                _ => {}
            }
        }
        r.minimize()?;
        if !r.terminated && r.gens.get(&(floor + 1)).is_none_or(Vec::is_empty) {
            // a gap below the complex: nothing lower survives in the minimal resolution
            r.gens.retain(|&n, _| n > floor + 1);
            r.terminated = true;
        }
        Ok(r)
    }

    /// Adds the generators in degree `n`; `None` when the cone is already acyclic there.
    fn kill_degree(
        &mut self,
        n: i32,
        lo: i32,
        syzygies: &mut Vec<(i32, LeftModule)>,
    ) -> Result<Option<Vec<Generator>>> {
        let f = self.algebra.field();
        let c = &self.source;
        let p1 = self.term(n + 1);
        let (d1, d2) = (p1.dim(), self.term_dim(n + 2));
        let (c0, c1) = (c.term_dim(n), c.term_dim(n + 1));
        let mut d = Matrix::zeros(f, d2 + c1, d1 + c0);
        d.set_block(0, 0, &(-&self.diff(n + 1)));
        d.set_block(d2, 0, &self.augmentation(n + 1));
        d.set_block(d2, d1, &c.diff(n));
        let z = d.kernel();
        if z.cols() == 0 {
            return Ok(None);
        }
        if n < lo && self.recurrence.is_none() {
            let (syz, _) = p1.submodule(&z)?;
            for (m, prev) in syzygies.iter() {
                if prev.dim() == syz.dim() && is_isomorphic(prev, &syz)? {
                    self.recurrence = Some((n, *m));
                    break;
                }
            }
            syzygies.push((n, syz));
        }
        let v = p1.direct_sum(&c.term(n))?;
        let mut w = Echelon::new(f, d1 + c0);
        let b = c.diff(n - 1).column_basis();
        for col in 0..b.cols() {
            let mut x = vec![f.zero(); d1];
            x.extend(b.column(col));
            w.insert(&x);
        }
        let rad = self.structure.radical();
        for r in 0..rad.cols() {
            let jz = &v.act(&rad.column(r)) * &z;
            for col in 0..jz.cols() {
                w.insert(&jz.column(col));
            }
        }
        let mut new = Vec::new();
        for (kind, e) in self.structure.idempotents().iter().enumerate() {
            let ez = &v.act(e) * &z;
            for col in 0..ez.cols() {
                let x = ez.column(col);
                if w.insert(&x) {
                    new.push(Generator {
                        kind,
                        boundary: x[..d1].iter().map(Scalar::neg_ref).collect(),
                        augment: x[d1..].to_vec(),
                    });
                }
            }
        }
        Ok(Some(new))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn source(&self) -> &BddComplex {
        &self.source
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

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Degrees `(n, m)`, `n < m`, whose syzygies are isomorphic; certifies an infinite resolution.
    pub fn recurrence(&self) -> Option<(i32, i32)> {
        self.recurrence
    }

    pub fn generators(&self, n: i32) -> &[Generator] {
        self.gens.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Generator kinds per degree.
    pub fn ranks(&self) -> BTreeMap<i32, Vec<usize>> {
        self.gens.iter().map(|(n, g)| (*n, g.iter().map(|g| g.kind).collect())).collect()
    }

    /// Lowest degree with a nonzero term.
    pub fn lowest_degree(&self) -> Option<i32> {
        self.gens.iter().find(|(_, g)| !g.is_empty()).map(|(n, _)| *n)
    }

    fn block(&self, kind: usize) -> usize {
        self.structure.projective_basis(kind).cols()
    }

    fn offsets(&self, n: i32) -> Vec<usize> {
        let mut off = 0;
        self.generators(n)
            .iter()
            .map(|g| {
                let o = off;
                off += self.block(g.kind);
                o
            })
            .collect()
    }

    pub fn term_dim(&self, n: i32) -> usize {
        self.generators(n).iter().map(|g| self.block(g.kind)).sum()
    }

    pub fn term(&self, n: i32) -> LeftModule {
        let mods: Vec<LeftModule> = self
            .generators(n)
            .iter()
            .map(|g| {
                LeftModule::unchecked(self.algebra.clone(), self.structure.projective_action(g.kind).to_vec())
                    .expect("projective action")
            })
            .collect();
        LeftModule::direct_sum_all(&self.algebra, &mods).expect("same algebra")
    }

    /// Algebra element `a` with `d(g) = ... + a·h + ...` for generator `j` of degree `n+1`.
    pub fn coefficient(&self, n: i32, g: &Generator, j: usize) -> Vec<Scalar> {
        let h = &self.generators(n + 1)[j];
        let off = self.offsets(n + 1)[j];
        let len = self.block(h.kind);
        self.structure.projective_basis(h.kind).apply(&g.boundary[off..off + len])
    }

    /// Coordinates of `d(g)` as pairs (generator index in degree `n+1`, coefficient).
    pub fn boundary_terms(&self, n: i32, g: &Generator) -> Vec<(usize, Vec<Scalar>)> {
        (0..self.generators(n + 1).len())
            .map(|j| (j, self.coefficient(n, g, j)))
            .filter(|(_, a)| a.iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// Matrix with columns `b_k · v` for the basis `b_k` of `A e_kind`.
    fn spread(&self, target: &LeftModule, kind: usize, v: &[Scalar]) -> Matrix {
        let basis = self.structure.projective_basis(kind);
        let cols: Vec<Vec<Scalar>> = (0..basis.cols()).map(|k| target.act(&basis.column(k)).apply(v)).collect();
        Matrix::from_columns(self.algebra.field(), target.dim(), &cols)
    }

    pub fn diff(&self, n: i32) -> Matrix {
        let f = self.algebra.field();
        let tgt = self.term(n + 1);
        let mut d = Matrix::zeros(f, tgt.dim(), self.term_dim(n));
        if tgt.dim() == 0 {
            return d;
        }
        for (g, off) in self.generators(n).iter().zip(self.offsets(n)) {
            d.set_block(0, off, &self.spread(&tgt, g.kind, &g.boundary));
        }
        d
    }

    pub fn augmentation(&self, n: i32) -> Matrix {
        let f = self.algebra.field();
        let tgt = self.source.term(n);
        let mut m = Matrix::zeros(f, tgt.dim(), self.term_dim(n));
        if tgt.dim() == 0 {
            return m;
        }
        for (g, off) in self.generators(n).iter().zip(self.offsets(n)) {
            m.set_block(0, off, &self.spread(&tgt, g.kind, &g.augment));
        }
        m
    }

    pub fn complex(&self) -> BddComplex {
        let terms = self.gens.keys().map(|&n| (n, self.term(n))).collect();
        let diffs = self.gens.keys().map(|&n| (n, self.diff(n))).collect();
        BddComplex::unchecked(self.algebra.clone(), terms, diffs).expect("resolution shapes")
    }

    pub fn augmentation_map(&self) -> ChainMap {
        let comps = self.gens.keys().map(|&n| (n, self.augmentation(n))).collect();
        ChainMap::unchecked(self.complex(), self.source.clone(), comps).expect("augmentation shapes")
    }

    /// Checks `d^2 = 0`, the chain map property and acyclicity of the cone in the computed range.
    pub fn verify(&self) -> Result<()> {
        let p = self.complex();
        p.check()?;
        let aug = self.augmentation_map();
        aug.check()?;
        let c = cone(&aug)?;
        let bottom = if self.terminated { i32::MIN } else { self.floor };
        for &n in c.terms().keys() {
            if n >= bottom && c.cohomology_dim(n) != 0 {
                return Err(Error::InvalidStructure(format!("resolution cone has cohomology in degree {n}")));
            }
        }
        Ok(())
    }

    /// Cancels pairs of generators joined by an invertible coefficient.
    fn minimize(&mut self) -> Result<()> {
        'outer: loop {
            let degrees: Vec<i32> = self.gens.keys().copied().collect();
            for n in degrees {
                for (i, g) in self.generators(n).iter().enumerate() {
                    for (j, h) in self.generators(n + 1).iter().enumerate() {
                        if h.kind != g.kind {
                            continue;
                        }
                        let a = self.coefficient(n, g, j);
                        if let Some(b) = self.local_inverse(g.kind, &a) {
                            self.cancel(n, i, j, &b);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        self.minimal = true;
        Ok(())
    }

    /// Inverse of `a` in the local ring `e A e`, if it exists.
    fn local_inverse(&self, kind: usize, a: &[Scalar]) -> Option<Vec<Scalar>> {
        if a.iter().all(Scalar::is_zero) {
            return None;
        }
        let f = self.algebra.field();
        let e = &self.structure.idempotents()[kind];
        let b = self.algebra.left_mult_by(a).solve(&Matrix::column_vector(f, e)).ok()??.column(0);
        let b = self.algebra.mul(&self.algebra.mul(e, &b), e);
        (self.algebra.mul(&b, a) == *e && self.algebra.mul(a, &b) == *e).then_some(b)
    }

    /// Removes generator `i` of degree `n` and `j` of degree `n+1`, where `d(g_i)` hits
    /// `h_j` with coefficient inverse to `b`; the result is homotopy equivalent over `C`.
    fn cancel(&mut self, n: i32, i: usize, j: usize, b: &[Scalar]) {
        let next = self.term(n + 1);
        let here = self.source.term(n);
        let g = self.generators(n)[i].clone();
        let mut updated = self.gens[&n].clone();
        for (k, other) in updated.iter_mut().enumerate() {
            if k == i {
                continue;
            }
            let c = self.coefficient(n, other, j);
            if c.iter().all(Scalar::is_zero) {
                continue;
            }
            let t = self.algebra.mul(&c, b);
            let db = next.act(&t).apply(&g.boundary);
            other.boundary = other.boundary.iter().zip(&db).map(|(x, y)| x.sub_ref(y)).collect();
            if here.dim() > 0 {
                let fb = here.act(&t).apply(&g.augment);
                other.augment = other.augment.iter().zip(&fb).map(|(x, y)| x.sub_ref(y)).collect();
            }
        }
        let (hoff, hlen) = (self.offsets(n + 1)[j], self.block(self.generators(n + 1)[j].kind));
        for other in updated.iter_mut() {
            other.boundary.drain(hoff..hoff + hlen);
        }
        updated.remove(i);
        let (goff, glen) = (self.offsets(n)[i], self.block(g.kind));
        if let Some(prev) = self.gens.get_mut(&(n - 1)) {
            for p in prev.iter_mut() {
                p.boundary.drain(goff..goff + glen);
            }
        }
        self.gens.insert(n, updated);
        if let Some(up) = self.gens.get_mut(&(n + 1)) {
            up.remove(j);
        }
        self.gens.retain(|_, g| !g.is_empty());
    }

    /// Adds a contractible pair `A e_kind --1--> A e_kind` in degrees `n`, `n+1`.
    pub fn pad(&self, n: i32, kind: usize) -> Result<Self> {
        if kind >= self.structure.simple_count() {
            return Err(Error::InvalidStructure(format!("no simple of index {kind}")));
        }
        if n < self.floor {
            return Err(Error::CutoffTooSmall(format!("degree {n} lies below the floor {}", self.floor)));
        }
        let f = self.algebra.field();
        let mut r = self.clone();
        let len = self.block(kind);
        let basis = self.structure.projective_basis(kind);
        let unit = Coords::new(basis).coords(&self.structure.idempotents()[kind]);
        let old_next = self.term_dim(n + 1);
        // existing degree-n boundaries gain zero coordinates for the new target
        if let Some(gs) = r.gens.get_mut(&n) {
            for g in gs.iter_mut() {
                g.boundary.extend(std::iter::repeat_n(f.zero(), len));
            }
        }
        if let Some(gs) = r.gens.get_mut(&(n - 1)) {
            for g in gs.iter_mut() {
                g.boundary.extend(std::iter::repeat_n(f.zero(), len));
            }
        }
        let mut boundary = vec![f.zero(); old_next];
        boundary.extend(unit);
        r.gens.entry(n).or_default().push(Generator {
            kind,
            boundary,
            augment: vec![f.zero(); self.source.term_dim(n)],
        });
        let top = self.term_dim(n + 2);
        r.gens.entry(n + 1).or_default().push(Generator {
            kind,
            boundary: vec![f.zero(); top],
            augment: vec![f.zero(); self.source.term_dim(n + 1)],
        });
        r.minimal = false;
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let gens: BTreeMap<String, Value> = self
            .gens
            .iter()
            .map(|(n, gs)| {
                let v: Vec<Value> = gs
                    .iter()
                    .map(|g| {
                        json!({
                            "kind": g.kind,
                            "boundary": g.boundary.iter().map(scalar_to_json).collect::<Vec<_>>(),
                            "augment": g.augment.iter().map(scalar_to_json).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                (n.to_string(), Value::Array(v))
            })
            .collect();
        json!({
            "cutoff": self.cutoff,
            "floor": self.floor,
            "terminated": self.terminated,
            "minimal": self.minimal,
            "recurrence": self.recurrence.map(|(a, b)| vec![a, b]),
            "generators": gens,
        })
    }

    /// Restores a resolution of `source` and re-verifies it.
    pub fn from_json(source: &BddComplex, v: &Value) -> Result<Self> {
        let a = source.algebra().clone();
        let structure = a.structure()?;
        let f = a.field();
        let bad = |what: &str| Error::Parse(format!("resolution: missing or invalid {what}"));
        let cutoff = v.get("cutoff").and_then(Value::as_u64).ok_or_else(|| bad("cutoff"))? as usize;
        let floor = v.get("floor").and_then(Value::as_i64).ok_or_else(|| bad("floor"))? as i32;
        let terminated = v.get("terminated").and_then(Value::as_bool).ok_or_else(|| bad("terminated"))?;
        let minimal = v.get("minimal").and_then(Value::as_bool).unwrap_or(false);
        let recurrence = match v.get("recurrence") {
            Some(Value::Array(x)) if x.len() == 2 => {
                let d = |i: usize| x[i].as_i64().map(|d| d as i32).ok_or_else(|| bad("recurrence"));
                Some((d(0)?, d(1)?))
            }
            _ => None,
        };
        let scalars = |x: Option<&Value>| -> Result<Vec<Scalar>> {
            x.and_then(Value::as_array)
                .ok_or_else(|| bad("scalar list"))?
                .iter()
                .map(|s| scalar_from_json(f, s))
                .collect()
        };
        let mut gens = BTreeMap::new();
        for (k, list) in v.get("generators").and_then(Value::as_object).ok_or_else(|| bad("generators"))? {
            let n = parse_degree(k)?;
            let mut gs = Vec::new();
            for g in list.as_array().ok_or_else(|| bad("generator list"))? {
                let kind = g.get("kind").and_then(Value::as_u64).ok_or_else(|| bad("kind"))? as usize;
                if kind >= structure.simple_count() {
                    return Err(bad("kind"));
                }
                gs.push(Generator { kind, boundary: scalars(g.get("boundary"))?, augment: scalars(g.get("augment"))? });
            }
            gens.insert(n, gs);
        }
        let r = ProjectiveResolution {
            algebra: a,
            structure,
            source: source.clone(),
            gens,
            floor,
            cutoff,
            terminated,
            minimal,
            recurrence,
        };
        for (&n, gs) in &r.gens {
            for g in gs {
                if g.boundary.len() != r.term_dim(n + 1) || g.augment.len() != source.term_dim(n) {
                    return Err(bad("vector length"));
                }
            }
        }
        r.verify()?;
        Ok(r)
    }
}

/// Injective resolution `C -> I`, obtained by dualizing a projective resolution of `DC`
/// over the opposite algebra.
#[derive(Clone, Debug)]
pub struct InjectiveResolution {
    dual: ProjectiveResolution,
    source: BddComplex,
}

impl InjectiveResolution {
    pub fn compute(c: &BddComplex, cutoff: usize) -> Result<Self> {
        let dual = ProjectiveResolution::compute(&c.dual(), cutoff)?;
        Ok(InjectiveResolution { dual, source: c.clone() })
    }

    pub fn dual_resolution(&self) -> &ProjectiveResolution {
        &self.dual
    }

    pub fn is_terminated(&self) -> bool {
        self.dual.is_terminated()
    }

    /// Highest degree whose term is known.
    pub fn ceiling(&self) -> i32 {
        -self.dual.floor()
    }

    pub fn complex(&self) -> Result<BddComplex> {
        self.dual.complex().dual().rebase(self.source.algebra())
    }

    pub fn coaugmentation(&self) -> Result<ChainMap> {
        let i = self.complex()?;
        let comps = self.dual.gens.keys().map(|&n| (-n, self.dual.augmentation(n).transpose())).collect();
        ChainMap::unchecked(self.source.clone(), i, comps)
    }

    /// Highest degree with a nonzero term.
    pub fn highest_degree(&self) -> Option<i32> {
        self.dual.lowest_degree().map(|n| -n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{projective_module, simple_module, Quiver};
    use crate::linalg::Field;

    fn dual_numbers(f: Field) -> Arc<Algebra> {
        Quiver::parse_short(f, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap()
    }

    fn a2() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap()
    }

    #[test]
    fn simple_over_dual_numbers_is_periodic() {
        for f in [Field::Rationals, Field::prime(5).unwrap()] {
            let a = dual_numbers(f);
            let k = BddComplex::module_in_degree(&simple_module(&a, 0).unwrap(), 0);
            let r = ProjectiveResolution::compute(&k, 4).unwrap();
            r.verify().unwrap();
            assert!(!r.is_terminated());
            assert!(r.recurrence().is_some());
            for n in floor_for(4)..=0 {
                assert_eq!(r.generators(n).len(), 1, "degree {n}");
            }
        }
    }

    #[test]
    fn a2_simples_have_short_resolutions() {
        let a = a2();
        let mut lengths = Vec::new();
        for i in 0..2 {
            let s = BddComplex::module_in_degree(&simple_module(&a, i).unwrap(), 0);
            let r = ProjectiveResolution::compute(&s, 3).unwrap();
            r.verify().unwrap();
            assert!(r.is_terminated());
            lengths.push(r.lowest_degree().unwrap());
        }
        lengths.sort();
        assert_eq!(lengths, vec![-1, 0]);
    }

    #[test]
    fn projective_resolves_itself() {
        let a = a2();
        let p = BddComplex::module_in_degree(&projective_module(&a, 0).unwrap(), 2);
        let r = ProjectiveResolution::compute(&p, 3).unwrap();
        assert!(r.is_terminated());
        assert_eq!(r.ranks(), [(2, vec![0])].into());
    }

    #[test]
    fn contractible_complex_resolves_to_zero() {
        let a = dual_numbers(Field::Rationals);
        let reg = LeftModule::regular(&a);
        let id = Matrix::identity(a.field(), 2);
        let c = BddComplex::new(a.clone(), [(-1, reg.clone()), (0, reg)].into(), [(-1, id)].into()).unwrap();
        let r = ProjectiveResolution::compute(&c, 3).unwrap();
        r.verify().unwrap();
        assert!(r.is_terminated());
        assert_eq!(r.lowest_degree(), None);
    }

    #[test]
    fn complex_with_two_cohomologies() {
        // A --x--> A has cohomology k in degrees -1 and 0 and is its own minimal resolution
        let a = dual_numbers(Field::Rationals);
        let reg = LeftModule::regular(&a);
        let x = a.right_mult()[1].clone();
        let c = BddComplex::new(a.clone(), [(-1, reg.clone()), (0, reg)].into(), [(-1, x)].into()).unwrap();
        let r = ProjectiveResolution::compute(&c, 3).unwrap();
        r.verify().unwrap();
        assert!(r.is_terminated());
        assert_eq!(r.ranks(), [(-1, vec![0]), (0, vec![0])].into());
    }

    #[test]
    fn padding_and_json_roundtrip() {
        let a = dual_numbers(Field::Rationals);
        let k = BddComplex::module_in_degree(&simple_module(&a, 0).unwrap(), 0);
        let r = ProjectiveResolution::compute(&k, 3).unwrap();
        let p = r.pad(-2, 0).unwrap();
        p.verify().unwrap();
        assert!(!p.is_minimal());
        assert_eq!(p.generators(-2).len(), 2);
        let back = ProjectiveResolution::from_json(&k, &p.to_json()).unwrap();
        assert_eq!(back.ranks(), p.ranks());
        assert_eq!(back.complex(), p.complex());
    }

    #[test]
    fn injective_resolution_of_simple() {
        let a = a2();
        for i in 0..2 {
            let s = BddComplex::module_in_degree(&simple_module(&a, i).unwrap(), 0);
            let inj = InjectiveResolution::compute(&s, 3).unwrap();
            assert!(inj.is_terminated());
            let map = inj.coaugmentation().unwrap();
            map.check().unwrap();
            assert!(map.is_quasi_iso());
            assert!(inj.highest_degree().unwrap() <= 1);
        }
    }
}
