use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{combine, Algebra};
use crate::error::{Error, Result};
use crate::linalg::{Coords, Echelon, Field, Matrix, Scalar};

/// Left module given by one action matrix per algebra basis element.
#[derive(Clone)]
pub struct LeftModule {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Arc<Vec<Matrix>>,
}

impl std::fmt::Debug for LeftModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LeftModule(dim {} over {:?})", self.dim, self.algebra)
    }
}

impl PartialEq for LeftModule {
    fn eq(&self, o: &Self) -> bool {
        same_algebra(&self.algebra, &o.algebra) && self.dim == o.dim && self.action == o.action
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Indices of standard basis vectors completing the column span of `sub`.
pub(crate) fn complement_indices(sub: &Matrix, n: usize) -> Vec<usize> {
    let mut e = Echelon::from_columns(sub);
    let f = sub.field();
    (0..n)
        .filter(|&i| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            e.insert(&v)
        })
        .collect()
}

impl LeftModule {
    /// Validates shapes and the unital homomorphism property.
    pub fn new(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<LeftModule> {
        let m = Self::unchecked(algebra, action)?;
        m.check()?;
        Ok(m)
    }

    /// Checks shapes only; used for modules built by constructions that preserve the axioms.
    pub fn unchecked(algebra: Arc<Algebra>, action: Vec<Matrix>) -> Result<LeftModule> {
        if action.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = action.first().map_or(0, Matrix::rows);
        if action.iter().any(|a| a.rows() != dim || a.cols() != dim || a.field() != algebra.field()) {
            return Err(Error::ShapeMismatch("action matrices must be square of a common size".into()));
        }
        if algebra.dim() == 0 && dim != 0 {
            return Err(Error::ShapeMismatch("module over the zero algebra must be zero".into()));
        }
        Ok(LeftModule { algebra, dim, action: Arc::new(action) })
    }

    pub fn check(&self) -> Result<()> {
        let a = &self.algebra;
        let f = a.field();
        if self.act(a.unit()) != Matrix::identity(f, self.dim) {
            return Err(Error::InvalidStructure("unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let prod = a.mul(&a.basis_vector(i), &a.basis_vector(j));
                if &self.action[i] * &self.action[j] != self.act(&prod) {
                    return Err(Error::InvalidStructure(format!(
                        "action is not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> LeftModule {
        let f = algebra.field();
        let action = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        LeftModule { algebra, dim: 0, action: Arc::new(action) }
    }

    pub fn regular(algebra: &Arc<Algebra>) -> LeftModule {
        LeftModule { algebra: algebra.clone(), dim: algebra.dim(), action: Arc::new(algebra.left_mult().to_vec()) }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act(&self, x: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim, &self.action, x)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn direct_sum(&self, other: &LeftModule) -> Result<LeftModule> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let action = self.action.iter().zip(other.action.iter()).map(|(a, b)| a.block_diag(b)).collect();
        Ok(LeftModule { algebra: self.algebra.clone(), dim: self.dim + other.dim, action: Arc::new(action) })
    }

    pub fn direct_sum_all(algebra: &Arc<Algebra>, mods: &[LeftModule]) -> Result<LeftModule> {
        mods.iter().try_fold(LeftModule::zero(algebra.clone()), |acc, m| acc.direct_sum(m))
    }

    /// Smallest submodule containing the given vectors, as basis columns.
    pub fn generated_subspace(&self, vectors: &Matrix) -> Matrix {
        let mut e = Echelon::new(self.field(), self.dim);
        let mut frontier = Vec::new();
        for c in 0..vectors.cols() {
            let v = vectors.column(c);
            if e.insert(&v) {
                frontier.push(v);
            }
        }
        let gens = self.algebra.generators();
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.action[g].apply(&v);
                if e.insert(&w) {
                    frontier.push(w);
                }
            }
        }
        e.basis()
    }

    /// Whether the column span of `basis` is closed under the action.
    pub fn is_submodule(&self, basis: &Matrix) -> bool {
        let e = Echelon::from_columns(basis);
        self.algebra
            .generators()
            .iter()
            .all(|&g| (0..basis.cols()).all(|c| e.contains(&self.action[g].apply(&basis.column(c)))))
    }

    /// Submodule on independent columns spanning a submodule, with the inclusion.
    pub fn submodule(&self, basis: &Matrix) -> Result<(LeftModule, Matrix)> {
        let basis = basis.column_basis();
        if !self.is_submodule(&basis) {
            return Err(Error::InvalidStructure("subspace is not a submodule".into()));
        }
        if basis.cols() == 0 {
            return Ok((LeftModule::zero(self.algebra.clone()), Matrix::zeros(self.field(), self.dim, 0)));
        }
        let c = Coords::new(&basis);
        let action = self.action.iter().map(|a| c.coords_matrix(&(a * &basis))).collect();
        Ok((LeftModule { algebra: self.algebra.clone(), dim: basis.cols(), action: Arc::new(action) }, basis))
    }

    /// Quotient by the submodule spanned by `sub`, with the projection matrix.
    pub fn quotient(&self, sub: &Matrix) -> Result<(LeftModule, Matrix)> {
        let sub = sub.column_basis();
        if !self.is_submodule(&sub) {
            return Err(Error::InvalidStructure("subspace is not a submodule".into()));
        }
        let f = self.field();
        let comp_idx = complement_indices(&sub, self.dim);
        let comp = Matrix::identity(f, self.dim).select_columns(&comp_idx);
        let full = comp.hstack(&sub);
        let inv = full.inverse().expect("complement completes a basis");
        let q = comp.cols();
        let proj = inv.block(0, q, 0, self.dim);
        let action = self.action.iter().map(|a| &(&proj * a) * &comp).collect();
        Ok((LeftModule { algebra: self.algebra.clone(), dim: q, action: Arc::new(action) }, proj))
    }

    /// `K / I` for submodules `I ⊆ K` given by spanning columns.
    pub fn subquotient(&self, k: &Matrix, i: &Matrix) -> Result<LeftModule> {
        let (km, incl) = self.submodule(k)?;
        if km.dim == 0 {
            return Ok(km);
        }
        let c = Coords::new(&incl);
        let mut icoords = Vec::new();
        for col in 0..i.cols() {
            let v = c
                .coords_checked(&i.column(col))
                .ok_or_else(|| Error::InvalidStructure("subquotient: I is not inside K".into()))?;
            icoords.push(v);
        }
        let im = Matrix::from_columns(self.field(), km.dim, &icoords);
        Ok(km.quotient(&im)?.0)
    }

    /// The `k`-dual `Hom_k(M, k)` as a left module over the opposite algebra.
    pub fn dual(&self) -> LeftModule {
        let op = self.algebra.opposite();
        let action = self.action.iter().map(Matrix::transpose).collect();
        LeftModule { algebra: op, dim: self.dim, action: Arc::new(action) }
    }

    /// Reinterprets the module over an equal algebra object.
    pub fn rebase(&self, algebra: &Arc<Algebra>) -> Result<LeftModule> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(LeftModule { algebra: algebra.clone(), dim: self.dim, action: self.action.clone() })
    }

    /// Subspace `e·M` for an element `e`, as basis columns.
    pub fn image_of(&self, x: &[Scalar]) -> Matrix {
        self.act(x).column_basis()
    }

    /// Module obtained by pulling back along the algebra map with matrix `phi: other -> self.algebra`.
    pub fn restrict(&self, other: &Arc<Algebra>, phi: &Matrix) -> Result<LeftModule> {
        if phi.rows() != self.algebra.dim() || phi.cols() != other.dim() {
            return Err(Error::ShapeMismatch("restriction map has the wrong shape".into()));
        }
        let action = (0..other.dim()).map(|i| self.act(&phi.column(i))).collect();
        LeftModule::unchecked(other.clone(), action)
    }

    /// JSON form `{"dimension", "action"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dimension": self.dim,
            "action": self.action.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(algebra: &Arc<Algebra>, v: &serde_json::Value) -> Result<LeftModule> {
        let dim = v
            .get("dimension")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| Error::Parse("module needs an integer \"dimension\"".into()))? as usize;
        let acts = v
            .get("action")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::Parse("module needs an \"action\" array".into()))?;
        let action = acts.iter().map(|m| Matrix::from_json(algebra.field(), m)).collect::<Result<Vec<_>>>()?;
        let m = LeftModule::new(algebra.clone(), action)?;
        if m.dim != dim && algebra.dim() > 0 {
            return Err(Error::ShapeMismatch(format!("declared dimension {dim}, action matrices have {}", m.dim)));
        }
        Ok(m)
    }
}

/// Module homomorphism with its source and target.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: LeftModule,
    pub target: LeftModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: LeftModule, target: LeftModule, matrix: Matrix) -> Result<ModuleMap> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::ShapeMismatch("module map matrix has the wrong shape".into()));
        }
        if !is_equivariant(&source, &target, &matrix) {
            return Err(Error::InvalidStructure("matrix is not equivariant".into()));
        }
        Ok(ModuleMap { source, target, matrix })
    }
}

pub fn is_equivariant(src: &LeftModule, tgt: &LeftModule, m: &Matrix) -> bool {
    src.algebra().generators().iter().all(|&g| m * &src.action()[g] == &tgt.action()[g] * m)
}

/// Kernel basis of the stacked linear constraints on the candidate matrices.
fn restrict_candidates(src: &LeftModule, tgt: &LeftModule, mut cands: Vec<Matrix>) -> Vec<Matrix> {
    let f = src.field();
    let (n, m) = (tgt.dim(), src.dim());
    for &g in src.algebra().generators() {
        if cands.is_empty() {
            break;
        }
        let (rs, rt) = (&src.action()[g], &tgt.action()[g]);
        let cols: Vec<Vec<Scalar>> = cands.iter().map(|c| (&(c * rs) - &(rt * c)).flatten()).collect();
        let cmat = Matrix::from_columns(f, n * m, &cols);
        let ker = cmat.kernel();
        if ker.cols() == cands.len() {
            continue;
        }
        cands = (0..ker.cols())
            .map(|k| {
                let mut acc = Matrix::zeros(f, n, m);
                for (t, c) in cands.iter().enumerate() {
                    let s = ker.get(t, k);
                    if !s.is_zero() {
                        acc = &acc + &c.scale(s);
                    }
                }
                acc
            })
            .collect();
    }
    cands
}

/// Basis of `Hom_A(M, N)` as matrices `N.dim x M.dim`.
pub fn hom_space(src: &LeftModule, tgt: &LeftModule) -> Result<Vec<Matrix>> {
    if !same_algebra(src.algebra(), tgt.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let f = src.field();
    let (n, m) = (tgt.dim(), src.dim());
    if n == 0 || m == 0 {
        return Ok(Vec::new());
    }
    let cands = match src.algebra().structure() {
        Ok(st) => {
            // f maps e M into e N for each idempotent of a complete orthogonal set
            let mut cands = Vec::new();
            for e in st.complete_idempotents() {
                let es = src.act(e);
                let bs = es.column_basis();
                if bs.cols() == 0 {
                    continue;
                }
                let proj = Coords::new(&bs).coords_matrix(&es);
                let bt = tgt.act(e).column_basis();
                for r in 0..bt.cols() {
                    for c in 0..proj.rows() {
                        cands.push(Matrix::from_fn(f, n, m, |i, j| bt.get(i, r).mul_ref(proj.get(c, j))));
                    }
                }
            }
            cands
        }
        Err(_) => (0..n * m)
            .map(|idx| {
                let mut z = Matrix::zeros(f, n, m);
                z.set(idx / m, idx % m, f.one());
                z
            })
            .collect(),
    };
    Ok(restrict_candidates(src, tgt, cands))
}

/// Whether M and N are isomorphic.
///
/// Tests invertibility of seeded random combinations of a Hom basis, and
/// over small prime fields falls back to exhaustive enumeration.
pub fn is_isomorphic(a: &LeftModule, b: &LeftModule) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    if a.dim() == 0 {
        return Ok(true);
    }
    let hom = hom_space(a, b)?;
    Ok(find_invertible(a.field(), &hom).is_some())
}

/// An invertible element of the span of `basis`, if one is found.
pub fn find_invertible(f: Field, basis: &[Matrix]) -> Option<Matrix> {
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let combo = |coef: &[Scalar]| {
        let mut acc = Matrix::zeros(f, basis[0].rows(), basis[0].cols());
        for (m, c) in basis.iter().zip(coef) {
            if !c.is_zero() {
                acc = &acc + &m.scale(c);
            }
        }
        acc
    };
    for b in basis {
        if b.is_invertible() {
            return Some(b.clone());
        }
    }
    for _ in 0..24 {
        let coef: Vec<Scalar> = match f {
            Field::Rationals => basis.iter().map(|_| f.from_i64(rng.gen_range(-1_000_000..=1_000_000))).collect(),
            Field::Prime { p } => basis.iter().map(|_| f.from_i64(rng.gen_range(0..p as i64))).collect(),
        };
        let m = combo(&coef);
        if m.is_invertible() {
            return Some(m);
        }
    }
    if let Field::Prime { p } = f {
        let total = (p as u64).checked_pow(basis.len() as u32).filter(|&t| t <= 200_000);
        if let Some(total) = total {
            for idx in 0..total {
                let mut x = idx;
                let coef: Vec<Scalar> = (0..basis.len())
                    .map(|_| {
                        let v = x % p as u64;
                        x /= p as u64;
                        f.from_i64(v as i64)
                    })
                    .collect();
                let m = combo(&coef);
                if m.is_invertible() {
                    return Some(m);
                }
            }
        }
    }
    None
}

/// Bimodule over a single algebra: left and right actions commuting.
#[derive(Clone)]
pub struct Bimodule {
    algebra: Arc<Algebra>,
    dim: usize,
    left: Arc<Vec<Matrix>>,
    right: Arc<Vec<Matrix>>,
}

impl std::fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bimodule(dim {} over {:?})", self.dim, self.algebra)
    }
}

impl PartialEq for Bimodule {
    fn eq(&self, o: &Self) -> bool {
        same_algebra(&self.algebra, &o.algebra) && self.left == o.left && self.right == o.right
    }
}

impl Bimodule {
    /// `right[i]` is the matrix of `x -> x·e_i`.
    pub fn new(algebra: Arc<Algebra>, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Bimodule> {
        let l = LeftModule::new(algebra.clone(), left)?;
        let r = LeftModule::new(algebra.opposite(), right)?;
        if l.dim() != r.dim() {
            return Err(Error::ShapeMismatch("left and right carriers differ in dimension".into()));
        }
        let b = Bimodule { algebra, dim: l.dim(), left: l.action.clone(), right: r.action.clone() };
        for i in 0..b.algebra.dim() {
            for j in 0..b.algebra.dim() {
                if &b.left[i] * &b.right[j] != &b.right[j] * &b.left[i] {
                    return Err(Error::InvalidStructure(format!(
                        "left action of basis {i} does not commute with right action of basis {j}"
                    )));
                }
            }
        }
        Ok(b)
    }

    pub(crate) fn unchecked(algebra: Arc<Algebra>, left: Vec<Matrix>, right: Vec<Matrix>) -> Bimodule {
        let dim = left.first().map_or(0, Matrix::rows);
        Bimodule { algebra, dim, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn zero(algebra: Arc<Algebra>) -> Bimodule {
        let z = vec![Matrix::zeros(algebra.field(), 0, 0); algebra.dim()];
        Bimodule::unchecked(algebra, z.clone(), z)
    }

    /// `A` as a bimodule over itself.
    pub fn regular(algebra: &Arc<Algebra>) -> Bimodule {
        Bimodule::unchecked(algebra.clone(), algebra.left_mult().to_vec(), algebra.right_mult().to_vec())
    }

    /// `DA = Hom_k(A, k)`, with `(a·f)(x) = f(x·a)` and `(f·b)(x) = f(b·x)`.
    pub fn dual_of_algebra(algebra: &Arc<Algebra>) -> Bimodule {
        let left = algebra.right_mult().iter().map(Matrix::transpose).collect();
        let right = algebra.left_mult().iter().map(Matrix::transpose).collect();
        Bimodule::unchecked(algebra.clone(), left, right)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right(&self) -> &[Matrix] {
        &self.right
    }

    pub fn left_act(&self, x: &[Scalar]) -> Matrix {
        combine(self.algebra.field(), self.dim, &self.left, x)
    }

    pub fn right_act(&self, x: &[Scalar]) -> Matrix {
        combine(self.algebra.field(), self.dim, &self.right, x)
    }

    /// Underlying left module.
    pub fn res_left(&self) -> LeftModule {
        LeftModule { algebra: self.algebra.clone(), dim: self.dim, action: self.left.clone() }
    }

    /// Underlying right module, as a left module over the opposite algebra.
    pub fn res_right(&self) -> LeftModule {
        LeftModule { algebra: self.algebra.opposite(), dim: self.dim, action: self.right.clone() }
    }

    /// The same bimodule seen over the opposite algebra (actions swapped).
    pub fn swap(&self) -> Bimodule {
        Bimodule { algebra: self.algebra.opposite(), dim: self.dim, left: self.right.clone(), right: self.left.clone() }
    }

    pub fn direct_sum(&self, o: &Bimodule) -> Result<Bimodule> {
        if !same_algebra(&self.algebra, &o.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let left = self.left.iter().zip(o.left.iter()).map(|(a, b)| a.block_diag(b)).collect();
        let right = self.right.iter().zip(o.right.iter()).map(|(a, b)| a.block_diag(b)).collect();
        Ok(Bimodule::unchecked(self.algebra.clone(), left, right))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dimension": self.dim,
            "left_action": self.left.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "right_action": self.right.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(algebra: &Arc<Algebra>, v: &serde_json::Value) -> Result<Bimodule> {
        let get = |key: &str| -> Result<Vec<Matrix>> {
            v.get(key)
                .and_then(|a| a.as_array())
                .ok_or_else(|| Error::Parse(format!("bimodule needs a \"{key}\" array")))?
                .iter()
                .map(|m| Matrix::from_json(algebra.field(), m))
                .collect()
        };
        Bimodule::new(algebra.clone(), get("left_action")?, get("right_action")?)
    }
}

/// Whether `m` is a bimodule map between the two bimodules.
pub fn is_bi_equivariant(src: &Bimodule, tgt: &Bimodule, m: &Matrix) -> bool {
    src.algebra()
        .generators()
        .iter()
        .all(|&g| m * &src.left()[g] == &tgt.left()[g] * m && m * &src.right()[g] == &tgt.right()[g] * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quiver::Quiver;

    fn dual_numbers() -> Arc<Algebra> {
        Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap()
    }

    #[test]
    fn regular_module_valid() {
        let a = dual_numbers();
        LeftModule::regular(&a).check().unwrap();
    }

    #[test]
    fn bad_action_rejected() {
        let a = dual_numbers();
        let f = a.field();
        // x acting invertibly violates x^2 = 0
        let r = LeftModule::new(a, vec![Matrix::identity(f, 1), Matrix::identity(f, 1)]);
        assert!(r.is_err());
    }

    #[test]
    fn dual_of_symmetric_algebra_is_regular() {
        let a = dual_numbers();
        let da = Bimodule::dual_of_algebra(&a);
        Bimodule::new(a.clone(), da.left().to_vec(), da.right().to_vec()).unwrap();
        assert!(is_isomorphic(&da.res_left(), &LeftModule::regular(&a)).unwrap());
        // bimodule isomorphism: some invertible map equivariant on both sides
        let reg = Bimodule::regular(&a);
        let hom = hom_space(&reg.res_left(), &da.res_left()).unwrap();
        let bi: Vec<Matrix> = hom.into_iter().filter(|m| is_bi_equivariant(&reg, &da, m)).collect();
        assert!(bi.iter().any(Matrix::is_invertible));
    }

    #[test]
    fn dual_of_opposite_swaps_actions() {
        let a = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("a", "1", "2")], &[], None).unwrap();
        let d_op = Bimodule::dual_of_algebra(&a.opposite());
        let swapped = Bimodule::dual_of_algebra(&a).swap();
        assert_eq!(d_op.left(), swapped.left());
        assert_eq!(d_op.right(), swapped.right());
    }

    #[test]
    fn hom_and_iso() {
        let a = dual_numbers();
        let reg = LeftModule::regular(&a);
        assert_eq!(hom_space(&reg, &reg).unwrap().len(), 2);
        let s = crate::algebra::simple_module(&a, 0).unwrap();
        assert_eq!(hom_space(&reg, &s).unwrap().len(), 1);
        assert_eq!(hom_space(&s, &reg).unwrap().len(), 1);
        assert!(!is_isomorphic(&reg, &s.direct_sum(&s).unwrap()).unwrap());
    }

    #[test]
    fn submodule_and_quotient() {
        let a = dual_numbers();
        let reg = LeftModule::regular(&a);
        let x = Matrix::column_vector(a.field(), &a.basis_vector(1));
        let (sub, _) = reg.submodule(&x).unwrap();
        let (quo, proj) = reg.quotient(&x).unwrap();
        assert_eq!((sub.dim(), quo.dim(), proj.rows()), (1, 1, 1));
        let one = Matrix::column_vector(a.field(), &a.basis_vector(0));
        assert!(reg.quotient(&one).is_err());
        assert_eq!(reg.generated_subspace(&one).cols(), 2);
    }
}
