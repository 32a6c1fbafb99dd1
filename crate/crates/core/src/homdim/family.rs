use std::sync::Arc;

use crate::algebra::{is_isomorphic, simple_modules, Algebra, LeftModule};
use crate::error::Result;
use crate::linalg::{Echelon, Matrix, Scalar};

/// A labelled module of the finitistic-dimension search family.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: String,
    pub module: LeftModule,
}

/// Parameters of the deterministic search family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    /// Largest module dimension kept.
    pub max_dim: usize,
    /// Number of iterated extensions of simples.
    pub extension_depth: usize,
    /// Most basis elements generating a left ideal `J̄` in the quotients `A/J̄`.
    pub ideal_generators: usize,
}

impl FamilySpec {
    pub fn new(max_dim: usize) -> Self {
        FamilySpec { max_dim, extension_depth: 2, ideal_generators: 2 }
    }

    pub fn describe(&self) -> String {
        format!(
            "simples, up to {} iterated extensions by Ext^1 basis classes, A/J for left ideals on at most {} basis elements; dim <= {}",
            self.extension_depth, self.ideal_generators, self.max_dim
        )
    }
}

/// Basis of `Ext^1_A(M, N)` as derivations `δ: A -> Hom_K(M, N)` modulo inner ones.
/// Each returned entry lists `δ(e_a)` for every basis element `e_a`.
pub fn ext1_classes(m: &LeftModule, n: &LeftModule) -> Vec<Vec<Matrix>> {
    let a = m.algebra();
    let f = a.field();
    let (d, p, q) = (a.dim(), n.dim(), m.dim());
    let block = p * q;
    if block == 0 {
        return Vec::new();
    }
    let var = |x: usize, r: usize, c: usize| x * block + r * q + c;
    let gens = a.generators();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    // δ(g e_j) = ρ_N(g) δ(e_j) + δ(g) ρ_M(e_j) for generators g; δ(1) = 0
    for &g in gens {
        let ng = &n.action()[g];
        for j in 0..d {
            let mj = &m.action()[j];
            for r in 0..p {
                for c in 0..q {
                    let mut row = vec![f.zero(); d * block];
                    for k in 0..d {
                        let v = a.c(g, j, k);
                        if !v.is_zero() {
                            row[var(k, r, c)] = row[var(k, r, c)].add_ref(v);
                        }
                    }
                    for s in 0..p {
                        let v = ng.get(r, s);
                        if !v.is_zero() {
                            row[var(j, s, c)] = row[var(j, s, c)].sub_ref(v);
                        }
                    }
                    for s in 0..q {
                        let v = mj.get(s, c);
                        if !v.is_zero() {
                            row[var(g, r, s)] = row[var(g, r, s)].sub_ref(v);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    for r in 0..p {
        for c in 0..q {
            let mut row = vec![f.zero(); d * block];
            for (x, u) in a.unit().iter().enumerate() {
                row[var(x, r, c)] = u.clone();
            }
            rows.push(row);
        }
    }
    let sys = Matrix::from_fn(f, rows.len(), d * block, |i, j| rows[i][j].clone());
    let der = sys.kernel();
    let mut span = Echelon::new(f, d * block);
    for r in 0..p {
        for c in 0..q {
            let mut h = Matrix::zeros(f, p, q);
            h.set(r, c, f.one());
            let mut v = vec![f.zero(); d * block];
            for x in 0..d {
                let inner = &(&n.action()[x] * &h) - &(&h * &m.action()[x]);
                for rr in 0..p {
                    for cc in 0..q {
                        v[var(x, rr, cc)] = inner.get(rr, cc).clone();
                    }
                }
            }
            span.insert(&v);
        }
    }
    let mut classes = Vec::new();
    for col in 0..der.cols() {
        let v = der.column(col);
        if span.insert(&v) {
            classes.push((0..d).map(|x| Matrix::from_flat(f, p, q, &v[x * block..(x + 1) * block])).collect());
        }
    }
    classes
}

/// The extension `0 -> N -> E -> M -> 0` with `ρ_E(a) = [[ρ_N(a), δ(a)], [0, ρ_M(a)]]`.
pub fn extension_module(m: &LeftModule, n: &LeftModule, delta: &[Matrix]) -> Result<LeftModule> {
    let f = m.field();
    let (p, q) = (n.dim(), m.dim());
    let action = (0..m.algebra().dim())
        .map(|x| {
            let mut e = Matrix::zeros(f, p + q, p + q);
            e.set_block(0, 0, &n.action()[x]);
            e.set_block(0, p, &delta[x]);
            e.set_block(p, p, &m.action()[x]);
            e
        })
        .collect();
    LeftModule::new(m.algebra().clone(), action)
}

fn push_new(out: &mut Vec<FamilyMember>, label: String, module: LeftModule) -> Result<bool> {
    if module.dim() == 0 {
        return Ok(false);
    }
    for o in out.iter() {
        if o.module.dim() == module.dim() && is_isomorphic(&o.module, &module)? {
            return Ok(false);
        }
    }
    out.push(FamilyMember { label, module });
    Ok(true)
}

/// Deterministic family: simples, iterated extensions and cyclic quotients `A/J̄`, up to isomorphism.
pub fn test_family(a: &Arc<Algebra>, spec: FamilySpec) -> Result<Vec<FamilyMember>> {
    let simples = simple_modules(a)?;
    let mut out = Vec::new();
    let mut layer = Vec::new();
    for (i, s) in simples.iter().enumerate() {
        if s.dim() <= spec.max_dim && push_new(&mut out, format!("S{i}"), s.clone())? {
            layer.push(out.len() - 1);
        }
    }
    for _ in 0..spec.extension_depth {
        let mut next = Vec::new();
        for &x in &layer {
            for (i, s) in simples.iter().enumerate() {
                if out[x].module.dim() + s.dim() > spec.max_dim {
                    continue;
                }
                let xm = out[x].module.clone();
                let xl = out[x].label.clone();
                // X as quotient with S below, then S as quotient with X below
                for (top, bottom, name) in [(&xm, s, format!("E({xl}|S{i})")), (s, &xm, format!("E(S{i}|{xl})"))] {
                    for (c, delta) in ext1_classes(top, bottom).iter().enumerate() {
                        let e = extension_module(top, bottom, delta)?;
                        if push_new(&mut out, format!("{name}#{c}"), e)? {
                            next.push(out.len() - 1);
                        }
                    }
                }
            }
        }
        layer = next;
    }
    let reg = LeftModule::regular(a);
    let d = a.dim();
    let f = a.field();
    let mut ideals: Vec<Vec<usize>> = vec![Vec::new()];
    for x in 0..d {
        ideals.push(vec![x]);
        if spec.ideal_generators >= 2 {
            for y in x + 1..d {
                ideals.push(vec![x, y]);
            }
        }
    }
    for gens in ideals {
        let vecs = Matrix::from_fn(f, d, gens.len(), |r, c| if r == gens[c] { f.one() } else { f.zero() });
        let j = reg.generated_subspace(&vecs);
        if d - j.cols() > spec.max_dim {
            continue;
        }
        let (quo, _) = reg.quotient(&j)?;
        let names: Vec<&str> = gens.iter().map(|&g| a.labels()[g].as_str()).collect();
        let label = if names.is_empty() { "A".to_string() } else { format!("A/({})", names.join(",")) };
        push_new(&mut out, label, quo)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{simple_module, Quiver};
    use crate::linalg::Field;

    #[test]
    fn ext1_dimensions() {
        let a2 = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let s: Vec<LeftModule> = (0..2).map(|i| simple_module(&a2, i).unwrap()).collect();
        let total: usize =
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| ext1_classes(&s[i], &s[j]).len()).sum();
        assert_eq!(total, 1);
        let k = Quiver::parse_short(Field::prime(5).unwrap(), &["1"], &[("x", "1", "1")], &["x*x*x"], None).unwrap();
        let s = simple_module(&k, 0).unwrap();
        let cls = ext1_classes(&s, &s);
        assert_eq!(cls.len(), 1);
        let e = extension_module(&s, &s, &cls[0]).unwrap();
        e.check().unwrap();
        assert_eq!(ext1_classes(&e, &s).len(), 1);
    }

    #[test]
    fn families_are_deduplicated_and_monotone() {
        let a = Quiver::parse_short(Field::Rationals, &["1"], &[("x", "1", "1")], &["x*x*x"], None).unwrap();
        let fam = test_family(&a, FamilySpec::new(6)).unwrap();
        // k, k[x]/x^2, k[x]/x^3 are the only indecomposables
        let dims: Vec<usize> = fam.iter().map(|m| m.module.dim()).collect();
        assert_eq!(dims.len(), 3, "{:?}", fam.iter().map(|m| &m.label).collect::<Vec<_>>());
        for d in 1..=3 {
            assert!(dims.contains(&d));
        }
        let a2 = Quiver::parse_short(Field::Rationals, &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let small = test_family(&a2, FamilySpec::new(1)).unwrap();
        let big = test_family(&a2, FamilySpec::new(6)).unwrap();
        assert_eq!(small.len(), 2);
        assert!(big.len() >= 3);
        for m in &small {
            assert!(big.iter().any(|b| is_isomorphic(&b.module, &m.module).unwrap()));
        }
    }
}
