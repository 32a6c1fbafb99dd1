//! Bound quiver algebras `kQ/I` with a canonical path basis.
//!
//! Paths compose left to right: `a*b` is "a then b" and is nonzero only when
//! the target of `a` is the source of `b`. Left modules are representations
//! on which a path acts by the composite of its arrows in that order.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{Algebra, RadicalHint};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Rational, Scalar};

/// Default bound on path length when searching for a nilpotency degree.
pub const DEFAULT_LENGTH_BOUND: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// Quiver with relations, in the documented JSON layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Path {
    arrows: Vec<usize>,
    start: usize,
    end: usize,
}

impl Path {
    fn len(&self) -> usize {
        self.arrows.len()
    }
}

/// A relation as a list of (coefficient, path) terms.
type Relation = Vec<(Scalar, Path)>;

impl Quiver {
    /// Shorthand used by fixtures and tests.
    pub fn parse_short(
        field: Field,
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: &[&str],
        truncation: Option<usize>,
    ) -> Result<Arc<Algebra>> {
        let q = Quiver {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(n, f, t)| Arrow { name: n.to_string(), from: f.to_string(), to: t.to_string() })
                .collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
            truncation,
            field: None,
        };
        q.algebra(field)
    }

    pub fn algebra(&self, field: Field) -> Result<Arc<Algebra>> {
        self.algebra_with_bound(field, DEFAULT_LENGTH_BOUND)
    }

    fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::Parse(format!("unknown vertex {name:?}")))
    }

    fn validate_names(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Parse(format!("duplicate vertex {v:?}")));
            }
        }
        for a in &self.arrows {
            if !seen.insert(a.name.clone()) {
                return Err(Error::Parse(format!("duplicate name {:?}", a.name)));
            }
            self.vertex_index(&a.from)?;
            self.vertex_index(&a.to)?;
        }
        Ok(())
    }

    fn arrow_ends(&self) -> Vec<(usize, usize)> {
        self.arrows.iter().map(|a| (self.vertex_index(&a.from).unwrap(), self.vertex_index(&a.to).unwrap())).collect()
    }

    /// Builds `kQ/I`, or `kQ/(I + J^N)` when a truncation `N` is given.
    pub fn algebra_with_bound(&self, field: Field, bound: usize) -> Result<Arc<Algebra>> {
        self.validate_names()?;
        if self.vertices.is_empty() {
            return Err(Error::Parse("quiver needs at least one vertex".into()));
        }
        let ends = self.arrow_ends();
        let relations =
            self.relations.iter().map(|r| self.parse_relation(field, r, &ends)).collect::<Result<Vec<Relation>>>()?;
        let length = match self.truncation {
            Some(n) if n >= 1 => n,
            Some(_) => return Err(Error::Parse("truncation must be at least 1".into())),
            None => {
                for (r, text) in relations.iter().zip(&self.relations) {
                    let lens: std::collections::BTreeSet<usize> = r.iter().map(|(_, p)| p.len()).collect();
                    if lens.len() > 1 {
                        return Err(Error::Parse(format!(
                            "relation {text:?} mixes path lengths; give a truncation bound"
                        )));
                    }
                }
                self.graded_length(&ends, &relations, field, bound)?
            }
        };
        self.build(field, &ends, &relations, length)
    }

    fn parse_relation(&self, field: Field, text: &str, ends: &[(usize, usize)]) -> Result<Relation> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty relation".into()));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut sign = 1i64;
        let mut chars = compact.chars().peekable();
        let flush = |cur: &mut String, sign: i64, terms: &mut Vec<(i64, String)>| -> Result<()> {
            if cur.is_empty() {
                return Err(Error::Parse(format!("malformed relation {text:?}")));
            }
            terms.push((sign, std::mem::take(cur)));
            Ok(())
        };
        if let Some(&c) = chars.peek() {
            if c == '-' || c == '+' {
                sign = if c == '-' { -1 } else { 1 };
                chars.next();
            }
        }
        for c in chars {
            if c == '+' || c == '-' {
                flush(&mut cur, sign, &mut terms)?;
                sign = if c == '-' { -1 } else { 1 };
            } else {
                cur.push(c);
            }
        }
        flush(&mut cur, sign, &mut terms)?;
        let mut out: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (sign, t) in terms {
            let mut factors: Vec<&str> = t.split('*').collect();
            if factors.iter().any(|f| f.is_empty()) {
                return Err(Error::Parse(format!("malformed term {t:?} in relation {text:?}")));
            }
            let mut coef = field.from_i64(sign);
            if factors[0].chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let r: Rational = factors[0].parse().map_err(|_| Error::Parse(format!("bad coefficient in {t:?}")))?;
                let c = field
                    .from_rational(&r)
                    .ok_or_else(|| Error::Parse(format!("coefficient {r} is undefined in {field}")))?;
                coef = coef.mul_ref(&c);
                factors.remove(0);
                if factors.is_empty() {
                    return Err(Error::Parse(format!("term {t:?} has no path")));
                }
            }
            let Some(path) = self.parse_path(&factors, ends)? else { continue };
            let e = out.entry(path).or_insert_with(|| field.zero());
            *e = e.add_ref(&coef);
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect())
    }

    /// Parses factors into a path; `None` when the factors do not compose.
    fn parse_path(&self, factors: &[&str], ends: &[(usize, usize)]) -> Result<Option<Path>> {
        let mut path: Option<Path> = None;
        for name in factors {
            let step = if let Some(i) = self.arrows.iter().position(|a| a.name == *name) {
                Path { arrows: vec![i], start: ends[i].0, end: ends[i].1 }
            } else if let Some(v) = name.strip_prefix("e_").and_then(|v| self.vertices.iter().position(|x| x == v)) {
                Path { arrows: vec![], start: v, end: v }
            } else {
                return Err(Error::Parse(format!("unknown arrow {name:?}")));
            };
            path = match path {
                None => Some(step),
                Some(p) if p.end == step.start => {
                    let mut arrows = p.arrows;
                    arrows.extend(step.arrows);
                    Some(Path { arrows, start: p.start, end: step.end })
                }
                Some(_) => return Ok(None),
            };
        }
        Ok(path)
    }

    fn paths_of_length(&self, ends: &[(usize, usize)], len: usize) -> Vec<Path> {
        let mut cur: Vec<Path> = (0..self.vertices.len()).map(|v| Path { arrows: vec![], start: v, end: v }).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &cur {
                for (i, &(s, t)) in ends.iter().enumerate() {
                    if s == p.end {
                        let mut arrows = p.arrows.clone();
                        arrows.push(i);
                        next.push(Path { arrows, start: p.start, end: t });
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// First length at which the graded quotient vanishes.
    fn graded_length(&self, ends: &[(usize, usize)], rels: &[Relation], field: Field, bound: usize) -> Result<usize> {
        for len in 0..=bound {
            let paths = self.paths_of_length(ends, len);
            if paths.is_empty() {
                return Ok(len);
            }
            let index: BTreeMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let mut gens = Vec::new();
            for r in rels {
                let Some(rl) = r.first().map(|(_, p)| p.len()) else { continue };
                if rl > len {
                    continue;
                }
                for ul in 0..=len - rl {
                    let us = self.paths_of_length(ends, ul);
                    let vs = self.paths_of_length(ends, len - rl - ul);
                    for u in &us {
                        for v in &vs {
                            let mut vec = vec![field.zero(); paths.len()];
                            let mut any = false;
                            for (c, p) in r {
                                if let Some(w) = concat3(u, p, v) {
                                    let i = index[&w];
                                    vec[i] = vec[i].add_ref(c);
                                    any = true;
                                }
                            }
                            if any {
                                gens.push(vec);
                            }
                        }
                    }
                }
            }
            let rank = if gens.is_empty() { 0 } else { Matrix::from_columns(field, paths.len(), &gens).rank() };
            if rank == paths.len() {
                return Ok(len);
            }
        }
        Err(Error::InfiniteDimensional { bound })
    }

    fn build(&self, field: Field, ends: &[(usize, usize)], rels: &[Relation], length: usize) -> Result<Arc<Algebra>> {
        let paths: Vec<Path> = (0..length).flat_map(|l| self.paths_of_length(ends, l)).collect();
        let n = paths.len();
        let index: BTreeMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // ideal generators u*r*v truncated below `length`, columns in reversed order
        let rev = |i: usize| n - 1 - i;
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        for r in rels {
            for u in &paths {
                for v in &paths {
                    let mut vec = vec![field.zero(); n];
                    let mut any = false;
                    for (c, p) in r {
                        if let Some(w) = concat3(u, p, v) {
                            if let Some(&i) = index.get(&w) {
                                vec[rev(i)] = vec[rev(i)].add_ref(c);
                                any = true;
                            }
                        }
                    }
                    if any && vec.iter().any(|x| !x.is_zero()) {
                        gens.push(vec);
                    }
                }
            }
        }
        let (rref, pivots) = if gens.is_empty() {
            (Matrix::zeros(field, 0, n), Vec::new())
        } else {
            Matrix::from_columns(field, n, &gens).transpose().rref()
        };
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().map(|&p| rev(p)).collect();
        let basis: Vec<usize> = (0..n).filter(|i| !pivot_set.contains(i)).collect();
        let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        // normal form of a single path as coordinates in the basis
        let normal_form = |i: usize| -> Vec<Scalar> {
            let mut out = vec![field.zero(); basis.len()];
            if let Some(&k) = pos.get(&i) {
                out[k] = field.one();
                return out;
            }
            let row = pivots.iter().position(|&p| rev(p) == i).expect("pivot path");
            for (c, x) in rref.row(row).iter().enumerate() {
                if x.is_zero() || c == rev(i) {
                    continue;
                }
                if let Some(&k) = pos.get(&rev(c)) {
                    out[k] = out[k].sub_ref(x);
                }
            }
            out
        };
        let d = basis.len();
        let mut table = Vec::with_capacity(d * d * d);
        for &i in &basis {
            for &j in &basis {
                let (p, q) = (&paths[i], &paths[j]);
                if p.end != q.start {
                    table.extend(vec![field.zero(); d]);
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend(&q.arrows);
                let w = Path { arrows, start: p.start, end: q.end };
                match index.get(&w) {
                    Some(&k) => table.extend(normal_form(k)),
                    None => table.extend(vec![field.zero(); d]),
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        let mut idempotents = Vec::new();
        for v in 0..self.vertices.len() {
            let e = normal_form(index[&Path { arrows: vec![], start: v, end: v }]);
            unit = unit.iter().zip(&e).map(|(a, b)| a + b).collect();
            if e.iter().any(|x| !x.is_zero()) {
                idempotents.push(e);
            }
        }
        let rad_cols: Vec<Vec<Scalar>> = basis
            .iter()
            .enumerate()
            .filter(|(_, &i)| paths[i].len() > 0)
            .map(|(k, _)| {
                let mut v = vec![field.zero(); d];
                v[k] = field.one();
                v
            })
            .collect();
        let hint = RadicalHint { radical: Matrix::from_columns(field, d, &rad_cols), idempotents };
        let labels = basis.iter().map(|&i| self.label(&paths[i])).collect();
        Algebra::with_hint(field, d, table, unit, Some(labels), Some(hint))
    }

    fn label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.start])
        } else {
            p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

fn concat3(u: &Path, p: &Path, v: &Path) -> Option<Path> {
    if u.end != p.start || p.end != v.start {
        return None;
    }
    let mut arrows = u.arrows.clone();
    arrows.extend(&p.arrows);
    arrows.extend(&v.arrows);
    Some(Path { arrows, start: u.start, end: v.end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::structure::{radical, simple_modules};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn a2_has_three_paths() {
        let a = Quiver::parse_short(q(), &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["e_1", "e_2", "alpha"]);
        assert_eq!(radical(&a).unwrap().cols(), 1);
    }

    #[test]
    fn loop_with_square_relation() {
        let a = Quiver::parse_short(q(), &["1"], &[("x", "1", "1")], &["x*x"], None).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), &["e_1", "x"]);
    }

    #[test]
    fn free_loop_is_infinite() {
        let r = Quiver::parse_short(q(), &["1"], &[("x", "1", "1")], &[], None);
        assert_eq!(r.unwrap_err(), Error::InfiniteDimensional { bound: DEFAULT_LENGTH_BOUND });
    }

    #[test]
    fn truncation_bounds_free_loop() {
        let a = Quiver::parse_short(q(), &["1"], &[("x", "1", "1")], &[], Some(3)).unwrap();
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn commutative_square_relation() {
        let vs = ["1", "2", "3", "4"];
        let arrows = [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")];
        let a = Quiver::parse_short(q(), &vs, &arrows, &["a*b - c*d"], None).unwrap();
        assert_eq!(a.dim(), 9);
        let z = Quiver::parse_short(q(), &vs, &arrows, &["a*b"], None).unwrap();
        assert_eq!(z.dim(), 9);
        let both = Quiver::parse_short(q(), &vs, &arrows, &["a*b", "c*d"], None).unwrap();
        assert_eq!(both.dim(), 8);
        assert_eq!(simple_modules(&z).unwrap().len(), 4);
    }

    #[test]
    fn composition_left_to_right() {
        let a = Quiver::parse_short(q(), &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[], None).unwrap();
        let idx = |l: &str| a.labels().iter().position(|x| x == l).unwrap();
        let ab = a.mul(&a.basis_vector(idx("a")), &a.basis_vector(idx("b")));
        assert_eq!(ab, a.basis_vector(idx("a*b")));
        let ba = a.mul(&a.basis_vector(idx("b")), &a.basis_vector(idx("a")));
        assert!(ba.iter().all(Scalar::is_zero));
        let e1a = a.mul(&a.basis_vector(idx("e_1")), &a.basis_vector(idx("a")));
        assert_eq!(e1a, a.basis_vector(idx("a")));
    }

    #[test]
    fn opposite_reverses_arrow() {
        let a = Quiver::parse_short(q(), &["1", "2"], &[("alpha", "1", "2")], &[], None).unwrap();
        let rev = Quiver::parse_short(q(), &["1", "2"], &[("alpha", "2", "1")], &[], None).unwrap();
        assert_eq!(*a.opposite(), *rev);
    }

    #[test]
    fn relation_parsing_errors() {
        let vs = ["1"];
        let ar = [("x", "1", "1")];
        assert!(Quiver::parse_short(q(), &vs, &ar, &["x*y"], None).is_err());
        assert!(Quiver::parse_short(q(), &vs, &ar, &["x*x - x"], None).is_err());
        assert!(Quiver::parse_short(q(), &vs, &ar, &["x**x"], None).is_err());
        let a = Quiver::parse_short(q(), &vs, &ar, &["2*x*x - 1/2*x*x*x"], Some(6)).unwrap();
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn prime_field_relations() {
        let f = Field::prime(5).unwrap();
        let a = Quiver::parse_short(f, &["1"], &[("x", "1", "1")], &["x*x*x"], None).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(simple_modules(&a).unwrap().len(), 1);
    }
}
