//! Reading the documented JSON inputs, bundled fixtures and named targets.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::Value;

use crate::algebra::{injective_module, projective_module, simple_module, Algebra, Bimodule, LeftModule, Quiver};
use crate::complex::{BddComplex, BimoduleComplex};
use crate::dg::{DGModule, DGRing};
use crate::error::{Error, Result};
use crate::homdim::dg_simple_tests;
use crate::linalg::Field;

/// A fixture shipped inside the binary.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal, $file:literal) => {
        Fixture { name: $name, text: include_str!(concat!("../../fixtures/", $file)) }
    };
}

const FIXTURES: [Fixture; 14] = [
    fixture!("k-q", "k_q.json"),
    fixture!("k-f5", "k_f5.json"),
    fixture!("kxk-q", "kxk_q.json"),
    fixture!("kxk-f5", "kxk_f5.json"),
    fixture!("dual-q", "dual_q.json"),
    fixture!("dual-f5", "dual_f5.json"),
    fixture!("cubic-q", "cubic_q.json"),
    fixture!("cubic-f5", "cubic_f5.json"),
    fixture!("a2-q", "a2_q.json"),
    fixture!("a2-f5", "a2_f5.json"),
    fixture!("a3-q", "a3_q.json"),
    fixture!("a3-f5", "a3_f5.json"),
    fixture!("square-q", "square_q.json"),
    fixture!("square-f5", "square_f5.json"),
];

/// The bundled corpus in its fixed order.
pub fn fixtures() -> &'static [Fixture] {
    &FIXTURES
}

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    let alias = name.replace('_', "-");
    FIXTURES.iter().find(|f| f.name == alias)
}

impl Fixture {
    pub fn value(&self) -> Value {
        serde_json::from_str(self.text).expect("bundled fixtures are valid JSON")
    }

    pub fn algebra(&self) -> Result<Arc<Algebra>> {
        algebra_from_value(&self.value(), Field::Rationals)
    }

    /// Hand-computed values stored next to the presentation.
    pub fn oracle(&self) -> Value {
        self.value().get("oracle").cloned().unwrap_or(Value::Null)
    }
}

pub fn parse_json(text: &str, origin: &str) -> Result<Value> {
    if text.trim().is_empty() {
        return Err(Error::Parse(format!("{origin}: empty input")));
    }
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

/// A document given as a path or a bundled fixture name, with its directory.
pub fn load_value(spec: &str) -> Result<(Value, Option<PathBuf>)> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        let dir = path.parent().map(Path::to_path_buf);
        return Ok((parse_json(&text, spec)?, dir));
    }
    if let Some(f) = fixture(spec) {
        return Ok((f.value(), None));
    }
    Err(Error::Io(format!("{spec}: no such file or bundled fixture")))
}

pub fn is_algebra_doc(v: &Value) -> bool {
    v.get("structure_constants").is_some()
}

pub fn is_quiver_doc(v: &Value) -> bool {
    v.get("vertices").is_some()
}

pub fn is_dgring_doc(v: &Value) -> bool {
    v.get("mult").is_some() || (v.get("degrees").is_some() && v.get("unit").is_some())
}

/// Algebra JSON or quiver JSON; quivers without a field use `default_field`.
pub fn algebra_from_value(v: &Value, default_field: Field) -> Result<Arc<Algebra>> {
    if is_algebra_doc(v) {
        return Algebra::from_json(v);
    }
    if is_quiver_doc(v) {
        let q: Quiver = serde_json::from_value(v.clone())?;
        let field = match q.field {
            Some(f) => f.validate()?,
            None => default_field,
        };
        return q.algebra(field);
    }
    Err(Error::Parse("expected algebra or quiver JSON".into()))
}

pub fn load_algebra(spec: &str, default_field: Field) -> Result<Arc<Algebra>> {
    algebra_from_value(&load_value(spec)?.0, default_field)
}

/// DG-ring JSON, or an algebra viewed as a DG-ring in degree 0.
pub fn dgring_from_value(v: &Value, default_field: Field) -> Result<Arc<DGRing>> {
    if is_dgring_doc(v) {
        return DGRing::from_json(v);
    }
    Ok(DGRing::from_algebra(&algebra_from_value(v, default_field)?))
}

pub fn load_dgring(spec: &str, default_field: Field) -> Result<Arc<DGRing>> {
    dgring_from_value(&load_value(spec)?.0, default_field)
}

/// Resolves the `"algebra"` reference of a document: embedded, relative path or fixture.
pub fn referenced_algebra(v: &Value, dir: Option<&Path>, default_field: Field) -> Result<Option<Arc<Algebra>>> {
    match v.get("algebra") {
        None => Ok(None),
        Some(Value::String(s)) => {
            let rel = dir.map(|d| d.join(s)).filter(|p| p.exists());
            let spec = rel.map(|p| p.to_string_lossy().into_owned()).unwrap_or_else(|| s.clone());
            load_algebra(&spec, default_field).map(Some)
        }
        Some(obj) => algebra_from_value(obj, default_field).map(Some),
    }
}

/// Same for the `"ring"` reference of a DG-module document.
pub fn referenced_ring(v: &Value, dir: Option<&Path>, default_field: Field) -> Result<Option<Arc<DGRing>>> {
    match v.get("ring") {
        None => Ok(None),
        Some(Value::String(s)) => {
            let rel = dir.map(|d| d.join(s)).filter(|p| p.exists());
            let spec = rel.map(|p| p.to_string_lossy().into_owned()).unwrap_or_else(|| s.clone());
            load_dgring(&spec, default_field).map(Some)
        }
        Some(obj) => dgring_from_value(obj, default_field).map(Some),
    }
}

/// Splits `name@n` into the name and the degree `n` (default 0).
fn split_degree(spec: &str) -> Result<(&str, i32)> {
    match spec.rsplit_once('@') {
        Some((name, d)) => {
            let n = d.trim().parse().map_err(|_| Error::Parse(format!("invalid degree in target {spec:?}")))?;
            Ok((name, n))
        }
        None => Ok((spec, 0)),
    }
}

fn indexed(name: &str, prefix: &str) -> Result<Option<usize>> {
    match name.strip_prefix(prefix).and_then(|r| r.strip_prefix(':')) {
        Some(i) => i.trim().parse().map(Some).map_err(|_| Error::Parse(format!("invalid index in {name:?}"))),
        None => Ok(None),
    }
}

/// A left module named `regular`, `dual`, `simple:i`, `projective:i` or `injective:i`.
pub fn named_module(a: &Arc<Algebra>, name: &str) -> Result<Option<LeftModule>> {
    if name == "regular" {
        return Ok(Some(LeftModule::regular(a)));
    }
    if name == "dual" {
        let da = BimoduleComplex::bimodule_in_degree(&Bimodule::dual_of_algebra(a), 0).res_left();
        return Ok(Some(da.term(0)));
    }
    let count = a.structure()?.simple_count();
    for (prefix, build) in [
        ("simple", simple_module as fn(&Arc<Algebra>, usize) -> Result<LeftModule>),
        ("projective", projective_module),
        ("injective", injective_module),
    ] {
        if let Some(i) = indexed(name, prefix)? {
            if i >= count {
                return Err(Error::Parse(format!("{name:?}: the algebra has {count} simple modules")));
            }
            return build(a, i).map(Some);
        }
    }
    Ok(None)
}

/// A complex over `a`: a named module placed in a degree (`name@n`) or a module/complex file.
pub fn target_complex(a: &Arc<Algebra>, spec: &str) -> Result<BddComplex> {
    let (name, degree) = split_degree(spec)?;
    if let Some(m) = named_module(a, name)? {
        return Ok(BddComplex::module_in_degree(&m, degree));
    }
    let (v, _) = load_value(spec)?;
    complex_from_value(a, &v)
}

pub fn complex_from_value(a: &Arc<Algebra>, v: &Value) -> Result<BddComplex> {
    if v.get("terms").is_some() {
        BddComplex::from_json(a, v)
    } else if v.get("action").is_some() {
        Ok(BddComplex::module_in_degree(&LeftModule::from_json(a, v)?, 0))
    } else {
        Err(Error::Parse("expected module or complex JSON".into()))
    }
}

pub fn target_module(a: &Arc<Algebra>, spec: &str) -> Result<LeftModule> {
    if let Some(m) = named_module(a, spec)? {
        return Ok(m);
    }
    let (v, _) = load_value(spec)?;
    LeftModule::from_json(a, &v)
}

/// A DG-module over `b`: `regular`, `simple:i` (inflated from `H^0`) or a DG-module file, with `@n` shifts.
pub fn target_dgmodule(b: &Arc<DGRing>, spec: &str) -> Result<DGModule> {
    let (name, degree) = split_degree(spec)?;
    let base = if name == "regular" {
        Some(DGModule::regular(b))
    } else if let Some(i) = indexed(name, "simple")? {
        let tests = dg_simple_tests(b)?;
        let n = tests.len();
        Some(tests.into_iter().nth(i).ok_or_else(|| Error::Parse(format!("{name:?}: H^0 has {n} simple modules")))?.1)
    } else {
        None
    };
    match base {
        Some(m) => Ok(m.shift(-degree)),
        None => DGModule::from_json(b, &load_value(spec)?.0),
    }
}

/// A bimodule complex: `da`, `regular`, `simple` (top of `A`) with `@n`, or a file.
pub fn target_bimodule(a: &Arc<Algebra>, spec: &str) -> Result<BimoduleComplex> {
    let (name, degree) = split_degree(spec)?;
    let b = match name {
        "da" => Some(Bimodule::dual_of_algebra(a)),
        "regular" => Some(Bimodule::regular(a)),
        "simple" => Some(top_bimodule(a)?),
        _ => None,
    };
    if let Some(b) = b {
        return Ok(BimoduleComplex::bimodule_in_degree(&b, degree));
    }
    let (v, _) = load_value(spec)?;
    if v.get("terms").is_some() {
        BimoduleComplex::from_json(a, &v)
    } else {
        Ok(BimoduleComplex::bimodule_in_degree(&Bimodule::from_json(a, &v)?, 0))
    }
}

/// `A / rad A` as a bimodule.
pub fn top_bimodule(a: &Arc<Algebra>) -> Result<Bimodule> {
    let (q, pi, _) = a.quotient(&a.structure()?.radical().clone())?;
    let left = (0..a.dim()).map(|e| q.left_mult_by(&pi.column(e))).collect();
    let right = (0..a.dim()).map(|e| q.right_mult_by(&pi.column(e))).collect();
    Bimodule::new(a.clone(), left, right)
}
