//! One function per subcommand, each producing an [`Outcome`].

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::module::same_algebra;
use crate::algebra::{Algebra, Bimodule, LeftModule};
use crate::complex::{BddComplex, BimoduleComplex};
use crate::dg::{trivial_extension, DGModule};
use crate::duality::{build_da_dualizing, is_dualizing, tor_certificate};
use crate::error::{Error, Result};
use crate::homdim::{
    dg_flat_dim, dg_fpd_search, dg_inj_dim, dg_proj_dim, flat_dim, fpd_search, inj_dim, proj_dim, ExtDim,
};

use super::input::{self, algebra_from_value, is_algebra_doc, is_dgring_doc, is_quiver_doc};
use super::{exit_code_for, Context, Outcome};

fn error_json(e: &Error) -> Value {
    let witness = match e {
        Error::AssociativityFailure { i, j, k } => json!({"i": i, "j": j, "k": k}),
        Error::UnitFailure { i } => json!({"i": i}),
        Error::WindowTooSmall { degree, cutoff } => json!({"degree": degree, "cutoff": cutoff}),
        Error::SupPositive { degree } => json!({"degree": degree}),
        _ => Value::Null,
    };
    json!({"error": e.name(), "message": e.to_string(), "witness": witness})
}

fn summary_line(kind: &str, dim: usize, extra: &str) -> String {
    format!("{kind}, dim {dim}{extra}, checks OK")
}

fn algebra_summary(kind_source: &str, a: &Arc<Algebra>) -> Result<(Value, String)> {
    let simples = a.structure()?.simple_count();
    let v = json!({
        "kind": "algebra",
        "source": kind_source,
        "field": a.field(),
        "dimension": a.dim(),
        "simples": simples,
        "radical_dimension": a.structure()?.radical().cols(),
        "checks": "OK",
    });
    Ok((v, summary_line("algebra", a.dim(), "")))
}

fn ingest_value(
    ctx: &Context,
    v: &Value,
    dir: Option<&Path>,
    algebra: Option<&str>,
    ring: Option<&str>,
) -> Result<(Value, String)> {
    let f = ctx.config.field;
    if is_algebra_doc(v) {
        return algebra_summary("structure_constants", &algebra_from_value(v, f)?);
    }
    if is_quiver_doc(v) {
        return algebra_summary("quiver", &algebra_from_value(v, f)?);
    }
    if is_dgring_doc(v) {
        let b = input::dgring_from_value(v, f)?;
        let degrees: Vec<Value> = b.degree_dims().iter().map(|(n, d)| json!({"degree": n, "dim": d})).collect();
        let out = json!({
            "kind": "dgring",
            "field": b.field(),
            "dimension": b.dim(),
            "degrees": degrees,
            "h0_dimension": b.h0().dim(),
            "section": b.has_section(),
            "checks": "OK",
        });
        return Ok((out, summary_line("dgring", b.dim(), &format!(", H0 dim {}", b.h0().dim()))));
    }
    if v.get("action").is_some() && v.get("degrees").is_some() {
        let b = match ring {
            Some(r) => input::load_dgring(r, f)?,
            None => input::referenced_ring(v, dir, f)?
                .ok_or_else(|| Error::Parse("DG-module needs --dgring or a \"ring\" key".into()))?,
        };
        let m = DGModule::from_json(&b, v)?;
        let out = json!({"kind": "dgmodule", "dimension": m.dim(), "checks": "OK"});
        return Ok((out, summary_line("dgmodule", m.dim(), "")));
    }
    let a = match algebra {
        Some(p) => input::load_algebra(p, f)?,
        None => input::referenced_algebra(v, dir, f)?.ok_or_else(|| {
            Error::Parse("unrecognized document; modules and complexes need --algebra or an \"algebra\" key".into())
        })?,
    };
    let bimodule_terms =
        v.get("terms").and_then(Value::as_object).is_some_and(|t| t.values().any(|m| m.get("left_action").is_some()));
    if bimodule_terms {
        let c = BimoduleComplex::from_json(&a, v)?;
        let out = json!({"kind": "bimodule_complex", "span": c.span(), "checks": "OK"});
        return Ok((out, "bimodule complex, checks OK".into()));
    }
    if v.get("terms").is_some() {
        let c = BddComplex::from_json(&a, v)?;
        let cohomology: Vec<Value> = c
            .terms()
            .keys()
            .map(|&n| json!({"degree": n, "dim": c.cohomology_dim(n)}))
            .filter(|x| x["dim"] != 0)
            .collect();
        let out =
            json!({"kind": "complex", "total_dimension": c.total_dim(), "cohomology": cohomology, "checks": "OK"});
        return Ok((out, summary_line("complex", c.total_dim(), "")));
    }
    if v.get("left_action").is_some() {
        let m = Bimodule::from_json(&a, v)?;
        let out = json!({"kind": "bimodule", "dimension": m.dim(), "checks": "OK"});
        return Ok((out, summary_line("bimodule", m.dim(), "")));
    }
    let m = LeftModule::from_json(&a, v)?;
    let out = json!({"kind": "module", "dimension": m.dim(), "checks": "OK"});
    Ok((out, summary_line("module", m.dim(), "")))
}

pub fn ingest(ctx: &Context, path: &str, algebra: Option<&str>, ring: Option<&str>) -> Result<Outcome> {
    let (v, dir) = input::load_value(path)?;
    match ingest_value(ctx, &v, dir.as_deref(), algebra, ring) {
        Ok((json, table)) => Ok(Outcome::new(json, table, 0)),
        Err(e) => {
            let code = exit_code_for(&e);
            if code == 1 {
                return Err(e);
            }
            let mut j = error_json(&e);
            j["checks"] = json!("FAILED");
            let table = format!("checks FAILED: {e}");
            Ok(Outcome::new(j, table, code))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Proj,
    Inj,
    Flat,
}

pub fn dims(ctx: &Context, algebra: Option<&str>, dgring: Option<&str>, target: &str, kind: Kind) -> Result<Outcome> {
    let f = ctx.config.field;
    let cutoff = ctx.config.cutoff;
    let (subject_doc, key_kind) = match (algebra, dgring) {
        (Some(p), None) => (input::load_algebra(p, f)?.to_json(), "dims-algebra"),
        (None, Some(p)) => (input::load_dgring(p, f)?.to_json(), "dims-dgring"),
        _ => return Err(Error::Parse("give exactly one of --algebra and --dgring".into())),
    };
    let target_doc = match input::load_value(target) {
        Ok((v, _)) => v,
        Err(_) => json!(target),
    };
    let parts = vec![subject_doc, target_doc, json!(format!("{kind:?}")), json!(cutoff)];
    let report = ctx.cached(key_kind, parts, || {
        let r = if let Some(p) = algebra {
            let a = input::load_algebra(p, f)?;
            let c = input::target_complex(&a, target)?;
            match kind {
                Kind::Proj => proj_dim(&c, cutoff)?,
                Kind::Inj => inj_dim(&c, cutoff)?,
                Kind::Flat => flat_dim(&c, cutoff)?,
            }
        } else {
            let b = input::load_dgring(dgring.unwrap_or_default(), f)?;
            let x = input::target_dgmodule(&b, target)?;
            match kind {
                Kind::Proj => dg_proj_dim(&x, cutoff)?,
                Kind::Inj => dg_inj_dim(&x, cutoff)?,
                Kind::Flat => dg_flat_dim(&x, cutoff)?,
            }
        };
        let mut v = r.to_json();
        v["subject"] = json!(target);
        Ok(v)
    })?;
    let table = format!(
        "{} dim of {}: {} (cutoff {})",
        report["kind"].as_str().unwrap_or(""),
        target,
        ExtDim::from_json(&report["value"]).map(|d| d.to_string()).unwrap_or_default(),
        cutoff
    );
    Ok(Outcome::new(report, table, 0))
}

pub fn trivext(ctx: &Context, algebra: &str, shift: i32, output: Option<&Path>) -> Result<Outcome> {
    let a = input::load_algebra(algebra, ctx.config.field)?;
    if shift >= 0 {
        return Err(Error::SupPositive { degree: shift });
    }
    let b = trivial_extension(&a, &build_da_dualizing(&a, shift))?;
    let h0_ok = same_algebra(b.h0(), &a) && b.h0().table() == a.table();
    let doc = b.to_json();
    let text = super::pretty(&doc);
    if let Some(p) = output {
        super::write_atomic(p, text.as_bytes())?;
    }
    let summary = json!({
        "kind": "dgring",
        "dimension": b.dim(),
        "shift": shift,
        "h0_equals_algebra": h0_ok,
        "output": output.map(|p| p.display().to_string()),
    });
    let table = format!("A ⋉ DA[{}]: total dim {}, H0 = A {}", -shift, b.dim(), if h0_ok { "OK" } else { "FAILED" });
    let code = if h0_ok { 0 } else { 3 };
    if output.is_none() {
        // without -o the ring itself is the output
        return Ok(Outcome { json: doc, table: text, code, raw: true });
    }
    Ok(Outcome::new(summary, table, code))
}

pub fn dualizing(ctx: &Context, algebra: &str, with: &str) -> Result<Outcome> {
    let f = ctx.config.field;
    let cutoff = ctx.config.cutoff;
    let a = input::load_algebra(algebra, f)?;
    let with_doc = match input::load_value(with) {
        Ok((v, _)) => v,
        Err(_) => json!(with),
    };
    let cert = ctx.cached("dualizing", vec![a.to_json(), with_doc, json!(cutoff)], || {
        let r = input::target_bimodule(&a, with)?;
        Ok(is_dualizing(&a, &r, cutoff)?.to_json())
    })?;
    let valid = cert["valid"].as_bool() == Some(true);
    let mut table = format!("{with} over {algebra}: {}\n", if valid { "dualizing" } else { "not dualizing" });
    if let Some(checks) = cert["checks"].as_object() {
        for (k, v) in checks {
            table.push_str(&format!("  {k:<22} {v}\n"));
        }
    }
    Ok(Outcome::new(cert, table.trim_end().to_string(), if valid { 0 } else { 3 }))
}

pub fn fpd(ctx: &Context, algebra: Option<&str>, dgring: Option<&str>) -> Result<Outcome> {
    let f = ctx.config.field;
    let (cutoff, max_dim) = (ctx.config.cutoff, ctx.config.max_dim);
    let report = match (algebra, dgring) {
        (Some(p), None) => {
            let a = input::load_algebra(p, f)?;
            ctx.cached("fpd-algebra", vec![a.to_json(), json!(max_dim), json!(cutoff)], || {
                Ok(fpd_search(&a, max_dim, cutoff)?.to_json())
            })?
        }
        (None, Some(p)) => {
            let b = input::load_dgring(p, f)?;
            ctx.cached("fpd-dgring", vec![b.to_json(), json!(max_dim), json!(cutoff)], || {
                Ok(dg_fpd_search(&b, max_dim, cutoff)?.to_json())
            })?
        }
        _ => return Err(Error::Parse("give exactly one of --algebra and --dgring".into())),
    };
    let observed = ExtDim::from_json(&report["observed"]).map(|d| d.to_string()).unwrap_or_default();
    let mut table = format!("FPD observed: {observed} (max_dim {max_dim}, cutoff {cutoff})\n");
    if let Some(entries) = report["entries"].as_array() {
        for e in entries {
            let pd = ExtDim::from_json(&e["proj_dim"]).map(|d| d.to_string()).unwrap_or_default();
            table.push_str(&format!(
                "  {:<24} dim {:<3} projdim {}\n",
                e["label"].as_str().unwrap_or(""),
                e["dim"],
                pd
            ));
        }
    }
    Ok(Outcome::new(report, table.trim_end().to_string(), 0))
}

/// `0..6`, `0..=6` or `0,2,4`.
pub fn parse_degrees(s: &str) -> Result<Vec<i32>> {
    let bad = || Error::Parse(format!("invalid degree list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (b, inclusive) = match b.strip_prefix('=') {
            Some(b) => (b, true),
            None => (b, false),
        };
        let a: i32 = a.trim().parse().map_err(|_| bad())?;
        let b: i32 = b.trim().parse().map_err(|_| bad())?;
        return Ok(if inclusive { (a..=b).collect() } else { (a..b).collect() });
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

pub fn tor_cert(ctx: &Context, algebra: &str, bimodule: &str, module: &str, degrees: &str) -> Result<Outcome> {
    let f = ctx.config.field;
    let cutoff = ctx.config.cutoff;
    let a = input::load_algebra(algebra, f)?;
    let degrees = parse_degrees(degrees)?;
    let ref_doc = |s: &str| input::load_value(s).map(|(v, _)| v).unwrap_or_else(|_| json!(s));
    let parts = vec![a.to_json(), ref_doc(bimodule), ref_doc(module), json!(degrees), json!(cutoff)];
    let report = ctx.cached("tor-cert", parts, || {
        let r = input::target_bimodule(&a, bimodule)?;
        let m = input::target_module(&a, module)?;
        let prof = tor_certificate(&r, &m, &degrees, cutoff)?;
        Ok(json!({
            "bimodule": bimodule,
            "module": module,
            "cutoff": cutoff,
            "tor": prof.iter().map(|(i, d)| json!({"degree": i, "dim": d})).collect::<Vec<_>>(),
        }))
    })?;
    let mut table = format!("Tor^A_i({bimodule}, {module})\n");
    if let Some(rows) = report["tor"].as_array() {
        for r in rows {
            table.push_str(&format!("  i = {:<4} {}\n", r["degree"], r["dim"]));
        }
    }
    Ok(Outcome::new(report, table.trim_end().to_string(), 0))
}
