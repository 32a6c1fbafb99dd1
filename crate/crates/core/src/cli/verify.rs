//! `verify`: theorem suites over fixtures, run in parallel and merged in order.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::dg::LiftMutation;
use crate::duality::{
    verify_bass_suite, verify_dualizing_suite, verify_lifting_suite_with, verify_trivial_ext_gorenstein, TheoremReport,
};
use crate::error::{Error, Result};
use crate::homdim::Verdict;

use super::input;
use super::{exit_code_for, Context, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Gorenstein,
    Lifting,
    Bass,
    Dualizing,
    All,
}

impl Suite {
    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Dualizing, Suite::Gorenstein, Suite::Lifting, Suite::Bass],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Gorenstein => "trivial_extension_gorenstein",
            Suite::Lifting => "lifting",
            Suite::Bass => "bass_bound",
            Suite::Dualizing => "dualizing",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mutation {
    CorruptSection,
    DropSign,
}

impl Mutation {
    fn lift(self) -> LiftMutation {
        match self {
            Mutation::CorruptSection => LiftMutation::CorruptSection,
            Mutation::DropSign => LiftMutation::DropKoszulSign,
        }
    }
}

struct Target {
    name: String,
    algebra: Arc<Algebra>,
}

fn targets(ctx: &Context, list: &[String]) -> Result<Vec<Target>> {
    if list.is_empty() {
        return input::fixtures()
            .iter()
            .map(|f| Ok(Target { name: f.name.to_string(), algebra: f.algebra()? }))
            .collect();
    }
    list.iter()
        .map(|s| {
            let (v, _) = input::load_value(s)?;
            let name = v.get("name").and_then(Value::as_str).map(str::to_string).unwrap_or_else(|| s.clone());
            Ok(Target { name, algebra: input::algebra_from_value(&v, ctx.config.field)? })
        })
        .collect()
}

fn run_one(
    suite: Suite,
    t: &Target,
    cutoff: usize,
    max_dim: usize,
    mutation: Option<Mutation>,
) -> Result<TheoremReport> {
    let a = &t.algebra;
    let r = match suite {
        Suite::Gorenstein => verify_trivial_ext_gorenstein(a, &t.name, cutoff),
        Suite::Lifting => verify_lifting_suite_with(a, &t.name, max_dim, cutoff, mutation.map(Mutation::lift)),
        Suite::Bass => verify_bass_suite(a, &t.name, max_dim, cutoff),
        Suite::Dualizing => verify_dualizing_suite(a, &t.name, cutoff),
        Suite::All => unreachable!("expanded before running"),
    };
    match r {
        Ok(r) => Ok(r),
        // exhausted windows are inconclusive and broken invariants are violations
        Err(e) if exit_code_for(&e) != 1 => {
            let mut rep = TheoremReport::new(suite.name(), &t.name);
            rep.witnesses.push(json!({"error": e.name(), "message": e.to_string()}));
            rep.verdict = if exit_code_for(&e) == 2 { Verdict::Inconclusive } else { Verdict::Violation };
            Ok(rep)
        }
        Err(e) => Err(e),
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// JUnit-style XML: one test case per report; violations fail and inconclusive runs are skipped.
pub fn junit_xml(reports: &[Value]) -> String {
    let count = |v: &str| reports.iter().filter(|r| r["verdict"] == v).count();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<testsuite name=\"homalg-verify\" tests=\"{}\" failures=\"{}\" skipped=\"{}\">\n",
        reports.len(),
        count("VIOLATION"),
        count("inconclusive")
    ));
    for r in reports {
        let name = xml_escape(r["theorem"].as_str().unwrap_or(""));
        let class = xml_escape(r["instance"].as_str().unwrap_or(""));
        out.push_str(&format!("  <testcase classname=\"{class}\" name=\"{name}\">"));
        match r["verdict"].as_str() {
            Some("VIOLATION") => out.push_str(&format!(
                "<failure message=\"VIOLATION\">{}</failure>",
                xml_escape(&r["witnesses"].to_string())
            )),
            Some("inconclusive") => out.push_str("<skipped message=\"inconclusive\"/>"),
            _ => {}
        }
        out.push_str("</testcase>\n");
    }
    out.push_str("</testsuite>\n");
    out
}

pub fn verify(
    ctx: &Context,
    suite: Suite,
    fixtures: &[String],
    mutation: Option<Mutation>,
    junit: Option<&Path>,
) -> Result<Outcome> {
    let (cutoff, max_dim) = (ctx.config.cutoff, ctx.config.max_dim);
    let targets = targets(ctx, fixtures)?;
    let jobs: Vec<(Suite, &Target)> =
        targets.iter().flat_map(|t| suite.expand().into_iter().map(move |s| (s, t))).collect();
    let reports: Vec<Value> = jobs
        .par_iter()
        .map(|&(s, t)| {
            // mutations only affect the lifting suite
            let m = if s == Suite::Lifting { mutation } else { None };
            let parts = vec![
                t.algebra.to_json(),
                json!(t.name),
                json!(s.name()),
                json!(cutoff),
                json!(max_dim),
                json!(m.map(|m| format!("{m:?}"))),
            ];
            ctx.cached("verify", parts, || run_one(s, t, cutoff, max_dim, m).map(|r| r.to_json()))
        })
        .collect::<Result<_>>()?;
    let mut overall = Verdict::Verified;
    let mut summary = Vec::with_capacity(reports.len());
    let mut table = format!("{:<30} {:<12} {}\n", "theorem", "fixture", "verdict");
    for r in &reports {
        let v = match r["verdict"].as_str() {
            Some("verified") => Verdict::Verified,
            Some("inconclusive") => Verdict::Inconclusive,
            Some("VIOLATION") => Verdict::Violation,
            _ => return Err(Error::Parse("report without a verdict".into())),
        };
        overall = overall.and(v);
        let (th, inst) = (r["theorem"].as_str().unwrap_or(""), r["instance"].as_str().unwrap_or(""));
        summary.push(json!({"theorem": th, "fixture": inst, "verdict": v.as_str()}));
        table.push_str(&format!("{th:<30} {inst:<12} {}\n", v.as_str()));
    }
    let count = |v: Verdict| summary.iter().filter(|s| s["verdict"] == v.as_str()).count();
    let totals = json!({
        "verified": count(Verdict::Verified),
        "inconclusive": count(Verdict::Inconclusive),
        "violation": count(Verdict::Violation),
    });
    table.push_str(&format!(
        "{} verified, {} inconclusive, {} violations: {}",
        totals["verified"],
        totals["inconclusive"],
        totals["violation"],
        overall.as_str()
    ));
    if let Some(p) = junit {
        super::write_atomic(p, junit_xml(&reports).as_bytes())?;
    }
    let doc = json!({
        "suite": suite.name(),
        "cutoff": cutoff,
        "max_dim": max_dim,
        "reports": reports,
        "summary": summary,
        "totals": totals,
        "verdict": overall.as_str(),
    });
    Ok(Outcome::new(doc, table, overall.exit_code()))
}
