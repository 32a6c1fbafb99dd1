//! Acceptance run over the bundled corpus: prints one PASS or FAIL line per criterion.
//! Pass criterion numbers as arguments to run a subset.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use homalg::algebra::{injective_module, simple_module, simple_modules, Algebra, LeftModule};
use homalg::cli::input::{fixture, fixtures, named_module, target_bimodule, Fixture};
use homalg::complex::{ext, ext_from, BddComplex, ProjectiveResolution};
use homalg::dg::LiftMutation;
use homalg::dg::{trivial_extension, DGModule, DGRing};
use homalg::duality::{
    build_da_dualizing, build_epsilon_psi, is_dualizing, verify_bass_suite, verify_lifting_suite_with,
    DualizingCertificate,
};
use homalg::homdim::{
    check_finite_dirsum_injdim, check_injdim_geq_inf, dg_check_injdim_geq_inf, dg_inj_dim, flat_dim, fpd_search,
    inj_dim, proj_dim, test_family, ExtDim, FamilySpec, Verdict,
};

const CUTOFF: usize = 12;
const MAX_DIM: usize = 6;

type Check = std::result::Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

trait OrFail<T> {
    fn or_fail(self, what: &str) -> std::result::Result<T, String>;
}

impl<T, E: std::fmt::Display> OrFail<T> for std::result::Result<T, E> {
    fn or_fail(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn algebra(f: &Fixture) -> std::result::Result<Arc<Algebra>, String> {
    f.algebra().or_fail(f.name)
}

fn trivext(a: &Arc<Algebra>) -> std::result::Result<Arc<DGRing>, String> {
    trivial_extension(a, &build_da_dualizing(a, -1)).or_fail("trivial extension")
}

fn within(name: &str, t: Instant, limit: Duration) -> std::result::Result<(), String> {
    let e = t.elapsed();
    ensure!(e <= limit, "{name} took {e:.1?}, limit {limit:?}");
    Ok(())
}

fn failing_axioms(c: &DualizingCertificate) -> Vec<&'static str> {
    [
        ("left_inj", c.left_inj),
        ("right_inj", c.right_inj),
        ("left_fg", c.left_fg),
        ("right_fg", c.right_fg),
        ("left_homothety_qiso", c.left_homothety_qiso),
        ("right_homothety_qiso", c.right_homothety_qiso),
    ]
    .into_iter()
    .filter(|(_, ok)| !ok)
    .map(|(n, _)| n)
    .collect()
}

fn criterion_1() -> Check {
    let mut slowest = Duration::ZERO;
    for f in fixtures() {
        let t = Instant::now();
        let a = algebra(f)?;
        let b = trivext(&a)?;
        // rebuild through the validating constructor, which checks every triple of basis elements
        let degrees: Vec<usize> = (b.lo()..=0).map(|n| b.degree_dim(n)).collect();
        DGRing::new(b.field(), b.lo(), degrees, b.table().to_vec(), b.diff().clone(), b.unit().to_vec())
            .or_fail(&format!("{}: structure check", f.name))?;
        ensure!(b.h0().dim() == a.dim(), "{}: dim H0 = {} but dim A = {}", f.name, b.h0().dim(), a.dim());
        ensure!(b.h0().table() == a.table(), "{}: H0 structure constants differ from A", f.name);
        within(f.name, t, Duration::from_secs(5))?;
        slowest = slowest.max(t.elapsed());
    }
    Ok(format!("{} fixtures, slowest {slowest:.1?}", fixtures().len()))
}

fn criterion_2() -> Check {
    let mut slowest = Duration::ZERO;
    let mut values = Vec::new();
    for f in fixtures() {
        let t = Instant::now();
        let a = algebra(f)?;
        let r = build_da_dualizing(&a, -1);
        let b = trivial_extension(&a, &r).or_fail(f.name)?;
        let ep = build_epsilon_psi(&b).or_fail(f.name)?;
        ensure!(ep.psi_is_quasi_iso().or_fail(f.name)?, "{}: H(Psi) is not bijective", f.name);
        let inj_b = dg_inj_dim(&DGModule::regular(&b), CUTOFF).or_fail(f.name)?.value;
        let ExtDim::Finite(inj_b) = inj_b else {
            return Err(format!("{}: injdim_B(B) = {} at cutoff {CUTOFF}", f.name, inj_b.to_json()));
        };
        let inj_r = inj_dim(&r.res_left(), CUTOFF).or_fail(f.name)?.value;
        let ExtDim::Finite(inj_r) = inj_r else {
            return Err(format!("{}: injdim_A(R) = {}", f.name, inj_r.to_json()));
        };
        // the adjunction step gives injdim_B(B) = injdim_B(N) ≤ injdim_A(R) + amp(R)
        let amp = r.res_left().extent().amp().unwrap_or(0) as i64;
        ensure!(inj_b <= inj_r + amp, "{}: injdim_B(B) = {inj_b} > {inj_r} + {amp}", f.name);
        within(f.name, t, Duration::from_secs(60))?;
        slowest = slowest.max(t.elapsed());
        values.push(inj_b);
    }
    Ok(format!("injdim_B(B) = {values:?}, slowest {slowest:.1?}"))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in fixtures() {
        let a = algebra(f)?;
        let ep = build_epsilon_psi(&trivext(&a)?).or_fail(f.name)?;
        ensure!(ep.check_comp1(&mut rng, 100).or_fail(f.name)?, "{}: comp1 fails", f.name);
        ensure!(ep.check_comp2(&mut rng, 100).or_fail(f.name)?, "{}: comp2 fails", f.name);
    }
    Ok(format!("100 + 100 random pairs on each of {} fixtures", fixtures().len()))
}

fn criterion_4() -> Check {
    let mut checked = 0;
    for f in fixtures() {
        let a = algebra(f)?;
        let rep = verify_bass_suite(&a, f.name, MAX_DIM, CUTOFF).or_fail(f.name)?;
        ensure!(rep.verdict != Verdict::Violation, "{}: {}", f.name, rep.to_json());
        for w in &rep.witnesses {
            let r = &w["report"];
            let injdim = ExtDim::from_json(&r["injdim"]["value"]).or_fail(f.name)?;
            let observed = ExtDim::from_json(&r["fpd_observed"]).or_fail(f.name)?;
            let ExtDim::Finite(i) = injdim else {
                return Err(format!("{} {}: injdim not certified finite", f.name, w["check"]));
            };
            if let ExtDim::Finite(o) = observed {
                ensure!(o <= i, "{} {}: FPD observed {o} > injdim {i}", f.name, w["check"]);
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} bounds (algebras and trivial extensions), max_dim {MAX_DIM}"))
}

fn criterion_5() -> Check {
    let mut flips = 0;
    let mut skipped = Vec::new();
    for f in fixtures() {
        let a = algebra(f)?;
        let rep = verify_lifting_suite_with(&a, f.name, MAX_DIM, CUTOFF, None).or_fail(f.name)?;
        ensure!(rep.verdict == Verdict::Verified, "{}: {}", f.name, rep.to_json());
        // the suite compares projdim of each lift with projdim of the module and bounds its infimum
        let applicable = rep.to_json()["witnesses"]
            .as_array()
            .map(|ws| ws.iter().any(|w| w["projdim"].as_i64().is_some_and(|p| p > 0)))
            .unwrap_or(false);
        for m in [LiftMutation::CorruptSection, LiftMutation::DropKoszulSign] {
            if m == LiftMutation::DropKoszulSign && !applicable {
                skipped.push(f.name);
                continue;
            }
            let broken = verify_lifting_suite_with(&a, f.name, MAX_DIM, CUTOFF, Some(m)).or_fail(f.name)?;
            ensure!(broken.verdict == Verdict::Violation, "{}: mutation {m:?} not caught", f.name);
            flips += 1;
        }
    }
    Ok(format!("{flips} mutated runs flipped; sign mutation has nothing to break on {}", skipped.join(", ")))
}

fn modules(a: &Arc<Algebra>, max_dim: usize) -> std::result::Result<Vec<(String, LeftModule)>, String> {
    let mut ms: Vec<(String, LeftModule)> =
        test_family(a, FamilySpec::new(max_dim)).or_fail("family")?.into_iter().map(|m| (m.label, m.module)).collect();
    for i in 0..simple_modules(a).or_fail("simples")?.len() {
        ms.push((format!("I{i}"), injective_module(a, i).or_fail("injective")?));
    }
    ms.push(("DA".into(), named_module(a, "dual").or_fail("DA")?.ok_or("no DA")?));
    Ok(ms)
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut flat_checks = 0;
    let mut inf_checks = 0;
    let mut pools = Vec::new();
    for f in fixtures() {
        let a = algebra(f)?;
        let ms = modules(&a, 4)?;
        for (label, m) in &ms {
            let c = BddComplex::module_in_degree(m, 0);
            let p = proj_dim(&c, CUTOFF).or_fail(label)?.value;
            let fl = flat_dim(&c, CUTOFF).or_fail(label)?.value;
            ensure!(p == fl, "{} {label}: projdim {} but flatdim {}", f.name, p.to_json(), fl.to_json());
            flat_checks += 1;
        }
        let mut complexes: Vec<(String, BddComplex)> = Vec::new();
        for d in [-2, 0, 2] {
            complexes.push((format!("A@{d}"), BddComplex::module_in_degree(&LeftModule::regular(&a), d)));
        }
        complexes.push(("DA[1]".into(), build_da_dualizing(&a, -1).res_left()));
        for (label, m) in ms.iter().take(6) {
            complexes.push((label.clone(), BddComplex::module_in_degree(m, 1)));
        }
        for (label, c) in &complexes {
            let r = check_injdim_geq_inf(c, CUTOFF).or_fail(label)?;
            ensure!(r.verdict != Verdict::Violation, "{} {label}: {}", f.name, r.to_json());
            inf_checks += 1;
        }
        let b = trivext(&a)?;
        let r = dg_check_injdim_geq_inf(&DGModule::regular(&b), CUTOFF).or_fail(f.name)?;
        ensure!(r.verdict != Verdict::Violation, "{} B: {}", f.name, r.to_json());
        inf_checks += 1;
        pools.push((f.name, a, ms));
    }
    let mut ext_pairs = 0;
    let mut trials = 0;
    while ext_pairs < 24 {
        trials += 1;
        ensure!(trials < 500, "only {ext_pairs} padded resolutions could be built");
        let (name, a, ms) = &pools[rng.gen_range(0..pools.len())];
        let (lm, m) = &ms[rng.gen_range(0..ms.len())];
        let (ln, n) = &ms[rng.gen_range(0..ms.len())];
        let res = ProjectiveResolution::compute(&BddComplex::module_in_degree(m, 0), CUTOFF).or_fail(lm)?;
        let kinds = simple_modules(a).or_fail(name)?.len();
        let Ok(padded) = res.pad(-rng.gen_range(0..3), rng.gen_range(0..kinds)) else { continue };
        let target = BddComplex::module_in_degree(n, 0);
        for i in 0..4 {
            let minimal = ext_from(&res, &target, i).or_fail(lm)?;
            let other = ext_from(&padded, &target, i).or_fail(lm)?;
            ensure!(minimal == other, "{name}: Ext^{i}({lm}, {ln}) is {minimal} minimal, {other} padded");
        }
        ext_pairs += 1;
    }
    let mut sums = 0;
    trials = 0;
    while sums < 12 {
        trials += 1;
        ensure!(trials < 500, "only {sums} direct sums had finite injdim");
        let (name, _, ms) = &pools[rng.gen_range(0..pools.len())];
        let xs: Vec<BddComplex> = (0..2)
            .map(|_| BddComplex::module_in_degree(&ms[rng.gen_range(0..ms.len())].1, rng.gen_range(-1..=1)))
            .collect();
        match check_finite_dirsum_injdim(&xs, CUTOFF).or_fail(name)? {
            Verdict::Verified => sums += 1,
            Verdict::Inconclusive => continue,
            Verdict::Violation => return Err(format!("{name}: injdim of a direct sum is not the max")),
        }
    }
    Ok(format!(
        "projdim = flatdim on {flat_checks} modules, {ext_pairs} padded Ext pairs, {inf_checks} inf bounds, {sums} direct sums"
    ))
}

fn criterion_7() -> Check {
    let limit = Duration::from_secs(10);
    for f in fixtures() {
        let t = Instant::now();
        let a = algebra(f)?;
        let c = is_dualizing(&a, &build_da_dualizing(&a, 0), CUTOFF).or_fail(f.name)?;
        ensure!(c.is_valid(), "{}: DA rejected, failing {:?}", f.name, failing_axioms(&c));
        within(f.name, t, limit)?;
    }
    let t = Instant::now();
    let a2 = algebra(fixture("a2-q").ok_or("missing a2-q")?)?;
    let c = is_dualizing(&a2, &target_bimodule(&a2, "regular").or_fail("A2")?, CUTOFF).or_fail("A2")?;
    let failing = failing_axioms(&c);
    ensure!(!c.is_valid() && !failing.is_empty(), "A2: the regular bimodule was accepted");
    within("A2", t, limit)?;
    let t = Instant::now();
    let dual = algebra(fixture("dual-q").ok_or("missing dual-q")?)?;
    let c = is_dualizing(&dual, &target_bimodule(&dual, "regular").or_fail("dual")?, CUTOFF).or_fail("dual")?;
    ensure!(c.is_valid(), "k[x]/(x^2): the regular bimodule was rejected, failing {:?}", failing_axioms(&c));
    within("k[x]/(x^2)", t, limit)?;
    Ok(format!("DA accepted on {} fixtures; (A2, A) fails {failing:?}; (k[x]/(x^2), A) accepted", fixtures().len()))
}

fn dim_value(d: ExtDim) -> serde_json::Value {
    match d {
        ExtDim::Finite(n) => n.into(),
        _ => serde_json::Value::Null,
    }
}

fn criterion_8() -> Check {
    let mut compared = 0;
    for f in fixtures() {
        let a = algebra(f)?;
        let o = f.oracle();
        let mut eq = |key: &str, got: serde_json::Value| -> std::result::Result<(), String> {
            if o.get(key).is_some() {
                ensure!(o[key] == got, "{}: {key} is {got}, oracle {}", f.name, o[key]);
                compared += 1;
            }
            Ok(())
        };
        eq("dimension", a.dim().into())?;
        let simples = simple_modules(&a).or_fail(f.name)?;
        eq("simple_count", simples.len().into())?;
        let mut pds = Vec::new();
        for s in &simples {
            pds.push(dim_value(proj_dim(&BddComplex::module_in_degree(s, 0), CUTOFF).or_fail(f.name)?.value));
        }
        let gldim = if pds.iter().all(|p| p.is_i64()) {
            pds.iter().filter_map(|p| p.as_i64()).max().into()
        } else {
            serde_json::Value::Null
        };
        eq("projdim_simples", pds.into())?;
        eq("gldim", gldim)?;
        let reg = BddComplex::module_in_degree(&LeftModule::regular(&a), 0);
        eq("injdim_regular", dim_value(inj_dim(&reg, CUTOFF).or_fail(f.name)?.value))?;
        eq("fpd", dim_value(fpd_search(&a, MAX_DIM, CUTOFF).or_fail(f.name)?.observed))?;
        eq("trivext_dimension", trivext(&a)?.dim().into())?;
        if o.get("ext_simple_simple").is_some() {
            let s = BddComplex::module_in_degree(&simple_module(&a, 0).or_fail(f.name)?, 0);
            let n = o["ext_simple_simple"].as_array().map_or(0, Vec::len) as i32;
            let got: Vec<usize> =
                (0..n).map(|i| ext(&s, &s, i, CUTOFF + 2)).collect::<Result<_, _>>().or_fail(f.name)?;
            eq("ext_simple_simple", got.into())?;
        }
    }
    Ok(format!("{compared} oracle values matched"))
}

fn run_verify(cache: &Path, extra: &[&str]) -> std::result::Result<(Vec<u8>, Duration), String> {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_homalg"))
        .args(["--cache", cache.to_str().ok_or("cache path")?, "verify", "--suite", "all"])
        .args(extra)
        .env_remove("HOMALG_CUTOFF")
        .env_remove("HOMALG_CACHE")
        .output()
        .or_fail("running homalg")?;
    let e = t.elapsed();
    ensure!(
        out.status.code() == Some(0),
        "verify exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok((out.stdout, e))
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().or_fail("tempdir")?;
    let (cold, t_cold) = run_verify(&dir.path().join("all"), &[])?;
    let (warm, t_warm) = run_verify(&dir.path().join("all"), &[])?;
    ensure!(cold == warm, "cold and warm reports differ");
    let fresh = tempfile::tempdir().or_fail("tempdir")?;
    let (again, _) = run_verify(fresh.path(), &[])?;
    ensure!(cold == again, "two cold runs differ");
    let largest = fixtures().iter().max_by_key(|f| f.algebra().map(|a| a.dim()).unwrap_or(0)).ok_or("no fixtures")?;
    let cache = dir.path().join("largest");
    let (c1, l_cold) = run_verify(&cache, &["--fixtures", largest.name])?;
    let (c2, l_warm) = run_verify(&cache, &["--fixtures", largest.name])?;
    ensure!(c1 == c2, "{}: cold and warm reports differ", largest.name);
    let ratio = l_cold.as_secs_f64() / l_warm.as_secs_f64();
    ensure!(ratio >= 3.0, "{}: warm run only {ratio:.1}x faster", largest.name);
    Ok(format!(
        "{} bytes identical across 3 runs (cold {t_cold:.1?}, warm {t_warm:.1?}); {} cold {l_cold:.1?} warm {l_warm:.1?} ({ratio:.0}x)",
        cold.len(),
        largest.name
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "trivial extension structure and H0", criterion_1),
        (2, "Psi quasi-iso and finite injdim_B(B)", criterion_2),
        (3, "comp1 and comp2 identities", criterion_3),
        (4, "Bass bound", criterion_4),
        (5, "lifting suite and mutants", criterion_5),
        (6, "dimension cross-validation", criterion_6),
        (7, "dualizing discrimination", criterion_7),
        (8, "oracle values", criterion_8),
        (9, "determinism and warm cache", criterion_9),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let t = Instant::now();
        let r = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail} [{:.1?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {why} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
