use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn homalg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homalg"))
        .current_dir(dir)
        .env_remove("HOMALG_CUTOFF")
        .env_remove("HOMALG_CACHE")
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn ingest_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = homalg(dir.path(), &["--no-cache", "--format", "table", "ingest", &fixture("a2_q.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "algebra, dim 3, checks OK");

    // e0 e0 = e1, e1 e0 = e0, e0 e1 = e1 e1 = 0 with unit e0 is not associative
    let bad = json!({
        "field": {"kind": "rationals"},
        "dimension": 2,
        "structure_constants": [[["0", "1"], ["0", "0"]], [["1", "0"], ["0", "0"]]],
        "unit": ["1", "0"],
        "basis_labels": ["e0", "e1"],
    });
    let p = dir.path().join("bad.json");
    std::fs::write(&p, bad.to_string()).unwrap();
    let o = homalg(dir.path(), &["--no-cache", "ingest", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v = json_out(&o);
    assert_eq!(v["error"], "AssociativityFailure");
    assert!(v["witness"]["i"].is_u64());

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = homalg(dir.path(), &["--no-cache", "ingest", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let o = homalg(dir.path(), &["--no-cache", "ingest", "does-not-exist.json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = homalg(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ingest_modules_and_complexes() {
    let dir = tempfile::tempdir().unwrap();
    // the simple module at vertex 1, referencing the fixture by path
    let module = json!({
        "algebra": fixture("a2_q.json"),
        "dimension": 1,
        "action": [
            {"rows": 1, "cols": 1, "entries": [1]},
            {"rows": 1, "cols": 1, "entries": [0]},
            {"rows": 1, "cols": 1, "entries": [0]},
        ],
    });
    let p = dir.path().join("m.json");
    std::fs::write(&p, module.to_string()).unwrap();
    let o = homalg(dir.path(), &["--no-cache", "ingest", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_out(&o)["kind"], "module");

    // S -> S by the identity, an acyclic complex
    let cx = json!({"algebra": "a2-q", "terms": {"-1": module.clone(), "0": module}, "differentials": {"-1": {"rows": 1, "cols": 1, "entries": [1]}}});
    let p = dir.path().join("c.json");
    std::fs::write(&p, cx.to_string()).unwrap();
    let o = homalg(dir.path(), &["--no-cache", "ingest", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["kind"], "complex");
    assert_eq!(v["cohomology"], json!([]));

    let b = dir.path().join("b.json");
    let o = homalg(dir.path(), &["--no-cache", "trivext", "--algebra", "a2-f5", "-o", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = homalg(dir.path(), &["--no-cache", "ingest", b.to_str().unwrap()]);
    assert_eq!(json_out(&o)["h0_dimension"], 3);
}

#[test]
fn dimension_examples() {
    let dir = tempfile::tempdir().unwrap();
    let value = |args: &[&str]| {
        let mut full = vec!["--no-cache", "dims"];
        full.extend_from_slice(args);
        let o = homalg(dir.path(), &full);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        json_out(&o)["value"].clone()
    };
    assert_eq!(value(&["--algebra", "a2-q", "--target", "simple:1", "--kind", "proj"]), json!({"finite": 1}));
    assert_eq!(
        value(&["--algebra", "dual-q", "--target", "simple:0", "--kind", "proj", "--cutoff", "10"]),
        json!({"exceeds": 10})
    );
    assert_eq!(value(&["--algebra", "dual-q", "--target", "regular", "--kind", "inj"]), json!({"finite": 0}));
    assert_eq!(value(&["--algebra", "square-q", "--target", "simple:3", "--kind", "flat"]), json!({"finite": 2}));
    // A in degree -2 is A[2]
    assert_eq!(value(&["--algebra", "a2-q", "--target", "regular@-2", "--kind", "inj"]), json!({"finite": -1}));
    assert_eq!(value(&["--algebra", "a2-q", "--target", "regular@2", "--kind", "inj"]), json!({"finite": 3}));

    let b = dir.path().join("b.json");
    homalg(dir.path(), &["--no-cache", "trivext", "--algebra", "a2-q", "-o", b.to_str().unwrap()]);
    let v = value(&["--dgring", b.to_str().unwrap(), "--target", "regular", "--kind", "proj"]);
    assert_eq!(v, json!({"finite": 0}));
}

#[test]
fn trivext_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let o = homalg(
        dir.path(),
        &["--no-cache", "trivext", "--algebra", "a2-q", "--shift", "-1", "-o", out.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["h0_equals_algebra"], true);
    let o = homalg(dir.path(), &["--no-cache", "trivext", "--algebra", "a2-q", "--shift", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-negative degree 0"));
}

#[test]
fn fpd_examples() {
    let dir = tempfile::tempdir().unwrap();
    let observed = |fx: &str| {
        let o = homalg(dir.path(), &["--no-cache", "fpd", "--algebra", fx]);
        assert_eq!(o.status.code(), Some(0));
        json_out(&o)
    };
    let a2 = observed("a2-q");
    assert_eq!(a2["observed"], json!({"finite": 1}));
    assert!(a2["witness"]["module"]["dimension"].is_u64());
    assert_eq!(observed("kxk-q")["observed"], json!({"finite": 0}));
    assert_eq!(observed("dual-q")["observed"], json!({"finite": 0}));
}

#[test]
fn dualizing_and_tor() {
    let dir = tempfile::tempdir().unwrap();
    let o = homalg(dir.path(), &["--no-cache", "dualizing", "--algebra", "a2-q", "--with", "regular"]);
    assert_eq!(o.status.code(), Some(3));
    let v = json_out(&o);
    assert_eq!(v["valid"], false);
    assert!(v["checks"]["left_inj"] == false || v["checks"]["right_inj"] == false);
    let o = homalg(dir.path(), &["--no-cache", "dualizing", "--algebra", "dual-q", "--with", "regular"]);
    assert_eq!(o.status.code(), Some(0));
    let o = homalg(dir.path(), &["--no-cache", "dualizing", "--algebra", "square-f5", "--with", "da@-1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = homalg(
        dir.path(),
        &["--no-cache", "tor-cert", "--algebra", "dual-q", "--bimodule", "simple", "--degrees", "0..=4"],
    );
    let dims: Vec<u64> = json_out(&o)["tor"].as_array().unwrap().iter().map(|t| t["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 1, 1, 1]);
    let o = homalg(dir.path(), &["--no-cache", "--cutoff", "4", "tor-cert", "--algebra", "dual-q", "--degrees", "40"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = homalg(dir.path(), &["--no-cache", "--cutoff", "6", "verify", "--fixtures", "a2-q,dual-f5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["totals"]["verified"], 8);
    assert_eq!(v["reports"][0]["instance"], "a2-q");

    // at cutoff 0 the periodic resolutions over k[x]/(x^3) are not yet certified
    let o = homalg(dir.path(), &["--no-cache", "--cutoff", "0", "verify", "--fixtures", "cubic-q"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["verdict"], "inconclusive");

    let junit = dir.path().join("junit.xml");
    let o = homalg(
        dir.path(),
        &[
            "--no-cache",
            "--cutoff",
            "6",
            "verify",
            "--suite",
            "lifting",
            "--fixtures",
            "a2-q",
            "--mutate",
            "corrupt-section",
            "--junit",
            junit.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    let xml = std::fs::read_to_string(&junit).unwrap();
    assert!(xml.contains("failures=\"1\"") && xml.contains("<failure"));
    let o = homalg(
        dir.path(),
        &["--no-cache", "--cutoff", "6", "verify", "--suite", "lifting", "--fixtures", "a3-q", "--mutate", "drop-sign"],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_precedence_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("homalg.toml"), "cutoff = 3\ncache = \"cfg-cache\"\n").unwrap();
    let args = ["dims", "--algebra", "dual-q", "--target", "simple:0", "--kind", "proj"];
    let o = homalg(dir.path(), &args);
    assert_eq!(json_out(&o)["value"], json!({"exceeds": 3}));
    assert!(dir.path().join("cfg-cache").is_dir());

    let o = Command::new(env!("CARGO_BIN_EXE_homalg"))
        .current_dir(dir.path())
        .env("HOMALG_CUTOFF", "5")
        .env("HOMALG_CACHE", "env-cache")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(json_out(&o)["value"], json!({"exceeds": 5}));
    assert!(dir.path().join("env-cache").is_dir());

    let o = Command::new(env!("CARGO_BIN_EXE_homalg"))
        .current_dir(dir.path())
        .env("HOMALG_CUTOFF", "5")
        .args(["--cutoff", "7"])
        .args(args)
        .output()
        .unwrap();
    assert_eq!(json_out(&o)["value"], json!({"exceeds": 7}));

    std::fs::write(dir.path().join("homalg.toml"), "cutof = 3\n").unwrap();
    assert_eq!(homalg(dir.path(), &args).status.code(), Some(1));
}

#[test]
fn corrupted_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let args = ["--cache", cache.to_str().unwrap(), "--cutoff", "6", "verify", "--fixtures", "a2-q"];
    let first = homalg(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    // replace every payload by a plausible but wrong report, keeping the old digest
    let mut touched = 0;
    for shard in std::fs::read_dir(&cache).unwrap() {
        for entry in std::fs::read_dir(shard.unwrap().path()).unwrap() {
            let p = entry.unwrap().path();
            let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            if v["payload"].get("verdict").is_some() {
                v["payload"]["verdict"] = json!("VIOLATION");
                touched += 1;
            }
            std::fs::write(&p, v.to_string()).unwrap();
        }
    }
    assert!(touched > 0);
    let second = homalg(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let third = homalg(dir.path(), &args);
    assert_eq!(first.stdout, third.stdout);
}
