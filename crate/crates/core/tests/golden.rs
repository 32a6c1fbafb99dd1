//! Every bundled fixture through every command, compared with files under `tests/golden/`.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use homalg::cli::input::fixtures;
use homalg::cli::run;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn commands(fixture: &str) -> Vec<(&'static str, Vec<String>)> {
    let f = fixture.to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("ingest", [s(&["ingest"]), vec![f.clone()]].concat()),
        ("dims", [s(&["dims", "--kind", "inj", "--target", "regular", "--algebra"]), vec![f.clone()]].concat()),
        ("trivext", [s(&["trivext", "--shift", "-1", "--algebra"]), vec![f.clone()]].concat()),
        ("dualizing", [s(&["dualizing", "--algebra"]), vec![f.clone()]].concat()),
        ("fpd", [s(&["fpd", "--algebra"]), vec![f.clone()]].concat()),
        ("verify", [s(&["verify", "--fixtures"]), vec![f.clone()]].concat()),
        ("tor-cert", [s(&["tor-cert", "--algebra"]), vec![f]].concat()),
    ]
}

fn run_cli(args: &[String]) -> (i32, String, String) {
    let mut argv =
        vec!["homalg".to_string(), "--no-cache".into(), "--cutoff".into(), "6".into(), "--max-dim".into(), "4".into()];
    argv.extend(args.iter().cloned());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, |_| None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn golden_outputs() {
    let update = std::env::var("UPDATE_GOLDEN").is_ok();
    let mut mismatches = Vec::new();
    for fx in fixtures() {
        for (cmd, args) in commands(fx.name) {
            let (code, out, err) = run_cli(&args);
            assert_eq!(code, 0, "{cmd} {}: exit {code}, stderr {err}", fx.name);
            let path = golden_dir().join(cmd).join(format!("{}.json", fx.name));
            if update {
                std::fs::create_dir_all(path.parent().unwrap()).unwrap();
                std::fs::write(&path, &out).unwrap();
                continue;
            }
            let want =
                std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            if want != out {
                mismatches.push(format!("{cmd} {}", fx.name));
            }
        }
    }
    assert!(mismatches.is_empty(), "outputs differ from golden files: {mismatches:?}");
}

/// The trivial extension of k written with `-o` matches the golden file byte for byte.
#[test]
fn trivext_file_output_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let args: Vec<String> = ["trivext", "--algebra", "k-q", "--shift", "-1", "-o", out.to_str().unwrap()]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (code, _, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    let written = std::fs::read(&out).unwrap();
    let golden = std::fs::read(golden_dir().join("trivext").join("k-q.json")).unwrap();
    assert_eq!(written, golden);
}
