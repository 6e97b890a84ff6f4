use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn foxweave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foxweave"))
        .args(args)
        .env_remove("FOXWEAVE_M")
        .env_remove("FOXWEAVE_N_MAX")
        .env_remove("FOXWEAVE_COEFF")
        .env_remove("FOXWEAVE_FORMAT")
        .env_remove("FOXWEAVE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn rows(report: &Value) -> Vec<(i64, i64, i64, i64)> {
    report["rows"]
        .as_array()
        .expect("rows")
        .iter()
        .map(|r| (r["r"].as_i64().unwrap(), r["p"].as_i64().unwrap(), r["q"].as_i64().unwrap(), r["dim"].as_i64().unwrap()))
        .collect()
}

#[test]
fn enumerate_counts() {
    for (m, n, want) in [("2", "3", "24 trees"), ("2", "1", "1 tree"), ("3", "2", "6 trees")] {
        let o = foxweave(&["enumerate", "--m", m, "--n", n, "--format", "text"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().next(), Some(want));
        let o = foxweave(&["enumerate", "--m", m, "--n", n]);
        assert_eq!(json(&o)["summary"], want);
    }
    let listed = foxweave(&["enumerate", "--m", "2", "--n", "2", "--list"]);
    assert_eq!(json(&listed)["trees"].as_array().unwrap().len(), 4);
}

#[test]
fn sphere_column_on_first_page() {
    let o = foxweave(&["pages", "--m", "3", "--n-max", "2", "--coeff", "q"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&o);
    let e1: Vec<(i64, i64)> = rows(&report).into_iter().filter(|&(r, p, _, _)| r == 1 && p == -2).map(|(_, _, q, d)| (q, d)).collect();
    // Zero-dimensional entries are omitted from reports.
    assert_eq!(e1, vec![(0, 1), (2, 1)]);
}

#[test]
fn single_column_report() {
    let o = foxweave(&["pages", "--m", "2", "--n-max", "1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("r,p,q,dim,reliable\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(3).is_some_and(|d| d != "0")));
}

#[test]
fn mod_two_pages_equal_rational_pages() {
    let q = foxweave(&["pages", "--m", "2", "--n-max", "3", "--coeff", "q"]);
    let f2 = foxweave(&["pages", "--m", "2", "--n-max", "3", "--coeff", "fp:2"]);
    assert!(q.status.success() && f2.status.success());
    assert_eq!(rows(&json(&q)), rows(&json(&f2)));
}

#[test]
fn exit_codes_and_error_json() {
    let z = foxweave(&["pages", "--coeff", "z"]);
    assert_eq!(z.status.code(), Some(2));
    assert_eq!(error_json(&z)["exit_code"], 2);

    let not_prime = foxweave(&["pages", "--coeff", "fp:4"]);
    assert_eq!(not_prime.status.code(), Some(2));

    let unknown = foxweave(&["verify", "everything"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(error_json(&unknown)["message"].as_str().unwrap().contains("everything"));

    let capped = foxweave(&["enumerate", "--m", "2", "--n", "6", "--cap", "10"]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(error_json(&capped)["exit_code"], 3);

    let bad_m = foxweave(&["enumerate", "--m", "1", "--n", "2"]);
    assert_eq!(bad_m.status.code(), Some(2));

    let passing = foxweave(&["verify", "geometry", "--samples", "20", "--format", "text"]);
    assert_eq!(passing.status.code(), Some(0));
    assert!(stdout(&passing).lines().all(|l| l.starts_with("PASS")));

    let twisted = foxweave(&["verify", "twisted", "--samples", "20", "--format", "text"]);
    assert_eq!(twisted.status.code(), Some(1));
    let text = stdout(&twisted);
    assert!(text.contains("FAIL twisted/worked-example-twisted"));
    assert!(text.contains("PASS twisted/worked-example-permutation"));
    assert_eq!(error_json(&twisted)["exit_code"], 1);
}

#[test]
fn verify_is_deterministic_under_a_seed() {
    let a = foxweave(&["verify", "geometry", "--samples", "30", "--seed", "7", "--format", "csv"]);
    let b = foxweave(&["verify", "geometry", "--samples", "30", "--seed", "7", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn environment_overrides_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_foxweave"))
        .args(["enumerate", "--n", "2", "--format", "text"])
        .env("FOXWEAVE_M", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).lines().next(), Some("6 trees"));
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn sha256_of(path: &Path) -> String {
    foxweave::complex::export::sha256_hex(&fs::read(path).unwrap())
}

#[test]
fn bicomplex_export_is_bit_stable_and_hashed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let o = foxweave(&["export", "bicomplex", dir.to_str().unwrap(), "--m", "2", "--n-max", "3"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let manifest = read_json(&a.path().join("manifest.json"));
    let entries = manifest["bidegrees"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        for key in ["h", "v"] {
            if let Some(file) = e[key].as_object() {
                assert!(file["rows"].is_u64());
                let name = file["file"].as_str().unwrap();
                assert_eq!(sha256_of(&a.path().join(name)), file["sha256"].as_str().unwrap());
                assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
            }
        }
    }
    assert_eq!(fs::read(a.path().join("manifest.json")).unwrap(), fs::read(b.path().join("manifest.json")).unwrap());
    let back = foxweave::complex::import_bicomplex(a.path()).unwrap();
    let (fresh, _) = foxweave::complex::Bicomplex::build(2, 3, Default::default()).unwrap();
    for n in 0..=3 {
        for d in 0..=fresh.max_degree(n) {
            assert_eq!(back.h(d, n), fresh.h(d, n));
            assert_eq!(back.v(d, n), fresh.v(d, n));
        }
    }
}

#[test]
fn pages_export_matches_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = foxweave(&["export", "pages", dir.path().to_str().unwrap(), "--m", "2", "--n-max", "2"]);
    assert!(o.status.success());
    let manifest = read_json(&dir.path().join("manifest.json"));
    for f in manifest["files"].as_array().unwrap() {
        let name = f["file"].as_str().unwrap();
        assert_eq!(sha256_of(&dir.path().join(name)), f["sha256"].as_str().unwrap());
    }
}

#[test]
fn cached_and_cold_runs_agree() {
    let cache = tempfile::tempdir().unwrap();
    let dir = cache.path().to_str().unwrap();
    let cold = foxweave(&["pages", "--m", "2", "--n-max", "3"]);
    let first = foxweave(&["pages", "--m", "2", "--n-max", "3", "--cache-dir", dir]);
    let second = foxweave(&["pages", "--m", "2", "--n-max", "3", "--cache-dir", dir]);
    let (cold, first, second) = (json(&cold), json(&first), json(&second));
    assert_eq!(first["cache"], "miss");
    assert_eq!(second["cache"], "hit");
    assert_eq!(cold["rows"], first["rows"]);
    assert_eq!(first["rows"], second["rows"]);
}

#[test]
fn matrix_market_format_is_refused_for_pages() {
    let o = foxweave(&["pages", "--format", "mm"]);
    assert_eq!(o.status.code(), Some(2));
}
