use std::fs;
use std::path::Path;
use std::process::Command;

use bettibound::ffcount::{Cache, CacheRecord};
use bettibound_cli::{cache_gc, parse_polynomial, run, run_job, RunOptions};
use proptest::prelude::*;
use serde_json::Value;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("bettibound").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn job(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const ZETA_JOB: &str = r#"
# the curve y^2 + y = x^3 over F_2
name = "curve"
field = { p = 2 }
domain = "affine"
system = ["x2^2 + x2 - x1^3"]
m_max = 8
checks = ["total_degree"]

[params]
n = 2
r = 1
d = 3
"#;

#[test]
fn bound_job_prints_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = job(dir.path(), "order.toml", "kind = \"order\"\nn = 3\nr = 2\nd = 4\n");
    assert_eq!(run_args(&["verify", &path]), (0, "26244\n".to_string(), String::new()));
}

#[test]
fn zeta_job_reports_total_degree() {
    let dir = tempfile::tempdir().unwrap();
    let path = job(dir.path(), "zeta.toml", ZETA_JOB);
    let (code, out, err) = run_args(&["--json", "verify", &path]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let rec = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "reconstruction").unwrap();
    assert_eq!(rec["verdict"], "PASS");
    assert_eq!(rec["artifacts"]["zeta"]["total_degree"], 3);
}

#[test]
fn json_job_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = job(dir.path(), "b.json", r#"{"kind": "ci_total", "params": {"n": 2, "r": 1, "d": 3}}"#);
    assert_eq!(run_args(&["verify", &path]).1, "16\n");
}

#[test]
fn malformed_jobs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = job(dir.path(), "bad.toml", "kind = \"order\"\nn = \n");
    let (code, _, err) = run_args(&["verify", &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    let unknown = job(dir.path(), "unknown.toml", "kind = \"order\"\nn = 1\nr = 1\nd = 2\ncolour = 3\n");
    let (code, _, err) = run_args(&["verify", &unknown]);
    assert_eq!(code, 1);
    assert!(err.contains("colour"), "{err}");
    let syntax = job(dir.path(), "poly.toml", "field = { p = 2 }\ndomain = \"affine(2)\"\nsystem = [\"x1 + + x2\"]\n");
    let (code, _, err) = run_args(&["verify", &syntax]);
    assert_eq!(code, 1);
    assert!(err.contains("offset 5"), "{err}");
}

#[test]
fn failing_and_unstable_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let short = ZETA_JOB.replace("m_max = 8", "m_max = 3");
    let path = job(dir.path(), "short.toml", &short);
    assert_eq!(run_args(&["verify", &path]).0, 3);
    let cubic = job(
        dir.path(),
        "cubic.toml",
        "field = { p = 2 }\ndomain = \"affine(1)\"\nf = \"x1^3\"\nm_max = 8\nchecks = [\"np_dominance\"]\n",
    );
    let (code, out, _) = run_args(&["--csv", "verify", &cubic]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("scenario,name,verdict,lhs,rhs\n"));
}

#[test]
fn warm_cache_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    fs::create_dir(&cache).unwrap();
    let path = job(dir.path(), "zeta.toml", ZETA_JOB);
    let opts = RunOptions { cache: Some(cache.clone()), ..RunOptions::default() };
    let mut first = Vec::new();
    assert_eq!(run_job(Path::new(&path), &opts, &mut first, &mut Vec::new()), 0);
    let warm = RunOptions { budget: Some(0), ..opts };
    let mut second = Vec::new();
    assert_eq!(run_job(Path::new(&path), &warm, &mut second, &mut Vec::new()), 0);
    assert_eq!(first, second);
}

#[test]
fn output_path_in_job_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let text = format!("{ZETA_JOB}\n[output]\nformat = \"json\"\npath = {:?}\n", target.to_str().unwrap());
    let path = job(dir.path(), "out.toml", &text);
    let (code, out, _) = run_args(&["verify", &path]);
    assert_eq!((code, out.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["scenario"]["name"], "curve");
}

fn record(i: u32) -> CacheRecord {
    CacheRecord::count(format!("key{i}"), i, &num_bigint::BigInt::from(i))
}

#[test]
fn cache_gc_examples() {
    let dir = tempfile::tempdir().unwrap();
    let empty = cache_gc(dir.path(), 1 << 20).unwrap();
    assert!(empty.evicted.is_empty() && empty.bytes_before == empty.bytes_after);
    {
        let cache = Cache::open(dir.path()).unwrap();
        for i in 0..4 {
            cache.put(record(i)).unwrap();
        }
    }
    let before = cache_gc(dir.path(), u64::MAX).unwrap().bytes_after;
    let partial = cache_gc(dir.path(), before - 1).unwrap();
    assert_eq!(partial.evicted, vec!["key0".to_string()]);
    let cleared = cache_gc(dir.path(), 0).unwrap();
    assert_eq!(cleared.kept, 0);
    assert!(cache_gc(&dir.path().join("missing"), 0).is_err());
    let (code, out, _) = run_args(&["--json", "cache", "gc", dir.path().to_str().unwrap(), "--max-bytes", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"evicted\""));
}

#[test]
fn subcommands() {
    assert_eq!(run_args(&["polytope", "mixed", "0,0 1,0", "0,0 0,1"]).1, "mixed_volume  1/2\n");
    let (_, out, _) = run_args(&["--json", "polytope", "khovanskii", "0,0 2,0 0,2 2,2"]);
    assert!(out.contains("\"-8\""), "{out}");
    let (_, out, _) = run_args(&["--json", "hodge", "polytope", "0 3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["slopes"], "{0, 1/3, 2/3}");
    let (code, out, _) = run_args(&["--json", "--mmax", "6", "expsum", "--p", "3", "--n", "1", "--f", "x1^2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total_degree"], 1);
    assert_eq!(v["numerator_slopes"], "{1/2}");
    let (code, out, _) = run_args(&["--json", "polytope", "bound", "as_improved", "--delta", "0,0 1,0 0,1", "--s", "0,0 1,0 0,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"4\""), "{out}");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_bettibound");
    let ok = Command::new(bin).args(["bound", "order", "--n", "2", "--r", "1", "--d", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "147\n");
    let bad = Command::new(bin).args(["bound"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

proptest! {
    #[test]
    fn parse_print_parse_is_identity(terms in prop::collection::vec((-20i64..20, -3i64..4, 0i64..4), 0..6)) {
        let src = terms
            .iter()
            .map(|(c, a, b)| format!("({c})*x1^{a}*x2^{b}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let src = if src.is_empty() { "0".to_string() } else { src };
        let p = parse_polynomial(&src, 2).unwrap();
        let printed = p.to_string();
        let q = parse_polynomial(&printed, 2).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(printed, q.to_string());
    }
}
