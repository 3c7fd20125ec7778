use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn psllab(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_psllab"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("PSL_LAB_CACHE", dir),
        None => cmd.env_remove("PSL_LAB_CACHE"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn suite(manifest: &str, cache: Option<&Path>) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.txt");
    std::fs::write(&path, manifest).unwrap();
    let out = psllab(&["run-suite", path.to_str().unwrap()], cache);
    let code = out.status.code().unwrap();
    let report = serde_json::from_str(&stdout(&out)).unwrap_or(Value::Null);
    (code, report)
}

#[test]
fn spectra_f_prints_value() {
    let out = psllab(&["spectra-f", "--n", "5"], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "131");
}

#[test]
fn godel_decode_zero_is_identity() {
    let out = psllab(&["godel-decode", "--z", "0", "--d", "3", "--ring", "Z"], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 0 0\n0 1 0\n0 0 1");
    let out = psllab(&["--json", "godel-decode", "--z", "-115", "--d", "3"], None);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "1,0,5;0,1,0;0,0,1");
    let enc = psllab(&["godel-encode", "--g", "1,0,5;0,1,0;0,0,1"], None);
    assert_eq!(stdout(&enc).trim(), "-115");
}

#[test]
fn cong_def_prints_pass_table() {
    let out = psllab(&["cong-def", "--n", "3", "--q", "2", "--kmax", "32"], None);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with("pass")).count(), 5);
    assert!(text.contains("all pass: true"));
}

#[test]
fn usage_and_runtime_errors_exit_nonzero() {
    assert_eq!(psllab(&["spectra-f", "--n", "x"], None).status.code(), Some(2));
    assert_eq!(psllab(&["godel-decode", "--z", "7", "--d", "3"], None).status.code(), Some(1));
}

#[test]
fn empty_manifest_passes() {
    let (code, report) = suite("# no jobs\n", None);
    assert_eq!(code, 0);
    assert_eq!(report["jobs"].as_array().unwrap().len(), 0);
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn manifest_expectations() {
    let (code, report) = suite("id=f4 op=f_count n=4 expect=55\n", None);
    assert_eq!(code, 0);
    assert_eq!(report["jobs"][0]["status"], "pass");
    let (code, report) = suite("id=f4 op=f_count n=4 expect=54\n", None);
    assert_eq!(code, 1);
    assert_eq!(report["jobs"][0]["status"], "fail");
    let (code, report) = suite("id=d op=godel-decode z=7 d=3\nid=t op=torus-span n=3 expect=pass\n", None);
    assert_eq!(code, 1);
    assert_eq!(report["jobs"][0]["status"], "error");
    assert_eq!(report["jobs"][1]["status"], "pass");
    let (code, _) = suite("id=d op=godel-decode z=7 d=3 expect=exploratory\n", None);
    assert_eq!(code, 0);
}

#[test]
fn malformed_manifest_exits_2() {
    assert_eq!(suite("id=a op=f_count n=four\n", None).0, 2);
    assert_eq!(suite("id=a op=unknown\n", None).0, 2);
    let out = psllab(&["run-suite", "/nonexistent/manifest"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn warm_cache_reports_are_identical_up_to_timing() {
    let cache = tempfile::tempdir().unwrap();
    let manifest = "id=cong op=cong-def q=2\n\
                    id=ups op=fo-define q=2 library=phi_upsilon standard=true expect=2\n\
                    id=f5 op=spectra-f n=5 expect=131\n";
    let strip = |mut v: Value| {
        for j in v["jobs"].as_array_mut().unwrap() {
            j["elapsed_ms"] = Value::Null;
        }
        v
    };
    let (c0, cold) = suite(manifest, Some(cache.path()));
    let (c1, warm1) = suite(manifest, Some(cache.path()));
    let (c2, warm2) = suite(manifest, Some(cache.path()));
    assert_eq!((c0, c1, c2), (0, 0, 0));
    // parallel jobs may already share the cache on the cold run
    assert!(cold["summary"]["cache_hits"].as_u64().unwrap() <= 2);
    assert_eq!(warm1["summary"]["cache_hits"], 2);
    assert_eq!(strip(warm1), strip(warm2));
}
