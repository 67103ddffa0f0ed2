use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dp3_core::laurent::SIGMA;
use dp3_core::Poly;
use serde_json::Value;

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn new() -> Self {
        Env { dir: tempfile::tempdir().unwrap() }
    }

    fn cal(&self) -> PathBuf {
        self.dir.path().join("cal.json")
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        self.run_with(&self.cal(), args)
    }

    fn run_with(&self, cal: &Path, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_dp3"))
            .args(args)
            .arg("--calibration")
            .arg(cal)
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn poly(o: &Output) -> Poly {
    json(o)["polynomial"].as_str().unwrap().parse().unwrap()
}

#[test]
fn compute_y1_by_recurrence() {
    let env = Env::new();
    let out = env.run(&["compute", "--target", "y", "--n", "1", "--via", "recurrence"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    let value: Poly = first.strip_prefix("y_1 = ").unwrap().parse().unwrap();
    assert_eq!(value, "x2^-1 x3 x5 + x1 x2^-1 x6".parse().unwrap());
    assert!(text.contains("terms: 2"));
}

#[test]
fn matchings_route_equals_recurrence() {
    let env = Env::new();
    for target in ["y", "yp"] {
        for n in ["1", "2", "3"] {
            let a = env.run(&["compute", "--target", target, "--n", n, "--via", "matchings", "--format", "json"]);
            let b = env.run(&["compute", "--target", target, "--n", n, "--via", "recurrence", "--format", "json"]);
            assert!(a.status.success() && b.status.success());
            assert_eq!(poly(&a), poly(&b), "{target} {n}");
        }
    }
}

#[test]
fn seed_route_equals_recurrence() {
    let env = Env::new();
    for n in ["-2", "-1", "0", "4"] {
        let a = env.run(&["compute", "--target", "yp", "--n", n, "--via", "seed", "--format", "json"]);
        let b = env.run(&["compute", "--target", "yp", "--n", n, "--via", "recurrence", "--format", "json"]);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(poly(&a), poly(&b), "n={n}");
    }
}

#[test]
fn y6_evaluates_to_4096() {
    let env = Env::new();
    let out = env.run(&["compute", "--target", "y", "--n", "6", "--via", "recurrence", "--format", "json"]);
    assert_eq!(json(&out)["value_at_ones"], "4096");
}

#[test]
fn compute_usage_errors() {
    let env = Env::new();
    let out = env.run(&["compute", "--target", "y", "--n", "0", "--via", "matchings"]);
    assert_eq!(out.status.code(), Some(2));
    let out = env.run(&["compute", "--target", "y", "--n", "-3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = env.run(&["compute", "--target", "z", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

fn labels(v: &Value) -> Vec<usize> {
    let mut l: Vec<usize> = v["faces"].as_array().unwrap().iter().map(|f| f["label"].as_u64().unwrap() as usize).collect();
    l.sort();
    l
}

#[test]
fn export_json() {
    let env = Env::new();
    let p = env.path("d2.json");
    let out = env.run(&["export", "--half-order", "2", "--format", "json", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(labels(&v), vec![2, 4, 5]);
    assert_eq!(v["half_order"], 2);
    assert_eq!(v["primed"], false);
}

#[test]
fn export_primed_labels_are_sigma_images() {
    let env = Env::new();
    let read = |primed: bool| {
        let p = env.path(if primed { "p.json" } else { "u.json" });
        let mut args = vec!["export", "--half-order", "3", "--format", "json", "--out", p.to_str().unwrap()];
        if primed {
            args.push("--primed");
        }
        assert!(env.run(&args).status.success());
        serde_json::from_str::<Value>(&std::fs::read_to_string(&p).unwrap()).unwrap()
    };
    let mut image: Vec<usize> = labels(&read(false)).into_iter().map(|l| SIGMA.apply(l)).collect();
    image.sort();
    assert_eq!(labels(&read(true)), image);
}

#[test]
fn export_dot_square_and_determinism() {
    let env = Env::new();
    let p = env.path("d1.dot");
    let args = ["export", "--half-order", "1", "--format", "dot", "--out", p.to_str().unwrap()];
    assert!(env.run(&args).status.success());
    let first = std::fs::read(&p).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.matches("fillcolor").count(), 4);
    assert_eq!(text.matches(" -- ").count(), 4);
    assert!(env.run(&args).status.success());
    assert_eq!(std::fs::read(&p).unwrap(), first);
}

#[test]
fn export_svg() {
    let env = Env::new();
    let p = env.path("d.svg");
    let out = env.run(&["export", "--half-order", "4", "--primed", "--format", "svg", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&p).unwrap().starts_with("<svg"));
}

#[test]
fn export_io_error_exits_2() {
    let env = Env::new();
    let p = env.path("missing-dir").join("x.json");
    let out = env.run(&["export", "--half-order", "2", "--format", "json", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    let env = Env::new();
    for suite in ["quiver", "counts", "recursions", "oracle", "theorem"] {
        let out = env.run(&["verify", "--suite", suite, "--max-half-order", "5"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
    let text = stdout(&env.run(&["verify", "--suite", "counts", "--max-half-order", "5"]));
    assert!(text.contains("PASS counts/D_5/2 "));
}

#[test]
fn verify_all_defaults_json() {
    let env = Env::new();
    let out = env.run(&["verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suite"], "all");
    assert_eq!(v["passed"], true);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"theorem/y'_8"));
    assert!(ids.contains(&"quiver/period-6"));
}

#[test]
fn verify_output_is_reproducible_without_timings() {
    let env = Env::new();
    let args = ["verify", "--suite", "theorem", "--max-half-order", "4", "--no-timings"];
    assert_eq!(env.run(&args).stdout, env.run(&args).stdout);
}

#[test]
fn verify_usage_errors() {
    let env = Env::new();
    assert_eq!(env.run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(env.run(&["verify", "--max-half-order", "0"]).status.code(), Some(2));
}

#[test]
fn calibrate_writes_versioned_file() {
    let env = Env::new();
    let out_path = env.path("copy.json");
    let out = env.run(&["calibrate", "--recalibrate", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(json(&out), v);
    assert!(env.cal().exists());
    // a second run reads the cache
    let again = env.run(&["calibrate"]);
    assert!(String::from_utf8_lossy(&again.stderr).contains("loaded from"));
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn schema_mismatch_is_refused() {
    let env = Env::new();
    assert!(env.run(&["calibrate"]).status.success());
    let text = std::fs::read_to_string(env.cal()).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 7");
    std::fs::write(env.cal(), text).unwrap();
    let out = env.run(&["verify", "--suite", "quiver", "--max-half-order", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema version"));
}

#[test]
fn every_single_label_perturbation_fails_verification() {
    let env = Env::new();
    assert!(env.run(&["calibrate"]).status.success());
    let original: Value = serde_json::from_str(&std::fs::read_to_string(env.cal()).unwrap()).unwrap();
    for row in ["up", "down"] {
        for idx in 0..3 {
            let old = original["labeling"][row][idx].as_u64().unwrap();
            for new in (1..=6).filter(|&l| l != old) {
                let mut v = original.clone();
                v["labeling"][row][idx] = new.into();
                let p = env.path(&format!("mut-{row}-{idx}-{new}.json"));
                std::fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
                let out = env.run_with(&p, &["verify", "--suite", "theorem", "--max-half-order", "3"]);
                assert_eq!(out.status.code(), Some(1), "{row}[{idx}] = {new} went unnoticed");
            }
        }
    }
}
