use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pesinlab"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn run(config: &Path, out: &Path, threads: Option<usize>) -> Output {
    let mut cmd = bin();
    cmd.args(["run", "--config"]).arg(config).arg("--out").arg(out);
    cmd.env_remove("PESINLAB_THREADS");
    if let Some(t) = threads {
        cmd.args(["--threads", &t.to_string()]);
    }
    cmd.output().unwrap()
}

fn report(out: &Path, prefix: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{prefix}_report.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect(),
        Err(_) => Vec::new(),
    };
    v.sort();
    v
}

#[test]
fn lyapunov_report_has_cat_exponents() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"system":"cat","experiment":"lyapunov","n":100}"#);
    let out = tmp.path().join("out");
    let o = run(&cfg, &out, Some(2));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "lyapunov");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "pass");
    let e = r["results"]["exponents"].as_array().unwrap();
    assert!((e[0].as_f64().unwrap() + 0.962424).abs() < 1e-6);
    assert!((e[1].as_f64().unwrap() - 0.962424).abs() < 1e-6);
    assert_eq!(r["outputs"], serde_json::json!(["lyapunov_exponents.csv"]));
    assert!(out.join("lyapunov_exponents.csv").exists());
}

#[test]
fn census_counts_points_per_period() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"cat","experiment":"census","max_period":2,"output":"c"}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run(&cfg, &out, None).status.code(), Some(0));
    let r = report(&out, "c");
    // One fixed point at period 1, five points fixed by f² (the fixed point included).
    assert_eq!(r["results"]["count"], 6);
    assert_eq!(r["results"]["distinct"], 5);
    let summary = std::fs::read_to_string(out.join("c_summary.csv")).unwrap();
    let rows: Vec<&str> = summary.lines().collect();
    assert_eq!(rows[0], "period,found,expected,failures");
    assert!(rows[1].starts_with("1,1,1,"));
    assert!(rows[2].starts_with("2,5,5,"));
}

#[test]
fn missing_key_exits_64_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"system":"cat","experiment":"pesin-block","K":1}"#);
    let out = tmp.path().join("out");
    let o = run(&cfg, &out, None);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zeta"));
    assert!(files(&out).is_empty());

    let v = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(v.status.code(), Some(64));
}

#[test]
fn malformed_and_unknown_keys_exit_64() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    for body in [
        "{not json",
        r#"{"system":"cat","experiment":"lyapunov","n":100,"colour":3}"#,
        r#"{"system":"moebius","experiment":"lyapunov","n":100}"#,
    ] {
        let cfg = write_config(tmp.path(), body);
        assert_eq!(run(&cfg, &out, None).status.code(), Some(64), "{body}");
    }
    assert!(files(&out).is_empty());
}

#[test]
fn module_error_writes_only_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"henon","experiment":"shadow","delta":0.5,"T":60,"burn_in":0,"seed":3}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run(&cfg, &out, None).status.code(), Some(1));
    assert_eq!(files(&out), ["shadow_report.json"]);
    let r = report(&out, "shadow");
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["name"], "OrbitEscape");
    assert!(r["error"]["orbit_index"].is_i64());
}

#[test]
fn failed_check_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    // A decay rate no closing experiment reaches.
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"cat","experiment":"close","delta":0.05,"T":20,"N":200,"samples":60,"theta":50.0}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run(&cfg, &out, None).status.code(), Some(2));
    let r = report(&out, "close");
    assert_eq!(r["status"], "fail");
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["theta_at_least"]);
}

#[test]
fn threads_env_var_is_the_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"system":"cat","experiment":"lyapunov","n":50}"#);
    let out = tmp.path().join("out");
    let o = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .env("PESINLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&out, "lyapunov")["threads"], 3);

    let o = bin()
        .args(["run", "--threads", "2", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .env("PESINLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&out, "lyapunov")["threads"], 2);
}

#[test]
fn no_partial_files_are_left_behind() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"perturbed_cat","experiment":"manifolds","target_length":1.5}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run(&cfg, &out, Some(4)).status.code(), Some(0));
    let names = files(&out);
    assert!(names.iter().all(|n| !n.ends_with(".partial")), "{names:?}");
    assert_eq!(
        names,
        [
            "manifolds_intersections.csv",
            "manifolds_profile.csv",
            "manifolds_report.json",
            "manifolds_stable.csv",
            "manifolds_unstable.csv",
        ]
    );
}

#[test]
fn list_systems_and_validate() {
    let o = bin().arg("list-systems").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["cat", "perturbed_cat", "henon", "standard", "cob_mixed"] {
        assert!(text.contains(name), "{name}");
    }
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"henon","experiment":"lyapunov","n":100}"#,
    );
    let v = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn henon_lyapunov_sum_is_log_b() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"system":"henon","experiment":"lyapunov","n":2000,"burn_in":200,"samples":3}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run(&cfg, &out, None).status.code(), Some(0));
    let r = report(&out, "lyapunov");
    let e = r["results"]["exponents"].as_array().unwrap();
    let sum = e[0].as_f64().unwrap() + e[1].as_f64().unwrap();
    assert!((sum - 0.3f64.ln()).abs() < 1e-9);
    // Known top exponent of the classical attractor, about 0.42.
    assert!((e[1].as_f64().unwrap() - 0.42).abs() < 0.03);
}
