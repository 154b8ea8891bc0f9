use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modrabi"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap_or(-1), String::from_utf8_lossy(&stdout).into(), String::from_utf8_lossy(&stderr).into())
}

/// A short, small-cutoff variant of the JC scenario.
fn small_scenario(dir: &Path) -> PathBuf {
    let mut v = read_json(&scenario("fig4jc"));
    v["fock_cutoff"] = 6.into();
    v["grid"]["t_end"] = serde_json::json!({"value": 5, "unit": "ns"});
    v["grid"]["samples"] = 51.into();
    write_json(dir, "small.json", &v)
}

#[test]
fn shipped_scenarios_validate() {
    for name in ["fig2a", "fig2d", "fig3a", "fig3d", "fig4jc", "fig4ajc", "fig5"] {
        let (code, out, err) = run(bin().arg("validate").arg(scenario(name)));
        assert_eq!(code, 0, "{name}: {err}");
        let report: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["schema_version"], 1, "{name}");
    }
}

#[test]
fn validation_errors_name_the_field() {
    let dir = TempDir::new().unwrap();
    let mut v = read_json(&scenario("fig2a"));
    v["grid"]["samples"] = 0.into();
    let (code, _, err) = run(bin().arg("validate").arg(write_json(dir.path(), "a.json", &v)));
    assert_eq!(code, 2);
    assert!(err.contains("grid.samples"), "{err}");

    let mut v = read_json(&scenario("fig2a"));
    v["system"]["g"] = serde_json::json!({"value": 70, "unit": "furlongs"});
    let (code, _, err) = run(bin().arg("validate").arg(write_json(dir.path(), "b.json", &v)));
    assert_eq!(code, 2);
    assert!(err.contains("system.g"), "{err}");

    let mut v = read_json(&scenario("fig2a"));
    v["drive"]["colour"] = "red".into();
    let (code, _, err) = run(bin().arg("validate").arg(write_json(dir.path(), "c.json", &v)));
    assert_eq!(code, 2);
    assert!(err.contains("drive"), "{err}");
}

#[test]
fn fixed_step_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let s = small_scenario(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let (code, _, err) = run(bin().arg("simulate").arg(&s).arg("-o").arg(out));
        assert_eq!(code, 0, "{err}");
    }
    let csv = std::fs::read(a.join("timeseries.csv")).unwrap();
    assert_eq!(csv, std::fs::read(b.join("timeseries.csv")).unwrap());
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("time_s,"));
    assert!(text.contains("\r\n"));
    assert_eq!(text.lines().count(), 52);
    let manifest = read_json(&a.join("manifest.json"));
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["status"], "ok");
}

#[test]
fn design_round_trips_through_simulation() {
    let dir = TempDir::new().unwrap();
    let emitted = dir.path().join("designed.json");
    let (code, out, err) =
        run(bin().args(["design", "--lambda", "1", "--gratio", "1.2", "--emit-scenario"]).arg(&emitted));
    assert_eq!(code, 0, "{err}");
    let design: Value = serde_json::from_str(&out).unwrap();
    let omega2 = design["parameters"]["drive"]["omega2_hz"].as_f64().unwrap();
    assert!((omega2 / 7.565e9 - 1.0).abs() < 0.01, "{omega2}");
    let eta2 = design["parameters"]["drive"]["eta2"].as_f64().unwrap();
    assert!((eta2 / 0.7173 - 1.0).abs() < 0.01, "{eta2}");

    let mut v = read_json(&emitted);
    v["grid"]["samples"] = 11.into();
    v["fock_cutoff"] = 8.into();
    v["grid"]["t_end"] = serde_json::json!({"value": 2, "unit": "ns"});
    let s = write_json(dir.path(), "short.json", &v);
    let (code, _, err) = run(bin().arg("simulate").arg(&s).arg("-o").arg(dir.path().join("run")));
    assert_eq!(code, 0, "{err}");
    let m = read_json(&dir.path().join("run").join("manifest.json"));
    let ratio = m["parameters"]["effective"]["coupling_ratio"].as_f64().unwrap();
    assert!((ratio - 1.2).abs() < 1e-6, "{ratio}");
}

#[test]
fn design_limits() {
    let (code, out, err) = run(bin().args(["design", "--lambda", "0", "--gratio", "0.5", "--pin", "red"]));
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["parameters"]["drive"]["eta2"].as_f64().unwrap(), 0.0);

    let (code, out, err) = run(bin().args(["design", "--lambda", "inf", "--gratio", "0.5"]));
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let eff = &v["parameters"]["effective"];
    assert!(eff["g_r_hz"].as_f64().unwrap().abs() < 1e-6 * eff["g_cr_hz"].as_f64().unwrap().abs());
    assert_eq!(v["parameters"]["detunings"]["delta1_hz"].as_f64().unwrap(), 0.0);
}

#[test]
fn unreachable_design_exits_4() {
    let (code, _, err) = run(bin().args(["design", "--lambda", "1", "--gratio", "1e-4"]));
    assert_eq!(code, 4, "{err}");
    let (code, _, _) = run(bin().args(["design", "--lambda", "-1", "--gratio", "1"]));
    assert_eq!(code, 2);
}

#[test]
fn sweep_rejects_single_point_and_bad_thread_count() {
    let dir = TempDir::new().unwrap();
    let s = small_scenario(dir.path());
    let (code, _, err) = run(bin()
        .arg("sweep")
        .arg(&s)
        .args(["--param", "drive.eta2", "--from", "0", "--to", "1", "--points", "1", "-o"])
        .arg(dir.path()));
    assert_eq!(code, 2, "{err}");

    let (code, _, err) = run(bin()
        .env("MODRABI_THREADS", "lots")
        .arg("sweep")
        .arg(&s)
        .args(["--param", "drive.eta2", "--from", "0", "--to", "1", "--points", "3", "-o"])
        .arg(dir.path()));
    assert_eq!(code, 2);
    assert!(err.contains("MODRABI_THREADS"), "{err}");
}

#[test]
fn sweep_writes_table_and_manifest() {
    let dir = TempDir::new().unwrap();
    let s = small_scenario(dir.path());
    let out = dir.path().join("sw");
    let (code, _, err) = run(bin()
        .env("MODRABI_THREADS", "2")
        .arg("sweep")
        .arg(&s)
        .args(["--param", "drive.eta2", "--from", "0.5", "--to", "0.9", "--points", "3", "-o"])
        .arg(&out));
    assert_eq!(code, 0, "{err}");
    let m = read_json(&out.join("sweep_manifest.json"));
    assert_eq!(m["completed"], 3);
    assert_eq!(m["results"].as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(csv.starts_with("sweep_value,time_s,sigma_pop,photon_number\r\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 51);
}

#[test]
fn applications_write_outputs() {
    let dir = TempDir::new().unwrap();
    let (code, _, err) =
        run(bin().args(["applications", "cat", "--gratio", "0.5", "--cutoff", "30", "-o"]).arg(dir.path()));
    assert_eq!(code, 0, "{err}");
    let m = read_json(&dir.path().join("cat_manifest.json"));
    assert!((m["xi_abs"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(dir.path().join("cat_path.csv").exists() && dir.path().join("cat_fock.csv").exists());

    let (code, out, err) = run(bin().args(["applications", "gate", "--gratio", "0.25", "-o"]).arg(dir.path()));
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("CNOT-equivalent: true"), "{out}");
    let m = read_json(&dir.path().join("gate_manifest.json"));
    assert!((m["entangling_power"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-15);
}
