use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kgwell(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgwell"))
        .args(args)
        .arg("-o")
        .arg(out)
        .output()
        .unwrap()
}

fn metadata(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("metadata.json")).unwrap()).unwrap()
}

#[test]
fn invalid_nu_fails_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    for nu in ["1", "1.5", "0", "-0.2", "nan"] {
        let out = tmp.path().join(format!("run-{nu}"));
        let r = kgwell(&["evolve-flat", "--nu", nu], &out);
        assert_eq!(r.status.code(), Some(2), "nu={nu}: {}", String::from_utf8_lossy(&r.stderr));
        assert!(String::from_utf8_lossy(&r.stderr).contains("nu"));
        assert!(!out.exists());
    }
}

#[test]
fn cfl_violation_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("cfl");
    let r = kgwell(&["evolve-strip", "--points", "128", "--cfl", "1.5"], &out);
    assert_eq!(r.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn outputs_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["evolve-flat", "--points", "256", "--t-end", "0.5", "--snapshots", "0,0.25,0.5", "--svg"];
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(kgwell(&args, &a).status.success());
    assert!(kgwell(&args, &b).status.success());
    let files = metadata(&a)["files"].as_array().unwrap().clone();
    assert!(files.len() >= 8);
    for f in files {
        let name = f.as_str().unwrap();
        if name == "timings.json" {
            continue;
        }
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name} differs");
    }
}

#[test]
fn metadata_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m");
    let r = kgwell(&["modes", "--nu", "1/2", "--n", "3", "--points", "101"], &out);
    assert!(r.status.success());
    let m = metadata(&out);
    assert_eq!(m["schema"], "kgwell-run");
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["scenario"], "modes");
    assert_eq!(m["results"]["interior_nodes"], 2);
    assert!((m["config"]["nu"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    let csv = fs::read_to_string(out.join("mode.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102);
    assert_eq!(csv.lines().next().unwrap(), "x,re_psi,im_psi,abs2_psi");
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "nu = 0.25\nn = 4\npoints = 65\n").unwrap();
    let out = tmp.path().join("c");
    let r = kgwell(&["modes", "--config", cfg.to_str().unwrap(), "--n", "5"], &out);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let m = metadata(&out);
    assert_eq!(m["config"]["nu"], 0.25);
    assert_eq!(m["results"]["interior_nodes"], 4);

    fs::write(&cfg, "speed = 0.25\n").unwrap();
    let bad = tmp.path().join("bad");
    let r = kgwell(&["modes", "--config", cfg.to_str().unwrap()], &bad);
    assert_eq!(r.status.code(), Some(2));
    assert!(!bad.exists());
}

#[test]
fn mode_evolution_reports_error_against_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let r = kgwell(&["evolve-strip", "--init", "mode", "--n", "1", "--points", "257"], &out);
    assert!(r.status.success());
    let m = metadata(&out);
    assert!(m["results"]["max_error_vs_exact"].as_f64().unwrap() < 1e-3);
    assert!(m["results"]["norm_drift"].as_f64().unwrap() < 1e-8);
}
