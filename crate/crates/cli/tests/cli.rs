use std::process::{Command, Output};

fn tunnel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tunnel"))
        .args(args)
        .output()
        .expect("failed to launch tunnel")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn run_reports_all_engines() {
    let out = tunnel(&[
        "run",
        "--E-meV",
        "80",
        "--V0-meV",
        "70",
        "--d-nm",
        "10",
        "--phi-rad",
        "-0.3",
        "--rep",
        "b",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    let t: Vec<f64> = results.iter().map(|r| r["T1"].as_f64().unwrap()).collect();
    assert!((t[0] - t[1]).abs() < 1e-9 && (t[1] - t[2]).abs() < 1e-9);
    assert_eq!(v["rep"], "b");
    assert_eq!(v["kinematics"]["regime"], "propagating");
}

#[test]
fn run_two_by_two_single_engine() {
    let out = tunnel(&[
        "run",
        "--E-meV",
        "40",
        "--V0-meV",
        "50",
        "--d-nm",
        "10",
        "--phi-rad",
        "0.1",
        "--model",
        "2x2",
        "--engine",
        "oracle",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert_eq!(v["kinematics"]["regime"], "evanescent");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tunnel(&["run", "--E-meV", "80"]).status.code(), Some(2));
    assert_eq!(
        tunnel(&["preset", "fig9", "--out", "x.csv"]).status.code(),
        Some(2)
    );
    let out = tunnel(&[
        "run",
        "--E-meV",
        "0",
        "--V0-meV",
        "70",
        "--d-nm",
        "10",
        "--phi-rad",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = tunnel(&[
        "sweep",
        "--var",
        "angle",
        "--from",
        "-2",
        "--to",
        "2",
        "--points",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let out = tunnel(&[
        "sweep",
        "--var",
        "width",
        "--from",
        "1",
        "--to",
        "20",
        "--points",
        "20",
        "--E-meV",
        "70",
        "--V0-meV",
        "80",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 60);

    let js = dir.path().join("e.json");
    let out = tunnel(&[
        "sweep",
        "--var",
        "energy",
        "--from",
        "60",
        "--to",
        "80",
        "--points",
        "21",
        "--engine",
        "closed",
        "--mass-me",
        "0.067",
        "--vfermi",
        "5e5",
        "--out",
        js.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    assert_eq!(v["metadata"]["mass_m"], 0.067);
    assert_eq!(v["metadata"]["fermi_velocity"], 5e5);
    let skipped = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "SKIPPED")
        .count();
    assert_eq!(skipped, 1);
}

#[test]
fn preset_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = tunnel(&["preset", "fig2_3", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let j = dir.path().join("f.json");
    assert!(
        tunnel(&["preset", "fig5_left", "--out", j.to_str().unwrap()])
            .status
            .success()
    );
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(v["metadata"]["variable"], "width");
}

#[test]
fn validate_passes_default_grid() {
    let out = tunnel(&["validate"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["grid"]["points"], 200);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}
