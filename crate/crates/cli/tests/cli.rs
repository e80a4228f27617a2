use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn znpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_znpf")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn weights_match_known_values() {
    let out = znpf(&["weights", "--n", "2", "--alpha", "1.5707963"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!((r["outputs"]["x"][1].as_f64().unwrap() - 0.4142136).abs() < 1e-6);
    for key in ["command", "inputs", "outputs", "pass", "tolerance", "wall_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    let out = znpf(&["weights", "--n", "3", "--alpha", "90", "--deg"]);
    let r = report(&out);
    for k in [1, 2] {
        assert!((r["outputs"]["x"][k].as_f64().unwrap() - 0.3660254).abs() < 1e-6);
    }
}

#[test]
fn weights_csv() {
    let out = znpf(&["weights", "--n", "3", "--alpha", "1.0", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,x");
    assert_eq!(lines.len(), 4);
}

#[test]
fn invalid_input_exits_2() {
    let out = znpf(&["weights", "--n", "2", "--alpha", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid angle"));
    assert_eq!(code(&znpf(&["weights", "--n", "1", "--alpha", "1"])), 2);
    assert_eq!(code(&znpf(&["weights", "--alpha", "1"])), 2);
    assert_eq!(code(&znpf(&["verify", "--n", "3", "--m", "1", "--weights", "0.2,0.3"])), 2);
    assert_eq!(code(&znpf(&["star-triangle", "--n", "3", "--alphas", "1,1"])), 2);
    assert_eq!(code(&znpf(&["bogus"])), 2);
}

#[test]
fn verify_five_state_points() {
    assert_eq!(code(&znpf(&["verify", "--n", "5", "--m", "1", "--alpha", "1.5707963"])), 0);
    let out = znpf(&["verify", "--n", "5", "--m", "2", "--alpha", "1.5707963"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert!(r["outputs"]["max_abs"].as_f64().unwrap() > 1e-3);
    assert_eq!(code(&znpf(&["verify", "--n", "5", "--m", "1", "--alpha", "1.2", "--anti"])), 0);
}

#[test]
fn verify_potts_point() {
    let out = znpf(&["verify", "--n", "4", "--m", "2", "--weights", "0.3333333,0.3333333"]);
    assert_eq!(code(&out), 0);
    let out = znpf(&["verify", "--n", "4", "--m", "1", "--weights", "0.3333333,0.3333333"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn solve_recovers_ising() {
    let out = znpf(&["solve", "--n", "2", "--m", "1", "--alpha", "1.0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(r["outputs"]["distance_to_critical"].as_f64().unwrap() < 1e-10);
    let x = r["outputs"]["solution"]["solutions"][0][0].as_f64().unwrap();
    assert!((x - 0.25f64.tan()).abs() < 1e-10);
}

#[test]
fn star_triangle_pass_and_fail() {
    let ok = znpf(&["star-triangle", "--n", "4", "--alphas", "0.9,1.0,1.2415926535897931"]);
    assert_eq!(code(&ok), 0);
    let bad = znpf(&[
        "star-triangle",
        "--n",
        "4",
        "--alphas",
        "0.9,1.0,1.2415926535897931",
        "--perturb",
        "0.02",
    ]);
    assert_eq!(code(&bad), 1);
    assert!(report(&bad)["outputs"]["max_dev"].as_f64().unwrap() > 1e-3);
}

#[test]
fn lattice_build_save_and_enumerate() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("sq.json");
    let svg = dir.path().join("sq.svg");
    let out = znpf(&[
        "lattice", "build", "--type", "square", "--rows", "3", "--cols", "3", "--alpha", "72", "--deg", "--n", "3",
        "--save", path_str(&json), "--svg", path_str(&svg),
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["outputs"]["primal"], 9);
    assert_eq!(r["outputs"]["interior_faces"], 4);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));

    let loaded = report(&znpf(&["lattice", "load", "--input", path_str(&json)]));
    assert_eq!(loaded["outputs"], r["outputs"]);

    let out = znpf(&["enumerate", "--lattice", path_str(&json), "--check", "face-sum", "--m", "1"]);
    assert_eq!(code(&out), 0);
    let faces = report(&out)["outputs"]["faces"].as_array().unwrap().len();
    assert_eq!(faces, 4);

    let out = znpf(&["enumerate", "--lattice", path_str(&json), "--check", "path-independence", "--threads", "2"]);
    assert_eq!(code(&out), 0);

    let z1 = report(&znpf(&["enumerate", "--lattice", path_str(&json), "--check", "partition", "--threads", "1"]));
    let z8 = report(&znpf(&["enumerate", "--lattice", path_str(&json), "--check", "partition", "--threads", "8"]));
    assert_eq!(z1["outputs"]["Z"], z8["outputs"]["Z"]);
    assert_eq!(z1["outputs"]["config_count"], "19683");

    let out = znpf(&["enumerate", "--lattice", path_str(&json), "--check", "partition", "--cap", "100"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn perturbed_weights_fail_the_face_sum() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("sq.json");
    let out = znpf(&["lattice", "build", "--rows", "3", "--cols", "3", "--alpha", "1.2", "--n", "3", "--save", path_str(&json)]);
    assert_eq!(code(&out), 0);
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for w in file["weights"].as_array_mut().unwrap() {
        let x = w["x"][1].as_f64().unwrap() + 0.05;
        w["x"][1] = x.into();
        w["x"][2] = x.into();
    }
    std::fs::write(&json, serde_json::to_string(&file).unwrap()).unwrap();
    let out = znpf(&["enumerate", "--lattice", path_str(&json), "--check", "face-sum"]);
    assert_eq!(code(&out), 1);
    assert!(report(&out)["outputs"]["max_abs"].as_f64().unwrap() > 1e-4);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# weights run\nn=2\nalpha=60\ndeg=true\n").unwrap();
    let r = report(&znpf(&["weights", "--config", path_str(&cfg)]));
    assert!((r["outputs"]["x"][1].as_f64().unwrap() - 0.2679492).abs() < 1e-6);
    let r = report(&znpf(&["weights", "--config", path_str(&cfg), "--alpha", "120"]));
    assert!((r["outputs"]["x"][1].as_f64().unwrap() - 0.5773503).abs() < 1e-6);
    std::fs::write(&cfg, "n: 2\n").unwrap();
    assert_eq!(code(&znpf(&["weights", "--config", path_str(&cfg)])), 2);
}

#[test]
fn multigrid_and_triangular_lattices() {
    for args in [
        vec!["lattice", "build", "--type", "multigrid", "--families", "5", "--extent", "1"],
        vec!["lattice", "build", "--type", "multigrid", "--angles", "0,60,120", "--deg"],
        vec!["lattice", "build", "--type", "tri", "--size", "2", "--alpha", "1.0", "--alpha2", "1.2"],
        vec!["lattice", "build", "--type", "hex", "--size", "2"],
    ] {
        let out = znpf(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(report(&out)["outputs"]["max_side_error"].as_f64().unwrap() < 1e-10);
    }
    let out = znpf(&["lattice", "build", "--type", "multigrid", "--angles", "0,60,120", "--offsets", "0,0,0", "--extent", "0", "--deg"]);
    assert_eq!(code(&out), 2);
}
