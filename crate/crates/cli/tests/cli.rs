use std::process::{Command, Output};

fn ftpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftpoly"))
        .args(args)
        .env_remove("FTPOLY_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn s1_writes_an_off_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.off");
    let o = ftpoly(&["s1", "--radius", "6", "--format", "off", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("OFF\n"));
    let faces: usize = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap().split(' ').nth(1).unwrap().parse().unwrap();
    assert!(faces > 0);
    assert_eq!(text.matches("# open\n").count(), faces);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(ftpoly(&["tesselate"]).status.code(), Some(2));
    assert_eq!(ftpoly(&["star", "--radius", "1", "--margin", "3"]).status.code(), Some(2));
    assert_eq!(ftpoly(&["star", "--format", "ply"]).status.code(), Some(2));
    assert_eq!(ftpoly(&["star", "--format", "obj"]).status.code(), Some(2));
    assert_eq!(ftpoly(&["star", "--neighbor", "nowhere"]).status.code(), Some(2));
}

#[test]
fn broken_fixture_fails_verification_with_a_witness() {
    let o = ftpoly(&["verify", "--fixture", "cube-missing-face"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("axiom (1)"));
    assert!(stderr(&o).contains("lies in 1 face(s)"));
}

#[test]
fn cube_fixture_verifies() {
    let o = ftpoly(&["verify", "--fixture", "cube", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["symmetry"]["flags"]["count"], 1);
    assert_eq!(v["symmetry"]["transitivity"]["vertex_orbits"], 1);
}

#[test]
fn star_and_figures() {
    let o = ftpoly(&["star", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 4);
    let o = ftpoly(&["vertex-figures", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["figures"].as_array().unwrap().len(), 3);
    let o = ftpoly(&["star", "--neighbor", "v1"]);
    assert!(stdout(&o).contains("8 edges"));
}

#[test]
fn stabilizer_and_orbit() {
    let o = ftpoly(&["stabilizer", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 8);
    let o = ftpoly(&["stabilizer", "--corner", "c30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 24);
    let o = ftpoly(&["orbit", "--point", "3/4,1/4*sqrt3,0", "--radius", "3", "--margin", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["count"].as_u64().unwrap() > 1);
}

#[test]
fn lattice_classes_on_the_base_layer() {
    let o = ftpoly(&["lattice-classes", "--radius", "6", "--margin", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 3);
}

#[test]
fn trace_face_reports_the_spiral() {
    let o = ftpoly(&["trace-face", "--radius", "12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["face"]["closed"], false);
    assert_eq!(v["profile"]["alternates"], true);
    assert_eq!(v["profile"]["edge_drop"], "2");
    assert_eq!(v["profile"]["period_edges"], 8);
}

#[test]
fn exports_are_deterministic_and_respect_the_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_ftpoly"))
            .args(["export", "--radius", "5", "--format", "json", "--output", name])
            .env("FTPOLY_OUTPUT_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("a.json");
    let b = run("b.json");
    assert_eq!(a, b);
    let (p, meta) = ftpoly_core::import_json(&a).unwrap();
    assert!(p.faces().iter().all(|f| !f.closed));
    assert_eq!(meta.name, "spiralhedron S1");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"corner": "c60", "radius": "4", "margin": "1"}"#).unwrap();
    let o = ftpoly(&["stabilizer", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["order"], 12);
    std::fs::write(&cfg, r#"{"colour": "red"}"#).unwrap();
    assert_eq!(ftpoly(&["star", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn obj_export_of_the_cube() {
    let o = ftpoly(&["export", "--fixture", "cube", "--format", "obj", "--precision", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 6);
}
