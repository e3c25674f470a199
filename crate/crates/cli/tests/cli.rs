use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quint"))
        .args(args)
        .env_remove("QUINT_CONFIG")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_reports_invariants() {
    let out = quint(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["group_order"], 120);
    assert_eq!(v["euler_sum"], 0);
    let d = v["dihedral_angle"].as_f64().unwrap();
    assert!((d - 2.0943951).abs() < 1e-7);
    assert!((d - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn tables_match_schema_and_layout() {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/tables.schema.json")).unwrap())
            .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();

    let layers = json(&quint(&["tables", "layers"]));
    assert!(validator.is_valid(&layers));
    assert_eq!(layers["rows"].as_array().unwrap().len(), 9);
    let counts: Vec<u64> = layers["rows"].as_array().unwrap().iter().map(|r| r["cells"].as_u64().unwrap()).collect();
    assert_eq!(counts, [1, 12, 20, 12, 30, 12, 20, 12, 1]);

    let rings = json(&quint(&["tables", "rings"]));
    assert!(validator.is_valid(&rings));
    let eq = rings["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["layer"] == "equatorial sphere")
        .unwrap();
    let row: Vec<u64> = ["cells", "spine", "equator", "remaining", "inner", "outer"]
        .iter()
        .map(|k| eq[*k].as_u64().unwrap())
        .collect();
    assert_eq!(row, [30, 0, 10, 20, 2, 2]);

    let text = String::from_utf8(quint(&["tables", "rings", "--format", "text"]).stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("equatorial sphere")).unwrap();
    let nums: Vec<&str> = line.split_whitespace().skip(2).collect();
    assert_eq!(nums, ["30", "0", "10", "20", "2", "2"]);

    let bad = serde_json::json!({"kind": "rings", "rows": []});
    assert!(!validator.is_valid(&bad));
}

#[test]
fn solve_catalog_puzzle() {
    let out = quint(&["solve", "--puzzle", "Dc24Star"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let a = v["assemblies"].as_array().unwrap();
    assert!(!a.is_empty());
    let placements = a[0]["placements"].as_array().unwrap();
    assert_eq!(placements.len(), 6);
    let mut cells: Vec<u64> = placements
        .iter()
        .flat_map(|p| p["cells"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()))
        .collect();
    cells.sort();
    cells.dedup();
    assert_eq!(cells.len(), 24);
}

#[test]
fn infeasible_spec_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("seven.spec");
    fs::write(&p, "name = seven inner\ninner4 = 7\n").unwrap();
    let out = quint(&["solve", "--puzzle", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["feasible"], false);

    let p = dir.path().join("outer.json");
    fs::write(&p, r#"{"name": "seven outer", "ribs": {"outer4": 7}}"#).unwrap();
    assert_eq!(quint(&["solve", "--puzzle", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn count_reports_all_equivalences() {
    let out = quint(&["solve", "--puzzle", "Dc45 Meteor", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["counts"];
    assert_eq!((c["raw"].as_u64(), c["up_to_rotation"].as_u64(), c["up_to_full_symmetry"].as_u64()), (Some(84), Some(6), Some(3)));
}

#[test]
fn errors_exit_one() {
    assert_eq!(quint(&["solve", "--puzzle", "Dc99 Nowhere"]).status.code(), Some(1));
    assert_eq!(quint(&["ribs", "--type", "inner5"]).status.code(), Some(1));
    assert_eq!(quint(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(quint(&["--help"]).status.code(), Some(0));
}

#[test]
fn catalog_validates() {
    let out = quint(&["catalog", "--validate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 12);
    let list = json(&quint(&["catalog"]));
    assert_eq!(list.as_array().unwrap().len(), 12);
}

#[test]
fn ribs_export_stl_with_matching_header() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("spine.stl");
    let out = quint(&["ribs", "--type", "spine", "--format", "stl", "--out", p.to_str().unwrap(), "--tess", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = fs::read(&p).unwrap();
    let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 84 + 50 * n);
    assert_eq!(json(&out)["mesh"]["triangles"].as_u64(), Some(n as u64));
}

#[test]
fn config_file_overrides_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("quint.conf");
    fs::write(&cfg, format!("out_dir = {}\ntess = 1\nframe_width = 0.2\npretty = false\n", dir.path().display())).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_quint"))
        .args(["ribs", "--type", "inner4", "--format", "obj"])
        .env("QUINT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // compact output is a single line
    assert_eq!(out.stdout.iter().filter(|&&b| b == b'\n').count(), 1);
    let v = json(&out);
    assert_eq!(v["params"]["frame_width"], 0.2);
    assert_eq!(v["params"]["tessellation_level"], 1);
    assert!(dir.path().join("inner4.obj").exists());

    fs::write(&cfg, "colour = red\n").unwrap();
    let out = quint(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn skeleton_writes_polylines() {
    let out = quint(&["skeleton", "--cells", "0", "--segments", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 30);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 30 * 5);
    assert_eq!(quint(&["skeleton", "--cells", "120"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [&["solve", "--puzzle", "Dc30 Ring", "--max", "0"][..], &["skeleton", "--rib", "inner6"][..]] {
        let a = quint(args);
        let b = quint(args);
        assert_eq!(a.stdout, b.stdout);
    }
    let dir = tempfile::tempdir().unwrap();
    let (p, q) = (dir.path().join("a.stl"), dir.path().join("b.stl"));
    for path in [&p, &q] {
        quint(&["ribs", "--type", "outer4", "--tess", "1", "--out", path.to_str().unwrap()]);
    }
    assert_eq!(fs::read(&p).unwrap(), fs::read(&q).unwrap());
}
