//! End-to-end runs of the binary: exit codes, report contents, determinism.

use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const X1: &str = "S1^2*S2*T2 + 2*S1*T1*S2^2 + 2*S1*T1*S2*T2 + 3*S1*T1*T2^2 + T1^2*S2*T2 + T1^2*T2^2";

fn cyrat(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_cyrat")).args(args).output().expect("binary runs");
    out.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn construct2_base_case_writes_x1() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x1.json");
    assert_eq!(cyrat(&["construct2", "--n", "1", "--out", &out]), 0);
    let v = read_json(Path::new(&out));
    assert_eq!(v["forms"][0], X1);
    assert_eq!(v["audit"]["steps"].as_array().unwrap().len(), 2);
}

#[test]
fn construct2_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    let (ca, cb) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    assert_eq!(cyrat(&["construct2", "--n", "2", "--out", &a, "--csv", &ca]), 0);
    assert_eq!(cyrat(&["construct2", "--n", "2", "--out", &b, "--csv", &cb]), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&ca).unwrap(), std::fs::read(&cb).unwrap());
    assert!(std::fs::read_to_string(&ca).unwrap().starts_with("id,name,status\n"));
    assert_eq!(cyrat(&["verify", "--in", &a]), 0);
}

#[test]
fn propagate_then_density_cuts_out_x1() {
    let dir = TempDir::new().unwrap();
    let (x1, stream, dens) = (path(&dir, "x1.json"), path(&dir, "s.jsonl"), path(&dir, "d.json"));
    assert_eq!(cyrat(&["construct2", "--n", "1", "--out", &x1]), 0);
    assert_eq!(cyrat(&["propagate", "--in", &x1, "--orbit", "50", "--out", &stream]), 0);
    assert_eq!(std::fs::read_to_string(&stream).unwrap().lines().count(), 51);
    assert_eq!(cyrat(&["density", "--in", &stream, "--space", &x1, "--multidegree", "2,2", "--out", &dens]), 0);
    let v = read_json(Path::new(&dens));
    assert_eq!(v["kernel_dim"], 1);
    assert_eq!(v["kernel_basis"][0], X1);
    assert_eq!(cyrat(&["verify", "--in", &stream, "--space", &x1]), 0);
}

#[test]
fn verify_flags_points_off_the_space() {
    let dir = TempDir::new().unwrap();
    let (x1, stream) = (path(&dir, "x1.json"), path(&dir, "s.jsonl"));
    assert_eq!(cyrat(&["construct2", "--n", "1", "--out", &x1]), 0);
    let bad = r#"{"kind":"point","seed":0,"n":0,"backend":"qrt","base":[],"fiber":["1","1","1","1"]}"#;
    std::fs::write(&stream, format!("{bad}\n")).unwrap();
    assert_eq!(cyrat(&["verify", "--in", &stream, "--space", &x1]), 1);
    assert_eq!(cyrat(&["verify", "--in", &stream]), 2);
}

#[test]
fn construct3_full_audit_passes_and_reverifies() {
    let dir = TempDir::new().unwrap();
    let (out, csv) = (path(&dir, "c3.json"), path(&dir, "c3.csv"));
    assert_eq!(cyrat(&["construct3", "--full-audit", "--out", &out, "--csv", &csv]), 0);
    let v = read_json(Path::new(&out));
    let steps = v["audit"]["steps"].as_array().unwrap();
    let ids: Vec<u64> = steps.iter().map(|s| s["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, (1..=10).collect::<Vec<_>>());
    assert!(steps.iter().all(|s| s["status"] == "pass"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 11);
    assert_eq!(cyrat(&["verify", "--in", &out]), 0);

    let mut tampered = v.clone();
    tampered["audit"]["steps"][4]["status"] = Value::String("fail".into());
    std::fs::write(&out, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(cyrat(&["verify", "--in", &out]), 1);
}

#[test]
fn construct3_without_full_audit_skips_finite_field_step() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "c3.json");
    assert_eq!(cyrat(&["construct3", "--out", &out]), 0);
    let v = read_json(Path::new(&out));
    assert_eq!(v["audit"]["steps"][9]["status"], "skipped");
}

#[test]
fn modp_audit_certifies_x1() {
    let dir = TempDir::new().unwrap();
    let (x1, out) = (path(&dir, "x1.json"), path(&dir, "m.json"));
    assert_eq!(cyrat(&["construct2", "--n", "1", "--out", &x1]), 0);
    assert_eq!(cyrat(&["modp-audit", "--in", &x1, "--out", &out]), 0);
    assert!(read_json(Path::new(&out))["certified_at"].is_u64());
}

#[test]
fn modp_audit_intersection_on_threefold() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "m.json");
    assert_eq!(cyrat(&["modp-audit", "--intersection", "--primes", "11,13", "--out", &out]), 0);
    assert_eq!(read_json(Path::new(&out))["intersection"]["verdict"], "proper_likely");
}

#[test]
fn construct1_default_bundle_passes() {
    let dir = TempDir::new().unwrap();
    let (out, csv) = (path(&dir, "c1.json"), path(&dir, "c1.csv"));
    assert_eq!(cyrat(&["construct1", "--out", &out, "--csv", &csv]), 0);
    let v = read_json(Path::new(&out));
    assert_eq!(v["audit"]["steps"].as_array().unwrap().len(), 7);
    assert_eq!(v["space"]["name"], "X");
}

#[test]
fn invalid_input_exits_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(cyrat(&["construct2", "--frobnicate"]), 2);
    assert_eq!(cyrat(&["no-such-command"]), 2);
    assert_eq!(cyrat(&["construct2", "--primes", "4,7"]), 2);
    assert_eq!(cyrat(&["construct2", "--n", "0"]), 2);
    assert_eq!(cyrat(&["construct1", "--n", "2"]), 2);
    assert_eq!(cyrat(&["propagate", "--in", &path(&dir, "missing.json")]), 2);
    let unwritable = dir.path().join("no/such/dir/out.json");
    assert_eq!(cyrat(&["construct2", "--n", "1", "--out", unwritable.to_str().unwrap()]), 2);
}
