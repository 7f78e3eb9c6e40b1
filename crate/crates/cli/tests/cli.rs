use std::path::Path;
use std::process::{Command, Output};

use bilin_core::bilin::main_component_point;
use bilin_core::exactalg::{Field, Matrix};
use serde_json::Value;

fn bilin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilin")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|_| panic!("not JSON: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, v: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn main_point() -> bilin_core::bilin::BilinPoint {
    let q = Field::Rational;
    main_component_point(&[vec![q.zero()], vec![q.one()]], Matrix::identity(q, 2), Matrix::identity(q, 2)).unwrap()
}

#[test]
fn dims_grid_csv() {
    let out = bilin(&["dims", "--grid", "n=1", "d=3", "r1=3", "r2=3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("main_dim"), "15");
    assert_eq!(col("degenerate_dim"), "18");
    assert_eq!(col("reducible_by_count"), "true");
}

#[test]
fn tangent_at_main_point() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "main.json", &main_point());
    let out = bilin(&["tangent", "bilin", "--point", &p, "--check"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 6);
    assert_eq!(v["hom_triple_dim"], 6);
}

#[test]
fn secant_witness() {
    let out = bilin(&["secant-dim", "--d", "3", "--r", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!((v["bound"].as_u64(), v["ambient"].as_u64(), v["fills"].as_bool()), (Some(20), Some(26), Some(false)));
}

#[test]
fn census_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(bilin(&["classify222", "--enumerate", "q=2", "--out", a.to_str().unwrap()]).status.success());
    assert!(bilin(&["--workers", "1", "classify222", "--enumerate", "q=2", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(a.with_extension("csv")).unwrap(), std::fs::read(b.with_extension("csv")).unwrap());
    let s1 = bilin(&["secant-dim", "--d", "2", "--r", "2", "--seed", "5"]);
    let s2 = bilin(&["secant-dim", "--d", "2", "--r", "2", "--seed", "5", "--workers", "1"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn member_output_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let b = main_point();
    let m1 = write(dir.path(), "m1.json", b.m1());
    let m2 = write(dir.path(), "m2.json", b.m2());
    let m3 = write(dir.path(), "m3.json", &b.m3().unwrap());
    let out = bilin(&["member", "--m1", &m1, "--m2", &m2, "--m3", &m3]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["member"], true);
    let p = write(dir.path(), "point.json", &v["result"]["point"]);
    let out = bilin(&["validate", "--point", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let q = Field::Rational;
    let bad = bilin_core::modcore::FramedModule::new(
        vec![Matrix::from_i64(q, &[&[0, 1], &[0, 0]]), Matrix::from_i64(q, &[&[0, 0], &[1, 0]])],
        Matrix::identity(q, 2),
    )
    .unwrap();
    let p = write(dir.path(), "bad.json", &bad);
    assert_eq!(bilin(&["validate", "--point", &p]).status.code(), Some(1));
    assert_eq!(bilin(&["--cap", "100", "grcount", "--d", "2", "--r", "4", "--q", "3"]).status.code(), Some(2));
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(bilin(&["validate", "--point", garbage.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(bilin(&["--field", "F:4", "secant-dim", "--d", "2", "--r", "2"]).status.code(), Some(3));
}
