use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use simplex_cover::bounds::BoundCheck;
use simplex_cover::report::to_stable_json;
use simplex_cover::search::SearchReportJson;
use simplex_cover::tile::TileExport;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplex-cover"))
        .args(args)
        .env_remove("SIMPLEX_COVER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_lattice(dir: &Path, name: &str, n: usize, basis: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, format!(r#"{{"n": {n}, "basis": {basis}}}"#)).unwrap();
    p.to_str().unwrap().to_owned()
}

/// Report text with the wall-clock field blanked out.
fn without_timing(s: &str) -> String {
    s.lines()
        .map(|l| if l.trim_start().starts_with("\"elapsed_ms\"") { "  \"elapsed_ms\": _," } else { l })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn tile_ascii_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let l5 = write_lattice(dir.path(), "l5.json", 2, "[[5, 0], [3, 1]]");
    let o = bin(&["tile", "--lattice", &l5, "--ascii"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "...\n#o.\n##.\n##.\n");

    let o = bin(&["tile", "--lattice", &l5, "--json"]);
    let text = stdout(&o);
    let back: TileExport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.det, 5.into());
    assert_eq!(back.notch.as_ref().unwrap().coords(), [1, 2]);
    assert_eq!(to_stable_json(&back).unwrap(), text);

    let l3 = write_lattice(dir.path(), "l3.json", 3, "[[2, 0, 0], [0, 2, 0], [0, 0, 2]]");
    assert_eq!(bin(&["tile", "--lattice", &l3, "--ascii"]).status.code(), Some(2));
    let bad = write_lattice(dir.path(), "bad.json", 2, "[[1, 2], [2, 4]]");
    let o = bin(&["tile", "--lattice", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn cover_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let l5 = write_lattice(dir.path(), "l5.json", 2, "[[5, 0], [3, 1]]");
    let o = bin(&["cover", "--n", "2", "--d", "2", "--lattice", &l5, "--continuous", "--resolution", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["covered"], true);
    assert_eq!(v["density"]["num"], 6);
    assert_eq!(v["continuous"]["D"], 4);
    assert!(v["continuous"]["uncovered_point"].is_null());

    let o = bin(&["cover", "--n", "2", "--d", "1", "--lattice", &l5]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["covered"], false);

    let o = bin(&["cover", "--n", "3", "--d", "1", "--lattice", &l5]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_report_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let oa = bin(&["search-f", "--n", "3", "--d", "2", "--threads", "1", "--out", a.to_str().unwrap()]);
    let ob = bin(&["search-f", "--n", "3", "--d", "2", "--threads", "3", "--out", b.to_str().unwrap()]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert!(oa.stdout.is_empty());
    let (ta, tb) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(without_timing(&ta), without_timing(&tb));

    let report: SearchReportJson = serde_json::from_str(&ta).unwrap();
    assert_eq!(report.f, 9.into());
    assert!(report.exhaustive);
    assert_eq!(to_stable_json(&report).unwrap(), ta);

    // identical argv through the environment variable as well
    let oc = Command::new(env!("CARGO_BIN_EXE_simplex-cover"))
        .args(["search-f", "--n", "3", "--d", "2"])
        .env("SIMPLEX_COVER_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(without_timing(&stdout(&oc)), without_timing(&ta));
}

#[test]
fn density_table_and_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["density-table", "--n", "2", "--d-range", "2..3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "d,best_density_num,best_density_den,witness_lattice\n2,6,5,\"[[5,0],[1,1]]\"\n3,5,4,\"[[4,0],[1,2]]\"\n"
    );

    let good = dir.path().join("good.json");
    assert_eq!(
        bin(&["search-f", "--n", "2", "--d", "3", "--out", good.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let o = bin(&["density-table", "--n", "2", "--d-range", "2..3", "--baseline", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    // a baseline claiming a different f is flagged
    let tampered = dir.path().join("bad.json");
    let text = fs::read_to_string(&good).unwrap().replace("\"f\": 8", "\"f\": 7");
    fs::write(&tampered, text).unwrap();
    let o = bin(&["density-table", "--n", "2", "--d-range", "2..3", "--baseline", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regression"));
}

#[test]
fn verify_bounds_json_roundtrip_and_determinism() {
    let args = ["verify-bounds", "--d-star", "2", "--samples", "200000", "--seed", "9", "--json"];
    let one = bin(&[&args[..], &["--threads", "1"]].concat());
    let two = bin(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let text = stdout(&one);
    let checks: Vec<BoundCheck> = serde_json::from_str(&text).unwrap();
    assert!(checks.iter().all(|c| c.pass));
    assert!(checks.iter().any(|c| c.name == "integral_notch[v=2/7]"));
    assert_eq!(to_stable_json(&checks).unwrap(), text);

    let o = bin(&["verify-bounds", "--v", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spec_cli_examples() {
    let o = bin(&["search-f", "--n", "2", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"f\": 5,"));

    let o = bin(&["verify-bounds", "--d-star", "1", "--samples", "1000000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));

    let o = bin(&["theta-bounds", "--json", "--n-max", "4", "--d-range", "3..3"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[2]["fn_upper"]["num"], 77);
    assert_eq!(rows[2]["fn_upper"]["den"], 1);

    let o = bin(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}
