use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn dsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsr")).args(args).output().expect("dsr runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn table1_matches_expected_data() {
    let fx = fixtures();
    let o = dsr(&["table1", "--fixtures", path(&fx)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("{50,47,46,46,46,45,44}"));
    assert!(out.contains("all 9 rows match"));
}

#[test]
fn table1_reports_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixtures().join("table1.expected")).unwrap();
    let tampered = dir.path().join("table1.expected");
    std::fs::write(&tampered, text.replace("sr=43,42", "sr=43,41")).unwrap();
    let o = dsr(&["table1", "--fixtures", path(&fixtures()), "--expected", path(&tampered)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH N5"));
}

#[test]
fn table1_json() {
    let o = dsr(&["table1", "--fixtures", path(&fixtures()), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "table1");
    assert_eq!(v["result"]["matches"], true);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[5]["anti_partner"], "LAT50B");
    let n5 = &rows[7];
    assert_eq!(n5["name"], "N5");
    assert_eq!(n5["members"][1]["order"], 42);
    assert_eq!(n5["members"][1]["has_one"], false);
}

#[test]
fn check_semiring_files() {
    let o = dsr(&["check", path(&fixtures().join("R2b.sr"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("congruence-simple, not a ring, |R| = 2"));

    let o = dsr(&["check", path(&fixtures().join("end_chain4.sr")), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["result"];
    assert_eq!(r["kind"], "semiring");
    assert_eq!(r["congruence_simple"], true);
    assert_eq!(r["dense_witness"]["module_size"], 4);
    assert_eq!(r["dense_witness"]["dense"], true);
    assert_eq!(r["dense_witness"]["faithful"], true);
    assert_eq!(r["dense_witness"]["module_matches_recovered"], true);
}

#[test]
fn check_lattice_file() {
    let o = dsr(&["check", path(&fixtures().join("N5.lat"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("distributive: no"));
    assert!(out.contains("SR orders: [43, 42]"));
}

#[test]
fn check_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sr");
    std::fs::write(&bad, "n 2\nzero 0\n0 1\n1 one\n\n0 0\n0 1\n").unwrap();
    let o = dsr(&["check", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4, column 3"), "{}", stderr(&o));

    let not_semiring = dir.path().join("ns.sr");
    std::fs::write(&not_semiring, "n 2\nzero 0\n0 1\n1 0\n\n0 0\n1 1\n").unwrap();
    assert_eq!(dsr(&["check", path(&not_semiring)]).status.code(), Some(2));

    let other = dir.path().join("x.txt");
    std::fs::write(&other, "").unwrap();
    assert_eq!(dsr(&["check", path(&other)]).status.code(), Some(2));
}

#[test]
fn check_subsemiring_and_module_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("CHAIN3.lat"), dir.path().join("CHAIN3.lat")).unwrap();
    std::fs::copy(fixtures().join("R2b.sr"), dir.path().join("R2b.sr")).unwrap();
    let srs = dir.path().join("end3.srs");
    std::fs::write(&srs, "lattice CHAIN3\n0 0 0\n0 0 1\n0 0 2\n0 1 1\n0 1 2\n0 2 2\n").unwrap();
    let o = dsr(&["check", path(&srs)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("dense: yes"));

    let not_closed = dir.path().join("partial.srs");
    std::fs::write(&not_closed, "lattice CHAIN3\n0 0 0\n0 0 2\n0 1 1\n").unwrap();
    assert_eq!(dsr(&["check", path(&not_closed)]).status.code(), Some(2));

    let smod = dir.path().join("regular.smod");
    std::fs::write(&smod, "semiring R2b.sr\nm 2\n0 1\n1 1\n\n0 0\n0 1\n").unwrap();
    let o = dsr(&["check", path(&smod)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("irreducible: yes"));
}

#[test]
fn min_order_sweeps() {
    let o = dsr(&["min-order", "--max-size", "5", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("minimum order: none"));

    let o = dsr(&["min-order", "--max-size", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["minimum"], 98);
    assert_eq!(v["result"]["complete"], true);
    assert!(stderr(&o).contains("[15/15]"));

    assert_eq!(dsr(&["min-order", "--max-size", "7"]).status.code(), Some(2));
}

#[test]
fn catalog_build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("catalog");
    let o = dsr(&["catalog", "query", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no catalog"));

    assert_eq!(dsr(&["catalog", "build", "--max-size", "5", "--out", path(&out)]).status.code(), Some(0));
    let snapshot = |dir: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.join("records"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let first = snapshot(&out);
    assert_eq!(first.len(), 9);
    assert_eq!(dsr(&["catalog", "build", "--max-size", "5", "--out", path(&out)]).status.code(), Some(0));
    assert_eq!(snapshot(&out), first);

    let o = dsr(&["catalog", "query", "--out", path(&out), "--max-order", "70", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut orders: Vec<u64> = v["result"].as_array().unwrap().iter().map(|r| r["order"].as_u64().unwrap()).collect();
    orders.sort_unstable();
    assert_eq!(orders, vec![2, 6, 16, 20, 42, 43, 44, 45, 46, 46, 46, 47, 50, 50, 50, 70]);

    let o = dsr(&["catalog", "query", "--out", path(&out), "--has-one", "false", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let orders: Vec<u64> = v["result"].as_array().unwrap().iter().map(|r| r["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, vec![42, 44]);

    std::fs::write(out.join("VERSION"), "dense-semirings 0.0.0\nformat 1\n").unwrap();
    let o = dsr(&["catalog", "query", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("version 0.0.0"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dsr(&[]).status.code(), Some(2));
    assert_eq!(dsr(&["min-order"]).status.code(), Some(2));
    assert_eq!(dsr(&["--version"]).status.code(), Some(0));
}
