use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubic-euclid"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

#[test]
fn field_report_for_73() {
    let o = run(&["field", "--conductor", "73"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("discriminant\t5329\n"));
    assert!(out.contains("class_number\th = 1\n"));
    assert_eq!(out, golden("field_73.txt"));
}

#[test]
fn field_from_polynomial_is_the_same_field() {
    let a = run(&["field", "--poly", "x^3-x^2-24x+27"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), golden("field_73.txt"));
}

#[test]
fn field_rejects_bad_input() {
    assert_eq!(code(&run(&["field", "--conductor", "11"])), 2);
    assert_eq!(code(&run(&["field", "--poly", "x^3-2"])), 2);
    assert_eq!(code(&run(&["field", "--poly", "x^3+"])), 2);
    assert_eq!(code(&run(&["field"])), 2);
    assert_eq!(
        code(&run(&["field", "--conductor", "73", "--poly", "-1,-24,27"])),
        2
    );
}

#[test]
fn field_composite_conductor_reports_precheck() {
    let o = run(&["field", "--conductor", "63"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("3^1 divides the class number"));
}

#[test]
fn starved_unit_search_is_undecided() {
    let o = run(&["field", "--conductor", "1291", "--unit-radius", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--unit-radius"));
}

#[test]
fn search_exit_codes() {
    let o = run(&["search", "--conductor", "73"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("certificate_73.json"));
    assert_eq!(code(&run(&["search", "--conductor", "63"])), 4);
    assert_eq!(
        code(&run(&["search", "--conductor", "79", "--qmax", "2"])),
        5
    );
    assert_eq!(code(&run(&["search", "--conductor", "12"])), 2);
}

#[test]
fn search_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let o = run(&[
        "search",
        "--conductor",
        "97",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).ends_with("result\tpass\n"));
}

#[test]
fn verify_golden_report() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/certificate_73.json");
    let v = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert_eq!(stdout(&v), golden("verify_73.txt"));
}

#[test]
fn tampered_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let good = golden("certificate_73.json");
    let cases = [
        ("\"residue_mod_q2\": \"4\"", "\"residue_mod_q2\": \"5\""),
        ("\"prime_q\": \"3\"", "\"prime_q\": \"5\""),
        ("\"-127/1\"", "\"-126/1\""),
        ("\"order_mod_q\": \"2\"", "\"order_mod_q\": \"1\""),
    ];
    for (from, to) in cases {
        assert!(good.contains(from), "{from}");
        let path = dir.path().join("t.json");
        fs::write(&path, good.replace(from, to)).unwrap();
        let v = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&v), 6, "{to}: {}", stdout(&v));
        assert!(stdout(&v).ends_with("result\tfail\n"));
    }
    let path = dir.path().join("t.json");
    fs::write(&path, good.replace("70eecb", "70eecc")).unwrap();
    assert_eq!(
        code(&run(&[
            "verify",
            path.to_str().unwrap(),
            "--trust-class-number"
        ])),
        0
    );
    assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 6);
}

#[test]
fn verify_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    fs::write(&path, [0xffu8, 0x00, 0x13, 0x37]).unwrap();
    let v = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&v), 2);
    fs::write(&path, "{\"conductor\": 73}").unwrap();
    assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["verify", missing.to_str().unwrap()])), 2);
}

#[test]
fn table_report_golden() {
    let file = root().join("data/table1.tsv");
    let o = run(&["table", "--file", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("table.txt"));
    let bundled = run(&["table", "--jobs", "2"]);
    assert_eq!(stdout(&bundled), golden("table.txt"));
}

#[test]
fn table_json_is_valid() {
    let o = run(&["table", "--json"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.trim_start().starts_with('['));
    assert_eq!(out.matches("\"passed\": true").count(), 74);
}

#[test]
fn batch_outputs() {
    let o = run(&["batch", "--from", "60", "--to", "100"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("batch_60_100.tsv"));

    let empty = run(&["batch", "--from", "74", "--to", "78"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(stdout(&empty).lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "batch",
        "--from",
        "60",
        "--to",
        "100",
        "--jobs",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read_to_string(dir.path().join("summary.tsv")).unwrap(),
        golden("batch_60_100.tsv")
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("timings.tsv"))
            .unwrap()
            .lines()
            .count(),
        6
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("certificate_73.json")).unwrap(),
        golden("certificate_73.json")
    );
    let v = run(&[
        "verify",
        dir.path().join("certificate_79.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&v), 0);
}
