//! The command-line surface: outputs, exit codes and the data-directory
//! override. In-process tests use `run_command`; anything touching the
//! environment runs the built binary.

use std::path::Path;
use std::process::Command;

use leopoldt::cli::run_command;
use leopoldt::report::ScanReport;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["leopoldt"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_command(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_leopoldt"));
    c.env_remove("LEOPOLDT_DATA_DIR");
    c
}

#[test]
fn scan_cubic_minus_23_ordinary() {
    let (code, out, err) = run(&[
        "scan-cubic", "--delta", "-23", "--pmax", "200000", "--mode", "ordinary", "--workers", "2",
    ]);
    assert_eq!(code, 0, "{err}");
    let report = ScanReport::from_json(&out).unwrap();
    assert_eq!(report.hit_primes(), vec![13]);
    assert_eq!(report.metadata.field_id, "Delta=-23");
    assert_eq!(report.metadata.mode, "ordinary");
    assert!(err.contains("warning"));
}

#[test]
fn scan_quad_d7_has_no_hits() {
    let (code, out, _) = run(&["scan-quad", "--d", "7", "--pmax", "10000", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "field,p,mode,aux\n");
}

#[test]
fn scan_quad_csv_rows() {
    let (code, out, _) = run(&["scan-quad", "--d", "15", "--pmax", "10000", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "field,p,mode,aux\nD=15,181,quad_unit,\nD=15,1039,quad_unit,\nD=15,2917,quad_unit,\n"
    );
}

#[test]
fn scan_quad_all_json_is_an_array() {
    let (code, out, _) = run(&["scan-quad", "--d", "all", "--pmax", "1000", "--workers", "1"]);
    assert_eq!(code, 0);
    let reports: Vec<ScanReport> = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.len(), 18);
    let d29 = reports.iter().find(|r| r.metadata.field_id == "D=29").unwrap();
    assert_eq!(d29.hit_primes(), vec![3, 11]);
    for r in &reports {
        assert_eq!(r.checksum, r.compute_checksum());
    }
}

#[test]
fn full_verdicts_list_exclusions() {
    let (code, out, _) = run(&["scan-quad", "--d", "10", "--pmax", "50", "--full-verdicts"]);
    assert_eq!(code, 0);
    let r = ScanReport::from_json(&out).unwrap();
    let excluded: Vec<(u64, String)> = r
        .excluded
        .unwrap()
        .into_iter()
        .map(|e| (e.p, e.reason.to_string()))
        .collect();
    assert_eq!(
        excluded,
        vec![(2, "below_min_p".to_string()), (5, "ramified".to_string())]
    );
}

#[test]
fn h5_minus_139() {
    let (code, out, _) = run(&["h5", "--delta", "-139"]);
    assert_eq!(code, 0);
    assert!(out.contains("{5, 7, 23}"), "{out}");
    let (code, out, _) = run(&["h5", "--delta", "-139", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["h5_reduced"], serde_json::json!([5, 7, 23]));
}

#[test]
fn wieferich_base_2() {
    let (code, out, _) = run(&["wieferich", "--base", "2", "--pmax", "100000"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["primes"], serde_json::json!([1093, 3511]));
}

#[test]
fn heuristics_subcommands() {
    let (code, out, _) = run(&["heuristics", "injective-prob", "-p", "3", "-n", "2", "-m", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"16/27\""), "{out}");

    let (code, out, _) = run(&["heuristics", "densities", "-p", "11"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["delta_iii"]["exact"], "1/66");

    let (code, out, _) = run(&["heuristics", "mult-dist", "--k0", "3", "--imax", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][1]["density"]["exact"], "2/9");

    let (code, out, _) = run(&[
        "heuristics", "monte-carlo", "-p", "2", "-n", "1", "-m", "1", "--trials", "1000", "--seed", "5",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["trials"], 1000);

    let (code, _, _) = run(&["heuristics", "mertens", "--x", "1000"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["heuristics", "expected-count", "--x", "1000", "--d", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_h5_table_passes() {
    let (code, out, _) = run(&["verify-tables", "--table", "h5_table"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("h5_table: PASS"));
}

#[test]
fn verify_quad_table_reports_by_design_exclusion() {
    let (code, out, _) = run(&["verify-tables", "--table", "quad_table", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v[0]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["key"], 14);
    assert_eq!(entries[0]["p"], 2);
    assert_eq!(entries[0]["kind"], "excluded_by_design");
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["scan-quad", "--d", "7"][..],
        &["scan-quad", "--d", "4", "--pmax", "100"],
        &["scan-quad", "--d", "seven", "--pmax", "100"],
        &["scan-cubic", "--delta", "-24", "--pmax", "100", "--mode", "ordinary"],
        &["scan-cubic", "--delta", "-23", "--pmax", "100", "--mode", "other"],
        &["scan-quad", "--d", "7", "--pmax", "1"],
        &["heuristics", "injective-prob", "-p", "4", "-n", "1", "-m", "1"],
        &["heuristics", "mult-dist", "--k0", "6", "--imax", "2"],
        &["verify-tables", "--table", "nope"],
        &["wieferich", "--base", "1", "--pmax", "10"],
        &["frobnicate"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["scan-quad", "scan-cubic", "h5", "wieferich", "heuristics", "verify-tables"] {
        assert!(out.contains(sub), "{sub}");
    }
}

fn copy_data(to: &Path) {
    let from = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for f in ["quadratic_fields.toml", "cubic_fields.toml", "reference_tables.toml"] {
        std::fs::copy(from.join(f), to.join(f)).unwrap();
    }
}

#[test]
fn data_dir_override_is_used() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    // a table edited to expect a different H5 set must now fail
    let tables = dir.path().join("reference_tables.toml");
    let text = std::fs::read_to_string(&tables).unwrap();
    std::fs::write(
        &tables,
        text.replace("{ delta = -23, primes = [11] }", "{ delta = -23, primes = [13] }"),
    )
    .unwrap();
    let out = bin()
        .args(["verify-tables", "--table", "h5_table"])
        .env("LEOPOLDT_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Delta=-23 p=11: extra"), "{stdout}");
    assert!(stdout.contains("Delta=-23 p=13: missing"), "{stdout}");
}

#[test]
fn invalid_data_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    copy_data(dir.path());
    let cubic = dir.path().join("cubic_fields.toml");
    let text = std::fs::read_to_string(&cubic).unwrap();
    // wrong polynomial for the discriminant
    std::fs::write(&cubic, text.replacen("poly = [1, 0, -1, -1]", "poly = [1, 0, -1, 2]", 1))
        .unwrap();
    let out = bin()
        .args(["h5", "--delta", "-23"])
        .env("LEOPOLDT_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("data error"));

    let empty = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["scan-quad", "--d", "2", "--pmax", "100"])
        .env("LEOPOLDT_DATA_DIR", empty.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn binary_matches_in_process_runner() {
    let out = bin()
        .args(["scan-quad", "--d", "2", "--pmax", "100", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "field,p,mode,aux\nD=2,13,quad_unit,\nD=2,31,quad_unit,\n"
    );
}
