use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ionfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionfield"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (String, Value) {
    let out = dir.join(name);
    let mut full = vec!["--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = ionfield(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let body = std::fs::read_to_string(&out).unwrap();
    let manifest = std::fs::read_to_string(dir.join(format!("{name}.manifest.json"))).unwrap();
    (body, serde_json::from_str(&manifest).unwrap())
}

#[test]
fn csv_headers_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (neg, _) = run_to(
        dir.path(),
        "n.csv",
        &["negativity", "--chain-size", "20", "--separations", "0,1"],
    );
    assert_eq!(
        neg.lines().next().unwrap(),
        "system,chain_size,region_size,separation,treatment,log_negativity"
    );
    assert_eq!(neg.lines().count(), 1 + 2 * 3);

    let (fid, _) = run_to(
        dir.path(),
        "f.csv",
        &["fidelity", "--chain-size", "10", "--windows", "2,4"],
    );
    assert_eq!(
        fid.lines().next().unwrap(),
        "chain_size,region_size,squeeze_z,fidelity_raw,fidelity_squeezed"
    );

    let (fock, _) = run_to(dir.path(), "k.csv", &["fock", "--dims", "2..=4"]);
    assert_eq!(
        fock.lines().next().unwrap(),
        "qudit_dim,p_out_raw,p_out_squeezed"
    );
    assert_eq!(
        fock.lines().nth(1).unwrap(),
        "2,1.92741109e-2,3.46852977e-4"
    );
}

#[test]
fn numbers_carry_nine_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let (body, _) = run_to(
        dir.path(),
        "n.csv",
        &[
            "negativity",
            "--chain-size",
            "150",
            "--separations",
            "0",
            "--treatments",
            "trace",
        ],
    );
    let value = body.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert_eq!(value, "3.66480290e-1");
}

#[test]
fn manifest_fields() {
    let dir = tempfile::tempdir().unwrap();
    let (_, m) = run_to(
        dir.path(),
        "c.txt",
        &["--tol-policy", "strict", "chain", "3"],
    );
    for key in [
        "command",
        "params",
        "version",
        "tolerances",
        "metadata",
        "wall_ms",
    ] {
        assert!(m.get(key).is_some(), "missing {key}");
    }
    assert_eq!(m["command"], "chain");
    assert_eq!(m["params"]["n"], 3);
    assert_eq!(m["version"], ionfield::VERSION);
    assert_eq!(m["tolerances"]["policy"], "strict");
    assert_eq!(m["tolerances"]["last_digit_fraction"], 0.5);
}

#[test]
fn json_format_parses() {
    let dir = tempfile::tempdir().unwrap();
    let (body, _) = run_to(
        dir.path(),
        "k.json",
        &["--format", "json", "fock", "--dims", "2,3"],
    );
    let rows: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["qudit_dim"], 2);
}

#[test]
fn scalar_rows_report_infinite_chain() {
    let dir = tempfile::tempdir().unwrap();
    let (body, _) = run_to(
        dir.path(),
        "s.csv",
        &[
            "negativity",
            "--system",
            "scalar",
            "--separations",
            "0",
            "--treatments",
            "phi",
        ],
    );
    let row = body.lines().nth(1).unwrap();
    assert!(row.starts_with("scalar,inf,1,0,phi,"), "{row}");
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "negativity",
        "--chain-size",
        "60",
        "--region-size",
        "2",
        "--separations",
        "0..=6",
    ];
    let mut one = vec!["--threads", "1"];
    one.extend_from_slice(&args);
    let mut four = vec!["--threads", "4"];
    four.extend_from_slice(&args);
    let (a, _) = run_to(dir.path(), "a.csv", &one);
    let (b, _) = run_to(dir.path(), "b.csv", &four);
    assert_eq!(a, b);
}

#[test]
fn stdout_without_out_flag() {
    let o = ionfield(&["fock", "--dims", "2"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("qudit_dim,p_out_raw,p_out_squeezed\n"));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("\"command\": \"fock\""));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["bogus"],
        vec!["chain", "0"],
        vec!["--threads", "0", "chain", "2"],
        vec!["--format", "xml", "chain", "2"],
        vec!["fock", "--dims", "9"],
        vec!["negativity", "--separations", "3..=1"],
        vec!["golden-check", "--table", "12"],
    ] {
        assert_eq!(ionfield(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(ionfield(&["--help"]).status.code(), Some(0));
}

#[test]
fn golden_check_passes_on_embedded_tables() {
    let o = ionfield(&["golden-check", "--table", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("0 failed [PASS]"));
}

#[test]
fn perturbed_golden_value_fails_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let original = ionfield::experiments::TableId::Table(7).embedded().unwrap();
    std::fs::write(dir.path().join("table7.csv"), original).unwrap();
    let args = [
        "golden-check",
        "--table",
        "7",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ];
    assert_eq!(ionfield(&args).status.code(), Some(0));

    // 1.93e-2 → 1.95e-2 is two units in the last printed digit
    let perturbed = original.replacen("1.93e-2", "1.95e-2", 1);
    assert_ne!(perturbed, original);
    std::fs::write(dir.path().join("table7.csv"), perturbed).unwrap();
    let o = ionfield(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("FAIL D=2 / p_out_raw"));
}

#[test]
fn missing_golden_dir_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionfield(&[
        "golden-check",
        "--table",
        "7",
        "--golden-dir",
        dir.path().join("nope").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
