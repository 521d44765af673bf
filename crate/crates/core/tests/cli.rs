//! Black-box tests of the `freeconv` binary: exit codes, JSON surfaces,
//! CSV grids, and the FREECONV_ORDER override.

use std::process::{Command, Output};

use serde_json::Value;

fn freeconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeconv"))
        .args(args)
        .env_remove("FREECONV_ORDER")
        .output()
        .expect("failed to spawn freeconv")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

/// Scalars appear as exact strings ("p/q") or floats; normalize to f64.
fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        },
        other => panic!("not a scalar: {other}"),
    }
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(as_f64).collect()
}

#[test]
fn show_emits_moment_and_cumulant_table() {
    let out = freeconv(&["show", "wigner(0,1)", "--order", "6"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["order"], 6);
    assert_eq!(numbers(&v["moments"]), vec![0.0, 1.0, 0.0, 2.0, 0.0, 5.0]);
    assert_eq!(
        numbers(&v["free_cumulants"]),
        vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]
    );
}

#[test]
fn show_csv_format() {
    let out = freeconv(&["show", "marchenko_pastur(2)", "--order", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,moment,free_cumulant");
    assert_eq!(lines.len(), 5);
    // every free cumulant of marchenko_pastur(2) equals 2
    for line in &lines[1..] {
        assert!(line.ends_with(",2"), "line: {line}");
    }
}

#[test]
fn ensemble_aliases_match_catalog_names() {
    let gue = freeconv(&["show", "gue", "--order", "6"]);
    let wig = freeconv(&["show", "wigner(0,1)", "--order", "6"]);
    assert_eq!(gue.stdout, wig.stdout);
    let wis = freeconv(&["show", "wishart(1/2)", "--order", "6"]);
    let mp = freeconv(&["show", "marchenko_pastur(1/2)", "--order", "6"]);
    assert_eq!(wis.stdout, mp.stdout);
}

#[test]
fn classify_exit_codes_and_verdict_json() {
    let out = freeconv(&["classify", "box2div", "marchenko_pastur(1/10)", "--order", "12"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "Rejected");
    assert!(v["witness"].as_str().unwrap().contains("Hankel"));

    let out = freeconv(&["classify", "freeid", "gue", "--order", "12"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["outcome"], "Inconclusive");

    let out = freeconv(&["classify", "typew", "mlotkowski(5/4,1)", "--order", "12"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn density_grid_and_atom_header() {
    let out = freeconv(&["density", "arcsine_sym(1)", "--grid", "-0.5:0.5:2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "x,density");
    // middle row is x = 0 where the density is 1/pi
    let mid: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(mid[0].parse::<f64>().unwrap(), 0.0);
    let d: f64 = mid[1].parse().unwrap();
    assert!((d - 1.0 / std::f64::consts::PI).abs() < 1e-9);

    let out = freeconv(&["density", "marchenko_pastur(1/2)", "--grid", "0:3:3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("# atom at 0: 0.5"), "got: {text}");
}

#[test]
fn density_requires_a_catalog_family() {
    let out = freeconv(&[
        "density",
        r#"{"kind":"moments","values":[1,2]}"#,
        "--grid",
        "0:1:4",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_spec_is_an_input_error() {
    let out = freeconv(&["show", "nonsense(1)"]);
    assert_eq!(code(&out), 2);
    let out = freeconv(&["show", "marchenko_pastur(-1)"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn mc_small_run_and_dimension_guard() {
    let out = freeconv(&[
        "mc", "boxplus", "gue", "gue", "--dim", "64", "--trials", "4", "--orders", "4",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 64);
    assert_eq!(v["z_scores"].as_array().unwrap().len(), 4);
    // free cumulants add: m_2 prediction for gue + gue is 2
    assert!((as_f64(&v["predicted"][1]) - 2.0).abs() < 1e-12);

    let out = freeconv(&["mc", "boxplus", "gue", "gue", "--dim", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn mc_runs_are_reproducible() {
    let args = [
        "mc", "boxtimes", "wishart(1)", "gue", "--dim", "32", "--trials", "3", "--seed", "7",
    ];
    let a = freeconv(&args);
    let b = freeconv(&args);
    assert_eq!(code(&a), code(&b));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn convert_output_reparses_to_the_same_spec() {
    let out = freeconv(&["convert", "mlotkowski(3/2,1)", "--order", "6"]);
    assert_eq!(code(&out), 0);
    let emitted = String::from_utf8_lossy(&out.stdout).trim().to_string();
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "catalog");
    assert_eq!(v["name"], "mlotkowski");

    let again = freeconv(&["show", &emitted, "--order", "4"]);
    assert_eq!(code(&again), 0);
    let direct = freeconv(&["show", "mlotkowski(3/2,1)", "--order", "4"]);
    assert_eq!(again.stdout, direct.stdout);
}

#[test]
fn ops_specs_compose_on_the_command_line() {
    let spec = r#"{"kind":"ops","boxtimes":[
        {"kind":"catalog","name":"mlotkowski","params":["3/2",1]},
        {"kind":"catalog","name":"mlotkowski","params":["3/2",1]}]}"#;
    let out = freeconv(&["show", spec, "--order", "6"]);
    assert_eq!(code(&out), 0);
    let direct = freeconv(&["show", "marchenko_pastur(1)", "--order", "6"]);
    assert_eq!(out.stdout, direct.stdout);
}

#[test]
fn bp_maps_gaussian_to_wigner() {
    let out = freeconv(&["bp", "gaussian(0,1)", "--order", "6"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "moments");
    assert_eq!(numbers(&v["values"]), vec![0.0, 1.0, 0.0, 2.0, 0.0, 5.0]);
}

#[test]
fn symmetrize_then_desymmetrize_round_trips() {
    let out = freeconv(&["symmetrize", "marchenko_pastur(1)", "--order", "8"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let sym = String::from_utf8_lossy(&out.stdout).trim().to_string();
    assert_eq!(stdout_json(&out)["kind"], "symmetric_carrier");

    let back = freeconv(&["desymmetrize", &sym, "--order", "4"]);
    assert_eq!(code(&back), 0, "stderr: {}", String::from_utf8_lossy(&back.stderr));
    let v = stdout_json(&back);
    assert_eq!(numbers(&v["values"]), vec![1.0, 2.0, 5.0, 14.0]);
}

#[test]
fn order_env_variable_sets_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_freeconv"))
        .args(["show", "gue"])
        .env("FREECONV_ORDER", "5")
        .output()
        .expect("failed to spawn freeconv");
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["order"], 5);
    assert_eq!(v["moments"].as_array().unwrap().len(), 5);
}
