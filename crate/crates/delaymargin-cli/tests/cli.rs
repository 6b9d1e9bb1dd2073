//! End-to-end tests driving the compiled `delaymargin` binary.

use num_complex::Complex64;
use serde_json::Value;
use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

struct Output {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_delaymargin"))
        .args(args)
        .output()
        .expect("binary should spawn");
    Output {
        stdout: String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is UTF-8"),
        code: out.status.code().expect("no exit code"),
    }
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

#[test]
fn tauc_pure_negative_feedback_prints_pi_over_two() {
    let out = run(&["tauc", "--a", "0", "--w=-1,0"]);
    assert_eq!(out.code, 0);
    assert!(
        out.stdout.contains("1.5707963267948966"),
        "stdout: {}",
        out.stdout
    );
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tau_c"].as_f64().unwrap(), FRAC_PI_2);
    for field in ["arccos_form", "arccot_form", "matsunaga_form"] {
        let x = v[field].as_f64().unwrap();
        assert!((x - FRAC_PI_2).abs() < 1e-12, "{field} = {x}");
    }
}

#[test]
fn classify_reports_region_and_window() {
    let v = run_json(&["classify", "--a", "1", "--w", "0.5,0"]);
    assert_eq!(v["region"], "I");
    assert_eq!(v["window"], "all");
    assert_eq!(v["schema_version"], 1);

    let v = run_json(&["classify", "--a", "0", "--w=-1,0"]);
    assert_eq!(v["region"], "II");
    let tau_below = v["window"]["tau_below"].as_f64().unwrap();
    assert!((tau_below - FRAC_PI_2).abs() < 1e-12);

    let v = run_json(&["classify", "--a", "0", "--w", "0,1"]);
    assert_eq!(v["region"], "III");
    assert_eq!(v["window"], "none");
}

#[test]
fn hayes_curve_csv_has_header_and_starts_near_minus_one() {
    let out = run(&[
        "curve", "--kind", "hayes", "--tau", "1", "--samples", "4", "--format", "csv",
    ]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "param,a,rho");
    let first: Vec<f64> = lines[1].split(',').map(|t| t.parse().unwrap()).collect();
    // First sample sits at small theta, where the real-coefficient
    // boundary approaches (a, w) = (-1, -1), i.e. rho -> 1.
    assert!(first[0] < 0.2, "param = {}", first[0]);
    assert!((first[1] + 1.0).abs() < 0.05, "a = {}", first[1]);
    assert!((first[2] - 1.0).abs() < 0.05, "rho = {}", first[2]);
    // LF line endings only.
    assert!(!out.stdout.contains('\r'));
}

#[test]
fn curve_csv_round_trips_the_library_curve_exactly() {
    let out = run(&[
        "curve", "--kind", "gamma", "--psi", "2", "--label=-1", "--tau", "1.5", "--samples", "25",
        "--format", "csv",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let reference = delaymargin::gamma_curve(delaymargin::CurveLabel::Branch(-1), 2.0, 1.5, 25)
        .expect("reference curve");
    let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), reference.samples.len());
    for (row, sample) in rows.iter().zip(reference.samples.iter()) {
        let fields: Vec<f64> = row.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(fields[0].to_bits(), sample.param.to_bits());
        assert_eq!(fields[1].to_bits(), sample.a.to_bits());
        assert_eq!(fields[2].to_bits(), sample.rho.to_bits());
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["verify", "--seed", "11", "--count", "25"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);

    let args = [
        "curve", "--kind", "sakata", "--phi", "2.5", "--tau", "1.5", "--samples", "40", "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn ladder_matches_the_library() {
    let w = Complex64::from_polar(2.0, 2.5);
    let w_arg = format!("--w={},{}", w.re, w.im);
    let v = run_json(&["ladder", "--a", "0.3", &w_arg, "--n", "2"]);
    let p = delaymargin::CoefficientPoint::new(0.3, w);
    let reference = delaymargin::tau_ladder(&p, 2).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), reference.entries.len());
    for (entry, reference) in entries.iter().zip(reference.entries.iter()) {
        // Shortest-roundtrip JSON numbers reproduce the doubles exactly.
        assert_eq!(
            entry["tau"].as_f64().unwrap().to_bits(),
            reference.tau.to_bits()
        );
        assert_eq!(entry["label"], reference.label.to_string());
    }
}

#[test]
fn ladder_csv_has_single_header_row() {
    let w = Complex64::from_polar(2.0, 2.5);
    let w_arg = format!("--w={},{}", w.re, w.im);
    let out = run(&[
        "ladder", "--a", "0.3", &w_arg, "--n", "1", "--format", "csv",
    ]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "tau,label,omega,coincident");
    assert_eq!(lines.len(), 4); // header + critical + tau_1^- + tau_1^+
}

#[test]
fn roots_at_the_critical_delay_contain_the_imaginary_pair() {
    let tau = format!("{FRAC_PI_2}");
    let v = run_json(&[
        "roots",
        "--a",
        "0",
        "--w=-1,0",
        "--tau",
        &tau,
        "--sigma-min=-0.5",
    ]);
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(v["count"].as_u64().unwrap() as usize, roots.len());
    for target_im in [1.0, -1.0] {
        assert!(
            roots.iter().any(|r| {
                let re = r["re"].as_f64().unwrap();
                let im = r["im"].as_f64().unwrap();
                re.abs() < 1e-9 && (im - target_im).abs() < 1e-9
            }),
            "missing root near {target_im}i in {roots:?}"
        );
    }
    for r in roots {
        assert!(r["residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn scan_emits_the_grid_with_nan_outside_region_two() {
    let psi = format!("{PI}");
    let out = run(&[
        "scan",
        "--a-range=-1,1",
        "--rho-range",
        "0,2",
        "--psi",
        &psi,
        "--tau",
        "1",
        "--resolution",
        "2,3",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "a,rho,stable,tau_c");
    assert_eq!(lines.len(), 7);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let a: f64 = f[0].parse().unwrap();
        let rho: f64 = f[1].parse().unwrap();
        let stable: u8 = f[2].parse().unwrap();
        let tau_c: f64 = f[3].parse().unwrap();
        assert!(stable <= 1);
        let w = Complex64::from_polar(rho, PI);
        assert_eq!(stable == 1, delaymargin::is_stable(a, w, 1.0));
        let p = delaymargin::CoefficientPoint::new(a, w);
        let delay_dependent =
            delaymargin::classify(&p) == delaymargin::RegionClass::DelayDependent;
        assert_eq!(tau_c.is_nan(), !delay_dependent, "row {line}");
    }
}

#[test]
fn verify_reports_full_agreement_on_a_seeded_sample() {
    let v = run_json(&["verify", "--seed", "1", "--count", "40"]);
    assert_eq!(v["schema_version"], 1);
    assert!(v["disagreements"].as_array().unwrap().is_empty());
    let evaluated = v["evaluated"].as_u64().unwrap();
    let skipped = v["skipped_near_boundary"].as_u64().unwrap();
    assert_eq!(evaluated + skipped, 40);
    assert!(evaluated > 0);
}

#[test]
fn usage_errors_exit_one() {
    // Unknown subcommand.
    assert_eq!(run(&["bogus"]).code, 1);
    // Missing flag value.
    assert_eq!(run(&["tauc", "--a", "0"]).code, 1);
    // Malformed complex value.
    assert_eq!(run(&["tauc", "--a", "0", "--w", "one,two"]).code, 1);
    // Flag that does not apply to the curve kind.
    let out = run(&[
        "curve", "--kind", "hayes", "--tau", "1", "--samples", "4", "--phi", "1",
    ]);
    assert_eq!(out.code, 1);
    // Missing per-kind flag.
    let out = run(&["curve", "--kind", "sakata", "--tau", "1", "--samples", "4"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--phi"));
}

#[test]
fn domain_errors_exit_two() {
    // Region III has no critical delay.
    let out = run(&["tauc", "--a", "0", "--w", "0,1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("domain"), "stderr: {}", out.stderr);
    // Region I has no crossing ladder.
    assert_eq!(run(&["ladder", "--a", "2", "--w", "1,0", "--n", "3"]).code, 2);
    // Degenerate scan resolution.
    let out = run(&[
        "scan",
        "--a-range=-1,1",
        "--rho-range",
        "0,2",
        "--psi",
        "3",
        "--tau",
        "1",
        "--resolution",
        "1",
    ]);
    assert_eq!(out.code, 2);
    // Nonpositive delay for a curve.
    let out = run(&[
        "curve", "--kind", "hayes", "--tau", "0", "--samples", "4",
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["curve", "--help"]).code, 0);
}
