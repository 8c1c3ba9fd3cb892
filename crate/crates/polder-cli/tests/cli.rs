//! End-to-end tests of the compiled binary: documented CSV/JSON shapes on
//! the bundled example configurations, the exit-code contract, and the
//! inspection verb's report.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const EXPECTED_HEADER: &str = "R,wick_dir,pole_real_dir,width_dir,wick_mix,pole_real_mix,\
                               width_mix,total_plus,total_minus,width_total_plus";

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_polder"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("the binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn json_of(path: &Path) -> Value {
    let body = fs::read_to_string(path).expect("JSON file exists");
    serde_json::from_str(&body).expect("JSON parses")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn validate_passes_and_names_its_invariants() {
    let output = run(&["validate"]);
    assert_exit(&output, 0);
    let text = stdout_of(&output);
    assert!(
        text.contains("identity_two_denominators(1,1) = 2πi"),
        "missing the unit-argument identity line:\n{text}"
    );
    assert!(
        text.contains("total ≈ vdW at short range, slope 2"),
        "missing the short-range restoration line:\n{text}"
    );
    assert!(
        text.contains("12 of 12 checks passed"),
        "summary missing:\n{text}"
    );
    assert!(!text.contains("FAIL"), "unexpected failure line:\n{text}");
}

#[test]
fn validate_json_is_machine_readable() {
    let output = run(&["validate", "--json"]);
    assert_exit(&output, 0);
    let report: Value = serde_json::from_str(&stdout_of(&output)).expect("stdout is JSON");
    let checks = report.as_array().expect("an array of checks");
    assert_eq!(checks.len(), 12);
    for c in checks {
        assert!(c["passed"].as_bool().expect("passed flag"), "failed: {c}");
        assert!(c["name"].as_str().is_some());
        assert!(c["measured"].as_f64().is_some());
        assert!(c["threshold"].as_f64().is_some());
        assert!(c["detail"].as_str().is_some());
    }
}

#[test]
fn curve_sweep_matches_the_documented_shape() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = run(&[
        "curve",
        "--config",
        example("excited_ground.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let csv = fs::read_to_string(dir.path().join("curve.csv")).expect("CSV exists");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 65, "header plus 64 grid rows");
    assert_eq!(lines[0], EXPECTED_HEADER);

    let mut previous_r = 0.0;
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 10, "malformed row: {row}");
        let r: f64 = cells[0].parse().expect("numeric R");
        assert!(r > previous_r, "grid must ascend");
        previous_r = r;
        // Non-identical pair: the three mixing columns are null markers.
        assert_eq!(&cells[4..7], ["NA", "NA", "NA"], "row: {row}");
        for cell in [cells[1], cells[2], cells[3], cells[7], cells[8], cells[9]] {
            let _: f64 = cell.parse().expect("numeric channel cell");
        }
    }

    // Innermost grid point sits deep in the near zone: the total is the
    // dispersion sum -C6/R^6 with C6 = 53/30 up to retardation corrections.
    let first: Vec<&str> = lines[1].split(',').collect();
    let r0: f64 = first[0].parse().unwrap();
    let total: f64 = first[7].parse().unwrap();
    assert_eq!(r0, 10.0);
    assert!(rel(total, -(53.0 / 30.0) / r0.powi(6)) < 1e-3);

    let meta = json_of(&dir.path().join("curve.json"));
    assert_eq!(meta["rows"], 64);
    assert_eq!(meta["csv"], "curve.csv");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["grid"]["points"], 64);
    assert_eq!(meta["grid"]["spacing"], "log");
    let hash = meta["config_hash"].as_str().expect("hash string");
    assert!(
        hash.starts_with("fnv1a64:") && hash.len() == "fnv1a64:".len() + 16,
        "unexpected hash format: {hash}"
    );
    let columns: Vec<&str> = meta["columns"]
        .as_array()
        .expect("columns array")
        .iter()
        .map(|v| v.as_str().expect("column name"))
        .collect();
    assert_eq!(columns.join(","), EXPECTED_HEADER);
}

#[test]
fn identical_pair_fills_the_mixing_columns() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = run(&[
        "curve",
        "--config",
        example("mixing_ladder.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let csv = fs::read_to_string(dir.path().join("curve.csv")).expect("CSV exists");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 49, "header plus 48 grid rows");
    for row in &lines[1..] {
        let cells: Vec<f64> = row
            .split(',')
            .map(|c| c.parse().expect("every cell numeric"))
            .collect();
        assert_eq!(cells.len(), 10);
        let [_, wick_dir, pole_dir, width_dir, wick_mix, pole_mix, width_mix, plus, minus, width_plus] =
            cells[..]
        else {
            unreachable!("length asserted above")
        };
        // The two branches are direct +- mixing, column by column.
        let direct = wick_dir + pole_dir;
        let mixing = wick_mix + pole_mix;
        assert!((plus - (direct + mixing)).abs() <= 1e-12 * plus.abs().max(1.0));
        assert!((minus - (direct - mixing)).abs() <= 1e-12 * minus.abs().max(1.0));
        assert!((width_plus - (width_dir + width_mix)).abs() <= 1e-12 * width_plus.abs().max(1.0));
    }
}

#[test]
fn ground_pair_regimes_reports_textbook_coefficients() {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = run(&[
        "regimes",
        "--config",
        example("ground_ground.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let report = json_of(&dir.path().join("regimes.json"));
    let c = 137.035999;
    let c6 = report["c6_tensor_sum"].as_f64().expect("C6");
    let c7 = report["c7_coefficient"].as_f64().expect("C7");
    assert!((c6 - 6.0).abs() < 1e-12);
    assert!(rel(c7, 92.0 * c / std::f64::consts::PI) < 1e-12);
    assert!(report["crossover_radius"].is_null());
    assert!(report["ratio_loglog_slope"].is_null());
    assert_eq!(report["pole_envelopes"].as_array().map(Vec::len), Some(0));
}

#[test]
fn excited_pair_regimes_locates_the_crossover() {
    let dir = tempfile::tempdir().expect("temp dir");
    // Far-zone sample window: past the crossover, where the envelope-to-tail
    // ratio grows as R^5.
    let config = dir.path().join("far.toml");
    let body = fs::read_to_string(example("excited_ground.toml")).expect("example exists");
    fs::write(
        &config,
        body.replace("min = 10.0", "min = 7e3")
            .replace("max = 1e4", "max = 7e4")
            .replace("points = 64", "points = 9"),
    )
    .expect("write far-zone config");
    let out = run(&[
        "regimes",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_exit(&out, 0);

    let report = json_of(&dir.path().join("regimes.json"));
    let c = 137.035999;
    let rc = report["crossover_radius"]
        .as_f64()
        .expect("crossover present");
    assert!((1e3..2e3).contains(&rc), "crossover at {rc}");
    let slope = report["ratio_loglog_slope"]
        .as_f64()
        .expect("slope present");
    assert!((slope - 5.0).abs() <= 0.1, "ratio slope {slope}");

    let envelopes = report["pole_envelopes"].as_array().expect("envelope list");
    assert_eq!(envelopes.len(), 1);
    let env = &envelopes[0];
    assert_eq!(env["state_label"], "m");
    assert_eq!(env["side"], "A");
    assert!(rel(env["wavenumber"].as_f64().unwrap(), 0.2 / c) < 1e-12);
    assert!(
        rel(
            env["amplitude"].as_f64().unwrap(),
            (0.1 / c).powi(4) * (2.0 / 3.0)
        ) < 1e-12
    );
    assert_eq!(
        report["ratio_samples"].as_array().map(Vec::len),
        Some(9),
        "one sample per grid point"
    );
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().expect("temp dir");
    let good = fs::read_to_string(example("excited_ground.toml")).expect("example exists");

    // Descending grid bounds.
    let swapped = dir.path().join("swapped.toml");
    fs::write(&swapped, good.replace("min = 10.0", "min = 5e4")).expect("write config");
    let out = run(&["curve", "--config", swapped.to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("[grid]"));

    // Type error in the document: the message carries a line number.
    let typed = dir.path().join("typed.toml");
    fs::write(&typed, good.replace("points = 64", "points = \"many\"")).expect("write config");
    let out = run(&["curve", "--config", typed.to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(
        stderr_of(&out).contains("line"),
        "no line info: {}",
        stderr_of(&out)
    );

    // Unreadable path.
    let out = run(&["curve", "--config", "/nonexistent/run.toml"]);
    assert_exit(&out, 2);

    // Unknown channel name.
    let channeled = dir.path().join("channeled.toml");
    fs::write(
        &channeled,
        format!("{good}\n[output]\nchannels = [\"sideways\"]\n"),
    )
    .expect("write config");
    let out = run(&["curve", "--config", channeled.to_str().unwrap()]);
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("sideways"));

    // Malformed thread-count environment variable, caught before any work.
    let out = Command::new(env!("CARGO_BIN_EXE_polder"))
        .arg("validate")
        .env("POLDER_THREADS", "three")
        .output()
        .expect("the binary runs");
    assert_exit(&out, 2);
    assert!(stderr_of(&out).contains("POLDER_THREADS"));
}

#[test]
fn retarded_prescription_is_for_inspection_only() {
    let config = example("ground_ground.toml");
    for verb in ["curve", "regimes"] {
        let out = run(&[
            "--prescription",
            "retarded",
            verb,
            "--config",
            config.to_str().unwrap(),
        ]);
        assert_exit(&out, 2);
        assert!(stderr_of(&out).contains("retarded"));
    }
    let out = run(&["--prescription", "retarded", "validate"]);
    assert_exit(&out, 2);

    let out = run(&[
        "--prescription",
        "retarded",
        "inspect",
        "--config",
        config.to_str().unwrap(),
        "--omega",
        "0.25",
    ]);
    assert_exit(&out, 0);
    let report: Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert_eq!(report["prescription"], "retarded");
}

#[test]
fn resonant_pair_exits_with_code_three() {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = dir.path().join("resonant.toml");
    fs::write(
        &config,
        r#"
[atom.A]
levels = [["g", 0.0], ["u", 0.3], ["w", 0.8]]
dipoles = [["g", "u", 0.5, 0.1, 0.2], ["u", "w", -0.2, 0.4, 0.1]]

[pair]
reference_a = "w"
reference_b = "w"
identical = true

[grid]
min = 5.0
max = 50.0
points = 4
spacing = "log"
"#,
    )
    .expect("write config");
    let out = run(&["curve", "--config", config.to_str().unwrap()]);
    assert_exit(&out, 3);
    let err = stderr_of(&out);
    assert!(err.contains("resonant"), "stderr: {err}");
    assert!(err.contains("`u`"), "stderr names the level: {err}");
}

#[test]
fn inspect_reports_the_scalar_response() {
    let out = run(&[
        "inspect",
        "--config",
        example("ground_ground.toml").to_str().unwrap(),
        "--atom",
        "B",
        "--omega",
        "0.1",
        "--imaginary",
        "--density",
        "0.001",
    ]);
    assert_exit(&out, 0);
    let report: Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert_eq!(report["atom"], "B");
    assert_eq!(report["reference"], "g");
    assert_eq!(report["prescription"], "feynman");
    assert_eq!(report["omega"][0], 0.0);
    assert_eq!(report["omega"][1], 0.1);

    // alpha(i xi) = sum 2 E d^2 / (E^2 + xi^2) = 1/0.26 per axis.
    let expected = 1.0 / 0.26;
    assert!(rel(report["scalar"][0].as_f64().unwrap(), expected) < 1e-12);
    assert_eq!(report["scalar"][1], 0.0);
    assert!(rel(report["static_scalar"].as_f64().unwrap(), 4.0) < 1e-12);
    assert!(report["isotropy_deviation"].as_f64().unwrap() <= 1e-14);
    let eps = report["relative_permittivity"][0].as_f64().unwrap();
    assert!(rel(eps, 1.0 + 4.0 * std::f64::consts::PI * 0.001 * expected) < 1e-12);

    // The anisotropic excited atom has no scalar reduction.
    let out = run(&[
        "inspect",
        "--config",
        example("excited_ground.toml").to_str().unwrap(),
        "--omega",
        "0.25",
    ]);
    assert_exit(&out, 0);
    let report: Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert_eq!(report["atom"], "A");
    assert!(report["scalar"].is_null());
    assert!(report["isotropy_deviation"].as_f64().unwrap() > 0.1);
    assert!(report.get("relative_permittivity").is_none());
}
