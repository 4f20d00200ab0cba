use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gausspacket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Parses a CSV document (ignoring `#` lines) into header and numeric rows.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn params_values() {
    let out = run(&["params", "--sign", "+"]);
    assert!(out.status.success());
    let (h, rows) = csv(&stdout(&out));
    assert!((rows[0][column(&h, "delta")] - 3f64.sqrt()).abs() < 1e-15);
    assert!((rows[0][column(&h, "r")] - 0.658_478_948_462_408_4).abs() < 1e-15);
    assert!((rows[0][column(&h, "theta")] - PI / 2.0).abs() < 1e-15);
}

#[test]
fn params_minimum_uncertainty() {
    let out = run(&["params", "--dx0", "2", "--dp0", "0.25"]);
    let (h, rows) = csv(&stdout(&out));
    assert_eq!(rows[0][column(&h, "delta")], 0.0);
    // e^{2r} = dx0^2 / (1/2) for the free mass at delta = 0
    assert!((rows[0][column(&h, "r")] - 0.5 * 8f64.ln()).abs() < 1e-14);
}

#[test]
fn uncertainty_violation_exits_1() {
    let out = run(&["params", "--dp0", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("uncertainty principle violated"));
}

#[test]
fn bad_flags_exit_1() {
    assert_eq!(
        run(&["params", "--system", "pendulum"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["params", "--sign", "0"]).status.code(), Some(1));
    assert_eq!(run(&["params", "--mass", "-1"]).status.code(), Some(1));
    assert_eq!(
        run(&["moments", "--t0", "2", "--t1", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["params", "--config", "/nonexistent.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn moments_single_row() {
    let out = run(&[
        "moments", "--t0", "0", "--t1", "0", "--steps", "1", "--x0", "0.5", "--p0", "-1", "--sign",
        "+",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("t,x_c,p_c,var_x,var_p,cov_xp,S_c\n"));
    let (_, rows) = csv(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..3], &[0.0, 0.5, -1.0]);
    assert!((rows[0][3] - 1.0).abs() < 1e-15 && (rows[0][4] - 1.0).abs() < 1e-15);
    assert!((rows[0][5] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert_eq!(rows[0][6], 0.0);
}

#[test]
fn moments_contractive_minimum() {
    let tau = 3f64.sqrt() / 2.0;
    let out = run(&[
        "moments",
        "--t0",
        "0",
        "--t1",
        &format!("{}", 2.0 * tau),
        "--steps",
        "3",
    ]);
    let (h, rows) = csv(&stdout(&out));
    assert!((rows[1][0] - tau).abs() < 1e-15);
    assert!((rows[1][column(&h, "var_x")] - 0.25).abs() < 1e-12);
    assert!((rows[2][column(&h, "var_x")] - 1.0).abs() < 1e-12);
}

#[test]
fn oscillator_variance_half_period() {
    let out = run(&[
        "moments",
        "--system",
        "osc",
        "--omega",
        "2",
        "--dx0",
        "0.7",
        "--dp0",
        "2",
        "--t0",
        "0.3",
        "--t1",
        &format!("{}", 0.3 + PI / 2.0),
        "--steps",
        "2",
    ]);
    let (h, rows) = csv(&stdout(&out));
    let k = column(&h, "var_x");
    assert!((rows[0][k] / rows[1][k] - 1.0).abs() < 1e-12);
}

#[test]
fn wavefield_norm_and_peak() {
    let out = run(&[
        "wavefield",
        "--t",
        "1.5",
        "--x0",
        "1",
        "--p0",
        "2",
        "--strict",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let norm: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# norm="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 1.0).abs() < 1e-8);
    let (h, rows) = csv(&text);
    let d = column(&h, "density");
    let peak = rows.iter().max_by(|a, b| a[d].total_cmp(&b[d])).unwrap();
    let dx = rows[1][0] - rows[0][0];
    // x_c = x0 + p0 t / m
    assert!((peak[0] - 4.0).abs() <= dx);
    let gm = text
        .lines()
        .find_map(|l| l.strip_prefix("# grid_moments mean_x="))
        .unwrap();
    let mean_x: f64 = gm.split(' ').next().unwrap().parse().unwrap();
    assert!((mean_x - 4.0).abs() < 1e-6);
}

#[test]
fn wavefield_textbook_gaussian() {
    let out = run(&["wavefield", "--dx0", "0.5", "--dp0", "1", "--x0", "0.2"]);
    let (h, rows) = csv(&stdout(&out));
    let d = column(&h, "density");
    for row in rows {
        let x = row[0];
        let expected =
            (2.0 * PI * 0.25f64).powf(-0.5) * (-(x - 0.2f64).powi(2) / (2.0 * 0.25)).exp();
        assert!((row[d] - expected).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn wavefield_strict_narrow_grid_exits_2() {
    let narrow = [
        "wavefield",
        "--t",
        "1",
        "--xmin",
        "-3",
        "--xmax",
        "3",
        "--n",
        "64",
    ];
    let out = run(&[&narrow[..], &["--strict"]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("grid too narrow"));
    let lenient = run(&narrow);
    assert!(lenient.status.success());
    assert!(stderr(&lenient).contains("narrow"));
}

#[test]
fn wavefield_json_mirrors_csv() {
    let out = run(&[
        "wavefield",
        "--format",
        "json",
        "--n",
        "64",
        "--xmin",
        "-10",
        "--xmax",
        "10",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["x", "re_psi", "im_psi", "density"] {
        assert_eq!(v[key].as_array().unwrap().len(), 64);
    }
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["grid"]["n"], 64);
    assert!(v["grid_moments"]["var_x"].as_f64().unwrap() > 0.0);
}

#[test]
fn contractive_with_oracle() {
    let out = run(&["contractive", "--oracle", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["tau"].as_f64().unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert_eq!(v["var_min"].as_f64().unwrap(), 0.25);
    assert!((v["t_return"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-15);
    assert!((v["var_star"].as_f64().unwrap() - 0.25).abs() < 1e-4);
}

#[test]
fn contractive_rejects_plus_and_oscillator() {
    assert_eq!(run(&["contractive", "--sign", "+"]).status.code(), Some(1));
    assert_eq!(
        run(&["contractive", "--system", "osc"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_quick_default() {
    let start = Instant::now();
    let out = run(&["verify"]);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("strang_convergence"));
}

#[test]
fn verify_full_includes_convergence() {
    let out = run(&[
        "verify", "--level", "full", "--system", "osc", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"strang_convergence"));
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_corrupted_tolerance_exits_2() {
    let dir = std::env::temp_dir().join(format!("gausspacket-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tight.json");
    fs::write(&path, r#"{"tolerances": {"oracle_l2_eps": 1e-15}}"#).unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oracle_agreement"));
    assert!(stdout(&out).contains("FAIL"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("gausspacket-cfg-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    fs::write(
        &path,
        r#"{"system": {"kind": "osc", "mass": 2.0, "omega": 0.5}, "initial": {"x0": 3.0, "sign": "+"}, "format": "json", "precision": 6}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v: serde_json::Value =
        serde_json::from_slice(&run(&["params", "--config", p]).stdout).unwrap();
    assert_eq!(v["mean_x"], 3.0);
    let v: serde_json::Value =
        serde_json::from_slice(&run(&["params", "--config", p, "--x0", "-1.5"]).stdout).unwrap();
    assert_eq!(v["mean_x"], -1.5);
    // 6 significant digits
    let r = v["r"].as_f64().unwrap();
    assert_eq!(format!("{r:.5e}").parse::<f64>().unwrap(), r);
    assert_ne!(r, 0.5 * (2.0f64 * 0.5 + 1.0 / (2.0 * 0.5)).acosh());
    let csv_out = stdout(&run(&["params", "--config", p, "--format", "csv"]));
    assert!(csv_out.starts_with("delta,"));
    fs::write(&path, r#"{"system": {"knd": "osc"}}"#).unwrap();
    assert_eq!(run(&["params", "--config", p]).status.code(), Some(1));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic_and_locale_free() {
    let args = [
        "moments", "--system", "osc", "--x0", "1.25", "--p0", "-0.5", "--t1", "10", "--steps", "50",
    ];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_gausspacket"))
        .args(args)
        .env("LC_ALL", "de_DE.UTF-8")
        .env("LANG", "de_DE.UTF-8")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let (_, rows) = csv(&stdout(&a));
    assert_eq!(rows.len(), 50);
    // every value survives a text round trip at 17 digits
    let text = stdout(&a);
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let v: f64 = cell.parse().unwrap();
        assert_eq!(format!("{:.16e}", v), cell);
    }
}
