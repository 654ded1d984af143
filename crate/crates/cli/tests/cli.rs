use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn riskytime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskytime"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = riskytime(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn flat_curve_is_a_discount_curve() {
    let out = run_ok(&[
        "curve",
        "--config",
        fixture("flat_curve.json").to_str().unwrap(),
    ]);
    let rows = csv(&out);
    assert!(out.starts_with("T,price,is_atom\n"));
    for r in &rows {
        let (m, p): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!((p - (-0.02 * m).exp()).abs() < 1e-15);
    }
    let prices: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(prices.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn announced_atom_shows_as_a_price_drop() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "atom.json",
        r#"{"time_grid":[0.0],"maturity_grid":[0.0,2.0],"f":[[0.01,0.01]],
            "atoms":[{"u":1.0,"S":0.0,"gamma":0.3,"g":[0.25]}]}"#,
    );
    let rows = csv(&run_ok(&["curve", "--config", &cfg, "--step", "0.5"]));
    let at: Vec<&Vec<String>> = rows
        .iter()
        .filter(|r| r[0].parse::<f64>().unwrap() == 1.0)
        .collect();
    assert_eq!(at.len(), 2);
    assert_eq!((at[0][2].as_str(), at[1][2].as_str()), ("0", "1"));
    let (left, right): (f64, f64) = (at[0][1].parse().unwrap(), at[1][1].parse().unwrap());
    assert!((right / left - (-0.25f64).exp()).abs() < 1e-15);
}

#[test]
fn empty_or_malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(&dir, "empty.json", "");
    let bad = write(&dir, "bad.json", "{\"time_grid\": [0.0,");
    for cmd in ["curve", "affine", "filter", "simulate", "verify"] {
        assert_eq!(
            riskytime(&[cmd, "--config", &empty, "--seed", "1"])
                .status
                .code(),
            Some(2)
        );
        assert_eq!(
            riskytime(&[cmd, "--config", &bad, "--seed", "1"])
                .status
                .code(),
            Some(2)
        );
    }
    assert_eq!(riskytime(&["curve"]).status.code(), Some(2));
    assert_eq!(
        riskytime(&["curve", "--config", "/no/such/file.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn zero_loadings_price_at_par() {
    let out = run_ok(&[
        "affine",
        "--config",
        fixture("affine_zero_loadings.json").to_str().unwrap(),
    ]);
    for r in csv(&out) {
        assert_eq!(r[3].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn cir_solution_reproduces_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.csv");
    let out = run_ok(&[
        "affine",
        "--config",
        fixture("cir.json").to_str().unwrap(),
        "--step",
        "1e-4",
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert!(out.starts_with("T,A,B_1,price,A_cf,B_cf\n"));
    for r in csv(&out) {
        let v: Vec<f64> = r.iter().map(|x| x.parse().unwrap()).collect();
        assert!(
            (v[1] - v[4]).abs() < 1e-10 && (v[2] - v[5]).abs() < 1e-10,
            "{r:?}"
        );
    }
    let sol = std::fs::read_to_string(sol).unwrap();
    assert!(sol.starts_with("t,A,B_1,risky\n"));
    assert_eq!(sol.lines().filter(|l| l.ends_with(",1")).count(), 1);
}

#[test]
fn inadmissible_affine_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "neg.json",
        r#"{"cir":{"mu0":0.02,"mu1":-0.3,"sigma":-0.2,"psi1":0.5},"u1":1.0,"x0":[0.04],"maturities":[1.0]}"#,
    );
    assert_eq!(
        riskytime(&["affine", "--config", &cfg]).status.code(),
        Some(2)
    );
}

#[test]
fn perfect_news_pins_the_filter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "setup.json",
        r#"{"v0":1,"sigma":0.2,"muX":0.05,"varX":0.04,"K":0.8,"Kprime":0.7,
            "T":3,"U":5,"S":2,"sigma_eta":0}"#,
    );
    let out = run_ok(&[
        "filter", "--config", &cfg, "--seed", "4", "--format", "json", "--step", "0.01",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let x = v["x_true"].as_f64().unwrap();
    for row in v["rows"].as_array().unwrap() {
        if row["t"].as_f64().unwrap() >= 2.0 {
            assert_eq!(row["xhat"].as_f64().unwrap(), x);
            assert_eq!(row["Sigma"].as_f64().unwrap(), 0.0);
        }
    }
}

#[test]
fn news_after_the_first_payment_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        &dir,
        "late.json",
        r#"{"v0":1,"sigma":0.2,"muX":0.05,"varX":0.04,"K":0.8,"Kprime":0.7,
            "T":3,"U":5,"S":3.5,"sigma_eta":0.1}"#,
    );
    assert_eq!(
        riskytime(&["filter", "--config", &cfg, "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn filter_csv_leaves_pu_empty_before_the_news() {
    let out = run_ok(&[
        "filter",
        "--config",
        fixture("merton_setup.json").to_str().unwrap(),
        "--seed",
        "2",
        "--step",
        "0.25",
    ]);
    assert!(out.starts_with("t,xhat,Sigma,pT,pU\n"));
    for r in csv(&out) {
        let t: f64 = r[0].parse().unwrap();
        assert_eq!(r[4].is_empty(), t < 2.0, "{r:?}");
    }
}

#[test]
fn simulated_survival_matches_the_formula() {
    let out = run_ok(&[
        "simulate",
        "--config",
        fixture("hazard.json").to_str().unwrap(),
        "--seed",
        "8",
        "--paths",
        "20000",
    ]);
    let taus: Vec<f64> = csv(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(taus.len(), 20_000);
    let n = taus.len() as f64;
    for &(t, exact) in &[
        (0.5f64, (-0.05f64).exp()),
        (1.2, (-0.12f64).exp() * 0.7),
        (2.0, (-0.2f64).exp() * 0.56),
    ] {
        let emp = taus.iter().filter(|&&x| x > t).count() as f64 / n;
        assert!(
            (emp - exact).abs() < 3.5 * (exact * (1.0 - exact) / n).sqrt(),
            "t={t}"
        );
    }
}

#[test]
fn zero_hazard_simulation_has_no_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "zero.json", r#"{"lambda":[0.0],"horizon":1.0}"#);
    let out = run_ok(&[
        "simulate", "--config", &cfg, "--seed", "1", "--paths", "100",
    ]);
    assert!(csv(&out).iter().all(|r| r[1] == "inf" && r[2].is_empty()));
}

#[test]
fn simulation_needs_a_seed() {
    let out = riskytime(&[
        "simulate",
        "--config",
        fixture("hazard.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let code = |name: &str, extra: &[&str]| {
        let f = fixture(name);
        let mut args = vec!["verify", "--config", f.to_str().unwrap()];
        args.extend_from_slice(extra);
        riskytime(&args).status.code()
    };
    assert_eq!(code("cir.json", &[]), Some(0));
    assert_eq!(
        code("cir.json", &["--seed", "5", "--paths", "2000"]),
        Some(0)
    );
    assert_eq!(code("atom_priced.json", &[]), Some(0));
    assert_eq!(code("atom_unpriced.json", &[]), Some(1));
    assert_eq!(code("merton_verify.json", &[]), Some(0));
}

#[test]
fn unpriced_atom_residual_is_the_log_survival_factor() {
    let out = riskytime(&[
        "verify",
        "--config",
        fixture("atom_unpriced.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dc1 = &v[0];
    assert_eq!(dc1["condition"], "dc1");
    assert_eq!(dc1["pass"], false);
    assert!((dc1["max_residual"].as_f64().unwrap() + 0.7f64.ln()).abs() < 1e-12);
    assert_eq!(dc1["argmax"]["T"].as_f64().unwrap(), 1.0);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    let stdout = run_ok(&[
        "curve",
        "--config",
        fixture("flat_curve.json").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}
