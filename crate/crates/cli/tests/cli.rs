use std::process::{Command, Output};

fn logwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logwell")).args(args).output().expect("spawn logwell")
}

fn stdout(args: &[&str]) -> String {
    let out = logwell(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

#[test]
fn perturb_reproduces_coefficients() {
    let expected = [
        3.178979744, 1.548588333, 2.355395491, 1.762515165, 2.208042866,
        1.838931594, 2.146975999, 1.878156443, 2.113606700, 1.902022366,
    ];
    let rows = csv_rows(&stdout(&["perturb", "--n-max", "9"]));
    assert_eq!(rows.len(), 10);
    for (row, e) in rows.iter().zip(expected) {
        let closed: f64 = row[3].parse().unwrap();
        let diff: f64 = row[5].parse().unwrap();
        assert!((closed - e).abs() < 1e-9);
        assert!(diff <= 1e-8);
    }
    let single = csv_rows(&stdout(&["perturb", "--n-max", "0"]));
    assert_eq!(single.len(), 1);
    assert_eq!(single[0][0], "0");
}

#[test]
fn crossings_default_pairs() {
    let rows = csv_rows(&stdout(&["crossings"]));
    let expected = [("0", "1", 4.540138798, "false"), ("0", "2", 23.96744320, "true"), ("2", "3", 29.13203044, "false")];
    assert_eq!(rows.len(), 3);
    for (row, (m, n, g, spurious)) in rows.iter().zip(expected) {
        assert_eq!((row[0].as_str(), row[1].as_str(), row[3].as_str()), (m, n, spurious));
        assert!((row[2].parse::<f64>().unwrap() - g).abs() < 1e-6);
    }
    let custom = csv_rows(&stdout(&["crossings", "--pair", "1,3"]));
    assert_eq!(custom, vec![vec!["1", "3", "", "true"]]);
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["crossings", "--pair", "2,1"][..],
        &["crossings", "--pair", "3,3"],
        &["spectrum", "--g", "-1"],
        &["perturb", "--n-max", "51"],
        &["spectrum", "--format", "xml"],
    ] {
        let out = logwell(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    let bad_grid = logwell(&["wavefunction", "--points", "4"]);
    assert_eq!(bad_grid.status.code(), Some(1));
    let bad_lambda = logwell(&["transform-study", "--lambda-max", "4", "--lambda-max", "3"]);
    assert_eq!(bad_lambda.status.code(), Some(1));
}

#[test]
fn empty_well_spectrum() {
    let rows = csv_rows(&stdout(&["spectrum", "--g", "0", "--n-max", "4"]));
    for (n, row) in rows.iter().enumerate() {
        let e: f64 = row[2].parse().unwrap();
        let exact = ((n + 1) as f64 * std::f64::consts::FRAC_PI_2).powi(2);
        assert!((e - exact).abs() < 1e-9, "n={n}");
        assert_eq!(row[5], "ok");
    }
}

#[test]
fn csv_and_json_agree() {
    for args in [
        &["spectrum", "--g", "0.5"][..],
        &["transform-study"],
        &["crossings"],
        &["wavefunction", "--g", "10", "--level", "1", "--points", "33"],
    ] {
        let csv = stdout(args);
        let doc = json(args);
        let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        let rows = doc["rows"].as_array().unwrap();
        let csv_rows = csv_rows(&csv);
        assert_eq!(rows.len(), csv_rows.len());
        for (obj, row) in rows.iter().zip(&csv_rows) {
            for (col, cell) in header.iter().zip(row) {
                let v = &obj[*col];
                match v {
                    serde_json::Value::Number(n) => {
                        assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap(), "{col}")
                    }
                    serde_json::Value::Null => assert_eq!(cell, ""),
                    serde_json::Value::String(s) => assert_eq!(s, cell),
                    other => assert_eq!(other.to_string(), *cell),
                }
            }
        }
        assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
        assert!(doc["meta"]["parameters"].is_object());
    }
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("logwell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        stdout(&["spectrum", "--g", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn strong_spike_wavefunctions() {
    for level in 0..=2 {
        let doc = json(&["wavefunction", "--g", "10", "--level", &level.to_string(), "--points", "401"]);
        assert_eq!(doc["meta"]["parameters"]["nodes"], level);
        let psi: Vec<f64> = doc["rows"].as_array().unwrap().iter().map(|r| r["psi"].as_f64().unwrap()).collect();
        assert_eq!(psi.len(), 401);
        assert_eq!((psi[0], psi[400]), (0.0, 0.0));
        let sign = if level % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..200 {
            assert_eq!(psi[400 - i], sign * psi[i]);
        }
    }
}

#[test]
fn first_excited_empty_well_is_a_sine() {
    let doc = json(&["wavefunction", "--g", "0", "--level", "1", "--points", "101"]);
    for row in doc["rows"].as_array().unwrap() {
        let (x, psi) = (row["x"].as_f64().unwrap(), row["psi"].as_f64().unwrap());
        assert!((psi.abs() - (std::f64::consts::PI * x).sin().abs()).abs() < 1e-7, "x={x}");
    }
}

#[test]
fn transform_study_table() {
    let doc = json(&["transform-study"]);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!((rows[0]["phi_at_zero"].as_f64().unwrap() + 0.064333935).abs() < 1e-3);
    let low: Vec<f64> = rows[4..].iter().map(|r| r["phi_at_zero"].as_f64().unwrap().abs()).collect();
    assert!(low.windows(2).all(|w| w[1] < w[0]));

    let single = json(&["transform-study", "--lambda-max", "4"]);
    assert!(single["rows"].as_array().unwrap().iter().all(|r| r["difference"].is_null()));
}

#[test]
fn approximations_grid() {
    let doc = json(&["approx", "--g", "1", "--points", "101"]);
    let meta = &doc["meta"]["parameters"];
    assert!(meta["rect_max_deviation"].as_f64().unwrap() < 0.2);
    assert!(meta["rect_energy"].as_f64().unwrap() < meta["energy"].as_f64().unwrap());
    assert_eq!(doc["rows"].as_array().unwrap().len(), 101);
}
