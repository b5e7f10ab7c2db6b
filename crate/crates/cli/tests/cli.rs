use std::path::Path;
use std::process::{Command, Output};

fn smoothlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = smoothlab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn count_fixtures() {
    assert_eq!(stdout(&["count", "--x", "100", "--y", "5"]), "34\n");
    assert_eq!(
        stdout(&["count", "--x", "100", "--y", "5", "--q", "3"]),
        "15\n"
    );
    assert_eq!(
        stdout(&["count", "--x", "100", "--y", "5", "--q", "3", "--a", "2"]),
        "7\n"
    );
    // 2^10 = 1024: the 5-smooth numbers up to 1024
    assert_eq!(
        stdout(&["count", "--base", "2", "--exponent", "10", "--y", "5"]),
        stdout(&["count", "--x", "1024", "--y", "5"])
    );
}

#[test]
fn count_rejects_non_coprime_class() {
    let out = smoothlab(&["count", "--x", "100", "--y", "5", "--q", "6", "--a", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not coprime"));
}

#[test]
fn saddle_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--json", "saddle", "1e6", "100"])).unwrap();
    let alpha = v["saddle"]["alpha"].as_f64().unwrap();
    assert!((alpha - 0.603856693322463).abs() < 1e-10);
    assert!(v["saddle"]["residual"].as_f64().unwrap() <= 1e-9 * 1e6f64.ln());
}

#[test]
fn character_table() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--json", "lfun", "--list-chars", "5"])).unwrap();
    let mut orders: Vec<u64> = v["characters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["order"].as_u64().unwrap())
        .collect();
    orders.sort_unstable();
    assert_eq!(orders, vec![1, 2, 4, 4]);
}

#[test]
fn lfun_principal_at_three_halves() {
    // y = 3, q = 1: (1 - 2^-1.5)^-1 (1 - 3^-1.5)^-1
    let expect = 1.0 / ((1.0 - 2f64.powf(-1.5)) * (1.0 - 3f64.powf(-1.5)));
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--json", "lfun", "1.5", "0", "1", "0", "3"])).unwrap();
    let re = v["result"]["value"][0].as_f64().unwrap();
    assert!((re - expect).abs() < 1e-12, "{re} vs {expect}");
}

#[test]
fn contour_json_has_result_fields() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "--json", "contour", "--x", "1000", "--y", "10", "--q", "5", "--chi", "1",
    ]))
    .unwrap();
    for key in ["value", "tail_bound", "quadrature_error_estimate"] {
        assert!(v["result"].get(key).is_some(), "missing {key}");
    }
    let wide = smoothlab(&[
        "contour",
        "--x",
        "1000",
        "--y",
        "10",
        "--q",
        "5",
        "--panel-width",
        "5",
    ]);
    assert_eq!(wide.status.code(), Some(2));
}

#[test]
fn verify_emits_one_line_per_instance() {
    let out = stdout(&[
        "verify",
        "--suite",
        "pointwise",
        "--seeds",
        "5",
        "--seed-base",
        "7",
    ]);
    let lines: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 10);
    assert!(lines
        .iter()
        .all(|l| l["holds"] == true && l["suite"] == "pointwise"));
}

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let out = dir.join("records.csv");
    let text = format!(
        r#"{{"xs": [100, 1000], "ys": [5], "qs": [3, 4], "output": {:?}, "epsilons": [0.0, 0.1]{extra}}}"#,
        out.to_str().unwrap()
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn experiment_writes_records_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#", "studies": ["equidistribution", "coset", "unsmoothing"]"#,
    );
    let plot = dir.path().join("plot.csv");
    stdout(&[
        "experiment",
        "--config",
        config.to_str().unwrap(),
        "--emit-plot-data",
        plot.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(dir.path().join("records.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("x,y,q,a,count,expected,discrepancy,u,v,w,alpha")
    );
    // phi(3) + phi(4) classes at each of two x values
    assert_eq!(lines.clone().count(), 8);
    assert!(lines.next().unwrap().starts_with("100,5,3,1,8,7.5,"));
    assert_eq!(std::fs::read_to_string(&plot).unwrap().lines().count(), 5);
}

#[test]
fn experiment_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#", "colour": "blue""#);
    let out = smoothlab(&["experiment", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}
