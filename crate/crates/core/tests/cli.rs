use std::process::{Command, Output};

use marcum_nuttall::closed_form::{norm_nuttall_half_odd, HalfOddPair};
use marcum_nuttall::oracle::{nuttall_series, EvalPoint, OrderSpec};
use marcum_nuttall::special::gaussian_q;

fn mnq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mnq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no '{key}' in:\n{text}"))
        .to_owned()
}

fn value(text: &str) -> f64 {
    field(text, "value").parse().unwrap()
}

/// Data rows of a CSV as numeric cells; empty and text cells become `None`.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().ok()).collect()).collect();
    (header, rows)
}

#[test]
fn eval_marcum_examples() {
    let o = mnq(&["eval", "marcum", "--m", "1", "--alpha", "0", "--beta", "2"]);
    assert!(o.status.success());
    assert!((value(&stdout(&o)) - 0.1353352832366127).abs() < 1e-16);

    let o = mnq(&["eval", "marcum", "--m", "0.5", "--alpha", "1", "--beta", "1"]);
    let text = stdout(&o);
    assert_eq!(field(&text, "method"), "closed");
    assert!((value(&text) - (gaussian_q(2.0) + gaussian_q(0.0))).abs() < 1e-16);
}

#[test]
fn eval_nuttall_matches_series() {
    let o = mnq(&["eval", "nuttall", "--m", "5", "--n", "3", "--alpha", "4", "--beta", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let s = nuttall_series(OrderSpec::nuttall(5.0, 3.0).unwrap(), EvalPoint::new(4.0, 6.0).unwrap(), 1e-12).unwrap();
    assert!(((value(&text) - s.value) / s.value).abs() < 1e-12);
    assert_eq!(field(&text, "method"), "series");

    let q = mnq(&["eval", "nuttall", "--m", "5", "--n", "3", "--alpha", "4", "--beta", "6", "--method", "quadrature"]);
    assert_eq!(field(&stdout(&q), "method"), "quadrature");
    assert!(((value(&stdout(&q)) - s.value) / s.value).abs() < 1e-10);
}

#[test]
fn eval_exit_codes() {
    // Domain: negative β, missing N, closed form off the lattice.
    assert_eq!(mnq(&["eval", "marcum", "--m", "1", "--alpha", "1", "--beta", "-1"]).status.code(), Some(2));
    assert_eq!(mnq(&["eval", "nuttall", "--m", "2", "--alpha", "1", "--beta", "1"]).status.code(), Some(2));
    let o = mnq(&["eval", "marcum", "--m", "2.7", "--alpha", "1", "--beta", "1", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("half-odd"));
    // Unparseable method is a usage error.
    assert_eq!(mnq(&["eval", "marcum", "--m", "1", "--alpha", "1", "--beta", "1", "--method", "x"]).status.code(), Some(2));
}

#[test]
fn eval_warns_on_large_error_estimate() {
    let o = mnq(&["eval", "marcum", "--m", "3.5", "--alpha", "1e-6", "--beta", "1", "--method", "closed"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let auto = mnq(&["eval", "marcum", "--m", "3.5", "--alpha", "1e-6", "--beta", "1"]);
    assert_eq!(field(&stdout(&auto), "method"), "series");
}

#[test]
fn bounds_marcum() {
    let o = mnq(&["bounds", "marcum", "--m", "2.5", "--alpha", "2", "--beta", "3"]);
    let text = stdout(&o);
    assert_eq!(field(&text, "degenerate"), "true");
    assert_eq!(field(&text, "lower"), field(&text, "upper"));

    let o = mnq(&["bounds", "marcum", "--m", "8.3", "--alpha", "2.5", "--beta", "3.5", "--with-value"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "contained"), "true");
    let (lo, hi, v): (f64, f64, f64) =
        (field(&text, "lower").parse().unwrap(), field(&text, "upper").parse().unwrap(), value(&text));
    assert!(lo < v && v < hi);
}

#[test]
fn bounds_nuttall_gates() {
    let o = mnq(&["bounds", "nuttall-std", "--m", "5", "--n", "3", "--alpha", "0.9", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha below 1"));

    let o = mnq(&["bounds", "nuttall-norm", "--m", "4.7", "--n", "2.5", "--alpha", "2", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fractional mismatch"));

    let o = mnq(&["bounds", "nuttall-norm", "--m", "5", "--n", "3", "--alpha", "2", "--beta", "2", "--with-value"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let pair = HalfOddPair::from_reals(4.5, 2.5).unwrap();
    let lo = norm_nuttall_half_odd(pair, EvalPoint::new(2.0, 2.0).unwrap()).unwrap().value;
    assert_eq!(field(&text, "lower").parse::<f64>().unwrap(), lo);
}

#[test]
fn sweep_order_sum_is_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let o = mnq(&[
        "sweep", "nuttall-norm", "--vary", "order-sum", "--from", "2", "--to", "16", "--step", "0.5", "--diff", "1",
        "--alpha", "7.5", "--beta", "6.5", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["axis", "value"]);
    assert_eq!(rows.len(), 29);
    let values: Vec<f64> = rows.iter().map(|r| r[1].unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    let axes: Vec<f64> = rows.iter().map(|r| r[0].unwrap()).collect();
    assert!(axes.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_bounds_columns_sandwich() {
    let o = mnq(&[
        "sweep", "nuttall-norm", "--vary", "beta", "--from", "0.5", "--to", "12", "--step", "0.5", "--m", "5", "--n",
        "3", "--alpha", "6.5", "--bounds", "--diagnostics",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["axis", "value", "lower", "upper", "method", "est_error"]);
    for r in &rows {
        let (v, lo, hi) = (r[1].unwrap(), r[2].unwrap(), r[3].unwrap());
        assert!(lo <= v && v <= hi, "{r:?}");
    }
    assert!(text.lines().skip(1).all(|l| l.contains(",series,")));
}

#[test]
fn sweep_degenerate_columns_match() {
    let o = mnq(&[
        "sweep", "marcum", "--vary", "beta", "--from", "0.5", "--to", "6", "--step", "0.5", "--m", "2.5", "--alpha",
        "2.5", "--bounds",
    ]);
    let (_, rows) = csv_rows(&stdout(&o));
    for r in &rows {
        assert_eq!(r[2].unwrap().to_bits(), r[3].unwrap().to_bits());
        assert_eq!(r[1].unwrap().to_bits(), r[2].unwrap().to_bits());
    }
}

#[test]
fn sweep_records_domain_errors_as_empty_cells() {
    // β = 0 is outside the bound domain.
    let o = mnq(&[
        "sweep", "marcum", "--vary", "beta", "--from", "0", "--to", "1", "--step", "0.5", "--m", "2.7", "--alpha", "1",
        "--bounds",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().ends_with(",,"), "{text}");
    assert!(text.contains("# domain errors: 1"));
}

#[test]
fn sweep_csv_round_trips() {
    let o = mnq(&["sweep", "marcum", "--vary", "order", "--from", "0.6", "--to", "8", "--step", "0.2", "--alpha", "2.5", "--beta", "3"]);
    let text = stdout(&o);
    let (_, rows) = csv_rows(&text);
    for (line, r) in text.lines().skip(1).zip(&rows) {
        let cells: Vec<&str> = line.split(',').collect();
        // Re-rendering a parsed value reproduces the text exactly.
        assert_eq!(format!("{}", r[1].unwrap()), cells[1]);
    }
    assert_eq!(rows[1][0], Some(0.8));
}

#[test]
fn sweep_rejects_bad_grid() {
    let o = mnq(&["sweep", "marcum", "--vary", "beta", "--from", "2", "--to", "1", "--step", "0.1", "--m", "2", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selfcheck_coarse_passes_and_mutations_fail() {
    let o = mnq(&["selfcheck"]);
    assert!(o.status.success(), "{}", stdout(&o));
    for m in ["parity", "sgn"] {
        let o = mnq(&["selfcheck", "--mutate", m]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stdout(&o).contains("FAIL closed vs quadrature"));
    }
}

#[test]
fn selfcheck_fine_writes_frontier() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.csv");
    let o = mnq(&["selfcheck", "--grid", "fine", "--frontier", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("m,n,alpha,beta,conditioning,rel_error\n"));
    assert!(text.lines().count() > 1000);
}
