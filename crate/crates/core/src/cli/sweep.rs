//! `mnq sweep`: one function along one axis, written as CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use marcum_nuttall::eval::{self, Function, Method};
use marcum_nuttall::oracle::{EvalPoint, DEFAULT_TOL};
use marcum_nuttall::{Error, Result};
use rayon::prelude::*;

use super::format::{Layout, Row};
use super::{exit, order_spec, EvalFunction, Failure};

#[derive(Args)]
pub struct SweepArgs {
    function: EvalFunction,
    /// Which parameter runs along the axis.
    #[arg(long)]
    vary: Axis,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    step: f64,
    /// Order M (fixed unless it is the varied axis).
    #[arg(long)]
    m: Option<f64>,
    /// Bessel order N for Nuttall functions.
    #[arg(long)]
    n: Option<f64>,
    /// Fixed M - N for order-sum sweeps (and order sweeps of Nuttall functions).
    #[arg(long)]
    diff: Option<f64>,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "auto")]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Add lower,upper columns from the rounding bounds.
    #[arg(long)]
    bounds: bool,
    /// Add method,est_error columns.
    #[arg(long)]
    diagnostics: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    Beta,
    OrderSum,
    Order,
}

/// Orders and point at one axis value.
struct Setting {
    m: f64,
    n: Option<f64>,
    alpha: f64,
    beta: f64,
}

#[derive(Default)]
struct Tally {
    domain: usize,
    numerical: usize,
}

pub fn run(args: &SweepArgs) -> std::result::Result<i32, Failure> {
    let function = Function::from(args.function);
    let axis = grid(args.from, args.to, args.step)?;
    check_fixed(args, function)?;
    let layout = Layout { bounds: args.bounds, diagnostics: args.diagnostics };

    let results: Vec<(Row, Tally)> = axis.par_iter().map(|&x| evaluate_row(args, function, x)).collect();

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    writeln!(sink, "{}", layout.header())?;
    let mut total = Tally::default();
    for (row, tally) in &results {
        writeln!(sink, "{}", layout.render(row))?;
        total.domain += tally.domain;
        total.numerical += tally.numerical;
    }
    if total.domain > 0 {
        writeln!(sink, "# domain errors: {}", total.domain)?;
    }
    if total.numerical > 0 {
        writeln!(sink, "# numerical failures: {}", total.numerical)?;
    }
    sink.flush()?;
    Ok(if total.numerical > 0 { exit::NUMERICAL } else { exit::OK })
}

/// `from, from + step, ..., <= to`, snapped to 12 decimals so that
/// `0.6 + 0.2·k` lands on the decimal the user typed.
fn grid(from: f64, to: f64, step: f64) -> std::result::Result<Vec<f64>, Failure> {
    let usage = |message: String| Failure { code: exit::DOMAIN, message };
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(usage("--from, --to and --step must be finite".into()));
    }
    if from >= to {
        return Err(usage(format!("--from {from} must be below --to {to}")));
    }
    if step <= 0.0 {
        return Err(usage(format!("--step {step} must be positive")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count < 2 {
        return Err(usage("--step leaves fewer than two grid points".into()));
    }
    Ok((0..count)
        .map(|i| {
            let x = from + i as f64 * step;
            format!("{x:.12}").parse().unwrap_or(x)
        })
        .collect())
}

fn check_fixed(args: &SweepArgs, function: Function) -> std::result::Result<(), Failure> {
    let usage = |message: &str| Err(Failure { code: exit::DOMAIN, message: message.into() });
    let nuttall = function != Function::Marcum;
    match args.vary {
        Axis::Beta => {
            if args.m.is_none() {
                return usage("--m is required unless the order varies");
            }
            if nuttall && args.n.is_none() {
                return usage("--n is required for Nuttall functions");
            }
        }
        Axis::Order => {
            if args.beta.is_none() {
                return usage("--beta is required unless beta varies");
            }
            if nuttall && args.n.is_none() && args.diff.is_none() {
                return usage("order sweeps of Nuttall functions need --n or --diff");
            }
        }
        Axis::OrderSum => {
            if args.beta.is_none() {
                return usage("--beta is required unless beta varies");
            }
            if nuttall && args.diff.is_none() {
                return usage("--diff is required for order-sum sweeps");
            }
        }
    }
    Ok(())
}

fn setting(args: &SweepArgs, function: Function, x: f64) -> Setting {
    let marcum = function == Function::Marcum;
    let (m, n, beta) = match args.vary {
        Axis::Beta => (args.m.unwrap_or(f64::NAN), args.n, x),
        Axis::Order => {
            let n = if marcum { None } else { args.diff.map(|c| x - c).or(args.n) };
            (x, n, args.beta.unwrap_or(f64::NAN))
        }
        Axis::OrderSum => {
            // M + N = x with M - N = c; Marcum has N = M - 1.
            let c = if marcum { 1.0 } else { args.diff.unwrap_or(f64::NAN) };
            let m = 0.5 * (x + c);
            (m, (!marcum).then_some(0.5 * (x - c)), args.beta.unwrap_or(f64::NAN))
        }
    };
    Setting { m, n, alpha: args.alpha, beta }
}

fn evaluate_row(args: &SweepArgs, function: Function, x: f64) -> (Row, Tally) {
    let mut row = Row { axis: x, value: None, bounds: None, method: None, est_error: None };
    let mut tally = Tally::default();
    let mut record = |e: &Error| {
        if e.is_domain() {
            tally.domain += 1;
        } else {
            tally.numerical += 1;
        }
    };
    let s = setting(args, function, x);
    let prepared: Result<_> =
        order_spec(function, s.m, s.n).and_then(|o| Ok((o, EvalPoint::new(s.alpha, s.beta)?)));
    let (order, point) = match prepared {
        Ok(p) => p,
        Err(e) => {
            record(&e);
            return (row, tally);
        }
    };
    match eval::evaluate(function, order, point, args.method, args.tol) {
        Ok(r) => {
            row.value = Some(r.value);
            row.method = Some(r.method.as_str());
            row.est_error = Some(r.est_error);
        }
        Err(e) => record(&e),
    }
    if args.bounds {
        match eval::bounds_for(function, order, point) {
            Ok(b) => row.bounds = Some((b.lower, b.upper)),
            Err(e) => record(&e),
        }
    }
    (row, tally)
}
