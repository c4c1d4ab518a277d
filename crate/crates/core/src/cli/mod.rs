//! `mnq` command-line interface.

mod format;
mod selfcheck;
mod sweep;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use marcum_nuttall::eval::{self, Function, Method};
use marcum_nuttall::oracle::{EvalPoint, OrderSpec, DEFAULT_TOL};
use marcum_nuttall::{DomainError, Error};

pub use format::num;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Parser)]
#[command(name = "mnq", version, about = "Marcum and Nuttall Q-functions: evaluation, bounds, sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at one point.
    Eval {
        function: EvalFunction,
        #[command(flatten)]
        args: PointArgs,
    },
    /// Half-odd rounding bounds for real orders.
    Bounds {
        function: BoundFunction,
        #[command(flatten)]
        args: PointArgs,
        /// Also evaluate the function and check that the interval contains it.
        #[arg(long)]
        with_value: bool,
    },
    /// Tabulate a function along one axis as CSV.
    Sweep(sweep::SweepArgs),
    /// Run the validation suites.
    Selfcheck(selfcheck::SelfcheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFunction {
    Marcum,
    Nuttall,
    NuttallNorm,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundFunction {
    Marcum,
    NuttallStd,
    NuttallNorm,
}

impl From<EvalFunction> for Function {
    fn from(f: EvalFunction) -> Self {
        match f {
            EvalFunction::Marcum => Function::Marcum,
            EvalFunction::Nuttall => Function::Nuttall,
            EvalFunction::NuttallNorm => Function::NuttallNorm,
        }
    }
}

impl From<BoundFunction> for Function {
    fn from(f: BoundFunction) -> Self {
        match f {
            BoundFunction::Marcum => Function::Marcum,
            BoundFunction::NuttallStd => Function::Nuttall,
            BoundFunction::NuttallNorm => Function::NuttallNorm,
        }
    }
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Order M.
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    /// Bessel order N (Nuttall functions only).
    #[arg(long, allow_negative_numbers = true)]
    n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// auto, closed, series or quadrature.
    #[arg(long, default_value = "auto")]
    method: Method,
    /// Relative tolerance of the series and quadrature routes.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

/// A failure mapped to an exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_domain() { exit::DOMAIN } else { exit::NUMERICAL };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: exit::FAILURE, message: format!("I/O error: {e}") }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { function, args } => cmd_eval(function.into(), &args),
        Command::Bounds { function, args, with_value } => cmd_bounds(function.into(), &args, with_value),
        Command::Sweep(args) => sweep::run(&args),
        Command::Selfcheck(args) => selfcheck::run(&args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Validates the order flags for `function`.
pub(crate) fn order_spec(function: Function, m: f64, n: Option<f64>) -> Result<OrderSpec, Error> {
    match (function, n) {
        (Function::Marcum, None) => OrderSpec::marcum(m),
        (Function::Marcum, Some(n)) => {
            Err(Error::Domain(DomainError::OutOfRange { name: "N", value: n, requirement: "no --n for marcum" }))
        }
        (_, Some(n)) => OrderSpec::nuttall(m, n),
        (_, None) => Err(Error::Domain(DomainError::OutOfRange {
            name: "N",
            value: f64::NAN,
            requirement: "--n is required for Nuttall functions",
        })),
    }
}

fn cmd_eval(function: Function, args: &PointArgs) -> Result<i32, Failure> {
    let order = order_spec(function, args.m, args.n)?;
    let point = EvalPoint::new(args.alpha, args.beta)?;
    let report = eval::evaluate(function, order, point, args.method, args.tol)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "value: {}", num(report.value))?;
    writeln!(out, "method: {}", report.method)?;
    writeln!(out, "est_error: {}", num(report.est_error))?;
    if let Some(c) = report.conditioning {
        writeln!(out, "conditioning: {}", num(c))?;
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(exit::OK)
}

fn cmd_bounds(function: Function, args: &PointArgs, with_value: bool) -> Result<i32, Failure> {
    let order = order_spec(function, args.m, args.n)?;
    let point = EvalPoint::new(args.alpha, args.beta)?;
    let interval = eval::bounds_for(function, order, point)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "lower: {}", num(interval.lower))?;
    writeln!(out, "upper: {}", num(interval.upper))?;
    writeln!(out, "degenerate: {}", interval.degenerate)?;
    writeln!(out, "conditioning: {}", num(interval.conditioning))?;
    if !interval.is_well_conditioned() {
        eprintln!("warning: bound endpoints are ill-conditioned (ratio {:e})", interval.conditioning);
    }
    if !with_value {
        return Ok(exit::OK);
    }
    // The bounds certify an independent route, so auto means the series here.
    let method = if args.method == Method::Auto { Method::Series } else { args.method };
    let report = eval::evaluate(function, order, point, method, args.tol)?;
    let slack = report.est_error;
    let contained = interval.lower - slack <= report.value && report.value <= interval.upper + slack;
    writeln!(out, "value: {}", num(report.value))?;
    writeln!(out, "method: {}", report.method)?;
    writeln!(out, "est_error: {}", num(report.est_error))?;
    writeln!(out, "contained: {contained}")?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if contained {
        Ok(exit::OK)
    } else {
        Err(Failure { code: exit::NUMERICAL, message: "value lies outside the bound interval".into() })
    }
}
