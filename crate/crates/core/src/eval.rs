//! Method dispatch: one entry point that picks the closed form when it is
//! exact and well conditioned, and falls back to the series otherwise.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{self, BoundInterval};
use crate::closed_form::{self, ClosedValue, HalfOddPair};
use crate::error::{DomainError, Result};
use crate::oracle::{self, EvalPoint, OrderSpec};
use crate::special::HalfOdd;

/// Estimated errors above this get a warning attached to the report.
pub const WARN_ERROR: f64 = 1e-8;

/// Rounding allowance added to series and quadrature error estimates.
const ROUNDING_ULPS: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Marcum,
    Nuttall,
    NuttallNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Auto,
    Closed,
    Series,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Method::Auto),
            "closed" => Ok(Method::Closed),
            "series" => Ok(Method::Series),
            "quadrature" => Ok(Method::Quadrature),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

/// A value with the route that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    /// The route actually used; never [`Method::Auto`].
    pub method: Method,
    pub est_error: f64,
    /// Cancellation ratio, for closed-form values only.
    pub conditioning: Option<f64>,
    pub interval: Option<BoundInterval>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    fn new(value: f64, method: Method, est_error: f64, conditioning: Option<f64>) -> Self {
        let mut report = EvalReport { value, method, est_error, conditioning, interval: None, warnings: Vec::new() };
        if est_error > WARN_ERROR {
            report.warnings.push(format!(
                "estimated error {est_error:e} exceeds {WARN_ERROR:e} ({method} route)"
            ));
        }
        report
    }

    fn closed(c: ClosedValue) -> Self {
        let mut report = Self::new(c.value, Method::Closed, c.error_estimate(), Some(c.conditioning));
        if !c.is_well_conditioned() {
            report.warnings.push(format!(
                "closed form is ill-conditioned (ratio {:e}); prefer --method series",
                c.conditioning
            ));
        }
        report
    }
}

/// Evaluates `function` at the given orders and point.
///
/// `order` must be built with [`OrderSpec::marcum`] for [`Function::Marcum`]
/// and [`OrderSpec::nuttall`] otherwise.
pub fn evaluate(function: Function, order: OrderSpec, point: EvalPoint, method: Method, tol: f64) -> Result<EvalReport> {
    match method {
        Method::Closed => Ok(EvalReport::closed(closed(function, order, point)?)),
        Method::Series => series(function, order, point, tol),
        Method::Quadrature => quadrature(function, order, point, tol),
        Method::Auto => {
            if closed_applicable(function, order, point) {
                let c = closed(function, order, point)?;
                if c.is_well_conditioned() {
                    return Ok(EvalReport::closed(c));
                }
            }
            series(function, order, point, tol)
        }
    }
}

/// Evaluates and attaches the rounding bounds for the function.
pub fn evaluate_with_bounds(
    function: Function,
    order: OrderSpec,
    point: EvalPoint,
    method: Method,
    tol: f64,
) -> Result<EvalReport> {
    let interval = bounds_for(function, order, point)?;
    let mut report = evaluate(function, order, point, method, tol)?;
    if !interval.is_well_conditioned() {
        report.warnings.push(format!(
            "bound endpoints are ill-conditioned (ratio {:e})",
            interval.conditioning
        ));
    }
    report.interval = Some(interval);
    Ok(report)
}

pub fn bounds_for(function: Function, order: OrderSpec, point: EvalPoint) -> Result<BoundInterval> {
    match function {
        Function::Marcum => bounds::marcum_bounds(order.m(), point),
        Function::Nuttall => bounds::std_nuttall_bounds(order.m(), order.n(), point),
        Function::NuttallNorm => bounds::norm_nuttall_bounds(order.m(), order.n(), point),
    }
}

fn closed_applicable(function: Function, order: OrderSpec, point: EvalPoint) -> bool {
    let m_ok = HalfOdd::is_half_odd(order.m());
    match function {
        Function::Marcum => m_ok,
        Function::Nuttall | Function::NuttallNorm => {
            m_ok && HalfOdd::is_half_odd(order.n()) && order.m() >= order.n() && point.alpha > 0.0
        }
    }
}

fn closed(function: Function, order: OrderSpec, point: EvalPoint) -> Result<ClosedValue> {
    let m = HalfOdd::new(order.m())?;
    match function {
        Function::Marcum if point.alpha == 0.0 => {
            let value = closed_form::marcum_zero_alpha(m.value(), point.beta)?;
            Ok(ClosedValue { value, conditioning: 1.0 })
        }
        Function::Marcum => closed_form::marcum_half_odd(m, point),
        Function::Nuttall | Function::NuttallNorm => {
            let n = HalfOdd::new(order.n())?;
            if n > m {
                return Err(DomainError::OrderSpacing { m: order.m(), n: order.n() }.into());
            }
            let pair = HalfOddPair::from_orders(m, n)?;
            if function == Function::Nuttall {
                closed_form::nuttall_half_odd(pair, point)
            } else {
                closed_form::norm_nuttall_half_odd(pair, point)
            }
        }
    }
}

fn series(function: Function, order: OrderSpec, point: EvalPoint, tol: f64) -> Result<EvalReport> {
    let r = match function {
        Function::Marcum => oracle::marcum_series(order, point, tol)?,
        Function::Nuttall => oracle::nuttall_series(order, point, tol)?,
        Function::NuttallNorm => oracle::norm_nuttall_series(order, point, tol)?,
    };
    let rounding = ROUNDING_ULPS * f64::EPSILON * r.value.abs();
    Ok(EvalReport::new(r.value, Method::Series, r.tail_bound + rounding, None))
}

fn quadrature(function: Function, order: OrderSpec, point: EvalPoint, tol: f64) -> Result<EvalReport> {
    let r = match function {
        Function::Marcum => oracle::marcum_quadrature(order.m(), point, tol)?,
        Function::Nuttall => oracle::nuttall_quadrature(order, point, tol)?,
        Function::NuttallNorm => oracle::norm_nuttall_quadrature(order, point, tol)?,
    };
    let rounding = ROUNDING_ULPS * f64::EPSILON * r.value.abs();
    Ok(EvalReport::new(r.value, Method::Quadrature, r.error_estimate + rounding, None))
}
