//! Two-sided bounds for real orders.
//!
//! The Marcum function is increasing in `M`, and the normalized Nuttall
//! function is increasing in `M + N` at fixed `M - N` (the standard one too,
//! once `α >= 1`). Rounding the orders down and up to the neighbouring
//! half-odd integers therefore brackets the value, and both ends are exact
//! closed forms. The bounds never touch the series, so they certify it.

use crate::closed_form::{
    marcum_half_odd, marcum_zero_alpha, norm_nuttall_half_odd, nuttall_half_odd, ClosedValue,
    HalfOddPair,
};
use crate::error::{require_finite, DomainError, Result};
use crate::oracle::EvalPoint;
use crate::special::{ceil_half, floor_half, HalfOdd};

/// Tolerance on `δ_M = δ_N` for floating-point orders.
pub const FRACTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    /// The orders were already half-odd and `lower == upper`.
    pub degenerate: bool,
    /// Worst cancellation ratio of the two closed-form evaluations.
    pub conditioning: f64,
}

impl BoundInterval {
    fn from_ends(lower: ClosedValue, upper: Option<ClosedValue>) -> Self {
        match upper {
            None => BoundInterval {
                lower: lower.value,
                upper: lower.value,
                degenerate: true,
                conditioning: lower.conditioning,
            },
            Some(upper) => BoundInterval {
                lower: lower.value,
                upper: upper.value,
                degenerate: false,
                conditioning: lower.conditioning.max(upper.conditioning),
            },
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Strict containment, the expected relation for non-half-odd orders.
    pub fn strictly_contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Both ends were computed without significant cancellation.
    pub fn is_well_conditioned(&self) -> bool {
        self.conditioning < crate::closed_form::CONDITIONING_LIMIT
    }
}

/// `[Q_{⌊M⌋_{0.5}}(α, β), Q_{⌈M⌉_{0.5}}(α, β)]` for real `M > 0.5`,
/// `α >= 0`, `β > 0`.
pub fn marcum_bounds(m: f64, point: EvalPoint) -> Result<BoundInterval> {
    require_finite("M", m)?;
    if m <= 0.5 {
        return Err(DomainError::OrderFloor { name: "M", value: m }.into());
    }
    require_positive("beta", point.beta)?;
    let eval = |order: HalfOdd| -> Result<ClosedValue> {
        if point.alpha == 0.0 {
            let value = marcum_zero_alpha(order.value(), point.beta)?;
            Ok(ClosedValue { value, conditioning: 1.0 })
        } else {
            marcum_half_odd(order, point)
        }
    };
    let (lo, hi) = (floor_half(m)?, ceil_half(m)?);
    let lower = eval(lo)?;
    let upper = if lo == hi { None } else { Some(eval(hi)?) };
    Ok(BoundInterval::from_ends(lower, upper))
}

/// Bounds on the normalized Nuttall function for real `M, N > 0.5` with
/// `M - N` a positive integer, `α, β > 0`.
pub fn norm_nuttall_bounds(m: f64, n: f64, point: EvalPoint) -> Result<BoundInterval> {
    let (lo, hi) = rounded_pairs(m, n, point)?;
    let lower = norm_nuttall_half_odd(lo, point)?;
    let upper = if lo == hi { None } else { Some(norm_nuttall_half_odd(hi, point)?) };
    Ok(BoundInterval::from_ends(lower, upper))
}

/// Bounds on the standard Nuttall function; as [`norm_nuttall_bounds`] with
/// the additional requirement `α >= 1`.
pub fn std_nuttall_bounds(m: f64, n: f64, point: EvalPoint) -> Result<BoundInterval> {
    let (lo, hi) = rounded_pairs(m, n, point)?;
    if point.alpha < 1.0 {
        return Err(DomainError::AlphaBelowOne(point.alpha).into());
    }
    let lower = nuttall_half_odd(lo, point)?;
    let upper = if lo == hi { None } else { Some(nuttall_half_odd(hi, point)?) };
    Ok(BoundInterval::from_ends(lower, upper))
}

/// Checks the Nuttall preconditions in a fixed order and rounds
/// `(M, N)` down and up along the line `M - N = c`.
fn rounded_pairs(m: f64, n: f64, point: EvalPoint) -> Result<(HalfOddPair, HalfOddPair)> {
    require_finite("M", m)?;
    require_finite("N", n)?;
    if m <= 0.5 {
        return Err(DomainError::OrderFloor { name: "M", value: m }.into());
    }
    if n <= 0.5 {
        return Err(DomainError::OrderFloor { name: "N", value: n }.into());
    }
    let diff = m - n;
    if diff < 1.0 - FRACTION_TOL {
        return Err(DomainError::OrderSpacing { m, n }.into());
    }
    let c = diff.round();
    if (diff - c).abs() > FRACTION_TOL {
        return Err(DomainError::FractionalMismatch { m, n }.into());
    }
    require_positive("alpha", point.alpha)?;
    require_positive("beta", point.beta)?;

    // N's own rounding can disagree with M's by one step when δ_N sits a
    // hair under an integer; rounding M and shifting by c keeps the pairs on
    // the line M - N = c. N > 0.5 and c <= M - 0.5 keep n_index >= 1.
    let c = c as u32;
    let pair = |order: HalfOdd| HalfOddPair::new(order.index(), order.index() - c);
    let (lo, hi) = (floor_half(m)?, ceil_half(m)?);
    Ok((pair(lo)?, pair(hi)?))
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(DomainError::NonPositiveArgument { name, value }.into())
    }
}
