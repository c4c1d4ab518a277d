//! Scalar special functions: log-gamma, regularized incomplete gamma,
//! erfc / Gaussian Q, rising factorials, sign, half-integer rounding and the
//! modified Bessel function of the first kind.
//!
//! Every function validates its arguments and rejects non-finite input. Values
//! that can overflow are assembled in the log domain and exponentiated once.

use crate::error::{require_finite, DomainError, Error, Result};
use crate::summation::CompensatedSum;

/// Iteration cap shared by the incomplete-gamma series and continued fraction.
pub const GAMMA_ITERATION_CAP: usize = 500;

/// Largest `z` accepted by the unscaled [`bessel_i`].
pub const BESSEL_DIRECT_LIMIT: f64 = 300.0;

/// `ln(f64::MAX)`, the exponent above which `exp` overflows.
pub(crate) const LN_MAX: f64 = 709.782_712_893_384;

const FPMIN: f64 = 1e-300;

/// `ln Γ(z)` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    require_finite("z", z)?;
    if z <= 0.0 {
        return Err(Error::out_of_range("z", z, "z > 0"));
    }
    Ok(ln_gamma_unchecked(z))
}

#[inline]
pub(crate) fn ln_gamma_unchecked(z: f64) -> f64 {
    libm::lgamma(z)
}

/// Both regularized incomplete gammas at one point, plus `ln Q` computed
/// without underflow on the continued-fraction branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncompleteGamma {
    /// `P(r, x) = γ(r, x) / Γ(r)`.
    pub lower: f64,
    /// `Q(r, x) = Γ(r, x) / Γ(r)`.
    pub upper: f64,
    /// `ln Q(r, x)`.
    pub ln_upper: f64,
}

/// Evaluates `P(r, x)` and `Q(r, x)` together.
///
/// The power series is used for `x < r + 1`, the modified-Lentz continued
/// fraction otherwise; the other function is taken as the complement.
pub fn incomplete_gamma(r: f64, x: f64) -> Result<IncompleteGamma> {
    require_finite("r", r)?;
    require_finite("x", x)?;
    if r <= 0.0 {
        return Err(Error::out_of_range("r", r, "r > 0"));
    }
    if x < 0.0 {
        return Err(Error::out_of_range("x", x, "x >= 0"));
    }
    incomplete_gamma_unchecked(r, x)
}

pub(crate) fn incomplete_gamma_unchecked(r: f64, x: f64) -> Result<IncompleteGamma> {
    if x == 0.0 {
        return Ok(IncompleteGamma { lower: 0.0, upper: 1.0, ln_upper: 0.0 });
    }
    if x < r + 1.0 {
        let lower = lower_series(r, x)?;
        Ok(IncompleteGamma { lower, upper: 1.0 - lower, ln_upper: (-lower).ln_1p() })
    } else {
        let ln_upper = upper_fraction_ln(r, x)?;
        let upper = ln_upper.exp();
        Ok(IncompleteGamma { lower: 1.0 - upper, upper, ln_upper })
    }
}

fn lower_series(r: f64, x: f64) -> Result<f64> {
    let mut ap = r;
    let mut del = 1.0;
    let mut sum = 1.0;
    for _ in 0..GAMMA_ITERATION_CAP {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() <= sum.abs() * f64::EPSILON {
            let ln_prefactor = r * x.ln() - x - ln_gamma_unchecked(r + 1.0);
            return Ok((sum * ln_prefactor.exp()).min(1.0));
        }
    }
    Err(Error::NonConvergence { what: "incomplete gamma series", iterations: GAMMA_ITERATION_CAP })
}

fn upper_fraction_ln(r: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - r;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_ITERATION_CAP {
        let i = i as f64;
        let an = -i * (i - r);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(r * x.ln() - x - ln_gamma_unchecked(r) + h.ln());
        }
    }
    Err(Error::NonConvergence {
        what: "incomplete gamma continued fraction",
        iterations: GAMMA_ITERATION_CAP,
    })
}

/// Regularized lower incomplete gamma `P(r, x)`.
pub fn reg_lower_gamma(r: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma(r, x)?.lower)
}

/// Regularized upper incomplete gamma `Q(r, x) = 1 - P(r, x)`.
pub fn reg_upper_gamma(r: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma(r, x)?.upper)
}

/// `ln Q(r, x)`, finite even where `Q` itself underflows.
pub fn ln_reg_upper_gamma(r: f64, x: f64) -> Result<f64> {
    Ok(incomplete_gamma(r, x)?.ln_upper)
}

pub(crate) fn exp_or_overflow(ln_value: f64, what: &'static str) -> Result<f64> {
    if ln_value > LN_MAX {
        Err(Error::Overflow(what))
    } else {
        Ok(ln_value.exp())
    }
}

/// Upper incomplete gamma `Γ(r, x)`.
pub fn upper_inc_gamma(r: f64, x: f64) -> Result<f64> {
    let g = incomplete_gamma(r, x)?;
    exp_or_overflow(ln_gamma_unchecked(r) + g.ln_upper, "upper incomplete gamma exceeds f64 range")
}

/// Lower incomplete gamma `γ(r, x)`.
pub fn lower_inc_gamma(r: f64, x: f64) -> Result<f64> {
    let g = incomplete_gamma(r, x)?;
    if g.lower == 0.0 {
        return Ok(0.0);
    }
    exp_or_overflow(ln_gamma_unchecked(r) + g.lower.ln(), "lower incomplete gamma exceeds f64 range")
}

/// `Γ(r + s, x) / Γ(r)`, strictly increasing in `r` for every `s >= 0`, `x > 0`.
pub fn gamma_ratio(s: f64, r: f64, x: f64) -> Result<f64> {
    require_finite("s", s)?;
    require_finite("r", r)?;
    require_finite("x", x)?;
    if s < 0.0 {
        return Err(Error::out_of_range("s", s, "s >= 0"));
    }
    if r <= 0.0 {
        return Err(Error::out_of_range("r", r, "r > 0"));
    }
    if x <= 0.0 {
        return Err(Error::out_of_range("x", x, "x > 0"));
    }
    let g = incomplete_gamma_unchecked(r + s, x)?;
    let ln_value = g.ln_upper + (ln_gamma_unchecked(r + s) - ln_gamma_unchecked(r));
    exp_or_overflow(ln_value, "incomplete gamma ratio exceeds f64 range")
}

/// Complementary error function.
pub fn erfc(z: f64) -> f64 {
    libm::erfc(z)
}

/// Gaussian tail probability `Q(z) = erfc(z / √2) / 2`.
pub fn gaussian_q(z: f64) -> f64 {
    0.5 * erfc(z * std::f64::consts::FRAC_1_SQRT_2)
}

/// A rising factorial `(m)_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pochhammer {
    /// The value; `+∞` once it leaves the f64 range.
    pub value: f64,
    pub ln_value: f64,
    /// True when `value` is the exact integer (below 2^53).
    pub exact: bool,
}

/// `(m)_n = (m + n - 1)! / (m - 1)!` for integer `m >= 1`, `n >= 0`.
pub fn pochhammer(m: u64, n: u64) -> Result<Pochhammer> {
    if m == 0 {
        return Err(Error::out_of_range("m", 0.0, "m >= 1"));
    }
    const EXACT_LIMIT: u128 = 1 << 53;
    let mut acc: u128 = 1;
    let mut exact = true;
    for j in 0..n {
        acc = match acc.checked_mul(u128::from(m + j)) {
            Some(v) if v < EXACT_LIMIT => v,
            _ => {
                exact = false;
                break;
            }
        };
    }
    if exact {
        let value = acc as f64;
        return Ok(Pochhammer { value, ln_value: value.ln(), exact });
    }
    let value: f64 = (0..n).map(|j| (m + j) as f64).product();
    let ln_value = if value.is_finite() {
        value.ln()
    } else {
        ln_gamma_unchecked((m + n) as f64) - ln_gamma_unchecked(m as f64)
    };
    Ok(Pochhammer { value, ln_value, exact })
}

/// Signum with `sgn(0) = 0`.
pub fn sgn(z: f64) -> i32 {
    if z > 0.0 {
        1
    } else if z < 0.0 {
        -1
    } else {
        0
    }
}

/// `s^p` for `s ∈ {-1, 0, 1}` by parity, with `0^0 = 1`.
pub(crate) fn sign_pow(s: i32, p: u32) -> i32 {
    match (s, p) {
        (_, 0) => 1,
        (0, _) => 0,
        (1, _) => 1,
        (_, p) if p % 2 == 0 => 1,
        _ => -1,
    }
}

/// `(-1)^p`.
#[inline]
pub(crate) fn parity_sign(p: i64) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A half-odd integer `k + 0.5`, `k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HalfOdd(f64);

impl HalfOdd {
    pub fn new(value: f64) -> Result<Self> {
        require_finite("half-odd order", value)?;
        let k = value - 0.5;
        if value >= 0.5 && k.fract() == 0.0 && k < 2f64.powi(31) {
            Ok(HalfOdd(value))
        } else {
            Err(DomainError::NotHalfOdd(value).into())
        }
    }

    /// The half-odd number `index - 0.5`; `index >= 1`.
    pub fn from_index(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(DomainError::NotHalfOdd(-0.5).into());
        }
        Ok(HalfOdd(f64::from(index) - 0.5))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `value + 0.5`, the positive integer indexing this half-odd number.
    pub fn index(self) -> u32 {
        (self.0 + 0.5) as u32
    }

    pub fn is_half_odd(x: f64) -> bool {
        x.is_finite() && x >= 0.5 && (x - 0.5).fract() == 0.0
    }
}

/// Nearest half-odd integer at or below `x`: `⌊x - 0.5⌋ + 0.5`.
///
/// Requires `x >= 0.5` so that the result is itself a valid [`HalfOdd`].
pub fn floor_half(x: f64) -> Result<HalfOdd> {
    require_finite("x", x)?;
    if x < 0.5 {
        return Err(Error::out_of_range("x", x, "x >= 0.5"));
    }
    HalfOdd::new((x - 0.5).floor() + 0.5)
}

/// Nearest half-odd integer at or above `x`: `⌈x + 0.5⌉ - 0.5`.
pub fn ceil_half(x: f64) -> Result<HalfOdd> {
    require_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::out_of_range("x", x, "x > 0"));
    }
    HalfOdd::new((x + 0.5).ceil() - 0.5)
}

fn check_bessel_args(nu: f64, z: f64) -> Result<()> {
    require_finite("nu", nu)?;
    require_finite("z", z)?;
    if nu <= -1.0 {
        return Err(Error::out_of_range("nu", nu, "nu > -1"));
    }
    if z < 0.0 {
        return Err(Error::out_of_range("z", z, "z >= 0"));
    }
    if z == 0.0 && nu < 0.0 {
        return Err(Error::out_of_range("z", z, "z > 0 when nu < 0 (I_nu is unbounded at 0)"));
    }
    Ok(())
}

/// Power series `Σ (z/2)^(ν+2k) / (k! Γ(ν+k+1))` anchored at its largest term.
///
/// Returns `(ln t_peak, Σ t_k / t_peak)`. All terms are positive for ν > -1,
/// so summing outward from the peak in both directions loses nothing.
fn bessel_series_anchored(nu: f64, z: f64) -> (f64, f64) {
    let half = 0.5 * z;
    let half_sq = half * half;
    let root = 0.5 * (-(nu + 2.0) + (nu * nu + 4.0 * half_sq).sqrt());
    let peak = if root > 0.0 { root.ceil() as u64 } else { 0 };
    let kp = peak as f64;
    let ln_anchor = (nu + 2.0 * kp) * half.ln()
        - ln_gamma_unchecked(kp + 1.0)
        - ln_gamma_unchecked(nu + kp + 1.0);

    let mut sum = CompensatedSum::new();
    sum.add(1.0);
    let mut t = 1.0;
    let mut k = kp;
    loop {
        t *= half_sq / ((k + 1.0) * (nu + k + 1.0));
        k += 1.0;
        sum.add(t);
        if t <= 0.25 * f64::EPSILON * sum.value() {
            break;
        }
    }
    let mut t = 1.0;
    let mut k = kp;
    while k > 0.0 {
        t *= k * (nu + k) / half_sq;
        k -= 1.0;
        sum.add(t);
        if t <= 0.25 * f64::EPSILON * sum.value() {
            break;
        }
    }
    (ln_anchor, sum.value())
}

/// Modified Bessel function of the first kind `I_ν(z)`, `ν > -1`,
/// `0 <= z <= 300`. Use [`ln_bessel_i`] beyond that.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    check_bessel_args(nu, z)?;
    if z > BESSEL_DIRECT_LIMIT {
        return Err(Error::out_of_range("z", z, "z <= 300 (use ln_bessel_i)"));
    }
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let (ln_anchor, sum) = bessel_series_anchored(nu, z);
    Ok(ln_anchor.exp() * sum)
}

/// `ln I_ν(z)` for `ν > -1`, `z > 0` (or `z = 0` with `ν = 0`); no upper
/// limit on `z`.
pub fn ln_bessel_i(nu: f64, z: f64) -> Result<f64> {
    check_bessel_args(nu, z)?;
    if z == 0.0 {
        return if nu == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::out_of_range("z", z, "z > 0 (ln I_nu(0) = -inf)"))
        };
    }
    Ok(ln_bessel_i_unchecked(nu, z))
}

/// `ln(e^{-z} I_ν(z))`, the log of the exponentially scaled Bessel function.
pub fn ln_bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    Ok(ln_bessel_i(nu, z)? - z)
}

#[inline]
pub(crate) fn ln_bessel_i_unchecked(nu: f64, z: f64) -> f64 {
    let (ln_anchor, sum) = bessel_series_anchored(nu, z);
    ln_anchor + sum.ln()
}
