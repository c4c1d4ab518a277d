//! Unevaluated-sum (`hi + lo`) double-double arithmetic, about 32 significant
//! digits. Used where a finite sum of elementary terms cancels by more than
//! double precision can absorb.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unit roundoff of double-double arithmetic.
pub const DD_EPSILON: f64 = 4.930_380_657_631_324e-32; // 2^-104

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN_2: DoubleDouble = DoubleDouble { hi: 6.931_471_805_599_453e-1, lo: 2.319_046_813_846_299_6e-17 };

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn sum_of(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        DoubleDouble { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn product_of(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplication by a power of two, exact barring under/overflow.
    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        DoubleDouble { hi: self.hi * s, lo: self.lo * s }
    }

    pub fn powi(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = DoubleDouble::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `e^x`, accurate to a few units of [`DD_EPSILON`] for `|x| < 700`.
    pub fn exp(self) -> Self {
        if self.hi < -745.0 {
            return DoubleDouble::ZERO;
        }
        if self.hi > 709.0 {
            return DoubleDouble::new(f64::INFINITY);
        }
        if self.hi == 0.0 {
            return DoubleDouble::ONE;
        }
        const SQUARINGS: i32 = 10;
        let k = (self.hi / LN_2.hi).round();
        let r = (self - LN_2 * DoubleDouble::new(k)).ldexp(-SQUARINGS);
        // expm1(r) by Taylor series; |r| < 3.4e-4 so 12 terms are ample.
        let mut term = r;
        let mut s = r;
        for j in 2..=12 {
            term = term * r / DoubleDouble::new(f64::from(j));
            s = s + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..SQUARINGS {
            s = s * (s + DoubleDouble::new(2.0));
        }
        let result = s + DoubleDouble::ONE;
        // Split the scaling so that 2^k never overflows on its own.
        let k = k as i32;
        let half = k / 2;
        result.ldexp(half).ldexp(k - half)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * DoubleDouble::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DoubleDouble::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}
