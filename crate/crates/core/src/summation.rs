//! Compensated accumulation.

/// Neumaier-style compensated accumulator.
///
/// Also tracks the sum of absolute values of everything added, which is the
/// numerator of the cancellation ratio reported by the closed forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Σ|x| over all added terms.
    #[inline]
    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// Σ|x| / |Σx|; infinite when the sum cancels to exactly zero.
    pub fn cancellation_ratio(&self) -> f64 {
        let v = self.value().abs();
        if self.abs_sum == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / v
        }
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}
