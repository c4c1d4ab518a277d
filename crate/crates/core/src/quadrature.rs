//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Maximum number of bisections applied to any one subinterval.
pub const MAX_DEPTH: u32 = 50;

const MAX_SUBINTERVALS: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes plus the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum over subintervals of |K15 - G7|.
    pub error_estimate: f64,
    pub subintervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    kronrod: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, depth: u32) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, kronrod: kronrod * half, error: ((kronrod - gauss) * half).abs(), depth }
}

/// Integrates `f` over `[a, b]` until the summed error estimate is at most
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error_estimate: 0.0, subintervals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&mut f, a, b, 0);
    let mut value = first.kronrod;
    let mut error = first.error;
    heap.push(first);

    while error > abs_tol.max(rel_tol * value.abs()) {
        if !value.is_finite() {
            return Err(Error::Overflow("integrand is not finite"));
        }
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (subinterval budget)",
                iterations: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        if worst.depth >= MAX_DEPTH {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (bisection depth)",
                iterations: MAX_DEPTH as usize,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&mut f, worst.a, mid, worst.depth + 1);
        let right = gauss_kronrod(&mut f, mid, worst.b, worst.depth + 1);
        value += left.kronrod + right.kronrod - worst.kronrod;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Running updates drift; resum exactly once the target looks met.
        if error <= abs_tol.max(rel_tol * value.abs()) {
            let (v, e) = resum(&heap);
            value = v;
            error = e;
        }
    }
    let (value, error_estimate) = resum(&heap);
    Ok(Integral { value, error_estimate, subintervals: heap.len() })
}

fn resum(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    let mut v = CompensatedSum::new();
    let mut e = 0.0;
    for s in heap.iter() {
        v.add(s.kronrod);
        e += s.error;
    }
    (v.value(), e)
}
