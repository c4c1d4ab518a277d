//! Randomized invariants.

use marcum_nuttall::bounds::{marcum_bounds, norm_nuttall_bounds};
use marcum_nuttall::closed_form::{marcum_half_odd, norm_nuttall_half_odd, nuttall_half_odd, HalfOddPair};
use marcum_nuttall::oracle::{marcum_series, norm_nuttall_series, EvalPoint, OrderSpec};
use marcum_nuttall::special::{
    ceil_half, floor_half, gamma_ratio, ln_reg_upper_gamma, reg_lower_gamma, reg_upper_gamma, HalfOdd,
};
use proptest::prelude::*;

fn pt(a: f64, b: f64) -> EvalPoint {
    EvalPoint::new(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn regularized_gammas_are_complements(r in 1e-3..100.0f64, x in 1e-3..100.0f64) {
        let p = reg_lower_gamma(r, x).unwrap();
        let q = reg_upper_gamma(r, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        prop_assert!((p + q - 1.0).abs() <= 1e-13, "P + Q - 1 = {}", p + q - 1.0);
    }

    #[test]
    fn lower_gamma_decreases_in_shape(r in 0.05..50.0f64, dr in 0.01..5.0f64, x in 0.01..100.0f64) {
        let (p0, p1) = (reg_lower_gamma(r, x).unwrap(), reg_lower_gamma(r + dr, x).unwrap());
        if p0 < 0.5 {
            prop_assert!(p1 < p0 || p0 == 0.0);
        } else {
            // P near one: compare the logarithm of the complement instead.
            let (l0, l1) = (ln_reg_upper_gamma(r, x).unwrap(), ln_reg_upper_gamma(r + dr, x).unwrap());
            prop_assert!(l1 > l0);
        }
    }

    #[test]
    fn gamma_ratio_increases_in_shape(s in 0.01..6.0f64, r in 0.05..30.0f64, dr in 0.01..3.0f64, x in 0.01..60.0f64) {
        let g0 = gamma_ratio(s, r, x).unwrap();
        let g1 = gamma_ratio(s, r + dr, x).unwrap();
        prop_assert!(g1 > g0, "{g0} !< {g1}");
    }

    #[test]
    fn half_rounding_brackets(x in 0.5..1e6f64) {
        let (lo, hi) = (floor_half(x).unwrap().value(), ceil_half(x).unwrap().value());
        prop_assert!(lo <= x && x <= hi);
        if HalfOdd::is_half_odd(x) {
            prop_assert!(lo == x && hi == x);
        } else {
            prop_assert!(lo < x && x < hi);
            prop_assert_eq!(hi - lo, 1.0);
        }
    }

    #[test]
    fn half_rounding_fixes_lattice(k in 0u32..100_000) {
        let x = f64::from(k) + 0.5;
        prop_assert_eq!(floor_half(x).unwrap().value(), x);
        prop_assert_eq!(ceil_half(x).unwrap().value(), x);
    }

    #[test]
    fn marcum_series_is_a_probability_and_monotone(m in 0.3..10.0f64, dm in 0.05..2.0f64, a in 0.0..8.0f64, b in 0.0..10.0f64) {
        let tol = 1e-13;
        let q0 = marcum_series(OrderSpec::marcum(m).unwrap(), pt(a, b), tol).unwrap();
        let q1 = marcum_series(OrderSpec::marcum(m + dm).unwrap(), pt(a, b), tol).unwrap();
        prop_assert!((0.0..=1.0).contains(&q0.value));
        prop_assert!(q1.value >= q0.value - q0.tail_bound - q1.tail_bound - 4.0 * f64::EPSILON);
    }

    #[test]
    fn marcum_bounds_contain_series(m in 0.51..10.0f64, a in 0.0..6.0f64, b in 0.05..9.0f64) {
        let iv = marcum_bounds(m, pt(a, b)).unwrap();
        prop_assume!(iv.is_well_conditioned());
        let s = marcum_series(OrderSpec::marcum(m).unwrap(), pt(a, b), 1e-14).unwrap();
        let slack = s.tail_bound + 8.0 * f64::EPSILON + 4.0 * (iv.conditioning * f64::EPSILON);
        prop_assert!(iv.lower <= s.value + slack && s.value <= iv.upper + slack, "{iv:?} vs {}", s.value);
    }

    #[test]
    fn norm_nuttall_bounds_contain_series(n in 0.51..6.0f64, c in 1u32..4, a in 0.3..7.0f64, b in 0.05..9.0f64) {
        let m = n + f64::from(c);
        let iv = norm_nuttall_bounds(m, n, pt(a, b)).unwrap();
        prop_assume!(iv.is_well_conditioned());
        let s = norm_nuttall_series(OrderSpec::nuttall(m, n).unwrap(), pt(a, b), 1e-14).unwrap();
        let slack = s.tail_bound + 8.0 * iv.conditioning * f64::EPSILON * iv.upper.abs();
        prop_assert!(iv.lower - slack <= s.value && s.value <= iv.upper + slack, "{iv:?} vs {}", s.value);
    }

    #[test]
    fn half_odd_marcum_is_a_probability(mi in 1u32..13, a in 0.01..8.0f64, b in 0.0..10.0f64) {
        let c = marcum_half_odd(HalfOdd::from_index(mi).unwrap(), pt(a, b)).unwrap();
        prop_assume!(c.is_well_conditioned());
        let e = c.error_estimate();
        prop_assert!(-e <= c.value && c.value <= 1.0 + e);
    }

    #[test]
    fn normalized_closed_form_is_scaled_standard(n in 1u32..7, d in 0u32..4, a in 0.5..6.0f64, b in 0.0..8.0f64) {
        let pair = HalfOddPair::new(n + d, n).unwrap();
        let std = nuttall_half_odd(pair, pt(a, b)).unwrap();
        let norm = norm_nuttall_half_odd(pair, pt(a, b)).unwrap();
        prop_assume!(std.conditioning < 1e3 && norm.conditioning < 1e3);
        let scaled = std.value / a.powf(pair.n_order());
        prop_assert!(((norm.value - scaled) / scaled).abs() < 1e-12);
        prop_assert!(std.value >= -std.error_estimate());
    }
}
