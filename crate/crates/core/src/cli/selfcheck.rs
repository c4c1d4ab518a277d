//! `mnq selfcheck`: the invariant suites over coarse or fine grids.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use marcum_nuttall::bounds::{marcum_bounds, BoundInterval, norm_nuttall_bounds, std_nuttall_bounds};
use marcum_nuttall::closed_form::{
    bessel_i_half_odd, li_kam_marcum_half_odd, marcum_half_odd, marcum_zero_alpha, nuttall_half_odd_variant,
    BracketVariant, HalfOddPair, CONDITIONING_LIMIT,
};
use marcum_nuttall::oracle::{
    marcum_series, norm_nuttall_series, nuttall_quadrature, nuttall_series, EvalPoint, OrderSpec,
};
use marcum_nuttall::special::{
    bessel_i, ceil_half, floor_half, gamma_ratio, ln_reg_upper_gamma, reg_lower_gamma, reg_upper_gamma, HalfOdd,
};
use marcum_nuttall::Result;
use rayon::prelude::*;

use super::format::num;
use super::{exit, Failure};

#[derive(Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value = "coarse")]
    grid: Grid,
    /// Where the fine grid writes its conditioning map.
    #[arg(long, default_value = "conditioning_frontier.csv")]
    frontier: PathBuf,
    /// Evaluate the Nuttall closed form with a deliberately broken bracket.
    #[arg(long, hide = true)]
    mutate: Option<Mutation>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grid {
    Coarse,
    Fine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    Parity,
    Sgn,
}

/// Outcome of one suite.
struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    /// Largest residual in the suite's own units.
    worst: f64,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checks: 0, failures: Vec::new(), worst: 0.0 }
    }

    /// Records a residual against its allowance.
    fn check(&mut self, residual: f64, allowed: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if residual.is_finite() {
            self.worst = self.worst.max(residual);
        }
        if !(residual <= allowed) {
            self.failures.push(format!("{} (residual {})", what(), num(residual)));
        }
    }

    /// Records a boolean property; the residual is 0 or 1.
    fn holds(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.check(if ok { 0.0 } else { 1.0 }, 0.5, what);
    }

    fn error(&mut self, what: String, e: marcum_nuttall::Error) {
        self.checks += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn merge(mut self, other: Suite) -> Self {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self.worst = self.worst.max(other.worst);
        self
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b.abs().max(1e-300)).abs()
}

fn pt(a: f64, b: f64) -> EvalPoint {
    EvalPoint::new(a, b).expect("grid points are admissible")
}

struct Grids {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    max_index: u32,
}

impl Grids {
    fn for_grid(grid: Grid) -> Self {
        match grid {
            Grid::Coarse => Grids { alphas: vec![0.5, 2.0, 6.5], betas: vec![0.0, 1.0, 4.0, 8.0], max_index: 7 },
            Grid::Fine => Grids {
                alphas: vec![0.5, 1.0, 2.0, 3.5, 6.5],
                betas: vec![0.0, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
                max_index: 12,
            },
        }
    }
}

pub fn run(args: &SelfcheckArgs) -> std::result::Result<i32, Failure> {
    let grids = Grids::for_grid(args.grid);
    let variant = match args.mutate {
        None => BracketVariant::Exact,
        Some(Mutation::Parity) => BracketVariant::FlippedParity,
        Some(Mutation::Sgn) => BracketVariant::DroppedSign,
    };
    let suites = [
        gamma_suite(args.grid),
        rounding_suite(),
        bessel_suite(),
        closed_vs_quadrature(&grids, variant),
        dual_marcum(&grids),
        series_vs_quadrature(&grids),
        monotonicity(),
        sandwich(),
        special_values(),
    ];
    let mut failed = 0;
    for s in &suites {
        let status = if s.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {:<22} checks={:<6} worst={}", s.name, s.checks, num(s.worst));
        for f in s.failures.iter().take(5) {
            println!("    {f}");
        }
        if s.failures.len() > 5 {
            println!("    ... {} more", s.failures.len() - 5);
        }
        failed += usize::from(!s.failures.is_empty());
    }
    if args.grid == Grid::Fine {
        let rows = write_frontier(&args.frontier)?;
        println!("conditioning frontier: {rows} rows -> {}", args.frontier.display());
    }
    if failed == 0 {
        println!("all {} suites passed", suites.len());
        Ok(exit::OK)
    } else {
        println!("{failed} of {} suites failed", suites.len());
        Ok(exit::FAILURE)
    }
}

fn gamma_suite(grid: Grid) -> Suite {
    let step = if grid == Grid::Fine { 0.5 } else { 2.5 };
    let axis: Vec<f64> = (1..=(100.0 / step) as usize).map(|i| i as f64 * step).collect();
    let mut s = Suite::new("gamma");
    for &r in &axis {
        for &x in &axis {
            match (reg_lower_gamma(r, x), reg_upper_gamma(r, x)) {
                (Ok(p), Ok(q)) => s.check((p + q - 1.0).abs(), 1e-13, || format!("P+Q at r={r} x={x}")),
                (Err(e), _) | (_, Err(e)) => s.error(format!("P, Q at r={r} x={x}"), e),
            }
        }
    }
    // P decreasing in r (checked on ln Q where P is close to one).
    let rs: Vec<f64> = (1..=40).map(|i| 0.25 * f64::from(i)).collect();
    for &x in &[0.1, 1.0, 5.0, 20.0, 60.0] {
        for w in rs.windows(2) {
            let (p0, p1) = (reg_lower_gamma(w[0], x), reg_lower_gamma(w[1], x));
            let (l0, l1) = (ln_reg_upper_gamma(w[0], x), ln_reg_upper_gamma(w[1], x));
            if let (Ok(p0), Ok(p1), Ok(l0), Ok(l1)) = (p0, p1, l0, l1) {
                let strict = if p0 < 0.5 { p1 < p0 } else { l1 > l0 };
                s.holds(strict, || format!("P not decreasing at r={} x={x}", w[0]));
            }
            // At s = 0 the ratio is Q(r, x), which rounds to one once P is
            // below an ulp; the P comparison above carries strictness there.
            for &sh in &[0.0, 0.5, 1.5, 3.0] {
                match (gamma_ratio(sh, w[0], x), gamma_ratio(sh, w[1], x)) {
                    (Ok(g0), Ok(g1)) => {
                        let ok = if sh == 0.0 && g0 == 1.0 { g1 >= g0 } else { g1 > g0 };
                        s.holds(ok, || format!("gamma ratio not increasing at s={sh} r={} x={x}", w[0]))
                    }
                    (Err(e), _) | (_, Err(e)) => s.error(format!("gamma ratio s={sh} r={}", w[0]), e),
                }
            }
        }
    }
    s
}

fn rounding_suite() -> Suite {
    let mut s = Suite::new("half-odd rounding");
    for i in 0..2000 {
        let x = 0.5 + 0.0137 * f64::from(i);
        let (Ok(lo), Ok(hi)) = (floor_half(x), ceil_half(x)) else {
            s.holds(false, || format!("rounding failed at {x}"));
            continue;
        };
        let half_odd = HalfOdd::is_half_odd(x);
        s.holds(lo.value() <= x && x <= hi.value(), || format!("not bracketing at {x}"));
        s.holds((lo.value() == x) == half_odd && (hi.value() == x) == half_odd, || format!("fixed points at {x}"));
        if !half_odd {
            s.holds(hi.value() - lo.value() == 1.0, || format!("gap at {x}"));
        }
    }
    s
}

fn bessel_suite() -> Suite {
    let mut s = Suite::new("half-odd bessel");
    for n in 1..=12u32 {
        for i in 1..=500 {
            let z = 0.1 * f64::from(i);
            match (bessel_i_half_odd(n, z), bessel_i(f64::from(n) - 0.5, z)) {
                (Ok(c), Ok(r)) => {
                    if n <= 6 || c.is_well_conditioned() {
                        let allowed = 1e-12f64.max(c.error_estimate() / r);
                        s.check(rel(c.value, r), allowed, || format!("n={n} z={z}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => s.error(format!("n={n} z={z}"), e),
            }
        }
    }
    s
}

fn half_odd_pairs(max_index: u32) -> Vec<HalfOddPair> {
    (1..=max_index)
        .flat_map(|n| (0..=3).map(move |d| (n + d, n)))
        .filter(|&(m, _)| m <= max_index)
        .map(|(m, n)| HalfOddPair::new(m, n).expect("m >= n >= 1"))
        .collect()
}

fn closed_vs_quadrature(grids: &Grids, variant: BracketVariant) -> Suite {
    let pairs = half_odd_pairs(grids.max_index);
    let parts: Vec<Suite> = pairs
        .par_iter()
        .map(|&pair| {
            let mut s = Suite::new("closed vs quadrature");
            let order = OrderSpec::nuttall(pair.m_order(), pair.n_order()).expect("valid orders");
            for &a in &grids.alphas {
                for &b in &grids.betas {
                    let what = || format!("M={} N={} a={a} b={b}", pair.m_order(), pair.n_order());
                    match (nuttall_half_odd_variant(pair, pt(a, b), variant), nuttall_quadrature(order, pt(a, b), 1e-12)) {
                        (Ok(c), Ok(q)) if c.conditioning < CONDITIONING_LIMIT => s.check(rel(c.value, q.value), 1e-9, what),
                        (Ok(_), Ok(_)) => {}
                        (Err(e), _) | (_, Err(e)) => s.error(what(), e),
                    }
                }
            }
            s
        })
        .collect();
    parts.into_iter().fold(Suite::new("closed vs quadrature"), Suite::merge)
}

fn dual_marcum(grids: &Grids) -> Suite {
    let mut s = Suite::new("dual marcum forms");
    for mi in 1..=grids.max_index {
        let order = HalfOdd::from_index(mi).expect("index >= 1");
        for &a in &grids.alphas {
            for &b in &grids.betas {
                let what = || format!("M={} a={a} b={b}", order.value());
                match (marcum_half_odd(order, pt(a, b)), li_kam_marcum_half_odd(order, pt(a, b))) {
                    (Ok(x), Ok(y)) => s.check(rel(x.value, y.value), 1e-10, what),
                    (Err(e), _) | (_, Err(e)) => s.error(what(), e),
                }
            }
        }
    }
    s
}

fn series_vs_quadrature(grids: &Grids) -> Suite {
    let tol = 1e-12;
    let orders = [(1.5, 0.5), (2.0, 1.0), (2.7, 1.7), (5.0, 3.0), (4.5, 2.5)];
    let mut s = Suite::new("series vs quadrature");
    for &(m, n) in &orders {
        let order = OrderSpec::nuttall(m, n).expect("valid orders");
        for &a in &grids.alphas {
            for &b in grids.betas.iter().filter(|&&b| b > 0.0) {
                let what = || format!("M={m} N={n} a={a} b={b}");
                match (nuttall_series(order, pt(a, b), tol), nuttall_quadrature(order, pt(a, b), tol)) {
                    (Ok(r), Ok(q)) => {
                        let allowed = r.tail_bound + 10.0 * tol * q.value.abs();
                        let scale = q.value.abs().max(1e-300);
                        s.check((r.value - q.value).abs() / scale, allowed / scale, what);
                    }
                    (Err(e), _) | (_, Err(e)) => s.error(what(), e),
                }
            }
        }
    }
    s
}

fn monotonicity() -> Suite {
    let tol = 1e-13;
    let mut s = Suite::new("monotonicity");
    for &(a, b) in &[(0.0, 1.0), (1.0, 2.0), (2.5, 3.0), (5.5, 4.0)] {
        let values: Result<Vec<_>> = (3..=40)
            .map(|i| marcum_series(OrderSpec::marcum(0.2 * f64::from(i))?, pt(a, b), tol))
            .collect();
        match values {
            Ok(v) => {
                for w in v.windows(2) {
                    s.holds(w[1].value - w[0].value > w[0].tail_bound + w[1].tail_bound, || {
                        format!("Marcum not increasing at a={a} b={b}")
                    });
                }
            }
            Err(e) => s.error(format!("Marcum series a={a} b={b}"), e),
        }
    }
    for &c in &[1.0, 1.5, 2.0, 3.0] {
        for &(a, b) in &[(0.5, 3.5), (1.0, 1.0), (2.0, 2.0), (3.5, 1.5), (5.5, 5.5), (7.5, 6.5)] {
            let sums: Vec<f64> = (0..30).map(|i| c + 0.5 + 0.5 * f64::from(i)).collect();
            let values: Result<Vec<_>> = sums
                .iter()
                .map(|&v| norm_nuttall_series(OrderSpec::nuttall(0.5 * (v + c), 0.5 * (v - c))?, pt(a, b), tol))
                .collect();
            match values {
                Ok(v) => {
                    for (i, w) in v.windows(2).enumerate() {
                        s.holds(w[1].value - w[0].value > w[0].tail_bound + w[1].tail_bound, || {
                            format!("normalized Nuttall not increasing at c={c} a={a} b={b} v={}", sums[i])
                        });
                        if a >= 1.0 {
                            let n0 = 0.5 * (sums[i] - c);
                            let (s0, s1) = (a.powf(n0), a.powf(n0 + 0.5));
                            let gap = w[1].value * s1 - w[0].value * s0;
                            s.holds(gap > w[0].tail_bound * s0 + w[1].tail_bound * s1, || {
                                format!("standard Nuttall not increasing at c={c} a={a} b={b} v={}", sums[i])
                            });
                        }
                    }
                }
                Err(e) => s.error(format!("Nuttall series c={c} a={a} b={b}"), e),
            }
        }
    }
    s
}

fn sandwich() -> Suite {
    let tol = 1e-14;
    let mut s = Suite::new("bound sandwich");
    for &m in &[1.2, 2.7, 4.0, 8.3] {
        for &a in &[0.0, 1.0, 2.5, 5.0] {
            for i in 1..=14 {
                let b = 0.5 * f64::from(i);
                let what = || format!("Marcum M={m} a={a} b={b}");
                match (marcum_bounds(m, pt(a, b)), marcum_series(OrderSpec::marcum(m).unwrap(), pt(a, b), tol)) {
                    (Ok(iv), Ok(r)) => s.holds(sandwiched(iv, r.value), what),
                    (Err(e), _) | (_, Err(e)) => s.error(what(), e),
                }
            }
        }
    }
    for &(m, n) in &[(4.7, 2.7), (5.0, 3.0), (3.2, 1.2), (6.9, 3.9)] {
        for &a in &[1.0, 3.5, 6.5] {
            for i in 1..=14 {
                let b = 0.5 * f64::from(i);
                let what = || format!("Nuttall M={m} N={n} a={a} b={b}");
                let order = OrderSpec::nuttall(m, n).unwrap();
                let r = norm_nuttall_series(order, pt(a, b), tol);
                match (norm_nuttall_bounds(m, n, pt(a, b)), std_nuttall_bounds(m, n, pt(a, b)), r) {
                    (Ok(iv), Ok(sv), Ok(r)) => {
                        s.holds(sandwiched(iv, r.value), what);
                        s.holds(sandwiched(sv, r.value * a.powf(n)), what);
                    }
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => s.error(what(), e),
                }
            }
        }
    }
    s
}

/// Strict containment, except where the whole interval is within a few
/// ulps (values rounding to one), where only `lower <= x <= upper` is
/// representable.
fn sandwiched(iv: BoundInterval, x: f64) -> bool {
    let resolvable = iv.width() > 64.0 * f64::EPSILON * iv.upper.abs();
    if resolvable {
        iv.strictly_contains(x)
    } else {
        iv.contains(x)
    }
}

fn special_values() -> Suite {
    let mut s = Suite::new("special values");
    for &m in &[0.7, 1.0, 2.5, 8.3] {
        for &a in &[0.0, 1.0, 3.5] {
            match marcum_series(OrderSpec::marcum(m).unwrap(), pt(a, 0.0), 1e-12) {
                Ok(r) => s.check((r.value - 1.0).abs(), 1e-12, || format!("Q_{m}({a}, 0)")),
                Err(e) => s.error(format!("Q_{m}({a}, 0)"), e),
            }
        }
        for &b in &[0.5, 1.0, 2.0, 4.0] {
            let zero = marcum_zero_alpha(m, b);
            let near = marcum_series(OrderSpec::marcum(m).unwrap(), pt(1e-6, b), 1e-12);
            match (zero, near) {
                (Ok(z), Ok(r)) => s.check((r.value - z).abs(), 1e-5, || format!("alpha -> 0 limit M={m} b={b}")),
                (Err(e), _) | (_, Err(e)) => s.error(format!("alpha -> 0 limit M={m} b={b}"), e),
            }
        }
    }
    s
}

/// Maps closed-form conditioning and accuracy against the series over a
/// dense grid; returns the number of data rows.
fn write_frontier(path: &PathBuf) -> std::result::Result<usize, Failure> {
    let pairs = half_odd_pairs(12);
    let alphas: Vec<f64> = (1..=32).map(|i| 0.25 * f64::from(i)).collect();
    let betas: Vec<f64> = (0..=20).map(|i| 0.5 * f64::from(i)).collect();
    let rows: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|&pair| {
            let order = OrderSpec::nuttall(pair.m_order(), pair.n_order()).expect("valid orders");
            let mut out = Vec::new();
            for &a in &alphas {
                for &b in &betas {
                    let c = nuttall_half_odd_variant(pair, pt(a, b), BracketVariant::Exact);
                    let r = norm_nuttall_series(order, pt(a, b), 1e-14);
                    if let (Ok(c), Ok(r)) = (c, r) {
                        let reference = r.value * a.powf(pair.n_order());
                        out.push(format!(
                            "{},{},{},{},{},{}",
                            pair.m_order(),
                            pair.n_order(),
                            a,
                            b,
                            num(c.conditioning),
                            num(rel(c.value, reference))
                        ));
                    }
                }
            }
            out
        })
        .collect();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "m,n,alpha,beta,conditioning,rel_error")?;
    for row in &rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(rows.len())
}
