//! V-complexity and equidistributed step-function approximation.
//!
//! For `f` in C¹([a, b]) the number of intervals a step function needs to
//! approximate `f` to L1 error `ε` grows like `V(f)/ε`, with
//! `V(f) = (1/4) (∫ |f'|^{1/2})²`. This module computes `V(f)`, builds the
//! equidistributed approximation both greedily (every interval carries the
//! same error) and from the asymptotic grid (equal shares of the monitor
//! integral `∫ |f'|^{1/2}`), and evaluates L1 errors of step functions.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::quadrature::{integrate_with_breaks, QuadratureConfig};

/// Tolerances for the many small per-interval error integrals.
const LOCAL_QUAD: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-12,
    abs_tol: 1e-18,
    max_subdivisions: 400,
};

const MEDIAN_MAX_ITER: usize = 200;

/// Piecewise-constant function: value `values[k]` on
/// `(breakpoints[k], breakpoints[k + 1]]`, the first interval closed on the left.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || breakpoints.len() != values.len() + 1 {
            return Err(Error::invalid(
                "a step function needs one more breakpoint than values",
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("step function entries must be finite"));
        }
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    /// Single interval `[a, b]` with value `v`.
    pub fn constant(a: f64, b: f64, v: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![v])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_intervals(&self) -> usize {
        self.values.len()
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.breakpoints[0],
            self.breakpoints[self.breakpoints.len() - 1],
        )
    }

    /// `(x_left, x_right, value)` for each interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = self.domain();
        if !(x >= a && x <= b) {
            return Err(Error::OutOfDomain { x, a, b });
        }
        let k = self.breakpoints[1..].partition_point(|&p| p < x);
        Ok(self.values[k.min(self.values.len() - 1)])
    }

    /// CSV with header `x_left,x_right,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_left,x_right,value\n");
        for (l, r, v) in self.intervals() {
            let _ = writeln!(out, "{l},{r},{v}");
        }
        out
    }

    /// Parses the output of [`StepFunction::to_csv`]; `#` lines are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let field = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| Error::Parse("step function rows need 3 columns".into()))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(e.to_string()))
            };
            let (l, r, v) = (field(0)?, field(1)?, field(2)?);
            match breakpoints.last() {
                None => breakpoints.push(l),
                Some(&prev) if prev != l => {
                    return Err(Error::Parse(format!(
                        "interval starting at {l} does not continue from {prev}"
                    )))
                }
                _ => {}
            }
            breakpoints.push(r);
            values.push(v);
        }
        Self::new(breakpoints, values)
    }
}

/// Result of an approximation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub step_fn: StepFunction,
    pub n_intervals: usize,
    pub total_l1_error: f64,
    pub per_interval_errors: Vec<f64>,
    pub target_epsilon: f64,
}

impl ApproxReport {
    fn from_parts(
        step_fn: StepFunction,
        per_interval_errors: Vec<f64>,
        target_epsilon: f64,
    ) -> Self {
        let total_l1_error = per_interval_errors.iter().sum();
        ApproxReport {
            n_intervals: step_fn.n_intervals(),
            step_fn,
            total_l1_error,
            per_interval_errors,
            target_epsilon,
        }
    }

    /// `N·ε`, which tends to `V(f)` as `ε → 0`.
    pub fn v_estimate(&self) -> f64 {
        self.n_intervals as f64 * self.total_l1_error
    }

    /// Step-function CSV preceded by
    /// `# f=<spec> epsilon=<ε> N=<N> V_estimate=<N·ε>`.
    pub fn to_csv(&self, spec: &str) -> String {
        format!(
            "# f={spec} epsilon={} N={} V_estimate={}\n{}",
            self.total_l1_error,
            self.n_intervals,
            self.v_estimate(),
            self.step_fn.to_csv()
        )
    }
}

/// `∫_c^d |f'|^{1/2}`, the monitor integral.
pub fn monitor_integral<F: RealFunction + ?Sized>(
    f: &F,
    c: f64,
    d: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let mut breaks = f.turning_points(c, d);
    breaks.extend(f.kinks(c, d));
    integrate_with_breaks(|x| f.deriv(x).abs().sqrt(), c, d, &breaks, cfg).map(|e| e.value)
}

/// `V(f) = (1/4) (∫_a^b |f'(x)|^{1/2} dx)²`.
pub fn v_complexity<F: RealFunction + ?Sized>(f: &F, cfg: &QuadratureConfig) -> Result<f64> {
    let (a, b) = f.domain();
    let m = monitor_integral(f, a, b, cfg)?;
    Ok(0.25 * m * m)
}

/// Endpoints of the monotone pieces of `[c, d]`.
fn monotone_pieces<F: RealFunction + ?Sized>(f: &F, c: f64, d: f64) -> Vec<f64> {
    let mut pts = vec![c];
    let mut tp = f.turning_points(c, d);
    tp.sort_by(f64::total_cmp);
    pts.extend(tp.into_iter().filter(|&p| p > c && p < d));
    pts.push(d);
    pts.dedup();
    pts
}

/// On a monotone piece `[p, q]`, the point where `f` crosses level `g`
/// (sup of `{f <= g}` when increasing, inf when decreasing).
fn crossing<F: RealFunction + ?Sized>(f: &F, p: f64, q: f64, g: f64) -> f64 {
    let increasing = f.value(p) <= f.value(q);
    let (mut lo, mut hi) = (p, q);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let below = f.value(mid) <= g;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Measure of `{x in [c, d] : f(x) <= g}` over the given monotone pieces.
fn measure_at_or_below<F: RealFunction + ?Sized>(f: &F, pieces: &[f64], g: f64) -> f64 {
    pieces
        .windows(2)
        .map(|w| {
            let (p, q) = (w[0], w[1]);
            let (fp, fq) = (f.value(p), f.value(q));
            let (lo_v, hi_v) = if fp <= fq { (fp, fq) } else { (fq, fp) };
            if g >= hi_v {
                q - p
            } else if g < lo_v {
                0.0
            } else {
                let x = crossing(f, p, q, g);
                if fp <= fq {
                    x - p
                } else {
                    q - x
                }
            }
        })
        .sum()
}

/// `∫_c^d |f(x) - g| dx`, split where `f - g` changes sign.
pub fn constant_fit_error<F: RealFunction + ?Sized>(f: &F, c: f64, d: f64, g: f64) -> Result<f64> {
    let pieces = monotone_pieces(f, c, d);
    constant_fit_error_on(f, &pieces, g, None)
}

fn constant_fit_error_on<F: RealFunction + ?Sized>(
    f: &F,
    pieces: &[f64],
    g: f64,
    known_crossing: Option<f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for w in pieces.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (fp, fq) = (f.value(p), f.value(q));
        let mut pts = vec![p];
        if (fp - g) * (fq - g) < 0.0 {
            pts.push(known_crossing.unwrap_or_else(|| crossing(f, p, q, g)));
        }
        pts.push(q);
        for s in pts.windows(2) {
            if s[1] <= s[0] {
                continue;
            }
            let kinks = f.kinks(s[0], s[1]);
            // f - g cannot be resolved below the roundoff of the subtraction
            let floor = 16.0
                * f64::EPSILON
                * (g.abs() + f.value(s[0]).abs() + f.value(s[1]).abs())
                * (s[1] - s[0]);
            let cfg = QuadratureConfig {
                abs_tol: LOCAL_QUAD.abs_tol.max(floor),
                ..LOCAL_QUAD
            };
            let part = integrate_with_breaks(|x| f.value(x) - g, s[0], s[1], &kinks, &cfg)?;
            total += part.value.abs();
        }
    }
    Ok(total)
}

/// The L1-optimal constant on `[c, d]` and its error.
///
/// The minimiser of `∫_c^d |f - g|` is a median of `f` under the uniform
/// measure on `[c, d]`. On a monotone piece this is `f((c + d)/2)`; otherwise
/// it is found by bisection on the level `g`, measuring `{f <= g}` through
/// the crossings on each monotone piece.
pub fn optimal_constant<F: RealFunction + ?Sized>(f: &F, c: f64, d: f64) -> Result<(f64, f64)> {
    let (a, b) = f.domain();
    if !(c < d) {
        return Err(Error::invalid(format!(
            "interval [{c}, {d}] must satisfy c < d"
        )));
    }
    if c < a || d > b {
        return Err(Error::invalid(format!(
            "interval [{c}, {d}] is not inside the domain [{a}, {b}]"
        )));
    }
    let pieces = monotone_pieces(f, c, d);
    if pieces.len() == 2 {
        let m = 0.5 * (c + d);
        let g = f.value(m);
        let err = constant_fit_error_on(f, &pieces, g, Some(m))?;
        return Ok((g, err));
    }

    let half = 0.5 * (d - c);
    let (mut gmin, mut gmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &p in &pieces {
        let v = f.value(p);
        gmin = gmin.min(v);
        gmax = gmax.max(v);
    }
    let g = if measure_at_or_below(f, &pieces, gmin) >= half {
        gmin
    } else {
        let (mut lo, mut hi) = (gmin, gmax);
        let mut converged = false;
        for _ in 0..MEDIAN_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-15 * (gmax - gmin) {
                converged = true;
                break;
            }
            if measure_at_or_below(f, &pieces, mid) >= half {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "median bisection on [{c}, {d}] did not converge in {MEDIAN_MAX_ITER} iterations"
            )));
        }
        hi
    };
    let err = constant_fit_error_on(f, &pieces, g, None)?;
    Ok((g, err))
}

/// Greedy equidistribution with per-interval error budget `delta`.
///
/// Starting from `x_0 = a`, each `x_k` is the largest point whose optimal
/// constant on `(x_{k-1}, x_k]` has error `delta`; the last interval may
/// carry less.
pub fn greedy_equidistribution<F: RealFunction + ?Sized>(
    f: &F,
    delta: f64,
) -> Result<ApproxReport> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta must be positive"));
    }
    let (a, b) = f.domain();
    let width_tol = 1e-12 * (b - a);
    let mut breakpoints = vec![a];
    let mut values = Vec::new();
    let mut errors = Vec::new();
    let mut left = a;

    loop {
        let (g_full, e_full) = optimal_constant(f, left, b)?;
        if e_full <= delta {
            breakpoints.push(b);
            values.push(g_full);
            errors.push(e_full);
            break;
        }
        let (mut lo, mut hi) = (left, b);
        let mut lo_fit: Option<(f64, f64)> = None;
        let mut hi_fit = (g_full, e_full);
        let accepted = loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo < width_tol || mid <= lo || mid >= hi {
                // keep progress even if the budget is hit inside one ulp-scale step
                break match lo_fit {
                    Some(fit) if lo > left => (lo, fit),
                    _ => (hi, hi_fit),
                };
            }
            let fit = optimal_constant(f, left, mid)?;
            if (fit.1 - delta).abs() < 1e-9 * delta {
                break (mid, fit);
            }
            if fit.1 <= delta {
                lo = mid;
                lo_fit = Some(fit);
            } else {
                hi = mid;
                hi_fit = fit;
            }
        };
        let (x, (g, e)) = accepted;
        breakpoints.push(x);
        values.push(g);
        errors.push(e);
        left = x;
        if left >= b {
            break;
        }
    }
    let n = values.len() as f64;
    let step_fn = StepFunction::new(breakpoints, values)?;
    Ok(ApproxReport::from_parts(step_fn, errors, n * delta))
}

/// Greedy equidistribution aimed at a total L1 error `epsilon`.
///
/// The per-interval budget is not known in advance; it starts at
/// `ε²/V(f)` and is rescaled a few times using `ε_total ∝ δ^{1/2}`.
pub fn greedy_for_total_error<F: RealFunction + ?Sized>(
    f: &F,
    epsilon: f64,
    cfg: &QuadratureConfig,
) -> Result<ApproxReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let v = v_complexity(f, cfg)?;
    if v == 0.0 {
        let mut report = greedy_equidistribution(f, epsilon)?;
        report.target_epsilon = epsilon;
        return Ok(report);
    }
    let mut delta = epsilon * epsilon / v;
    let mut best: Option<ApproxReport> = None;
    for _ in 0..6 {
        let report = greedy_equidistribution(f, delta)?;
        let achieved = report.total_l1_error;
        let closer = best
            .as_ref()
            .is_none_or(|b| (achieved - epsilon).abs() < (b.total_l1_error - epsilon).abs());
        let done = (achieved - epsilon).abs() <= 0.01 * epsilon || achieved == 0.0;
        if closer {
            best = Some(report);
        }
        if done {
            break;
        }
        delta *= (epsilon / achieved).powi(2);
    }
    let mut report = best.expect("at least one greedy pass");
    report.target_epsilon = epsilon;
    Ok(report)
}

/// Asymptotic equidistribution grid.
///
/// Breakpoints are `x_k = y(εk/V)` where `y` solves
/// `∫_a^{y(s)} |f'|^{1/2} = (4V)^{1/2} s`, i.e. the point at which the
/// monitor integral reaches the fraction `εk/V` of its total. The grid
/// stops at the last `k` with `εk/V < 1` and closes at `b`; values are
/// `f` at interval midpoints.
pub fn asymptotic_grid<F: RealFunction + ?Sized>(
    f: &F,
    epsilon: f64,
    cfg: &QuadratureConfig,
) -> Result<ApproxReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let (a, b) = f.domain();
    let total = monitor_integral(f, a, b, cfg)?;
    let v = 0.25 * total * total;
    if v == 0.0 {
        return Err(Error::Degenerate(
            "V(f) = 0: f is constant and is represented exactly by a single interval".into(),
        ));
    }
    let ratio = v / epsilon;
    // treat V/ε within rounding of an integer as that integer
    let n_steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };

    let mut breakpoints = vec![a];
    let mut left = a;
    let mut acc = 0.0;
    for k in 1..n_steps {
        let target = (epsilon * k as f64 / v) * total;
        let need = target - acc;
        let (mut lo, mut hi) = (left, b);
        let mut lo_val = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let m = monitor_integral(f, left, mid, cfg)?;
            if m <= need {
                lo = mid;
                lo_val = m;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * (b - a) {
                break;
            }
        }
        let x = 0.5 * (lo + hi);
        if x <= left || x >= b {
            continue;
        }
        acc += lo_val + (x - lo) * f.deriv(x).abs().sqrt();
        left = x;
        breakpoints.push(x);
    }
    breakpoints.push(b);

    let mut values = Vec::with_capacity(breakpoints.len() - 1);
    let mut errors = Vec::with_capacity(breakpoints.len() - 1);
    for w in breakpoints.windows(2) {
        let q = f.value(0.5 * (w[0] + w[1]));
        values.push(q);
        errors.push(constant_fit_error(f, w[0], w[1], q)?);
    }
    let step_fn = StepFunction::new(breakpoints, values)?;
    Ok(ApproxReport::from_parts(step_fn, errors, epsilon))
}

/// `||f - q||_1` summed interval by interval.
pub fn l1_distance<F: RealFunction + ?Sized>(f: &F, q: &StepFunction) -> Result<f64> {
    let (a, b) = f.domain();
    let (qa, qb) = q.domain();
    let tol = 1e-12 * (b - a);
    if (qa - a).abs() > tol || (qb - b).abs() > tol {
        return Err(Error::invalid(format!(
            "step function covers [{qa}, {qb}] but f lives on [{a}, {b}]"
        )));
    }
    q.intervals()
        .map(|(l, r, v)| constant_fit_error(f, l.max(a), r.min(b), v))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FunctionSpec;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    /// Brute-force optimal constant: grid search over g with a midpoint
    /// Riemann sum for the error.
    fn brute_optimal_constant(
        f: &FunctionSpec,
        c: f64,
        d: f64,
        g_lo: f64,
        g_hi: f64,
    ) -> (f64, f64) {
        let m = 4000;
        let xs: Vec<f64> = (0..m)
            .map(|i| c + (i as f64 + 0.5) * (d - c) / m as f64)
            .collect();
        let fx: Vec<f64> = xs.iter().map(|&x| f.value(x)).collect();
        let err = |g: f64| fx.iter().map(|v| (v - g).abs()).sum::<f64>() * (d - c) / m as f64;
        let steps = ((g_hi - g_lo) / 1e-4).round() as usize;
        (0..=steps)
            .map(|i| g_lo + i as f64 * 1e-4)
            .map(|g| (g, err(g)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap()
    }

    #[test]
    fn v_of_quadratic() {
        let v = v_complexity(&FunctionSpec::quadratic(), &cfg()).unwrap();
        assert!((v - 8.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn v_of_constant_is_zero() {
        let f = FunctionSpec::constant(2.0, -3.0, 5.0).unwrap();
        assert_eq!(v_complexity(&f, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn optimal_constant_affine() {
        let f = FunctionSpec::affine(2.0, 1.0, 0.0, 1.0).unwrap();
        let (g, e) = optimal_constant(&f, 0.0, 1.0).unwrap();
        let (bg, be) = brute_optimal_constant(&f, 0.0, 1.0, 1.0, 3.0);
        assert!((bg - 2.0).abs() < 2e-4 && (be - 0.5).abs() < 1e-4);
        assert!((g - 2.0).abs() < 1e-14);
        assert!((e - 0.5).abs() < 1e-12);
    }

    #[test]
    fn optimal_constant_of_constant() {
        let f = FunctionSpec::constant(7.0, 0.0, 4.0).unwrap();
        let (g, e) = optimal_constant(&f, 1.0, 2.5).unwrap();
        assert_eq!((g, e), (7.0, 0.0));
    }

    #[test]
    fn optimal_constant_quadratic_matches_brute_force() {
        // Frozen from the grid-search oracle: g* = 0.25 (the level where
        // |{x^2 < g}| = 2 sqrt(g) = 1), error = 0.5 - ... computed below.
        let f = FunctionSpec::quadratic();
        let (bg, be) = brute_optimal_constant(&f, -1.0, 1.0, 0.0, 1.0);
        assert!((bg - 0.25).abs() < 2e-4, "{bg}");
        assert!((be - 0.5).abs() < 1e-4, "{be}");
        let (g, e) = optimal_constant(&f, -1.0, 1.0).unwrap();
        assert!((g - 0.25).abs() < 1e-12, "{g}");
        assert!((e - 0.5).abs() < 1e-12, "{e}");
    }

    #[test]
    fn optimal_constant_rejects_bad_interval() {
        let f = FunctionSpec::quartic();
        assert!(optimal_constant(&f, 0.5, 0.5).is_err());
        assert!(optimal_constant(&f, -0.5, 0.5).is_err());
    }

    #[test]
    fn greedy_affine_gives_quarter_intervals() {
        let f = FunctionSpec::affine(1.0, 0.0, 0.0, 1.0).unwrap();
        let r = greedy_equidistribution(&f, 1.0 / 64.0).unwrap();
        assert_eq!(r.n_intervals, 4);
        for (i, &x) in r.step_fn.breakpoints().iter().enumerate() {
            assert!((x - 0.25 * i as f64).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn greedy_constant_is_single_interval() {
        let f = FunctionSpec::constant(1.5, 0.0, 2.0).unwrap();
        let r = greedy_equidistribution(&f, 1e-6).unwrap();
        assert_eq!(r.n_intervals, 1);
        assert_eq!(r.total_l1_error, 0.0);
    }

    #[test]
    fn greedy_rejects_nonpositive_delta() {
        let f = FunctionSpec::quadratic();
        assert!(greedy_equidistribution(&f, 0.0).is_err());
        assert!(greedy_equidistribution(&f, -1.0).is_err());
    }

    #[test]
    fn greedy_large_delta_single_interval() {
        let f = FunctionSpec::quadratic();
        let r = greedy_equidistribution(&f, 10.0).unwrap();
        assert_eq!(r.n_intervals, 1);
    }

    #[test]
    fn report_sums_errors() {
        let f = FunctionSpec::quadratic();
        let r = greedy_equidistribution(&f, 1e-3).unwrap();
        let sum: f64 = r.per_interval_errors.iter().sum();
        assert!((sum - r.total_l1_error).abs() <= 1e-12 * sum);
        assert_eq!(r.n_intervals, r.step_fn.values().len());
    }

    #[test]
    fn asymptotic_grid_affine_is_uniform() {
        let f = FunctionSpec::affine(3.0, -1.0, 0.0, 1.0).unwrap();
        // V = 3/4; ε = 3/40 gives exactly 10 intervals
        let r = asymptotic_grid(&f, 0.075, &cfg()).unwrap();
        assert_eq!(r.n_intervals, 10);
        for (i, &x) in r.step_fn.breakpoints().iter().enumerate() {
            assert!((x - 0.1 * i as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn asymptotic_grid_quartic_denser_near_one() {
        let f = FunctionSpec::power(4.0, 0.0, 1.0).unwrap();
        let r = asymptotic_grid(&f, 0.01, &cfg()).unwrap();
        let bp = r.step_fn.breakpoints();
        // the closing interval is a remainder, so check the regular ones
        let widths: Vec<f64> = bp.windows(2).map(|w| w[1] - w[0]).collect();
        for w in widths[..widths.len() - 1].windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn asymptotic_grid_constant_is_degenerate() {
        let f = FunctionSpec::constant(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            asymptotic_grid(&f, 0.1, &cfg()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn l1_distance_examples() {
        let f = FunctionSpec::affine(1.0, 0.0, 0.0, 1.0).unwrap();
        let q = StepFunction::constant(0.0, 1.0, 0.5).unwrap();
        assert!((l1_distance(&f, &q).unwrap() - 0.25).abs() < 1e-13);

        let k = FunctionSpec::constant(2.0, 0.0, 1.0).unwrap();
        let q = StepFunction::new(vec![0.0, 0.3, 1.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(l1_distance(&k, &q).unwrap(), 0.0);

        let q = StepFunction::constant(0.0, 0.5, 0.5).unwrap();
        assert!(l1_distance(&f, &q).is_err());
    }

    #[test]
    fn step_function_eval_and_csv() {
        let q = StepFunction::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(q.eval(0.0).unwrap(), 1.0);
        assert_eq!(q.eval(0.5).unwrap(), 1.0);
        assert_eq!(q.eval(0.75).unwrap(), 2.0);
        assert!(q.eval(1.5).is_err());
        let csv = q.to_csv();
        assert_eq!(csv, "x_left,x_right,value\n0,0.5,1\n0.5,1,2\n");
        assert_eq!(StepFunction::from_csv(&csv).unwrap(), q);
        assert!(StepFunction::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(StepFunction::new(vec![1.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn report_csv_header() {
        let f = FunctionSpec::affine(1.0, 0.0, 0.0, 1.0).unwrap();
        let r = greedy_equidistribution(&f, 1.0 / 64.0).unwrap();
        let csv = r.to_csv(&f.to_string());
        let first = csv.lines().next().unwrap();
        assert!(
            first.starts_with("# f=affine:slope=1,intercept=0@0,1 epsilon=0.0625"),
            "{first}"
        );
        assert!(first.ends_with("N=4 V_estimate=0.25"), "{first}");
        let parsed = StepFunction::from_csv(&csv).unwrap();
        assert_eq!(parsed, r.step_fn);
    }
}
