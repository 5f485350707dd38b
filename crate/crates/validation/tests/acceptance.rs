use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcx_core::compression::{
    count_runs, default_dx_sequence, default_r_grid, scaling_rows, Lz77Params,
};
use vcx_core::lattice::{init_state, sample_schedule, step};
use vcx_core::vcomplexity::monitor_integral;
use vcx_core::{
    asymptotic_grid, discretize, greedy_for_total_error, integrate, log_spaced, lz77_decode,
    lz77_encode, rle_complexity, rle_curve, rle_encode, run_experiment, uniform_step_error,
    v_complexity, v_curve, window_ratio_experiment, DiffusionSolution, FunctionSpec, GridSpec,
    QuadratureConfig, RealFunction, SimConfig,
};
use vcx_validation::{rel, run_check, summarize, Outcome, Verdict};

type Check = Result<Verdict, String>;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn closed_form_v() -> Check {
    let mut worst = 0.0f64;
    let mut worst_cos = 0.0f64;
    let mut check = |f: FunctionSpec, exact: f64| -> Result<(), String> {
        let v = v_complexity(&f, &cfg()).map_err(e)?;
        worst = worst.max(rel(v, exact));
        Ok(())
    };
    check(FunctionSpec::quadratic(), 8.0 / 9.0)?;
    for alpha in [0.5, 1.0, 2.0, 3.0, 5.0] {
        check(
            FunctionSpec::power(alpha, 0.0, 1.0).map_err(e)?,
            alpha / (alpha + 1.0).powi(2),
        )?;
    }
    for alpha in [1.0f64, 10.0, 100.0] {
        let h = 0.5 * alpha;
        let exact = ((h.exp()).atan() - ((-h).exp()).atan()).powi(2) / alpha;
        check(FunctionSpec::sigmoid(alpha, -1.0, 1.0).map_err(e)?, exact)?;
    }
    // ∫_0^{π/2} sin^{1/2} = √π Γ(3/4) / (2 Γ(5/4)); V = n·I²/π
    let i = std::f64::consts::PI.sqrt() * libm::tgamma(0.75) / (2.0 * libm::tgamma(1.25));
    let per_n = i * i / std::f64::consts::PI;
    for n in 1..=10 {
        let f = FunctionSpec::cosine(n as f64, 0.0, 1.0).map_err(e)?;
        let v = v_complexity(&f, &cfg()).map_err(e)?;
        worst = worst.max(rel(v, per_n * n as f64));
        worst_cos = worst_cos.max(rel(v, 0.457 * n as f64));
    }
    Ok((
        worst < 1e-6 && worst_cos < 1e-3,
        format!(
            "max rel error {worst:.2e} (limit 1e-6); cos vs 0.457n {worst_cos:.2e} (limit 1e-3)"
        ),
    ))
}

fn greedy_scaling() -> Check {
    let f = FunctionSpec::quadratic();
    let mut parts = Vec::new();
    let mut last = f64::NAN;
    for eps in [0.04, 0.02, 0.01, 0.005] {
        let r = greedy_for_total_error(&f, eps, &cfg()).map_err(e)?;
        last = r.v_estimate();
        parts.push(format!("eps={eps}: N={} N*eps={last:.4}", r.n_intervals));
    }
    let gap = rel(last, 8.0 / 9.0);
    Ok((
        gap < 0.05,
        format!(
            "{}; gap at 0.005 = {:.2}% (limit 5%)",
            parts.join(", "),
            100.0 * gap
        ),
    ))
}

fn grid_formula() -> Check {
    let eps = 0.01;
    let f = FunctionSpec::quadratic();
    let grid = asymptotic_grid(&f, eps, &cfg()).map_err(e)?;
    let bp = grid.step_fn.breakpoints();
    let exact = |k: usize| {
        let s = 9.0 * eps * k as f64 / 4.0;
        if s <= 1.0 {
            -(1.0 - s).powf(2.0 / 3.0)
        } else {
            (s - 1.0).powf(2.0 / 3.0)
        }
    };
    // the final breakpoint is b itself, closing a partial interval
    let interior = bp.len() - 1;
    let dev = (0..interior)
        .map(|k| (bp[k] - exact(k)).abs())
        .fold(0.0, f64::max);
    Ok((
        dev < 1e-3,
        format!("{interior} breakpoints compared, max deviation {dev:.2e} (limit 1e-3)"),
    ))
}

fn worked_example() -> Check {
    let f = FunctionSpec::quartic();
    let grid = GridSpec::new(0.0, 1.0, 0.1, 1.0).map_err(e)?;
    let trace = discretize(&f, &grid).map_err(e)?;
    let symbols = trace.symbols.clone().ok_or("no symbols at r = 1")?;
    let text: String = symbols.iter().map(|s| s.to_string()).collect();
    let pairs = rle_encode(&symbols).pairs;
    let expected = vec![(0, 5), (1, 1), (2, 1), (3, 1), (5, 1), (8, 1)];
    let err = uniform_step_error(&f, &grid).map_err(e)?;
    Ok((
        text == "0000012358" && pairs == expected && (err - 0.03).abs() <= 0.005,
        format!("string {text}, pairs {pairs:?}, error {err:.5}"),
    ))
}

fn rle_complexity_curve() -> Check {
    let r_grid = default_r_grid();
    let dxs = default_dx_sequence(0.0, 1.0);
    let c_lin = rle_complexity(
        &FunctionSpec::power(1.0, 0.0, 1.0).map_err(e)?,
        &r_grid,
        &dxs,
    )
    .map_err(e)?
    .c;
    let mut ok = (c_lin - 0.25).abs() <= 0.02;
    let mut notes = vec![format!("C(x) = {c_lin:.4}")];
    let mut min_gap = f64::INFINITY;
    for i in 1..=20 {
        let alpha = 0.25 * i as f64;
        let f = FunctionSpec::power(alpha, 0.0, 1.0).map_err(e)?;
        let c = rle_complexity(&f, &r_grid, &dxs).map_err(e)?;
        let v = v_complexity(&f, &cfg()).map_err(e)?;
        min_gap = min_gap.min(c.c - v);
        if [0.5, 1.0, 2.0].contains(&alpha) {
            let at_zero = c.fits[0].eta * c.fits[0].gamma;
            ok &= c.c >= at_zero - 0.02;
            notes.push(format!(
                "alpha={alpha}: C={:.4} at r={}, r=0 value {at_zero:.4}",
                c.c, c.argmin_r
            ));
        }
    }
    ok &= min_gap >= -0.02;
    notes.push(format!("min C - V over alpha in [0.25, 5] = {min_gap:.4}"));
    Ok((ok, notes.join("; ")))
}

fn window_ratio() -> Check {
    let f = FunctionSpec::sin_squared(0.0, 1.0).map_err(e)?;
    let rows =
        window_ratio_experiment(&f, Lz77Params::default(), 0.5, &[1000, 10000]).map_err(e)?;
    let (lo, hi) = (rows[0].ratio, rows[1].ratio);
    Ok((
        (0.9..=1.3).contains(&lo) && (1.7..=2.2).contains(&hi),
        format!(
            "n=1000: {}/{} = {lo:.3} (want [0.9, 1.3]); n=10000: {}/{} = {hi:.3} (want [1.7, 2.2])",
            rows[0].l2, rows[0].l1, rows[1].l2, rows[1].l1
        ),
    ))
}

fn lattice_config() -> Result<SimConfig, String> {
    SimConfig::new(201, 18_000, 101, 42, 20).map_err(e)
}

fn lattice_curve() -> Check {
    let sim = lattice_config()?;
    let times = sample_schedule(sim.total_steps, 100).map_err(e)?;
    let run = run_experiment(&sim, 20, 12, &times).map_err(e)?;
    let c = &run.complexity.values;
    let (first, last) = (c[0], *c.last().unwrap());
    let max = run.complexity.max();
    let at = run.complexity.argmax().unwrap();
    let ft = *run.fraction_top.last().unwrap();
    Ok((
        first == 2.0 && max >= 10.0 && last <= 3.0 && (ft - 0.5).abs() <= 0.05,
        format!(
            "complexity {first} at t=0, max {max} at step {}, final {last} (want <= 3); fraction_top {ft:.4}",
            times[at]
        ),
    ))
}

fn diffusion_curves() -> Check {
    let sol = DiffusionSolution::default();
    let times = log_spaced(1e-4, 2.0, 60).map_err(e)?;
    let v = v_curve(&sol, &times, &cfg()).map_err(e)?.normalized();
    let grid = GridSpec::new(-1.0, 1.0, 1.0 / 400.0, 0.8).map_err(e)?;
    let r = rle_curve(&sol, &times, &grid).map_err(e)?.normalized();
    let (first, last) = (v.values[0], *v.values.last().unwrap());
    let gap = v
        .values
        .iter()
        .zip(&r.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        v.is_unimodal(true) && first < 0.05 && last < 0.05 && gap < 0.1,
        format!(
            "unimodal {}, first {first:.4}, last {last:.4}, max gap to rle {gap:.4} (limit 0.1), argmax v {} rle {}",
            v.is_unimodal(true),
            v.argmax().unwrap(),
            r.argmax().unwrap()
        ),
    ))
}

fn random_monotone(rng: &mut ChaCha8Rng) -> Result<FunctionSpec, String> {
    let k = rng.gen_range(3..20);
    let mut nodes = vec![0.0];
    let mut values = vec![rng.gen_range(-1.0..1.0)];
    for _ in 0..k {
        nodes.push(nodes.last().unwrap() + rng.gen_range(0.05..0.5));
        values.push(values.last().unwrap() + rng.gen_range(0.0..2.0));
    }
    let b = *nodes.last().unwrap();
    FunctionSpec::sampled(nodes, values, 0.0, b).map_err(e)
}

fn fitted_exponent(ns: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();

    let mut holder_bad = 0;
    for _ in 0..50 {
        let f = random_monotone(&mut rng)?;
        let (a, b) = f.domain();
        let (mut c, mut d) = (rng.gen_range(a..b), rng.gen_range(a..b));
        if c > d {
            std::mem::swap(&mut c, &mut d);
        }
        let m = monitor_integral(&f, c, d, &cfg()).map_err(e)?;
        if m * m > (f.value(d) - f.value(c)) * (d - c) + 1e-9 {
            holder_bad += 1;
        }
    }
    if holder_bad > 0 {
        failures.push(format!("reverse Hoelder failed in {holder_bad}/50"));
    }

    let mut trip_bad = 0;
    for _ in 0..1000 {
        let alphabet = rng.gen_range(1..=16u8);
        let len = rng.gen_range(0..400);
        let s: Vec<u8> = (0..len).map(|_| rng.gen_range(0..alphabet)).collect();
        let window = rng.gen_range(1..64);
        let tokens = lz77_encode(&s, window, 2).map_err(e)?;
        let lz_ok = lz77_decode(&tokens).map_err(e)? == s;
        let rle = rle_encode(&s);
        if !lz_ok || rle.expand() != s || rle.n_rle() != count_runs(&s) {
            trip_bad += 1;
        }
    }
    if trip_bad > 0 {
        failures.push(format!("round trip failed in {trip_bad}/1000"));
    }

    let sol = DiffusionSolution::default();
    let mut u_err = 0.0f64;
    for t in [0.001, 0.01, 0.1, 0.5, 1.0, 3.0] {
        let mass = integrate(|x| sol.u(x, t).unwrap_or(f64::NAN), -1.0, 1.0, &cfg()).map_err(e)?;
        u_err = u_err.max((mass - 1.0).abs());
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            let s = sol.u(x, t).map_err(e)? + sol.u(-x, t).map_err(e)?;
            u_err = u_err.max((s - 1.0).abs());
        }
    }
    if u_err >= 1e-8 {
        failures.push(format!("u conservation/antisymmetry error {u_err:.2e}"));
    }

    let mut worst_slope = 0.0f64;
    for alpha in [2.0, 4.0] {
        let f = FunctionSpec::power(alpha, 0.0, 1.0).map_err(e)?;
        for r in [0.5, 1.0, 2.0] {
            let dxs: Vec<f64> = [200.0, 400.0, 800.0, 1600.0, 3200.0]
                .iter()
                .map(|n| 1.0 / n)
                .collect();
            let rows = scaling_rows(&f, r, &dxs, Some(Lz77Params::default())).map_err(e)?;
            let ns: Vec<f64> = rows.iter().map(|row| row.n as f64).collect();
            let rle: Vec<f64> = rows.iter().map(|row| row.n_rle as f64).collect();
            let lz: Vec<f64> = rows
                .iter()
                .map(|row| row.lz77_tokens.unwrap_or(0) as f64)
                .collect();
            let (er, el) = (fitted_exponent(&ns, &rle), fitted_exponent(&ns, &lz));
            worst_slope = worst_slope.max(rel(el, er));
        }
    }
    if worst_slope > 0.1 {
        failures.push(format!("monotone slope mismatch {worst_slope:.3}"));
    }

    let mut particle_bad = 0;
    for _ in 0..10 {
        let seed: u64 = rng.gen();
        let n = rng.gen_range(3..120);
        let sim = SimConfig::new(n, 500, rng.gen_range(1..=n), seed, 1).map_err(e)?;
        let mut state = init_state(&sim);
        let cream = state.cream_count();
        let mut step_rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sim.total_steps {
            state = step(&state, &mut step_rng);
            if state.cream_count() != cream || state.right.len() + state.left.len() != 2 * (n - 1) {
                particle_bad += 1;
                break;
            }
        }
    }
    if particle_bad > 0 {
        failures.push(format!("particle count changed in {particle_bad}/10 runs"));
    }

    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("all suites hold; u error {u_err:.1e}, worst slope mismatch {worst_slope:.3}")
        } else {
            failures.join("; ")
        },
    ))
}

fn monotone_profiles() -> Check {
    let sim = lattice_config()?;
    let bins = 12;
    let times = sample_schedule(sim.total_steps, 1000).map_err(e)?;
    let run = run_experiment(&sim, 20, bins, &times).map_err(e)?;
    let mut bad = Vec::new();
    for (t, cp) in times.iter().zip(&run.coarse) {
        let rises: Vec<f64> = cp
            .group_means
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&d| d > 0.0)
            .collect();
        let big = rises.iter().any(|&d| d >= 1.0 / bins as f64);
        if rises.len() > 1 || big {
            bad.push(format!("step {t}: {} inversions", rises.len()));
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} sampled profiles non-increasing", times.len())
        } else {
            format!(
                "{}/{} profiles violate: {}",
                bad.len(),
                times.len(),
                bad.join(", ")
            )
        },
    ))
}

fn main() {
    let outcomes: Vec<Outcome> = vec![
        run_check("1 closed-form V", secs(5), closed_form_v),
        run_check("2 greedy N*eps scaling", secs(30), greedy_scaling),
        run_check("3 asymptotic grid formula", None, grid_formula),
        run_check("4 quartic worked example", None, worked_example),
        run_check("5 RLE complexity vs alpha", secs(120), rle_complexity_curve),
        run_check("6 LZ77 window ratio", None, window_ratio),
        run_check(
            "7 lattice gas apparent complexity",
            secs(120),
            lattice_curve,
        ),
        run_check("8 diffusion complexity curves", None, diffusion_curves),
        run_check("9 property suites", None, property_suites),
        run_check(
            "lattice averaged profiles monotone",
            None,
            monotone_profiles,
        ),
    ];
    std::process::exit(summarize(&outcomes));
}
