use std::str::FromStr;

use vcx_core::compression::{
    default_dx_sequence, default_r_grid, fit_eta_gamma, scaling_rows, ScalingRow,
};
use vcx_core::lattice::sample_schedule;
use vcx_core::{
    asymptotic_grid, discretize, greedy_equidistribution, greedy_for_total_error, log_spaced,
    lz77_encode, rle_complexity, rle_curve, run_experiment, v_complexity, v_curve,
    window_ratio_experiment, DiffusionSolution, FunctionSpec, GridSpec, LatticeRun, Lz77Params,
    QuadratureConfig, RealFunction, SimConfig,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{num, sig10, write_csv, Output};
use crate::plot::{render, Series};

fn parse_function(s: &str) -> CliResult<FunctionSpec> {
    Ok(FunctionSpec::from_str(s)?)
}

fn quad_config(q: &QuadArgs) -> CliResult<QuadratureConfig> {
    Ok(QuadratureConfig::new(
        q.rel_tol,
        q.abs_tol,
        q.max_subdivisions,
    )?)
}

fn parse_list<T: FromStr>(flag: &str, s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--{flag}: '{p}' is not a valid number")))
        })
        .collect()
}

/// `log:lo,hi,n` or an explicit comma-separated list.
pub fn parse_times(s: &str) -> CliResult<Vec<f64>> {
    match s.strip_prefix("log:") {
        Some(rest) => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::Usage(format!(
                    "--times log:lo,hi,n needs three values, got '{rest}'"
                )));
            }
            let lo: f64 = parse_list("times", parts[0])?[0];
            let hi: f64 = parse_list("times", parts[1])?[0];
            let n: usize = parse_list("times", parts[2])?[0];
            Ok(log_spaced(lo, hi, n)?)
        }
        None => parse_list("times", s),
    }
}

pub fn vc(a: &VcArgs) -> CliResult<()> {
    let f = parse_function(&a.function)?;
    let v = v_complexity(&f, &quad_config(&a.quad)?)?;
    println!("{}", sig10(v));
    Ok(())
}

pub fn approx(a: &ApproxArgs, out: &Output) -> CliResult<()> {
    let f = parse_function(&a.function)?;
    let cfg = quad_config(&a.quad)?;
    let report = match (a.method, a.delta) {
        (ApproxMethod::Greedy, Some(delta)) => greedy_equidistribution(&f, delta)?,
        (ApproxMethod::Greedy, None) => greedy_for_total_error(&f, a.epsilon, &cfg)?,
        (ApproxMethod::Grid, None) => asymptotic_grid(&f, a.epsilon, &cfg)?,
        (ApproxMethod::Grid, Some(_)) => {
            return Err(CliError::Usage(
                "--delta applies to the greedy method only".into(),
            ))
        }
    };
    let path = out.main_path("approx.csv");
    std::fs::write(&path, report.to_csv(&f.to_string()))?;
    println!(
        "N = {}, total L1 error = {}, N*eps = {}, V = {}",
        report.n_intervals,
        sig10(report.total_l1_error),
        sig10(report.v_estimate()),
        sig10(v_complexity(&f, &cfg)?)
    );
    Ok(())
}

fn dx_values(f: &FunctionSpec, dx: &Option<String>) -> CliResult<Vec<f64>> {
    let (a, b) = f.domain();
    match dx {
        Some(s) => parse_list("dx", s),
        None => Ok(default_dx_sequence(a, b)),
    }
}

fn scaling_table(rows: &[ScalingRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                num(r.dx),
                r.n.to_string(),
                r.n_rle.to_string(),
                r.lz77_tokens.map_or(String::new(), |t| t.to_string()),
                num(r.l1_error),
            ]
        })
        .collect()
}

pub fn compress(a: &CompressArgs, out: &Output) -> CliResult<()> {
    let f = parse_function(&a.function)?;
    let dxs = dx_values(&f, &a.dx)?;
    let params = Lz77Params {
        window: a.window,
        min_match: a.min_match,
    };
    let rows = scaling_rows(&f, a.r, &dxs, Some(params))?;
    write_csv(
        &out.main_path("scaling.csv"),
        &["dx", "n", "n_rle", "lz77_tokens", "l1_error"],
        &scaling_table(&rows),
    )?;
    let fit = fit_eta_gamma(a.r, rows);
    let (lo, hi) = f.domain();
    println!(
        "r = {}: eta = {}, gamma = {}, eta*gamma*(b-a) = {}{}",
        a.r,
        sig10(fit.eta),
        sig10(fit.gamma),
        sig10(fit.eta * fit.gamma * (hi - lo)),
        if fit.is_scaling() {
            ""
        } else {
            " (non-scaling)"
        }
    );
    if a.tokens {
        let finest = dxs.iter().cloned().fold(f64::INFINITY, f64::min);
        let trace = discretize(&f, &GridSpec::new(lo, hi, finest, a.r)?)?;
        let symbols = trace.symbols.ok_or_else(|| {
            CliError::Usage("--tokens needs r > 0; exact samples have no symbols".into())
        })?;
        let tokens = lz77_encode(&symbols, params.window, params.min_match)?;
        out.write("tokens.txt", &tokens.to_text())?;
    }
    if a.complexity {
        let c = rle_complexity(&f, &default_r_grid(), &dxs)?;
        let rows: Vec<Vec<String>> = c
            .fits
            .iter()
            .map(|g| {
                vec![
                    num(g.r),
                    num(g.eta),
                    num(g.gamma),
                    num(g.eta * g.gamma * (hi - lo)),
                    g.is_scaling().to_string(),
                ]
            })
            .collect();
        write_csv(
            &out.path("complexity.csv"),
            &["r", "eta", "gamma", "c", "scaling"],
            &rows,
        )?;
        println!("C = {} at r = {}", sig10(c.c), c.argmin_r);
    }
    Ok(())
}

fn ratio_rows(
    f: &FunctionSpec,
    params: Lz77Params,
    r: f64,
    ns: &[usize],
) -> CliResult<Vec<Vec<String>>> {
    Ok(window_ratio_experiment(f, params, r, ns)?
        .iter()
        .map(|row| {
            vec![
                row.n.to_string(),
                row.l1.to_string(),
                row.l2.to_string(),
                num(row.ratio),
            ]
        })
        .collect())
}

pub fn ratio(a: &RatioArgs, out: &Output) -> CliResult<()> {
    let f = parse_function(&a.function)?;
    let ns: Vec<usize> = parse_list("n", &a.n)?;
    let params = Lz77Params {
        window: a.window,
        min_match: a.min_match,
    };
    let rows = ratio_rows(&f, params, a.r, &ns)?;
    write_csv(
        &out.main_path("ratio.csv"),
        &["n", "l1", "l2", "ratio"],
        &rows,
    )?;
    Ok(())
}

fn lattice_run(a: &LatticeArgs, seed: u64) -> CliResult<LatticeRun> {
    let cfg = SimConfig::new(a.nodes, a.steps, a.split, seed, a.replicas)?;
    let times = sample_schedule(a.steps, a.sample_every)?;
    Ok(run_experiment(&cfg, a.groups, a.bins, &times)?)
}

pub fn lattice(a: &LatticeArgs, seed: u64, out: &Output) -> CliResult<()> {
    let run = lattice_run(a, seed)?;
    if !a.no_profiles {
        for (t, profile) in run.sample_times.iter().zip(&run.mean_profiles) {
            let rows: Vec<Vec<String>> = profile
                .iter()
                .enumerate()
                .map(|(s, c)| vec![s.to_string(), num(*c)])
                .collect();
            write_csv(
                &out.path(&format!("profile_t{t}.csv")),
                &["segment", "color"],
                &rows,
            )?;
        }
    }
    let rows: Vec<Vec<String>> = run
        .sample_times
        .iter()
        .zip(&run.complexity.values)
        .zip(&run.fraction_top)
        .map(|((t, c), ft)| vec![t.to_string(), num(*c), num(*ft)])
        .collect();
    write_csv(
        &out.main_path("curve.csv"),
        &["time", "apparent_complexity", "fraction_top"],
        &rows,
    )?;
    Ok(())
}

struct DiffusionCurves {
    times: Vec<f64>,
    v: Vec<f64>,
    v_norm: Vec<f64>,
    rle: Vec<f64>,
    rle_norm: Vec<f64>,
}

fn diffusion_curves(a: &DiffusionArgs) -> CliResult<DiffusionCurves> {
    let times = parse_times(&a.times)?;
    let sol = DiffusionSolution::new(a.diffusivity)?;
    let grid = GridSpec::new(-1.0, 1.0, a.dx, a.r)?;
    let v = v_curve(&sol, &times, &quad_config(&a.quad)?)?;
    let rle = rle_curve(&sol, &times, &grid)?;
    Ok(DiffusionCurves {
        times,
        v_norm: v.normalized().values,
        v: v.values,
        rle_norm: rle.normalized().values,
        rle: rle.values,
    })
}

pub fn diffusion(a: &DiffusionArgs, out: &Output) -> CliResult<()> {
    let c = diffusion_curves(a)?;
    write_diffusion(&c, out)
}

fn write_diffusion(c: &DiffusionCurves, out: &Output) -> CliResult<()> {
    let rows: Vec<Vec<String>> = (0..c.times.len())
        .map(|i| {
            vec![
                num(c.times[i]),
                num(c.v[i]),
                num(c.v_norm[i]),
                num(c.rle[i]),
                num(c.rle_norm[i]),
            ]
        })
        .collect();
    write_csv(
        &out.main_path("curve.csv"),
        &[
            "t",
            "v_complexity",
            "v_normalized",
            "rle_product",
            "rle_normalized",
        ],
        &rows,
    )
}

fn pts(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    xs.iter().cloned().zip(ys.iter().cloned()).collect()
}

fn default_lattice() -> LatticeArgs {
    LatticeArgs {
        nodes: 201,
        steps: 18000,
        split: 101,
        groups: 20,
        bins: 12,
        replicas: 20,
        sample_every: 100,
        no_profiles: true,
    }
}

pub fn figures(a: &FigureArgs, seed: u64, out: &Output) -> CliResult<()> {
    let svg = match a.which {
        Figure::Fig2 => {
            let f = FunctionSpec::quadratic();
            let report = greedy_for_total_error(&f, 0.07, &QuadratureConfig::default())?;
            std::fs::write(out.main_path("approx.csv"), report.to_csv(&f.to_string()))?;
            let curve: Vec<(f64, f64)> = (0..=200)
                .map(|i| {
                    let x = -1.0 + i as f64 / 100.0;
                    (x, f.value(x))
                })
                .collect();
            let steps: Vec<(f64, f64)> = report
                .step_fn
                .intervals()
                .flat_map(|(l, r, v)| [(l, v), (r, v)])
                .collect();
            render(
                "x^2 and its equidistributed step approximation",
                "x",
                "f",
                false,
                &[Series::line("f", curve), Series::line("step", steps)],
            )
        }
        Figure::Fig3 => {
            let cfg = QuadratureConfig::default();
            let mut rows = Vec::new();
            let (mut alphas, mut vs, mut cs) = (Vec::new(), Vec::new(), Vec::new());
            for i in 0..=20 {
                let alpha = 0.25 * i as f64;
                let f = FunctionSpec::power(alpha, 0.0, 1.0)?;
                let v = v_complexity(&f, &cfg)?;
                let c = rle_complexity(&f, &default_r_grid(), &default_dx_sequence(0.0, 1.0))?;
                rows.push(vec![num(alpha), num(v), num(c.c), num(c.argmin_r)]);
                alphas.push(alpha);
                vs.push(v);
                cs.push(c.c);
            }
            write_csv(
                &out.main_path("curve.csv"),
                &["alpha", "v", "c_rle", "argmin_r"],
                &rows,
            )?;
            render(
                "complexity of x^alpha on [0, 1]",
                "alpha",
                "complexity",
                false,
                &[
                    Series::line("V", pts(&alphas, &vs)),
                    Series::scatter("C (RLE)", pts(&alphas, &cs)),
                ],
            )
        }
        Figure::Fig4 => {
            let f = FunctionSpec::sin_squared(0.0, 1.0)?;
            let ns: Vec<usize> = (1..=24).map(|k| 500 * k).collect();
            let rows = ratio_rows(&f, Lz77Params::default(), 0.5, &ns)?;
            write_csv(
                &out.main_path("curve.csv"),
                &["n", "l1", "l2", "ratio"],
                &rows,
            )?;
            let points: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap()))
                .collect();
            render(
                "LZ77 length ratio, full over half domain",
                "n",
                "l2/l1",
                false,
                &[Series::line("ratio", points)],
            )
        }
        Figure::Fig6 | Figure::Fig7 => {
            let run = lattice_run(&default_lattice(), seed)?;
            let times: Vec<f64> = run.sample_times.iter().map(|&t| t as f64).collect();
            let (name, values) = if a.which == Figure::Fig6 {
                ("fraction_top", run.fraction_top.clone())
            } else {
                ("apparent_complexity", run.complexity.values.clone())
            };
            let rows: Vec<Vec<String>> = times
                .iter()
                .zip(&values)
                .map(|(t, v)| vec![num(*t), num(*v)])
                .collect();
            write_csv(&out.main_path("curve.csv"), &["time", name], &rows)?;
            render(
                name,
                "step",
                name,
                false,
                &[Series::line(name, pts(&times, &values))],
            )
        }
        Figure::Fig9 => {
            let c = diffusion_curves(&DiffusionArgs {
                times: "log:1e-4,2,60".into(),
                dx: 0.0025,
                r: 0.8,
                diffusivity: 1.0,
                quad: QuadArgs {
                    rel_tol: 1e-10,
                    abs_tol: 1e-13,
                    max_subdivisions: 5000,
                },
            })?;
            write_diffusion(&c, out)?;
            render(
                "complexity of the diffusing profile",
                "t",
                "normalized complexity",
                true,
                &[
                    Series::line("V", pts(&c.times, &c.v_norm)),
                    Series::line("RLE", pts(&c.times, &c.rle_norm)),
                ],
            )
        }
    };
    if a.plot {
        out.write("curve.svg", &svg)?;
    }
    Ok(())
}
