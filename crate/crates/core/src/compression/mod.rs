//! Discretisation on a uniform `(Δx, r)` grid, compression of the resulting
//! symbol strings, and the compression-based complexity built from them.

mod lz77;
mod rle;

pub use lz77::{lz77_decode, lz77_encode, Lz77Tokens, Token};
pub use rle::{count_runs, rle_encode, RlePairs};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::vcomplexity::constant_fit_error;

/// Relative residual above which a slope fit is reported as non-scaling.
pub const NON_SCALING_RESIDUAL: f64 = 0.2;

/// Uniform grid on `[a, b]` with `n` cells of width `dx` and vertical bin
/// height `dy = r·dx`. `r = 0` disables vertical rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub dx: f64,
    pub r: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, dx: f64, r: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("grid interval [{a}, {b}] is empty")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::invalid(format!("dx must be positive, got {dx}")));
        }
        check_r(r)?;
        let cells = ((b - a) / dx).round();
        if cells < 1.0 || (cells * dx - (b - a)).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "dx = {dx} does not divide [{a}, {b}] into whole cells"
            )));
        }
        Ok(GridSpec {
            a,
            b,
            dx,
            r,
            n: cells as usize,
        })
    }

    pub fn with_cells(a: f64, b: f64, n: usize, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("grid needs at least one cell"));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("grid interval [{a}, {b}] is empty")));
        }
        check_r(r)?;
        Ok(GridSpec {
            a,
            b,
            dx: (b - a) / n as f64,
            r,
            n,
        })
    }

    pub fn dy(&self) -> f64 {
        self.r * self.dx
    }

    /// Cell `k` as `(left, right)`; the last cell ends exactly at `b`.
    pub fn cell(&self, k: usize) -> (f64, f64) {
        let left = self.a + k as f64 * self.dx;
        let right = if k + 1 == self.n {
            self.b
        } else {
            self.a + (k + 1) as f64 * self.dx
        };
        (left, right)
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        self.a + (k as f64 + 0.5) * self.dx
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "r must be finite and non-negative, got {r}"
        )))
    }
}

/// Midpoint samples of a function on a grid and, for `r > 0`, their bin
/// indices `round(f(x_k)/dy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedTrace {
    pub grid: GridSpec,
    pub samples: Vec<f64>,
    pub symbols: Option<Vec<i64>>,
}

impl DiscretizedTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Value of the step function on each cell: `a_k·dy`, or the exact
    /// sample when `r = 0`.
    pub fn step_values(&self) -> Vec<f64> {
        match &self.symbols {
            Some(sym) => {
                let dy = self.grid.dy();
                sym.iter().map(|&s| s as f64 * dy).collect()
            }
            None => self.samples.clone(),
        }
    }

    /// `N_RLE`. Unrounded samples are treated as pairwise distinct.
    pub fn n_rle(&self) -> usize {
        match &self.symbols {
            Some(sym) => count_runs(sym),
            None => self.len(),
        }
    }

    /// LZ77 token count. Unrounded samples are treated as incompressible.
    pub fn lz77_tokens(&self, params: Lz77Params) -> Result<usize> {
        match &self.symbols {
            Some(sym) => Ok(lz77_encode(sym, params.window, params.min_match)?.len()),
            None => Ok(self.len()),
        }
    }
}

pub fn discretize<F: RealFunction + ?Sized>(f: &F, grid: &GridSpec) -> Result<DiscretizedTrace> {
    let (fa, fb) = f.domain();
    let slack = 1e-12 * (fb - fa).abs().max(1.0);
    if grid.a < fa - slack || grid.b > fb + slack {
        return Err(Error::OutOfDomain {
            x: if grid.a < fa { grid.a } else { grid.b },
            a: fa,
            b: fb,
        });
    }
    let samples: Vec<f64> = (0..grid.n)
        .map(|k| f.value(grid.midpoint(k).clamp(fa, fb)))
        .collect();
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite sample {bad}")));
    }
    let symbols = if grid.r > 0.0 {
        let dy = grid.dy();
        Some(samples.iter().map(|&v| (v / dy).round() as i64).collect())
    } else {
        None
    };
    Ok(DiscretizedTrace {
        grid: *grid,
        samples,
        symbols,
    })
}

/// `‖f − q_u‖₁` for the discretised step function `q_u`.
pub fn uniform_step_error<F: RealFunction + ?Sized>(f: &F, grid: &GridSpec) -> Result<f64> {
    let trace = discretize(f, grid)?;
    trace_error(f, &trace)
}

fn trace_error<F: RealFunction + ?Sized>(f: &F, trace: &DiscretizedTrace) -> Result<f64> {
    let grid = &trace.grid;
    let mut total = 0.0;
    for (k, g) in trace.step_values().into_iter().enumerate() {
        let (c, d) = grid.cell(k);
        total += constant_fit_error(f, c, d, g)?;
    }
    Ok(total)
}

/// `N_RLE · ε` at a single grid.
pub fn rle_product<F: RealFunction + ?Sized>(f: &F, grid: &GridSpec) -> Result<f64> {
    let trace = discretize(f, grid)?;
    Ok(trace.n_rle() as f64 * trace_error(f, &trace)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz77Params {
    pub window: usize,
    pub min_match: usize,
}

impl Default for Lz77Params {
    fn default() -> Self {
        Lz77Params {
            window: 4096,
            min_match: 2,
        }
    }
}

/// Compression and error measurements at one `Δx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub dx: f64,
    pub n: usize,
    pub n_rle: usize,
    pub lz77_tokens: Option<usize>,
    pub l1_error: f64,
}

/// Measures every `Δx` in `dxs` (in parallel; rows keep the input order).
pub fn scaling_rows<F: RealFunction + ?Sized>(
    f: &F,
    r: f64,
    dxs: &[f64],
    lz: Option<Lz77Params>,
) -> Result<Vec<ScalingRow>> {
    let (a, b) = f.domain();
    let grids = dxs
        .iter()
        .map(|&dx| GridSpec::new(a, b, dx, r))
        .collect::<Result<Vec<_>>>()?;
    grids
        .par_iter()
        .map(|grid| {
            let trace = discretize(f, grid)?;
            let lz77_tokens = match lz {
                Some(p) => Some(trace.lz77_tokens(p)?),
                None => None,
            };
            Ok(ScalingRow {
                dx: grid.dx,
                n: grid.n,
                n_rle: trace.n_rle(),
                lz77_tokens,
                l1_error: trace_error(f, &trace)?,
            })
        })
        .collect()
}

/// Fitted `N_RLE ≈ η·n` and `ε ≈ γ·Δx`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaGamma {
    pub r: f64,
    pub eta: f64,
    pub gamma: f64,
    pub eta_residual: f64,
    pub gamma_residual: f64,
    pub rows: Vec<ScalingRow>,
}

impl EtaGamma {
    pub fn is_scaling(&self) -> bool {
        self.eta_residual <= NON_SCALING_RESIDUAL && self.gamma_residual <= NON_SCALING_RESIDUAL
    }
}

/// Least-squares slope through the origin and its relative residual.
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x).powi(2))
        .sum();
    let ss_y: f64 = ys.iter().map(|y| y * y).sum();
    let resid = if ss_y > 0.0 {
        (ss_res / ss_y).sqrt()
    } else {
        0.0
    };
    (slope, resid)
}

pub fn fit_eta_gamma(r: f64, rows: Vec<ScalingRow>) -> EtaGamma {
    let n: Vec<f64> = rows.iter().map(|row| row.n as f64).collect();
    let n_rle: Vec<f64> = rows.iter().map(|row| row.n_rle as f64).collect();
    let dx: Vec<f64> = rows.iter().map(|row| row.dx).collect();
    let err: Vec<f64> = rows.iter().map(|row| row.l1_error).collect();
    let (eta, eta_residual) = if r == 0.0 {
        (1.0, 0.0)
    } else {
        slope_through_origin(&n, &n_rle)
    };
    let (gamma, gamma_residual) = slope_through_origin(&dx, &err);
    EtaGamma {
        r,
        eta,
        gamma,
        eta_residual,
        gamma_residual,
        rows,
    }
}

pub fn estimate_eta_gamma<F: RealFunction + ?Sized>(
    f: &F,
    r: f64,
    dxs: &[f64],
) -> Result<EtaGamma> {
    if dxs.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 values of dx, got {}",
            dxs.len()
        )));
    }
    Ok(fit_eta_gamma(r, scaling_rows(f, r, dxs, None)?))
}

/// `r ∈ {0, 0.1, …, 3.0}`.
pub fn default_r_grid() -> Vec<f64> {
    (0..=30).map(|i| i as f64 / 10.0).collect()
}

/// `Δx = (b − a)/n` for `n ∈ {100, 200, 400, 800}`.
pub fn default_dx_sequence(a: f64, b: f64) -> Vec<f64> {
    [100.0, 200.0, 400.0, 800.0]
        .iter()
        .map(|n| (b - a) / n)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RleComplexity {
    pub c: f64,
    pub argmin_r: f64,
    pub fits: Vec<EtaGamma>,
}

/// `C(f) = min_r η(r)·γ(r)·(b − a)`, the limit of `N_RLE·ε` as `Δx → 0`.
pub fn rle_complexity<F: RealFunction + ?Sized>(
    f: &F,
    r_grid: &[f64],
    dxs: &[f64],
) -> Result<RleComplexity> {
    if !r_grid.contains(&0.0) {
        return Err(Error::invalid("the r grid must contain 0"));
    }
    let (a, b) = f.domain();
    let fits = r_grid
        .par_iter()
        .map(|&r| estimate_eta_gamma(f, r, dxs))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (f64::INFINITY, 0.0);
    for fit in &fits {
        let c = fit.eta * fit.gamma * (b - a);
        if c < best.0 {
            best = (c, fit.r);
        }
    }
    Ok(RleComplexity {
        c: best.0,
        argmin_r: best.1,
        fits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: usize,
    pub l1: usize,
    pub l2: usize,
    pub ratio: f64,
}

/// LZ77 token counts over the left half of the domain (`n/2` cells) and the
/// whole domain (`n` cells), at equal `Δx`.
pub fn window_ratio_experiment<F: RealFunction + ?Sized>(
    f: &F,
    params: Lz77Params,
    r: f64,
    n_values: &[usize],
) -> Result<Vec<RatioRow>> {
    if let Some(&n) = n_values.iter().find(|&&n| n < 2 || n % 2 != 0) {
        return Err(Error::invalid(format!(
            "n must be even and at least 2, got {n}"
        )));
    }
    let (a, b) = f.domain();
    let mid = 0.5 * (a + b);
    n_values
        .par_iter()
        .map(|&n| {
            let half = discretize(f, &GridSpec::with_cells(a, mid, n / 2, r)?)?;
            let full = discretize(f, &GridSpec::with_cells(a, b, n, r)?)?;
            let l1 = half.lz77_tokens(params)?;
            let l2 = full.lz77_tokens(params)?;
            Ok(RatioRow {
                n,
                l1,
                l2,
                ratio: l2 as f64 / l1 as f64,
            })
        })
        .collect()
}
