//! Fourier-series solution of `u_t = D u_xx` on `[-1, 1]` with insulated
//! ends and initial state 1 on `[-1, 0)`, 0 on `(0, 1]`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use rayon::prelude::*;

use crate::compression::{rle_product, GridSpec};
use crate::curve::ComplexityCurve;
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::quadrature::QuadratureConfig;
use crate::vcomplexity::v_complexity;

/// Smallest time for which the series is guaranteed to converge within the
/// term cap.
pub const T_MIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionSolution {
    pub diffusivity: f64,
    /// Terms are summed until the envelope drops below this.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for DiffusionSolution {
    fn default() -> Self {
        DiffusionSolution {
            diffusivity: 1.0,
            tol: 1e-12,
            max_terms: 100_000,
        }
    }
}

impl DiffusionSolution {
    pub fn new(diffusivity: f64) -> Result<Self> {
        if !(diffusivity.is_finite() && diffusivity > 0.0) {
            return Err(Error::invalid(format!(
                "diffusivity must be positive, got {diffusivity}"
            )));
        }
        Ok(DiffusionSolution {
            diffusivity,
            ..Default::default()
        })
    }

    fn check(&self, x: f64, t: f64) -> Result<()> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain { x, a: -1.0, b: 1.0 });
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!(
                "time must be finite and non-negative, got {t}"
            )));
        }
        Ok(())
    }

    /// Sums `Σ_k e^{-λ_k² D t} · w(k) · trig(λ_k x)` with `λ_k = (2k-1)π/2`,
    /// stopping once `scale · e^{-λ_k² D t} · w(k)` is below `tol`.
    fn series(
        &self,
        x: f64,
        t: f64,
        scale: f64,
        weight: impl Fn(f64) -> f64,
        trig: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        let dt = self.diffusivity * t;
        let mut sum = 0.0;
        for k in 1..=self.max_terms {
            let m = (2 * k - 1) as f64;
            let lambda = m * FRAC_PI_2;
            let envelope = (-lambda * lambda * dt).exp() * weight(m);
            if scale * envelope < self.tol {
                return Ok(sum);
            }
            sum += envelope * trig(lambda * x);
        }
        Err(Error::SlowConvergence { t, t_min: T_MIN })
    }

    /// For `D·t` below [`IMAGE_SUM_BELOW`] the heat-kernel image sum is used
    /// instead of the Fourier modes. Both represent the same function, but
    /// the Fourier sum reaches the exponentially small tails only through
    /// cancellation, leaving roundoff noise where `u` is flat.
    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        if t == 0.0 {
            return Ok(if x < 0.0 {
                1.0
            } else if x > 0.0 {
                0.0
            } else {
                0.5
            });
        }
        let dt = self.diffusivity * t;
        if dt < IMAGE_SUM_BELOW {
            self.check_t_min(t)?;
            return Ok(image_sum_value(x, dt));
        }
        let s = self.series(x, t, FRAC_2_PI, |m| 1.0 / m, f64::sin)?;
        Ok(0.5 - FRAC_2_PI * s)
    }

    pub fn u_x(&self, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        if t <= 0.0 {
            return Err(Error::invalid("the derivative needs t > 0"));
        }
        let dt = self.diffusivity * t;
        if dt < IMAGE_SUM_BELOW {
            self.check_t_min(t)?;
            return Ok(image_sum_derivative(x, dt));
        }
        let s = self.series(x, t, 1.0, |_| 1.0, f64::cos)?;
        Ok(-s)
    }

    fn check_t_min(&self, t: f64) -> Result<()> {
        if t < T_MIN {
            Err(Error::SlowConvergence { t, t_min: T_MIN })
        } else {
            Ok(())
        }
    }

    /// Fourier partial sums, exposed for cross-checking the image sums.
    pub fn u_fourier(&self, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        let s = self.series(x, t, FRAC_2_PI, |m| 1.0 / m, f64::sin)?;
        Ok(0.5 - FRAC_2_PI * s)
    }

    pub fn u_x_fourier(&self, x: f64, t: f64) -> Result<f64> {
        self.check(x, t)?;
        Ok(-self.series(x, t, 1.0, |_| 1.0, f64::cos)?)
    }

    /// `u(·, t)` as a function of `x`. Requires `t > 0`.
    pub fn profile(&self, t: f64) -> Result<DiffusionProfile> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!(
                "profile time must be positive, got {t}"
            )));
        }
        // surfaces slow convergence once instead of inside the hot path
        self.u(0.5, t)?;
        Ok(DiffusionProfile { sol: *self, t })
    }
}

/// Reduced time `D·t` below which the image sums are used.
pub const IMAGE_SUM_BELOW: f64 = 0.1;

// Even reflection of the initial state about x = ±1 is the period-4 pattern
// equal to 1 on (4k-2, 4k) and 0 on (4k, 4k+2).

/// Images with `|k|` beyond this contribute below `e^-40`.
fn image_count(dt: f64) -> i64 {
    let reach = (160.0 * dt).sqrt();
    ((reach + 3.0) / 4.0).ceil() as i64
}

/// Every bracket is a difference of decreasing `erfc` values at positive
/// arguments, so no term cancels.
fn image_sum_value(x: f64, dt: f64) -> f64 {
    let s = 2.0 * dt.sqrt();
    let k_max = image_count(dt);
    let mut sum = 0.0;
    for k in (0..=k_max).rev() {
        let c = 4.0 * k as f64;
        sum += 0.5 * (libm::erfc((x + c) / s) - libm::erfc((x + c + 2.0) / s));
        if k > 0 {
            sum += 0.5 * (libm::erfc((c - 2.0 - x) / s) - libm::erfc((c - x) / s));
        }
    }
    sum
}

fn image_sum_derivative(x: f64, dt: f64) -> f64 {
    let four_dt = 4.0 * dt;
    let k_max = image_count(dt);
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let c = 4.0 * k as f64;
        sum += (-(x - c - 2.0).powi(2) / four_dt).exp() - (-(x - c).powi(2) / four_dt).exp();
    }
    sum / (std::f64::consts::PI * four_dt).sqrt()
}

/// Snapshot `x ↦ u(x, t)` on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct DiffusionProfile {
    sol: DiffusionSolution,
    t: f64,
}

impl DiffusionProfile {
    pub fn time(&self) -> f64 {
        self.t
    }
}

impl RealFunction for DiffusionProfile {
    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn value(&self, x: f64) -> f64 {
        self.sol.u(x.clamp(-1.0, 1.0), self.t).unwrap_or(f64::NAN)
    }

    fn deriv(&self, x: f64) -> f64 {
        self.sol.u_x(x.clamp(-1.0, 1.0), self.t).unwrap_or(f64::NAN)
    }

    fn turning_points(&self, _c: f64, _d: f64) -> Vec<f64> {
        Vec::new()
    }

    // Not a kink: the derivative peaks sharply at 0 for small t.
    fn kinks(&self, c: f64, d: f64) -> Vec<f64> {
        if c < 0.0 && 0.0 < d {
            vec![0.0]
        } else {
            Vec::new()
        }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    match times.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        Some(t) => Err(Error::invalid(format!(
            "curve times must be positive, got {t}"
        ))),
        None => Ok(()),
    }
}

/// `V(u(·, t))` at each time.
pub fn v_curve(
    sol: &DiffusionSolution,
    times: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ComplexityCurve> {
    check_times(times)?;
    let values = times
        .par_iter()
        .map(|&t| v_complexity(&sol.profile(t)?, cfg))
        .collect::<Result<Vec<_>>>()?;
    ComplexityCurve::new("v_complexity", times.to_vec(), values)
}

/// `N_RLE · ε` of the discretised profile at each time.
pub fn rle_curve(
    sol: &DiffusionSolution,
    times: &[f64],
    grid: &GridSpec,
) -> Result<ComplexityCurve> {
    check_times(times)?;
    if grid.a != -1.0 || grid.b != 1.0 {
        return Err(Error::invalid("the grid must cover [-1, 1]"));
    }
    let values = times
        .par_iter()
        .map(|&t| rle_product(&sol.profile(t)?, grid))
        .collect::<Result<Vec<_>>>()?;
    ComplexityCurve::new("rle_product", times.to_vec(), values)
}
