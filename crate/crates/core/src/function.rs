//! Real functions on an interval: the built-in analytic families, sampled
//! tables, and the text form used on the command line.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A real function on a closed interval with value and derivative access.
///
/// `value` and `deriv` are unchecked hot-path accessors; callers stay inside
/// `domain()`. The two hint methods let the approximation and quadrature
/// code split intervals where the function turns or its derivative jumps.
pub trait RealFunction: Sync {
    fn domain(&self) -> (f64, f64);

    fn value(&self, x: f64) -> f64;

    fn deriv(&self, x: f64) -> f64;

    /// Interior points of `(c, d)` that split it into monotone pieces.
    fn turning_points(&self, c: f64, d: f64) -> Vec<f64> {
        scan_turning_points(self, c, d)
    }

    /// Interior points of `(c, d)` where the derivative is discontinuous.
    fn kinks(&self, _c: f64, _d: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// Locates sign changes of the derivative by sampling and bisection.
pub fn scan_turning_points<F: RealFunction + ?Sized>(f: &F, c: f64, d: f64) -> Vec<f64> {
    const SAMPLES: usize = 512;
    let mut out = Vec::new();
    let h = (d - c) / SAMPLES as f64;
    let mut prev_x = c + 0.5 * h;
    let mut prev_s = f.deriv(prev_x).signum();
    for i in 1..SAMPLES {
        let x = c + (i as f64 + 0.5) * h;
        let s = f.deriv(x).signum();
        if s != 0.0 && prev_s != 0.0 && s != prev_s {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f.deriv(mid).signum() == prev_s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        if s != 0.0 {
            prev_s = s;
            prev_x = x;
        }
    }
    out
}

/// The function families understood by [`FunctionSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    /// `x^alpha`, alpha >= 0. Negative arguments need an integer exponent.
    Power {
        alpha: f64,
    },
    /// `1 / (1 + exp(-alpha x))`
    Sigmoid {
        alpha: f64,
    },
    /// `cos(n pi x)`
    Cosine {
        n: f64,
    },
    /// `sin^2(pi x)`
    SinSquared,
    Constant {
        c: f64,
    },
    Affine {
        slope: f64,
        intercept: f64,
    },
    /// Piecewise-linear interpolation through `(nodes[i], values[i])`.
    Sampled {
        nodes: Vec<f64>,
        values: Vec<f64>,
        /// File the table was read from, kept for display.
        source: Option<String>,
    },
}

/// A function together with the interval it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    kind: FunctionKind,
    a: f64,
    b: f64,
}

fn is_integer(v: f64) -> bool {
    v.fract() == 0.0 && v.is_finite()
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!(
                "domain [{a}, {b}] must satisfy a < b"
            )));
        }
        match &kind {
            FunctionKind::Power { alpha } => {
                if !(alpha.is_finite() && *alpha >= 0.0) {
                    return Err(Error::invalid("power exponent must be finite and >= 0"));
                }
                if a < 0.0 && !is_integer(*alpha) {
                    return Err(Error::invalid(
                        "non-integer power exponents need a domain inside [0, inf)",
                    ));
                }
            }
            FunctionKind::Sigmoid { alpha } if !alpha.is_finite() => {
                return Err(Error::invalid("sigmoid alpha must be finite"));
            }
            FunctionKind::Cosine { n } if !n.is_finite() => {
                return Err(Error::invalid("cosine n must be finite"));
            }
            FunctionKind::Constant { c } if !c.is_finite() => {
                return Err(Error::invalid("constant must be finite"));
            }
            FunctionKind::Affine { slope, intercept }
                if !(slope.is_finite() && intercept.is_finite()) =>
            {
                return Err(Error::invalid("affine coefficients must be finite"));
            }
            FunctionKind::Sampled { nodes, values, .. } => {
                if nodes.len() != values.len() || nodes.len() < 2 {
                    return Err(Error::invalid(
                        "sampled function needs at least two nodes and one value per node",
                    ));
                }
                if nodes.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::invalid("sampled nodes must be strictly increasing"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("sampled values must be finite"));
                }
                if nodes[0] > a || nodes[nodes.len() - 1] < b {
                    return Err(Error::invalid(format!(
                        "sampled nodes [{}, {}] do not span the domain [{a}, {b}]",
                        nodes[0],
                        nodes[nodes.len() - 1]
                    )));
                }
            }
            _ => {}
        }
        Ok(FunctionSpec { kind, a, b })
    }

    pub fn power(alpha: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::Power { alpha }, a, b)
    }

    /// `x^2` on `[-1, 1]`.
    pub fn quadratic() -> Self {
        Self::power(2.0, -1.0, 1.0).expect("valid builtin")
    }

    /// `x^4` on `[0, 1]`.
    pub fn quartic() -> Self {
        Self::power(4.0, 0.0, 1.0).expect("valid builtin")
    }

    pub fn sigmoid(alpha: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::Sigmoid { alpha }, a, b)
    }

    pub fn cosine(n: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::Cosine { n }, a, b)
    }

    pub fn sin_squared(a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::SinSquared, a, b)
    }

    pub fn constant(c: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::Constant { c }, a, b)
    }

    pub fn affine(slope: f64, intercept: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(FunctionKind::Affine { slope, intercept }, a, b)
    }

    pub fn sampled(nodes: Vec<f64>, values: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        Self::new(
            FunctionKind::Sampled {
                nodes,
                values,
                source: None,
            },
            a,
            b,
        )
    }

    /// Reads a two-column `x,y` CSV. A non-numeric first row is taken as a
    /// header; lines starting with `#` are skipped. Without an explicit
    /// domain the node range is used.
    pub fn sampled_from_csv(path: &Path, domain: Option<(f64, f64)>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if record.len() < 2 {
                return Err(Error::Parse(format!(
                    "{}: row {} needs two columns",
                    path.display(),
                    row + 1
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(x), Ok(y)) => {
                    nodes.push(x);
                    values.push(y);
                }
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "{}: row {} is not numeric",
                        path.display(),
                        row + 1
                    )))
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::Parse(format!("{}: no samples", path.display())));
        }
        let (a, b) = domain.unwrap_or((nodes[0], nodes[nodes.len() - 1]));
        Self::new(
            FunctionKind::Sampled {
                nodes,
                values,
                source: Some(path.display().to_string()),
            },
            a,
            b,
        )
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Same function on a different interval.
    pub fn with_domain(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.kind.clone(), a, b)
    }

    fn check(&self, x: f64) -> Result<()> {
        if x >= self.a && x <= self.b {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.value(x))
    }

    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.deriv(x))
    }

    fn sampled_value(nodes: &[f64], values: &[f64], x: f64) -> f64 {
        let last = nodes.len() - 1;
        let i = nodes.partition_point(|&n| n <= x).clamp(1, last);
        let (x0, x1) = (nodes[i - 1], nodes[i]);
        let t = (x - x0) / (x1 - x0);
        values[i - 1] + t * (values[i] - values[i - 1])
    }
}

impl RealFunction for FunctionSpec {
    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn value(&self, x: f64) -> f64 {
        match &self.kind {
            FunctionKind::Power { alpha } => {
                if x >= 0.0 {
                    x.powf(*alpha)
                } else {
                    x.powi(*alpha as i32)
                }
            }
            FunctionKind::Sigmoid { alpha } => 1.0 / (1.0 + (-alpha * x).exp()),
            FunctionKind::Cosine { n } => (n * PI * x).cos(),
            FunctionKind::SinSquared => {
                let s = (PI * x).sin();
                s * s
            }
            FunctionKind::Constant { c } => *c,
            FunctionKind::Affine { slope, intercept } => slope * x + intercept,
            FunctionKind::Sampled { nodes, values, .. } => Self::sampled_value(nodes, values, x),
        }
    }

    fn deriv(&self, x: f64) -> f64 {
        match &self.kind {
            FunctionKind::Power { alpha } => {
                if *alpha == 0.0 {
                    0.0
                } else if x >= 0.0 {
                    alpha * x.powf(alpha - 1.0)
                } else {
                    alpha * x.powi(*alpha as i32 - 1)
                }
            }
            FunctionKind::Sigmoid { alpha } => {
                // alpha e^{-ax} / (1 + e^{-ax})^2, written to stay finite for large |ax|
                let e = (-alpha.abs() * x.abs()).exp();
                alpha * e / ((1.0 + e) * (1.0 + e))
            }
            FunctionKind::Cosine { n } => -n * PI * (n * PI * x).sin(),
            FunctionKind::SinSquared => PI * (2.0 * PI * x).sin(),
            FunctionKind::Constant { .. } => 0.0,
            FunctionKind::Affine { slope, .. } => *slope,
            FunctionKind::Sampled { nodes, values, .. } => {
                let h = fd_step(x);
                let v = |t: f64| Self::sampled_value(nodes, values, t);
                if x - h < self.a {
                    (v(x + h) - v(x)) / h
                } else if x + h > self.b {
                    (v(x) - v(x - h)) / h
                } else {
                    (v(x + h) - v(x - h)) / (2.0 * h)
                }
            }
        }
    }

    fn turning_points(&self, c: f64, d: f64) -> Vec<f64> {
        let inside = |p: &f64| *p > c && *p < d;
        match &self.kind {
            FunctionKind::Power { alpha } => {
                if *alpha > 0.0 && is_integer(*alpha) && (*alpha as i64) % 2 == 0 && inside(&0.0) {
                    vec![0.0]
                } else {
                    Vec::new()
                }
            }
            FunctionKind::Cosine { n } => lattice_points(c, d, n.abs()),
            FunctionKind::SinSquared => lattice_points(c, d, 2.0),
            FunctionKind::Sigmoid { .. }
            | FunctionKind::Constant { .. }
            | FunctionKind::Affine { .. } => Vec::new(),
            FunctionKind::Sampled { nodes, values, .. } => {
                let mut out = Vec::new();
                let mut last_sign = 0.0;
                for i in 1..nodes.len() {
                    let s = (values[i] - values[i - 1]).signum();
                    if s != 0.0 {
                        if last_sign != 0.0 && s != last_sign && inside(&nodes[i - 1]) {
                            out.push(nodes[i - 1]);
                        }
                        last_sign = s;
                    }
                }
                out
            }
        }
    }

    fn kinks(&self, c: f64, d: f64) -> Vec<f64> {
        match &self.kind {
            FunctionKind::Sampled { nodes, .. } => {
                // The finite-difference derivative is piecewise linear with
                // corners at each node and where the stencil first touches it.
                let mut out = Vec::new();
                for &n in nodes.iter() {
                    let (mut lo, mut hi) = (n, n);
                    for _ in 0..3 {
                        lo = n - fd_step(lo);
                        hi = n + fd_step(hi);
                    }
                    out.extend([lo, n, hi]);
                }
                out.push(self.a + fd_step(self.a));
                out.push(self.b - fd_step(self.b));
                out.retain(|&p| p > c && p < d);
                out
            }
            _ => Vec::new(),
        }
    }
}

fn fd_step(x: f64) -> f64 {
    1e-6f64.max(1e-6 * x.abs())
}

/// Points `j / m` strictly inside `(c, d)`.
fn lattice_points(c: f64, d: f64, m: f64) -> Vec<f64> {
    if m == 0.0 {
        return Vec::new();
    }
    let first = (c * m).floor() as i64 + 1;
    let last = (d * m).ceil() as i64 - 1;
    (first..=last)
        .map(|j| j as f64 / m)
        .filter(|&p| p > c && p < d)
        .collect()
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Power { alpha } => write!(f, "power:alpha={}", fmt_num(*alpha))?,
            FunctionKind::Sigmoid { alpha } => write!(f, "sigmoid:alpha={}", fmt_num(*alpha))?,
            FunctionKind::Cosine { n } => write!(f, "cos:n={}", fmt_num(*n))?,
            FunctionKind::SinSquared => write!(f, "sin2")?,
            FunctionKind::Constant { c } => write!(f, "const:c={}", fmt_num(*c))?,
            FunctionKind::Affine { slope, intercept } => write!(
                f,
                "affine:slope={},intercept={}",
                fmt_num(*slope),
                fmt_num(*intercept)
            )?,
            FunctionKind::Sampled { source, nodes, .. } => match source {
                Some(path) => write!(f, "sampled:file={path}")?,
                None => write!(f, "sampled:nodes={}", nodes.len())?,
            },
        }
        write!(f, "@{},{}", fmt_num(self.a), fmt_num(self.b))
    }
}

fn parse_num(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("parameter {key}: '{v}' is not a number")))
}

/// Parses the compact form `kind[:key=value,...][@a,b]`, e.g.
/// `power:alpha=2@0,1`, `cos:n=3@0,1`, `sigmoid:alpha=50@-1,1`,
/// `sampled:file=data.csv@0,1`.
impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, domain) = match s.rsplit_once('@') {
            Some((h, d)) => {
                let (a, b) = d
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("domain '{d}' must be 'a,b'")))?;
                (h, Some((parse_num("a", a)?, parse_num("b", b)?)))
            }
            None => (s, None),
        };
        let (name, params) = match head.split_once(':') {
            Some((n, p)) => (n.trim(), p),
            None => (head.trim(), ""),
        };

        let mut pairs: Vec<(String, String)> = Vec::new();
        if name == "sampled" {
            // file paths may contain commas; take everything after `file=`
            let path = params
                .trim()
                .strip_prefix("file=")
                .ok_or_else(|| Error::Parse("sampled functions need file=<path>".into()))?;
            return FunctionSpec::sampled_from_csv(Path::new(path), domain);
        }
        for part in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("parameter '{part}' must be key=value")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            match pairs.iter().find(|(k, _)| k == key) {
                Some((k, v)) => parse_num(k, v),
                None => {
                    default.ok_or_else(|| Error::Parse(format!("{name} needs parameter {key}")))
                }
            }
        };
        let allowed: &[&str] = match name {
            "power" => &["alpha"],
            "sigmoid" => &["alpha"],
            "cos" | "cosine" => &["n"],
            "const" | "constant" => &["c"],
            "affine" => &["slope", "intercept"],
            _ => &[],
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown parameter '{k}' for {name}")));
        }

        let (kind, default_domain) = match name {
            "power" => (
                FunctionKind::Power {
                    alpha: get("alpha", None)?,
                },
                (0.0, 1.0),
            ),
            "quadratic" | "quad" => (FunctionKind::Power { alpha: 2.0 }, (-1.0, 1.0)),
            "quartic" => (FunctionKind::Power { alpha: 4.0 }, (0.0, 1.0)),
            "sigmoid" => (
                FunctionKind::Sigmoid {
                    alpha: get("alpha", None)?,
                },
                (-1.0, 1.0),
            ),
            "cos" | "cosine" => (FunctionKind::Cosine { n: get("n", None)? }, (0.0, 1.0)),
            "sin2" => (FunctionKind::SinSquared, (0.0, 1.0)),
            "const" | "constant" => (
                FunctionKind::Constant {
                    c: get("c", Some(0.0))?,
                },
                (0.0, 1.0),
            ),
            "affine" => (
                FunctionKind::Affine {
                    slope: get("slope", Some(1.0))?,
                    intercept: get("intercept", Some(0.0))?,
                },
                (0.0, 1.0),
            ),
            other => return Err(Error::Parse(format!("unknown function kind '{other}'"))),
        };
        let (a, b) = domain.unwrap_or(default_domain);
        FunctionSpec::new(kind, a, b)
    }
}
