//! Complexity values indexed by time or by a parameter.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    MaxNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityCurve {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

impl ComplexityCurve {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "curve has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        Ok(ComplexityCurve {
            label: label.into(),
            times,
            values,
            normalization: Normalization::Raw,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the first maximum.
    pub fn argmax(&self) -> Option<usize> {
        let m = self.max();
        self.values.iter().position(|&v| v == m)
    }

    /// Divides by the maximum. A curve whose maximum is not positive is
    /// returned unchanged apart from the tag.
    pub fn normalized(&self) -> Self {
        let m = self.max();
        let values = if m > 0.0 {
            self.values.iter().map(|v| v / m).collect()
        } else {
            self.values.clone()
        };
        ComplexityCurve {
            label: self.label.clone(),
            times: self.times.clone(),
            values,
            normalization: Normalization::MaxNormalized,
        }
    }

    /// Sign changes of the successive differences, ignoring zero steps.
    pub fn sign_changes(&self) -> usize {
        sign_changes(&self.values)
    }

    /// At most one sign change of the differences; with `allow_outlier`, a
    /// single sample may be dropped first.
    pub fn is_unimodal(&self, allow_outlier: bool) -> bool {
        if sign_changes(&self.values) <= 1 {
            return true;
        }
        allow_outlier
            && (0..self.values.len()).any(|skip| {
                let rest: Vec<f64> = self
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| *v)
                    .collect();
                sign_changes(&rest) <= 1
            })
    }
}

fn sign_changes(values: &[f64]) -> usize {
    let mut prev = 0.0f64;
    let mut changes = 0;
    for w in values.windows(2) {
        let s = (w[1] - w[0]).signum();
        if w[1] == w[0] {
            continue;
        }
        if prev != 0.0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `log t`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) || n < 2 {
        return Err(Error::invalid(format!(
            "log spacing needs 0 < lo < hi and n >= 2, got ({lo}, {hi}, {n})"
        )));
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect();
    out[0] = lo;
    out[n - 1] = hi;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(v: &[f64]) -> ComplexityCurve {
        ComplexityCurve::new("c", (0..v.len()).map(|i| i as f64).collect(), v.to_vec()).unwrap()
    }

    #[test]
    fn normalisation() {
        let c = curve(&[1.0, 4.0, 2.0]).normalized();
        assert_eq!(c.values, vec![0.25, 1.0, 0.5]);
        assert_eq!(c.normalization, Normalization::MaxNormalized);
        assert_eq!(c.argmax(), Some(1));
        assert_eq!(curve(&[0.0, 0.0]).normalized().values, vec![0.0, 0.0]);
    }

    #[test]
    fn unimodality() {
        assert!(curve(&[0.0, 1.0, 3.0, 2.0, 1.0]).is_unimodal(false));
        assert!(curve(&[0.0, 1.0, 1.0, 3.0, 3.0, 1.0]).is_unimodal(false));
        let blip = curve(&[0.0, 1.0, 3.0, 2.0, 2.5, 1.0, 0.5]);
        assert_eq!(blip.sign_changes(), 3);
        assert!(!blip.is_unimodal(false));
        assert!(blip.is_unimodal(true));
        assert!(!curve(&[0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0]).is_unimodal(true));
    }

    #[test]
    fn log_grid() {
        let t = log_spaced(1e-4, 2.0, 60).unwrap();
        assert_eq!(t.len(), 60);
        assert_eq!((t[0], t[59]), (1e-4, 2.0));
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        let ratio = t[1] / t[0];
        assert!((t[31] / t[30] - ratio).abs() < 1e-12);
        assert!(log_spaced(0.0, 1.0, 5).is_err());
        assert!(log_spaced(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn length_mismatch() {
        assert!(ComplexityCurve::new("x", vec![1.0], vec![]).is_err());
    }
}
