//! Runner for end-to-end checks that report one PASS/FAIL line each.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

/// What a check body returns: pass flag and a one-line summary.
pub type Verdict = (bool, String);

/// Runs `body`, timing it and turning panics and errors into failures.
/// A `limit` fails the check if the body takes longer.
pub fn run_check(
    id: &str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Result<Verdict, String>,
) -> Outcome {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(Ok(v)) => v,
        Ok(Err(e)) => (false, format!("error: {e}")),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, format!("panic: {msg}"))
        }
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!(
                "; runtime {:.1}s exceeds {:.0}s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            ));
        }
    }
    let outcome = Outcome {
        id: id.to_string(),
        passed,
        detail,
        elapsed,
    };
    println!("{}", format_line(&outcome));
    outcome
}

pub fn format_line(o: &Outcome) -> String {
    format!(
        "{} {} [{:.2}s] {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.elapsed.as_secs_f64(),
        o.detail
    )
}

/// Prints a summary and returns the process exit code.
pub fn summarize(outcomes: &[Outcome]) -> i32 {
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.as_str())
        .collect();
    println!(
        "{} of {} checks passed{}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    if failed.is_empty() {
        0
    } else {
        1
    }
}

/// Relative difference `|a - b| / |b|`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes() {
        assert!(run_check("ok", None, || Ok((true, "fine".into()))).passed);
        assert!(!run_check("err", None, || Err("bad".into())).passed);
        let p = run_check("panic", None, || panic!("boom"));
        assert!(!p.passed && p.detail.contains("boom"));
        let slow = run_check("slow", Some(Duration::ZERO), || {
            std::thread::sleep(Duration::from_millis(2));
            Ok((true, String::new()))
        });
        assert!(!slow.passed);
        assert_eq!(summarize(&[p]), 1);
    }

    #[test]
    fn relative_difference() {
        assert_eq!(rel(1.1, 1.0), 0.10000000000000009);
    }
}
