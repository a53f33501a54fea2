//! Small harness for the acceptance checks: each check yields a verdict
//! and a one-line detail, and the runner prints one PASS/FAIL line per check.

use std::process::ExitCode;
use std::time::Instant;

use ratdyn::{ExtComplex, C64};

pub struct Check {
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Check {
            pass,
            detail: detail.into(),
        }
    }

    /// All parts must pass; details are joined with "; ".
    pub fn all(parts: Vec<Check>) -> Self {
        let pass = parts.iter().all(|c| c.pass);
        let detail = parts
            .into_iter()
            .map(|c| format!("[{}] {}", if c.pass { "ok" } else { "FAILED" }, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Check { pass, detail }
    }
}

pub type CheckFn = fn() -> Check;

/// Runs every check, prints one line each and a summary, and fails the
/// process when any check fails.
pub fn run(checks: &[(u32, &str, CheckFn)]) -> ExitCode {
    let mut failed = Vec::new();
    for (id, name, f) in checks {
        let t = Instant::now();
        let c = f();
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {id:>2} {name} ({:.1} s): {}",
            t.elapsed().as_secs_f64(),
            c.detail
        );
        if !c.pass {
            failed.push(*id);
        }
    }
    println!(
        "acceptance: {} of {} criteria pass{}",
        checks.len() - failed.len(),
        checks.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(", failing: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn fin(re: f64, im: f64) -> ExtComplex {
    ExtComplex::Finite(C64::new(re, im))
}

/// Largest distance from each expected point to its greedily matched found
/// point; infinite when the counts differ.
pub fn match_sets(found: &[C64], expected: &[C64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut left: Vec<C64> = found.to_vec();
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, f)| (k, (f - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        worst = worst.max(d);
        left.remove(k);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn match_sets_is_order_free() {
        let a = [c(0.0, 0.0), c(1.0, 1.0)];
        let b = [c(1.0, 1.0 + 1e-9), c(0.0, 0.0)];
        assert!(match_sets(&a, &b) < 2e-9);
        assert_eq!(match_sets(&a, &b[..1]), f64::INFINITY);
    }

    #[test]
    fn all_joins_parts() {
        let c = Check::all(vec![Check::new(true, "a"), Check::new(false, "b")]);
        assert!(!c.pass);
        assert_eq!(c.detail, "[ok] a; [FAILED] b");
    }
}
