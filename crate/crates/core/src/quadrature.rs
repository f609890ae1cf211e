//! Adaptive composite Gauss-Legendre quadrature on a finite interval.
//!
//! The interval is cut into equal panels, each integrated with a 15-point
//! Gauss-Legendre rule. Every refinement pass compares each unsettled panel
//! with the sum over its two halves and bisects the ones whose discrepancy
//! exceeds their share of the tolerance. Evaluation order is fixed, so the
//! result is bit-identical from run to run.

use std::sync::LazyLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;

/// Nodes on `[-1, 1]` and matching weights.
static RULE: LazyLock<([f64; ORDER], [f64; ORDER])> = LazyLock::new(gauss_legendre_rule);

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre_rule() -> ([f64; ORDER], [f64; ORDER]) {
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    let n = ORDER as f64;
    for i in 0..ORDER {
        // Tricomi's initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(ORDER, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(ORDER, x);
        nodes[ORDER - 1 - i] = x;
        weights[ORDER - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// One 15-point Gauss-Legendre panel on `[a, b]`.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = &*RULE;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub absolute_tolerance: f64,
    pub max_refinements: u32,
}

/// Integrate `f` over `[lo, hi]` starting from `initial_panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    initial_panels: usize,
    settings: Settings,
) -> Result<f64> {
    assert!(hi >= lo, "integration bounds out of order");
    if hi == lo {
        return Ok(0.0);
    }
    let n = initial_panels.max(1);
    let width = hi - lo;
    let h = width / n as f64;
    let mut active: Vec<(f64, f64, f64)> = (0..n)
        .map(|i| {
            let a = lo + h * i as f64;
            let b = if i + 1 == n { hi } else { lo + h * (i + 1) as f64 };
            (a, b, panel(&f, a, b))
        })
        .collect();
    let mut settled = 0.0;
    let mut estimate: f64 = active.iter().map(|p| p.2).sum();

    for _ in 0..settings.max_refinements {
        let mut next = Vec::new();
        for &(a, b, whole) in &active {
            let m = 0.5 * (a + b);
            let left = panel(&f, a, m);
            let right = panel(&f, m, b);
            let halves = left + right;
            let share = settings.absolute_tolerance * (b - a) / width;
            let floor = 64.0 * f64::EPSILON * halves.abs();
            if (halves - whole).abs() <= share.max(floor) {
                settled += halves;
            } else {
                next.push((a, m, left));
                next.push((m, b, right));
            }
        }
        let refined = settled + next.iter().map(|p| p.2).sum::<f64>();
        if next.is_empty() {
            return Ok(refined);
        }
        estimate = refined;
        active = next;
    }

    let previous = estimate;
    let last = settled
        + active
            .iter()
            .map(|&(a, b, _)| {
                let m = 0.5 * (a + b);
                panel(&f, a, m) + panel(&f, m, b)
            })
            .sum::<f64>();
    Err(Error::Convergence {
        refinements: settings.max_refinements,
        previous,
        last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TIGHT: Settings = Settings {
        absolute_tolerance: 1e-12,
        max_refinements: 30,
    };

    #[test]
    fn rule_is_exact_for_degree_29() {
        let (nodes, weights) = &*RULE;
        assert_abs_diff_eq!(weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        for deg in 0..30 {
            let got: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert_abs_diff_eq!(got, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|x: f64| (-0.5 * x * x).exp(), -12.0, 12.0, 4, TIGHT).unwrap();
        assert_abs_diff_eq!(v, (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn sharp_peak_refines() {
        let v = integrate(|x: f64| 1.0 / (1.0 + 1e4 * x * x), -1.0, 1.0, 1, TIGHT).unwrap();
        assert_abs_diff_eq!(v, 2.0 * 100f64.atan() / 100.0, epsilon = 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let settings = Settings {
            absolute_tolerance: 1e-15,
            max_refinements: 2,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, 1, settings).unwrap_err();
        match err {
            Error::Convergence { refinements, previous, last } => {
                assert_eq!(refinements, 2);
                assert!(previous.is_finite() && last.is_finite());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 3, TIGHT).unwrap(), 0.0);
    }
}
