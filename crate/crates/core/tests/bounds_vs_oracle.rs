//! Closed-form bounds checked against independent numerics: a Gaussian tail
//! integrated by adaptive Simpson, and the mutual-information oracle.

use approx::assert_abs_diff_eq;
use esdu_core::esdu::{self, f_lower, g_upper, lower_components, owb, EsduInput, LowerBranch};
use esdu_core::oracle::{mi_discrete, mi_uniform, QuadratureSpec};
use esdu_core::special::{binary_entropy, db_to_amplitude_ratio, q_function, Probability};
use esdu_core::uniform::{c_lower, e_cap};
use esdu_core::P2pChannel;

/// Adaptive Simpson on `[a, b]`, independent of the library's quadrature.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_x^∞ φ(t) dt`, truncated at `x + 40` where the remainder is below 1e-300.
fn tail_oracle(x: f64) -> f64 {
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if x >= 0.0 {
        simpson(&phi, x, x + 40.0, 1e-15)
    } else {
        1.0 - simpson(&phi, -x, -x + 40.0, 1e-15)
    }
}

fn esdu_in(a: f64, k: usize) -> EsduInput {
    EsduInput::new(a, k).unwrap()
}

#[test]
fn q_function_matches_tail_integral() {
    assert_abs_diff_eq!(tail_oracle(0.25), 0.401_293_674_317_076, epsilon = 1e-12);
    assert_abs_diff_eq!(q_function(0.25).unwrap().get(), 0.401_293_7, epsilon = 1e-7);
    // 0.0752968 is sometimes quoted for Q(1.4374); the tail integral gives 0.0753022
    assert_abs_diff_eq!(tail_oracle(1.4374), 0.075_302_184_402_376, epsilon = 1e-12);
    for i in -60..=60 {
        let x = i as f64 * 0.1;
        assert_abs_diff_eq!(q_function(x).unwrap().get(), tail_oracle(x), epsilon = 1e-12);
    }
}

#[test]
fn fano_bound_from_oracle_tail() {
    // ξ and F1 rebuilt from the independent tail integral
    for (a, k, s) in [(1.0, 3usize, 1.0), (2.8748, 2, 1.0), (12.0, 7, 1.3)] {
        let kf = k as f64;
        let xi = 2.0 * (kf - 1.0) / kf * tail_oracle(a / (2.0 * (kf - 1.0) * s));
        let input = esdu_in(a, k);
        assert_abs_diff_eq!(esdu::xi(&input, s).unwrap().get(), xi, epsilon = 1e-12);
        let h = binary_entropy(Probability::new(xi).unwrap());
        let f1 = kf.log2() - h - xi * (kf - 1.0).log2();
        assert_abs_diff_eq!(esdu::f1(&input, s).unwrap(), f1, epsilon = 1e-12);
    }
    // user-1 rate of the k1 = 2 split at 15 dB
    assert_abs_diff_eq!(esdu::f1(&esdu_in(2.8748, 2), 1.0).unwrap(), 0.614_594, epsilon = 1e-4);
}

fn bound_grid() -> Vec<(f64, usize)> {
    let mut g = Vec::new();
    for d in 0..=20 {
        let a = db_to_amplitude_ratio(d as f64);
        for k in [2, 3, 5, 8, 13, 21] {
            g.push((a, k));
        }
    }
    g
}

#[test]
fn sandwich_against_exact_rate() {
    let q = QuadratureSpec::default();
    for (a, k) in bound_grid() {
        let input = esdu_in(a, k);
        let mi = mi_discrete(&input.to_discrete(), 1.0, &q).unwrap();
        let lo = f_lower(&input, 1.0);
        let hi = g_upper(&input, 1.0);
        assert!(lo - mi <= 1e-6, "F above I at A = {a}, K = {k}: {lo} > {mi}");
        assert!(mi - hi <= 1e-6, "I above G at A = {a}, K = {k}: {mi} > {hi}");
    }
}

#[test]
fn dominates_ozarow_wyner() {
    for (a, k) in bound_grid() {
        let input = esdu_in(a, k);
        assert!(f_lower(&input, 1.0) >= owb(&input, 1.0).unwrap() - 1e-9);
    }
}

#[test]
fn bounds_are_scale_invariant() {
    for (a, k) in bound_grid() {
        for lambda in [0.5, 2.0, 10.0] {
            let base = esdu_in(a, k);
            let scaled = esdu_in(lambda * a, k);
            assert_abs_diff_eq!(f_lower(&base, 1.0), f_lower(&scaled, lambda), epsilon = 1e-12);
            assert_abs_diff_eq!(g_upper(&base, 1.0), g_upper(&scaled, lambda), epsilon = 1e-12);
            assert_abs_diff_eq!(owb(&base, 1.0).unwrap(), owb(&scaled, lambda).unwrap(), epsilon = 1e-12);
            let (c0, c1) = (lower_components(&base, 1.0).unwrap(), lower_components(&scaled, lambda).unwrap());
            assert_abs_diff_eq!(c0.f1, c1.f1, epsilon = 1e-12);
            assert_abs_diff_eq!(c0.f2, c1.f2, epsilon = 1e-12);
            assert_abs_diff_eq!(c0.f3, c1.f3, epsilon = 1e-12);
        }
    }
}

#[test]
fn bounds_within_input_entropy() {
    for (a, k) in bound_grid() {
        let input = esdu_in(a, k);
        let cap = (k as f64).log2();
        for v in [f_lower(&input, 1.0), g_upper(&input, 1.0)] {
            assert!((0.0..=cap).contains(&v));
        }
    }
}

#[test]
fn dominant_lower_branch_by_regime() {
    for (a, k) in bound_grid() {
        let spacing = a / (k - 1) as f64;
        let branch = lower_components(&esdu_in(a, k), 1.0).unwrap().dominant();
        if spacing >= 6.0 {
            assert_eq!(branch, LowerBranch::Fano, "A = {a}, K = {k}");
        }
        // at exactly Δ = σ (0 dB, K = 2) the Fano bound still wins, as the
        // Δ₀ = σ lower-bound series shows at 0 dB
        if spacing < 1.0 {
            assert_ne!(branch, LowerBranch::Fano, "A = {a}, K = {k}");
        }
    }
}

#[test]
fn uniform_rate_within_closed_form_bracket() {
    let q = QuadratureSpec::default();
    for i in 0..=25 {
        let r = 10f64.powf(-2.0 + i as f64 * 0.2);
        let ch = P2pChannel::new(r, 1.0).unwrap();
        let mi = mi_uniform(&ch, &q).unwrap();
        assert!(mi >= c_lower(&ch) - 1e-6, "r = {r}");
        assert!(mi <= e_cap(&ch) + 1e-6, "r = {r}");
    }
}

#[test]
fn lower_bound_series_at_half_sigma_spacing() {
    // Δ₀ = 0.5σ at A = 10σ gives K = 21; values from 30-digit arithmetic
    let a = db_to_amplitude_ratio(10.0);
    let k = esdu::levels_for_spacing(a, 0.5);
    assert_eq!(k, 21);
    assert_abs_diff_eq!(g_upper(&esdu_in(a, k), 1.0), 1.673_326_895_607_07, epsilon = 1e-6);
    assert_abs_diff_eq!(f_lower(&esdu_in(a, k), 1.0), 1.507_420_904_429_86, epsilon = 1e-6);
}
