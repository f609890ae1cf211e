//! Rate bounds for evenly-spaced discrete uniform (ESDU) inputs.
//!
//! An ESDU input with span `A` and `K` levels puts mass `1/K` on each of
//! `0, Δ, 2Δ, …, A` where `Δ = A/(K-1)`. Through Gaussian noise its rate is
//! bracketed by [`f_lower`] and [`g_upper`]:
//!
//! * `F = max{F1, F2, F3}` with `F1` from Fano's inequality on the
//!   nearest-neighbour detector, `F2` from dithering the input into a
//!   continuous uniform one, and `F3` from Jensen's inequality on `h(X+Z)`.
//! * `G = min{log2 K, C̄(A,σ), G'}` where `G'` follows from the entropy power
//!   inequality applied to the same dither.

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::DiscreteInput;
use crate::special::{binary_entropy, gaussian_tail, Probability};
use crate::uniform::{c_lower_ratio, c_upper_ratio, e_cap_ratio, TWO_PI_E};

/// `K` equiprobable atoms evenly spread over `[0, span]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsduInput {
    span: f64,
    levels: usize,
}

impl EsduInput {
    pub fn new(span: f64, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidInput("an ESDU input needs at least one level".into()));
        }
        if !(span.is_finite() && span >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "ESDU span must be finite and nonnegative, got {span}"
            )));
        }
        if levels == 1 && span != 0.0 {
            return Err(Error::InvalidInput(format!(
                "a single-level ESDU input sits at 0, got span {span}"
            )));
        }
        Ok(Self { span, levels })
    }

    /// The single-atom input at the origin.
    pub fn silent() -> Self {
        Self { span: 0.0, levels: 1 }
    }

    #[inline]
    pub fn span(&self) -> f64 {
        self.span
    }

    #[inline]
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `Δ = span/(levels-1)`; `None` for a single level.
    pub fn spacing(&self) -> Option<f64> {
        (self.levels >= 2).then(|| self.span / (self.levels - 1) as f64)
    }

    /// No information can be carried: one level or zero span.
    pub fn is_degenerate(&self) -> bool {
        self.levels < 2 || self.span == 0.0
    }

    pub fn atoms(&self) -> Vec<f64> {
        match self.spacing() {
            None => vec![0.0],
            Some(delta) => (0..self.levels).map(|i| delta * i as f64).collect(),
        }
    }

    /// Entropy of the input distribution in bits.
    pub fn entropy(&self) -> f64 {
        if self.is_degenerate() {
            0.0
        } else {
            (self.levels as f64).log2()
        }
    }

    /// The input as a general finite-support distribution. A zero-span input
    /// collapses onto a single atom.
    pub fn to_discrete(&self) -> DiscreteInput {
        if self.is_degenerate() {
            return DiscreteInput::point_mass(0.0);
        }
        let k = self.levels;
        DiscreteInput::new(self.atoms(), vec![1.0 / k as f64; k])
            .expect("ESDU atoms are strictly increasing with unit total mass")
    }
}

/// Number of levels used when sweeping with target spacing `delta0`:
/// `max{2, ⌈A/Δ₀⌉ + 1}`.
pub fn levels_for_spacing(peak: f64, delta0: f64) -> usize {
    assert!(delta0 > 0.0, "target spacing must be positive");
    let k = (peak / delta0).ceil() + 1.0;
    (k as usize).max(2)
}

/// `(K, Δ/σ)` for a constellation with at least two levels.
fn geometry(input: &EsduInput, sigma: f64) -> Result<(f64, f64)> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!("noise sigma must be positive, got {sigma}")));
    }
    let delta = input.spacing().ok_or_else(|| {
        Error::Domain("bound requires an ESDU input with at least two levels".into())
    })?;
    Ok((input.levels as f64, delta / sigma))
}

fn check_sigma(sigma: f64) {
    assert!(
        sigma.is_finite() && sigma > 0.0,
        "noise sigma must be positive, got {sigma}"
    );
}

/// Nearest-neighbour symbol error probability `2(K-1)/K · Q(Δ/(2σ))`.
pub fn xi(input: &EsduInput, sigma: f64) -> Result<Probability> {
    let (k, d) = geometry(input, sigma)?;
    Probability::new(2.0 * (k - 1.0) / k * gaussian_tail(0.5 * d))
}

/// Fano bound `log2 K - H(ξ) - ξ log2(K-1)`.
pub fn f1(input: &EsduInput, sigma: f64) -> Result<f64> {
    let (k, _) = geometry(input, sigma)?;
    let p = xi(input, sigma)?;
    Ok(k.log2() - binary_entropy(p) - p.get() * (k - 1.0).log2())
}

/// Dither bound `C̲(KΔ, σ) - E(Δ, σ)`.
pub fn f2(input: &EsduInput, sigma: f64) -> Result<f64> {
    let (k, d) = geometry(input, sigma)?;
    Ok(c_lower_ratio(k * d) - e_cap_ratio(d))
}

/// Jensen bound `-log2( √(e/2)/K² · Σ_{i,j} exp(-(i-j)²Δ²/(4σ²)) )`.
pub fn f3(input: &EsduInput, sigma: f64) -> Result<f64> {
    let (k, d) = geometry(input, sigma)?;
    let levels = input.levels;
    // Σ_{i,j} = Σ_d (K - |d|) exp(-d²Δ²/(4σ²)); terms decrease in |d|.
    let rate = 0.25 * d * d;
    let mut sum = k;
    for gap in 1..levels {
        let g = gap as f64;
        let term = 2.0 * (k - g) * (-rate * g * g).exp();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    Ok(2.0 * k.log2() - sum.log2() - 0.5 * (0.5 * E).log2())
}

/// Which of the three lower bounds attains the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBranch {
    Fano,
    Dither,
    Jensen,
}

/// Raw, unclamped values of the three lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerComponents {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl LowerComponents {
    pub fn max(&self) -> f64 {
        self.f1.max(self.f2).max(self.f3)
    }

    /// Ties resolve in the order Fano, Dither, Jensen.
    pub fn dominant(&self) -> LowerBranch {
        let m = self.max();
        if self.f1 == m {
            LowerBranch::Fano
        } else if self.f2 == m {
            LowerBranch::Dither
        } else {
            LowerBranch::Jensen
        }
    }
}

pub fn lower_components(input: &EsduInput, sigma: f64) -> Result<LowerComponents> {
    Ok(LowerComponents {
        f1: f1(input, sigma)?,
        f2: f2(input, sigma)?,
        f3: f3(input, sigma)?,
    })
}

/// Lower bound `F = max{F1, F2, F3}` on `I(X; X+Z)`, clamped at zero.
///
/// Degenerate inputs (one level or zero span) give `0`.
///
/// # Panics
///
/// If `sigma` is not finite and positive.
pub fn f_lower(input: &EsduInput, sigma: f64) -> f64 {
    check_sigma(sigma);
    if input.is_degenerate() {
        return 0.0;
    }
    let c = lower_components(input, sigma).expect("non-degenerate input has two levels");
    c.max().max(0.0)
}

/// Ozarow-Wyner-B reference bound
/// `log2 K - ½ log2(2πe/12) - ½ log2(1 + 12(K-1)²σ²/A²)`.
pub fn owb(input: &EsduInput, sigma: f64) -> Result<f64> {
    let (k, d) = geometry(input, sigma)?;
    if input.span == 0.0 {
        return Err(Error::Domain("Ozarow-Wyner-B bound needs a positive span".into()));
    }
    Ok(k.log2() - 0.5 * (TWO_PI_E / 12.0).log2() - 0.5 * (12.0 / (d * d)).ln_1p() / LN_2)
}

/// Entropy-power bound `½ log2( 2^{2E(KΔ,σ)} - Δ²/(2πe σ²) )`.
///
/// The argument of the logarithm is at least `1` because `E(KΔ,σ)` dominates
/// `C̲(KΔ,σ)`; a non-positive value is reported as [`Error::Invariant`].
pub fn g_prime(input: &EsduInput, sigma: f64) -> Result<f64> {
    let (k, d) = geometry(input, sigma)?;
    let arg = (2.0 * e_cap_ratio(k * d) * LN_2).exp() - d * d / TWO_PI_E;
    if !(arg > 0.0) {
        return Err(Error::Invariant(format!(
            "entropy-power argument {arg} is not positive for span {} with {} levels at sigma {sigma}",
            input.span, input.levels
        )));
    }
    Ok(0.5 * arg.log2())
}

/// Upper bound `G = min{log2 K, C̄(A,σ), G'}` on `I(X; X+Z)`.
///
/// Degenerate inputs give `0`.
///
/// # Panics
///
/// If `sigma` is not finite and positive, or if the entropy-power argument
/// of [`g_prime`] is not positive (which cannot happen for valid inputs).
pub fn g_upper(input: &EsduInput, sigma: f64) -> f64 {
    check_sigma(sigma);
    if input.is_degenerate() {
        return 0.0;
    }
    let entropy = (input.levels as f64).log2();
    let cap = c_upper_ratio(input.span / sigma);
    let epi = match g_prime(input, sigma) {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    };
    entropy.min(cap).min(epi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::db_to_amplitude_ratio;
    use approx::assert_abs_diff_eq;

    fn esdu(a: f64, k: usize) -> EsduInput {
        EsduInput::new(a, k).unwrap()
    }

    #[test]
    fn construction() {
        assert!(EsduInput::new(1.0, 0).is_err());
        assert!(EsduInput::new(1.0, 1).is_err());
        assert!(EsduInput::new(-1.0, 3).is_err());
        assert!(EsduInput::new(f64::NAN, 3).is_err());
        assert_eq!(esdu(1.0, 3).atoms(), vec![0.0, 0.5, 1.0]);
        assert_eq!(esdu(0.0, 1).spacing(), None);
        assert_eq!(esdu(0.0, 4).to_discrete().atoms(), &[0.0]);
        assert_eq!(esdu(2.0, 5).to_discrete().atoms().len(), 5);
    }

    #[test]
    fn sweep_level_rule() {
        assert_eq!(levels_for_spacing(1.0, 0.5), 3);
        assert_eq!(levels_for_spacing(10.0, 0.5), 21);
        assert_eq!(levels_for_spacing(0.0, 0.5), 2);
        assert_eq!(levels_for_spacing(0.3, 1.0), 2);
        assert_eq!(levels_for_spacing(db_to_amplitude_ratio(15.0), 3.0), 12);
    }

    #[test]
    fn xi_values() {
        assert_abs_diff_eq!(xi(&esdu(1.0, 3), 1.0).unwrap().get(), 0.535_058_232_422_768, epsilon = 1e-12);
        assert_abs_diff_eq!(xi(&esdu(2.8748, 2), 1.0).unwrap().get(), 0.075_302_184_402_376, epsilon = 1e-12);
        assert!(xi(&esdu(1e3, 2), 1.0).unwrap().get() < 1e-100);
        assert!(xi(&esdu(0.0, 1), 1.0).is_err());
    }

    #[test]
    fn lower_component_values() {
        let i = esdu(1.0, 3);
        assert_abs_diff_eq!(f1(&i, 1.0).unwrap(), 0.053_453_554_141_339, epsilon = 1e-12);
        assert_abs_diff_eq!(f2(&i, 1.0).unwrap(), 0.074_395_772_770_337, epsilon = 1e-12);
        assert_abs_diff_eq!(f3(&i, 1.0).unwrap(), -0.107_182_820_459_483, epsilon = 1e-12);
        assert_abs_diff_eq!(f1(&esdu(2.8748, 2), 1.0).unwrap(), 0.614_594_139_577_740, epsilon = 1e-12);
        assert_abs_diff_eq!(f1(&esdu(1e3, 2), 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f2(&esdu(11.2938, 5), 1.0).unwrap(), 1.464_135_969_294_56, epsilon = 1e-12);
        assert_eq!(f2(&esdu(0.0, 2), 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(f3(&esdu(31.6228, 12), 2.0).unwrap(), 2.149_753_123_332_429, epsilon = 1e-12);
        assert_abs_diff_eq!(f3(&esdu(9.0351, 5), 1.0).unwrap(), 1.560_386_488_903_249, epsilon = 1e-12);
        for f in [f1, f2, f3] {
            assert!(f(&EsduInput::silent(), 1.0).is_err());
        }
    }

    #[test]
    fn f3_matches_double_sum() {
        for (a, k, s) in [(1.0, 3, 1.0), (7.5, 9, 0.7), (31.6228, 12, 2.0), (3.0, 40, 1.0)] {
            let input = esdu(a, k);
            let delta = a / (k - 1) as f64;
            let mut sum = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let d = (i as f64 - j as f64) * delta;
                    sum += (0.5 * E).sqrt() / (k * k) as f64 * (-d * d / (4.0 * s * s)).exp();
                }
            }
            assert_abs_diff_eq!(f3(&input, s).unwrap(), -sum.log2(), epsilon = 1e-12);
        }
    }

    #[test]
    fn f_lower_values() {
        assert_abs_diff_eq!(f_lower(&esdu(1.0, 3), 1.0), 0.074_395_772_770_336_9, epsilon = 1e-9);
        let a15 = db_to_amplitude_ratio(15.0);
        assert_abs_diff_eq!(f_lower(&esdu(a15, 12), 1.0), 3.061_828_197_823_85, epsilon = 1e-6);
        assert_eq!(f_lower(&EsduInput::silent(), 3.0), 0.0);
        assert_eq!(f_lower(&esdu(0.0, 7), 3.0), 0.0);
    }

    #[test]
    fn owb_values() {
        assert_abs_diff_eq!(owb(&esdu(1.0, 3), 1.0).unwrap(), -1.477_006_756_156_511, epsilon = 1e-12);
        assert_abs_diff_eq!(owb(&esdu(10.0, 3), 1.0).unwrap(), 1.047_549_577_973_981, epsilon = 1e-12);
        let limit = 3f64.log2() - 0.5 * (TWO_PI_E / 12.0).log2();
        assert_abs_diff_eq!(owb(&esdu(1e7, 3), 1.0).unwrap(), limit, epsilon = 1e-12);
        assert!(owb(&esdu(0.0, 3), 1.0).is_err());
    }

    #[test]
    fn upper_values() {
        let i = esdu(1.0, 3);
        assert_abs_diff_eq!(g_prime(&i, 1.0).unwrap(), 0.115_016_970_696_966, epsilon = 1e-12);
        assert_abs_diff_eq!(g_upper(&i, 1.0), 0.115_016_970_696_966, epsilon = 1e-9);
        assert_abs_diff_eq!(g_prime(&esdu(2.8748, 2), 2.0).unwrap(), 0.324_341_018_146_312, epsilon = 1e-12);
        assert_abs_diff_eq!(g_upper(&esdu(2.8748, 2), 2.0), 0.300_386_871_366_954, epsilon = 1e-12);
        assert_abs_diff_eq!(g_upper(&esdu(10.0, 21), 1.0), 1.673_326_895_607_07, epsilon = 1e-6);
        assert_eq!(g_prime(&esdu(0.0, 2), 1.0).unwrap(), 0.0);
        assert_eq!(g_upper(&EsduInput::silent(), 1.0), 0.0);
    }

    #[test]
    fn dominant_branch_ties_prefer_fano() {
        let c = LowerComponents { f1: 1.0, f2: 1.0, f3: 0.0 };
        assert_eq!(c.dominant(), LowerBranch::Fano);
        let c = LowerComponents { f1: 0.0, f2: 0.5, f3: 0.7 };
        assert_eq!(c.dominant(), LowerBranch::Jensen);
    }

    #[test]
    #[should_panic]
    fn f_lower_rejects_bad_sigma() {
        f_lower(&esdu(1.0, 3), 0.0);
    }
}
