//! Rate bounds for a continuous uniform input `X ~ Unif([0, A])`.
//!
//! `c_lower <= I(X; X+Z) <= e_cap <= c_upper`, and `c_lower`/`c_upper` also
//! bracket the capacity of the peak-constrained channel. All three depend on
//! the channel only through `A/σ`.

use std::f64::consts::{E, LN_2, PI};

use crate::channel::P2pChannel;

/// `2πe`, the entropy-power constant of a unit Gaussian.
pub(crate) const TWO_PI_E: f64 = 2.0 * PI * E;

/// `½ log2(1 + x)` without cancellation for small `x`.
#[inline]
pub(crate) fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

pub(crate) fn c_lower_ratio(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    half_log2_1p(r * r / TWO_PI_E)
}

pub(crate) fn c_upper_ratio(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let quadratic = half_log2_1p(r * r / 4.0);
    let linear = (r / TWO_PI_E.sqrt()).ln_1p() / LN_2;
    quadratic.min(linear)
}

pub(crate) fn variance_bound_ratio(r: f64) -> f64 {
    half_log2_1p(r * r / 12.0)
}

pub(crate) fn e_cap_ratio(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    c_upper_ratio(r).min(variance_bound_ratio(r))
}

/// `½ log2(1 + A²/(2πe σ²))`.
pub fn c_lower(ch: &P2pChannel) -> f64 {
    c_lower_ratio(ch.snr_amplitude())
}

/// `min{ ½ log2(1 + A²/(4σ²)), log2(1 + A/(√(2πe) σ)) }`.
pub fn c_upper(ch: &P2pChannel) -> f64 {
    c_upper_ratio(ch.snr_amplitude())
}

/// `min{ c_upper, ½ log2(1 + A²/(12σ²)) }`; the second term is the Gaussian
/// maximum-entropy bound at the variance of `X + Z`.
pub fn e_cap(ch: &P2pChannel) -> f64 {
    e_cap_ratio(ch.snr_amplitude())
}
