//! Scalar special functions shared by every bound formula.
//!
//! The Gaussian tail is computed from W. J. Cody's rational Chebyshev
//! approximations of `erfc`, which are accurate to a few ulps over the whole
//! real line. Logarithms are base 2 unless a name says otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!("probability {value} outside [0, 1]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    #[inline]
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Standard Gaussian tail `Q(x) = P[N(0,1) > x]`.
pub fn q_function(x: f64) -> Result<Probability> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Q-function argument {x} is not finite")));
    }
    Ok(Probability(gaussian_tail(x)))
}

/// Unchecked Gaussian tail used on hot paths. `x` must not be NaN.
#[inline]
pub(crate) fn gaussian_tail(x: f64) -> f64 {
    0.5 * erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: Probability) -> f64 {
    let p = p.get();
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// `x log2 x` extended continuously to `x = 0`.
#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Peak-to-noise ratio from decibels: `A/σ = 10^(db/10)`.
pub fn db_to_amplitude_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

// Cody, "Rational Chebyshev approximations for the error function",
// Math. Comp. 23 (1969). Coefficients as published in SPECFUN (CALERF).

const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302_02,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const ERF_B: [f64; 4] = [
    23.601_290_952_344_12,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_170_6,
];
const ERFC_C: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_1,
    881.952_221_241_769_1,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_5,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const ERFC_D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_7,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
const ERFC_P: [f64; 6] = [
    0.305_326_634_961_232_36,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_26,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const ERFC_Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const ERF_SMALL: f64 = 0.468_75;
const ERFC_UNDERFLOW: f64 = 26.543;

/// `exp(-y^2)` with the square split so that the rounding error of `y*y`
/// does not get amplified for large `y`.
#[inline]
fn exp_neg_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    (-head * head).exp() * (-(y - head) * (y + head)).exp()
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= ERF_SMALL {
        let z = y * y;
        let num = (((ERF_A[4] * z + ERF_A[0]) * z + ERF_A[1]) * z + ERF_A[2]) * z + ERF_A[3];
        let den = (((z + ERF_B[0]) * z + ERF_B[1]) * z + ERF_B[2]) * z + ERF_B[3];
        return 1.0 - x * num / den;
    }
    let upper = if y >= ERFC_UNDERFLOW {
        0.0
    } else if y <= 4.0 {
        let mut num = ERFC_C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + ERFC_C[i]) * y;
            den = (den + ERFC_D[i]) * y;
        }
        (num + ERFC_C[7]) / (den + ERFC_D[7]) * exp_neg_square(y)
    } else {
        let z = 1.0 / (y * y);
        let mut num = ERFC_P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + ERFC_P[i]) * z;
            den = (den + ERFC_Q[i]) * z;
        }
        let r = z * (num + ERFC_P[4]) / (den + ERFC_Q[4]);
        (FRAC_1_SQRT_PI - r) / y * exp_neg_square(y)
    };
    if x < 0.0 {
        2.0 - upper
    } else {
        upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0).unwrap().get(), 0.5);
    }

    #[test]
    fn q_rejects_non_finite() {
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
        assert!(q_function(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn erfc_reference_values() {
        // Abramowitz & Stegun table 7.1 and high-precision values.
        assert_abs_diff_eq!(erfc(0.5), 0.479_500_122_186_953_5, epsilon = 1e-16);
        assert_abs_diff_eq!(erfc(1.0), 0.157_299_207_050_285_13, epsilon = 1e-16);
        assert_abs_diff_eq!(erfc(3.0), 2.209_049_699_858_544e-5, epsilon = 1e-18);
        assert!((erfc(6.0) / 2.151_973_671_249_891_3e-17 - 1.0).abs() < 1e-13);
        assert_abs_diff_eq!(erfc(-1.0), 1.842_700_792_949_715, epsilon = 1e-15);
        assert_eq!(erfc(30.0), 0.0);
    }

    #[test]
    fn q_monotone_on_dense_grid() {
        // below -6 the values sit within a few ulps of 1
        let mut prev = q_function(-6.0).unwrap().get();
        for i in 1..=14_000 {
            let x = -6.0 + i as f64 * 1e-3;
            let q = q_function(x).unwrap().get();
            assert!(q < prev, "Q not decreasing at {x}");
            prev = q;
        }
    }

    #[test]
    fn q_symmetry_on_grid() {
        for i in -400..=400 {
            let x = i as f64 * 0.025;
            let s = gaussian_tail(x) + gaussian_tail(-x);
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn binary_entropy_edges() {
        assert_eq!(binary_entropy(Probability::new(0.5).unwrap()), 1.0);
        assert_eq!(binary_entropy(Probability::new(0.0).unwrap()), 0.0);
        assert_eq!(binary_entropy(Probability::new(1.0).unwrap()), 0.0);
        assert!(Probability::new(1.5).is_err());
        assert!(Probability::new(-1e-12).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn binary_entropy_direct_value() {
        // -p log2 p - (1-p) log2 (1-p) at p = 0.0753, evaluated term by term.
        let p: f64 = 0.0753;
        let expected = -p * p.ln() / 2f64.ln() - (1.0 - p) * (1.0 - p).ln() / 2f64.ln();
        let h = binary_entropy(Probability::new(p).unwrap());
        assert_abs_diff_eq!(h, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(h, 0.385_398, epsilon = 1e-6);
    }

    #[test]
    fn decibel_convention() {
        assert_eq!(db_to_amplitude_ratio(0.0), 1.0);
        assert_eq!(db_to_amplitude_ratio(10.0), 10.0);
        assert_abs_diff_eq!(db_to_amplitude_ratio(15.0), 31.622_776_6, epsilon = 1e-7);
    }

    proptest! {
        #[test]
        fn q_plus_mirror_is_one(x in -30.0f64..30.0) {
            prop_assert!((gaussian_tail(x) + gaussian_tail(-x) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn entropy_symmetric(k in 0u32..=(1 << 20)) {
            // dyadic grid so that 1 - (1 - p) == p
            let p = f64::from(k) / f64::from(1u32 << 20);
            let a = binary_entropy(Probability::new(p).unwrap());
            let b = binary_entropy(Probability::new(p).unwrap().complement());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn entropy_concave(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
            let h = |x: f64| binary_entropy(Probability::new(x).unwrap());
            prop_assert!(h(0.5 * (p + q)) + 1e-15 >= 0.5 * (h(p) + h(q)));
        }
    }
}
