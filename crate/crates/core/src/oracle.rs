//! Numerical mutual information through additive Gaussian noise.
//!
//! `I(X; X+Z) = h(X+Z) - h(Z)`, with the output entropy integrated by
//! adaptive Gauss-Legendre quadrature. Computations run in units of the
//! noise standard deviation, so results are exactly invariant to a common
//! rescaling of the input and the noise.
//!
//! A seeded Monte-Carlo estimator gives an independent cross-check of the
//! quadrature path.

use std::f64::consts::{E, LN_2, PI};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::P2pChannel;
use crate::error::{Error, Result};
use crate::quadrature::{self, Settings};
use crate::special::gaussian_tail;

/// Name of the generator behind [`mi_monte_carlo`], for run manifests.
pub const MONTE_CARLO_GENERATOR: &str = "ChaCha12 (rand_chacha), one stream per batch";

/// Samples per Monte-Carlo batch. Each batch owns an independent generator
/// stream so that results do not depend on the thread count.
pub const MONTE_CARLO_BATCH: usize = 1 << 14;

/// Minimum number of Monte-Carlo samples accepted.
pub const MONTE_CARLO_MIN_SAMPLES: usize = 10_000;

/// Log-weights below the dominant one by more than this are dropped from the
/// log-sum-exp; each contributes less than `e^-40` relative.
const LSE_CUTOFF: f64 = 40.0;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// A finite-support input distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteInput {
    atoms: Vec<f64>,
    masses: Vec<f64>,
}

impl DiscreteInput {
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("input needs at least one atom".into()));
        }
        if atoms.len() != masses.len() {
            return Err(Error::InvalidInput(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("atoms must be finite".into()));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("atoms must be strictly increasing".into()));
        }
        if masses.iter().any(|&m| !(m >= 0.0 && m.is_finite())) {
            return Err(Error::InvalidInput("masses must be finite and nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { atoms, masses })
    }

    pub fn point_mass(at: f64) -> Self {
        Self {
            atoms: vec![at],
            masses: vec![1.0],
        }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Entropy of the input in bits.
    pub fn entropy(&self) -> f64 {
        -self.masses.iter().map(|&m| crate::special::xlog2x(m)).sum::<f64>()
    }

    fn support_size(&self) -> usize {
        self.masses.iter().filter(|&&m| m > 0.0).count()
    }
}

/// Controls for the quadrature behind [`mi_discrete`] and [`mi_uniform`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Target absolute error of the mutual information, in bits.
    pub absolute_tolerance: f64,
    /// Integration range beyond the extreme atoms, in noise standard deviations.
    pub support_padding: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            absolute_tolerance: 1e-10,
            support_padding: 10.0,
            max_refinements: 30,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.absolute_tolerance > 0.0 && self.absolute_tolerance.is_finite()) {
            return Err(Error::Domain(format!(
                "quadrature tolerance must be positive, got {}",
                self.absolute_tolerance
            )));
        }
        if !(self.support_padding > 0.0 && self.support_padding.is_finite()) {
            return Err(Error::Domain(format!(
                "support padding must be positive, got {}",
                self.support_padding
            )));
        }
        Ok(())
    }

    fn settings(&self) -> Settings {
        Settings {
            // the integral is accumulated in nats
            absolute_tolerance: self.absolute_tolerance * LN_2,
            max_refinements: self.max_refinements,
        }
    }
}

/// Output density of a discrete input through unit-variance noise, with the
/// input expressed in noise standard deviations.
struct NormalizedMixture {
    atoms: Vec<f64>,
    log_masses: Vec<f64>,
    reach_sq: f64,
}

impl NormalizedMixture {
    fn new(input: &DiscreteInput, sigma: f64) -> Self {
        let (atoms, log_masses): (Vec<f64>, Vec<f64>) = input
            .atoms
            .iter()
            .zip(&input.masses)
            .filter(|(_, &m)| m > 0.0)
            .map(|(&a, &m)| (a / sigma, m.ln()))
            .unzip();
        let max = log_masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = log_masses.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            atoms,
            log_masses,
            reach_sq: 2.0 * (LSE_CUTOFF + (max - min)),
        }
    }

    /// Natural log of the output density at `t`.
    fn log_pdf(&self, t: f64) -> f64 {
        let split = self.atoms.partition_point(|&a| a < t);
        let nearest = match (split.checked_sub(1), self.atoms.get(split)) {
            (Some(l), Some(&r)) => (t - self.atoms[l]).min(r - t),
            (Some(l), None) => t - self.atoms[l],
            (None, Some(&r)) => r - t,
            (None, None) => unreachable!("mixture has at least one atom"),
        };
        let limit = nearest * nearest + self.reach_sq;

        let mut lo = split;
        while lo > 0 {
            let d = t - self.atoms[lo - 1];
            if d * d > limit {
                break;
            }
            lo -= 1;
        }
        let mut hi = split;
        while hi < self.atoms.len() {
            let d = self.atoms[hi] - t;
            if d * d > limit {
                break;
            }
            hi += 1;
        }

        let term = |i: usize| {
            let d = t - self.atoms[i];
            self.log_masses[i] - 0.5 * d * d
        };
        let peak = (lo..hi).map(term).fold(f64::NEG_INFINITY, f64::max);
        if peak == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let sum: f64 = (lo..hi).map(|i| (term(i) - peak).exp()).sum();
        peak + sum.ln() - HALF_LN_TWO_PI
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("noise sigma must be positive, got {sigma}")))
    }
}

/// `-p ln p` from `ln p`, with `0 ln 0 = 0`.
#[inline]
fn entropy_density(log_p: f64) -> f64 {
    if log_p == f64::NEG_INFINITY {
        0.0
    } else {
        -log_p.exp() * log_p
    }
}

/// Natural log of the density of `X + Z`, `Z ~ N(0, sigma²)`, at `y`.
pub fn mixture_log_pdf(input: &DiscreteInput, sigma: f64, y: f64) -> f64 {
    assert!(sigma.is_finite() && sigma > 0.0, "noise sigma must be positive");
    NormalizedMixture::new(input, sigma).log_pdf(y / sigma) - sigma.ln()
}

/// `I(X; X+Z)` in bits for a finite-support input.
pub fn mi_discrete(input: &DiscreteInput, sigma: f64, q: &QuadratureSpec) -> Result<f64> {
    check_sigma(sigma)?;
    q.validate()?;
    if input.support_size() == 1 {
        return Ok(0.0);
    }
    let mix = NormalizedMixture::new(input, sigma);
    let lo = mix.atoms[0] - q.support_padding;
    let hi = mix.atoms[mix.atoms.len() - 1] + q.support_padding;
    let panels = (hi - lo).ceil() as usize;
    let h_out = quadrature::integrate(
        |t| entropy_density(mix.log_pdf(t)),
        lo,
        hi,
        panels,
        q.settings(),
    )?;
    Ok((h_out - 0.5 * (2.0 * PI * E).ln()) / LN_2)
}

/// `I(X; X+Z)` in bits for `X ~ Unif([0, A])`.
pub fn mi_uniform(ch: &P2pChannel, q: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    let a = ch.snr_amplitude();
    if a == 0.0 {
        return Ok(0.0);
    }
    // density of Y/σ: (Φ(t) - Φ(t - a))/a, written with tails on the side
    // where they do not cancel
    let density = |t: f64| {
        let mass = if t < 0.5 * a {
            gaussian_tail(-t) - gaussian_tail(a - t)
        } else {
            gaussian_tail(t - a) - gaussian_tail(t)
        };
        mass / a
    };
    let lo = -q.support_padding;
    let hi = a + q.support_padding;
    let panels = (hi - lo).ceil() as usize;
    let h_out = quadrature::integrate(
        |t| {
            let p = density(t);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        },
        lo,
        hi,
        panels,
        q.settings(),
    )?;
    Ok((h_out - 0.5 * (2.0 * PI * E).ln()) / LN_2)
}

/// Seeded Monte-Carlo estimate of `I(X; X+Z)` with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub bits: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub generator: String,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

/// Average of `-log2 p(X_i + Z_i)` over seeded draws, minus `h(Z)`.
///
/// Batches of [`MONTE_CARLO_BATCH`] samples run in parallel and are reduced
/// in batch order, so the estimate is a pure function of the arguments.
pub fn mi_monte_carlo(
    input: &DiscreteInput,
    sigma: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_sigma(sigma)?;
    if samples < MONTE_CARLO_MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "Monte-Carlo estimate needs at least {MONTE_CARLO_MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let mix = NormalizedMixture::new(input, sigma);
    let picker = WeightedIndex::new(&input.masses)
        .map_err(|e| Error::InvalidInput(format!("cannot sample input: {e}")))?;
    let atoms: Vec<f64> = input.atoms.iter().map(|a| a / sigma).collect();

    let batches = samples.div_ceil(MONTE_CARLO_BATCH);
    let moments = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MONTE_CARLO_BATCH.min(samples - b * MONTE_CARLO_BATCH);
            let mut m = Moments::default();
            for _ in 0..count {
                let x = atoms[picker.sample(&mut rng)];
                let z: f64 = StandardNormal.sample(&mut rng);
                m.push(-mix.log_pdf(x + z) / LN_2);
            }
            m
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge);

    let h_noise = 0.5 * (2.0 * PI * E).log2();
    let variance = moments.m2 / (moments.n - 1.0);
    Ok(MonteCarloEstimate {
        bits: moments.mean - h_noise,
        std_error: (variance / moments.n).sqrt(),
        samples,
        seed,
        generator: MONTE_CARLO_GENERATOR.to_string(),
    })
}
