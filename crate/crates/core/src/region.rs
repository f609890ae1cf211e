//! Two-user broadcast rate regions built from superposed ESDU inputs.
//!
//! User 2 (the weaker receiver) gets a coarse ESDU constellation, user 1 a
//! fine one nested inside each coarse cell. Their sum is itself an ESDU input
//! over `[0, A]` with `k1·k2` levels, decoded with successive interference
//! cancellation at the stronger receiver.
//!
//! Regions are convex polygons holding the origin and both axis intercepts,
//! stored clockwise from the origin: `(0,0)`, `(0, max r2)`, … frontier …,
//! `(max r1, 0)`. Everything componentwise below the frontier is implied.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::BcChannel;
use crate::error::{Error, Result};
use crate::esdu::{f_lower, g_upper, levels_for_spacing, EsduInput};
use crate::oracle::{mi_discrete, QuadratureSpec};
use crate::uniform::{c_upper_ratio, half_log2_1p};

/// Alphabet sizes of the two superposed layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SplitConfig {
    k1: usize,
    k2: usize,
}

impl SplitConfig {
    pub fn new(k1: usize, k2: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(Error::InvalidInput(format!(
                "layer sizes must be at least 1, got k1 = {k1}, k2 = {k2}"
            )));
        }
        if k1 * k2 < 2 {
            return Err(Error::InvalidInput(
                "the composite alphabet needs at least two levels".into(),
            ));
        }
        Ok(Self { k1, k2 })
    }

    #[inline]
    pub fn k1(&self) -> usize {
        self.k1
    }

    #[inline]
    pub fn k2(&self) -> usize {
        self.k2
    }

    /// Composite alphabet size `k1·k2`.
    #[inline]
    pub fn levels(&self) -> usize {
        self.k1 * self.k2
    }

    /// User-1 layer: `k1` levels spaced by `Δ = A/(k1·k2 - 1)`.
    pub fn user1_input(&self, peak: f64) -> EsduInput {
        if self.k1 == 1 {
            return EsduInput::silent();
        }
        let span = (self.k1 - 1) as f64 * peak / (self.levels() - 1) as f64;
        EsduInput::new(span, self.k1).expect("valid layer")
    }

    /// User-2 layer: `k2` levels spaced by `k1·Δ`.
    pub fn user2_input(&self, peak: f64) -> EsduInput {
        if self.k2 == 1 {
            return EsduInput::silent();
        }
        let span = ((self.k2 - 1) * self.k1) as f64 * peak / (self.levels() - 1) as f64;
        EsduInput::new(span, self.k2).expect("valid layer")
    }

    /// The transmitted signal `X1 + X2 ~ ESDU(A, k1·k2)`.
    pub fn composite(&self, peak: f64) -> EsduInput {
        EsduInput::new(peak, self.levels()).expect("valid composite")
    }

    /// Atom-wise sums of the two layers, in layer order (user 2 outer).
    pub fn layer_sums(&self, peak: f64) -> Vec<f64> {
        let x1 = self.user1_input(peak).atoms();
        let x2 = self.user2_input(peak).atoms();
        let mut sums = Vec::with_capacity(self.levels());
        for b in &x2 {
            for a in &x1 {
                sums.push(a + b);
            }
        }
        sums
    }
}

/// An achievable (or bounding) pair of rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    /// Negative components are clamped to zero.
    pub fn new(r1: f64, r2: f64) -> Self {
        Self {
            r1: r1.max(0.0),
            r2: r2.max(0.0),
        }
    }

    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    /// Componentwise `self <= other + tol`.
    pub fn is_dominated_by(&self, other: &RatePair, tol: f64) -> bool {
        self.r1 <= other.r1 + tol && self.r2 <= other.r2 + tol
    }
}

/// Convex, origin-anchored polygon of rate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    vertices: Vec<RatePair>,
}

impl RateRegion {
    pub fn origin() -> Self {
        Self {
            vertices: vec![RatePair::ORIGIN],
        }
    }

    pub fn vertices(&self) -> &[RatePair] {
        &self.vertices
    }

    /// The frontier without the origin, from the r2 axis to the r1 axis.
    pub fn frontier(&self) -> &[RatePair] {
        &self.vertices[1.min(self.vertices.len())..]
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.r2).fold(0.0, f64::max)
    }

    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        region_contains(self, p, tol)
    }
}

/// Whether inner sweeps use the closed-form bounds or exact mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Analytic,
    Exact,
}

/// Parameters of the region sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Target spacings, in units of `sigma1`.
    pub delta0_grid: Vec<f64>,
    /// Points of the uniform `ρ ∈ [0, 1]` grid of the outer bound.
    pub rho_steps: usize,
    pub quadrature: QuadratureSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            delta0_grid: (1..=20).map(|i| 0.5 * i as f64).collect(),
            rho_steps: 201,
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(bad) = self.delta0_grid.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::Domain(format!("target spacing must be positive, got {bad}")));
        }
        if self.rho_steps < 2 {
            return Err(Error::Domain(format!(
                "rho grid needs at least 2 points, got {}",
                self.rho_steps
            )));
        }
        self.quadrature.validate()
    }
}

/// One evaluated split of an inner sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Target spacing in units of `sigma1`.
    pub delta0: f64,
    pub split: SplitConfig,
    pub rate: RatePair,
}

/// Result of [`sweep_inner`]: the hull and the points it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSweep {
    pub region: RateRegion,
    pub points: Vec<SweepPoint>,
}

impl InnerSweep {
    /// The first sweep point that produced `vertex`, if any. Origin and
    /// synthetic axis projections have none.
    pub fn provenance(&self, vertex: &RatePair) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.rate == *vertex)
    }
}

/// Closed-form inner-bound point: user 1 gets `F` of its layer at `sigma1`,
/// user 2 gets `F` of the composite minus `G` of the user-1 layer at `sigma2`.
pub fn analytic_inner_point(ch: &BcChannel, split: SplitConfig) -> RatePair {
    let x1 = split.user1_input(ch.peak());
    let x = split.composite(ch.peak());
    let r1 = f_lower(&x1, ch.sigma1());
    let r2 = f_lower(&x, ch.sigma2()) - g_upper(&x1, ch.sigma2());
    RatePair::new(r1, r2)
}

/// Inner-bound point with the mutual informations evaluated numerically.
pub fn exact_inner_point(ch: &BcChannel, split: SplitConfig, q: &QuadratureSpec) -> Result<RatePair> {
    let wrap = |source: Error| Error::AtSplit {
        k1: split.k1,
        k2: split.k2,
        source: Box::new(source),
    };
    let x1 = split.user1_input(ch.peak()).to_discrete();
    let x = split.composite(ch.peak()).to_discrete();
    let r1 = mi_discrete(&x1, ch.sigma1(), q).map_err(wrap)?;
    let total = mi_discrete(&x, ch.sigma2(), q).map_err(wrap)?;
    let interference = mi_discrete(&x1, ch.sigma2(), q).map_err(wrap)?;
    Ok(RatePair::new(r1, total - interference))
}

/// Smallest `k2 >= 1` with `k1·k2 - 1 >= ratio` and `k1·k2 >= 2`.
pub fn k2_for(k1: usize, ratio: f64) -> usize {
    assert!(k1 >= 1);
    let needed = ((ratio + 1.0) / k1 as f64).ceil().max(1.0) as usize;
    if k1 * needed < 2 {
        2
    } else {
        needed
    }
}

/// Splits visited for one target spacing: `k1 = 1..=K` with
/// `K = max{2, ⌈A/Δ₀⌉ + 1}` and the matching smallest `k2`.
pub fn splits_for_spacing(peak: f64, delta0: f64) -> Vec<SplitConfig> {
    let kmax = levels_for_spacing(peak, delta0);
    let ratio = peak / delta0;
    (1..=kmax)
        .map(|k1| SplitConfig {
            k1,
            k2: k2_for(k1, ratio),
        })
        .collect()
}

/// Inner region over the whole spacing grid, hulled across all points.
pub fn sweep_inner(ch: &BcChannel, cfg: &SweepConfig, mode: SweepMode) -> Result<InnerSweep> {
    cfg.validate()?;
    let cells: Vec<(f64, SplitConfig)> = cfg
        .delta0_grid
        .iter()
        .flat_map(|&d0| {
            splits_for_spacing(ch.peak(), d0 * ch.sigma1())
                .into_iter()
                .map(move |s| (d0, s))
        })
        .collect();

    // different spacings often revisit a split; evaluate each once
    let unique: Vec<SplitConfig> = cells
        .iter()
        .map(|c| c.1)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rates: Vec<RatePair> = match mode {
        SweepMode::Analytic => unique.par_iter().map(|&s| analytic_inner_point(ch, s)).collect(),
        SweepMode::Exact => unique
            .par_iter()
            .map(|&s| exact_inner_point(ch, s, &cfg.quadrature))
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<_>>()?,
    };

    let points: Vec<SweepPoint> = cells
        .into_iter()
        .map(|(delta0, split)| {
            let i = unique.binary_search(&split).expect("split was evaluated");
            SweepPoint {
                delta0,
                split,
                rate: rates[i],
            }
        })
        .collect();
    let region = frontier_hull(&points.iter().map(|p| p.rate).collect::<Vec<_>>());
    Ok(InnerSweep { region, points })
}

/// Corner of the outer-bound rectangle for power split `rho`.
pub fn outer_corner(ch: &BcChannel, rho: f64) -> RatePair {
    let s2 = ch.sigma2();
    let weak_share = c_upper_ratio(rho * ch.peak() / s2);
    let ratio = s2 / ch.sigma1();
    // 2^{2C̄} - 1 with C̄ in bits
    let snr = (2.0 * weak_share * std::f64::consts::LN_2).exp_m1();
    let r1 = half_log2_1p(ratio * ratio * snr);
    let r2 = c_upper_ratio(ch.peak() / s2) - weak_share;
    RatePair::new(r1, r2)
}

/// Outer bound: hull of the `ρ`-indexed rectangles, cut by the single-user
/// caps and the sum-rate cap of the stronger link.
pub fn outer_region(ch: &BcChannel, cfg: &SweepConfig) -> Result<RateRegion> {
    cfg.validate()?;
    let n = cfg.rho_steps - 1;
    let corners: Vec<RatePair> = (0..=n)
        .map(|j| outer_corner(ch, j as f64 / n as f64))
        .collect();
    let hull = frontier_hull(&corners);

    let cap1 = c_upper_ratio(ch.peak() / ch.sigma1());
    let cap2 = c_upper_ratio(ch.peak() / ch.sigma2());
    let mut poly: Vec<(f64, f64)> = hull.vertices.iter().map(|v| (v.r1, v.r2)).collect();
    for (a, b, c) in [(1.0, 0.0, cap1), (0.0, 1.0, cap2), (1.0, 1.0, cap1)] {
        poly = clip_half_plane(&poly, a, b, c);
    }
    let clipped: Vec<RatePair> = poly.into_iter().map(|(x, y)| RatePair::new(x, y)).collect();
    Ok(frontier_hull(&clipped))
}

/// Sutherland-Hodgman step keeping `a·x + b·y <= c`.
fn clip_half_plane(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let n = poly.len();
    let side = |p: (f64, f64)| a * p.0 + b * p.1 - c;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (sc, sn) = (side(cur), side(next));
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0) {
            let t = sc / (sc - sn);
            out.push((cur.0 + t * (next.0 - cur.0), cur.1 + t * (next.1 - cur.1)));
        }
    }
    out
}

#[inline]
fn cross(o: &RatePair, a: &RatePair, b: &RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Convex hull of `points` together with the origin and both axis
/// projections, as a clockwise vertex list starting at the origin.
/// Collinear vertices are dropped.
pub fn frontier_hull(points: &[RatePair]) -> RateRegion {
    assert!(
        points.iter().all(|p| p.r1 >= 0.0 && p.r2 >= 0.0),
        "rate pairs must be finite and nonnegative"
    );
    let r1max = points.iter().map(|p| p.r1).fold(0.0, f64::max);
    let r2max = points.iter().map(|p| p.r2).fold(0.0, f64::max);
    if r1max == 0.0 && r2max == 0.0 {
        return RateRegion::origin();
    }

    let mut pts: Vec<RatePair> = points.to_vec();
    pts.push(RatePair::ORIGIN);
    pts.push(RatePair { r1: r1max, r2: 0.0 });
    pts.push(RatePair { r1: 0.0, r2: r2max });
    pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
    pts.dedup();

    // upper chain from the origin, keeping strict clockwise turns only
    let mut chain: Vec<RatePair> = Vec::with_capacity(pts.len());
    for p in pts {
        while chain.len() >= 2 && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], &p) >= 0.0 {
            chain.pop();
        }
        chain.push(p);
    }
    let corner = RatePair { r1: r1max, r2: 0.0 };
    let last = *chain.last().expect("chain holds the origin");
    if last != corner && corner != RatePair::ORIGIN {
        if chain.len() >= 2 && cross(&chain[chain.len() - 2], &last, &corner) >= 0.0 {
            chain.pop();
        }
        chain.push(corner);
    }
    RateRegion { vertices: chain }
}

fn segment_distance(a: &RatePair, b: &RatePair, p: &RatePair) -> f64 {
    let (ex, ey) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = ex * ex + ey * ey;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.r1 - a.r1) * ex + (p.r2 - a.r2) * ey) / len2).clamp(0.0, 1.0)
    };
    let (dx, dy) = (p.r1 - a.r1 - t * ex, p.r2 - a.r2 - t * ey);
    dx.hypot(dy)
}

/// How far `p` lies outside `region`: the largest signed distance past an
/// edge line, or the distance to a degenerate region. Nonpositive inside.
pub fn boundary_excess(region: &RateRegion, p: &RatePair) -> f64 {
    let v = &region.vertices;
    match v.len() {
        0 => f64::INFINITY,
        1 => segment_distance(&v[0], &v[0], p),
        2 => segment_distance(&v[0], &v[1], p),
        n => (0..n)
            .map(|i| {
                let a = &v[i];
                let b = &v[(i + 1) % n];
                // clockwise order: outside is to the left of each edge
                cross(a, b, p) / (b.r1 - a.r1).hypot(b.r2 - a.r2)
            })
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Whether `p` lies in `region` or within `tol` of its boundary.
pub fn region_contains(region: &RateRegion, p: &RatePair, tol: f64) -> bool {
    boundary_excess(region, p) <= tol
}
