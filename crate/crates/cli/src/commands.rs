use esdu_core::esdu::{self, f_lower, g_upper, lower_components, owb, EsduInput};
use esdu_core::oracle::{mi_discrete, mi_monte_carlo};
use esdu_core::region::{outer_region, sweep_inner, InnerSweep};
use esdu_core::uniform::{c_lower, c_upper, e_cap};
use esdu_core::{BcChannel, P2pChannel, QuadratureSpec, RateRegion, SweepConfig, SweepMode};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::format::{Cell, Output, Table};
use crate::manifest::RunManifest;
use crate::params::{positive, Peak};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P2pParams {
    pub peaks: Vec<Peak>,
    pub sigma: f64,
    /// Target spacing in units of `sigma`.
    pub delta0: f64,
    pub quadrature: QuadratureSpec,
}

pub const P2P_COLUMNS: [&str; 13] = [
    "A_over_sigma_db",
    "K",
    "c_lower",
    "c_upper",
    "e_cap",
    "f1",
    "f2",
    "f3",
    "f_lower",
    "g_upper",
    "owb",
    "mi_exact",
    "h_input",
];

/// Bounds and exact rate of the ESDU input with `K = max{2, ⌈A/Δ₀⌉ + 1}`,
/// one row per peak.
pub fn p2p_bounds(p: &P2pParams, timestamp: u64) -> CliResult<Output> {
    let sigma = positive("sigma", p.sigma)?;
    let delta0 = positive("delta0", p.delta0)?;
    p.quadrature.validate()?;
    let mut warnings = Vec::new();
    if p.peaks.is_empty() {
        warnings.push("empty peak grid: no rows emitted".to_string());
    }

    let mut table = Table::new(P2P_COLUMNS.to_vec());
    for &peak in &p.peaks {
        peak.validate()?;
        let a = peak.ratio() * sigma;
        let k = esdu::levels_for_spacing(a, delta0 * sigma);
        let input = EsduInput::new(a, k)?;
        let ch = P2pChannel::new(a, sigma)?;
        // zero span: every bound column is 0
        let (comps, reference) = if input.is_degenerate() {
            ([0.0; 3], 0.0)
        } else {
            let c = lower_components(&input, sigma)?;
            ([c.f1, c.f2, c.f3], owb(&input, sigma)?)
        };
        let mi = mi_discrete(&input.to_discrete(), sigma, &p.quadrature)?;
        table.push(vec![
            Cell::Num(peak.db()),
            Cell::Int(k as u64),
            Cell::Num(c_lower(&ch)),
            Cell::Num(c_upper(&ch)),
            Cell::Num(e_cap(&ch)),
            Cell::Num(comps[0]),
            Cell::Num(comps[1]),
            Cell::Num(comps[2]),
            Cell::Num(f_lower(&input, sigma)),
            Cell::Num(g_upper(&input, sigma)),
            Cell::Num(reference),
            Cell::Num(mi),
            Cell::Num(input.entropy()),
        ]);
    }
    let manifest = RunManifest::new("p2p-bounds", p, Some(p.quadrature), None, timestamp);
    Ok(Output {
        manifest,
        data: table.to_json(),
        table,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRule {
    Fixed(usize),
    /// Target spacing in units of `sigma`.
    Spacing(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloParams {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsduRateParams {
    pub peaks: Vec<Peak>,
    pub sigma: f64,
    pub levels: LevelRule,
    pub quadrature: QuadratureSpec,
    pub monte_carlo: Option<MonteCarloParams>,
}

/// Rate of one ESDU input per peak, by quadrature and optionally by
/// Monte Carlo.
pub fn esdu_rate(p: &EsduRateParams, timestamp: u64) -> CliResult<Output> {
    let sigma = positive("sigma", p.sigma)?;
    p.quadrature.validate()?;
    let mut columns = vec!["A_over_sigma_db", "K", "mi_exact", "f_lower", "g_upper", "h_input"];
    if p.monte_carlo.is_some() {
        columns.extend(["mi_monte_carlo", "mc_std_error"]);
    }
    let mut warnings = Vec::new();
    if p.peaks.is_empty() {
        warnings.push("empty peak grid: no rows emitted".to_string());
    }
    let mut table = Table::new(columns);
    for &peak in &p.peaks {
        peak.validate()?;
        let a = peak.ratio() * sigma;
        let k = match p.levels {
            LevelRule::Fixed(k) => k,
            LevelRule::Spacing(d) => esdu::levels_for_spacing(a, positive("delta0", d)? * sigma),
        };
        let input = EsduInput::new(a, k)?;
        let discrete = input.to_discrete();
        let mut row = vec![
            Cell::Num(peak.db()),
            Cell::Int(k as u64),
            Cell::Num(mi_discrete(&discrete, sigma, &p.quadrature)?),
            Cell::Num(f_lower(&input, sigma)),
            Cell::Num(g_upper(&input, sigma)),
            Cell::Num(input.entropy()),
        ];
        if let Some(mc) = p.monte_carlo {
            let est = mi_monte_carlo(&discrete, sigma, mc.samples, mc.seed)?;
            row.extend([Cell::Num(est.bits), Cell::Num(est.std_error)]);
        }
        table.push(row);
    }
    let seed = p.monte_carlo.map(|m| m.seed);
    let manifest = RunManifest::new("esdu-rate", p, Some(p.quadrature), seed, timestamp);
    Ok(Output {
        manifest,
        data: table.to_json(),
        table,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegionMode {
    Analytic,
    Exact,
    Outer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcParams {
    /// Peak relative to `sigma1`.
    pub peak: Peak,
    pub sigma1: f64,
    pub sigma2: f64,
    pub mode: RegionMode,
    pub sweep: SweepConfig,
}

impl BcParams {
    pub fn channel(&self) -> CliResult<BcChannel> {
        self.peak.validate()?;
        let s1 = positive("sigma1", self.sigma1)?;
        Ok(BcChannel::new(self.peak.ratio() * s1, s1, self.sigma2)?)
    }
}

/// Vertices of an inner (`analytic`, `exact`) or outer region, ordered
/// clockwise from the origin along the frontier.
pub fn bc_region(p: &BcParams, timestamp: u64) -> CliResult<Output> {
    let ch = p.channel()?;
    let mut warnings = Vec::new();
    let (region, sweep): (RateRegion, Option<InnerSweep>) = match p.mode {
        RegionMode::Outer => (outer_region(&ch, &p.sweep)?, None),
        inner => {
            if p.sweep.delta0_grid.is_empty() {
                warnings.push("empty delta0 grid: inner region is the origin".to_string());
            }
            let mode = if inner == RegionMode::Exact { SweepMode::Exact } else { SweepMode::Analytic };
            let s = sweep_inner(&ch, &p.sweep, mode)?;
            (s.region.clone(), Some(s))
        }
    };

    let mut table = Table::new(vec!["r1", "r2"]);
    let mut vertices = Vec::with_capacity(region.vertices().len());
    for v in region.vertices() {
        table.push(vec![Cell::Num(v.r1), Cell::Num(v.r2)]);
        let provenance = sweep.as_ref().and_then(|s| s.provenance(v)).map(|pt| {
            json!({ "delta0": pt.delta0, "k1": pt.split.k1(), "k2": pt.split.k2() })
        });
        let mut obj = json!({ "r1": v.r1, "r2": v.r2 });
        if sweep.is_some() {
            obj["provenance"] = provenance.unwrap_or(Value::Null);
        }
        vertices.push(obj);
    }
    let data = json!({ "mode": p.mode, "vertices": vertices, "warnings": warnings });
    let quadrature = (p.mode == RegionMode::Exact).then_some(p.sweep.quadrature);
    let command = match p.mode {
        RegionMode::Outer => "bc-outer",
        _ => "bc-inner",
    };
    let manifest = RunManifest::new(command, p, quadrature, None, timestamp);
    Ok(Output {
        manifest,
        table,
        data,
        warnings,
    })
}
