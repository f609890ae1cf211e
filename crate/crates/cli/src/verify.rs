//! Invariant suite run by `esdu verify`.
//!
//! Three families of checks, each reported with a margin (positive or zero
//! means satisfied, up to its tolerance):
//!
//! * `sandwich`: `f_lower ≤ I ≤ g_upper` for the sweep-rule ESDU input;
//!   margin `min(I - f_lower, g_upper - I)`.
//! * `dominance`: `f_lower ≥ owb`; margin `f_lower - owb`.
//! * `containment`: every analytic inner vertex inside the outer region;
//!   margin is minus the largest boundary excess.

use esdu_core::esdu::{self, EsduInput};
use esdu_core::oracle::mi_discrete;
use esdu_core::region::{boundary_excess, outer_region, sweep_inner};
use esdu_core::{BcChannel, QuadratureSpec, SweepConfig, SweepMode};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliResult;
use crate::format::{Cell, Output, Table};
use crate::manifest::RunManifest;
use crate::params::{positive, Peak};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyParams {
    /// Peaks `10·log10(A/σ1)`.
    pub peaks_db: Vec<f64>,
    /// `σ2/σ1` values for the containment checks.
    pub sigma_ratios: Vec<f64>,
    /// Target spacings in units of `σ1`, for both the point-to-point checks
    /// and the inner sweeps.
    pub delta0_grid: Vec<f64>,
    pub sandwich_tolerance: f64,
    pub dominance_tolerance: f64,
    pub containment_tolerance: f64,
    pub rho_steps: usize,
    pub quadrature: QuadratureSpec,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            peaks_db: (0..=20).map(f64::from).collect(),
            sigma_ratios: vec![2.0, 10.0],
            delta0_grid: vec![0.5, 1.0, 3.0, 6.0],
            sandwich_tolerance: 1e-6,
            dominance_tolerance: 1e-9,
            containment_tolerance: 1e-6,
            rho_steps: 201,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Point-to-point bounds under test; swapped out by mutation tests.
#[derive(Clone, Copy)]
pub struct BoundFns {
    pub f_lower: fn(&EsduInput, f64) -> f64,
    pub g_upper: fn(&EsduInput, f64) -> f64,
    pub owb: fn(&EsduInput, f64) -> esdu_core::Result<f64>,
}

impl Default for BoundFns {
    fn default() -> Self {
        Self {
            f_lower: esdu::f_lower,
            g_upper: esdu::g_upper,
            owb: esdu::owb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub family: String,
    pub peak_db: f64,
    /// `delta0` for point checks, `σ2/σ1` for containment.
    pub parameter: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub total: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn check(family: &str, peak_db: f64, parameter: f64, margin: f64, tolerance: f64) -> Check {
    Check {
        family: family.to_string(),
        peak_db,
        parameter,
        margin,
        tolerance,
        passed: margin >= -tolerance,
    }
}

pub fn run_checks(p: &VerifyParams, bounds: &BoundFns) -> CliResult<VerifyReport> {
    p.quadrature.validate()?;
    for &d in &p.delta0_grid {
        positive("delta0", d)?;
    }
    let mut checks = Vec::new();

    for &db in &p.peaks_db {
        Peak::Db(db).validate()?;
        let a = Peak::Db(db).ratio();
        for &d0 in &p.delta0_grid {
            let input = EsduInput::new(a, esdu::levels_for_spacing(a, d0))?;
            let mi = mi_discrete(&input.to_discrete(), 1.0, &p.quadrature)?;
            let lo = (bounds.f_lower)(&input, 1.0);
            let hi = (bounds.g_upper)(&input, 1.0);
            checks.push(check("sandwich", db, d0, (mi - lo).min(hi - mi), p.sandwich_tolerance));
            if !input.is_degenerate() {
                let reference = (bounds.owb)(&input, 1.0)?;
                checks.push(check("dominance", db, d0, lo - reference, p.dominance_tolerance));
            }
        }
    }

    let sweep = SweepConfig {
        delta0_grid: p.delta0_grid.clone(),
        rho_steps: p.rho_steps,
        quadrature: p.quadrature,
    };
    for &db in &p.peaks_db {
        let a = Peak::Db(db).ratio();
        for &ratio in &p.sigma_ratios {
            let ch = BcChannel::new(a, 1.0, positive("sigma ratio", ratio)?)?;
            let outer = outer_region(&ch, &sweep)?;
            let inner = sweep_inner(&ch, &sweep, SweepMode::Analytic)?;
            let excess = inner
                .region
                .vertices()
                .iter()
                .map(|v| boundary_excess(&outer, v))
                .fold(f64::NEG_INFINITY, f64::max);
            checks.push(check("containment", db, ratio, -excess, p.containment_tolerance));
        }
    }

    let mut warnings = Vec::new();
    if checks.is_empty() {
        warnings.push("empty grid: no checks were run".to_string());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        total: checks.len(),
        failed,
        checks,
        warnings,
    })
}

pub fn verify_with(p: &VerifyParams, bounds: &BoundFns, timestamp: u64) -> CliResult<(Output, VerifyReport)> {
    let report = run_checks(p, bounds)?;
    let table = checks_table(&report);
    let data = json!({
        "checks": report.checks,
        "total": report.total,
        "failed": report.failed,
        "warnings": report.warnings,
    });
    let manifest = RunManifest::new("verify", p, Some(p.quadrature), None, timestamp);
    let output = Output {
        manifest,
        table,
        data,
        warnings: report.warnings.clone(),
    };
    Ok((output, report))
}

pub fn verify(p: &VerifyParams, timestamp: u64) -> CliResult<(Output, VerifyReport)> {
    verify_with(p, &BoundFns::default(), timestamp)
}

/// CSV form of the report; `family` is encoded as 0/1/2 in column order
/// sandwich, dominance, containment.
fn checks_table(report: &VerifyReport) -> Table {
    let mut t = Table::new(vec!["family", "peak_db", "parameter", "margin", "tolerance", "passed"]);
    for c in &report.checks {
        let family = match c.family.as_str() {
            "sandwich" => 0,
            "dominance" => 1,
            _ => 2,
        };
        t.push(vec![
            Cell::Int(family),
            Cell::Num(c.peak_db),
            Cell::Num(c.parameter),
            Cell::Num(c.margin),
            Cell::Num(c.tolerance),
            Cell::Int(c.passed as u64),
        ]);
    }
    t
}
