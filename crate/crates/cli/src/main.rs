use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use esdu_cli::commands::{LevelRule, MonteCarloParams};
use esdu_cli::params::{parse_db_range, parse_list};
use esdu_cli::{
    bc_region, esdu_rate, manifest::current_timestamp, p2p_bounds, verify, BcParams, CliError, CliResult,
    EsduRateParams, Format, Output, P2pParams, Peak, RegionMode, VerifyParams,
};
use esdu_core::{QuadratureSpec, SweepConfig};

#[derive(Parser)]
#[command(name = "esdu", version, about = "Rate bounds for equally spaced uniform inputs on peak-limited Gaussian channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity and ESDU bounds with the exact rate, per peak
    P2pBounds {
        #[command(flatten)]
        peak: PeakGrid,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Target level spacing in units of sigma
        #[arg(long, default_value_t = 0.5)]
        delta0: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rate of a single ESDU input, optionally with a Monte Carlo estimate
    EsduRate {
        #[command(flatten)]
        peak: PeakGrid,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Number of levels (overrides --delta0)
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        delta0: f64,
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long, default_value_t = 0, requires = "mc_samples")]
        seed: u64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Inner rate region of the two-user broadcast channel
    BcInner {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, value_enum, default_value_t = InnerMode::Analytic)]
        mode: InnerMode,
        /// Target spacings in units of sigma1, comma separated
        #[arg(long, value_parser = grid_list, default_value = "0.5,1,1.5,2,2.5,3,3.5,4,4.5,5,5.5,6,6.5,7,7.5,8,8.5,9,9.5,10")]
        delta0_grid: Grid,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Outer rate region of the two-user broadcast channel
    BcOuter {
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value_t = 201)]
        rho_steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the invariant suite; exit status 3 if any check fails
    Verify {
        #[arg(long, value_parser = grid_range, default_value = "0:20")]
        db_range: Grid,
        #[arg(long, value_parser = grid_list, default_value = "2,10")]
        sigma_ratios: Grid,
        #[arg(long, value_parser = grid_list, default_value = "0.5,1,3,6")]
        delta0_grid: Grid,
        #[arg(long, default_value_t = 201)]
        rho_steps: usize,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A parsed list of reals; wrapped so clap treats it as one value.
#[derive(Clone)]
struct Grid(Vec<f64>);

fn grid_list(s: &str) -> Result<Grid, String> {
    parse_list(s).map(Grid)
}

fn grid_range(s: &str) -> Result<Grid, String> {
    parse_db_range(s).map(Grid)
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum InnerMode {
    Analytic,
    Exact,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PeakGrid {
    /// Peak as the linear ratio A/sigma
    #[arg(long)]
    peak: Option<f64>,
    /// Peak as 10*log10(A/sigma)
    #[arg(long, allow_hyphen_values = true)]
    peak_db: Option<f64>,
    /// Peaks in dB as START:STOP[:STEP]
    #[arg(long, value_parser = grid_range, allow_hyphen_values = true)]
    db_range: Option<Grid>,
}

impl PeakGrid {
    fn peaks(&self) -> Vec<Peak> {
        match (self.peak, self.peak_db, &self.db_range) {
            (Some(r), _, _) => vec![Peak::Ratio(r)],
            (_, Some(db), _) => vec![Peak::Db(db)],
            (_, _, Some(range)) => range.0.iter().map(|&d| Peak::Db(d)).collect(),
            _ => unreachable!("clap requires one peak flag"),
        }
    }
}

#[derive(Args)]
struct BcArgs {
    /// Peak as the linear ratio A/sigma1
    #[arg(long, group = "peak_src", required_unless_present = "peak_db")]
    peak: Option<f64>,
    /// Peak as 10*log10(A/sigma1)
    #[arg(long, group = "peak_src", allow_hyphen_values = true)]
    peak_db: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,
    #[arg(long, group = "weak", required_unless_present = "sigma_ratio")]
    sigma2: Option<f64>,
    /// sigma2 / sigma1
    #[arg(long, group = "weak")]
    sigma_ratio: Option<f64>,
}

impl BcArgs {
    fn params(&self, mode: RegionMode, sweep: SweepConfig) -> BcParams {
        let peak = match (self.peak, self.peak_db) {
            (Some(r), _) => Peak::Ratio(r),
            (_, Some(db)) => Peak::Db(db),
            _ => unreachable!("clap requires one peak flag"),
        };
        let sigma2 = self.sigma2.unwrap_or_else(|| self.sigma1 * self.sigma_ratio.expect("clap requires one"));
        BcParams {
            peak,
            sigma1: self.sigma1,
            sigma2,
            mode,
            sweep,
        }
    }
}

#[derive(Args)]
struct QuadArgs {
    /// Absolute tolerance of the rate quadrature, in bits
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            absolute_tolerance: self.quad_tol,
            ..QuadratureSpec::default()
        }
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file; CSV output then gets a `<file>.manifest.json` sidecar
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn emit(output: &Output, format: Format, out: Option<&Path>) -> CliResult<()> {
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    match (format, out) {
        (Format::Json, Some(path)) => std::fs::write(path, output.json())?,
        (Format::Json, None) => print!("{}", output.json()),
        (Format::Csv, Some(path)) => {
            std::fs::write(path, output.csv())?;
            std::fs::write(sidecar(path), output.manifest.to_json_pretty())?;
        }
        (Format::Csv, None) => print!("{}", output.csv_with_manifest()),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let now = current_timestamp();
    match cli.command {
        Command::P2pBounds {
            peak,
            sigma,
            delta0,
            quad,
            out,
        } => {
            let p = P2pParams {
                peaks: peak.peaks(),
                sigma,
                delta0,
                quadrature: quad.spec(),
            };
            emit(&p2p_bounds(&p, now)?, out.format, out.out.as_deref())
        }
        Command::EsduRate {
            peak,
            sigma,
            levels,
            delta0,
            mc_samples,
            seed,
            quad,
            out,
        } => {
            let p = EsduRateParams {
                peaks: peak.peaks(),
                sigma,
                levels: levels.map_or(LevelRule::Spacing(delta0), LevelRule::Fixed),
                quadrature: quad.spec(),
                monte_carlo: mc_samples.map(|samples| MonteCarloParams { samples, seed }),
            };
            emit(&esdu_rate(&p, now)?, out.format, out.out.as_deref())
        }
        Command::BcInner {
            bc,
            mode,
            delta0_grid,
            quad,
            out,
        } => {
            let sweep = SweepConfig {
                delta0_grid: delta0_grid.0,
                quadrature: quad.spec(),
                ..SweepConfig::default()
            };
            let mode = match mode {
                InnerMode::Analytic => RegionMode::Analytic,
                InnerMode::Exact => RegionMode::Exact,
            };
            emit(&bc_region(&bc.params(mode, sweep), now)?, out.format, out.out.as_deref())
        }
        Command::BcOuter { bc, rho_steps, out } => {
            let sweep = SweepConfig {
                rho_steps,
                ..SweepConfig::default()
            };
            emit(&bc_region(&bc.params(RegionMode::Outer, sweep), now)?, out.format, out.out.as_deref())
        }
        Command::Verify {
            db_range,
            sigma_ratios,
            delta0_grid,
            rho_steps,
            quad,
            format,
            out,
        } => {
            let p = VerifyParams {
                peaks_db: db_range.0,
                sigma_ratios: sigma_ratios.0,
                delta0_grid: delta0_grid.0,
                rho_steps,
                quadrature: quad.spec(),
                ..VerifyParams::default()
            };
            let (output, report) = verify(&p, now)?;
            emit(&output, format, out.as_deref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification {
                    failed: report.failed,
                    total: report.total,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
