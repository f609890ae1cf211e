//! Library side of the `esdu` command: parameter types, the subcommand
//! implementations and deterministic CSV/JSON rendering. The binary only
//! parses flags and writes the rendered text.

pub mod commands;
pub mod error;
pub mod format;
pub mod manifest;
pub mod params;
pub mod verify;

pub use commands::{bc_region, esdu_rate, p2p_bounds, BcParams, EsduRateParams, P2pParams, RegionMode};
pub use error::{CliError, CliResult};
pub use format::{g15, Format, Output};
pub use manifest::{RunManifest, SCHEMA_VERSION};
pub use params::Peak;
pub use verify::{verify, verify_with, BoundFns, VerifyParams, VerifyReport};
