use esdu_core::QuadratureSpec;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Bumped whenever a field of the manifest or of a data payload changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Record of one run, emitted with its data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub tool_version: String,
    pub params: Value,
    pub quadrature: Option<QuadratureSpec>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new<P: Serialize>(
        command: &str,
        params: &P,
        quadrature: Option<QuadratureSpec>,
        seed: Option<u64>,
        timestamp: u64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            params: serde_json::to_value(params).expect("parameters serialize"),
            quadrature,
            seed,
            timestamp,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        crate::format::render_json(&self.to_value())
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the clock.
pub fn current_timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
