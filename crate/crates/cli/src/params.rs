use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Peak amplitude relative to the (strongest) noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Peak {
    /// Linear ratio `A/σ`.
    Ratio(f64),
    /// `10·log10(A/σ)`.
    Db(f64),
}

impl Peak {
    pub fn ratio(self) -> f64 {
        match self {
            Peak::Ratio(r) => r,
            Peak::Db(db) => esdu_core::special::db_to_amplitude_ratio(db),
        }
    }

    pub fn db(self) -> f64 {
        match self {
            Peak::Ratio(r) => 10.0 * r.log10(),
            Peak::Db(db) => db,
        }
    }

    pub fn validate(self) -> CliResult<()> {
        let ok = match self {
            Peak::Ratio(r) => r.is_finite() && r >= 0.0,
            Peak::Db(db) => db.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::Usage(format!("invalid peak {self:?}")))
        }
    }
}

/// `START:STOP[:STEP]` in dB, inclusive of `STOP` up to rounding. A start
/// beyond the stop gives an empty range.
pub fn parse_db_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("expected START:STOP[:STEP], got {s:?}"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let start = num(parts[0])?;
    let stop = num(parts[1])?;
    let step = if parts.len() == 3 { num(parts[2])? } else { 1.0 };
    if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0) {
        return Err(format!("range bounds must be finite and the step positive, got {s:?}"));
    }
    if start > stop {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// Comma-separated reals; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

pub fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_db_range("0:3").unwrap(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(parse_db_range("10:11:0.5").unwrap(), vec![10.0, 10.5, 11.0]);
        assert_eq!(parse_db_range("0:1:0.1").unwrap().len(), 11);
        assert!(parse_db_range("5:0").unwrap().is_empty());
        assert!(parse_db_range("0:1:0").is_err());
        assert!(parse_db_range("0").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0.5, 1,3").unwrap(), vec![0.5, 1.0, 3.0]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("1,x").is_err());
    }

    #[test]
    fn peak_forms() {
        assert_eq!(Peak::Db(10.0).ratio(), 10.0);
        assert_eq!(Peak::Ratio(100.0).db(), 20.0);
        assert!(Peak::Ratio(-1.0).validate().is_err());
        assert!(Peak::Ratio(0.0).validate().is_ok());
    }
}
