//! Peak-constrained Gaussian channel parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point-to-point link `Y = X + Z`, `X ∈ [0, peak]`, `Z ~ N(0, sigma²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P2pChannel {
    peak: f64,
    sigma: f64,
}

impl P2pChannel {
    pub fn new(peak: f64, sigma: f64) -> Result<Self> {
        check_peak(peak)?;
        check_sigma(sigma, "sigma")?;
        Ok(Self { peak, sigma })
    }

    #[inline]
    pub fn peak(&self) -> f64 {
        self.peak
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Peak-to-noise amplitude ratio `A/σ`; every uniform-input bound depends
    /// on the channel only through this number.
    #[inline]
    pub fn snr_amplitude(&self) -> f64 {
        self.peak / self.sigma
    }
}

/// Two-user degraded broadcast channel `Y_i = X + Z_i` with `sigma1 <= sigma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcChannel {
    peak: f64,
    sigma1: f64,
    sigma2: f64,
}

impl BcChannel {
    pub fn new(peak: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        check_peak(peak)?;
        check_sigma(sigma1, "sigma1")?;
        check_sigma(sigma2, "sigma2")?;
        if sigma1 > sigma2 {
            return Err(Error::InvalidChannel(format!(
                "receiver 1 must be the stronger one: sigma1 = {sigma1} > sigma2 = {sigma2}"
            )));
        }
        Ok(Self {
            peak,
            sigma1,
            sigma2,
        })
    }

    #[inline]
    pub fn peak(&self) -> f64 {
        self.peak
    }

    #[inline]
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    #[inline]
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// The link to the stronger receiver.
    pub fn strong_link(&self) -> P2pChannel {
        P2pChannel {
            peak: self.peak,
            sigma: self.sigma1,
        }
    }

    /// The link to the weaker receiver.
    pub fn weak_link(&self) -> P2pChannel {
        P2pChannel {
            peak: self.peak,
            sigma: self.sigma2,
        }
    }
}

fn check_peak(peak: f64) -> Result<()> {
    if peak.is_finite() && peak >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidChannel(format!(
            "peak amplitude must be finite and nonnegative, got {peak}"
        )))
    }
}

fn check_sigma(sigma: f64, name: &str) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidChannel(format!(
            "{name} must be finite and positive, got {sigma}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(P2pChannel::new(-1.0, 1.0).is_err());
        assert!(P2pChannel::new(1.0, 0.0).is_err());
        assert!(P2pChannel::new(f64::INFINITY, 1.0).is_err());
        assert!(P2pChannel::new(1.0, f64::NAN).is_err());
        assert!(P2pChannel::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn broadcast_ordering() {
        assert!(BcChannel::new(10.0, 2.0, 1.0).is_err());
        let bc = BcChannel::new(10.0, 1.0, 1.0).unwrap();
        assert_eq!(bc.strong_link(), bc.weak_link());
        let bc = BcChannel::new(10.0, 1.0, 2.0).unwrap();
        assert_eq!(bc.weak_link().sigma(), 2.0);
    }
}
