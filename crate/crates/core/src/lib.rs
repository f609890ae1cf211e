//! Achievable-rate bounds for evenly-spaced discrete uniform (ESDU) inputs on
//! peak-constrained Gaussian channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] – Gaussian tail, binary entropy and the decibel convention.
//! * [`uniform`] – closed-form rate bounds for a continuous uniform input.
//! * [`esdu`] – lower bound `F`, upper bound `G` and the Ozarow-Wyner-B
//!   reference bound for ESDU inputs.
//! * [`oracle`] – numerical mutual information (quadrature and Monte Carlo)
//!   used as ground truth for the closed forms.
//! * [`region`] – two-user broadcast-channel inner and outer rate regions.
//!
//! All rates are in bits per channel use.

pub mod channel;
pub mod error;
pub mod esdu;
pub mod oracle;
pub mod quadrature;
pub mod region;
pub mod special;
pub mod uniform;

pub use channel::{BcChannel, P2pChannel};
pub use error::{Error, Result};
pub use esdu::EsduInput;
pub use oracle::{DiscreteInput, MonteCarloEstimate, QuadratureSpec};
pub use region::{RatePair, RateRegion, SplitConfig, SweepConfig, SweepMode};
pub use special::Probability;
