//! Superluminal pulse propagation in inverted media: dispersion, superfluorescence
//! noise, amplifier signal-to-noise ratios, causal wavepacket decomposition and
//! stochastic Maxwell-Bloch ensembles.

pub mod amplifier_snr;
pub mod cli;
pub mod constants;
pub mod error;
pub mod maxwell_bloch;
pub mod medium;
pub mod numerics;
pub mod superfluorescence;
pub mod wavepacket;

pub use error::{Error, Result};
