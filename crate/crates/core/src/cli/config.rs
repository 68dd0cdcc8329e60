//! JSON run configuration.

use crate::constants::si;
use crate::error::{Error, Result};
use crate::medium::{MediumParams, PulseParams, TransitionSpec};
use crate::wavepacket::BranchRule;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Cgs,
    Si,
    /// c = 1, m = 1; only the packet section is allowed.
    Normalized,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub omega0: f64,
    #[serde(default)]
    pub dipole_d: Option<f64>,
    #[serde(default)]
    pub oscillator_strength_f: Option<f64>,
    /// Omitted: radiative damping.
    #[serde(default)]
    pub beta: Option<f64>,
    pub density_n: f64,
    #[serde(default = "one")]
    pub inversion_w: f64,
    pub length_l: f64,
    pub area_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub photon_number_q: f64,
    pub duration_tau_p: f64,
    pub detuning_delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchConfig {
    OscillatoryOnly,
    Growing,
    Decaying,
}

impl From<BranchConfig> for BranchRule {
    fn from(b: BranchConfig) -> Self {
        match b {
            BranchConfig::OscillatoryOnly => BranchRule::OscillatoryOnly,
            BranchConfig::Growing => BranchRule::GrowingBranch,
            BranchConfig::Decaying => BranchRule::DecayingBranch,
        }
    }
}

/// Wavepacket setup, always in units with c = 1 and m = 1 unless given.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PacketConfig {
    pub mass_m: f64,
    pub c: f64,
    pub k0: f64,
    pub sigma_k: f64,
    pub x0: f64,
    pub n_points: usize,
    pub dx: f64,
    pub cut_x: f64,
    pub time: f64,
    pub branch: BranchConfig,
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig {
            mass_m: 1.0,
            c: 1.0,
            k0: 5.0,
            sigma_k: 0.5,
            x0: 10.0,
            n_points: 1 << 14,
            dx: 0.05,
            cut_x: 0.0,
            time: 30.0,
            branch: BranchConfig::Growing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbConfig {
    #[serde(default)]
    pub n_z: Option<usize>,
    #[serde(default)]
    pub window_t: Option<f64>,
    #[serde(default)]
    pub realizations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub units: Units,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub medium: Option<MediumConfig>,
    #[serde(default)]
    pub pulse: Option<PulseConfig>,
    #[serde(default)]
    pub packet: Option<PacketConfig>,
    #[serde(default)]
    pub maxwell_bloch: Option<MbConfig>,
}

fn one() -> f64 {
    1.0
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile { units: Units::Cgs, seed: None, medium: None, pulse: None, packet: None, maxwell_bloch: None }
    }
}

/// Validated parameters with physical quantities in CGS.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub seed: u64,
    pub medium: Option<MediumParams>,
    pub pulse: Option<PulseParams>,
    pub packet: PacketConfig,
    pub mb: MbConfig,
}

pub fn parse(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
}

pub fn load(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Default medium: w0 = 3e15 rad/s, d = 1 D, N = 1e12 cm^-3, L = 1 cm, S = 1e-4 cm^2, radiative damping.
pub fn default_medium() -> MediumParams {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0).expect("valid default transition");
    MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4).expect("valid default medium").radiatively_broadened()
}

pub fn default_pulse(medium: &MediumParams) -> PulseParams {
    PulseParams::new(&medium.transition, 1.0, 1e-10, 1e11).expect("valid default pulse")
}

impl ConfigFile {
    pub fn resolve(&self) -> Result<Resolved> {
        if self.units == Units::Normalized && (self.medium.is_some() || self.pulse.is_some()) {
            return Err(Error::Config("normalized units only apply to the packet section".into()));
        }
        let si = self.units == Units::Si;
        let medium = match &self.medium {
            None => None,
            Some(m) => Some(build_medium(m, si)?),
        };
        let pulse = match &self.pulse {
            None => None,
            Some(p) => {
                let tr = medium.as_ref().map(|m| m.transition).unwrap_or_else(|| default_medium().transition);
                Some(PulseParams::new(&tr, p.photon_number_q, p.duration_tau_p, p.detuning_delta)?)
            }
        };
        Ok(Resolved {
            seed: self.seed.unwrap_or(0),
            medium,
            pulse,
            packet: self.packet.clone().unwrap_or_default(),
            mb: self.maxwell_bloch.clone().unwrap_or(MbConfig { n_z: None, window_t: None, realizations: None }),
        })
    }
}

fn build_medium(m: &MediumConfig, si_units: bool) -> Result<MediumParams> {
    let (dip, dens, len, area) = if si_units {
        (si::DIPOLE, si::DENSITY, si::LENGTH, si::AREA)
    } else {
        (1.0, 1.0, 1.0, 1.0)
    };
    let tr = match (m.dipole_d, m.oscillator_strength_f) {
        (Some(d), None) => TransitionSpec::from_dipole(m.omega0, d * dip, m.beta.unwrap_or(0.0))?,
        (None, Some(f)) => TransitionSpec::from_oscillator_strength(m.omega0, f, m.beta.unwrap_or(0.0))?,
        _ => return Err(Error::Config("medium: give exactly one of dipole_d, oscillator_strength_f".into())),
    };
    let medium = MediumParams::new(tr, m.density_n * dens, m.inversion_w, m.length_l * len, m.area_s * area)?;
    Ok(if m.beta.is_none() { medium.radiatively_broadened() } else { medium })
}

impl Resolved {
    pub fn medium_or_default(&self) -> MediumParams {
        self.medium.clone().unwrap_or_else(default_medium)
    }

    pub fn pulse_or_default(&self, medium: &MediumParams) -> PulseParams {
        self.pulse.unwrap_or_else(|| default_pulse(medium))
    }
}
