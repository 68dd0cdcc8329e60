//! Inverted two-level medium: dispersion, gain, timescales and regime checks.

use crate::constants::{C_LIGHT, E_CHARGE, HBAR, M_ELECTRON};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Ratio used for every "much greater than" comparison.
pub const MUCH_GREATER: f64 = 10.0;

/// Atomic transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub omega0: f64,
    pub dipole_d: f64,
    pub oscillator_strength_f: f64,
    pub beta: f64,
}

impl TransitionSpec {
    /// Transition given by its dipole moment (statC cm).
    pub fn from_dipole(omega0: f64, dipole_d: f64, beta: f64) -> Result<Self> {
        check_transition(omega0, beta)?;
        if !(dipole_d >= 0.0 && dipole_d.is_finite()) {
            return Err(Error::invalid("dipole_d", "must be finite and >= 0"));
        }
        let f = 2.0 * M_ELECTRON * omega0 * dipole_d * dipole_d / (HBAR * E_CHARGE * E_CHARGE);
        Ok(TransitionSpec { omega0, dipole_d, oscillator_strength_f: f, beta })
    }

    /// Transition given by its oscillator strength; converted once to a dipole moment.
    pub fn from_oscillator_strength(omega0: f64, f: f64, beta: f64) -> Result<Self> {
        check_transition(omega0, beta)?;
        if !(f >= 0.0 && f.is_finite()) {
            return Err(Error::invalid("oscillator_strength_f", "must be finite and >= 0"));
        }
        let d = (f * HBAR * E_CHARGE * E_CHARGE / (2.0 * M_ELECTRON * omega0)).sqrt();
        Ok(TransitionSpec { omega0, dipole_d: d, oscillator_strength_f: f, beta })
    }
}

fn check_transition(omega0: f64, beta: f64) -> Result<()> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::invalid("omega0", "must be finite and > 0"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", "must be finite and >= 0"));
    }
    Ok(())
}

/// Gas of two-level atoms in a pencil of length L and cross-section S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub transition: TransitionSpec,
    pub density_n: f64,
    pub inversion_w: f64,
    pub length_l: f64,
    pub area_s: f64,
    pub atom_count_nt: f64,
}

impl MediumParams {
    pub fn new(
        transition: TransitionSpec,
        density_n: f64,
        inversion_w: f64,
        length_l: f64,
        area_s: f64,
    ) -> Result<Self> {
        if !(density_n >= 0.0 && density_n.is_finite()) {
            return Err(Error::invalid("density_N", "must be finite and >= 0"));
        }
        if !(-1.0..=1.0).contains(&inversion_w) {
            return Err(Error::invalid("inversion_w", "must lie in [-1, 1]"));
        }
        if !(length_l > 0.0 && length_l.is_finite()) {
            return Err(Error::invalid("length_L", "must be finite and > 0"));
        }
        if !(area_s > 0.0 && area_s.is_finite()) {
            return Err(Error::invalid("area_S", "must be finite and > 0"));
        }
        Ok(MediumParams {
            transition,
            density_n,
            inversion_w,
            length_l,
            area_s,
            atom_count_nt: density_n * area_s * length_l,
        })
    }

    /// Same medium with the damping set to the radiative value 1/(2 tau_RAD).
    pub fn radiatively_broadened(mut self) -> Self {
        self.transition.beta = self.radiative_beta();
        self
    }

    /// pi d^2 w0 / (S hbar c).
    pub fn radiative_beta(&self) -> f64 {
        let t = &self.transition;
        PI * t.dipole_d * t.dipole_d * t.omega0 / (self.area_s * HBAR * C_LIGHT)
    }

    /// Squared plasma frequency 8 pi N d^2 w0 / hbar.
    pub fn omega_p_squared(&self) -> f64 {
        let t = &self.transition;
        8.0 * PI * self.density_n * t.dipole_d * t.dipole_d * t.omega0 / HBAR
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p_squared().sqrt()
    }

    /// (4 / tau_R)(c / L); equals `omega_p_squared` identically.
    pub fn omega_p_squared_from_timescale(&self) -> Result<f64> {
        let ts = self.timescales_partial()?;
        Ok(4.0 / ts.0 * C_LIGHT / self.length_l)
    }

    /// w * omega_p^2 / (4 Delta^2).
    pub fn dispersion_strength(&self, detuning: f64) -> f64 {
        self.inversion_w * self.omega_p_squared() / (4.0 * detuning * detuning)
    }

    pub(crate) fn timescales_partial(&self) -> Result<(f64, f64)> {
        let t = &self.transition;
        if t.dipole_d == 0.0 {
            return Err(Error::Domain("zero dipole moment: radiative lifetime is infinite".into()));
        }
        if self.atom_count_nt <= 0.0 {
            return Err(Error::Domain("empty medium: N_T = 0".into()));
        }
        let tau_rad = self.area_s * HBAR * C_LIGHT / (2.0 * PI * t.dipole_d * t.dipole_d * t.omega0);
        Ok((tau_rad / self.atom_count_nt, tau_rad))
    }
}

/// Formula used by [`refractive_index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMode {
    MultilevelSum,
    TwoLevelReal,
    FarDetuned,
}

/// Refractive index together with the far-detuning margin |Delta| / (omega_p^2 / 4 omega0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexValue {
    pub n: f64,
    /// n - 1 evaluated directly (no rounding through 1 + x).
    pub n_minus_one: f64,
    pub far_detuning_margin: f64,
    pub far_detuning_valid: bool,
}

/// n(omega) for the selected formula.
pub fn refractive_index(medium: &MediumParams, omega: f64, mode: IndexMode) -> Result<IndexValue> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega", "must be finite and > 0"));
    }
    let t = &medium.transition;
    let wp2 = medium.omega_p_squared();
    let w = medium.inversion_w;
    let delta = t.omega0 - omega;
    let scale = wp2 / (4.0 * t.omega0);
    let margin = if scale == 0.0 { f64::INFINITY } else { delta.abs() / scale };
    let n_minus_one = if wp2 == 0.0 || w == 0.0 {
        0.0
    } else {
        match mode {
            IndexMode::MultilevelSum => {
                // lower->upper absorption plus upper->lower emission (f_21 = -f_12)
                let denom = (t.omega0 - omega) * (t.omega0 + omega);
                if denom == 0.0 {
                    return Err(Error::Domain("resonance singularity at omega = omega0".into()));
                }
                // N_1 - N_2 = -N w; 2 pi e^2 f / m = omega_p^2 / (2 N)
                -(wp2 / 2.0) * w / denom
            }
            IndexMode::TwoLevelReal => {
                if t.beta == 0.0 && delta == 0.0 {
                    return Err(Error::Domain("resonance singularity: beta = 0 and omega = omega0".into()));
                }
                -w * scale * delta / (delta * delta + t.beta * t.beta)
            }
            IndexMode::FarDetuned => {
                if delta == 0.0 {
                    return Err(Error::Domain("far-detuned index undefined at Delta = 0".into()));
                }
                -w * scale / delta
            }
        }
    };
    Ok(IndexValue { n: 1.0 + n_minus_one, n_minus_one, far_detuning_margin: margin, far_detuning_valid: margin >= MUCH_GREATER })
}

/// Damped complex index 1 - w (omega_p^2 / 4 omega0) / (Delta - i beta).
pub fn refractive_index_complex(medium: &MediumParams, omega: f64) -> Result<Complex64> {
    let t = &medium.transition;
    let delta = t.omega0 - omega;
    if t.beta == 0.0 && delta == 0.0 {
        return Err(Error::Domain("resonance singularity: beta = 0 and omega = omega0".into()));
    }
    let scale = medium.inversion_w * medium.omega_p_squared() / (4.0 * t.omega0);
    Ok(Complex64::new(1.0, 0.0) - scale / Complex64::new(delta, -t.beta))
}

/// Group velocity and its excess over c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupVelocity {
    pub v_g: f64,
    /// v_g / c - 1, computed without cancellation.
    pub excess: f64,
}

pub fn group_velocity(medium: &MediumParams, detuning: f64) -> Result<GroupVelocity> {
    if detuning == 0.0 && medium.omega_p_squared() * medium.inversion_w != 0.0 {
        return Err(Error::Domain("group-velocity divergence at Delta = 0".into()));
    }
    let x = if medium.omega_p_squared() * medium.inversion_w == 0.0 {
        0.0
    } else {
        medium.dispersion_strength(detuning)
    };
    let one_minus = 1.0 - x;
    if one_minus == 0.0 || !x.is_finite() {
        return Err(Error::Domain("group-velocity divergence: w omega_p^2 = 4 Delta^2".into()));
    }
    Ok(GroupVelocity { v_g: C_LIGHT / one_minus, excess: x / one_minus })
}

/// Both roots of Omega^2 - K c Omega + w omega_p^2 / 4 = 0, sorted.
pub fn ckk_dispersion(medium: &MediumParams, k: f64) -> [Complex64; 2] {
    let b = -k * C_LIGHT;
    let cst = 0.25 * medium.inversion_w * medium.omega_p_squared();
    let disc = b * b - 4.0 * cst;
    let mut roots = if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
        if q == 0.0 {
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]
        } else {
            [Complex64::new(q, 0.0), Complex64::new(cst / q, 0.0)]
        }
    } else {
        let re = -b / 2.0;
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(re, -im), Complex64::new(re, im)]
    };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Gain coefficient from the Lorentzian line and from the group-velocity identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCoefficient {
    /// (omega_p^2 w / 2c) beta / (Delta^2 + beta^2), 1/cm.
    pub g: f64,
    /// 2 beta (1/c - 1/v_g); equals g * (Delta^2 + beta^2) / Delta^2.
    pub g_from_velocity: f64,
    /// |g_from_velocity - g| / |g|.
    pub relative_gap: f64,
}

pub fn gain_coefficient(medium: &MediumParams, detuning: f64) -> Result<GainCoefficient> {
    let beta = medium.transition.beta;
    let wp2w = medium.omega_p_squared() * medium.inversion_w;
    let lorentz = if beta == 0.0 { 0.0 } else { beta / (detuning * detuning + beta * beta) };
    let g = wp2w / (2.0 * C_LIGHT) * lorentz;
    let g_from_velocity = if detuning == 0.0 {
        if wp2w == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        // 1/c - 1/v_g = x / c
        2.0 * beta * medium.dispersion_strength(detuning) / C_LIGHT
    };
    let relative_gap = if g == 0.0 {
        if g_from_velocity == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        ((g_from_velocity - g) / g).abs()
    };
    Ok(GainCoefficient { g, g_from_velocity, relative_gap })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timescales {
    pub tau_rad: f64,
    pub tau_r: f64,
    pub tau_d: f64,
    pub transit_l_over_c: f64,
}

pub fn timescales(medium: &MediumParams) -> Result<Timescales> {
    let (tau_r, tau_rad) = medium.timescales_partial()?;
    let nt = medium.atom_count_nt;
    let arg = 2.0 * PI * nt;
    if arg <= 1.0 {
        return Err(Error::Domain(format!(
            "delay time undefined for N_T = {nt:e} <= 1/(2 pi)"
        )));
    }
    let l = 0.25 * arg.ln();
    Ok(Timescales {
        tau_rad,
        tau_r,
        tau_d: tau_r * l * l,
        transit_l_over_c: medium.length_l / C_LIGHT,
    })
}

/// Incident Gaussian signal pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub photon_number_q: f64,
    pub duration_tau_p: f64,
    pub detuning_delta: f64,
    pub carrier_omega: f64,
}

impl PulseParams {
    pub fn new(transition: &TransitionSpec, q: f64, tau_p: f64, detuning: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::invalid("photon_number_q", "must be finite and > 0"));
        }
        if !(tau_p > 0.0 && tau_p.is_finite()) {
            return Err(Error::invalid("duration_tau_p", "must be finite and > 0"));
        }
        let carrier = transition.omega0 - detuning;
        if !(carrier > 0.0) {
            return Err(Error::invalid("detuning_Delta", "carrier frequency omega0 - Delta must be > 0"));
        }
        Ok(PulseParams {
            photon_number_q: q,
            duration_tau_p: tau_p,
            detuning_delta: detuning,
            carrier_omega: carrier,
        })
    }

    /// |Delta| tau_p > 1 (assumed throughout the amplifier analysis).
    pub fn detuning_exceeds_bandwidth(&self) -> bool {
        self.detuning_delta.abs() * self.duration_tau_p > 1.0
    }
}

/// A condition together with the ratio that decides it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub margin: f64,
}

impl Condition {
    fn much_greater(margin: f64) -> Self {
        Condition { holds: margin >= MUCH_GREATER, margin }
    }
    fn greater(margin: f64) -> Self {
        Condition { holds: margin > 1.0, margin }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    /// T / ((1 - x) tau_p) >> 1: the pulse moves far outside its initial spread.
    pub ars1: Condition,
    /// x T / ((1 - x) tau_p) >> 1: the superluminal advance exceeds the pulse width.
    pub ars2: Condition,
    /// tau_RAD / T >> 1.
    pub hierarchy_rad_over_t: Condition,
    /// T / tau_p >> 1.
    pub hierarchy_t_over_pulse: Condition,
    /// tau_R / tau_p > 1.
    pub sf_pulse_shorter: Condition,
    /// tau_R / (L/c) > 1.
    pub sf_transit_shorter: Condition,
    /// tau_D / tau_R > 1.
    pub sf_delay_longer: Condition,
    /// tau_R / tau_p >= 1.
    pub ckk: Condition,
    /// |Delta| tau_p > 1.
    pub detuning_bandwidth: Condition,
}

impl RegimeReport {
    pub fn hierarchy(&self) -> bool {
        self.hierarchy_rad_over_t.holds && self.hierarchy_t_over_pulse.holds
    }
    pub fn sf_safety(&self) -> bool {
        self.sf_pulse_shorter.holds && self.sf_transit_shorter.holds && self.sf_delay_longer.holds
    }
}

pub fn regime_report(medium: &MediumParams, pulse: &PulseParams, observation_t: f64) -> Result<RegimeReport> {
    let gv = group_velocity(medium, pulse.detuning_delta)?;
    let x = if medium.omega_p_squared() == 0.0 {
        0.0
    } else {
        medium.dispersion_strength(pulse.detuning_delta)
    };
    let tp = pulse.duration_tau_p;
    // an empty medium has no radiative timescales; those conditions then fail with NaN margins
    let ts = timescales(medium).unwrap_or(Timescales {
        tau_rad: f64::NAN,
        tau_r: f64::NAN,
        tau_d: f64::NAN,
        transit_l_over_c: medium.length_l / C_LIGHT,
    });
    let ckk_margin = ts.tau_r / tp;
    Ok(RegimeReport {
        ars1: Condition::much_greater(observation_t / ((1.0 - x) * tp)),
        ars2: Condition::much_greater(gv.excess * observation_t / tp),
        hierarchy_rad_over_t: Condition::much_greater(ts.tau_rad / observation_t),
        hierarchy_t_over_pulse: Condition::much_greater(observation_t / tp),
        sf_pulse_shorter: Condition::greater(ts.tau_r / tp),
        sf_transit_shorter: Condition::greater(ts.tau_r / ts.transit_l_over_c),
        sf_delay_longer: Condition::greater(ts.tau_d / ts.tau_r),
        ckk: Condition { holds: ckk_margin >= 1.0, margin: ckk_margin },
        detuning_bandwidth: Condition::greater(pulse.detuning_delta.abs() * tp),
    })
}

/// The normalized-units (c = 1) chain m^2 T >> k0^2 / dk >> k0 for a packet of
/// central wavenumber k0 and spread dk in a medium of tachyonic mass m.
pub fn normalized_ars_chain(mass_m: f64, k0: f64, delta_k: f64, observation_t: f64) -> (Condition, Condition) {
    let mid = k0 * k0 / delta_k;
    (
        Condition::much_greater(mass_m * mass_m * observation_t / mid),
        Condition::much_greater(mid / k0),
    )
}
