//! Closed-form linear responses used as references for the integrator.

use super::{input_amplitude, MbGrid};
use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};
use crate::medium::{group_velocity, MediumParams, PulseParams};
use crate::superfluorescence::bessel_i0;
use num_complex::Complex64;
use std::f64::consts::PI;

/// A set of point dipoles at lab time 0: position, cell width and value.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
    pub dipoles: Vec<Complex64>,
}

impl Realization {
    pub fn on_grid(grid: &MbGrid, dipoles: &[Complex64]) -> Result<Self> {
        if dipoles.len() != grid.n_z + 1 {
            return Err(Error::invalid("dipoles", "need one value per node (n_z + 1)"));
        }
        Ok(Realization {
            positions: (0..=grid.n_z).map(|j| grid.z(j)).collect(),
            weights: grid.node_weights(),
            dipoles: dipoles.to_vec(),
        })
    }
}

// Step function with the midpoint value at the jump, matching a sample taken on the front.
fn theta(arg: f64, scale: f64) -> f64 {
    if arg.abs() <= 1e-9 * scale {
        0.5
    } else if arg > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn kappa(medium: &MediumParams) -> f64 {
    let t = &medium.transition;
    2.0 * PI * medium.density_n * t.dipole_d * t.omega0 / C_LIGHT
}

/// Resonant small-signal field at the exit, F(L, t) = i kappa sum_j w_j s_j I0(...).
pub fn analytic_sf_field(medium: &MediumParams, realization: &Realization, t: f64) -> Result<Complex64> {
    let k = kappa(medium);
    let wp = medium.omega_p();
    let l = medium.length_l;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((z, w), s) in realization.positions.iter().zip(&realization.weights).zip(&realization.dipoles) {
        let x = l - z;
        let rest = t - x / C_LIGHT;
        let th = theta(rest, t.abs().max(l / C_LIGHT));
        if th == 0.0 {
            continue;
        }
        let y = wp * ((x / C_LIGHT) * rest.max(0.0)).sqrt();
        acc += *s * (w * th * bessel_i0(y)?);
    }
    Ok(Complex64::new(0.0, k) * acc)
}

/// Linear-gain amplifier field: the input pulse delayed by z / v_g with complex
/// gain e^{kappa alpha z / (beta + i Delta)}, plus freely ringing dipoles
/// carried with the same propagation factor.
pub fn analytic_amplifier_field(
    medium: &MediumParams,
    pulse: &PulseParams,
    realization: &Realization,
    signal_center: f64,
    include_signal: bool,
    z: f64,
    t: f64,
) -> Result<Complex64> {
    let vg = group_velocity(medium, pulse.detuning_delta)?.v_g;
    let k = kappa(medium);
    let ka = k * medium.transition.dipole_d / HBAR;
    let gamma = Complex64::new(medium.transition.beta, pulse.detuning_delta);
    let prop = |dz: f64| (ka * dz / gamma).exp();

    let mut out = Complex64::new(0.0, 0.0);
    if include_signal {
        let amp = input_amplitude(medium, pulse)?;
        let u = (t - z / vg - signal_center) / pulse.duration_tau_p;
        out += prop(z) * (amp * (-0.5 * u * u).exp());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ((zj, w), s) in realization.positions.iter().zip(&realization.weights).zip(&realization.dipoles) {
        if *zj > z {
            continue;
        }
        let rest = t - (z - zj) / vg;
        let th = theta(rest, t.abs().max(z / C_LIGHT));
        if th == 0.0 {
            continue;
        }
        acc += *s * (w * th) * prop(z - zj) * (-gamma * rest).exp();
    }
    Ok(out + Complex64::new(0.0, k) * acc)
}
