//! Superfluorescent build-up of the noise field from a fully inverted sample.

mod bessel;

pub use bessel::{bessel_i0, bessel_i0_scaled, MAX_ARGUMENT, SERIES_CROSSOVER};

use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};
use crate::medium::{timescales, MediumParams};
use crate::numerics::{bisect, integrate};
use std::f64::consts::PI;

/// Requested relative accuracy of the intensity quadrature.
pub const QUADRATURE_RTOL: f64 = 1e-8;

/// Medium plus the derived quantities the intensity formulas need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfContext {
    pub medium: MediumParams,
    pub omega_p: f64,
    pub tau_r: f64,
    /// (2 pi d w0 / c)^2 N / S.
    pub prefactor: f64,
}

impl SfContext {
    pub fn new(medium: MediumParams) -> Result<Self> {
        if medium.density_n <= 0.0 {
            return Err(Error::invalid("density_N", "superfluorescence needs N > 0"));
        }
        let ts = timescales(&medium).map_err(|_| {
            Error::invalid("medium", "superfluorescence needs a radiative timescale (d > 0, N_T > 1/(2 pi))")
        })?;
        let t = &medium.transition;
        let k = 2.0 * PI * t.dipole_d * t.omega0 / C_LIGHT;
        Ok(SfContext {
            medium,
            omega_p: medium.omega_p(),
            tau_r: ts.tau_r,
            prefactor: k * k * medium.density_n / medium.area_s,
        })
    }

    /// Kernel argument omega_p sqrt((x/c)(t - x/c)).
    fn kernel_argument(&self, x: f64, t: f64) -> f64 {
        let s = x / C_LIGHT;
        self.omega_p * (s * (t - s)).max(0.0).sqrt()
    }
}

/// <F^+ F>(L, t): prefactor * integral_0^L theta(t - x/c) I0^2(omega_p sqrt((x/c)(t - x/c))) dx.
pub fn sf_intensity(ctx: &SfContext, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", "must be finite and >= 0"));
    }
    let l = ctx.medium.length_l;
    // the step function cuts the integral at x = ct
    let upper = l.min(C_LIGHT * t);
    if upper == 0.0 {
        return Ok(0.0);
    }
    let x_peak = (0.5 * C_LIGHT * t).min(upper);
    let y_max = ctx.kernel_argument(x_peak, t);
    // I0^2 ~ e^{2y} / (2 pi y) overflows a double past y ~ 354
    if y_max > 354.0 {
        return Err(Error::Overflow(y_max));
    }
    let q = integrate(
        |x| {
            let y = ctx.kernel_argument(x, t);
            let i0 = bessel_i0(y).unwrap_or(f64::INFINITY);
            i0 * i0
        },
        0.0,
        upper,
        QUADRATURE_RTOL,
        0.0,
    )?;
    Ok(ctx.prefactor * q.value)
}

/// Short-time limit: prefactor * c t.
pub fn sf_intensity_short_time(ctx: &SfContext, t: f64) -> f64 {
    ctx.prefactor * C_LIGHT * t
}

/// Long-time saddle estimate (1/8 pi)(2 pi hbar w0 / (S c t)) e^{4 sqrt(t / tau_R)}.
pub fn sf_intensity_asymptotic(ctx: &SfContext, t: f64) -> f64 {
    ln_asymptotic(ctx, t).exp()
}

fn ln_asymptotic(ctx: &SfContext, t: f64) -> f64 {
    let w0 = ctx.medium.transition.omega0;
    (HBAR * w0 / (4.0 * ctx.medium.area_s * C_LIGHT * t)).ln() + 4.0 * (t / ctx.tau_r).sqrt()
}

/// Delay of the superfluorescent peak by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfDelay {
    /// tau_R [ln(2 pi N_T) / 4]^2.
    pub closed_form: f64,
    /// Time at which the radiated photon flux from the asymptotic intensity
    /// equals N_T photons per tau_R.
    pub root_solve: f64,
    /// closed_form / root_solve.
    pub ratio: f64,
}

pub fn sf_delay(ctx: &SfContext) -> Result<SfDelay> {
    let closed_form = timescales(&ctx.medium)?.tau_d;
    let m = &ctx.medium;
    let w0 = m.transition.omega0;
    // (c / 2 pi) <F^+F>(t) = N_T hbar w0 / (S tau_R)
    let ln_target = (m.atom_count_nt * HBAR * w0 / (m.area_s * ctx.tau_r)).ln();
    let ln_flux = |t: f64| (C_LIGHT / (2.0 * PI)).ln() + ln_asymptotic(ctx, t);
    let h = |t: f64| ln_flux(t) - ln_target;
    // ln flux has a single minimum at t = tau_R / 4; the physical root lies beyond it
    let lo = 0.25 * ctx.tau_r;
    if h(lo) >= 0.0 {
        return Err(Error::Bracket(format!(
            "flux already exceeds the target at its minimum (N_T = {:e})",
            m.atom_count_nt
        )));
    }
    let mut hi = 2.0 * lo;
    while h(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 * ctx.tau_r {
            return Err(Error::Bracket("no upper bracket for the delay root".into()));
        }
    }
    let root_solve = bisect(h, lo, hi, 1e-14)?;
    Ok(SfDelay { closed_form, root_solve, ratio: closed_form / root_solve })
}
