//! Stochastic c-number Maxwell-Bloch integration along characteristics.
//!
//! Independent variables are eta = z and zeta = t - z/c. Dipole noise is
//! seeded at lab time 0, i.e. on the wedge edge zeta = -eta/c, so the grid
//! covers zeta >= -eta/c with d_zeta = d_eta / c.

mod analytic;
mod ensemble;

pub use analytic::{analytic_amplifier_field, analytic_sf_field, Realization};
pub use ensemble::{ensemble_statistics, run_ensemble, run_traces, thread_cap, EnsembleStats, Mode};

use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};
use crate::medium::{group_velocity, MediumParams, PulseParams};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Slack allowed on the Bloch-sphere bound |s|^2 <= (1 + sigma_z)/2.
pub const BLOCH_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbGrid {
    pub n_z: usize,
    pub length_l: f64,
    pub d_eta: f64,
    pub d_zeta: f64,
    /// Exit lab times are i * d_zeta for i = 0..=n_t.
    pub n_t: usize,
}

impl MbGrid {
    /// Grid of `n_z` cells over [0, L] recording the exit field for lab times in [0, window_t].
    pub fn new(n_z: usize, length_l: f64, window_t: f64) -> Result<Self> {
        if n_z < 1 {
            return Err(Error::invalid("n_z", "need at least one cell"));
        }
        if !(length_l > 0.0 && length_l.is_finite()) {
            return Err(Error::invalid("length_L", "must be finite and > 0"));
        }
        let d_eta = length_l / n_z as f64;
        let d_zeta = d_eta / C_LIGHT;
        if !(window_t >= length_l / C_LIGHT * (1.0 - 1e-12)) {
            return Err(Error::invalid("window_t", "window must cover at least the transit time L/c"));
        }
        let n_t = ((window_t / d_zeta) - 1e-9).ceil().max(n_z as f64) as usize;
        Ok(MbGrid { n_z, length_l, d_eta, d_zeta, n_t })
    }

    pub fn exit_times(&self) -> Vec<f64> {
        (0..=self.n_t).map(|i| i as f64 * self.d_zeta).collect()
    }

    pub fn z(&self, j: usize) -> f64 {
        j as f64 * self.d_eta
    }

    /// Dual-cell widths: d_eta inside, d_eta / 2 at both ends.
    pub fn node_weights(&self) -> Vec<f64> {
        (0..=self.n_z)
            .map(|j| if j == 0 || j == self.n_z { 0.5 * self.d_eta } else { self.d_eta })
            .collect()
    }

    /// Largest zeta index.
    fn n_end(&self) -> i64 {
        self.n_t as i64 - self.n_z as i64
    }
}

/// Identifies one noise realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseSeed {
    pub rng_seed: u64,
    pub realization_index: u64,
}

/// Complex circular Gaussian dipoles at lab time 0 with variance L / (N_T w_j) per node.
pub fn seed_dipole_noise(grid: &MbGrid, medium: &MediumParams, seed: NoiseSeed) -> Result<Vec<Complex64>> {
    let nt = medium.atom_count_nt;
    if !(nt > 0.0) {
        return Err(Error::invalid("medium", "noise seeding needs N_T > 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.rng_seed);
    rng.set_stream(seed.realization_index);
    Ok(grid
        .node_weights()
        .iter()
        .map(|w| {
            let sd = (0.5 * grid.length_l / (nt * w)).sqrt();
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(sd * re, sd * im)
        })
        .collect())
}

/// Where the initial dipoles come from.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSource {
    Off,
    Seeded(NoiseSeed),
    /// One value per node (n_z + 1 values).
    Given(Vec<Complex64>),
}

impl NoiseSource {
    fn dipoles(&self, grid: &MbGrid, medium: &MediumParams) -> Result<Vec<Complex64>> {
        match self {
            NoiseSource::Off => Ok(vec![Complex64::new(0.0, 0.0); grid.n_z + 1]),
            NoiseSource::Seeded(s) => seed_dipole_noise(grid, medium, *s),
            NoiseSource::Given(v) => {
                if v.len() != grid.n_z + 1 {
                    return Err(Error::invalid("dipoles", "need one value per node (n_z + 1)"));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbOptions {
    /// Keep the dipole damping beta in the polarization equation.
    pub keep_beta_in_s: bool,
    /// Keep the -2 beta (1 + sigma_z) decay when sigma_z is dynamic.
    pub keep_beta_in_sigma_z: bool,
    /// Evolve the inversion instead of freezing it at 1.
    pub sigma_z_dynamic: bool,
    /// Inject the pulse at z = 0.
    pub include_signal: bool,
    /// Lab time of the input pulse peak at z = 0; defaults to 4 tau_p.
    pub signal_center: Option<f64>,
    /// Keep F, s and sigma_z at every node.
    pub record_state: bool,
}

impl Default for MbOptions {
    fn default() -> Self {
        MbOptions {
            keep_beta_in_s: true,
            keep_beta_in_sigma_z: true,
            sigma_z_dynamic: false,
            include_signal: true,
            signal_center: None,
            record_state: false,
        }
    }
}

/// Fields at every node; column j holds zeta indices -j..=n_end.
#[derive(Debug, Clone, PartialEq)]
pub struct MbState {
    pub field: Vec<Vec<Complex64>>,
    pub polarization: Vec<Vec<Complex64>>,
    pub sigma_z: Vec<Vec<f64>>,
}

impl MbState {
    /// (F, s, sigma_z) at node (j, n), if it lies on the grid.
    pub fn at(&self, j: usize, n: i64) -> Option<(Complex64, Complex64, f64)> {
        let idx = n + j as i64;
        if j >= self.field.len() || idx < 0 || idx as usize >= self.field[j].len() {
            return None;
        }
        let i = idx as usize;
        Some((self.field[j][i], self.polarization[j][i], self.sigma_z[j][i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MbHistory {
    pub grid: MbGrid,
    /// F(L, t) at the exit times of the grid.
    pub exit_field: Vec<Complex64>,
    /// The dipoles the run started from.
    pub dipoles: Vec<Complex64>,
    pub state: Option<MbState>,
}

impl MbHistory {
    pub fn exit_times(&self) -> Vec<f64> {
        self.grid.exit_times()
    }
}

/// Coupling constants: dF/deta = i kappa s, ds/dzeta = -gamma s - i alpha sigma_z F.
#[derive(Debug, Clone, Copy)]
struct Coupling {
    kappa: f64,
    alpha: f64,
    gamma: Complex64,
    beta_sigma: f64,
    /// Initial (and, when frozen, constant) inversion.
    sigma0: f64,
}

fn coupling(medium: &MediumParams, gamma: Complex64, beta_sigma: f64) -> Coupling {
    let t = &medium.transition;
    Coupling {
        kappa: 2.0 * PI * medium.density_n * t.dipole_d * t.omega0 / C_LIGHT,
        alpha: t.dipole_d / HBAR,
        gamma,
        beta_sigma,
        sigma0: medium.inversion_w,
    }
}

/// Weights (a0, a1) of the exact integral of e^{-gamma (h - tau)} times the linear
/// interpolant of F over one step, plus e^{-gamma h}.
fn step_weights(gamma: Complex64, h: f64) -> (Complex64, Complex64, Complex64) {
    let z = gamma * h;
    let e = (-z).exp();
    let (w, v) = if z.norm() < 1e-3 {
        // series of (1 - e^{-z})/z and 1/z - (1 - e^{-z})/z^2
        let w = Complex64::new(1.0, 0.0) - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
        let v = Complex64::new(0.5, 0.0) - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
        (w * h, v * h)
    } else {
        let one_minus = Complex64::new(1.0, 0.0) - e;
        let w = one_minus / gamma;
        let v = (Complex64::new(1.0, 0.0) - one_minus / z) / gamma;
        (w, v)
    };
    (w - v, v, e)
}

struct Run<'a> {
    grid: &'a MbGrid,
    cp: Coupling,
    dynamic: bool,
    check_bloch: bool,
    record: bool,
}

impl Run<'_> {
    fn execute(&self, dipoles: &[Complex64], input: &dyn Fn(f64) -> Complex64) -> Result<(Vec<Complex64>, Option<MbState>)> {
        let g = self.grid;
        let h = g.d_zeta;
        let (a0, a1, e) = step_weights(self.cp.gamma, h);
        let ia = Complex64::new(0.0, self.cp.alpha);
        let amat = Complex64::new(0.0, 0.5 * self.cp.kappa * g.d_eta);
        let n_end = g.n_end();
        let zero = Complex64::new(0.0, 0.0);

        let mut state = if self.record {
            Some(MbState { field: Vec::new(), polarization: Vec::new(), sigma_z: Vec::new() })
        } else {
            None
        };

        // column 0: the field is the injected input
        let len0 = (n_end + 1) as usize;
        let mut f_col: Vec<Complex64> = (0..len0).map(|i| input(i as f64 * h)).collect();
        let mut s_col = vec![zero; len0];
        let mut z_col = vec![self.cp.sigma0; len0];
        s_col[0] = dipoles[0];
        for i in 1..len0 {
            let (s, sz) = self.s_update(s_col[i - 1], z_col[i - 1], f_col[i - 1], f_col[i], a0, a1, e, ia, h);
            s_col[i] = s;
            z_col[i] = sz;
            self.bloch(&s, sz, 0, i as i64)?;
        }
        if let Some(st) = state.as_mut() {
            st.field.push(f_col.clone());
            st.polarization.push(s_col.clone());
            st.sigma_z.push(z_col.clone());
        }

        for j in 1..=g.n_z {
            let len = (n_end + j as i64 + 1) as usize;
            let mut f_new = vec![zero; len];
            let mut s_new = vec![zero; len];
            let mut z_new = vec![self.cp.sigma0; len];
            s_new[0] = dipoles[j];
            for i in 1..len {
                // same zeta on the previous column sits one index lower
                let fp = f_col[i - 1] + amat * s_col[i - 1];
                let (mut s, mut sz) = (zero, z_new[i - 1]);
                let mut sigma = z_new[i - 1];
                let passes = if self.dynamic { 2 } else { 1 };
                for _ in 0..passes {
                    let b = -ia * sigma * a1;
                    let ab = amat * b;
                    if ab.norm() >= 0.5 {
                        return Err(Error::StepSize(format!(
                            "coupling per cell {:e} too large; refine the grid",
                            ab.norm()
                        )));
                    }
                    let sp = e * s_new[i - 1] - ia * sigma * a0 * f_new[i - 1];
                    s = (sp + b * fp) / (Complex64::new(1.0, 0.0) - ab);
                    let f = fp + amat * s;
                    f_new[i] = f;
                    if self.dynamic {
                        sz = self.sigma_update(z_new[i - 1], s_new[i - 1], f_new[i - 1], s, f, h);
                        sigma = 0.5 * (z_new[i - 1] + sz);
                    }
                }
                s_new[i] = s;
                z_new[i] = sz;
                self.bloch(&s, sz, j, i as i64 - j as i64)?;
            }
            f_col = f_new;
            s_col = s_new;
            z_col = z_new;
            if let Some(st) = state.as_mut() {
                st.field.push(f_col.clone());
                st.polarization.push(s_col.clone());
                st.sigma_z.push(z_col.clone());
            }
        }
        Ok((f_col, state))
    }

    #[allow(clippy::too_many_arguments)]
    fn s_update(
        &self,
        s_prev: Complex64,
        z_prev: f64,
        f_prev: Complex64,
        f_now: Complex64,
        a0: Complex64,
        a1: Complex64,
        e: Complex64,
        ia: Complex64,
        h: f64,
    ) -> (Complex64, f64) {
        let mut sigma = z_prev;
        let mut s = e * s_prev - ia * sigma * (a0 * f_prev + a1 * f_now);
        if !self.dynamic {
            return (s, z_prev);
        }
        let mut sz = z_prev;
        for _ in 0..2 {
            s = e * s_prev - ia * sigma * (a0 * f_prev + a1 * f_now);
            sz = self.sigma_update(z_prev, s_prev, f_prev, s, f_now, h);
            sigma = 0.5 * (z_prev + sz);
        }
        (s, sz)
    }

    /// Trapezoid step of d sigma_z / d zeta = -2 beta (1 + sigma_z) - 4 alpha Im(s* F).
    fn sigma_update(&self, z_prev: f64, s0: Complex64, f0: Complex64, s1: Complex64, f1: Complex64, h: f64) -> f64 {
        let drive = -4.0 * self.cp.alpha * 0.5 * ((s0.conj() * f0).im + (s1.conj() * f1).im);
        let b = self.cp.beta_sigma * h;
        (z_prev * (1.0 - b) - 2.0 * b + h * drive) / (1.0 + b)
    }

    fn bloch(&self, s: &Complex64, sz: f64, j: usize, n: i64) -> Result<()> {
        if !self.check_bloch {
            return Ok(());
        }
        let s2 = s.norm_sqr();
        let bound = 0.5 * (1.0 + sz);
        if s2 > bound + BLOCH_EPS || !s2.is_finite() {
            return Err(Error::BlochBound { eta: j, zeta: n, s2, bound });
        }
        Ok(())
    }
}

/// Resonant superfluorescence from dipole noise: Delta = 0, frozen inversion, no input field.
pub fn integrate_sf(grid: &MbGrid, medium: &MediumParams, noise: &NoiseSource) -> Result<MbHistory> {
    integrate_sf_with(grid, medium, noise, false)
}

pub fn integrate_sf_with(grid: &MbGrid, medium: &MediumParams, noise: &NoiseSource, record_state: bool) -> Result<MbHistory> {
    check_grid_medium(grid, medium)?;
    let dipoles = noise.dipoles(grid, medium)?;
    let run = Run {
        grid,
        cp: coupling(medium, Complex64::new(0.0, 0.0), 0.0),
        dynamic: false,
        check_bloch: false,
        record: record_state,
    };
    let (exit_field, state) = run.execute(&dipoles, &|_| Complex64::new(0.0, 0.0))?;
    Ok(MbHistory { grid: *grid, exit_field, dipoles, state })
}

fn check_grid_medium(grid: &MbGrid, medium: &MediumParams) -> Result<()> {
    if (grid.length_l - medium.length_l).abs() > 1e-12 * medium.length_l {
        return Err(Error::invalid("grid", "grid length must equal the medium length"));
    }
    Ok(())
}

/// Input envelope amplitude at z = 0 for a pulse of q photons.
pub fn input_amplitude(medium: &MediumParams, pulse: &PulseParams) -> Result<f64> {
    let vg = group_velocity(medium, pulse.detuning_delta)?.v_g;
    Ok((pulse.photon_number_q * 2.0 * PI * HBAR * medium.transition.omega0
        / (vg * medium.area_s * pulse.duration_tau_p * PI.sqrt()))
    .sqrt())
}

/// Default lab time of the input pulse peak.
pub fn signal_center(pulse: &PulseParams, options: &MbOptions) -> f64 {
    options.signal_center.unwrap_or(4.0 * pulse.duration_tau_p)
}

/// Detuned amplifier with an injected Gaussian pulse and dipole noise.
pub fn integrate_amplifier(
    grid: &MbGrid,
    medium: &MediumParams,
    pulse: &PulseParams,
    noise: &NoiseSource,
    options: &MbOptions,
) -> Result<MbHistory> {
    check_grid_medium(grid, medium)?;
    let dipoles = noise.dipoles(grid, medium)?;
    let beta = medium.transition.beta;
    let gamma = Complex64::new(if options.keep_beta_in_s { beta } else { 0.0 }, pulse.detuning_delta);
    let beta_sigma = if options.keep_beta_in_sigma_z { beta } else { 0.0 };
    let amp = if options.include_signal { input_amplitude(medium, pulse)? } else { 0.0 };
    let tc = signal_center(pulse, options);
    let tp = pulse.duration_tau_p;
    let input = move |t: f64| {
        let u = (t - tc) / tp;
        Complex64::new(amp * (-0.5 * u * u).exp(), 0.0)
    };
    let run = Run {
        grid,
        cp: coupling(medium, gamma, beta_sigma),
        dynamic: options.sigma_z_dynamic,
        check_bloch: true,
        record: options.record_state,
    };
    let (exit_field, state) = run.execute(&dipoles, &input)?;
    Ok(MbHistory { grid: *grid, exit_field, dipoles, state })
}
