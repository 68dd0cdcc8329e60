//! Leapfrog solver for E_tt = c^2 E_xx + c^2 m^2 E.

use super::{BranchRule, Grid1D, GridField, SpectralPacket};
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Zero field outside the grid.
    #[default]
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdState {
    pub grid: Grid1D,
    pub field_now: Vec<Complex64>,
    pub field_prev: Vec<Complex64>,
    pub dt: f64,
    pub mass_m: f64,
    pub c: f64,
    pub time: f64,
    pub boundary: Boundary,
}

impl FdState {
    pub fn new(
        grid: Grid1D,
        field_now: Vec<Complex64>,
        field_prev: Vec<Complex64>,
        dt: f64,
        mass_m: f64,
        c: f64,
        boundary: Boundary,
    ) -> Result<Self> {
        if field_now.len() != grid.n_points || field_prev.len() != grid.n_points {
            return Err(Error::invalid("field", "length must equal n_points"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", "must be finite and > 0"));
        }
        if !(c > 0.0 && mass_m >= 0.0) {
            return Err(Error::invalid("c", "need c > 0 and m >= 0"));
        }
        let cfl = c * dt / grid.dx;
        if cfl > 1.0 + 1e-12 {
            return Err(Error::invalid("dt", format!("CFL number {cfl} exceeds 1")));
        }
        Ok(FdState { grid, field_now, field_prev, dt, mass_m, c, time: 0.0, boundary })
    }

    /// Starts from a packet: E(0) from its oscillatory part, E(-dt) from the
    /// same single-branch evolution run backwards one step.
    pub fn from_packet(packet: &SpectralPacket, dt: f64, boundary: Boundary) -> Result<Self> {
        let osc = packet.with_branch(BranchRule::OscillatoryOnly);
        let now = osc.synthesize_at(0.0)?.samples;
        let prev = osc.synthesize_at(-dt)?.samples;
        FdState::new(packet.grid, now, prev, dt, packet.mass_m, packet.c, boundary)
    }

    pub fn cfl(&self) -> f64 {
        self.c * self.dt / self.grid.dx
    }

    pub fn to_field(&self) -> GridField {
        GridField { grid: self.grid, samples: self.field_now.clone(), time: self.time }
    }

    fn step(&mut self, next: &mut Vec<Complex64>) {
        let n = self.grid.n_points;
        let nu2 = self.cfl() * self.cfl();
        let mass_term = (self.c * self.mass_m * self.dt).powi(2);
        let zero = Complex64::new(0.0, 0.0);
        let e = &self.field_now;
        let p = &self.field_prev;
        for j in 0..n {
            let (l, r) = match self.boundary {
                Boundary::Dirichlet => (
                    if j == 0 { zero } else { e[j - 1] },
                    if j + 1 == n { zero } else { e[j + 1] },
                ),
                Boundary::Periodic => (e[(j + n - 1) % n], e[(j + 1) % n]),
            };
            next[j] = 2.0 * e[j] - p[j] + nu2 * (l - 2.0 * e[j] + r) + mass_term * e[j];
        }
        std::mem::swap(&mut self.field_prev, &mut self.field_now);
        std::mem::swap(&mut self.field_now, next);
        self.time += self.dt;
    }
}

/// Advances the state by `n_steps` leapfrog steps.
pub fn fd_propagate(mut state: FdState, n_steps: usize) -> FdState {
    let mut next = vec![Complex64::new(0.0, 0.0); state.grid.n_points];
    for _ in 0..n_steps {
        state.step(&mut next);
    }
    state
}
