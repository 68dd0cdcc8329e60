//! Complete, truncated and residual wavepackets under the tachyonic dispersion
//! omega_k = sgn(k) c sqrt(k^2 - m^2), plus a leapfrog time-domain solver.

mod dd;
mod fd;
mod io;

pub use fd::{fd_propagate, Boundary, FdState};
pub use io::{read_binary, read_csv, write_binary, write_csv};

use crate::error::{Error, Result};
use crate::numerics::linear_fit;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Largest mode amplification factor accepted before failing.
pub const OVERFLOW_CAP: f64 = 1e300;

/// Uniform periodic x-grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub dx: f64,
    pub n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, dx: f64, n_points: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::invalid("dx", "must be finite and > 0"));
        }
        if !x_min.is_finite() {
            return Err(Error::invalid("x_min", "must be finite"));
        }
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::invalid("n_points", "must be a power of two >= 16"));
        }
        Ok(Grid1D { x_min, dx, n_points })
    }

    /// Grid of `n_points` cells of width `dx` centred on x = 0.
    pub fn centered(dx: f64, n_points: usize) -> Result<Self> {
        Grid1D::new(-((n_points / 2) as f64) * dx, dx, n_points)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn length(&self) -> f64 {
        self.n_points as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n_points - 1)
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Wavenumber of bin `n` in transform order.
    pub fn k(&self, n: usize) -> f64 {
        let n = n as i64;
        let nn = self.n_points as i64;
        let s = if n < nn / 2 { n } else { n - nn };
        s as f64 * self.dk()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max()
    }
}

/// Frequency assignment inside the gap |k| < m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    /// Gap amplitudes are discarded.
    OscillatoryOnly,
    /// omega_k = +i c sqrt(m^2 - k^2): amplitude grows as e^{c sqrt(m^2 - k^2) t}.
    #[default]
    GrowingBranch,
    /// omega_k = -i c sqrt(m^2 - k^2).
    DecayingBranch,
}

impl BranchRule {
    /// omega_k, or `None` when the rule discards the mode.
    pub fn omega(self, k: f64, mass_m: f64, c: f64) -> Option<Complex64> {
        let d = k * k - mass_m * mass_m;
        if d >= 0.0 {
            let w = c * d.sqrt();
            return Some(Complex64::new(if k < 0.0 { -w } else { w }, 0.0));
        }
        let r = c * (-d).sqrt();
        match self {
            BranchRule::OscillatoryOnly => None,
            BranchRule::GrowingBranch => Some(Complex64::new(0.0, r)),
            BranchRule::DecayingBranch => Some(Complex64::new(0.0, -r)),
        }
    }
}

/// Complex field on a grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: Grid1D,
    pub samples: Vec<Complex64>,
    pub time: f64,
}

impl GridField {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>, time: f64) -> Result<Self> {
        if samples.len() != grid.n_points {
            return Err(Error::invalid("samples", "length must equal n_points"));
        }
        Ok(GridField { grid, samples, time })
    }

    pub fn zeros(grid: Grid1D, time: f64) -> Self {
        GridField { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n_points], time }
    }

    /// sum |psi|^2 dx.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Intensity-weighted mean position.
    pub fn centroid(&self) -> Result<f64> {
        let mut w = 0.0;
        let mut wx = 0.0;
        for (i, z) in self.samples.iter().enumerate() {
            let a = z.norm_sqr();
            w += a;
            wx += a * self.grid.x(i);
        }
        if !(w > 0.0) {
            return Err(Error::Degenerate("zero-intensity field".into()));
        }
        Ok(wx / w)
    }

    /// Pointwise sum of two fields on the same grid.
    pub fn add(&self, other: &GridField) -> Result<GridField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &GridField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<GridField> {
        if self.grid != other.grid {
            return Err(Error::invalid("grid", "fields live on different grids"));
        }
        Ok(GridField {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect(),
            time: self.time,
        })
    }

    /// Copy keeping only samples where `keep(x)` holds.
    pub fn masked(&self, keep: impl Fn(f64) -> bool) -> GridField {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, z)| if keep(self.grid.x(i)) { *z } else { Complex64::new(0.0, 0.0) })
            .collect();
        GridField { grid: self.grid, samples, time: self.time }
    }
}

/// Spectral amplitude g(k) with Psi(x, t) = sum_k dk g(k) e^{i(kx - omega_k t)}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPacket {
    pub grid: Grid1D,
    /// g(k) per bin, in transform order (see [`Grid1D::k`]).
    pub g_of_k: Vec<Complex64>,
    pub branch: BranchRule,
    pub mass_m: f64,
    pub c: f64,
}

impl SpectralPacket {
    /// Forward transform of a sampled field: g(k) = (dx / 2 pi) sum_j psi_j e^{-i k x_j}.
    pub fn from_field(field: &GridField, mass_m: f64, branch: BranchRule, c: f64) -> Result<Self> {
        check_mass_c(mass_m, c)?;
        let grid = field.grid;
        let mut buf = field.samples.clone();
        FftPlanner::new().plan_fft_forward(grid.n_points).process(&mut buf);
        // gap bins are amplified by up to e^{cmt}, so they get the accurate sum
        let gap: Vec<usize> = (0..grid.n_points).filter(|&n| grid.k(n).abs() < mass_m).collect();
        for (n, z) in gap.iter().zip(dd::dft_bins(&field.samples, &gap)) {
            buf[*n] = z;
        }
        let scale = grid.dx / (2.0 * PI);
        for (n, z) in buf.iter_mut().enumerate() {
            let k = grid.k(n);
            *z *= Complex64::from_polar(scale, -k * grid.x_min);
        }
        Ok(SpectralPacket { grid, g_of_k: buf, branch, mass_m, c })
    }

    /// Fraction of spectral weight inside the gap |k| < m.
    pub fn gap_fraction(&self) -> f64 {
        let mut inside = 0.0;
        let mut total = 0.0;
        for (n, g) in self.g_of_k.iter().enumerate() {
            let a = g.norm_sqr();
            total += a;
            if self.grid.k(n).abs() < self.mass_m {
                inside += a;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            inside / total
        }
    }

    /// Gap weight below 1e-12 of the total.
    pub fn safe_support(&self) -> bool {
        self.gap_fraction() < 1e-12
    }

    /// Largest |e^{-i omega_k t}| over the bins the branch rule keeps.
    pub fn max_growth_exponent(&self, t: f64) -> f64 {
        (0..self.grid.n_points)
            .filter_map(|n| self.branch.omega(self.grid.k(n), self.mass_m, self.c))
            .map(|w| w.im * t)
            .fold(0.0, f64::max)
    }

    /// Psi(x, t) on the grid.
    pub fn synthesize(&self, t: f64) -> Result<GridField> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", "must be finite and >= 0"));
        }
        self.synthesize_at(t)
    }

    pub(crate) fn synthesize_at(&self, t: f64) -> Result<GridField> {
        let growth = self.max_growth_exponent(t);
        if growth > OVERFLOW_CAP.ln() {
            return Err(Error::Overflow(growth.exp()));
        }
        let grid = self.grid;
        let dk = grid.dk();
        let mut buf: Vec<Complex64> = self
            .g_of_k
            .iter()
            .enumerate()
            .map(|(n, g)| {
                let k = grid.k(n);
                match self.branch.omega(k, self.mass_m, self.c) {
                    None => Complex64::new(0.0, 0.0),
                    Some(w) => {
                        // e^{i k x_min} e^{-i omega t}
                        let phase = Complex64::new(w.im * t, k * grid.x_min - w.re * t).exp();
                        g * dk * phase
                    }
                }
            })
            .collect();
        FftPlanner::new().plan_fft_inverse(grid.n_points).process(&mut buf);
        Ok(GridField { grid, samples: buf, time: t })
    }

    /// Same amplitudes under another branch rule.
    pub fn with_branch(&self, branch: BranchRule) -> Self {
        SpectralPacket { branch, ..self.clone() }
    }
}

fn check_mass_c(mass_m: f64, c: f64) -> Result<()> {
    if !(mass_m >= 0.0 && mass_m.is_finite()) {
        return Err(Error::invalid("mass_m", "must be finite and >= 0"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("c", "must be finite and > 0"));
    }
    Ok(())
}

/// Group velocity k0 c / sqrt(k0^2 - m^2) of a packet centred at k0 outside the gap.
pub fn tachyon_group_velocity(k0: f64, mass_m: f64, c: f64) -> Result<f64> {
    let d = k0 * k0 - mass_m * mass_m;
    if !(d > 0.0) {
        return Err(Error::Domain("group velocity undefined for |k0| <= m".into()));
    }
    Ok(k0.abs() * c / d.sqrt())
}

/// Gaussian packet g(k) ~ exp(-(k - k0)^2 / 2 sigma_k^2) exp(-i k x0), normalized to unit norm.
pub fn make_gaussian_packet(
    grid: Grid1D,
    k0: f64,
    sigma_k: f64,
    x0: f64,
    mass_m: f64,
    branch: BranchRule,
    c: f64,
) -> Result<SpectralPacket> {
    check_mass_c(mass_m, c)?;
    if !(sigma_k > 0.0 && sigma_k.is_finite()) {
        return Err(Error::invalid("sigma_k", "must be finite and > 0"));
    }
    if !grid.contains(x0) {
        return Err(Error::invalid("x0", "must lie inside the grid"));
    }
    let mut g: Vec<Complex64> = (0..grid.n_points)
        .map(|n| {
            let k = grid.k(n);
            let u = (k - k0) / sigma_k;
            Complex64::from_polar((-0.5 * u * u).exp(), -k * x0)
        })
        .collect();
    // discrete Parseval: sum |psi|^2 dx = 2 pi sum |g|^2 dk
    let norm_sq = 2.0 * PI * grid.dk() * g.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if !(norm_sq > 0.0) {
        return Err(Error::Degenerate("packet has no resolved spectral weight".into()));
    }
    let s = 1.0 / norm_sq.sqrt();
    for z in &mut g {
        *z *= s;
    }
    Ok(SpectralPacket { grid, g_of_k: g, branch, mass_m, c })
}

/// Splits a field at `cut_x`: samples with x >= cut_x go to the first part.
pub fn truncate_split(field: &GridField, cut_x: f64) -> (GridField, GridField) {
    let zero = Complex64::new(0.0, 0.0);
    let mut phi = Vec::with_capacity(field.samples.len());
    let mut r = Vec::with_capacity(field.samples.len());
    for (i, z) in field.samples.iter().enumerate() {
        if field.grid.x(i) >= cut_x {
            phi.push(*z);
            r.push(zero);
        } else {
            phi.push(zero);
            r.push(*z);
        }
    }
    (
        GridField { grid: field.grid, samples: phi, time: field.time },
        GridField { grid: field.grid, samples: r, time: field.time },
    )
}

/// Evolves a (truncated) field for a time t under single-branch dispersion.
pub fn evolve_truncated(field: &GridField, mass_m: f64, branch: BranchRule, c: f64, t: f64) -> Result<GridField> {
    let p = SpectralPacket::from_field(field, mass_m, branch, c)?;
    let mut out = p.synthesize(t)?;
    out.time = field.time + t;
    Ok(out)
}

/// Principal-value amplitudes zeta(k) = g/2 - (i / 2 pi) PV int g(k') / (k - k') dk'
/// and xi(k) = g(k) - zeta(k), in transform order.
///
/// The principal value uses the alternating-point rule: only odd offsets
/// k - k' = j dk contribute, each with weight 2 dk.
pub fn plemelj_amplitudes(packet: &SpectralPacket) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = packet.grid.n_points;
    let half = n / 2;
    // ascending-k order: index a <-> transform bin (a + half) mod n
    let ordered: Vec<Complex64> = (0..n).map(|a| packet.g_of_k[(a + half) % n]).collect();
    let m = 2 * n;
    let mut gbuf = vec![Complex64::new(0.0, 0.0); m];
    gbuf[..n].copy_from_slice(&ordered);
    let mut kern = vec![Complex64::new(0.0, 0.0); m];
    for j in (1..n).step_by(2) {
        let w = 2.0 / j as f64;
        kern[j] = Complex64::new(w, 0.0);
        kern[m - j] = Complex64::new(-w, 0.0);
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    let inv = planner.plan_fft_inverse(m);
    fwd.process(&mut gbuf);
    fwd.process(&mut kern);
    for (a, b) in gbuf.iter_mut().zip(&kern) {
        *a *= b / m as f64;
    }
    inv.process(&mut gbuf);
    let mut zeta = vec![Complex64::new(0.0, 0.0); n];
    let mut xi = vec![Complex64::new(0.0, 0.0); n];
    let i_over_2pi = Complex64::new(0.0, 1.0 / (2.0 * PI));
    for a in 0..n {
        let bin = (a + half) % n;
        let g = packet.g_of_k[bin];
        let z = g * 0.5 - i_over_2pi * gbuf[a];
        zeta[bin] = z;
        xi[bin] = g - z;
    }
    (zeta, xi)
}

/// Superluminal (x > ct) and luminal (x <= ct) parts of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct SlSplit {
    pub s_part: GridField,
    pub l_part: GridField,
    pub s_norm: f64,
    pub l_norm: f64,
}

pub fn classify_sl(field: &GridField, t: f64, c: f64) -> SlSplit {
    let front = c * t;
    let s_part = field.masked(|x| x > front);
    let l_part = field.masked(|x| x <= front);
    let s_norm = s_part.norm();
    let l_norm = l_part.norm();
    SlSplit { s_part, l_part, s_norm, l_norm }
}

/// Superluminal analysis window (ct, x_max - ct): the part of x > ct that
/// periodic images of the left edge cannot reach within t.
pub fn causal_window(grid: &Grid1D, c: f64, t: f64) -> (f64, f64) {
    (c * t, grid.x_max() - c * t)
}

/// Copy of the field restricted to the superluminal analysis window.
pub fn superluminal_window(field: &GridField, c: f64, t: f64) -> GridField {
    let (lo, hi) = causal_window(&field.grid, c, t);
    field.masked(|x| x > lo && x < hi)
}

/// Minimum periodic-domain length for propagating a packet of velocity v_g for time t.
pub fn required_domain_length(v_g: f64, c: f64, t: f64) -> f64 {
    4.0 * (v_g + c) * t
}

pub fn check_padding(grid: &Grid1D, v_g: f64, c: f64, t: f64) -> Result<()> {
    let need = required_domain_length(v_g, c, t);
    if grid.length() < need {
        return Err(Error::invalid(
            "grid",
            format!("periodic domain {:e} shorter than the required padding {:e}", grid.length(), need),
        ));
    }
    Ok(())
}

/// Norms of the luminal parts of the truncated, residual and complete packets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationReport {
    pub t: f64,
    pub phi_l_norm: f64,
    pub r_l_norm: f64,
    pub psi_l_norm: f64,
    /// || Phi^L + R^L - Psi^L ||.
    pub residual: f64,
    /// residual / ||Phi^L||.
    pub relative_residual: f64,
    /// ||Phi^L|| / ||Psi^L||.
    pub growth_ratio: f64,
    /// | ||Phi^L|| - ||R^L|| | / ||Phi^L||.
    pub norm_mismatch: f64,
}

/// Evolved truncated, residual and complete fields at time t.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub incident: GridField,
    pub complete: GridField,
    pub truncated: GridField,
    pub residual: GridField,
}

/// Truncates the packet at `cut_x` and evolves all three fields with the growing branch.
pub fn decompose(packet: &SpectralPacket, cut_x: f64, t: f64) -> Result<Decomposition> {
    let growing = packet.with_branch(BranchRule::GrowingBranch);
    let incident = growing.synthesize(0.0)?;
    let (phi0, r0) = truncate_split(&incident, cut_x);
    if t == 0.0 {
        return Ok(Decomposition { complete: incident.clone(), incident, truncated: phi0, residual: r0 });
    }
    let truncated = evolve_truncated(&phi0, packet.mass_m, BranchRule::GrowingBranch, packet.c, t)?;
    let residual = evolve_truncated(&r0, packet.mass_m, BranchRule::GrowingBranch, packet.c, t)?;
    // evolve the sampled incident field, not g(k): its rounding noise is what phi0 and r0 carry
    let complete = evolve_truncated(&incident, packet.mass_m, BranchRule::GrowingBranch, packet.c, t)?;
    Ok(Decomposition { incident, complete, truncated, residual })
}

pub fn cancellation_check(packet: &SpectralPacket, cut_x: f64, t: f64) -> Result<CancellationReport> {
    if t > 0.0 {
        check_padding(&packet.grid, packet_velocity(packet)?, packet.c, t)?;
    }
    let d = decompose(packet, cut_x, t)?;
    let c = packet.c;
    let phi_l = classify_sl(&d.truncated, t, c).l_part;
    let r_l = classify_sl(&d.residual, t, c).l_part;
    let psi_l = classify_sl(&d.complete, t, c).l_part;
    let resid = phi_l.add(&r_l)?.sub(&psi_l)?.norm();
    let phi_l_norm = phi_l.norm();
    let r_l_norm = r_l.norm();
    let psi_l_norm = psi_l.norm();
    let rel = |a: f64, b: f64| if b == 0.0 { if a == 0.0 { 0.0 } else { f64::INFINITY } } else { a / b };
    let report = CancellationReport {
        t,
        phi_l_norm,
        r_l_norm,
        psi_l_norm,
        residual: resid,
        relative_residual: rel(resid, phi_l_norm),
        growth_ratio: rel(phi_l_norm, psi_l_norm),
        norm_mismatch: rel((phi_l_norm - r_l_norm).abs(), phi_l_norm),
    };
    if t > 0.0 && report.growth_ratio < 10.0 {
        return Err(Error::Domain(format!(
            "T too small: growth factor {:e} below threshold 10",
            report.growth_ratio
        )));
    }
    Ok(report)
}

/// Group velocity at the spectral centroid of the packet's weight.
pub fn packet_velocity(packet: &SpectralPacket) -> Result<f64> {
    let mut w = 0.0;
    let mut wk = 0.0;
    for (n, g) in packet.g_of_k.iter().enumerate() {
        let a = g.norm_sqr();
        w += a;
        wk += a * packet.grid.k(n);
    }
    if !(w > 0.0) {
        return Err(Error::Degenerate("empty spectrum".into()));
    }
    let k0 = wk / w;
    if k0.abs() <= packet.mass_m {
        // centred in the gap: no oscillatory group velocity, bound by c
        return Ok(packet.c);
    }
    tachyon_group_velocity(k0, packet.mass_m, packet.c)
}

/// How the position of a field is located in [`measure_arrival`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrivalMode {
    Centroid,
    /// Rightmost position where |psi|^2 reaches this fraction of its maximum.
    Threshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalFit {
    pub velocity: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

fn front_position(field: &GridField, fraction: f64) -> Result<f64> {
    let a: Vec<f64> = field.samples.iter().map(|z| z.norm_sqr()).collect();
    let peak = a.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Degenerate("zero-intensity field".into()));
    }
    let level = fraction * peak;
    let i = a.iter().rposition(|&v| v >= level).expect("peak exceeds level");
    if i + 1 == a.len() {
        return Ok(field.grid.x(i));
    }
    // linear interpolation between the last sample above and the first below
    let f = (a[i] - level) / (a[i] - a[i + 1]);
    Ok(field.grid.x(i) + f * field.grid.dx)
}

pub fn measure_arrival(fields: &[GridField], mode: ArrivalMode) -> Result<ArrivalFit> {
    if fields.len() < 3 {
        return Err(Error::invalid("fields", "at least three time samples are needed"));
    }
    let mut ts = Vec::with_capacity(fields.len());
    let mut xs = Vec::with_capacity(fields.len());
    for f in fields {
        ts.push(f.time);
        xs.push(match mode {
            ArrivalMode::Centroid => f.centroid()?,
            ArrivalMode::Threshold(fr) => {
                if !(fr > 0.0 && fr <= 1.0) {
                    return Err(Error::invalid("threshold", "must lie in (0, 1]"));
                }
                front_position(f, fr)?
            }
        });
    }
    let (velocity, intercept, residual_rms) = linear_fit(&ts, &xs)?;
    Ok(ArrivalFit { velocity, intercept, residual_rms })
}

/// Amplitude growth rate from a log-linear fit of norms against time.
pub fn fit_growth_rate(times: &[f64], norms: &[f64]) -> Result<f64> {
    if norms.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Degenerate("non-positive norm in growth fit".into()));
    }
    let logs: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(times, &logs)?.0)
}

#[cfg(test)]
mod tests;
