//! Fast invariant checks behind the `selftest` subcommand.

use crate::amplifier_snr::{design_inputs, noise_intensity, peak_snr, vacuum_noise_crosscheck, SnrInputs};
use crate::error::Result;
use crate::maxwell_bloch::{run_ensemble, MbGrid, Mode};
use crate::medium::{gain_coefficient, MediumParams, PulseParams, TransitionSpec};
use crate::superfluorescence::{bessel_i0, sf_intensity, sf_intensity_short_time, SfContext};
use crate::wavepacket::{
    cancellation_check, fd_propagate, make_gaussian_packet, plemelj_amplitudes, tachyon_group_velocity, BranchRule,
    Boundary, FdState, Grid1D,
};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: [(&str, Check); 10] = [
    ("group velocity", group_velocity_check),
    ("plemelj sum rule", plemelj_check),
    ("luminal cancellation", cancellation),
    ("fd causality", fd_causality),
    ("snr forms", snr_forms),
    ("sf short time", sf_short_time),
    ("noise attribution", noise_attribution),
    ("bessel i0", bessel_values),
    ("gain identity", gain_identity),
    ("mb ensemble", mb_ensemble),
];

pub fn run_selftest() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, f)| match f() {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}

pub fn format_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!("{:<22} {}  {}\n", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail));
    }
    let n = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{n}/{} checks passed\n", results.len()));
    out
}

fn group_velocity_check() -> Result<(bool, String)> {
    let grid = Grid1D::centered(0.1, 1 << 12)?;
    let p = make_gaussian_packet(grid, 5.0, 0.5, -60.0, 1.0, BranchRule::OscillatoryOnly, 1.0)?;
    let t = 40.0;
    let v = (p.synthesize(t)?.centroid()? - p.synthesize(0.0)?.centroid()?) / t;
    let want = tachyon_group_velocity(5.0, 1.0, 1.0)?;
    let err = (v / want - 1.0).abs();
    Ok((err < 0.01, format!("v = {v:.6}, expected {want:.6}")))
}

fn plemelj_check() -> Result<(bool, String)> {
    let grid = Grid1D::centered(0.05, 1 << 12)?;
    let p = make_gaussian_packet(grid, 5.0, 0.5, 10.0, 1.0, BranchRule::GrowingBranch, 1.0)?;
    let (zeta, xi) = plemelj_amplitudes(&p);
    let scale = p.g_of_k.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = p
        .g_of_k
        .iter()
        .zip(zeta.iter().zip(&xi))
        .map(|(g, (z, x))| (z + x - g).norm())
        .fold(0.0, f64::max)
        / scale;
    Ok((worst < 1e-12, format!("max |zeta + xi - g| / max|g| = {worst:.2e}")))
}

fn cancellation() -> Result<(bool, String)> {
    let grid = Grid1D::centered(0.05, 1 << 14)?;
    let p = make_gaussian_packet(grid, 5.0, 0.5, 10.0, 1.0, BranchRule::GrowingBranch, 1.0)?;
    let r = cancellation_check(&p, 0.0, 30.0)?;
    Ok((
        r.relative_residual < 1e-8 && r.growth_ratio > 1e3,
        format!("residual {:.2e}, growth ratio {:.2e}", r.relative_residual, r.growth_ratio),
    ))
}

fn fd_causality() -> Result<(bool, String)> {
    let grid = Grid1D::new(-20.0, 0.05, 2048)?;
    let field: Vec<Complex64> = (0..grid.n_points)
        .map(|i| {
            let x = grid.x(i);
            if x < 0.0 {
                Complex64::new((-(x + 5.0) * (x + 5.0)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let steps = 1000;
    let state = FdState::new(grid, field.clone(), field, grid.dx, 1.0, 1.0, Boundary::Dirichlet)?;
    let out = fd_propagate(state, steps);
    let front = steps as f64 * grid.dx + grid.dx * 0.5;
    let leak = (0..grid.n_points)
        .filter(|i| grid.x(*i) > front)
        .map(|i| out.field_now[i].norm())
        .fold(0.0, f64::max);
    Ok((leak < 1e-14, format!("max |E| beyond the cone after {steps} steps = {leak:.1e}")))
}

fn snr_forms() -> Result<(bool, String)> {
    let i = design_inputs(3e15, 1e-9, 1e-11, 2.0, 1e-9, 1.0)?;
    let s = peak_snr(&i)?;
    let ok = (s.form_qa3 - 0.28209).abs() < 1e-5 && s.max_relative_deviation < 1e-10;
    Ok((ok, format!("peak {:.6}, form spread {:.1e}", s.form_qa3, s.max_relative_deviation)))
}

fn sf_short_time() -> Result<(bool, String)> {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0)?;
    let m = MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4)?.radiatively_broadened();
    let ctx = SfContext::new(m)?;
    let t = 1e-3 * ctx.tau_r;
    let err = (sf_intensity(&ctx, t)? / sf_intensity_short_time(&ctx, t) - 1.0).abs();
    Ok((err < 0.01, format!("relative gap at 1e-3 tau_R = {err:.2e}")))
}

fn noise_attribution() -> Result<(bool, String)> {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0)?;
    let m = MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4)?;
    let p = PulseParams::new(&m.transition, 1.0, 1e-10, 1e11)?;
    let i = SnrInputs::new(m, p, 0.0)?;
    let dipole = noise_intensity(&i, m.length_l / i.v_g);
    let vacuum = vacuum_noise_crosscheck(&i);
    let err = (dipole / vacuum - 1.0).abs();
    Ok((err < 1e-8, format!("dipole / vacuum - 1 = {err:.1e}")))
}

fn bessel_values() -> Result<(bool, String)> {
    let table = [
        (1.0, 1.2660658777520084),
        (10.0, 2815.7166284662544),
        (50.0, 2.9325537838493362e20),
        (300.0, 4.4758473679350518e128),
    ];
    let mut worst = 0.0f64;
    for (y, v) in table {
        worst = worst.max((bessel_i0(y)? / v - 1.0).abs());
    }
    Ok((worst < 1e-12, format!("max relative error {worst:.1e}")))
}

fn gain_identity() -> Result<(bool, String)> {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 1e9)?;
    let m = MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4)?;
    let mut worst = 0.0f64;
    for delta in [1e8, 1e9, 1e10, 1e12] {
        let g = gain_coefficient(&m, delta)?;
        let ratio = delta * delta / (delta * delta + 1e18);
        worst = worst.max((g.g / g.g_from_velocity / ratio - 1.0).abs());
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.1e}")))
}

fn mb_ensemble() -> Result<(bool, String)> {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0)?;
    let m = MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4)?.radiatively_broadened();
    let ctx = SfContext::new(m)?;
    let grid = MbGrid::new(16, m.length_l, 2.0 * ctx.tau_r)?;
    let stats = run_ensemble(&grid, &m, &Mode::Sf, 1, 300)?;
    let se = stats.stderr_intensity();
    let times = grid.exit_times();
    let mut worst = 0.0f64;
    for k in 1..=5 {
        let i = k * grid.n_t / 5;
        worst = worst.max((stats.mean_intensity[i] - sf_intensity(&ctx, times[i])?).abs() / se[i]);
    }
    Ok((worst < 3.0, format!("max deviation {worst:.2} standard errors (M = 300)")))
}
