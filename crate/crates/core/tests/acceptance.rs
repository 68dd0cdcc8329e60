//! Acceptance suite: one PASS/FAIL line per criterion, with runtime.

use num_complex::Complex64;
use qsnp::amplifier_snr::{
    design_inputs, noise_intensity, peak_snr, snr, snr_bounds, vacuum_noise_crosscheck, SnrInputs,
};
use qsnp::constants::{C_LIGHT, HBAR};
use qsnp::maxwell_bloch::{ensemble_statistics, run_ensemble, run_traces, EnsembleStats, MbGrid, MbOptions, Mode};
use qsnp::medium::{MediumParams, PulseParams, TransitionSpec};
use qsnp::numerics::linear_fit;
use qsnp::superfluorescence::{
    bessel_i0, sf_delay, sf_intensity, sf_intensity_asymptotic, sf_intensity_short_time, SfContext,
};
use qsnp::wavepacket::{
    cancellation_check, decompose, fd_propagate, fit_growth_rate, make_gaussian_packet, measure_arrival,
    superluminal_window, tachyon_group_velocity, ArrivalMode, BranchRule, Boundary, FdState, Grid1D, SpectralPacket,
};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

type Outcome = Result<(bool, String), String>;

fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// k0 = 5m, sigma_k = m/2, 2^14 points with dx = 0.05/m, m = c = 1.
fn acceptance_packet(x0: f64, branch: BranchRule) -> SpectralPacket {
    let grid = Grid1D::centered(0.05, 1 << 14).unwrap();
    make_gaussian_packet(grid, 5.0, 0.5, x0, 1.0, branch, 1.0).unwrap()
}

fn group_velocity() -> Outcome {
    let p = acceptance_packet(-300.0, BranchRule::OscillatoryOnly);
    if !p.safe_support() {
        return Ok((false, "packet not safe-support".into()));
    }
    let fields = (0..=8).map(|i| p.synthesize(5.0 * i as f64)).collect::<Result<Vec<_>, _>>().map_err(e)?;
    let fit = measure_arrival(&fields, ArrivalMode::Centroid).map_err(e)?;
    let want = 5.0 / (25.0f64 - 1.0).sqrt();
    let err = (fit.velocity / want - 1.0).abs();
    let lib = tachyon_group_velocity(5.0, 1.0, 1.0).map_err(e)?;
    Ok((err < 0.01 && (lib / want - 1.0).abs() < 1e-14, format!("v = {:.6} c, k0 c / sqrt(k0^2 - m^2) = {want:.6} c, rel err {err:.1e}", fit.velocity)))
}

fn tail_reconstruction() -> Outcome {
    let p = acceptance_packet(10.0, BranchRule::GrowingBranch);
    let t = 30.0;
    let d = decompose(&p, 0.0, t).map_err(e)?;
    let phi = superluminal_window(&d.truncated, 1.0, t);
    let psi = superluminal_window(&d.complete, 1.0, t);
    let err = rel_l2(&phi.samples, &psi.samples);
    Ok((err < 1e-6, format!("||Phi - Psi|| / ||Psi|| on x > cT at cmT = 30: {err:.2e}")))
}

fn luminal_cancellation() -> Outcome {
    let p = acceptance_packet(10.0, BranchRule::GrowingBranch);
    let r = cancellation_check(&p, 0.0, 30.0).map_err(e)?;
    let times: Vec<f64> = (0..=10).map(|i| 20.0 + 2.0 * i as f64).collect();
    let mut norms = Vec::new();
    for t in &times {
        norms.push(cancellation_check(&p, 0.0, *t).map_err(e)?.phi_l_norm);
    }
    let rate = fit_growth_rate(&times, &norms).map_err(e)?;
    let ok = r.relative_residual < 1e-8 && r.growth_ratio > 1e3 && (rate - 1.0).abs() < 0.05;
    Ok((
        ok,
        format!(
            "residual {:.2e}, ||Phi^L||/||Psi^L|| {:.2e}, growth rate {rate:.4} c m",
            r.relative_residual, r.growth_ratio
        ),
    ))
}

fn fd_causality() -> Outcome {
    let mut worst = 0.0f64;
    let steps = 1000;
    for nu in [1.0, 0.5] {
        let grid = Grid1D::new(-40.0, 0.05, 4096).map_err(e)?;
        let init: Vec<Complex64> = (0..grid.n_points)
            .map(|i| {
                let x = grid.x(i);
                if x < 0.0 {
                    Complex64::from_polar((-(x + 10.0) * (x + 10.0) / 4.0).exp(), 5.0 * x)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let last_src = (0..grid.n_points).filter(|i| grid.x(*i) < 0.0).max().unwrap();
        let st = FdState::new(grid, init.clone(), init, nu * grid.dx, 1.0, 1.0, Boundary::Dirichlet).map_err(e)?;
        let out = fd_propagate(st, steps);
        // one cell per step is the discrete domain of influence
        let leak = ((last_src + steps + 1)..grid.n_points).map(|i| out.field_now[i].norm()).fold(0.0, f64::max);
        worst = worst.max(leak);
    }
    Ok((worst < 1e-14, format!("max |E| beyond the discrete cone after {steps} steps (nu = 1, 0.5): {worst:.1e}")))
}

fn snr_forms() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..10 {
        let vg = 1.0 + 10f64.powf(-3.0 + 4.0 * i as f64 / 9.0);
        for j in 0..10 {
            let tp_over_tr = 10f64.powf(-2.0 + 4.0 * j as f64 / 9.0);
            for k in 0..10 {
                let l_over_c = 1e-11 * 10f64.powf(3.0 * k as f64 / 9.0);
                let q = 1.0 + k as f64;
                let inputs = design_inputs(3e15, 1e-9, l_over_c, vg, tp_over_tr * 1e-9, q).map_err(e)?;
                let t = inputs.peak_time();
                let s = snr(&inputs, t).map_err(e)?;
                worst = worst.max(s.max_relative_deviation);
                count += 1;
            }
        }
    }
    // worked value: (q / sqrt(pi)) (tau_R / tau_p) (c / v_g) with q = 1, tau_p = tau_R, v_g = 2c
    let worked = 1.0 / PI.sqrt() / 2.0;
    let w = peak_snr(&design_inputs(3e15, 1e-9, 1e-11, 2.0, 1e-9, 1.0).map_err(e)?).map_err(e)?;
    let ok = worst < 1e-10 && (w.form_qa3 - 0.28209).abs() < 1e-5 && (w.form_qa3 - worked).abs() < 1e-12;
    Ok((ok, format!("{count} points, max form deviation {worst:.1e}; worked peak SNR {:.6}", w.form_qa3)))
}

fn ars_verdict() -> Outcome {
    // (v_g/c - 1) L/c = 10 tau_p with v_g = 2c, Delta tau_p = 5 requires tau_R = 0.008 tau_p
    let tp = 1e-10;
    let ars = design_inputs(3e15, 0.008 * tp, 10.0 * tp, 2.0, tp, 1.0).map_err(e)?;
    let dtp = ars.pulse.detuning_delta * tp;
    let b = snr_bounds(&ars).map_err(e)?;
    let ckk1 = peak_snr(&design_inputs(3e15, 1e-9, 1e-11, 1.5, 1e-9 / 1.5, 1.0).map_err(e)?).map_err(e)?;
    let ckk2 = peak_snr(&design_inputs(3e15, 1e-9, 1e-11, 1.5, 1e-9 / 1.5, 2.0).map_err(e)?).map_err(e)?;
    let ok = (dtp - 5.0).abs() < 1e-9
        && b.ars_bound_valid
        && b.peak_snr < 0.0226
        && (ckk1.form_qa3 - 1.0 / PI.sqrt()).abs() < 1e-12
        && ckk2.form_qa3 > 1.0;
    Ok((
        ok,
        format!(
            "ARS: Delta tau_p = {dtp:.3}, peak {:.3e} < 0.0226 ({}); CKK: q=1 {:.5}, q=2 {:.5}",
            b.peak_snr,
            b.verdict.label(),
            ckk1.form_qa3,
            ckk2.form_qa3
        ),
    ))
}

/// omega_p L / c = `wp_l_over_c` with N_T atoms in a 1e-4 cm^2 column.
fn sf_medium(nt: f64, wp_l_over_c: f64) -> MediumParams {
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0).unwrap();
    let s = 1e-4;
    let k = 8.0 * PI * tr.dipole_d.powi(2) * tr.omega0 / (HBAR * C_LIGHT * C_LIGHT);
    let l = wp_l_over_c * wp_l_over_c * s / (k * nt);
    MediumParams::new(tr, nt / (s * l), 1.0, l, s).unwrap().radiatively_broadened()
}

fn sf_intensity_check() -> Outcome {
    let ctx = SfContext::new(sf_medium(1e8, 1.0)).map_err(e)?;
    let l_over_c = ctx.medium.length_l / C_LIGHT;
    let mut short = 0.0f64;
    // short-time window: omega_p^2 t L / c <= 0.01
    for f in [1e-4, 1e-3, 1e-2] {
        let t = f / (ctx.omega_p * ctx.omega_p * l_over_c);
        short = short.max((sf_intensity(&ctx, t).map_err(e)? / sf_intensity_short_time(&ctx, t) - 1.0).abs());
    }
    let t = 100.0 * ctx.tau_r;
    let long = (sf_intensity(&ctx, t).map_err(e)? / sf_intensity_asymptotic(&ctx, t) - 1.0).abs();
    let mut ratios = Vec::new();
    for i in 0..=16 {
        let nt = 10f64.powf(4.0 + 0.5 * i as f64);
        ratios.push(sf_delay(&SfContext::new(sf_medium(nt, 1.0)).map_err(e)?).map_err(e)?.ratio);
    }
    let (rmin, rmax) = ratios.iter().fold((f64::MAX, f64::MIN), |(a, b), r| (a.min(*r), b.max(*r)));
    let ok = short < 0.01 && long < 0.25 && rmin >= 0.5 && rmax <= 2.0;
    Ok((
        ok,
        format!("short-time gap {short:.1e}, gap at 100 tau_R {long:.3}, delay ratio in [{rmin:.3}, {rmax:.3}] for N_T 1e4..1e12"),
    ))
}

fn within_se(stats: &EnsembleStats, idx: &[usize], expect: &[f64]) -> f64 {
    let se = stats.stderr_intensity();
    idx.iter().zip(expect).map(|(i, x)| (stats.mean_intensity[*i] - x).abs() / se[*i]).fold(0.0, f64::max)
}

fn monte_carlo() -> Outcome {
    // SF mode: omega_p L / c = 1
    let m = sf_medium(1e8, 1.0);
    let ctx = SfContext::new(m).map_err(e)?;
    let grid = MbGrid::new(32, m.length_l, 4.0 * ctx.tau_r).map_err(e)?;
    let stats = run_ensemble(&grid, &m, &Mode::Sf, 2024, 1000).map_err(e)?;
    let times = grid.exit_times();
    let idx: Vec<usize> = (1..=10).map(|k| k * grid.n_t / 10).collect();
    let expect = idx.iter().map(|i| sf_intensity(&ctx, times[*i])).collect::<Result<Vec<_>, _>>().map_err(e)?;
    let sf_dev = within_se(&stats, &idx, &expect);

    // amplifier mode, noise only: L/c = 5 tau_p, tau_R = 2500 tau_p, Delta tau_p = 5
    let tp = 1e-10;
    let l = 5.0 * tp * C_LIGHT;
    let tau_r = 2500.0 * tp;
    let tr = TransitionSpec::from_dipole(3e15, 1e-18, 0.0).map_err(e)?;
    let wp2 = 4.0 * C_LIGHT / (tau_r * l);
    let n = wp2 * HBAR / (8.0 * PI * tr.dipole_d.powi(2) * tr.omega0);
    let am = MediumParams::new(tr, n, 1.0, l, 1e-4).map_err(e)?.radiatively_broadened();
    let pulse = PulseParams::new(&am.transition, 1.0, tp, 5.0 / tp).map_err(e)?;
    let agrid = MbGrid::new(250, l, 1.05 * l / C_LIGHT).map_err(e)?;
    let mode = Mode::Amplifier { pulse, options: MbOptions { include_signal: false, ..Default::default() } };
    let astats = run_ensemble(&agrid, &am, &mode, 2025, 1000).map_err(e)?;
    let inputs = SnrInputs::new(am, pulse, l / C_LIGHT).map_err(e)?;
    let aidx: Vec<usize> = (1..=10).map(|k| ((k as f64 / 10.0) * l / inputs.v_g / agrid.d_zeta).round() as usize).collect();
    let at = agrid.exit_times();
    let aexp: Vec<f64> = aidx.iter().map(|i| noise_intensity(&inputs, at[*i])).collect();
    let amp_dev = within_se(&astats, &aidx, &aexp);

    // 1/sqrt(M) convergence: 16 independent batches per M, RMS relative error over 10 times and all batches
    let sgrid = MbGrid::new(32, m.length_l, 2.0 * ctx.tau_r).map_err(e)?;
    let st = sgrid.exit_times();
    let sidx: Vec<usize> = (1..=10).map(|k| k * sgrid.n_t / 10).collect();
    let sexp = sidx.iter().map(|i| sf_intensity(&ctx, st[*i])).collect::<Result<Vec<_>, _>>().map_err(e)?;
    let mut next = 0u64;
    let (mut lm, mut le) = (Vec::new(), Vec::new());
    for mcount in [100usize, 1000, 10000] {
        let mut acc = 0.0;
        for _ in 0..16 {
            let traces = run_traces(&sgrid, &m, &Mode::Sf, 77, next, mcount).map_err(e)?;
            next += mcount as u64;
            let s = ensemble_statistics(&traces).map_err(e)?;
            let ms: f64 = sidx.iter().zip(&sexp).map(|(i, x)| (s.mean_intensity[*i] / x - 1.0).powi(2)).sum::<f64>() / 10.0;
            acc += ms;
        }
        lm.push((mcount as f64).ln());
        le.push((acc / 16.0).sqrt().ln());
    }
    let (slope, _, _) = linear_fit(&lm, &le).map_err(e)?;
    let ok = sf_dev < 3.0 && amp_dev < 3.0 && (slope + 0.5).abs() <= 0.1;
    Ok((
        ok,
        format!("M = 1000: SF max {sf_dev:.2} SE, amplifier noise max {amp_dev:.2} SE; error slope {slope:.3}"),
    ))
}

fn noise_attribution() -> Outcome {
    let mut worst = 0.0f64;
    for beta in [0.0, 1e-3] {
        let tr = TransitionSpec::from_dipole(3e15, 1e-18, beta).map_err(e)?;
        let m = MediumParams::new(tr, 1e12, 1.0, 1.0, 1e-4).map_err(e)?;
        let p = PulseParams::new(&m.transition, 1.0, 1e-10, 1e11).map_err(e)?;
        let i = SnrInputs::new(m, p, 0.0).map_err(e)?;
        let vacuum = vacuum_noise_crosscheck(&i);
        let dipole = noise_intensity(&i, m.length_l / i.v_g);
        let ctx = SfContext::new(m).map_err(e)?;
        let stl = sf_intensity_short_time(&ctx, m.length_l / C_LIGHT);
        worst = worst.max((dipole / vacuum - 1.0).abs()).max((stl / vacuum - 1.0).abs());
    }
    Ok((worst < 1e-8, format!("dipole-noise vs vacuum closed form, max relative gap {worst:.1e}")))
}

fn bessel_accuracy() -> Outcome {
    let pts: Vec<(f64, f64)> = include_str!("fixtures/i0_oracle.csv")
        .lines()
        .skip(1)
        .map(|l| {
            let (y, v) = l.split_once(',').unwrap();
            (y.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    let mut worst = 0.0f64;
    for (y, v) in &pts {
        worst = worst.max(((bessel_i0(*y).map_err(e)? - v) / v).abs());
    }
    let ymax = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    Ok((pts.len() == 1000 && worst < 1e-12, format!("{} points on [0, {ymax}], max relative error {worst:.1e}", pts.len())))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("group velocity", group_velocity, Some(Duration::from_secs(5))),
        ("tail reconstruction", tail_reconstruction, Some(Duration::from_secs(5))),
        ("luminal cancellation", luminal_cancellation, None),
        ("causality", fd_causality, Some(Duration::from_secs(10))),
        ("snr three-form equivalence", snr_forms, None),
        ("detuning-regime verdicts", ars_verdict, None),
        ("superfluorescence intensity", sf_intensity_check, Some(Duration::from_secs(30))),
        ("monte-carlo consistency", monte_carlo, Some(Duration::from_secs(300))),
        ("noise attribution", noise_attribution, None),
        ("bessel i0 accuracy", bessel_accuracy, None),
    ];
    let mut failed = 0;
    for (n, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let (mut ok, detail) = match out {
            Ok(v) => v,
            Err(msg) => (false, format!("error: {msg}")),
        };
        let mut note = String::new();
        if let Some(b) = budget {
            if took > *b {
                ok = false;
                note = format!(" over budget {:.0} s", b.as_secs_f64());
            }
        }
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {detail} [{:.2} s{note}]",
            n + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
