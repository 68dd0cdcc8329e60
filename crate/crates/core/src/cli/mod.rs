//! Command-line front end: argument parsing, subcommands and artifact output.

pub mod config;
pub mod report;
mod selftest;

pub use report::{csv_table, emit_svg, Cell, Series, SvgStyle};
pub use selftest::{run_selftest, CheckResult};

use crate::amplifier_snr::{noise_intensity, peak_snr, signal_intensity, snr_bounds, SnrInputs};
use crate::constants::C_LIGHT;
use crate::error::{Error, Result};
use crate::maxwell_bloch::{run_ensemble, signal_center, MbGrid, MbOptions, Mode};
use crate::medium::{gain_coefficient, group_velocity, refractive_index, IndexMode, MediumParams, PulseParams};
use crate::superfluorescence::{sf_delay, sf_intensity, sf_intensity_asymptotic, sf_intensity_short_time, SfContext};
use crate::wavepacket::{
    cancellation_check, decompose, fd_propagate, make_gaussian_packet, read_binary, read_csv, write_binary, write_csv, BranchRule, Boundary, FdState, Grid1D,
    GridField, SpectralPacket,
};
use clap::{Parser, Subcommand, ValueEnum};
use config::{ConfigFile, Resolved};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "qsnp", version, about = "Superluminal pulse propagation, quantum noise and superfluorescence")]
pub struct Cli {
    /// JSON parameter document.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Spectral,
    Fd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MbModeArg {
    Sf,
    Amplifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Hold {
    /// Keep the density fixed.
    Medium,
    /// Rescale the density with Delta^2 so v_g stays fixed.
    GroupVelocity,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Refractive index, group velocity and gain against detuning.
    Dispersion {
        #[arg(long, default_value_t = 1e9)]
        delta_min: f64,
        #[arg(long, default_value_t = 1e13)]
        delta_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Propagates the configured wavepacket and tracks its centroid.
    Propagate {
        #[arg(long, value_enum, default_value_t = Method::Spectral)]
        method: Method,
        /// Final time; defaults to the config packet time.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 11)]
        snapshots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Final field as CSV.
        #[arg(long)]
        field_out: Option<PathBuf>,
        /// Final field as binary dump.
        #[arg(long)]
        field_bin: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Complete / truncated / residual decomposition of a packet cut at x = cut.
    Decompose {
        /// Incident field (.csv or .bin); defaults to the configured Gaussian.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        cut: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Superfluorescent intensity growth and delay.
    Sf {
        /// Final time in units of tau_R.
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Peak signal-to-noise ratio of a pulse through the amplifier.
    Snr {
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        tau_p: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        length: Option<f64>,
        /// name:lo:hi:n[:log] with name in {delta, tau-p, q, length}.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, value_enum, default_value_t = Hold::GroupVelocity)]
        hold: Hold,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Monte-Carlo ensemble of stochastic Maxwell-Bloch runs.
    MbEnsemble {
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long, value_enum, default_value_t = MbModeArg::Sf)]
        mode: MbModeArg,
        #[arg(long)]
        n_z: Option<usize>,
        /// Exit-time window in seconds.
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Runs the invariant checks and prints a pass/fail table.
    Selftest,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub config: ConfigFile,
    pub seed: Option<u64>,
}

/// Files to write plus text for stdout and stderr. Nothing touches the
/// filesystem until a command has fully succeeded.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Artifacts {
    fn emit(&mut self, path: &Option<PathBuf>, text: String) {
        match path {
            Some(p) => self.files.push((p.clone(), text.into_bytes())),
            None => self.stdout.push_str(&text),
        }
    }

    fn file(&mut self, path: &Option<PathBuf>, bytes: Vec<u8>) {
        if let Some(p) = path {
            self.files.push((p.clone(), bytes));
        }
    }

    pub fn write_files(&self) -> Result<()> {
        for (p, bytes) in &self.files {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

/// Exit code for an error: 2 for configuration, 3 for numerical-domain failures.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_config() {
        2
    } else {
        3
    }
}

/// Parses arguments, runs, writes artifacts and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let config = match &cli.config {
        Some(p) => match config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        },
        None => ConfigFile::default(),
    };
    let rc = RunConfig { command: cli.command, config, seed: cli.seed };
    match run(&rc).and_then(|a| a.write_files().map(|_| a)) {
        Ok(a) => {
            print!("{}", a.stdout);
            eprint!("{}", a.stderr);
            a.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run(rc: &RunConfig) -> Result<Artifacts> {
    let mut r = rc.config.resolve()?;
    if let Some(s) = rc.seed {
        r.seed = s;
    }
    match &rc.command {
        Command::Dispersion { delta_min, delta_max, points, out, svg } => {
            dispersion(&r, *delta_min, *delta_max, *points, out, svg)
        }
        Command::Propagate { method, t, snapshots, out, field_out, field_bin, svg } => {
            propagate(&r, *method, *t, *snapshots, out, field_out, field_bin, svg)
        }
        Command::Decompose { input, cut, t, out_dir } => decompose_cmd(&r, input.as_deref(), *cut, *t, out_dir),
        Command::Sf { t_max, points, out, svg } => sf_cmd(&r, *t_max, *points, out, svg),
        Command::Snr { q, tau_p, delta, length, sweep, hold, out, svg } => {
            snr_cmd(&r, SnrArgs { q: *q, tau_p: *tau_p, delta: *delta, length: *length }, sweep.as_deref(), *hold, out, svg)
        }
        Command::MbEnsemble { realizations, mode, n_z, window, out, svg } => {
            mb_cmd(&r, *realizations, *mode, *n_z, *window, out, svg)
        }
        Command::Selftest => {
            let results = run_selftest();
            let mut a = Artifacts::default();
            a.stdout = selftest::format_table(&results);
            a.exit_code = if results.iter().all(|c| c.passed) { 0 } else { 1 };
            Ok(a)
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(name, "must be finite and > 0"))
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn column(rows: &[Vec<Cell>], k: usize) -> Vec<f64> {
    rows.iter()
        .map(|r| match r[k] {
            Cell::Num(v) => v,
            Cell::Text(_) => f64::NAN,
        })
        .collect()
}

fn dispersion(r: &Resolved, lo: f64, hi: f64, n: usize, out: &Option<PathBuf>, svg: &Option<PathBuf>) -> Result<Artifacts> {
    positive("delta_min", lo)?;
    positive("delta_max", hi)?;
    if n < 1 || hi < lo {
        return Err(Error::invalid("points", "need points >= 1 and delta_max >= delta_min"));
    }
    let m = r.medium_or_default();
    let mut rows = Vec::with_capacity(n);
    for delta in log_space(lo, hi, n) {
        let idx = refractive_index(&m, m.transition.omega0 - delta, IndexMode::TwoLevelReal)?;
        let gv = group_velocity(&m, delta)?;
        let g = gain_coefficient(&m, delta)?;
        rows.push(vec![
            delta.into(),
            idx.n_minus_one.into(),
            (gv.v_g / C_LIGHT).into(),
            gv.excess.into(),
            g.g.into(),
            g.g_from_velocity.into(),
        ]);
    }
    let mut a = Artifacts::default();
    let header = ["delta", "n_minus_one", "v_g_over_c", "excess", "gain", "gain_from_velocity"];
    if svg.is_some() {
        let x = column(&rows, 0);
        let doc = emit_svg(
            &[Series::new("v_g/c - 1", x.clone(), column(&rows, 3)), Series::new("gain [1/cm]", x, column(&rows, 4))],
            &SvgStyle { title: "Dispersion".into(), x_label: "detuning [rad/s]".into(), y_label: "log10".into(), log_y: true, shade: None },
        )?;
        a.file(svg, doc.into_bytes());
    }
    a.emit(out, csv_table(&header, &rows));
    Ok(a)
}

fn build_packet(r: &Resolved) -> Result<SpectralPacket> {
    let p = &r.packet;
    let grid = Grid1D::centered(p.dx, p.n_points)?;
    make_gaussian_packet(grid, p.k0, p.sigma_k, p.x0, p.mass_m, p.branch.into(), p.c)
}

fn field_csv(f: &GridField) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(f, &mut buf)?;
    Ok(buf)
}

#[allow(clippy::too_many_arguments)]
fn propagate(
    r: &Resolved,
    method: Method,
    t: Option<f64>,
    snapshots: usize,
    out: &Option<PathBuf>,
    field_out: &Option<PathBuf>,
    field_bin: &Option<PathBuf>,
    svg: &Option<PathBuf>,
) -> Result<Artifacts> {
    let packet = build_packet(r)?;
    let t_end = t.unwrap_or(r.packet.time);
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t", "must be finite and >= 0"));
    }
    if snapshots < 2 {
        return Err(Error::invalid("snapshots", "need at least 2"));
    }
    let times = lin_space(0.0, t_end, snapshots);
    let fields: Vec<GridField> = match method {
        Method::Spectral => times.iter().map(|t| packet.synthesize(*t)).collect::<Result<_>>()?,
        Method::Fd => {
            let dt = packet.grid.dx / packet.c;
            let mut state = FdState::from_packet(&packet, dt, Boundary::Dirichlet)?;
            let mut fields = vec![state.to_field()];
            let mut done = 0usize;
            for t in &times[1..] {
                let target = (t / dt).round() as usize;
                state = fd_propagate(state, target - done);
                done = target;
                fields.push(state.to_field());
            }
            fields
        }
    };
    let mut rows = Vec::new();
    for f in &fields {
        rows.push(vec![f.time.into(), f.centroid()?.into(), f.norm().into()]);
    }
    let mut a = Artifacts::default();
    let last = fields.last().expect("at least two snapshots");
    a.file(field_out, field_csv(last)?);
    if field_bin.is_some() {
        let mut buf = Vec::new();
        write_binary(last, &mut buf)?;
        a.file(field_bin, buf);
    }
    if svg.is_some() {
        let xs: Vec<f64> = (0..packet.grid.n_points).map(|i| packet.grid.x(i)).collect();
        let abs = |f: &GridField| f.samples.iter().map(|z| z.norm()).collect::<Vec<_>>();
        let doc = emit_svg(
            &[Series::new("|psi(x, 0)|", xs.clone(), abs(&fields[0])), Series::new("|psi(x, T)|", xs, abs(last))],
            &SvgStyle { title: "Propagation".into(), x_label: "x".into(), y_label: "|psi|".into(), log_y: false, shade: None },
        )?;
        a.file(svg, doc.into_bytes());
    }
    a.emit(out, csv_table(&["t", "centroid", "norm"], &rows));
    Ok(a)
}

fn read_field(path: &Path) -> Result<GridField> {
    let file = std::fs::File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("bin") {
        read_binary(std::io::BufReader::new(file))
    } else {
        read_csv(std::io::BufReader::new(file), 0.0)
    }
}

fn decompose_cmd(r: &Resolved, input: Option<&Path>, cut: Option<f64>, t: Option<f64>, out_dir: &Path) -> Result<Artifacts> {
    let p = &r.packet;
    let packet = match input {
        Some(path) => SpectralPacket::from_field(&read_field(path)?, p.mass_m, BranchRule::GrowingBranch, p.c)?,
        None => build_packet(r)?,
    };
    let cut = cut.unwrap_or(p.cut_x);
    let t = t.unwrap_or(p.time);
    let d = decompose(&packet, cut, t)?;
    let rep = cancellation_check(&packet, cut, t)?;
    let mut a = Artifacts::default();
    let panels = [
        ("incident", &d.incident),
        ("transmitted", &d.complete),
        ("truncated", &d.truncated),
        ("residual", &d.residual),
    ];
    let xs: Vec<f64> = (0..packet.grid.n_points).map(|i| packet.grid.x(i)).collect();
    let mut series = Vec::new();
    for (name, f) in panels {
        a.files.push((out_dir.join(format!("{name}.csv")), field_csv(f)?));
        series.push(Series::new(name, xs.clone(), f.samples.iter().map(|z| z.norm()).collect()));
    }
    let doc = emit_svg(
        &series,
        &SvgStyle {
            title: format!("Decomposition at t = {t}, cut at x = {cut}"),
            x_label: "x".into(),
            y_label: "log10 |field|".into(),
            log_y: true,
            shade: Some((packet.c * t, packet.grid.x_max())),
        },
    )?;
    a.files.push((out_dir.join("decompose.svg"), doc.into_bytes()));
    a.stdout = format!(
        "t={:e} |Phi^L|={:e} |R^L|={:e} |Psi^L|={:e} relative_residual={:e} growth_ratio={:e}\n",
        rep.t, rep.phi_l_norm, rep.r_l_norm, rep.psi_l_norm, rep.relative_residual, rep.growth_ratio
    );
    Ok(a)
}

fn sf_cmd(r: &Resolved, t_max: f64, n: usize, out: &Option<PathBuf>, svg: &Option<PathBuf>) -> Result<Artifacts> {
    positive("t_max", t_max)?;
    if n < 1 {
        return Err(Error::invalid("points", "need at least one point"));
    }
    let ctx = SfContext::new(r.medium_or_default())?;
    let mut rows = Vec::new();
    for k in 1..=n {
        let t = t_max * ctx.tau_r * k as f64 / n as f64;
        rows.push(vec![
            t.into(),
            sf_intensity(&ctx, t)?.into(),
            sf_intensity_short_time(&ctx, t).into(),
            sf_intensity_asymptotic(&ctx, t).into(),
        ]);
    }
    let mut a = Artifacts::default();
    if svg.is_some() {
        let x = column(&rows, 0);
        let doc = emit_svg(
            &[
                Series::new("intensity", x.clone(), column(&rows, 1)),
                Series::new("short time", x.clone(), column(&rows, 2)),
                Series::new("asymptotic", x, column(&rows, 3)),
            ],
            &SvgStyle { title: "Superfluorescence".into(), x_label: "t [s]".into(), y_label: "log10 <F+F>".into(), log_y: true, shade: None },
        )?;
        a.file(svg, doc.into_bytes());
    }
    match sf_delay(&ctx) {
        Ok(d) => {
            a.stderr = format!(
                "tau_R={:e} tau_D={:e} delay_root={:e} ratio={:.4}\n",
                ctx.tau_r, d.closed_form, d.root_solve, d.ratio
            )
        }
        Err(e) => a.stderr = format!("tau_R={:e} delay unavailable: {e}\n", ctx.tau_r),
    }
    a.emit(out, csv_table(&["t", "intensity", "short_time_model", "asymptotic_model"], &rows));
    Ok(a)
}

#[derive(Debug, Clone, Copy)]
struct SnrArgs {
    q: Option<f64>,
    tau_p: Option<f64>,
    delta: Option<f64>,
    length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct Sweep {
    name: String,
    values: Vec<f64>,
}

fn parse_sweep(s: &str) -> Result<Sweep> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(parts.len() == 4 || parts.len() == 5) {
        return Err(Error::Config(format!("sweep '{s}': expected name:lo:hi:n[:log]")));
    }
    let name = parts[0].to_string();
    if !["delta", "tau-p", "q", "length"].contains(&name.as_str()) {
        return Err(Error::Config(format!("sweep parameter '{name}' not one of delta, tau-p, q, length")));
    }
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::Config(format!("sweep '{s}': bad number '{p}'")));
    let (lo, hi) = (num(parts[1])?, num(parts[2])?);
    let n: usize = parts[3].parse().map_err(|_| Error::Config(format!("sweep '{s}': bad count")))?;
    if n < 1 || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!("sweep '{s}': need n >= 1 and finite bounds")));
    }
    let values = match parts.get(4) {
        None => lin_space(lo, hi, n),
        Some(&"log") if lo > 0.0 && hi > 0.0 => log_space(lo, hi, n),
        Some(_) => return Err(Error::Config(format!("sweep '{s}': log spacing needs positive bounds"))),
    };
    Ok(Sweep { name, values })
}

fn with_length(m: &MediumParams, l: f64) -> Result<MediumParams> {
    let mut out = MediumParams::new(m.transition, m.density_n, m.inversion_w, l, m.area_s)?;
    out.transition.beta = m.transition.beta;
    Ok(out)
}

fn with_density(m: &MediumParams, n: f64) -> Result<MediumParams> {
    MediumParams::new(m.transition, n, m.inversion_w, m.length_l, m.area_s)
}

fn snr_cmd(
    r: &Resolved,
    args: SnrArgs,
    sweep: Option<&str>,
    hold: Hold,
    out: &Option<PathBuf>,
    svg: &Option<PathBuf>,
) -> Result<Artifacts> {
    let mut base_m = r.medium_or_default();
    if let Some(l) = args.length {
        base_m = with_length(&base_m, positive("length", l)?)?;
    }
    let dp = r.pulse_or_default(&base_m);
    let q = args.q.unwrap_or(dp.photon_number_q);
    let tau_p = args.tau_p.unwrap_or(dp.duration_tau_p);
    let delta = args.delta.unwrap_or(dp.detuning_delta);
    let sweep = match sweep {
        Some(s) => parse_sweep(s)?,
        None => Sweep { name: "delta".into(), values: vec![delta] },
    };
    let mut rows = Vec::new();
    for v in &sweep.values {
        let (mut m, mut q_, mut tp, mut d) = (base_m.clone(), q, tau_p, delta);
        match sweep.name.as_str() {
            "delta" => {
                d = *v;
                if hold == Hold::GroupVelocity {
                    m = with_density(&base_m, base_m.density_n * (d / delta).powi(2))?;
                }
            }
            "tau-p" => tp = *v,
            "q" => q_ = *v,
            _ => m = with_length(&base_m, positive("length", *v)?)?,
        }
        let pulse = PulseParams::new(&m.transition, q_, tp, d)?;
        let inputs = SnrInputs::new(m.clone(), pulse, m.length_l / C_LIGHT)?;
        let forms = peak_snr(&inputs)?;
        let b = snr_bounds(&inputs)?;
        rows.push(vec![
            Cell::Num(*v),
            forms.form_qa3.into(),
            forms.form_qa4.into(),
            forms.form_new1.into(),
            b.ars_bound.into(),
            b.frequency_independent_bound.into(),
            b.verdict.label().into(),
        ]);
    }
    let mut a = Artifacts::default();
    if svg.is_some() {
        let x = column(&rows, 0);
        let doc = emit_svg(
            &[
                Series::new("peak SNR", x.clone(), column(&rows, 1)),
                Series::new("detuning bound", x.clone(), column(&rows, 4)),
                Series::new("frequency-independent bound", x, column(&rows, 5)),
            ],
            &SvgStyle {
                title: "Peak signal-to-noise ratio".into(),
                x_label: sweep.name.clone(),
                y_label: "log10 SNR".into(),
                log_y: true,
                shade: None,
            },
        )?;
        a.file(svg, doc.into_bytes());
    }
    let header = [sweep.name.as_str(), "snr_qa3", "snr_qa4", "snr_new1", "ars_bound", "freq_indep_bound", "verdict"];
    a.emit(out, csv_table(&header, &rows));
    Ok(a)
}

fn mb_cmd(
    r: &Resolved,
    realizations: Option<usize>,
    mode: MbModeArg,
    n_z: Option<usize>,
    window: Option<f64>,
    out: &Option<PathBuf>,
    svg: &Option<PathBuf>,
) -> Result<Artifacts> {
    let m = r.medium_or_default();
    let count = realizations.or(r.mb.realizations).unwrap_or(1000);
    if count < 2 {
        return Err(Error::invalid("realizations", "need at least 2"));
    }
    let l_over_c = m.length_l / C_LIGHT;
    let mut rows = Vec::new();
    match mode {
        MbModeArg::Sf => {
            let ctx = SfContext::new(m.clone())?;
            let nz = n_z.or(r.mb.n_z).unwrap_or(32);
            let win = window.or(r.mb.window_t).unwrap_or((4.0 * ctx.tau_r).max(l_over_c));
            let grid = MbGrid::new(nz, m.length_l, win)?;
            let stats = run_ensemble(&grid, &m, &Mode::Sf, r.seed, count)?;
            let se = stats.stderr_intensity();
            for (i, t) in grid.exit_times().iter().enumerate() {
                rows.push(vec![(*t).into(), stats.mean_intensity[i].into(), se[i].into(), sf_intensity(&ctx, *t)?.into()]);
            }
        }
        MbModeArg::Amplifier => {
            let p = r.pulse_or_default(&m);
            let opts = MbOptions::default();
            let tc = signal_center(&p, &opts);
            // keep the carrier-frame phase step Delta d_zeta at or below 0.1
            let nz_min = (10.0 * p.detuning_delta.abs() * l_over_c).ceil() as usize;
            let nz = n_z.or(r.mb.n_z).unwrap_or(nz_min.max(32));
            let win = window.or(r.mb.window_t).unwrap_or(tc + l_over_c + 6.0 * p.duration_tau_p);
            let grid = MbGrid::new(nz, m.length_l, win)?;
            let stats = run_ensemble(&grid, &m, &Mode::Amplifier { pulse: p, options: opts }, r.seed, count)?;
            let inputs = SnrInputs::new(m.clone(), p, l_over_c)?;
            let se = stats.stderr_intensity();
            for (i, t) in grid.exit_times().iter().enumerate() {
                let reference = noise_intensity(&inputs, t.min(inputs.peak_time())) + signal_intensity(&inputs, t - tc);
                rows.push(vec![(*t).into(), stats.mean_intensity[i].into(), se[i].into(), reference.into()]);
            }
        }
    }
    let mut a = Artifacts::default();
    if svg.is_some() {
        let x = column(&rows, 0);
        let doc = emit_svg(
            &[Series::new("ensemble mean", x.clone(), column(&rows, 1)), Series::new("analytic", x, column(&rows, 3))],
            &SvgStyle { title: format!("Maxwell-Bloch ensemble (M = {count})"), x_label: "t [s]".into(), y_label: "<F+F>".into(), log_y: false, shade: None },
        )?;
        a.file(svg, doc.into_bytes());
    }
    a.emit(out, csv_table(&["t", "mean_intensity", "stderr", "analytic_reference"], &rows));
    Ok(a)
}
