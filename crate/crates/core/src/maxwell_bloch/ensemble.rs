//! Ensemble averages over noise realizations.

use super::{integrate_amplifier, integrate_sf, MbGrid, MbOptions, NoiseSeed, NoiseSource};
use crate::error::{Error, Result};
use crate::medium::{MediumParams, PulseParams};
use crate::numerics::sorted_sum;
use num_complex::Complex64;
use rayon::prelude::*;

/// Per-cell statistics. Sums are order independent: values are sorted before
/// compensated summation, so permuting realizations gives identical bits.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub m: usize,
    pub mean_field: Vec<Complex64>,
    pub mean_intensity: Vec<f64>,
    /// Bias-corrected <|F - <F>|^2>.
    pub field_variance: Vec<f64>,
    /// Bias-corrected variance of |F|^2.
    pub intensity_variance: Vec<f64>,
}

impl EnsembleStats {
    pub fn stderr_intensity(&self) -> Vec<f64> {
        let m = self.m as f64;
        self.intensity_variance.iter().map(|v| (v / m).sqrt()).collect()
    }

    /// Coherent over fluctuating intensity per cell.
    pub fn signal_to_noise(&self) -> Vec<f64> {
        self.mean_field
            .iter()
            .zip(&self.field_variance)
            .map(|(f, v)| f.norm_sqr() / v)
            .collect()
    }
}

pub fn ensemble_statistics(samples: &[Vec<Complex64>]) -> Result<EnsembleStats> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::Degenerate("ensemble statistics need at least two realizations".into()));
    }
    let cells = samples[0].len();
    if samples.iter().any(|s| s.len() != cells) {
        return Err(Error::invalid("samples", "all realizations must have the same length"));
    }
    let mf = m as f64;
    let mut buf = vec![0.0; m];
    let sum_of = |buf: &mut Vec<f64>, f: &dyn Fn(&[Complex64]) -> f64| {
        for (b, s) in buf.iter_mut().zip(samples) {
            *b = f(s);
        }
        sorted_sum(buf)
    };
    let mut stats = EnsembleStats {
        m,
        mean_field: Vec::with_capacity(cells),
        mean_intensity: Vec::with_capacity(cells),
        field_variance: Vec::with_capacity(cells),
        intensity_variance: Vec::with_capacity(cells),
    };
    for c in 0..cells {
        let re = sum_of(&mut buf, &|s| s[c].re) / mf;
        let im = sum_of(&mut buf, &|s| s[c].im) / mf;
        let mean = Complex64::new(re, im);
        let inten = sum_of(&mut buf, &|s| s[c].norm_sqr()) / mf;
        let fvar = sum_of(&mut buf, &|s| (s[c] - mean).norm_sqr()) / (mf - 1.0);
        let ivar = sum_of(&mut buf, &|s| {
            let d = s[c].norm_sqr() - inten;
            d * d
        }) / (mf - 1.0);
        stats.mean_field.push(mean);
        stats.mean_intensity.push(inten);
        stats.field_variance.push(fvar);
        stats.intensity_variance.push(ivar);
    }
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Sf,
    Amplifier { pulse: PulseParams, options: MbOptions },
}

/// Thread count from QSNP_THREADS, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("QSNP_THREADS").ok()?.trim().parse::<usize>().ok().filter(|n| *n > 0)
}

/// Exit traces of realizations `first..first + m`, in index order.
pub fn run_traces(
    grid: &MbGrid,
    medium: &MediumParams,
    mode: &Mode,
    rng_seed: u64,
    first: u64,
    m: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let one = |i: u64| -> Result<Vec<Complex64>> {
        let noise = NoiseSource::Seeded(NoiseSeed { rng_seed, realization_index: i });
        let h = match mode {
            Mode::Sf => integrate_sf(grid, medium, &noise)?,
            Mode::Amplifier { pulse, options } => {
                let opts = MbOptions { record_state: false, ..*options };
                integrate_amplifier(grid, medium, pulse, &noise, &opts)?
            }
        };
        Ok(h.exit_field)
    };
    let work = || (first..first + m as u64).into_par_iter().map(one).collect::<Result<Vec<_>>>();
    match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Runs realizations 0..m and reduces them.
pub fn run_ensemble(grid: &MbGrid, medium: &MediumParams, mode: &Mode, rng_seed: u64, m: usize) -> Result<EnsembleStats> {
    let traces = run_traces(grid, medium, mode, rng_seed, 0, m)?;
    ensemble_statistics(&traces)
}
