//! CSV and binary serialization of grid fields.

use super::{Grid1D, GridField};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{BufRead, Read, Write};

/// CSV with header `x,re,im,abs2`; one row per grid point.
pub fn write_csv<W: Write>(field: &GridField, mut out: W) -> Result<()> {
    writeln!(out, "x,re,im,abs2")?;
    for (i, z) in field.samples.iter().enumerate() {
        writeln!(out, "{:e},{:e},{:e},{:e}", field.grid.x(i), z.re, z.im, z.norm_sqr())?;
    }
    Ok(())
}

/// Reads a CSV written by [`write_csv`]; the grid is rebuilt from the x column.
pub fn read_csv<R: BufRead>(input: R, time: f64) -> Result<GridField> {
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for (ln, line) in input.lines().enumerate() {
        let line = line?;
        if ln == 0 {
            if line.trim() != "x,re,im,abs2" {
                return Err(Error::Config(format!("unexpected CSV header `{line}`")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Config(format!("line {}: expected 4 columns", ln + 1)));
        }
        let p = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("line {}: {e}", ln + 1)))
        };
        xs.push(p(cols[0])?);
        zs.push(Complex64::new(p(cols[1])?, p(cols[2])?));
    }
    if xs.len() < 2 {
        return Err(Error::Config("CSV holds fewer than two samples".into()));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let grid = Grid1D::new(xs[0], dx, xs.len())?;
    GridField::new(grid, zs, time)
}

/// Little-endian dump: n_points (u64), dx, x_min, time (f64), then (re, im) pairs.
pub fn write_binary<W: Write>(field: &GridField, mut out: W) -> Result<()> {
    out.write_all(&(field.grid.n_points as u64).to_le_bytes())?;
    out.write_all(&field.grid.dx.to_le_bytes())?;
    out.write_all(&field.grid.x_min.to_le_bytes())?;
    out.write_all(&field.time.to_le_bytes())?;
    for z in &field.samples {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<GridField> {
    let mut b8 = [0u8; 8];
    let mut next = |input: &mut R| -> Result<[u8; 8]> {
        input
            .read_exact(&mut b8)
            .map_err(|e| Error::Config(format!("truncated binary field: {e}")))?;
        Ok(b8)
    };
    let n = u64::from_le_bytes(next(&mut input)?) as usize;
    let dx = f64::from_le_bytes(next(&mut input)?);
    let x_min = f64::from_le_bytes(next(&mut input)?);
    let time = f64::from_le_bytes(next(&mut input)?);
    let grid = Grid1D::new(x_min, dx, n)?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let re = f64::from_le_bytes(next(&mut input)?);
        let im = f64::from_le_bytes(next(&mut input)?);
        samples.push(Complex64::new(re, im));
    }
    GridField::new(grid, samples, time)
}
