//! C ABI over `qsnp`.
//!
//! Every function returns a [`QsnpStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read back with
//! [`qsnp_last_error_message`]. Objects are opaque and owned by the caller
//! once created; release them with the matching `_free`.

use qsnp::amplifier_snr::{peak_snr, SnrInputs};
use qsnp::error::Error;
use qsnp::medium::{
    gain_coefficient, group_velocity, refractive_index_complex, timescales, MediumParams, PulseParams, TransitionSpec,
};
use qsnp::superfluorescence::{bessel_i0, sf_delay, sf_intensity, SfContext};
use qsnp::wavepacket::{make_gaussian_packet, BranchRule, Grid1D, SpectralPacket};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsnpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Overflow = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsnpBranch {
    OscillatoryOnly = 0,
    Growing = 1,
    Decaying = 2,
}

/// Opaque medium handle.
pub struct QsnpMedium {
    inner: MediumParams,
}

/// Opaque wavepacket handle.
pub struct QsnpPacket {
    inner: SpectralPacket,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QsnpTimescales {
    pub tau_rad: f64,
    pub tau_r: f64,
    pub tau_d: f64,
    pub transit_l_over_c: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QsnpSnr {
    pub form_qa3: f64,
    pub form_qa4: f64,
    pub form_new1: f64,
    pub max_relative_deviation: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QsnpStatus {
    match err {
        Error::InvalidParameter { .. } | Error::Config(_) | Error::Io(_) => QsnpStatus::InvalidParameter,
        Error::Domain(_) | Error::Bracket(_) | Error::Inconsistent(_) | Error::Degenerate(_) => QsnpStatus::Domain,
        Error::Overflow(_) => QsnpStatus::Overflow,
        Error::Quadrature { .. } | Error::StepSize(_) | Error::BlochBound { .. } => QsnpStatus::Numerical,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QsnpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsnpStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            QsnpStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            QsnpStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length including the NUL,
/// or 0 if there is none.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qsnp_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Creates a medium. Units are Gaussian CGS. A negative `beta` selects the
/// radiative width 1 / (2 tau_RAD).
///
/// # Safety
/// `out_medium` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsnp_medium_new(
    omega0: f64,
    dipole_d: f64,
    beta: f64,
    density_n: f64,
    inversion_w: f64,
    length_l: f64,
    area_s: f64,
    out_medium: *mut *mut QsnpMedium,
) -> QsnpStatus {
    guard(|| {
        let slot = out(out_medium, "out_medium")?;
        *slot = std::ptr::null_mut();
        let radiative = beta < 0.0;
        let tr = TransitionSpec::from_dipole(omega0, dipole_d, if radiative { 0.0 } else { beta })?;
        let mut m = MediumParams::new(tr, density_n, inversion_w, length_l, area_s)?;
        if radiative {
            m = m.radiatively_broadened();
        }
        *slot = Box::into_raw(Box::new(QsnpMedium { inner: m }));
        Ok(())
    })
}

/// # Safety
/// `medium` must be null or come from [`qsnp_medium_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsnp_medium_free(medium: *mut QsnpMedium) {
    if !medium.is_null() {
        drop(Box::from_raw(medium));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_medium_beta(medium: *const QsnpMedium, out_beta: *mut f64) -> QsnpStatus {
    guard(|| {
        *out(out_beta, "out_beta")? = get(medium, "medium")?.inner.transition.beta;
        Ok(())
    })
}

/// Group velocity (cm/s) at detuning omega0 - omega, and v_g / c - 1.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_group_velocity(
    medium: *const QsnpMedium,
    detuning: f64,
    out_vg: *mut f64,
    out_excess: *mut f64,
) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let (vg, ex) = (out(out_vg, "out_vg")?, out(out_excess, "out_excess")?);
        let r = group_velocity(&m.inner, detuning)?;
        *vg = r.v_g;
        *ex = r.excess;
        Ok(())
    })
}

/// Intensity gain coefficient g (1/cm).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_gain_coefficient(medium: *const QsnpMedium, detuning: f64, out_g: *mut f64) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        *out(out_g, "out_g")? = gain_coefficient(&m.inner, detuning)?.g;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_timescales(medium: *const QsnpMedium, out_ts: *mut QsnpTimescales) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let o = out(out_ts, "out_ts")?;
        let t = timescales(&m.inner)?;
        *o = QsnpTimescales { tau_rad: t.tau_rad, tau_r: t.tau_r, tau_d: t.tau_d, transit_l_over_c: t.transit_l_over_c };
        Ok(())
    })
}

/// Damped complex refractive index at angular frequency `omega`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_refractive_index(
    medium: *const QsnpMedium,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let (re, im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let n = refractive_index_complex(&m.inner, omega)?;
        *re = n.re;
        *im = n.im;
        Ok(())
    })
}

/// Superfluorescent intensity <F^+ F>(L, t) from the inverted medium.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_sf_intensity(medium: *const QsnpMedium, t: f64, out_i: *mut f64) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let o = out(out_i, "out_i")?;
        *o = sf_intensity(&SfContext::new(m.inner)?, t)?;
        Ok(())
    })
}

/// Superfluorescence delay: closed form and root-solved value.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_sf_delay(
    medium: *const QsnpMedium,
    out_closed_form: *mut f64,
    out_root_solve: *mut f64,
) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let (a, b) = (out(out_closed_form, "out_closed_form")?, out(out_root_solve, "out_root_solve")?);
        let d = sf_delay(&SfContext::new(m.inner)?)?;
        *a = d.closed_form;
        *b = d.root_solve;
        Ok(())
    })
}

/// Peak signal-to-noise ratio of a Gaussian pulse of `q` photons, width `tau_p`
/// and detuning `detuning`, observed at `observation_t`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_peak_snr(
    medium: *const QsnpMedium,
    q: f64,
    tau_p: f64,
    detuning: f64,
    observation_t: f64,
    out_snr: *mut QsnpSnr,
) -> QsnpStatus {
    guard(|| {
        let m = get(medium, "medium")?;
        let o = out(out_snr, "out_snr")?;
        let pulse = PulseParams::new(&m.inner.transition, q, tau_p, detuning)?;
        let f = peak_snr(&SnrInputs::new(m.inner, pulse, observation_t)?)?;
        *o = QsnpSnr {
            form_qa3: f.form_qa3,
            form_qa4: f.form_qa4,
            form_new1: f.form_new1,
            max_relative_deviation: f.max_relative_deviation,
        };
        Ok(())
    })
}

/// Modified Bessel function I0.
///
/// # Safety
/// `out_v` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_bessel_i0(y: f64, out_v: *mut f64) -> QsnpStatus {
    guard(|| {
        let o = out(out_v, "out_v")?;
        *o = bessel_i0(y)?;
        Ok(())
    })
}

/// Gaussian tachyonic wavepacket on a centred grid of `n_points` samples
/// spaced `dx` (normalized units). `branch` is a [`QsnpBranch`] value.
///
/// # Safety
/// `out_packet` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_packet_gaussian(
    dx: f64,
    n_points: usize,
    k0: f64,
    sigma_k: f64,
    x0: f64,
    mass_m: f64,
    branch: u32,
    c: f64,
    out_packet: *mut *mut QsnpPacket,
) -> QsnpStatus {
    guard(|| {
        let slot = out(out_packet, "out_packet")?;
        *slot = std::ptr::null_mut();
        let branch = match branch {
            b if b == QsnpBranch::OscillatoryOnly as u32 => BranchRule::OscillatoryOnly,
            b if b == QsnpBranch::Growing as u32 => BranchRule::GrowingBranch,
            b if b == QsnpBranch::Decaying as u32 => BranchRule::DecayingBranch,
            b => {
                return Err(Fail::Lib(Error::InvalidParameter { name: "branch", reason: format!("unknown value {b}") }))
            }
        };
        let grid = Grid1D::centered(dx, n_points)?;
        let p = make_gaussian_packet(grid, k0, sigma_k, x0, mass_m, branch, c)?;
        *slot = Box::into_raw(Box::new(QsnpPacket { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `packet` must be null or come from [`qsnp_packet_gaussian`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsnp_packet_free(packet: *mut QsnpPacket) {
    if !packet.is_null() {
        drop(Box::from_raw(packet));
    }
}

/// Number of grid samples and the first grid coordinate.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsnp_packet_grid(
    packet: *const QsnpPacket,
    out_n: *mut usize,
    out_x_min: *mut f64,
    out_dx: *mut f64,
) -> QsnpStatus {
    guard(|| {
        let g = get(packet, "packet")?.inner.grid;
        *out(out_n, "out_n")? = g.n_points;
        *out(out_x_min, "out_x_min")? = g.x_min;
        *out(out_dx, "out_dx")? = g.dx;
        Ok(())
    })
}

/// Writes Psi(x_i, t) as interleaved (re, im) pairs into `out_samples`,
/// which must hold `2 * n` doubles where n is the grid size.
///
/// # Safety
/// `out_samples` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qsnp_packet_synthesize(
    packet: *const QsnpPacket,
    t: f64,
    out_samples: *mut f64,
    len: usize,
) -> QsnpStatus {
    guard(|| {
        let p = get(packet, "packet")?;
        if out_samples.is_null() {
            return Err(Fail::Null("out_samples"));
        }
        let need = 2 * p.inner.grid.n_points;
        if len < need {
            return Err(Fail::Lib(Error::InvalidParameter {
                name: "len",
                reason: format!("buffer holds {len} doubles, {need} needed"),
            }));
        }
        let f = p.inner.synthesize(t)?;
        let dst = std::slice::from_raw_parts_mut(out_samples, need);
        for (pair, z) in dst.chunks_exact_mut(2).zip(&f.samples) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}
