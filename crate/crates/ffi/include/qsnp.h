#ifndef QSNP_H
#define QSNP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QsnpBranch {
  QSNP_BRANCH_OSCILLATORY_ONLY = 0,
  QSNP_BRANCH_GROWING = 1,
  QSNP_BRANCH_DECAYING = 2,
} QsnpBranch;

typedef enum QsnpStatus {
  QSNP_STATUS_OK = 0,
  QSNP_STATUS_NULL_POINTER = 1,
  QSNP_STATUS_INVALID_PARAMETER = 2,
  QSNP_STATUS_DOMAIN = 3,
  QSNP_STATUS_OVERFLOW = 4,
  QSNP_STATUS_NUMERICAL = 5,
  QSNP_STATUS_PANIC = 6,
} QsnpStatus;

/**
 * Opaque medium handle.
 */
typedef struct QsnpMedium QsnpMedium;

/**
 * Opaque wavepacket handle.
 */
typedef struct QsnpPacket QsnpPacket;

typedef struct QsnpTimescales {
  double tau_rad;
  double tau_r;
  double tau_d;
  double transit_l_over_c;
} QsnpTimescales;

typedef struct QsnpSnr {
  double form_qa3;
  double form_qa4;
  double form_new1;
  double max_relative_deviation;
} QsnpSnr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the full message length including the NUL,
 * or 0 if there is none.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t qsnp_last_error_message(char *buf, size_t cap);

/**
 * Creates a medium. Units are Gaussian CGS. A negative `beta` selects the
 * radiative width 1 / (2 tau_RAD).
 *
 * # Safety
 * `out_medium` must be a valid pointer.
 */
enum QsnpStatus qsnp_medium_new(double omega0,
                                double dipole_d,
                                double beta,
                                double density_n,
                                double inversion_w,
                                double length_l,
                                double area_s,
                                struct QsnpMedium **out_medium);

/**
 * # Safety
 * `medium` must be null or come from [`qsnp_medium_new`] and not be freed twice.
 */
void qsnp_medium_free(struct QsnpMedium *medium);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_medium_beta(const struct QsnpMedium *medium, double *out_beta);

/**
 * Group velocity (cm/s) at detuning omega0 - omega, and v_g / c - 1.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_group_velocity(const struct QsnpMedium *medium,
                                    double detuning,
                                    double *out_vg,
                                    double *out_excess);

/**
 * Intensity gain coefficient g (1/cm).
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_gain_coefficient(const struct QsnpMedium *medium,
                                      double detuning,
                                      double *out_g);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_timescales(const struct QsnpMedium *medium, struct QsnpTimescales *out_ts);

/**
 * Damped complex refractive index at angular frequency `omega`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_refractive_index(const struct QsnpMedium *medium,
                                      double omega,
                                      double *out_re,
                                      double *out_im);

/**
 * Superfluorescent intensity <F^+ F>(L, t) from the inverted medium.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_sf_intensity(const struct QsnpMedium *medium, double t, double *out_i);

/**
 * Superfluorescence delay: closed form and root-solved value.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_sf_delay(const struct QsnpMedium *medium,
                              double *out_closed_form,
                              double *out_root_solve);

/**
 * Peak signal-to-noise ratio of a Gaussian pulse of `q` photons, width `tau_p`
 * and detuning `detuning`, observed at `observation_t`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_peak_snr(const struct QsnpMedium *medium,
                              double q,
                              double tau_p,
                              double detuning,
                              double observation_t,
                              struct QsnpSnr *out_snr);

/**
 * Modified Bessel function I0.
 *
 * # Safety
 * `out_v` must be valid.
 */
enum QsnpStatus qsnp_bessel_i0(double y, double *out_v);

/**
 * Gaussian tachyonic wavepacket on a centred grid of `n_points` samples
 * spaced `dx` (normalized units). `branch` is a [`QsnpBranch`] value.
 *
 * # Safety
 * `out_packet` must be valid.
 */
enum QsnpStatus qsnp_packet_gaussian(double dx,
                                     size_t n_points,
                                     double k0,
                                     double sigma_k,
                                     double x0,
                                     double mass_m,
                                     uint32_t branch,
                                     double c,
                                     struct QsnpPacket **out_packet);

/**
 * # Safety
 * `packet` must be null or come from [`qsnp_packet_gaussian`] and not be freed twice.
 */
void qsnp_packet_free(struct QsnpPacket *packet);

/**
 * Number of grid samples and the first grid coordinate.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QsnpStatus qsnp_packet_grid(const struct QsnpPacket *packet,
                                 size_t *out_n,
                                 double *out_x_min,
                                 double *out_dx);

/**
 * Writes Psi(x_i, t) as interleaved (re, im) pairs into `out_samples`,
 * which must hold `2 * n` doubles where n is the grid size.
 *
 * # Safety
 * `out_samples` must point to `len` writable doubles.
 */
enum QsnpStatus qsnp_packet_synthesize(const struct QsnpPacket *packet,
                                       double t,
                                       double *out_samples,
                                       size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSNP_H */
