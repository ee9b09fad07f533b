#ifndef SPECDISP_H
#define SPECDISP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum {
  SPECDISP_STATUS_OK = 0,
  SPECDISP_STATUS_NULL_POINTER = 1,
  SPECDISP_STATUS_INVALID_INPUT = 2,
  SPECDISP_STATUS_BAND_VIOLATION = 3,
  SPECDISP_STATUS_BOUNDARY_MODE = 4,
  SPECDISP_STATUS_SINGULAR_INVERSION = 5,
  SPECDISP_STATUS_RESONANCE = 6,
  SPECDISP_STATUS_POLE = 7,
  SPECDISP_STATUS_DIVERGENT = 8,
  SPECDISP_STATUS_OVERFLOW = 9,
  SPECDISP_STATUS_IO = 10,
} SpecdispStatus;

/**
 * Dispersion law selector.
 */
typedef enum {
  SPECDISP_LAW_SCHRODINGER = 0,
  SPECDISP_LAW_RELATIVISTIC = 1,
  SPECDISP_LAW_KLEIN_GORDON = 2,
} SpecdispLaw;

/**
 * Opaque 1D spectrum handle.
 */
typedef struct SpecdispGrid SpecdispGrid;

/**
 * Opaque lattice-solution handle.
 */
typedef struct SpecdispLattice SpecdispLattice;

/**
 * Opaque particle-parameter handle.
 */
typedef struct SpecdispParticle SpecdispParticle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *specdisp_last_error(void);

/**
 * Library version as a static string.
 */
const char *specdisp_version(void);

/**
 * Möbius function; fails for `n = 0` or beyond the sieve bound.
 */
SpecdispStatus specdisp_mobius(uint64_t n, int32_t *out);

/**
 * Complex Gamma function.
 */
SpecdispStatus specdisp_gamma(double re, double im, double *out_re, double *out_im);

/**
 * Principal-branch log-Gamma.
 */
SpecdispStatus specdisp_ln_gamma(double re, double im, double *out_re, double *out_im);

/**
 * New particle from SI-style constants.
 */
SpecdispStatus specdisp_particle_new_si(double m0, double c, double hbar, SpecdispParticle **out);

/**
 * New particle in natural units (`E0 = hbar = 1`) with Compton length `l0`.
 */
SpecdispStatus specdisp_particle_new_natural(double l0, SpecdispParticle **out);

/**
 * Rest energy `m0 c^2`.
 */
SpecdispStatus specdisp_particle_rest_energy(const SpecdispParticle *particle, double *out);

/**
 * Compton length `hbar / (m0 c)`.
 */
SpecdispStatus specdisp_particle_compton_length(const SpecdispParticle *particle, double *out);

/**
 * Mode energy `E(gamma)` under the selected law.
 */
SpecdispStatus specdisp_dispersion_energy(const SpecdispParticle *particle,
                                          SpecdispLaw law,
                                          double gamma,
                                          double *out);

/**
 * Release a particle handle.
 */
void specdisp_particle_free(SpecdispParticle *particle);

/**
 * New 1D spectrum from `len` samples and interleaved `(re, im)` amplitudes.
 * Pass a non-positive or non-finite `band_limit` for an unlimited axis.
 */
SpecdispStatus specdisp_grid_new_1d(const double *gammas,
                                    const double *amplitudes,
                                    uintptr_t len,
                                    double band_limit,
                                    SpecdispGrid **out);

/**
 * Advance the spectrum by time `t` in place.
 */
SpecdispStatus specdisp_grid_evolve(SpecdispGrid *grid,
                                    const SpecdispParticle *particle,
                                    SpecdispLaw law,
                                    double t);

/**
 * Number of samples.
 */
uintptr_t specdisp_grid_len(const SpecdispGrid *grid);

/**
 * Amplitude at sample `idx`.
 */
SpecdispStatus specdisp_grid_amplitude(const SpecdispGrid *grid,
                                       uintptr_t idx,
                                       double *out_re,
                                       double *out_im);

/**
 * Quadrature synthesis of the spectrum at position `x`.
 */
SpecdispStatus specdisp_grid_synthesize(const SpecdispGrid *grid,
                                        double x,
                                        double *out_re,
                                        double *out_im);

/**
 * Release a grid handle.
 */
void specdisp_grid_free(SpecdispGrid *grid);

/**
 * Solve `sum_j b_j y^(j) = V y` on the coefficient lattice.
 *
 * The potential is given as `n_coeffs` triples `(index, re, im)` split
 * across three arrays; `b` is the ascending complex coefficient list of the
 * operator polynomial. `branch_index` selects the indicial root (sorted by
 * real part, then imaginary part).
 */
SpecdispStatus specdisp_recurrence_solve(const int64_t *c_indices,
                                         const double *c_re,
                                         const double *c_im,
                                         uintptr_t n_coeffs,
                                         const double *b_re,
                                         const double *b_im,
                                         uintptr_t n_b,
                                         uintptr_t branch_index,
                                         uintptr_t order,
                                         SpecdispLattice **out);

/**
 * Number of lattice coefficients (truncation order + 1).
 */
uintptr_t specdisp_lattice_len(const SpecdispLattice *lattice);

/**
 * Lattice coefficient `a_k`.
 */
SpecdispStatus specdisp_lattice_coeff(const SpecdispLattice *lattice,
                                      uintptr_t k,
                                      double *out_re,
                                      double *out_im);

/**
 * Base frequency `nu` of the lattice solution.
 */
SpecdispStatus specdisp_lattice_nu(const SpecdispLattice *lattice, double *out_re, double *out_im);

/**
 * Evaluate the lattice solution at position `x`.
 */
SpecdispStatus specdisp_lattice_eval(const SpecdispLattice *lattice,
                                     double x,
                                     double *out_re,
                                     double *out_im);

/**
 * Release a lattice handle.
 */
void specdisp_lattice_free(SpecdispLattice *lattice);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECDISP_H */
