//! C ABI for the specdisp library.
//!
//! Handles are opaque pointers created and released by the paired
//! `*_new*` / `*_free` calls. Every fallible call returns a
//! [`SpecdispStatus`]; on failure a thread-local message is available via
//! [`specdisp_last_error`].
//!
//! Pointer validity is the caller's contract; null pointers are caught and
//! reported, other invalid pointers cannot be.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use num_complex::Complex64;

use specdisp::arith::TrigPoly;
use specdisp::dispersion::{synthesize, DispersionLaw, LawKind, ParticleParams, SpectrumGrid};
use specdisp::hill::{recurrence_solve, Branch, LatticeSolution};
use specdisp::specfun::{gamma, ln_gamma, Polynomial};
use specdisp::Error;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecdispStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BandViolation = 3,
    BoundaryMode = 4,
    SingularInversion = 5,
    Resonance = 6,
    Pole = 7,
    Divergent = 8,
    Overflow = 9,
    Io = 10,
}

/// Dispersion law selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecdispLaw {
    Schrodinger = 0,
    Relativistic = 1,
    KleinGordon = 2,
}

impl From<SpecdispLaw> for LawKind {
    fn from(law: SpecdispLaw) -> Self {
        match law {
            SpecdispLaw::Schrodinger => LawKind::Schrodinger,
            SpecdispLaw::Relativistic => LawKind::Relativistic,
            SpecdispLaw::KleinGordon => LawKind::KleinGordon,
        }
    }
}

/// Opaque particle-parameter handle.
pub struct SpecdispParticle {
    inner: ParticleParams,
}

/// Opaque 1D spectrum handle.
pub struct SpecdispGrid {
    inner: SpectrumGrid,
}

/// Opaque lattice-solution handle.
pub struct SpecdispLattice {
    inner: LatticeSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(e: &Error) -> SpecdispStatus {
    let text = CString::new(e.to_string()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
    match e {
        Error::InvalidInput(_) | Error::Json(_) | Error::IndicialUnsolvable(_) => {
            SpecdispStatus::InvalidInput
        }
        Error::BandViolation { .. } => SpecdispStatus::BandViolation,
        Error::BoundaryMode { .. } => SpecdispStatus::BoundaryMode,
        Error::SingularInversion => SpecdispStatus::SingularInversion,
        Error::Resonance { .. } => SpecdispStatus::Resonance,
        Error::Pole { .. } | Error::CommonRootPole { .. } => SpecdispStatus::Pole,
        Error::Divergent(_) => SpecdispStatus::Divergent,
        Error::Overflow { .. } => SpecdispStatus::Overflow,
        Error::Io(_) => SpecdispStatus::Io,
    }
}

fn set_message(msg: &str) -> SpecdispStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).unwrap());
    SpecdispStatus::NullPointer
}

/// Message describing the most recent failure on this thread.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn specdisp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn specdisp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// scalar kernels
// ---------------------------------------------------------------------------

/// Möbius function; fails for `n = 0` or beyond the sieve bound.
#[no_mangle]
pub extern "C" fn specdisp_mobius(n: u64, out: *mut i32) -> SpecdispStatus {
    if out.is_null() {
        return set_message("out pointer is null");
    }
    match specdisp::arith::mobius(n) {
        Ok(v) => {
            unsafe { *out = v };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Complex Gamma function.
#[no_mangle]
pub extern "C" fn specdisp_gamma(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if out_re.is_null() || out_im.is_null() {
        return set_message("out pointer is null");
    }
    match gamma(Complex64::new(re, im)) {
        Ok(v) => {
            unsafe {
                *out_re = v.re;
                *out_im = v.im;
            }
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Principal-branch log-Gamma.
#[no_mangle]
pub extern "C" fn specdisp_ln_gamma(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if out_re.is_null() || out_im.is_null() {
        return set_message("out pointer is null");
    }
    match ln_gamma(Complex64::new(re, im)) {
        Ok(v) => {
            unsafe {
                *out_re = v.re;
                *out_im = v.im;
            }
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

// ---------------------------------------------------------------------------
// particles and dispersion laws
// ---------------------------------------------------------------------------

/// New particle from SI-style constants.
#[no_mangle]
pub extern "C" fn specdisp_particle_new_si(
    m0: f64,
    c: f64,
    hbar: f64,
    out: *mut *mut SpecdispParticle,
) -> SpecdispStatus {
    if out.is_null() {
        return set_message("out pointer is null");
    }
    match ParticleParams::si(m0, c, hbar) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SpecdispParticle { inner })) };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// New particle in natural units (`E0 = hbar = 1`) with Compton length `l0`.
#[no_mangle]
pub extern "C" fn specdisp_particle_new_natural(
    l0: f64,
    out: *mut *mut SpecdispParticle,
) -> SpecdispStatus {
    if out.is_null() {
        return set_message("out pointer is null");
    }
    match ParticleParams::natural(l0) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SpecdispParticle { inner })) };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Rest energy `m0 c^2`.
#[no_mangle]
pub extern "C" fn specdisp_particle_rest_energy(
    particle: *const SpecdispParticle,
    out: *mut f64,
) -> SpecdispStatus {
    if particle.is_null() || out.is_null() {
        return set_message("null pointer");
    }
    unsafe { *out = (*particle).inner.rest_energy() };
    SpecdispStatus::Ok
}

/// Compton length `hbar / (m0 c)`.
#[no_mangle]
pub extern "C" fn specdisp_particle_compton_length(
    particle: *const SpecdispParticle,
    out: *mut f64,
) -> SpecdispStatus {
    if particle.is_null() || out.is_null() {
        return set_message("null pointer");
    }
    unsafe { *out = (*particle).inner.compton_length() };
    SpecdispStatus::Ok
}

/// Mode energy `E(gamma)` under the selected law.
#[no_mangle]
pub extern "C" fn specdisp_dispersion_energy(
    particle: *const SpecdispParticle,
    law: SpecdispLaw,
    gamma: f64,
    out: *mut f64,
) -> SpecdispStatus {
    if particle.is_null() || out.is_null() {
        return set_message("null pointer");
    }
    let params = unsafe { (*particle).inner };
    match DispersionLaw::new(law.into(), params).energy(gamma) {
        Ok(v) => {
            unsafe { *out = v };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Release a particle handle.
#[no_mangle]
pub extern "C" fn specdisp_particle_free(particle: *mut SpecdispParticle) {
    if !particle.is_null() {
        drop(unsafe { Box::from_raw(particle) });
    }
}

// ---------------------------------------------------------------------------
// spectral grids
// ---------------------------------------------------------------------------

/// New 1D spectrum from `len` samples and interleaved `(re, im)` amplitudes.
/// Pass a non-positive or non-finite `band_limit` for an unlimited axis.
#[no_mangle]
pub extern "C" fn specdisp_grid_new_1d(
    gammas: *const f64,
    amplitudes: *const f64,
    len: usize,
    band_limit: f64,
    out: *mut *mut SpecdispGrid,
) -> SpecdispStatus {
    if gammas.is_null() || amplitudes.is_null() || out.is_null() {
        return set_message("null pointer");
    }
    let axis = unsafe { std::slice::from_raw_parts(gammas, len) }.to_vec();
    let raw = unsafe { std::slice::from_raw_parts(amplitudes, 2 * len) };
    let amps: Vec<Complex64> = raw
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    let band = (band_limit.is_finite() && band_limit > 0.0).then_some(band_limit);
    match SpectrumGrid::new_1d(axis, amps, band) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SpecdispGrid { inner })) };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Advance the spectrum by time `t` in place.
#[no_mangle]
pub extern "C" fn specdisp_grid_evolve(
    grid: *mut SpecdispGrid,
    particle: *const SpecdispParticle,
    law: SpecdispLaw,
    t: f64,
) -> SpecdispStatus {
    if grid.is_null() || particle.is_null() {
        return set_message("null pointer");
    }
    let params = unsafe { (*particle).inner };
    let law = DispersionLaw::new(law.into(), params);
    let current = unsafe { &mut (*grid).inner };
    match current.evolve(t, &law) {
        Ok(next) => {
            *current = next;
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Number of samples.
#[no_mangle]
pub extern "C" fn specdisp_grid_len(grid: *const SpecdispGrid) -> usize {
    if grid.is_null() {
        return 0;
    }
    unsafe { (*grid).inner.amplitudes().len() }
}

/// Amplitude at sample `idx`.
#[no_mangle]
pub extern "C" fn specdisp_grid_amplitude(
    grid: *const SpecdispGrid,
    idx: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if grid.is_null() || out_re.is_null() || out_im.is_null() {
        return set_message("null pointer");
    }
    let amps = unsafe { (*grid).inner.amplitudes() };
    match amps.get(idx) {
        Some(a) => {
            unsafe {
                *out_re = a.re;
                *out_im = a.im;
            }
            SpecdispStatus::Ok
        }
        None => {
            LAST_ERROR
                .with(|slot| *slot.borrow_mut() = CString::new("index out of range").unwrap());
            SpecdispStatus::InvalidInput
        }
    }
}

/// Quadrature synthesis of the spectrum at position `x`.
#[no_mangle]
pub extern "C" fn specdisp_grid_synthesize(
    grid: *const SpecdispGrid,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if grid.is_null() || out_re.is_null() || out_im.is_null() {
        return set_message("null pointer");
    }
    match synthesize(unsafe { &(*grid).inner }, &[x]) {
        Ok(syn) => {
            unsafe {
                *out_re = syn.values[0].re;
                *out_im = syn.values[0].im;
            }
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Release a grid handle.
#[no_mangle]
pub extern "C" fn specdisp_grid_free(grid: *mut SpecdispGrid) {
    if !grid.is_null() {
        drop(unsafe { Box::from_raw(grid) });
    }
}

// ---------------------------------------------------------------------------
// lattice solutions
// ---------------------------------------------------------------------------

/// Solve `sum_j b_j y^(j) = V y` on the coefficient lattice.
///
/// The potential is given as `n_coeffs` triples `(index, re, im)` split
/// across three arrays; `b` is the ascending complex coefficient list of the
/// operator polynomial. `branch_index` selects the indicial root (sorted by
/// real part, then imaginary part).
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub extern "C" fn specdisp_recurrence_solve(
    c_indices: *const i64,
    c_re: *const f64,
    c_im: *const f64,
    n_coeffs: usize,
    b_re: *const f64,
    b_im: *const f64,
    n_b: usize,
    branch_index: usize,
    order: usize,
    out: *mut *mut SpecdispLattice,
) -> SpecdispStatus {
    if c_indices.is_null()
        || c_re.is_null()
        || c_im.is_null()
        || b_re.is_null()
        || b_im.is_null()
        || out.is_null()
    {
        return set_message("null pointer");
    }
    let idx = unsafe { std::slice::from_raw_parts(c_indices, n_coeffs) };
    let cre = unsafe { std::slice::from_raw_parts(c_re, n_coeffs) };
    let cim = unsafe { std::slice::from_raw_parts(c_im, n_coeffs) };
    let mut v = TrigPoly::new();
    for i in 0..n_coeffs {
        v.set(idx[i], Complex64::new(cre[i], cim[i]));
    }
    let bre = unsafe { std::slice::from_raw_parts(b_re, n_b) };
    let bim = unsafe { std::slice::from_raw_parts(b_im, n_b) };
    let b = Polynomial::new((0..n_b).map(|i| Complex64::new(bre[i], bim[i])));
    match recurrence_solve(&v, &b, Branch::Index(branch_index), order) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SpecdispLattice { inner })) };
            SpecdispStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Number of lattice coefficients (truncation order + 1).
#[no_mangle]
pub extern "C" fn specdisp_lattice_len(lattice: *const SpecdispLattice) -> usize {
    if lattice.is_null() {
        return 0;
    }
    unsafe { (*lattice).inner.coeffs().len() }
}

/// Lattice coefficient `a_k`.
#[no_mangle]
pub extern "C" fn specdisp_lattice_coeff(
    lattice: *const SpecdispLattice,
    k: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if lattice.is_null() || out_re.is_null() || out_im.is_null() {
        return set_message("null pointer");
    }
    let a = unsafe { (*lattice).inner.coeff(k) };
    unsafe {
        *out_re = a.re;
        *out_im = a.im;
    }
    SpecdispStatus::Ok
}

/// Base frequency `nu` of the lattice solution.
#[no_mangle]
pub extern "C" fn specdisp_lattice_nu(
    lattice: *const SpecdispLattice,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if lattice.is_null() || out_re.is_null() || out_im.is_null() {
        return set_message("null pointer");
    }
    let nu = unsafe { (*lattice).inner.nu() };
    unsafe {
        *out_re = nu.re;
        *out_im = nu.im;
    }
    SpecdispStatus::Ok
}

/// Evaluate the lattice solution at position `x`.
#[no_mangle]
pub extern "C" fn specdisp_lattice_eval(
    lattice: *const SpecdispLattice,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SpecdispStatus {
    if lattice.is_null() || out_re.is_null() || out_im.is_null() {
        return set_message("null pointer");
    }
    let y = unsafe { (*lattice).inner.eval(x) };
    unsafe {
        *out_re = y.re;
        *out_im = y.im;
    }
    SpecdispStatus::Ok
}

/// Release a lattice handle.
#[no_mangle]
pub extern "C" fn specdisp_lattice_free(lattice: *mut SpecdispLattice) {
    if !lattice.is_null() {
        drop(unsafe { Box::from_raw(lattice) });
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
