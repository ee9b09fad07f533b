//! Kinematics and band-limited spectral propagation.
//!
//! The canonical dispersion law here is
//! `E(gamma) = E0 + (E0/2) u^2 / sqrt(1 + u^2)` with `u = l0 * gamma`, the
//! all-orders resummation of the even-derivative series; its first term is the
//! quadratic law and the square-root law `E0 sqrt(1 + u^2)` is kept for
//! comparison. Decaying-mode sums `sum f_n e^{-n x}` carry the analytically
//! continued phase with `sqrt(1 - u^2)` in the denominator.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{binomial_minus_half, linspace, simpson_uniform};

// ---------------------------------------------------------------------------
// particle parameters
// ---------------------------------------------------------------------------

/// Rest-mass / light-speed / hbar bundle with derived rest energy and
/// Compton length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleParams {
    m0: f64,
    c: f64,
    hbar: f64,
}

impl ParticleParams {
    pub fn si(m0: f64, c: f64, hbar: f64) -> Result<Self> {
        let valid = m0 > 0.0 && c > 0.0 && hbar > 0.0;
        if !valid {
            return Err(Error::InvalidInput(
                "m0, c and hbar must all be positive".into(),
            ));
        }
        Ok(Self { m0, c, hbar })
    }

    /// Natural units `E0 = hbar = 1` with the requested Compton length.
    pub fn natural(l0: f64) -> Result<Self> {
        let valid = l0 > 0.0;
        if !valid {
            return Err(Error::InvalidInput("l0 must be positive".into()));
        }
        Self::si(1.0 / (l0 * l0), l0, 1.0)
    }

    /// Electron preset: Compton length `3.86e-13` in centimeter units,
    /// natural units otherwise.
    pub fn electron() -> Self {
        Self::natural(3.86e-13).unwrap()
    }

    /// Neutrino preset: Compton length `0.000164` in centimeter units.
    pub fn neutrino() -> Self {
        Self::natural(1.64e-4).unwrap()
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Rest energy `E0 = m0 c^2`.
    pub fn rest_energy(&self) -> f64 {
        self.m0 * self.c * self.c
    }

    /// Compton length `l0 = hbar / (m0 c)`.
    pub fn compton_length(&self) -> f64 {
        self.hbar / (self.m0 * self.c)
    }

    /// Spectral band edge `1 / l0`.
    pub fn band_limit(&self) -> f64 {
        1.0 / self.compton_length()
    }
}

/// Velocity ratio `xi = v/c` as a function of momentum:
/// `xi = (p/m0c) / sqrt(1 + (p/m0c)^2)`.
pub fn velocity_ratio(p: f64, params: &ParticleParams) -> f64 {
    let x = p / (params.m0 * params.c);
    x / (1.0 + x * x).sqrt()
}

/// Total energy of a free particle of momentum `p`:
/// `E = E0 + (E0/2) x^2 / sqrt(1 + x^2)` with `x = p/m0c`.
pub fn energy_of_momentum(p: f64, params: &ParticleParams) -> f64 {
    let x = p / (params.m0 * params.c);
    let e0 = params.rest_energy();
    e0 + 0.5 * e0 * x * x / (1.0 + x * x).sqrt()
}

// ---------------------------------------------------------------------------
// dispersion laws
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Schrodinger,
    Relativistic,
    KleinGordon,
}

impl LawKind {
    pub fn label(&self) -> &'static str {
        match self {
            LawKind::Schrodinger => "schrodinger",
            LawKind::Relativistic => "relativistic",
            LawKind::KleinGordon => "klein_gordon",
        }
    }
}

/// A dispersion law `gamma -> E(gamma)` for a fixed particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionLaw {
    kind: LawKind,
    params: ParticleParams,
}

impl DispersionLaw {
    pub fn new(kind: LawKind, params: ParticleParams) -> Self {
        Self { kind, params }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn params(&self) -> &ParticleParams {
        &self.params
    }

    /// Band edge applicable to this law, if any.
    pub fn band_limit(&self) -> Option<f64> {
        match self.kind {
            LawKind::Relativistic => Some(self.params.band_limit()),
            _ => None,
        }
    }

    /// Mode energy `E(gamma)`.
    pub fn energy(&self, gamma: f64) -> Result<f64> {
        Ok(self.params.rest_energy() + self.kinetic(gamma)?)
    }

    /// Kinetic part `E(gamma) - E0`.
    pub fn kinetic(&self, gamma: f64) -> Result<f64> {
        let e0 = self.params.rest_energy();
        let u = self.params.compton_length() * gamma;
        match self.kind {
            LawKind::Schrodinger => Ok(0.5 * e0 * u * u),
            LawKind::Relativistic => {
                if gamma.abs() >= self.params.band_limit() {
                    return Err(Error::BandViolation {
                        gamma,
                        limit: self.params.band_limit(),
                    });
                }
                Ok(0.5 * e0 * u * u / (1.0 + u * u).sqrt())
            }
            LawKind::KleinGordon => Ok(e0 * ((1.0 + u * u).sqrt() - 1.0)),
        }
    }
}

// ---------------------------------------------------------------------------
// spectral grids
// ---------------------------------------------------------------------------

/// Sampled spectrum over one to three uniform frequency axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    axes: Vec<Vec<f64>>,
    amplitudes: Vec<Complex64>,
    band_limits: Vec<Option<f64>>,
}

fn check_uniform(axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::InvalidInput(
            "axis needs at least two samples".into(),
        ));
    }
    let h = axis[1] - axis[0];
    let increasing = h > 0.0;
    if !increasing {
        return Err(Error::InvalidInput(
            "axis must be strictly increasing".into(),
        ));
    }
    for w in axis.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Error::InvalidInput("axis samples must be uniform".into()));
        }
    }
    Ok(())
}

impl SpectrumGrid {
    pub fn new(
        axes: Vec<Vec<f64>>,
        amplitudes: Vec<Complex64>,
        band_limits: Vec<Option<f64>>,
    ) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidInput("grids carry 1 to 3 axes".into()));
        }
        if band_limits.len() != axes.len() {
            return Err(Error::InvalidInput(
                "one band-limit flag per axis expected".into(),
            ));
        }
        let mut len = 1usize;
        for axis in &axes {
            check_uniform(axis)?;
            len *= axis.len();
        }
        if amplitudes.len() != len {
            return Err(Error::InvalidInput(format!(
                "amplitude count {} does not match axis product {len}",
                amplitudes.len()
            )));
        }
        Ok(Self {
            axes,
            amplitudes,
            band_limits,
        })
    }

    pub fn new_1d(axis: Vec<f64>, amplitudes: Vec<Complex64>, band: Option<f64>) -> Result<Self> {
        Self::new(vec![axis], amplitudes, vec![band])
    }

    /// Gaussian spectrum `exp(-(gamma-center)^2 / (2 width^2))` on a uniform
    /// axis.
    pub fn gaussian_1d(axis: Vec<f64>, center: f64, width: f64, band: Option<f64>) -> Result<Self> {
        let valid = width > 0.0;
        if !valid {
            return Err(Error::InvalidInput(
                "gaussian width must be positive".into(),
            ));
        }
        let amps = axis
            .iter()
            .map(|&g| {
                let d = (g - center) / width;
                Complex64::new((-0.5 * d * d).exp(), 0.0)
            })
            .collect();
        Self::new_1d(axis, amps, band)
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn band_limits(&self) -> &[Option<f64>] {
        &self.band_limits
    }

    fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.axes.len()];
        for (d, axis) in self.axes.iter().enumerate().rev() {
            idx[d] = flat % axis.len();
            flat /= axis.len();
        }
        idx
    }

    /// Multiply each amplitude by `exp(-i E t / hbar)`; kinetic parts add per
    /// axis and the rest energy enters once.
    pub fn evolve(&self, t: f64, law: &DispersionLaw) -> Result<SpectrumGrid> {
        let hbar = law.params().hbar();
        let e0 = law.params().rest_energy();
        let mut out = self.clone();
        for (flat, amp) in out.amplitudes.iter_mut().enumerate() {
            let idx = self.unravel(flat);
            let mut energy = e0;
            for (d, &i) in idx.iter().enumerate() {
                energy += law.kinetic(self.axes[d][i])?;
            }
            *amp *= Complex64::new(0.0, -energy * t / hbar).exp();
        }
        Ok(out)
    }

    /// Spectral L2 norm `sqrt(1/(2 pi) * integral |f|^2)`, 1D grids only.
    pub fn l2_norm_1d(&self) -> Result<f64> {
        if self.dimension() != 1 {
            return Err(Error::InvalidInput("l2_norm_1d is for 1D grids".into()));
        }
        let axis = &self.axes[0];
        let vals: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|a| Complex64::new(a.norm_sqr(), 0.0))
            .collect();
        let (v, _) = simpson_uniform(&vals, axis[1] - axis[0])?;
        Ok((v.re / std::f64::consts::TAU).max(0.0).sqrt())
    }

    /// CSV snapshot `gamma, Re, Im, |f|` of a 1D spectrum.
    pub fn write_csv_1d<W: Write>(&self, mut w: W) -> Result<()> {
        if self.dimension() != 1 {
            return Err(Error::InvalidInput("csv snapshot is for 1D grids".into()));
        }
        writeln!(w, "gamma,re,im,abs")?;
        for (g, a) in self.axes[0].iter().zip(&self.amplitudes) {
            writeln!(
                w,
                "{:.15e},{:.15e},{:.15e},{:.15e}",
                g,
                a.re,
                a.im,
                a.norm()
            )?;
        }
        Ok(())
    }
}

/// Result of synthesizing a spectrum onto position-space points.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub error_estimate: f64,
}

/// Quadrature synthesis `(1/2 pi) * integral f(gamma) e^{i gamma x} dgamma`
/// over the sampled band (1D grids).
pub fn synthesize(grid: &SpectrumGrid, xs: &[f64]) -> Result<Synthesis> {
    if grid.dimension() != 1 {
        return Err(Error::InvalidInput("synthesis expects a 1D grid".into()));
    }
    let axis = &grid.axes()[0];
    if grid.amplitudes().is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let h = axis[1] - axis[0];
    let mut values = Vec::with_capacity(xs.len());
    let mut err = 0.0f64;
    for &x in xs {
        let integrand: Vec<Complex64> = axis
            .iter()
            .zip(grid.amplitudes())
            .map(|(&g, &a)| a * Complex64::new(0.0, g * x).exp())
            .collect();
        let (v, e) = simpson_uniform(&integrand, h)?;
        values.push(v / std::f64::consts::TAU);
        err = err.max(e / std::f64::consts::TAU);
    }
    Ok(Synthesis {
        xs: xs.to_vec(),
        values,
        error_estimate: err,
    })
}

// ---------------------------------------------------------------------------
// decaying-mode sums
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn value(&self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }
}

/// Solution `Y(x,t) = e^{-i E0 t / hbar} sum_n f_n e^{i s w_n t} e^{-n x}`
/// over decaying modes `n < 1/l0`.
#[derive(Debug, Clone)]
pub struct ModeSum {
    modes: Vec<(u64, Complex64)>,
    params: ParticleParams,
    phase_sign: PhaseSign,
}

impl ModeSum {
    pub fn new(
        modes: Vec<(u64, Complex64)>,
        params: ParticleParams,
        phase_sign: PhaseSign,
    ) -> Result<Self> {
        let l0 = params.compton_length();
        for &(n, _) in &modes {
            if n == 0 {
                return Err(Error::InvalidInput("mode indices start at 1".into()));
            }
            let u = n as f64 * l0;
            if (u - 1.0).abs() < 1e-12 {
                return Err(Error::BoundaryMode { n });
            }
            if u >= 1.0 {
                return Err(Error::BandViolation {
                    gamma: n as f64,
                    limit: params.band_limit(),
                });
            }
        }
        Ok(Self {
            modes,
            params,
            phase_sign,
        })
    }

    /// Build with the phase sign fixed by minimizing the truncated equation
    /// residual over both candidates.
    pub fn with_resolved_sign(
        modes: Vec<(u64, Complex64)>,
        params: ParticleParams,
    ) -> Result<Self> {
        let sign = resolve_phase_sign(&params)?;
        Self::new(modes, params, sign)
    }

    pub fn modes(&self) -> &[(u64, Complex64)] {
        &self.modes
    }

    pub fn params(&self) -> &ParticleParams {
        &self.params
    }

    pub fn phase_sign(&self) -> PhaseSign {
        self.phase_sign
    }

    /// Oscillation rate `w_n = E0 l0^2 n^2 / (2 hbar sqrt(|l0^2 n^2 - 1|))`.
    pub fn phase_rate(&self, n: u64) -> f64 {
        let e0 = self.params.rest_energy();
        let l0 = self.params.compton_length();
        let u2 = (n as f64 * l0).powi(2);
        e0 * u2 / (2.0 * self.params.hbar() * (u2 - 1.0).abs().sqrt())
    }

    /// Effective mode energy: the full phase is `exp(-i E_n t / hbar)` with
    /// `E_n = E0 - s * hbar * w_n`.
    pub fn mode_energy(&self, n: u64) -> f64 {
        self.params.rest_energy()
            - self.phase_sign.value() * self.params.hbar() * self.phase_rate(n)
    }

    /// Evaluate at `x > 0`.
    pub fn eval(&self, x: f64, t: f64) -> Result<Complex64> {
        let valid = x > 0.0;
        if !valid {
            return Err(Error::InvalidInput(
                "decaying-mode sums are evaluated for x > 0".into(),
            ));
        }
        let hbar = self.params.hbar();
        let e0 = self.params.rest_energy();
        let s = self.phase_sign.value();
        let mut acc = Complex64::default();
        for &(n, f) in &self.modes {
            let phase = Complex64::new(0.0, s * self.phase_rate(n) * t);
            acc += f * phase.exp() * (-(n as f64) * x).exp();
        }
        Ok(acc * Complex64::new(0.0, -e0 * t / hbar).exp())
    }
}

/// Decide the mode-sum phase sign empirically: evaluate the truncated
/// equation residual of a single probe mode for both signs at K = 40 and
/// keep the minimizer.
pub fn resolve_phase_sign(params: &ParticleParams) -> Result<PhaseSign> {
    let (plus, minus) = phase_sign_residuals(params, 40)?;
    Ok(if plus <= minus {
        PhaseSign::Plus
    } else {
        PhaseSign::Minus
    })
}

/// Truncated-equation residuals of the two sign candidates at `l0 n = 0.5`.
pub fn phase_sign_residuals(params: &ParticleParams, k_order: u32) -> Result<(f64, f64)> {
    // probe particle with the same structure but l0 n = 0.5 at n = 1
    let l0 = params.compton_length();
    let n = (0.5 / l0).max(1.0).round() as u64;
    let probe_params = if (n as f64 * l0 - 0.5).abs() < 0.25 {
        *params
    } else {
        ParticleParams::natural(0.5)?
    };
    let probes = [(1.0, 0.0), (1.3, 0.4), (0.7, 1.1)];
    let mut out = [0.0f64; 2];
    for (slot, sign) in [(0usize, PhaseSign::Plus), (1, PhaseSign::Minus)] {
        let ms = ModeSum::new(vec![(n, Complex64::new(1.0, 0.0))], probe_params, sign)?;
        let stats = truncated_residual_mode_sum(&ms, k_order, &probes)?;
        out[slot] = stats.max_normalized;
    }
    Ok((out[0], out[1]))
}

// ---------------------------------------------------------------------------
// truncated equation residual
// ---------------------------------------------------------------------------

/// How a spatial basis mode responds to `d/dx`.
#[derive(Debug, Clone, Copy)]
pub enum SpatialMode {
    /// `e^{-n x}`: even derivatives act as `n^{2k+2}`.
    Decaying(f64),
    /// `e^{i gamma x}`: even derivatives act as `(i gamma)^{2k+2}`.
    Plane(f64),
}

impl SpatialMode {
    fn scale(&self) -> f64 {
        match self {
            SpatialMode::Decaying(n) => *n,
            SpatialMode::Plane(g) => *g,
        }
    }

    fn basis(&self, x: f64) -> Complex64 {
        match self {
            SpatialMode::Decaying(n) => Complex64::new((-n * x).exp(), 0.0),
            SpatialMode::Plane(g) => Complex64::new(0.0, g * x).exp(),
        }
    }

    /// Eigenvalue of `d^{2k+2}/dx^{2k+2}` on this mode.
    fn deriv_eigen(&self, k: u32, _l0: f64) -> f64 {
        match self {
            SpatialMode::Decaying(n) => n.powi(2 * k as i32 + 2),
            SpatialMode::Plane(g) => {
                let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
                sign * g.powi(2 * k as i32 + 2)
            }
        }
    }
}

/// One term of a trial solution: a spatial mode, its time-phase energy, and
/// its weight.
#[derive(Debug, Clone, Copy)]
pub struct ProbeMode {
    pub mode: SpatialMode,
    pub energy: f64,
    pub weight: Complex64,
}

/// Residual statistics of the truncated evolution equation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub max_normalized: f64,
    pub mean_normalized: f64,
}

/// Evaluate `i hbar dY/dt - E0 Y - (E0/2) sum_{k<=K} (-1)^{k+1} C(-1/2,k)
/// l0^{2k+2} d^{2k+2}Y/dx^{2k+2}` analytically per mode and return residual
/// statistics normalized by `|Y|` at each probe point.
pub fn truncated_pde_residual(
    modes: &[ProbeMode],
    params: &ParticleParams,
    k_order: u32,
    probes: &[(f64, f64)],
) -> Result<ResidualStats> {
    if modes.is_empty() || probes.is_empty() {
        return Err(Error::InvalidInput(
            "modes and probes must be nonempty".into(),
        ));
    }
    let l0 = params.compton_length();
    let e0 = params.rest_energy();
    let hbar = params.hbar();
    for m in modes {
        let u = (l0 * m.mode.scale()).abs();
        if u > 0.9 {
            return Err(Error::BandViolation {
                gamma: m.mode.scale(),
                limit: 0.9 / l0,
            });
        }
    }
    // Per-mode mismatch between the time-phase energy and the truncated
    // spatial operator.
    let mismatch: Vec<f64> = modes
        .iter()
        .map(|m| {
            let mut rhs = e0;
            for k in 0..=k_order {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                rhs += 0.5
                    * e0
                    * sign
                    * binomial_minus_half(k)
                    * l0.powi(2 * k as i32 + 2)
                    * m.mode.deriv_eigen(k, l0);
            }
            m.energy - rhs
        })
        .collect();

    let mut max_abs = 0.0f64;
    let mut sum_abs = 0.0f64;
    let mut max_norm = 0.0f64;
    let mut sum_norm = 0.0f64;
    for &(x, t) in probes {
        let mut num = Complex64::default();
        let mut den = Complex64::default();
        for (m, &dm) in modes.iter().zip(&mismatch) {
            let phase = Complex64::new(0.0, -m.energy * t / hbar).exp();
            let term = m.weight * phase * m.mode.basis(x);
            num += term * dm;
            den += term;
        }
        let abs = num.norm();
        let norm = abs / den.norm().max(1e-300);
        max_abs = max_abs.max(abs);
        sum_abs += abs;
        max_norm = max_norm.max(norm);
        sum_norm += norm;
    }
    let n = probes.len() as f64;
    Ok(ResidualStats {
        max_abs,
        mean_abs: sum_abs / n,
        max_normalized: max_norm,
        mean_normalized: sum_norm / n,
    })
}

/// Truncated residual of a decaying-mode sum.
pub fn truncated_residual_mode_sum(
    ms: &ModeSum,
    k_order: u32,
    probes: &[(f64, f64)],
) -> Result<ResidualStats> {
    let modes: Vec<ProbeMode> = ms
        .modes()
        .iter()
        .map(|&(n, f)| ProbeMode {
            mode: SpatialMode::Decaying(n as f64),
            energy: ms.mode_energy(n),
            weight: f,
        })
        .collect();
    truncated_pde_residual(&modes, ms.params(), k_order, probes)
}

/// Truncated residual of a 1D spectral solution under `law`.
pub fn truncated_residual_spectrum(
    grid: &SpectrumGrid,
    law: &DispersionLaw,
    k_order: u32,
    probes: &[(f64, f64)],
) -> Result<ResidualStats> {
    if grid.dimension() != 1 {
        return Err(Error::InvalidInput(
            "residual probe expects a 1D grid".into(),
        ));
    }
    let modes: Vec<ProbeMode> = grid.axes()[0]
        .iter()
        .zip(grid.amplitudes())
        .filter(|(_, a)| **a != Complex64::default())
        .map(|(&g, &a)| {
            Ok(ProbeMode {
                mode: SpatialMode::Plane(g),
                energy: law.energy(g)?,
                weight: a,
            })
        })
        .collect::<Result<_>>()?;
    truncated_pde_residual(&modes, law.params(), k_order, probes)
}

/// Uniform 1D axis helper.
pub fn uniform_axis(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    let ordered = hi > lo;
    if count < 2 || !ordered {
        return Err(Error::InvalidInput(
            "axis needs count >= 2 and hi > lo".into(),
        ));
    }
    Ok(linspace(lo, hi, count))
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn natural(l0: f64) -> ParticleParams {
        ParticleParams::natural(l0).unwrap()
    }

    #[test]
    fn particle_consistency_identity() {
        for p in [
            natural(0.1),
            ParticleParams::si(2.0, 3.0, 0.7).unwrap(),
            ParticleParams::electron(),
            ParticleParams::neutrino(),
        ] {
            let lhs = p.rest_energy() * p.compton_length().powi(2);
            let rhs = p.hbar() * p.hbar() / p.m0();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
        let nat = natural(0.25);
        assert!((nat.rest_energy() - 1.0).abs() < 1e-15);
        assert!((nat.hbar() - 1.0).abs() < 1e-15);
        assert!((nat.compton_length() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn particle_rejects_nonpositive() {
        assert!(ParticleParams::si(0.0, 1.0, 1.0).is_err());
        assert!(ParticleParams::natural(-1.0).is_err());
    }

    // Solve xi = (p/m0c) sqrt(1 - xi^2) by bisection, independently of the
    // closed form.
    fn xi_by_bisection(x: f64) -> f64 {
        let f = |xi: f64| xi - x * (1.0 - xi * xi).sqrt();
        let (mut lo, mut hi) = (0.0f64, 1.0f64 - 1e-16);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn velocity_ratio_examples() {
        let p = natural(0.1);
        assert_eq!(velocity_ratio(0.0, &p), 0.0);
        let m0c = p.m0() * p.c();
        assert!((velocity_ratio(m0c, &p) - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
        assert!((velocity_ratio(m0c, &p) - xi_by_bisection(1.0)).abs() < 1e-12);
        assert!(velocity_ratio(1e3 * m0c, &p) > 0.999999);
    }

    #[test]
    fn velocity_ratio_is_odd_increasing_bounded() {
        let p = natural(0.2);
        let mut prev = -1.0;
        for i in -50..=50 {
            let mom = i as f64 * 0.3;
            let xi = velocity_ratio(mom, &p);
            assert!(xi > -1.0 && xi < 1.0);
            assert!(xi > prev);
            assert!((xi + velocity_ratio(-mom, &p)).abs() < 1e-15);
            prev = xi;
        }
    }

    #[test]
    fn velocity_ratio_consistent_with_implicit_relation() {
        let p = natural(0.05);
        let m0c = p.m0() * p.c();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let mom = rng.gen_range(-30.0..30.0) * m0c;
            let xi = velocity_ratio(mom, &p);
            assert!((xi - mom / m0c * (1.0 - xi * xi).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_of_momentum_examples() {
        let p = natural(0.1);
        let e0 = p.rest_energy();
        let m0c = p.m0() * p.c();
        assert_eq!(energy_of_momentum(0.0, &p), e0);

        // independent route: solve for xi, then E = E0 + E0 xi^2/(2 sqrt(1-xi^2))
        let chain = |x: f64| {
            let xi = xi_by_bisection(x);
            e0 + 0.5 * e0 * xi * xi / (1.0 - xi * xi).sqrt()
        };
        let got1 = energy_of_momentum(m0c, &p);
        assert!((got1 - e0 * (1.0 + 0.5 / 2.0f64.sqrt())).abs() < 1e-10);
        assert!((got1 - chain(1.0)).abs() < 1e-10);

        let got2 = energy_of_momentum(0.5 * m0c, &p);
        assert!((got2 / e0 - 1.1118033988749895).abs() < 1e-10);
        assert!((got2 - chain(0.5)).abs() < 1e-10);
    }

    #[test]
    fn dispersion_energy_at_zero_is_rest_energy() {
        let p = natural(0.1);
        for kind in [
            LawKind::Schrodinger,
            LawKind::Relativistic,
            LawKind::KleinGordon,
        ] {
            let law = DispersionLaw::new(kind, p);
            assert_eq!(law.energy(0.0).unwrap(), p.rest_energy());
        }
    }

    #[test]
    fn dispersion_energy_near_band_edge() {
        let p = natural(0.1);
        let law = DispersionLaw::new(LawKind::Relativistic, p);
        let gamma = (1.0 - 1e-9) / p.compton_length();
        let e = law.energy(gamma).unwrap();
        let want = p.rest_energy() * (1.0 + 0.5 / 2.0f64.sqrt());
        assert!((e - want).abs() < 1e-8 * want);
        assert!(matches!(
            law.energy(1.0 / p.compton_length()),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn schrodinger_limit_bound() {
        let p = natural(1.0);
        let rel = DispersionLaw::new(LawKind::Relativistic, p);
        let schr = DispersionLaw::new(LawKind::Schrodinger, p);
        for &u in &[0.05, 0.1, 0.3] {
            let gamma = u / p.compton_length();
            let erel = rel.kinetic(gamma).unwrap();
            let eschr = schr.kinetic(gamma).unwrap();
            assert!((erel - eschr).abs() / eschr <= 0.5 * u * u, "u = {u}");
        }
        // the two kinetic parts differ by <= 0.5% at u = 0.1
        let gamma = 0.1 / p.compton_length();
        let erel = rel.kinetic(gamma).unwrap();
        let eschr = schr.kinetic(gamma).unwrap();
        assert!((erel - eschr).abs() / eschr <= 0.005);
    }

    #[test]
    fn klein_gordon_comparison() {
        let p = natural(1.0);
        let rel = DispersionLaw::new(LawKind::Relativistic, p);
        let kg = DispersionLaw::new(LawKind::KleinGordon, p);
        for &u in &[0.05, 0.1, 0.3] {
            let gamma = u / p.compton_length();
            let a = rel.kinetic(gamma).unwrap();
            let b = kg.kinetic(gamma).unwrap();
            assert!((a - b).abs() / a.abs() <= 0.75 * u * u, "u = {u}");
        }
    }

    #[test]
    fn evolve_identity_and_periodicity() {
        let p = natural(0.1);
        let law = DispersionLaw::new(LawKind::Relativistic, p);
        let grid = SpectrumGrid::new_1d(
            uniform_axis(-5.0, 5.0, 41).unwrap(),
            vec![c(1.0, 0.0); 41],
            Some(p.band_limit()),
        )
        .unwrap();
        let same = grid.evolve(0.0, &law).unwrap();
        assert_eq!(grid, same);

        // single mode returning to its phase after one period
        let gamma0 = 3.0;
        let e = law.energy(gamma0).unwrap();
        let period = std::f64::consts::TAU * p.hbar() / e;
        let single = SpectrumGrid::new_1d(
            vec![gamma0 - 0.1, gamma0, gamma0 + 0.1],
            vec![c(0.0, 0.0), c(1.0, 2.0), c(0.0, 0.0)],
            None,
        )
        .unwrap();
        let evolved = single.evolve(period, &law).unwrap();
        assert!((evolved.amplitudes()[1] - single.amplitudes()[1]).norm() < 1e-12);
    }

    #[test]
    fn evolve_unitary_and_semigroup() {
        let p = natural(0.1);
        let law = DispersionLaw::new(LawKind::Relativistic, p);
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let axis = uniform_axis(-8.0, 8.0, 33).unwrap();
        let amps: Vec<Complex64> = (0..33)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let grid = SpectrumGrid::new_1d(axis, amps, Some(p.band_limit())).unwrap();

        let one = grid.evolve(0.7, &law).unwrap();
        for (a, b) in grid.amplitudes().iter().zip(one.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * a.norm().max(1.0));
        }
        let two = one.evolve(0.9, &law).unwrap();
        let direct = grid.evolve(1.6, &law).unwrap();
        for (a, b) in two.amplitudes().iter().zip(direct.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_3d_kinetic_adds_per_axis() {
        let p = natural(0.1);
        let law = DispersionLaw::new(LawKind::Relativistic, p);
        let ax = |g: f64| vec![g, g + 0.5];
        let grid = SpectrumGrid::new(
            vec![ax(1.0), ax(2.0), ax(3.0)],
            vec![c(1.0, 0.0); 8],
            vec![None, None, None],
        )
        .unwrap();
        let t = 0.37;
        let evolved = grid.evolve(t, &law).unwrap();
        // amplitude 0 corresponds to (1.0, 2.0, 3.0)
        let e = p.rest_energy()
            + law.kinetic(1.0).unwrap()
            + law.kinetic(2.0).unwrap()
            + law.kinetic(3.0).unwrap();
        let want = c(0.0, -e * t / p.hbar()).exp();
        assert!((evolved.amplitudes()[0] - want).norm() < 1e-13);
    }

    #[test]
    fn synthesize_box_spectrum_is_sinc() {
        let a = 1.0;
        let axis = uniform_axis(-a, a, 2001).unwrap();
        let grid = SpectrumGrid::new_1d(axis, vec![c(1.0, 0.0); 2001], None).unwrap();
        let xs = [0.5, 1.0, 2.0, 3.7];
        let syn = synthesize(&grid, &xs).unwrap();
        for (&x, v) in xs.iter().zip(&syn.values) {
            let want = (a * x).sin() / (PI * x);
            assert!((v.re - want).abs() < 1e-9, "x = {x}");
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn synthesize_narrow_mode_is_fourier_atom() {
        let gamma0 = 2.0;
        let width = 1e-4;
        let axis = uniform_axis(gamma0 - 3.0 * width, gamma0 + 3.0 * width, 61).unwrap();
        let h = axis[1] - axis[0];
        let grid = SpectrumGrid::gaussian_1d(axis, gamma0, width, None).unwrap();
        let (mass, _) = simpson_uniform(grid.amplitudes(), h).unwrap();
        let total = mass.re;
        let x = 0.8;
        let syn = synthesize(&grid, &[x]).unwrap();
        let want = Complex64::new(0.0, gamma0 * x).exp() * (total / std::f64::consts::TAU);
        assert!((syn.values[0] - want).norm() < 1e-6 * want.norm());
    }

    #[test]
    fn synthesize_parseval() {
        let axis = uniform_axis(-8.0, 8.0, 801).unwrap();
        let grid = SpectrumGrid::gaussian_1d(axis, 0.0, 1.0, None).unwrap();
        let spectral = grid.l2_norm_1d().unwrap();
        let xs = linspace(-20.0, 20.0, 2001);
        let syn = synthesize(&grid, &xs).unwrap();
        let vals: Vec<Complex64> = syn.values.iter().map(|v| c(v.norm_sqr(), 0.0)).collect();
        let (pos, _) = simpson_uniform(&vals, xs[1] - xs[0]).unwrap();
        assert!((pos.re.sqrt() - spectral).abs() < 1e-4);
    }

    #[test]
    fn evolved_gaussian_variance_matches_closed_form() {
        // natural units with l0 = 1: m0 = hbar = 1
        let p = natural(1.0);
        let law = DispersionLaw::new(LawKind::Schrodinger, p);
        let sigma0 = 1.0;
        let t = 0.8;
        let axis = uniform_axis(-8.0, 8.0, 1601).unwrap();
        let amps: Vec<Complex64> = axis
            .iter()
            .map(|&g| c((-(sigma0 * sigma0) * g * g).exp(), 0.0))
            .collect();
        let grid = SpectrumGrid::new_1d(axis, amps, None).unwrap();
        let evolved = grid.evolve(t, &law).unwrap();
        let xs = linspace(-14.0, 14.0, 2801);
        let syn = synthesize(&evolved, &xs).unwrap();
        let h = xs[1] - xs[0];
        let dens: Vec<Complex64> = syn.values.iter().map(|v| c(v.norm_sqr(), 0.0)).collect();
        let (mass, _) = simpson_uniform(&dens, h).unwrap();
        let m1: Vec<Complex64> = xs.iter().zip(&dens).map(|(&x, d)| d * x).collect();
        let (mean, _) = simpson_uniform(&m1, h).unwrap();
        let mu = mean.re / mass.re;
        let m2: Vec<Complex64> = xs
            .iter()
            .zip(&dens)
            .map(|(&x, d)| d * (x - mu) * (x - mu))
            .collect();
        let (var, _) = simpson_uniform(&m2, h).unwrap();
        let got = var.re / mass.re;
        let want = sigma0 * sigma0 + (p.hbar() * t / (2.0 * p.m0() * sigma0)).powi(2);
        assert!((got - want).abs() < 1e-6, "got {got}, want {want}");
    }

    #[test]
    fn mode_sum_initial_condition_and_modulus() {
        let p = natural(0.1);
        let ms = ModeSum::new(
            vec![(1, c(0.4, 0.2)), (2, c(-0.3, 0.9)), (5, c(0.05, 0.0))],
            p,
            PhaseSign::Plus,
        )
        .unwrap();
        for &x in &[0.3, 1.0, 2.5] {
            let direct: Complex64 = ms
                .modes()
                .iter()
                .map(|&(n, f)| f * (-(n as f64) * x).exp())
                .sum();
            assert!((ms.eval(x, 0.0).unwrap() - direct).norm() < 1e-15);
        }
        // single mode keeps constant modulus
        let single = ModeSum::new(vec![(1, c(0.7, -0.1))], p, PhaseSign::Plus).unwrap();
        let want = 0.7f64.hypot(0.1) * (-1.0f64).exp();
        for &t in &[0.0, 0.4, 2.0, 13.0] {
            assert!((single.eval(1.0, t).unwrap().norm() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn mode_sum_band_edges() {
        let p = natural(0.1);
        assert!(matches!(
            ModeSum::new(vec![(10, c(1.0, 0.0))], p, PhaseSign::Plus),
            Err(Error::BoundaryMode { n: 10 })
        ));
        assert!(matches!(
            ModeSum::new(vec![(11, c(1.0, 0.0))], p, PhaseSign::Plus),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn mode_sum_phase_rate_and_sign_resolution() {
        let p = natural(0.1);
        let sign = resolve_phase_sign(&p).unwrap();
        let ms = ModeSum::new(vec![(1, c(1.0, 0.0))], p, sign).unwrap();
        let want = p.rest_energy() * 0.01 / (2.0 * p.hbar() * 0.99f64.sqrt());
        assert!((ms.phase_rate(1) - want).abs() < 1e-15);

        let (plus, minus) = phase_sign_residuals(&p, 40).unwrap();
        let (best, worst) = if plus <= minus {
            (plus, minus)
        } else {
            (minus, plus)
        };
        assert!(best <= 1e-10, "best-sign residual {best}");
        assert!(worst >= 1e-2, "wrong-sign residual {worst}");
    }

    #[test]
    fn truncated_residual_schrodinger_mode_is_k0_exact() {
        let p = natural(0.1);
        let e0 = p.rest_energy();
        let l0 = p.compton_length();
        // decaying mode with the quadratic-law phase: E = E0 - (E0/2) l0^2 n^2
        let n = 3.0;
        let modes = [ProbeMode {
            mode: SpatialMode::Decaying(n),
            energy: e0 - 0.5 * e0 * l0 * l0 * n * n,
            weight: c(1.0, 0.0),
        }];
        let stats =
            truncated_pde_residual(&modes, &p, 0, &[(0.5, 0.0), (1.0, 1.0), (2.0, 0.3)]).unwrap();
        assert!(stats.max_normalized < 1e-12);
    }

    #[test]
    fn truncated_residual_plane_mode_small_and_monotone() {
        let p = natural(1.0);
        let law = DispersionLaw::new(LawKind::Relativistic, p);
        let gamma = 0.5;
        let grid = SpectrumGrid::new_1d(
            vec![gamma - 0.1, gamma, gamma + 0.1],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            Some(p.band_limit()),
        )
        .unwrap();
        let probes = [(0.0, 0.0), (1.2, 0.7)];
        let r40 = truncated_residual_spectrum(&grid, &law, 40, &probes).unwrap();
        assert!(r40.max_normalized <= 1e-10, "{}", r40.max_normalized);
        let r5 = truncated_residual_spectrum(&grid, &law, 5, &probes).unwrap();
        let r10 = truncated_residual_spectrum(&grid, &law, 10, &probes).unwrap();
        let r20 = truncated_residual_spectrum(&grid, &law, 20, &probes).unwrap();
        assert!(r5.max_normalized > r10.max_normalized);
        assert!(r10.max_normalized > r20.max_normalized);
    }

    #[test]
    fn truncated_residual_rejects_wide_band() {
        let p = natural(1.0);
        let modes = [ProbeMode {
            mode: SpatialMode::Plane(0.95),
            energy: 1.0,
            weight: c(1.0, 0.0),
        }];
        assert!(matches!(
            truncated_pde_residual(&modes, &p, 4, &[(0.0, 0.0)]),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(SpectrumGrid::new_1d(vec![0.0, 1.0, 3.0], vec![c(0.0, 0.0); 3], None).is_err());
        assert!(SpectrumGrid::new_1d(vec![0.0, 1.0], vec![c(0.0, 0.0); 3], None).is_err());
        assert!(SpectrumGrid::new(vec![], vec![], vec![]).is_err());
    }
}
