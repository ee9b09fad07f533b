//! Independent brute-force verifiers: fixed-step integration of
//! `y'' = V(x) y`, partial sums of the binomial series, and all-numeric
//! finite-difference residuals of the truncated evolution equation.
//!
//! Everything here deliberately avoids the analytic shortcuts used by the
//! solver modules so that agreement between the two routes is meaningful.

use std::io::Write;

use num_complex::Complex64;

use crate::dispersion::ParticleParams;
use crate::error::{Error, Result};
use crate::numeric::binomial_minus_half;

// ---------------------------------------------------------------------------
// ODE integration
// ---------------------------------------------------------------------------

/// Second-order problem `y''(x) = V(x) y(x)` with complex state.
pub struct OdeProblem<F: Fn(f64) -> Complex64> {
    pub v: F,
    pub x0: f64,
    pub y0: Complex64,
    pub dy0: Complex64,
    pub x_end: f64,
    pub step: f64,
}

/// Dense trajectory sampled at step multiples.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    pub ys: Vec<Complex64>,
    pub dys: Vec<Complex64>,
}

impl Trajectory {
    /// Sample index closest to `x`.
    pub fn nearest(&self, x: f64) -> (f64, Complex64, Complex64) {
        let mut best = 0usize;
        let mut dist = f64::INFINITY;
        for (i, &xi) in self.xs.iter().enumerate() {
            let d = (xi - x).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        (self.xs[best], self.ys[best], self.dys[best])
    }

    /// CSV rows `x, Re y, Im y, Re y', Im y'`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,re_y,im_y,re_dy,im_dy")?;
        for i in 0..self.xs.len() {
            writeln!(
                w,
                "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                self.xs[i], self.ys[i].re, self.ys[i].im, self.dys[i].re, self.dys[i].im
            )?;
        }
        Ok(())
    }
}

/// Classical fixed-step 4th-order integration of the first-order system
/// `(y, y')`.
pub fn integrate_ode<F: Fn(f64) -> Complex64>(p: &OdeProblem<F>) -> Result<Trajectory> {
    let valid_step = p.step > 0.0 && p.step.is_finite();
    if !valid_step {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    if !p.x_end.is_finite() || !p.x0.is_finite() || p.x_end <= p.x0 {
        return Err(Error::InvalidInput(
            "interval must be finite and forward".into(),
        ));
    }
    let rhs = |x: f64, y: Complex64, dy: Complex64| (dy, (p.v)(x) * y);
    let nsteps = ((p.x_end - p.x0) / p.step).ceil() as usize;
    let mut xs = Vec::with_capacity(nsteps + 1);
    let mut ys = Vec::with_capacity(nsteps + 1);
    let mut dys = Vec::with_capacity(nsteps + 1);
    let mut x = p.x0;
    let mut y = p.y0;
    let mut dy = p.dy0;
    xs.push(x);
    ys.push(y);
    dys.push(dy);
    for i in 0..nsteps {
        let h = p.step.min(p.x_end - x);
        let (k1y, k1d) = rhs(x, y, dy);
        let (k2y, k2d) = rhs(x + 0.5 * h, y + k1y * (0.5 * h), dy + k1d * (0.5 * h));
        let (k3y, k3d) = rhs(x + 0.5 * h, y + k2y * (0.5 * h), dy + k2d * (0.5 * h));
        let (k4y, k4d) = rhs(x + h, y + k3y * h, dy + k3d * h);
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
        dy += (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6.0);
        x = if i + 1 == nsteps {
            p.x_end
        } else {
            p.x0 + (i + 1) as f64 * p.step
        };
        if !y.is_finite() || !dy.is_finite() {
            return Err(Error::Overflow { x });
        }
        xs.push(x);
        ys.push(y);
        dys.push(dy);
    }
    Ok(Trajectory { xs, ys, dys })
}

// ---------------------------------------------------------------------------
// binomial series
// ---------------------------------------------------------------------------

/// Partial sum `sum_{n=0}^{K} C(-1/2, n) x^{2n+2}`.
pub fn binomial_series_partial(x: f64, k_order: u32) -> f64 {
    let mut acc = 0.0;
    let x2 = x * x;
    let mut xp = x2;
    for n in 0..=k_order {
        acc += binomial_minus_half(n) * xp;
        xp *= x2;
    }
    acc
}

/// Closed form `x^2 / sqrt(1 + x^2)` that the partial sums converge to for
/// `|x| < 1`.
pub fn binomial_series_closed(x: f64) -> f64 {
    x * x / (1.0 + x * x).sqrt()
}

// ---------------------------------------------------------------------------
// finite-difference residual
// ---------------------------------------------------------------------------

/// Uniform space-time samples of a field, time-major storage.
#[derive(Debug, Clone)]
pub struct SpaceTimeGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    /// `values[it * xs.len() + ix]`
    pub values: Vec<Complex64>,
}

impl SpaceTimeGrid {
    pub fn sample<F: Fn(f64, f64) -> Complex64>(xs: Vec<f64>, ts: Vec<f64>, f: F) -> Self {
        let mut values = Vec::with_capacity(xs.len() * ts.len());
        for &t in &ts {
            for &x in &xs {
                values.push(f(x, t));
            }
        }
        Self { xs, ts, values }
    }

    fn at(&self, it: usize, ix: usize) -> Complex64 {
        self.values[it * self.xs.len() + ix]
    }
}

/// Norms of the order-2 finite-difference residual of the truncated equation.
#[derive(Debug, Clone, Copy)]
pub struct FdResidual {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub max_normalized: f64,
}

/// Assemble the truncated equation residual from central differences only:
/// `i hbar D_t Y - E0 Y - (E0/2) sum_{k<=K} (-1)^{k+1} C(-1/2,k) l0^{2k+2}
/// D_x^{2k+2} Y`. Second-order accurate in both grid spacings.
pub fn finite_diff_residual(
    grid: &SpaceTimeGrid,
    params: &ParticleParams,
    k_order: u32,
) -> Result<FdResidual> {
    let nx = grid.xs.len();
    let nt = grid.ts.len();
    let margin = k_order as usize + 1;
    if nx < 2 * k_order as usize + 3 {
        return Err(Error::InvalidInput(format!(
            "need at least {} spatial points for K = {k_order}",
            2 * k_order + 3
        )));
    }
    if nt < 3 {
        return Err(Error::InvalidInput(
            "need at least three time slices".into(),
        ));
    }
    if grid.values.len() != nx * nt {
        return Err(Error::InvalidInput("value count mismatch".into()));
    }
    let hx = grid.xs[1] - grid.xs[0];
    let ht = grid.ts[1] - grid.ts[0];
    let e0 = params.rest_energy();
    let hbar = params.hbar();
    let l0 = params.compton_length();

    let mut max_abs = 0.0f64;
    let mut sum_abs = 0.0f64;
    let mut max_norm = 0.0f64;
    let mut count = 0usize;
    let i = Complex64::new(0.0, 1.0);

    #[allow(clippy::needless_range_loop)]
    for it in 1..nt - 1 {
        // iterated second differences of the current time slice
        let mut layers: Vec<Vec<Complex64>> = Vec::with_capacity(k_order as usize + 2);
        layers.push((0..nx).map(|ix| grid.at(it, ix)).collect());
        for _ in 0..=k_order {
            let prev = layers.last().unwrap();
            let next: Vec<Complex64> = (0..nx)
                .map(|ix| {
                    if ix == 0 || ix + 1 == nx {
                        Complex64::default()
                    } else {
                        (prev[ix + 1] - prev[ix] * 2.0 + prev[ix - 1]) / (hx * hx)
                    }
                })
                .collect();
            layers.push(next);
        }
        for ix in margin..nx - margin {
            let y = grid.at(it, ix);
            let dt = (grid.at(it + 1, ix) - grid.at(it - 1, ix)) / (2.0 * ht);
            let mut rhs = y * e0;
            for k in 0..=k_order {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                rhs += layers[k as usize + 1][ix]
                    * (0.5 * e0 * sign * binomial_minus_half(k) * l0.powi(2 * k as i32 + 2));
            }
            let r = i * hbar * dt - rhs;
            let abs = r.norm();
            max_abs = max_abs.max(abs);
            sum_abs += abs;
            max_norm = max_norm.max(abs / y.norm().max(1e-300));
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidInput("grid too small for the margin".into()));
    }
    Ok(FdResidual {
        max_abs,
        mean_abs: sum_abs / count as f64,
        max_normalized: max_norm,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
