//! Formal nested-sum and iteration evaluators with residual reports.
//!
//! These are diagnostic objects: the infinite nestings they truncate need not
//! converge, so each evaluator reports both its by-construction identity and
//! the residual of the genuine equation at the truncation depth.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{reciprocal_trigpoly, TrigPoly};
use crate::error::{Error, Result};
use crate::specfun::Polynomial;

use super::Multiplier;

// ---------------------------------------------------------------------------
// nested sums
// ---------------------------------------------------------------------------

/// Depth-truncated nested-sum evaluation.
#[derive(Debug, Clone, Copy)]
pub struct NestedSumReport {
    pub value: Complex64,
    /// `|B(i gamma) yhat_D(gamma) - sum_n c_n yhat_{D-1}(gamma + n w)|`;
    /// zero up to rounding by construction.
    pub construction_residual: f64,
    /// `|sum_n c_n yhat_D(gamma + n w) - B(i gamma) yhat_D(gamma)|`
    pub equation_residual: f64,
    pub normalized_equation_residual: f64,
}

fn support_positive(v: &TrigPoly) -> Result<Vec<(i64, Complex64)>> {
    let support: Vec<(i64, Complex64)> = v.coeffs().collect();
    if support.iter().any(|&(n, _)| n < 1) {
        return Err(Error::InvalidInput(
            "nested evaluation expects a potential supported on n >= 1".into(),
        ));
    }
    if support.is_empty() {
        return Err(Error::InvalidInput("empty potential".into()));
    }
    Ok(support)
}

/// Evaluate the truncated nesting
/// `yhat_0 = 1/B(i gamma)`,
/// `yhat_D(gamma) = (1/B(i gamma)) sum_{n>=1} c_n yhat_{D-1}(gamma + n w)`
/// bottom-up over the reachable offset lattice.
pub fn nested_sum_eval(
    v: &TrigPoly,
    b: &Polynomial,
    gamma: Complex64,
    depth: usize,
) -> Result<NestedSumReport> {
    let support = support_positive(v)?;
    let w = v.lattice_step();
    let b_at = |z: Complex64| b.eval(Complex64::new(0.0, 1.0) * z);

    let levels = reachable_offsets(&support, depth);
    let value_of = |base: Complex64| -> Result<(Complex64, Complex64)> {
        // returns (yhat_D(base), numerator sum at the top level)
        let mut vals: BTreeMap<i64, Complex64> = BTreeMap::new();
        for &s in &levels[depth] {
            let z = base + s as f64 * w;
            let denom = b_at(z);
            if denom.norm() < 1e-280 {
                return Err(Error::Pole { z });
            }
            vals.insert(s, 1.0 / denom);
        }
        let mut top_numerator = Complex64::default();
        for d in 1..=depth {
            let mut next: BTreeMap<i64, Complex64> = BTreeMap::new();
            for &s in &levels[depth - d] {
                let mut acc = Complex64::default();
                for &(n, cn) in &support {
                    acc += cn * vals[&(s + n)];
                }
                let z = base + s as f64 * w;
                let denom = b_at(z);
                if denom.norm() < 1e-280 {
                    return Err(Error::Pole { z });
                }
                if d == depth {
                    top_numerator = acc;
                }
                next.insert(s, acc / denom);
            }
            vals = next;
        }
        if depth == 0 {
            top_numerator = Complex64::new(1.0, 0.0);
        }
        Ok((vals[&0], top_numerator))
    };

    let (value, numerator) = value_of(gamma)?;
    let construction_residual = if depth == 0 {
        0.0
    } else {
        (b_at(gamma) * value - numerator).norm()
    };

    let mut lhs = Complex64::default();
    for &(n, cn) in &support {
        let (shifted, _) = value_of(gamma + n as f64 * w)?;
        lhs += cn * shifted;
    }
    let rhs = b_at(gamma) * value;
    let equation_residual = (lhs - rhs).norm();
    Ok(NestedSumReport {
        value,
        construction_residual,
        equation_residual,
        normalized_equation_residual: equation_residual / rhs.norm().max(1e-300),
    })
}

fn reachable_offsets(support: &[(i64, Complex64)], depth: usize) -> Vec<BTreeSet<i64>> {
    let mut levels: Vec<BTreeSet<i64>> = Vec::with_capacity(depth + 1);
    levels.push([0i64].into_iter().collect());
    for _ in 0..depth {
        let prev = levels.last().unwrap();
        let mut next = BTreeSet::new();
        for &s in prev {
            for &(n, _) in support {
                next.insert(s + n);
            }
        }
        levels.push(next);
    }
    levels
}

// ---------------------------------------------------------------------------
// cocycle coefficients A_n
// ---------------------------------------------------------------------------

/// Evaluation route for [`a_n_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnMethod {
    /// `A_n(x) = g(n + x) c*_n` through the reciprocal coefficients.
    Closed,
    /// Periodic quadrature of the reciprocal integrand and its derivatives.
    Quadrature,
}

const QUADRATURE_POINTS: usize = 2048;

fn binom(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

fn check_unit_period(v: &TrigPoly) -> Result<()> {
    if (v.period() - TAU).abs() > 1e-9 {
        return Err(Error::InvalidInput(
            "cocycle coefficients assume unit lattice shifts (period 2 pi)".into(),
        ));
    }
    Ok(())
}

/// Reciprocal coefficient `c*_n` by the shifted triangular solve.
pub(super) fn reciprocal_coefficient(v: &TrigPoly, n: i64) -> Result<Complex64> {
    let n0 = v
        .min_index()
        .ok_or_else(|| Error::InvalidInput("empty potential".into()))?;
    let order = (n + n0).max(0) as usize + 8;
    let rec = reciprocal_trigpoly(v, order)?;
    Ok(rec.poly.coeff(n))
}

/// Coefficient `A_n(x)` of the shift expansion driven by multiplier `g`.
pub fn a_n_coefficient(
    v: &TrigPoly,
    g: &Multiplier,
    n: i64,
    x: Complex64,
    method: AnMethod,
) -> Result<Complex64> {
    check_unit_period(v)?;
    match method {
        AnMethod::Closed => Ok(g.eval(x + n as f64) * reciprocal_coefficient(v, n)?),
        AnMethod::Quadrature => {
            let gpoly = g.as_poly().ok_or_else(|| {
                Error::InvalidInput("quadrature route needs a polynomial multiplier".into())
            })?;
            a_n_quadrature(v, gpoly, n, x)
        }
    }
}

fn a_n_quadrature(v: &TrigPoly, g: &Polynomial, n: i64, x: Complex64) -> Result<Complex64> {
    let deg = g.degree().unwrap_or(0);
    let m = QUADRATURE_POINTS;
    // conjugate-lattice series and its t-derivatives on the grid
    let mut vbar = vec![vec![Complex64::default(); m]; deg + 1];
    for i in 0..m {
        let t = TAU * i as f64 / m as f64;
        for (r, row) in vbar.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (k, ck) in v.coeffs() {
                let ik = Complex64::new(0.0, k as f64);
                acc += ck * ik.powu(r as u32) * (ik * t).exp();
            }
            row[i] = acc;
        }
    }
    if vbar[0].iter().any(|w| w.norm() < 1e-9) {
        return Err(Error::InvalidInput(
            "quadrature rejected: conjugate series vanishes on the period".into(),
        ));
    }
    // derivatives of W = 1/vbar by the Leibniz recurrence
    let mut wder = vec![vec![Complex64::default(); m]; deg + 1];
    for i in 0..m {
        wder[0][i] = 1.0 / vbar[0][i];
        for j in 1..=deg {
            let mut acc = Complex64::default();
            for r in 0..j {
                acc += binom(j, r) * wder[r][i] * vbar[j - r][i];
            }
            wder[j][i] = -acc / vbar[0][i];
        }
    }
    // Fourier projections J_l = (1/2 pi) integral W^(l)(t) e^{-i n t} dt
    let mut projections = vec![Complex64::default(); deg + 1];
    for (l, row) in wder.iter().enumerate() {
        let mut acc = Complex64::default();
        for (i, wv) in row.iter().enumerate() {
            let t = TAU * i as f64 / m as f64;
            acc += wv * Complex64::new(0.0, -(n as f64) * t).exp();
        }
        projections[l] = acc / m as f64;
    }
    let i_unit = Complex64::new(0.0, 1.0);
    let mut a = Complex64::default();
    for j in 0..=deg {
        let gj = g.coeff(j);
        if gj == Complex64::default() {
            continue;
        }
        let mut inner = Complex64::default();
        for (l, proj) in projections.iter().enumerate().take(j + 1) {
            inner += binom(j, l) * proj * (i_unit * x).powu((j - l) as u32);
        }
        a += gj * (-i_unit).powu(j as u32) * inner;
    }
    Ok(a)
}

// ---------------------------------------------------------------------------
// theta iteration
// ---------------------------------------------------------------------------

/// Depth-truncated evaluation of the iteration
/// `theta_d(z) = sum_n A_n(z) theta_{d-1}(z + n)`, `theta_0 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaReport {
    pub value: Complex64,
    /// `|theta_D(z) - sum_n A_n(z) theta_D(z + n)|`
    pub equation_residual: f64,
    pub normalized_equation_residual: f64,
}

/// Run the truncated iteration with `A_n = g(n + z) c*_n` over a finite index
/// window of reciprocal coefficients.
pub fn theta_iteration(
    v: &TrigPoly,
    g: &Multiplier,
    w: Complex64,
    depth: usize,
    window: (i64, i64),
) -> Result<ThetaReport> {
    check_unit_period(v)?;
    if window.0 > window.1 {
        return Err(Error::InvalidInput("empty index window".into()));
    }
    let n0 = v
        .min_index()
        .ok_or_else(|| Error::InvalidInput("empty potential".into()))?;
    let order = (window.1 + n0).max(0) as usize + 8;
    let rec = reciprocal_trigpoly(v, order)?;
    let support: Vec<(i64, Complex64)> = (window.0..=window.1)
        .filter_map(|n| {
            let cstar = rec.poly.coeff(n);
            (cstar != Complex64::default()).then_some((n, cstar))
        })
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidInput(
            "no reciprocal coefficients in the window".into(),
        ));
    }

    let theta_at = |base: Complex64| -> Complex64 {
        let levels = reachable_offsets(&support, depth);
        let mut vals: BTreeMap<i64, Complex64> = levels[depth]
            .iter()
            .map(|&s| (s, Complex64::new(1.0, 0.0)))
            .collect();
        for d in 1..=depth {
            let mut next: BTreeMap<i64, Complex64> = BTreeMap::new();
            for &s in &levels[depth - d] {
                let z = base + s as f64;
                let mut acc = Complex64::default();
                for &(n, cstar) in &support {
                    acc += g.eval(z + n as f64) * cstar * vals[&(s + n)];
                }
                next.insert(s, acc);
            }
            vals = next;
        }
        vals[&0]
    };

    let value = theta_at(w);
    let mut rhs = Complex64::default();
    for &(n, cstar) in &support {
        rhs += g.eval(w + n as f64) * cstar * theta_at(w + n as f64);
    }
    let equation_residual = (value - rhs).norm();
    Ok(ThetaReport {
        value,
        equation_residual,
        normalized_equation_residual: equation_residual / value.norm().max(rhs.norm()).max(1e-300),
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
