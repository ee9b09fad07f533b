//! Small quadrature and coefficient helpers shared across modules.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Generalized binomial coefficient C(-1/2, n).
pub fn binomial_minus_half(n: u32) -> f64 {
    let mut c = 1.0;
    for k in 1..=n {
        c *= (-0.5 - (k as f64 - 1.0)) / k as f64;
    }
    c
}

/// Composite Simpson rule on uniformly spaced samples.
///
/// Returns the integral together with a crude error estimate taken from the
/// Simpson/trapezoid discrepancy. An even sample count is handled by a
/// trapezoid panel on the last interval.
pub fn simpson_uniform(values: &[Complex64], h: f64) -> Result<(Complex64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "quadrature needs at least two samples".into(),
        ));
    }
    let trapezoid = {
        let mut acc = (values[0] + values[n - 1]) * 0.5;
        for v in &values[1..n - 1] {
            acc += v;
        }
        acc * h
    };
    if n == 2 {
        return Ok((trapezoid, trapezoid.norm()));
    }
    let odd_panels = (n - 1) % 2 == 1;
    let m = if odd_panels { n - 1 } else { n }; // simpson over values[..m]
    let mut simpson = values[0] + values[m - 1];
    for (i, v) in values[1..m - 1].iter().enumerate() {
        simpson += v * if i % 2 == 0 { 4.0 } else { 2.0 };
    }
    let mut total = simpson * (h / 3.0);
    if odd_panels {
        total += (values[n - 2] + values[n - 1]) * (0.5 * h);
    }
    let err = (total - trapezoid).norm() / 15.0;
    Ok((total, err))
}

fn simpson_panel(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + fm * 4.0 + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::Divergent(format!(
            "non-finite integrand near x = {lm}"
        )));
    }
    let left = simpson_panel(fa, flm, fm, m - a);
    let right = simpson_panel(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || depth == 0 {
        return Ok((left + right + delta / 15.0, delta.norm() / 15.0));
    }
    let (lv, le) = adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let (rv, re) = adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok((lv + rv, le + re))
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(Error::Divergent(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let whole = simpson_panel(fa, fm, fb, b - a);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 28)
}

/// Evenly spaced samples covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn binomial_half_values() {
        assert_eq!(binomial_minus_half(0), 1.0);
        assert!((binomial_minus_half(1) + 0.5).abs() < 1e-15);
        assert!((binomial_minus_half(2) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn simpson_matches_cosine() {
        let xs = linspace(0.0, PI / 2.0, 201);
        let vals: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x.cos(), 0.0)).collect();
        let (v, _) = simpson_uniform(&vals, xs[1] - xs[0]).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_simpson_gaussian() {
        let f = |x: f64| Complex64::new((-x * x).exp(), 0.0);
        let (v, e) = adaptive_simpson(&f, -8.0, 8.0, 1e-12).unwrap();
        assert!((v.re - PI.sqrt()).abs() < 1e-10, "err {e}");
    }
}
