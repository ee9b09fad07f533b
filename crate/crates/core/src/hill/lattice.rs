//! Lattice-coefficient solvers: the indicial recurrence, the iterated
//! operator scheme, the multidimensional factorization check, and the
//! 2-adic mode construction.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith::{
    reciprocal_trigpoly, two_adic_identity_deviation, two_adic_inverse, CoeffSeq, TrigPoly,
    TwoAdicSeq,
};
use crate::error::{Error, Result};
use crate::specfun::{complex_roots, Polynomial};

use super::{LatticeSolution, MultiplierSpec};

// ---------------------------------------------------------------------------
// recurrence solver
// ---------------------------------------------------------------------------

/// Which indicial root to expand around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// Index into the roots sorted by `(re, im)`.
    Index(usize),
    /// Root closest to a target value.
    Nearest(Complex64),
}

fn indicial_roots(b: &Polynomial, c0: Complex64) -> Result<Vec<Complex64>> {
    // roots of B(i nu) - c0 = 0 as a polynomial in nu
    let mut shifted = b.compose_i();
    let mut coeffs: Vec<Complex64> = shifted.coeffs().to_vec();
    if coeffs.is_empty() {
        coeffs.push(Complex64::default());
    }
    coeffs[0] -= c0;
    shifted = Polynomial::new(coeffs);
    if shifted.is_zero() {
        return Err(Error::IndicialUnsolvable(
            "indicial equation vanishes identically".into(),
        ));
    }
    let roots = complex_roots(&shifted)?;
    if roots.is_empty() {
        return Err(Error::IndicialUnsolvable(
            "indicial equation has no roots".into(),
        ));
    }
    Ok(roots)
}

fn pick_branch(roots: &[Complex64], branch: Branch) -> Result<Complex64> {
    match branch {
        Branch::Index(i) => roots.get(i).copied().ok_or_else(|| {
            Error::IndicialUnsolvable(format!(
                "branch index {i} out of range ({} roots)",
                roots.len()
            ))
        }),
        Branch::Nearest(target) => Ok(roots
            .iter()
            .copied()
            .min_by(|a, b| {
                (a - target)
                    .norm()
                    .partial_cmp(&(b - target).norm())
                    .unwrap()
            })
            .unwrap()),
    }
}

/// Solve `sum_j b_j y^(j) = V y` on the lattice `e^{i nu x} sum a_k e^{-ikwx}`
/// by coefficient matching:
/// `a_k = (sum_{n=1..k} c_n a_{k-n}) / (B(i(nu - kw)) - c_0)`.
pub fn recurrence_solve(
    v: &TrigPoly,
    b: &Polynomial,
    branch: Branch,
    k_order: usize,
) -> Result<LatticeSolution> {
    if v.min_index().unwrap_or(0) < 0 {
        return Err(Error::InvalidInput(
            "recurrence expects a potential supported on n >= 0".into(),
        ));
    }
    let w = v.lattice_step();
    let c0 = v.coeff(0);
    let b_at = |nu: Complex64| b.eval(Complex64::new(0.0, 1.0) * nu);
    let roots = indicial_roots(b, c0)?;
    let nu = pick_branch(&roots, branch)?;

    let span = v.max_index().unwrap_or(0).max(0) as usize;
    let mut a = vec![Complex64::default(); k_order + 1];
    a[0] = Complex64::new(1.0, 0.0);
    for k in 1..=k_order {
        let denom = b_at(nu - k as f64 * w) - c0;
        let scale = 1.0 + denom.norm() + c0.norm();
        if denom.norm() < 1e-9 * scale {
            return Err(Error::Resonance { k: k as u64 });
        }
        let mut acc = Complex64::default();
        for n in 1..=k.min(span) {
            let cn = v.coeff(n as i64);
            if cn != Complex64::default() {
                acc += cn * a[k - n];
            }
        }
        a[k] = acc / denom;
    }
    LatticeSolution::new(nu, w, a)
}

// ---------------------------------------------------------------------------
// iterated operator solve
// ---------------------------------------------------------------------------

/// Convergence report of [`iterated_operator_solve`].
#[derive(Debug, Clone)]
pub struct IterationReport {
    pub iterations: usize,
    pub converged: bool,
    pub final_delta: f64,
    /// Per-iteration lattice residual `max_m |(1/V) u''|_m - u_m|`.
    pub residuals: Vec<f64>,
}

/// Drive the lattice coefficients toward the fixed point of
/// `u = (1/V) u''`, i.e. `u'' = V u`.
///
/// The update inverts the second-derivative factor row by row (slot 0 stays
/// pinned at 1), which contracts whenever `|nu - mw|^2` outgrows `|c_0|`;
/// applying `(1/V) d^2/dx^2` forwardly instead is a weighted shift whose
/// iterates do not converge. The reported residual is the literal forward
/// map through the shifted reciprocal of `V`.
pub fn iterated_operator_solve(
    v: &TrigPoly,
    nu: Complex64,
    iters: usize,
    seed: &LatticeSolution,
) -> Result<(LatticeSolution, IterationReport)> {
    if v.min_index().unwrap_or(0) < 0 {
        return Err(Error::InvalidInput(
            "iteration expects a potential supported on n >= 0".into(),
        ));
    }
    let w = v.lattice_step();
    let k_order = seed.coeffs().len() - 1;
    let span = v.max_index().unwrap_or(0).max(0) as usize;
    let recip = reciprocal_trigpoly(v, k_order + span + 4)?;

    // second-derivative factor per slot
    let d2: Vec<Complex64> = (0..=k_order)
        .map(|m| {
            let freq = nu - m as f64 * w;
            -(freq * freq)
        })
        .collect();
    for (m, d) in d2.iter().enumerate().skip(1) {
        if d.norm() < 1e-12 {
            return Err(Error::Resonance { k: m as u64 });
        }
    }

    let forward_residual = |a: &[Complex64]| -> f64 {
        // T[a]_m = sum_j cstar_j * (d2 a)_{m-j}, truncated to the window
        let mut worst = 0.0f64;
        for m in 0..=k_order {
            let mut acc = Complex64::default();
            for (j, cj) in recip.poly.coeffs() {
                let k = m as i64 - j;
                if (0..=k_order as i64).contains(&k) {
                    acc += cj * d2[k as usize] * a[k as usize];
                }
            }
            worst = worst.max((acc - a[m]).norm());
        }
        worst
    };

    let mut a = seed.coeffs().to_vec();
    a[0] = Complex64::new(1.0, 0.0);
    let mut residuals = Vec::with_capacity(iters);
    let mut final_delta = f64::INFINITY;
    let mut converged = false;
    let mut done = 0usize;
    for _ in 0..iters {
        let mut next = a.clone();
        for m in 1..=k_order {
            let mut acc = Complex64::default();
            for n in 0..=m.min(span) {
                let cn = v.coeff(n as i64);
                if cn != Complex64::default() {
                    acc += cn * a[m - n];
                }
            }
            next[m] = acc / d2[m];
        }
        final_delta = a
            .iter()
            .zip(&next)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        a = next;
        done += 1;
        residuals.push(forward_residual(&a));
        if final_delta < 1e-13 {
            converged = true;
            break;
        }
    }
    let sol = LatticeSolution::new(nu, w, a)?;
    Ok((
        sol,
        IterationReport {
            iterations: done,
            converged,
            final_delta,
            residuals,
        },
    ))
}

// ---------------------------------------------------------------------------
// factorization check
// ---------------------------------------------------------------------------

/// Check the lattice identity
/// `fhat_N(m_1..m_N) = yhat(m_1-m_2) ... yhat(m_{N-1}-m_N) yhat(m_N)`
/// for `f_N(x_1..x_N) = Y(x_1) Y(x_1+x_2) ... Y(x_1+...+x_N)`.
///
/// Returns the largest absolute deviation over the populated multi-indices.
pub fn ft_factorization_check(y: &TrigPoly, n: usize) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidInput(
            "factorization check supports N in {2, 3}".into(),
        ));
    }
    let support: Vec<(i64, Complex64)> = y.coeffs().collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let mut built: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    match n {
        2 => {
            for &(k1, y1) in &support {
                for &(k2, y2) in &support {
                    *built.entry(vec![k1 + k2, k2]).or_default() += y1 * y2;
                }
            }
        }
        _ => {
            for &(k1, y1) in &support {
                for &(k2, y2) in &support {
                    for &(k3, y3) in &support {
                        *built.entry(vec![k1 + k2 + k3, k2 + k3, k3]).or_default() += y1 * y2 * y3;
                    }
                }
            }
        }
    }
    let coeff = |m: i64| y.coeff(m);
    let mut worst = 0.0f64;
    for (m, &got) in &built {
        let mut want = Complex64::new(1.0, 0.0);
        for w in m.windows(2) {
            want *= coeff(w[0] - w[1]);
        }
        want *= coeff(*m.last().unwrap());
        worst = worst.max((got - want).norm());
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// 2-adic mode solution
// ---------------------------------------------------------------------------

/// One separated mode of the Fourier-side evolution: amplitude
/// `A_m(gamma) = sum_n b_{m,n}(gamma) e^{i n 2^gamma}` and the time factor
/// `Lambda_m e^{-i C_m t / hbar}`.
#[derive(Debug, Clone)]
pub struct TwoAdicMode {
    pub amplitude: Complex64,
    /// The inverted sequence `b_{m,n}(gamma)`.
    pub coeffs: CoeffSeq,
    pub lambda: Complex64,
    pub c_m: Complex64,
    pub hbar: f64,
    /// Deviation of the defining convolution identity at this `gamma`.
    pub identity_deviation: f64,
}

impl TwoAdicMode {
    pub fn time_factor(&self, t: f64) -> Complex64 {
        self.lambda * (Complex64::new(0.0, -1.0) * self.c_m * t / self.hbar).exp()
    }

    pub fn value(&self, t: f64) -> Complex64 {
        self.amplitude * self.time_factor(t)
    }
}

/// Assemble one 2-adic mode at a fixed `gamma > 0`: invert the sequence
/// `{c_k - g_m(log2 gamma) delta_{k,0}}` and sum the resulting amplitude.
pub fn two_adic_mode_solution(
    c: &TrigPoly,
    gm: &MultiplierSpec,
    lambda_m: Complex64,
    gamma: f64,
    n_max: u64,
) -> Result<TwoAdicMode> {
    let valid = gamma > 0.0;
    if !valid {
        return Err(Error::InvalidInput(
            "gamma must be positive (log2 taken)".into(),
        ));
    }
    if c.min_index().unwrap_or(0) < 0 {
        return Err(Error::InvalidInput(
            "mode construction expects coefficients on k >= 0".into(),
        ));
    }
    let gval = gm.eval(Complex64::new(gamma.log2(), 0.0));
    let mut b = TwoAdicSeq::new();
    for (k, ck) in c.coeffs() {
        b.set(k as u32, ck);
    }
    b.set(0, c.coeff(0) - gval);
    let coeffs = two_adic_inverse(&b, n_max)?;
    let identity_deviation = two_adic_identity_deviation(&b, &coeffs, n_max);

    let base = 2.0f64.powf(gamma);
    let mut amplitude = Complex64::default();
    for (n, bn) in coeffs.iter() {
        amplitude += bn * Complex64::new(0.0, n as f64 * base).exp();
    }
    Ok(TwoAdicMode {
        amplitude,
        coeffs,
        lambda: lambda_m,
        c_m: gm.c_m,
        hbar: gm.params.hbar(),
        identity_deviation,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::ParticleParams;
    use crate::hill::FunctionalEquation;
    use crate::numeric::linspace;
    use crate::oracle::{integrate_ode, OdeProblem};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> Polynomial {
        Polynomial::from_real([0.0, 0.0, 1.0])
    }

    #[test]
    fn constant_potential_gives_exponential() {
        let v = TrigPoly::from_real([(0, 1.0)]);
        // roots of -nu^2 = 1 are +-i, sorted by (re, im): index 0 is -i
        let sol = recurrence_solve(&v, &z2(), Branch::Nearest(c(0.0, -1.0)), 16).unwrap();
        assert!((sol.nu() - c(0.0, -1.0)).norm() < 1e-10);
        for k in 1..=16 {
            assert!(sol.coeff(k).norm() < 1e-12, "k = {k}");
        }
        for &x in &[0.0, 0.5, 1.0] {
            assert!((sol.eval(x) - x.exp()).norm() < 1e-9);
        }
    }

    #[test]
    fn pure_harmonic_reciprocal_factorial_squares() {
        let v = TrigPoly::from_real([(1, 1.0)]);
        let sol = recurrence_solve(&v, &z2(), Branch::Index(0), 12).unwrap();
        assert!(sol.nu().norm() < 1e-6);
        let mut fact = 1.0f64;
        for k in 1..=12u32 {
            fact *= k as f64;
            let want = if k % 2 == 0 { 1.0 } else { -1.0 } / (fact * fact);
            assert!(
                (sol.coeff(k as usize) - want).norm() < 1e-12,
                "k = {k}: {} vs {want}",
                sol.coeff(k as usize)
            );
        }
    }

    #[test]
    fn pure_harmonic_matches_rk4_oracle() {
        let v = TrigPoly::from_real([(1, 1.0)]);
        let sol = recurrence_solve(&v, &z2(), Branch::Index(0), 30).unwrap();
        let traj = integrate_ode(&OdeProblem {
            v: |x: f64| Complex64::new(0.0, -x).exp(),
            x0: 0.0,
            y0: sol.eval(0.0),
            dy0: sol.eval_derivative(0.0, 1),
            x_end: TAU,
            step: 1e-3,
        })
        .unwrap();
        for i in (0..traj.xs.len()).step_by(500) {
            assert!(
                (traj.ys[i] - sol.eval(traj.xs[i])).norm() < 1e-8,
                "x = {}",
                traj.xs[i]
            );
        }
    }

    #[test]
    fn two_term_potential_ode_residual() {
        let v = TrigPoly::from_real([(0, 1.0), (1, 0.5)]);
        let sol = recurrence_solve(&v, &z2(), Branch::Nearest(c(0.0, -1.0)), 30).unwrap();
        let xs = linspace(0.0, TAU, 257);
        assert!(sol.ode_residual_max(&z2(), &v, &xs) < 1e-8);

        let traj = integrate_ode(&OdeProblem {
            v: |x: f64| c(1.0, 0.0) + c(0.5, 0.0) * Complex64::new(0.0, -x).exp(),
            x0: 0.0,
            y0: sol.eval(0.0),
            dy0: sol.eval_derivative(0.0, 1),
            x_end: TAU,
            step: 5e-4,
        })
        .unwrap();
        let scale = traj.ys.iter().map(|y| y.norm()).fold(0.0, f64::max);
        for i in (0..traj.xs.len()).step_by(700) {
            assert!((traj.ys[i] - sol.eval(traj.xs[i])).norm() < 1e-8 * scale.max(1.0));
        }
    }

    #[test]
    fn lattice_residual_of_recurrence_solution_vanishes() {
        let v = TrigPoly::from_real([(0, 1.0), (1, 0.5), (3, -0.25)]);
        let sol = recurrence_solve(&v, &z2(), Branch::Index(1), 24).unwrap();
        let eq = FunctionalEquation::from_ode(&z2(), &v);
        // residual rows beyond the truncation order pick up the dropped tail
        let rows = eq.lattice_residual(&sol);
        for (m, r) in rows.iter().enumerate().take(25) {
            assert!(r.norm() < 1e-10, "m = {m}, r = {r}");
        }
    }

    #[test]
    fn resonance_is_reported_with_offender() {
        // c0 = -1 gives nu = +-1; the nu = 1 branch hits B(i(nu-2)) = c0
        let v = TrigPoly::from_real([(0, -1.0), (1, 0.5)]);
        let err = recurrence_solve(&v, &z2(), Branch::Nearest(c(1.0, 0.0)), 8);
        match err {
            Err(Error::Resonance { k }) => assert_eq!(k, 2),
            other => panic!("expected resonance, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_indicial_equations_are_rejected() {
        // B constant and equal to c0: every nu solves the indicial equation
        let b = Polynomial::from_real([3.0]);
        let v = TrigPoly::from_real([(0, 3.0), (1, 0.5)]);
        assert!(matches!(
            recurrence_solve(&v, &b, Branch::Index(0), 4),
            Err(Error::IndicialUnsolvable(_))
        ));
        // B constant and different from c0: no root at all
        let v2 = TrigPoly::from_real([(0, 1.0), (1, 0.5)]);
        assert!(matches!(
            recurrence_solve(&v2, &b, Branch::Index(0), 4),
            Err(Error::IndicialUnsolvable(_))
        ));
        // branch index out of range
        let vz = TrigPoly::from_real([(0, 1.0)]);
        let z2 = Polynomial::from_real([0.0, 0.0, 1.0]);
        assert!(matches!(
            recurrence_solve(&vz, &z2, Branch::Index(7), 4),
            Err(Error::IndicialUnsolvable(_))
        ));
    }

    #[test]
    fn iterated_operator_fixed_point_for_constant_potential() {
        let v = TrigPoly::from_real([(0, 1.0)]);
        let seed = LatticeSolution::delta_seed(c(0.0, -1.0), 1.0, 8);
        let (sol, report) = iterated_operator_solve(&v, c(0.0, -1.0), 10, &seed).unwrap();
        assert!(report.converged);
        assert!(report.residuals.last().unwrap() < &1e-13);
        for k in 1..=8 {
            assert!(sol.coeff(k).norm() < 1e-14);
        }
    }

    #[test]
    fn iterated_operator_recovers_reciprocal_factorials() {
        let v = TrigPoly::from_real([(1, 1.0)]);
        let seed = LatticeSolution::delta_seed(Complex64::default(), 1.0, 20);
        let (sol, report) = iterated_operator_solve(&v, Complex64::default(), 30, &seed).unwrap();
        let oracle = recurrence_solve(&v, &z2(), Branch::Index(0), 20).unwrap();
        for k in 0..=20 {
            assert!(
                (sol.coeff(k) - oracle.coeff(k)).norm() < 1e-10,
                "k = {k}: {} vs {}",
                sol.coeff(k),
                oracle.coeff(k)
            );
        }
        assert!(report.converged);
    }

    #[test]
    fn iterated_operator_residual_decreases() {
        let v = TrigPoly::from_real([(0, 1.0), (1, 0.5)]);
        let seed = LatticeSolution::delta_seed(c(0.0, -1.0), 1.0, 16);
        let (_, report) = iterated_operator_solve(&v, c(0.0, -1.0), 40, &seed).unwrap();
        let r = &report.residuals;
        assert!(r.len() >= 6);
        for i in 2..r.len() {
            assert!(
                r[i] <= r[i - 1] * (1.0 + 1e-9) + 1e-15,
                "iteration {i}: {} -> {}",
                r[i - 1],
                r[i]
            );
        }
        assert!(*r.last().unwrap() < 1e-10);
    }

    #[test]
    fn factorization_exact_for_two_terms() {
        let y = TrigPoly::from_coeffs([(0, c(1.0, 0.0)), (1, c(0.3, -0.1))]);
        assert_eq!(ft_factorization_check(&y, 2).unwrap(), 0.0);
        let single = TrigPoly::from_real([(1, 1.0)]);
        assert_eq!(ft_factorization_check(&single, 2).unwrap(), 0.0);
    }

    #[test]
    fn factorization_random_three_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for n in [2usize, 3] {
            for _ in 0..5 {
                let y = TrigPoly::from_coeffs((0..3).map(|i| {
                    (
                        rng.gen_range(-2..3) + 3 * i,
                        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    )
                }));
                assert!(ft_factorization_check(&y, n).unwrap() <= 1e-13);
            }
        }
        assert!(ft_factorization_check(&TrigPoly::from_real([(0, 1.0)]), 4).is_err());
    }

    fn natural_spec(c_m: Complex64) -> MultiplierSpec {
        MultiplierSpec {
            c_m,
            params: ParticleParams::natural(0.1).unwrap(),
        }
    }

    #[test]
    fn two_adic_mode_identity_holds() {
        let pot = TrigPoly::from_coeffs([(1, c(0.8, 0.1)), (2, c(-0.2, 0.4))]);
        let gm = natural_spec(c(2.5, 0.0));
        let mode = two_adic_mode_solution(&pot, &gm, c(1.0, 0.0), 1.7, 64).unwrap();
        assert!(mode.identity_deviation < 1e-13);
    }

    #[test]
    fn two_adic_mode_single_harmonic_pattern() {
        // c = delta_{k,1}: b_0 = -g_m, b_1 = 1, so a_{2^j} = -g_m^{-j-1}
        let pot = TrigPoly::from_real([(1, 1.0)]);
        let gm = natural_spec(c(3.0, 0.5));
        let gamma = 1.7f64;
        let gval = gm.eval(c(gamma.log2(), 0.0));
        let mode = two_adic_mode_solution(&pot, &gm, c(1.0, 0.0), gamma, 64).unwrap();
        for j in 0..=6u32 {
            let n = 2u64.pow(j);
            let want = -(gval.powi(-(j as i32) - 1));
            assert!(
                (mode.coeffs.get(n) - want).norm() < 1e-12 * want.norm().max(1.0),
                "j = {j}"
            );
        }
        for n in 1..=64u64 {
            if !n.is_power_of_two() {
                assert!(mode.coeffs.get(n).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn two_adic_mode_time_factor_modulus() {
        let pot = TrigPoly::from_real([(1, 1.0)]);
        let gm = natural_spec(c(2.0, 0.0)); // real C_m
        let mode = two_adic_mode_solution(&pot, &gm, c(0.7, -0.2), 0.9, 32).unwrap();
        let m0 = mode.value(0.0).norm();
        for &t in &[0.3, 1.7, 9.0] {
            assert!((mode.value(t).norm() - m0).abs() < 1e-13);
        }
    }

    #[test]
    fn two_adic_mode_rejects_singular_and_nonpositive_gamma() {
        let pot = TrigPoly::from_real([(1, 1.0)]);
        // choose C_m so that c_0 - g_m(log2 gamma) = 0 at gamma = 1
        let params = ParticleParams::natural(0.1).unwrap();
        let gm = MultiplierSpec {
            c_m: c(params.rest_energy(), 0.0),
            params,
        };
        assert!(matches!(
            two_adic_mode_solution(&pot, &gm, c(1.0, 0.0), 1.0, 16),
            Err(Error::SingularInversion)
        ));
        let gm2 = natural_spec(c(5.0, 0.0));
        assert!(two_adic_mode_solution(&pot, &gm2, c(1.0, 0.0), -2.0, 16).is_err());
    }
}
