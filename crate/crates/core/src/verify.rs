//! The acceptance suite: every criterion pinned to its tolerance, runnable
//! through `specdisp verify` and through the `acceptance` test target.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{
    lambert_convert, two_adic_identity_deviation, two_adic_inverse, CoeffSeq, LambertDirection,
    TrigPoly, TwoAdicSeq,
};
use crate::dispersion::{
    phase_sign_residuals, truncated_residual_spectrum, uniform_axis, DispersionLaw, LawKind,
    ParticleParams, SpectrumGrid,
};
use crate::error::{Error, Result};
use crate::hill::{
    a_n_coefficient, ft_factorization_check, g_from_h, gamma_closed_form, pochhammer_g,
    product_solution, recurrence_solve, AnMethod, Branch, FunctionalEquation, HFactorization,
    Multiplier, PochhammerGVariant,
};
use crate::oracle::{binomial_series_partial, integrate_ode, OdeProblem};
use crate::specfun::{faulhaber_r1_rational, gamma, mellin_bridge, mellin_numeric, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Arith,
    Dispersion,
    Hill,
    Cli,
}

impl Suite {
    pub fn label(&self) -> &'static str {
        match self {
            Suite::Arith => "arith",
            Suite::Dispersion => "dispersion",
            Suite::Hill => "hill",
            Suite::Cli => "cli",
        }
    }

    /// Parse a suite filter; `None` or `"all"` selects everything.
    pub fn parse(text: Option<&str>) -> Result<Option<Suite>> {
        match text {
            None | Some("all") => Ok(None),
            Some("arith") => Ok(Some(Suite::Arith)),
            Some("dispersion") => Ok(Some(Suite::Dispersion)),
            Some("hill") => Ok(Some(Suite::Hill)),
            Some("cli") => Ok(Some(Suite::Cli)),
            Some(other) => Err(Error::InvalidInput(format!(
                "unknown suite '{other}' (use all|arith|dispersion|hill|cli)"
            ))),
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub suite: Suite,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:02} {:<44} {}",
            if self.passed { "pass" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn outcome(
    id: u32,
    name: &'static str,
    suite: Suite,
    result: std::result::Result<String, String>,
) -> CriterionOutcome {
    match result {
        Ok(detail) => CriterionOutcome {
            id,
            name,
            suite,
            passed: true,
            detail,
        },
        Err(detail) => CriterionOutcome {
            id,
            name,
            suite,
            passed: false,
            detail,
        },
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        match $cond {
            true => {}
            false => return Err(format!($($fmt)*)),
        }
    };
}

fn run_to_string<F: FnOnce() -> std::result::Result<String, String>>(
    f: F,
) -> std::result::Result<String, String> {
    f()
}

fn err_str<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

/// 1. Lambert round trip: exact for 200 random sequences, support <= 64.
pub fn c01_lambert_round_trip() -> CriterionOutcome {
    outcome(
        1,
        "lambert round trip",
        Suite::Arith,
        run_to_string(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(101);
            let mut worst = 0.0f64;
            for trial in 0..200 {
                let support = rng.gen_range(1..=64);
                let mut a = CoeffSeq::new();
                for n in 1..=support {
                    a.set(n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .unwrap();
                }
                let b = err_str(lambert_convert(&a, LambertDirection::TaylorToLambert, 64))?;
                let back = err_str(lambert_convert(&b, LambertDirection::LambertToTaylor, 64))?;
                let dev = a.max_deviation(&back);
                worst = worst.max(dev);
                ensure!(dev < 1e-13, "trial {trial}: deviation {dev:.3e} >= 1e-13");
            }
            Ok(format!(
                "200 sequences, worst deviation {worst:.3e} < 1e-13"
            ))
        }),
    )
}

/// 2. 2-adic inverse: defining identity <= 1e-14 for N = 128.
pub fn c02_two_adic_inverse() -> CriterionOutcome {
    outcome(
        2,
        "2-adic inverse identity",
        Suite::Arith,
        run_to_string(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(102);
            let mut worst = 0.0f64;
            for trial in 0..100 {
                let b = TwoAdicSeq::from_pairs((0..8).map(|k| {
                    let base = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    (k, if k == 0 { base + c(1.5, 0.0) } else { base })
                }));
                let a = err_str(two_adic_inverse(&b, 128))?;
                let dev = two_adic_identity_deviation(&b, &a, 128);
                worst = worst.max(dev);
                ensure!(dev <= 1e-14, "trial {trial}: deviation {dev:.3e} > 1e-14");
            }
            Ok(format!(
                "100 sequences, worst deviation {worst:.3e} <= 1e-14"
            ))
        }),
    )
}

/// 3. Binomial partial sums at x = 0.5 reach the closed form by K = 40.
pub fn c03_binomial_series_limit() -> CriterionOutcome {
    outcome(
        3,
        "binomial series limit",
        Suite::Dispersion,
        run_to_string(|| {
            let want = 0.25 / 1.25f64.sqrt();
            let got = binomial_series_partial(0.5, 40);
            let err = (got - want).abs();
            ensure!(err < 1e-12, "partial sum off by {err:.3e}");
            ensure!(
                (want - 0.2236068).abs() < 5e-8,
                "closed form drifted from its reference digits"
            );
            Ok(format!("|S_40 - 0.25/sqrt(1.25)| = {err:.3e} < 1e-12"))
        }),
    )
}

/// 4. Truncated-equation residual of the spectral propagator at K = 40,
///    with monotone decrease in K.
pub fn c04_spectral_self_consistency() -> CriterionOutcome {
    outcome(
        4,
        "spectral law self-consistency",
        Suite::Dispersion,
        run_to_string(|| {
            let params = err_str(ParticleParams::natural(1.0))?;
            let law = DispersionLaw::new(LawKind::Relativistic, params);
            let probes = [(0.0, 0.0), (1.1, 0.6), (-0.4, 1.7)];
            let mut worst = 0.0f64;
            for &u in &[0.1, 0.25, 0.4, 0.5] {
                let grid = err_str(SpectrumGrid::new_1d(
                    vec![u - 0.05, u, u + 0.05],
                    vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                    Some(params.band_limit()),
                ))?;
                let stats = err_str(truncated_residual_spectrum(&grid, &law, 40, &probes))?;
                worst = worst.max(stats.max_normalized);
                ensure!(
                    stats.max_normalized <= 1e-10,
                    "l0*gamma = {u}: residual {:.3e} > 1e-10",
                    stats.max_normalized
                );
            }
            // monotone decrease at l0 gamma = 0.5
            let grid = err_str(SpectrumGrid::new_1d(
                vec![0.45, 0.5, 0.55],
                vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                Some(params.band_limit()),
            ))?;
            let mut prev = f64::INFINITY;
            for k in [5u32, 10, 20, 40] {
                let r =
                    err_str(truncated_residual_spectrum(&grid, &law, k, &probes))?.max_normalized;
                ensure!(r < prev, "K = {k}: residual {r:.3e} did not decrease");
                prev = r;
            }
            Ok(format!("K=40 residual {worst:.3e} <= 1e-10, monotone in K"))
        }),
    )
}

/// 5. Exactly one mode-sum phase sign solves the truncated equation.
pub fn c05_phase_sign_separation() -> CriterionOutcome {
    outcome(
        5,
        "phase-sign separation",
        Suite::Dispersion,
        run_to_string(|| {
            let params = err_str(ParticleParams::natural(0.5))?;
            let (plus, minus) = err_str(phase_sign_residuals(&params, 40))?;
            let (best, worst) = if plus <= minus {
                (plus, minus)
            } else {
                (minus, plus)
            };
            ensure!(best <= 1e-10, "best sign residual {best:.3e} > 1e-10");
            ensure!(worst >= 1e-2, "wrong sign residual {worst:.3e} < 1e-2");
            Ok(format!("separation {best:.3e} vs {worst:.3e}"))
        }),
    )
}

/// 6. Quadratic-law limit of the canonical dispersion.
pub fn c06_schrodinger_limit() -> CriterionOutcome {
    outcome(
        6,
        "quadratic-dispersion limit",
        Suite::Dispersion,
        run_to_string(|| {
            let params = err_str(ParticleParams::natural(1.0))?;
            let rel = DispersionLaw::new(LawKind::Relativistic, params);
            let schr = DispersionLaw::new(LawKind::Schrodinger, params);
            let mut details = Vec::new();
            for &u in &[0.05, 0.1, 0.3] {
                let gamma = u / params.compton_length();
                let a = err_str(rel.kinetic(gamma))?;
                let b = err_str(schr.kinetic(gamma))?;
                let dev = (a - b).abs() / b;
                ensure!(
                    dev <= 0.5 * u * u,
                    "u = {u}: deviation {dev:.3e} > {}",
                    0.5 * u * u
                );
                details.push(format!("{dev:.2e}"));
            }
            Ok(format!(
                "relative deviations {} within 0.5 u^2",
                details.join(", ")
            ))
        }),
    )
}

/// 7. Evolution is unitary per mode and a semigroup in time.
pub fn c07_unitarity_semigroup() -> CriterionOutcome {
    outcome(
        7,
        "unitarity and semigroup",
        Suite::Dispersion,
        run_to_string(|| {
            let params = err_str(ParticleParams::natural(0.1))?;
            let law = DispersionLaw::new(LawKind::Relativistic, params);
            let mut rng = ChaCha8Rng::seed_from_u64(107);
            let axis = err_str(uniform_axis(-8.0, 8.0, 65))?;
            let amps: Vec<Complex64> = (0..65)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let grid = err_str(SpectrumGrid::new_1d(axis, amps, Some(params.band_limit())))?;
            let one = err_str(grid.evolve(0.7, &law))?;
            let mut drift = 0.0f64;
            for (a, b) in grid.amplitudes().iter().zip(one.amplitudes()) {
                drift = drift.max((a.norm() - b.norm()).abs() / a.norm().max(1e-300));
            }
            ensure!(drift <= 1e-15, "magnitude drift {drift:.3e} > 1e-15");
            let two = err_str(one.evolve(0.9, &law))?;
            let direct = err_str(grid.evolve(1.6, &law))?;
            let mut comp = 0.0f64;
            for (a, b) in two.amplitudes().iter().zip(direct.amplitudes()) {
                comp = comp.max((a - b).norm());
            }
            ensure!(comp <= 1e-12, "composition error {comp:.3e} > 1e-12");
            Ok(format!("drift {drift:.3e}, composition {comp:.3e}"))
        }),
    )
}

/// 8. Constant potential: the lattice solution is e^x and matches the
///    integration oracle on [0, 1].
pub fn c08_constant_potential_exponential() -> CriterionOutcome {
    outcome(
        8,
        "constant potential solution",
        Suite::Hill,
        run_to_string(|| {
            let v = TrigPoly::from_real([(0, 1.0)]);
            let b = Polynomial::from_real([0.0, 0.0, 1.0]);
            let sol = err_str(recurrence_solve(&v, &b, Branch::Nearest(c(0.0, -1.0)), 16))?;
            let mut exp_dev = 0.0f64;
            for i in 0..=20 {
                let x = i as f64 / 20.0;
                exp_dev = exp_dev.max((sol.eval(x) - x.exp()).norm());
            }
            ensure!(exp_dev <= 1e-10, "deviation from e^x {exp_dev:.3e}");
            let traj = err_str(integrate_ode(&OdeProblem {
                v: |_| c(1.0, 0.0),
                x0: 0.0,
                y0: sol.eval(0.0),
                dy0: sol.eval_derivative(0.0, 1),
                x_end: 1.0,
                step: 1e-3,
            }))?;
            let mut rk_dev = 0.0f64;
            for (i, &x) in traj.xs.iter().enumerate().step_by(50) {
                rk_dev = rk_dev.max((traj.ys[i] - sol.eval(x)).norm());
            }
            ensure!(rk_dev <= 1e-8, "oracle deviation {rk_dev:.3e} > 1e-8");
            Ok(format!(
                "e^x deviation {exp_dev:.3e}, oracle deviation {rk_dev:.3e}"
            ))
        }),
    )
}

/// 9. Pure-harmonic potential: coefficients `(-1)^k / (k!)^2` and the
///    log-Gamma-squared candidate solve the shift relation.
pub fn c09_pure_harmonic_example() -> CriterionOutcome {
    outcome(
        9,
        "pure-harmonic lattice + candidate",
        Suite::Hill,
        run_to_string(|| {
            let v = TrigPoly::from_real([(1, 1.0)]);
            let b = Polynomial::from_real([0.0, 0.0, 1.0]);
            let sol = err_str(recurrence_solve(&v, &b, Branch::Index(0), 12))?;
            let mut fact = 1.0f64;
            let mut worst = 0.0f64;
            for k in 1..=12usize {
                fact *= k as f64;
                let want = if k % 2 == 0 { 1.0 } else { -1.0 } / (fact * fact);
                let dev = (sol.coeff(k) - want).norm();
                worst = worst.max(dev);
                ensure!(dev < 1e-12, "k = {k}: coefficient off by {dev:.3e}");
            }
            let eq = FunctionalEquation::from_ode(&b, &v);
            let yhat = |z: Complex64| -> Result<Complex64> {
                Ok((Complex64::new(0.0, -std::f64::consts::PI) * z).exp() * gamma(z)?.powu(2))
            };
            let mut rng = ChaCha8Rng::seed_from_u64(109);
            let mut worst_res = 0.0f64;
            for _ in 0..100 {
                let z = c(rng.gen_range(0.5..5.0), rng.gen_range(-3.0..3.0));
                let sample = err_str(eq.residual(yhat, z))?;
                worst_res = worst_res.max(sample.normalized);
                ensure!(
                    sample.normalized <= 1e-10,
                    "candidate residual {:.3e} at z = {z}",
                    sample.normalized
                );
            }
            Ok(format!(
                "coefficients {worst:.3e}, candidate residual {worst_res:.3e}"
            ))
        }),
    )
}

/// 10. The six step-ratio/solution pairs satisfy the functional identity.
pub fn c10_gamma_closed_forms() -> CriterionOutcome {
    outcome(
        10,
        "gamma-product closed forms",
        Suite::Hill,
        run_to_string(|| {
            let sqrt7 = 7.0f64.sqrt();
            let pairs: Vec<(&str, HFactorization)> = vec![
                ("z", HFactorization::monomial(c(1.0, 0.0), 1)),
                ("z^2", HFactorization::monomial(c(1.0, 0.0), 2)),
                (
                    "z^2/(z-1)",
                    HFactorization::monomial(c(1.0, 0.0), 2).with_poles(vec![c(1.0, 0.0)]),
                ),
                (
                    "2z+1",
                    HFactorization::monomial(c(2.0, 0.0), 0).with_roots(vec![c(-0.5, 0.0)]),
                ),
                (
                    "2z^2+z",
                    HFactorization::monomial(c(2.0, 0.0), 1).with_roots(vec![c(-0.5, 0.0)]),
                ),
                (
                    "2z^2+z+1",
                    HFactorization::monomial(c(2.0, 0.0), 0)
                        .with_roots(vec![c(-0.25, -sqrt7 / 4.0), c(-0.25, sqrt7 / 4.0)]),
                ),
            ];
            let mut worst = 0.0f64;
            for (label, h) in pairs {
                let form = err_str(gamma_closed_form(&h))?;
                let mut rng = ChaCha8Rng::seed_from_u64(110);
                for _ in 0..100 {
                    let z = c(rng.gen_range(0.5..5.0), rng.gen_range(-3.0..3.0));
                    let res = err_str(form.functional_residual(z))?;
                    worst = worst.max(res);
                    ensure!(res <= 1e-9, "{label}: residual {res:.3e} at z = {z}");
                }
            }
            Ok(format!(
                "six pairs, worst identity residual {worst:.3e} <= 1e-9"
            ))
        }),
    )
}

/// 11. Faulhaber antidifference: printed cases exact, difference identity as
///     polynomial identity for 20 random rational polynomials.
pub fn c11_faulhaber_antidifference() -> CriterionOutcome {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn shift(p: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); p.len()];
        for (j, coeff) in p.iter().enumerate() {
            let mut binom = BigRational::one();
            for l in (0..=j).rev() {
                out[l] += coeff * &binom;
                if l > 0 {
                    binom = binom * BigInt::from(l) / BigInt::from(j - l + 1);
                }
            }
        }
        out
    }

    outcome(
        11,
        "faulhaber antidifference",
        Suite::Hill,
        run_to_string(|| {
            let printed = [
                (
                    vec![rat(0, 1), rat(1, 1)],
                    vec![rat(0, 1), rat(-1, 2), rat(1, 2)],
                ),
                (
                    vec![rat(0, 1), rat(0, 1), rat(1, 1)],
                    vec![rat(0, 1), rat(1, 6), rat(-1, 2), rat(1, 3)],
                ),
                (
                    vec![rat(0, 1), rat(-2, 1), rat(1, 1)],
                    vec![rat(0, 1), rat(7, 6), rat(-3, 2), rat(1, 3)],
                ),
            ];
            for (r, want) in &printed {
                let got = faulhaber_r1_rational(r);
                ensure!(&got == want, "printed case mismatch for {r:?}");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(111);
            for trial in 0..20 {
                let deg = rng.gen_range(0..=6usize);
                let r: Vec<BigRational> = (0..=deg)
                    .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                    .collect();
                let r1 = faulhaber_r1_rational(&r);
                let mut diff = shift(&r1);
                for (d, v) in diff.iter_mut().zip(r1.iter()) {
                    *d -= v;
                }
                while diff.last().map(|x| x.is_zero()) == Some(true) {
                    diff.pop();
                }
                let mut want = r.clone();
                while want.last().map(|x| x.is_zero()) == Some(true) {
                    want.pop();
                }
                ensure!(diff == want, "trial {trial}: difference identity failed");
            }
            Ok("3 printed cases exact, 20 random difference identities exact".into())
        }),
    )
}

/// 12. Shift-expansion coefficients: quadrature vs closed route, plus the two
///     delta examples.
pub fn c12_an_cross_check() -> CriterionOutcome {
    outcome(
        12,
        "shift-coefficient cross-check",
        Suite::Hill,
        run_to_string(|| {
            let g = Multiplier::Poly(Polynomial::from_real([0.0, 0.0, -1.0]));
            let v = TrigPoly::from_real([(0, 2.0), (1, 1.0)]);
            let x = c(0.7, 0.25);
            let mut worst = 0.0f64;
            for n in -2..=2i64 {
                let closed = err_str(a_n_coefficient(&v, &g, n, x, AnMethod::Closed))?;
                let quad = err_str(a_n_coefficient(&v, &g, n, x, AnMethod::Quadrature))?;
                let dev = (closed - quad).norm();
                worst = worst.max(dev);
                ensure!(dev <= 1e-8, "n = {n}: routes differ by {dev:.3e}");
            }
            // delta examples: V = 1 and V = e^{-ix}
            let v1 = TrigPoly::from_real([(0, 1.0)]);
            for n in -2..=2i64 {
                let got = err_str(a_n_coefficient(&v1, &g, n, x, AnMethod::Closed))?;
                let want = if n == 0 {
                    -(x * x)
                } else {
                    Complex64::default()
                };
                ensure!(
                    (got - want).norm() < 1e-12,
                    "constant potential: A_{n} wrong"
                );
            }
            let vh = TrigPoly::from_real([(1, 1.0)]);
            for n in -2..=2i64 {
                let got = err_str(a_n_coefficient(&vh, &g, n, x, AnMethod::Closed))?;
                let want = if n == -1 {
                    -((x - 1.0) * (x - 1.0))
                } else {
                    Complex64::default()
                };
                ensure!(
                    (got - want).norm() < 1e-12,
                    "harmonic potential: A_{n} wrong"
                );
            }
            Ok(format!("routes agree to {worst:.3e}; delta examples exact"))
        }),
    )
}

/// 13. Multidimensional factorization identity on the coefficient lattice.
pub fn c13_factorization_identity() -> CriterionOutcome {
    outcome(
        13,
        "transform factorization",
        Suite::Hill,
        run_to_string(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(113);
            let mut worst = 0.0f64;
            for n in [2usize, 3] {
                for trial in 0..10 {
                    let terms = rng.gen_range(1..=4usize);
                    let y = TrigPoly::from_coeffs((0..terms).map(|i| {
                        (
                            rng.gen_range(-3..4) + 5 * i as i64,
                            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        )
                    }));
                    let dev = err_str(ft_factorization_check(&y, n))?;
                    worst = worst.max(dev);
                    ensure!(dev <= 1e-13, "N = {n}, trial {trial}: deviation {dev:.3e}");
                }
            }
            Ok(format!(
                "N in {{2,3}}, worst deviation {worst:.3e} <= 1e-13"
            ))
        }),
    )
}

/// 14. Pochhammer-ratio series equals the direct cocycle product.
pub fn c14_pochhammer_series() -> CriterionOutcome {
    outcome(
        14,
        "pochhammer-ratio series",
        Suite::Hill,
        run_to_string(|| {
            let a_params = [c(0.4, 0.2), c(1.3, -0.5)];
            let b_params = [c(2.2, 0.1)];
            let rate = 0.3;
            let ratio = c(1.0, 0.0);
            let mut rng = ChaCha8Rng::seed_from_u64(114);
            let cseq: Vec<Complex64> = (0..10)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let h = |z: Complex64| {
                let mut acc = ratio * (-rate * z).exp();
                for a in &a_params {
                    acc *= z + a;
                }
                for b in &b_params {
                    acc /= z + b;
                }
                acc
            };
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let z = c(rng.gen_range(0.5..4.0), rng.gen_range(-2.0..2.0));
                let series = err_str(pochhammer_g(
                    &cseq,
                    &a_params,
                    &b_params,
                    rate,
                    ratio,
                    z,
                    9,
                    PochhammerGVariant::Derived,
                ))?;
                let direct = err_str(g_from_h(&cseq, h, z, 9))?;
                let dev = (series - direct).norm() / direct.norm().max(1.0);
                worst = worst.max(dev);
                ensure!(dev <= 1e-9, "z = {z}: deviation {dev:.3e} > 1e-9");
            }
            Ok(format!("50 points, worst deviation {worst:.3e} <= 1e-9"))
        }),
    )
}

/// 15. Numeric Mellin transform of the Lorentzian and the transform bridge.
pub fn c15_mellin_bridge() -> CriterionOutcome {
    outcome(
        15,
        "mellin transform bridge",
        Suite::Hill,
        run_to_string(|| {
            let g = |t: f64| c(1.0 / (t * t + 1.0), 0.0);
            let sample = err_str(mellin_numeric(g, c(1.0, 0.0), 2.0))?;
            let err = (sample.value - c(std::f64::consts::FRAC_PI_2, 0.0)).norm();
            ensure!(err < 1e-6, "Mellin value off by {err:.3e}");
            let mut worst = 0.0f64;
            for i in 0..10 {
                let gamma = -2.0 + 0.45 * i as f64;
                let got = mellin_bridge(g, gamma);
                let want = 2.0 * std::f64::consts::PI / (1.0 + (-2.0 * gamma).exp());
                let dev = (got - c(want, 0.0)).norm();
                worst = worst.max(dev);
                ensure!(dev < 1e-12, "bridge point {i}: deviation {dev:.3e}");
            }
            Ok(format!(
                "Mellin error {err:.3e}, bridge deviation {worst:.3e}"
            ))
        }),
    )
}

/// 16. Product solutions: telescoping exact, convergent case drives the
///     functional-equation residual down.
pub fn c16_product_solution() -> CriterionOutcome {
    outcome(
        16,
        "product solution",
        Suite::Hill,
        run_to_string(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(116);
            let mut worst = 0.0f64;
            for n in [4usize, 16, 64] {
                let p = c(rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3));
                let h = move |z: Complex64| 1.0 + p / (z * z + 3.0);
                let sol = err_str(product_solution(h, c(1.0, 0.0), c(0.8, 0.3), n))?;
                worst = worst.max(sol.telescoping_deviation);
                ensure!(
                    sol.telescoping_deviation <= 1e-12,
                    "N = {n}: telescoping deviation {:.3e}",
                    sol.telescoping_deviation
                );
            }
            let h = |z: Complex64| 1.0 + c(2.0, 0.0).powc(-z);
            let sol = err_str(product_solution(h, c(1.0, 0.0), c(1.2, 0.0), 40))?;
            ensure!(sol.convergent, "decaying tail not flagged convergent");
            ensure!(
                sol.equation_residual < 1e-8,
                "equation residual {:.3e} >= 1e-8 at N = 40",
                sol.equation_residual
            );
            Ok(format!(
                "telescoping {worst:.3e}, residual {:.3e} at N = 40",
                sol.equation_residual
            ))
        }),
    )
}

/// 17. Byte-identical artifacts for repeated runs of the bundled demo config.
pub fn c17_cli_determinism() -> CriterionOutcome {
    outcome(
        17,
        "cli determinism",
        Suite::Cli,
        run_to_string(|| {
            let config: crate::cli::ScenarioConfig = serde_json::from_str(include_str!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/../../configs/demo_dispersion.json"
            )))
            .map_err(|e| format!("demo config: {e}"))?;
            let d1 = tempfile::tempdir().map_err(|e| e.to_string())?;
            let d2 = tempfile::tempdir().map_err(|e| e.to_string())?;
            err_str(crate::cli::run_scenario(&config, d1.path()))?;
            err_str(crate::cli::run_scenario(&config, d2.path()))?;
            let list =
                |dir: &std::path::Path| -> std::result::Result<Vec<(String, Vec<u8>)>, String> {
                    let mut paths: Vec<_> = std::fs::read_dir(dir)
                        .map_err(|e| e.to_string())?
                        .map(|e| e.unwrap().path())
                        .collect();
                    paths.sort();
                    Ok(paths
                        .into_iter()
                        .map(|p| {
                            (
                                p.file_name().unwrap().to_string_lossy().into_owned(),
                                std::fs::read(&p).unwrap(),
                            )
                        })
                        .collect())
                };
            let a = list(d1.path())?;
            let b = list(d2.path())?;
            ensure!(
                a.len() == b.len() && !a.is_empty(),
                "artifact sets differ in size"
            );
            for ((na, ba), (nb, bb)) in a.iter().zip(&b) {
                ensure!(na == nb, "file names differ: {na} vs {nb}");
                ensure!(ba == bb, "file {na} is not byte-identical");
            }
            Ok(format!("{} artifacts byte-identical across runs", a.len()))
        }),
    )
}

// ---------------------------------------------------------------------------
// runners
// ---------------------------------------------------------------------------

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        c01_lambert_round_trip(),
        c02_two_adic_inverse(),
        c03_binomial_series_limit(),
        c04_spectral_self_consistency(),
        c05_phase_sign_separation(),
        c06_schrodinger_limit(),
        c07_unitarity_semigroup(),
        c08_constant_potential_exponential(),
        c09_pure_harmonic_example(),
        c10_gamma_closed_forms(),
        c11_faulhaber_antidifference(),
        c12_an_cross_check(),
        c13_factorization_identity(),
        c14_pochhammer_series(),
        c15_mellin_bridge(),
        c16_product_solution(),
        c17_cli_determinism(),
    ]
}

/// Run the criteria of one suite, or everything when `suite` is `None`.
pub fn run_suite(suite: Option<Suite>) -> Vec<CriterionOutcome> {
    run_all()
        .into_iter()
        .filter(|o| suite.map(|s| s == o.suite).unwrap_or(true))
        .collect()
}
