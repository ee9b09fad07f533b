//! Fourier-side solver suite for `sum_n g_n (-i)^n y^(n)(x) = V(x) y(x)`
//! with periodic `V`.
//!
//! On the Fourier side the equation becomes the shift relation
//! `sum_n c_n yhat(z + n w) = g(z) yhat(z)`, and everything in this module is
//! a way of producing or checking candidates for `yhat`: lattice recurrences,
//! nested-sum evaluators, Gamma-product closed forms, infinite products, and
//! the 2-adic mode construction.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::TrigPoly;
use crate::dispersion::ParticleParams;
use crate::error::{Error, Result};
use crate::specfun::Polynomial;

mod functional;
mod gamma_form;
mod lattice;

pub use functional::{
    a_n_coefficient, nested_sum_eval, theta_iteration, AnMethod, NestedSumReport, ThetaReport,
};
pub use gamma_form::{
    g_from_h, gamma_closed_form, pochhammer_g, product_solution, GammaProductForm, HFactorization,
    PochhammerGVariant, ProductSolution,
};
pub use lattice::{
    ft_factorization_check, iterated_operator_solve, recurrence_solve, two_adic_mode_solution,
    Branch, IterationReport, TwoAdicMode,
};

// ---------------------------------------------------------------------------
// multipliers
// ---------------------------------------------------------------------------

/// Dispersion-side multiplier
/// `g_m(z) = C_m - E0 - (E0/2) l0^2 z^2 / sqrt(1 + l0^2 z^2)`.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierSpec {
    pub c_m: Complex64,
    pub params: ParticleParams,
}

impl MultiplierSpec {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let l0 = self.params.compton_length();
        let e0 = self.params.rest_energy();
        let u2 = z * z * (l0 * l0);
        self.c_m - e0 - 0.5 * e0 * u2 / (1.0 + u2).sqrt()
    }
}

/// Right-hand multiplier `g` of a functional equation.
#[derive(Clone)]
pub enum Multiplier {
    Poly(Polynomial),
    Spec(MultiplierSpec),
    Func(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl Multiplier {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Multiplier::Poly(p) => p.eval(z),
            Multiplier::Spec(s) => s.eval(z),
            Multiplier::Func(f) => f(z),
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Multiplier::Poly(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplier::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Multiplier::Spec(s) => f.debug_tuple("Spec").field(s).finish(),
            Multiplier::Func(_) => f.write_str("Func(..)"),
        }
    }
}

// ---------------------------------------------------------------------------
// functional equation
// ---------------------------------------------------------------------------

/// One residual probe of a functional equation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResidualSample {
    /// probe point as `(re, im)`
    pub z: (f64, f64),
    pub residual: f64,
    pub normalized: f64,
}

/// The shift relation `sum_n c_n yhat(z + n tau) = g(z) yhat(z)`.
#[derive(Debug, Clone)]
pub struct FunctionalEquation {
    coeffs: TrigPoly,
    shift: f64,
    multiplier: Multiplier,
    separation: Option<Vec<(Complex64, Complex64)>>,
}

impl FunctionalEquation {
    pub fn new(multiplier: Multiplier, v: &TrigPoly) -> Self {
        Self {
            coeffs: v.clone(),
            shift: v.lattice_step(),
            multiplier,
            separation: None,
        }
    }

    /// Equation for the operator polynomial `B`: `g(z) = B(iz)`.
    pub fn from_ode(b: &Polynomial, v: &TrigPoly) -> Self {
        Self::new(Multiplier::Poly(b.compose_i()), v)
    }

    pub fn with_separation(mut self, pairs: Vec<(Complex64, Complex64)>) -> Self {
        self.separation = Some(pairs);
        self
    }

    pub fn coeffs(&self) -> &TrigPoly {
        &self.coeffs
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }

    pub fn separation(&self) -> Option<&[(Complex64, Complex64)]> {
        self.separation.as_deref()
    }

    /// Residual of a candidate `yhat` at the point `z`.
    pub fn residual<F>(&self, yhat: F, z: Complex64) -> Result<ResidualSample>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let mut lhs = Complex64::default();
        for (n, c) in self.coeffs.coeffs() {
            lhs += c * yhat(z + n as f64 * self.shift)?;
        }
        let rhs = self.multiplier.eval(z) * yhat(z)?;
        let residual = (lhs - rhs).norm();
        Ok(ResidualSample {
            z: (z.re, z.im),
            residual,
            normalized: residual / rhs.norm().max(1e-300),
        })
    }

    /// Residual coefficients of a lattice candidate: entry `m` is
    /// `sum_n c_n a_{m-n} - g(nu - m w) a_m`.
    pub fn lattice_residual(&self, sol: &LatticeSolution) -> Vec<Complex64> {
        let span = self.coeffs.max_index().unwrap_or(0).max(0) as usize;
        let len = sol.coeffs().len() + span;
        (0..len)
            .map(|m| {
                let mut acc = Complex64::default();
                for (n, c) in self.coeffs.coeffs() {
                    let k = m as i64 - n;
                    if k >= 0 {
                        acc += c * sol.coeff(k as usize);
                    }
                }
                let z = sol.nu() - m as f64 * self.shift;
                acc - self.multiplier.eval(z) * sol.coeff(m)
            })
            .collect()
    }

    pub fn lattice_residual_max(&self, sol: &LatticeSolution) -> f64 {
        self.lattice_residual(sol)
            .iter()
            .map(|r| r.norm())
            .fold(0.0, f64::max)
    }
}

/// Shift relation for `y'' = V y` and friends, taking the multiplier `g`
/// directly as a polynomial in `z`.
pub fn build_functional_equation(g: &Polynomial, v: &TrigPoly) -> FunctionalEquation {
    FunctionalEquation::new(Multiplier::Poly(g.clone()), v)
}

// ---------------------------------------------------------------------------
// lattice solutions
// ---------------------------------------------------------------------------

/// Solution ansatz `y(x) = e^{i nu x} sum_{k>=0} a_k e^{-i k w x}`, `a_0 = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "LatticeSolutionRepr", into = "LatticeSolutionRepr")]
pub struct LatticeSolution {
    nu: Complex64,
    step: f64,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct LatticeSolutionRepr {
    nu: (f64, f64),
    step: f64,
    coeffs: Vec<(f64, f64)>,
}

impl TryFrom<LatticeSolutionRepr> for LatticeSolution {
    type Error = Error;
    fn try_from(repr: LatticeSolutionRepr) -> Result<Self> {
        LatticeSolution::new(
            Complex64::new(repr.nu.0, repr.nu.1),
            repr.step,
            repr.coeffs
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<LatticeSolution> for LatticeSolutionRepr {
    fn from(sol: LatticeSolution) -> Self {
        LatticeSolutionRepr {
            nu: (sol.nu.re, sol.nu.im),
            step: sol.step,
            coeffs: sol.coeffs.iter().map(|a| (a.re, a.im)).collect(),
        }
    }
}

impl LatticeSolution {
    pub fn new(nu: Complex64, step: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("lattice solution needs a_0".into()));
        }
        if (coeffs[0] - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidInput("normalization a_0 = 1 violated".into()));
        }
        let valid = step > 0.0;
        if !valid {
            return Err(Error::InvalidInput("lattice step must be positive".into()));
        }
        Ok(Self { nu, step, coeffs })
    }

    /// Seed `a = delta_{k,0}` of truncation order `k_order`.
    pub fn delta_seed(nu: Complex64, step: f64, k_order: usize) -> Self {
        let mut coeffs = vec![Complex64::default(); k_order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Self { nu, step, coeffs }
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Frequency of lattice slot `k`.
    pub fn frequency(&self, k: usize) -> Complex64 {
        self.nu - k as f64 * self.step
    }

    /// Evaluate `y^{(order)}(x)`.
    pub fn eval_derivative(&self, x: f64, order: u32) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let freq = self.frequency(k);
                a * (i * freq).powu(order) * (i * freq * x).exp()
            })
            .sum()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_derivative(x, 0)
    }

    /// Largest deviation `|sum_j b_j y^(j)(x) - V(x) y(x)|` over the sample
    /// points.
    pub fn ode_residual_max(&self, b: &Polynomial, v: &TrigPoly, xs: &[f64]) -> f64 {
        let deg = b.degree().unwrap_or(0) as u32;
        xs.iter()
            .map(|&x| {
                let mut lhs = Complex64::default();
                for j in 0..=deg {
                    lhs += b.coeff(j as usize) * self.eval_derivative(x, j);
                }
                (lhs - v.eval(x) * self.eval(x)).norm()
            })
            .fold(0.0, f64::max)
    }
}
