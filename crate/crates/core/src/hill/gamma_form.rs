//! Closed forms built from Gamma products: the cocycle series
//! `g(z) = sum_k c_k prod_{j<k} H(z+j)`, its Pochhammer-ratio specialization,
//! the Gamma-product solution of `yhat(z+1) = H(z) yhat(z)`, and truncated
//! infinite products `prod_n 1/H(z + n tau)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{faulhaber_r1, ln_gamma, Polynomial};

// ---------------------------------------------------------------------------
// cocycle series
// ---------------------------------------------------------------------------

/// Evaluate `g(z) = sum_{k=0}^{kmax} c_k prod_{j=0}^{k-1} H(z+j)`.
///
/// Falls back to log-space accumulation when the running product leaves the
/// representable range.
pub fn g_from_h<H>(c: &[Complex64], h: H, z: Complex64, kmax: usize) -> Result<Complex64>
where
    H: Fn(Complex64) -> Complex64,
{
    let mut sum = Complex64::default();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut log_prod = Complex64::default();
    let mut vanished = false;
    let mut log_mode = false;
    for (k, &ck) in c.iter().enumerate().take(kmax + 1) {
        if ck != Complex64::default() {
            let term = if vanished {
                Complex64::default()
            } else if log_mode {
                (log_prod + ck.ln()).exp()
            } else {
                ck * prod
            };
            if !term.is_finite() {
                return Err(Error::Overflow { x: k as f64 });
            }
            sum += term;
        }
        if k == kmax {
            break;
        }
        // extend the product by H(z + k)
        let factor = h(z + k as f64);
        if factor == Complex64::default() {
            vanished = true;
            continue;
        }
        if log_mode {
            log_prod += factor.ln();
        } else {
            prod *= factor;
            if prod.norm() > 1e250 || (prod != Complex64::default() && prod.norm() < 1e-250) {
                log_mode = true;
                log_prod = prod.ln();
            }
        }
    }
    if !sum.is_finite() {
        return Err(Error::Overflow { x: kmax as f64 });
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// Gamma-product closed form
// ---------------------------------------------------------------------------

/// Factorization data of a step ratio
/// `H(z) = (A/B) C z^m e^{-R(z)} prod(z - rho_j) / prod(z - sigma_j)`.
#[derive(Debug, Clone)]
pub struct HFactorization {
    pub c: Complex64,
    pub m: i32,
    pub r: Polynomial,
    pub roots: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub a_over_b: Complex64,
}

impl HFactorization {
    pub fn monomial(c: Complex64, m: i32) -> Self {
        Self {
            c,
            m,
            r: Polynomial::zero(),
            roots: Vec::new(),
            poles: Vec::new(),
            a_over_b: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_roots(mut self, roots: Vec<Complex64>) -> Self {
        self.roots = roots;
        self
    }

    pub fn with_poles(mut self, poles: Vec<Complex64>) -> Self {
        self.poles = poles;
        self
    }

    pub fn with_exponent(mut self, r: Polynomial) -> Self {
        self.r = r;
        self
    }

    pub fn with_ratio(mut self, a_over_b: Complex64) -> Self {
        self.a_over_b = a_over_b;
        self
    }

    /// Evaluate `H(z)` directly.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.a_over_b * self.c * z.powi(self.m) * (-self.r.eval(z)).exp();
        for rho in &self.roots {
            acc *= z - rho;
        }
        for sigma in &self.poles {
            acc /= z - sigma;
        }
        acc
    }
}

/// Closed-form solution descriptor
/// `yhat(z) = base^z Gamma(z)^m e^{-R1(z)} prod Gamma(z-rho) / prod Gamma(z-sigma)`.
#[derive(Debug, Clone)]
pub struct GammaProductForm {
    pub base: Complex64,
    pub gamma_power: i32,
    pub r1: Polynomial,
    pub roots: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

impl GammaProductForm {
    /// Evaluate through log space; defined away from the Gamma poles.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut log_acc = z * self.base.ln() - self.r1.eval(z);
        if self.gamma_power != 0 {
            log_acc += ln_gamma(z)? * self.gamma_power as f64;
        }
        for rho in &self.roots {
            log_acc += ln_gamma(z - rho)?;
        }
        for sigma in &self.poles {
            log_acc -= ln_gamma(z - sigma)?;
        }
        Ok(log_acc.exp())
    }

    /// The step ratio this form satisfies: `yhat(z+1) = H(z) yhat(z)`, with
    /// `R` recovered as `R1(z+1) - R1(z)`.
    pub fn step_ratio(&self, z: Complex64) -> Complex64 {
        let r_z = self.r1.eval(z + 1.0) - self.r1.eval(z);
        let mut acc = self.base * z.powi(self.gamma_power) * (-r_z).exp();
        for rho in &self.roots {
            acc *= z - rho;
        }
        for sigma in &self.poles {
            acc /= z - sigma;
        }
        acc
    }

    /// Normalized deviation of the defining identity at `z`.
    pub fn functional_residual(&self, z: Complex64) -> Result<f64> {
        let lhs = self.eval(z + 1.0)?;
        let rhs = self.step_ratio(z) * self.eval(z)?;
        Ok((lhs - rhs).norm() / rhs.norm().max(1e-300))
    }
}

/// Build the Gamma-product solution of `yhat(z+1) = H(z) yhat(z)` from the
/// factorization of `H`.
pub fn gamma_closed_form(h: &HFactorization) -> Result<GammaProductForm> {
    for rho in &h.roots {
        for sigma in &h.poles {
            if (rho - sigma).norm() < 1e-12 {
                return Err(Error::CommonRootPole { z: *rho });
            }
        }
    }
    let base = h.a_over_b * h.c;
    if base == Complex64::default() {
        return Err(Error::InvalidInput("prefactor base vanishes".into()));
    }
    Ok(GammaProductForm {
        base,
        gamma_power: h.m,
        r1: faulhaber_r1(&h.r),
        roots: h.roots.clone(),
        poles: h.poles.clone(),
    })
}

// ---------------------------------------------------------------------------
// Pochhammer-ratio series
// ---------------------------------------------------------------------------

/// Exponent and normalization convention of [`pochhammer_g`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerGVariant {
    /// `e^{-a k z - a k(k-1)/2}` per term, as the telescoped product gives.
    Derived,
    /// `e^{-a k z - a k(k+1)/2} / k!`, kept for comparison runs.
    Factorial,
}

/// Evaluate the Pochhammer-ratio form of the cocycle series for
/// `H(z) = ratio * prod_i (z + A_i) / prod_i (z + B_i) * e^{-a z}`:
/// `g(z) = sum_k c_k ratio^k prod_i (z+A_i)_k / prod_i (z+B_i)_k * exp-factor`.
#[allow(clippy::too_many_arguments)]
pub fn pochhammer_g(
    c: &[Complex64],
    a_params: &[Complex64],
    b_params: &[Complex64],
    rate: f64,
    ratio: Complex64,
    z: Complex64,
    kmax: usize,
    variant: PochhammerGVariant,
) -> Result<Complex64> {
    let mut sum = Complex64::default();
    // incremental state shared by both variants
    let mut poch = Complex64::new(1.0, 0.0); // ratio^k * prod (z+A)_k / prod (z+B)_k
    let mut factorial = 1.0f64;
    for (k, &ck) in c.iter().enumerate().take(kmax + 1) {
        if ck != Complex64::default() {
            let kf = k as f64;
            let exponent = match variant {
                PochhammerGVariant::Derived => -rate * kf * z - rate * kf * (kf - 1.0) / 2.0,
                PochhammerGVariant::Factorial => -rate * kf * z - rate * kf * (kf + 1.0) / 2.0,
            };
            let mut term = ck * poch * exponent.exp();
            if variant == PochhammerGVariant::Factorial {
                term /= factorial;
            }
            if !term.is_finite() {
                return Err(Error::Overflow { x: k as f64 });
            }
            sum += term;
        }
        if k == kmax {
            break;
        }
        let kf = k as f64;
        poch *= ratio;
        for a in a_params {
            poch *= z + a + kf;
        }
        for b in b_params {
            let d = z + b + kf;
            if d.norm() < 1e-280 {
                return Err(Error::Pole { z: -b - kf });
            }
            poch /= d;
        }
        factorial *= (k + 1) as f64;
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// product solutions
// ---------------------------------------------------------------------------

/// Truncated product `yhat_N(z) = prod_{n=0}^{N-1} 1 / H(z + n tau)` and its
/// diagnostics.
#[derive(Debug, Clone)]
pub struct ProductSolution {
    pub value: Complex64,
    /// normalized deviation of
    /// `yhat_N(z+tau) / yhat_N(z) = H(z) / H(z + N tau)`
    pub telescoping_deviation: f64,
    /// normalized `|yhat_N(z+tau) - H(z) yhat_N(z)|`
    pub equation_residual: f64,
    /// heuristic flag: tail factors `|H - 1|` decay
    pub convergent: bool,
}

/// Evaluate the truncated product solution of `yhat(z+tau) = H(z) yhat(z)`.
pub fn product_solution<H>(
    h: H,
    tau: Complex64,
    z: Complex64,
    n_terms: usize,
) -> Result<ProductSolution>
where
    H: Fn(Complex64) -> Complex64,
{
    if n_terms == 0 {
        return Err(Error::InvalidInput("need at least one factor".into()));
    }
    let partial = |base: Complex64| -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for n in 0..n_terms {
            let factor = h(base + tau * n as f64);
            if factor == Complex64::default() {
                return Err(Error::Pole {
                    z: base + tau * n as f64,
                });
            }
            acc /= factor;
            if !acc.is_finite() {
                return Err(Error::Overflow { x: n as f64 });
            }
        }
        Ok(acc)
    };
    let value = partial(z)?;
    let shifted = partial(z + tau)?;

    let lhs = shifted / value;
    let rhs = h(z) / h(z + tau * n_terms as f64);
    let telescoping_deviation = (lhs - rhs).norm() / rhs.norm().max(1e-300);

    let eq_rhs = h(z) * value;
    let equation_residual = (shifted - eq_rhs).norm() / eq_rhs.norm().max(1e-300);

    let window = (n_terms / 2).clamp(1, 8);
    let mut convergent = true;
    let mut prev = f64::INFINITY;
    for n in (n_terms - window)..n_terms {
        let d = (h(z + tau * n as f64) - 1.0).norm();
        if d > prev * (1.0 + 1e-9) {
            convergent = false;
        }
        prev = d;
    }
    if prev > 1e-2 {
        convergent = false;
    }
    Ok(ProductSolution {
        value,
        telescoping_deviation,
        equation_residual,
        convergent,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
