//! Special-function kernel: complex Gamma, Pochhammer symbols, the Faulhaber
//! antidifference transform, and a numerical Mellin transform.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;

// ---------------------------------------------------------------------------
// polynomials
// ---------------------------------------------------------------------------

/// Dense complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Build from ascending coefficients; trailing zeros are trimmed.
    pub fn new<I: IntoIterator<Item = Complex64>>(coeffs: I) -> Self {
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().collect();
        while coeffs.last() == Some(&Complex64::default()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real<I: IntoIterator<Item = f64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficients of `p(i z)`, i.e. the multiplier a differential operator
    /// acquires on the Fourier side.
    pub fn compose_i(&self) -> Polynomial {
        let i = Complex64::new(0.0, 1.0);
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c * i.powu(j as u32)),
        )
    }
}

/// All complex roots of a polynomial by simultaneous (Weierstrass) iteration.
///
/// Returned sorted by real part, then imaginary part. Multiple roots converge
/// slowly but reliably at the degrees used here.
pub fn complex_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let deg = p
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial has every root".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p.coeff(deg);
    let monic: Vec<Complex64> = (0..=deg).map(|i| p.coeff(i) / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::default();
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> = (0..deg).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..600 {
        let mut worst = 0.0f64;
        for j in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..deg {
                if k != j {
                    denom *= zs[j] - zs[k];
                }
            }
            let delta = eval(zs[j]) / denom;
            zs[j] -= delta;
            worst = worst.max(delta.norm());
        }
        if worst < 1e-14 {
            break;
        }
    }
    zs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(zs)
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

// Rational-approximation constants (g = 607/128, 15 terms).
const LANCZOS_G: f64 = 4.7421875;
#[allow(clippy::excessive_precision)] // published digits kept verbatim
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

fn is_near_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-300 && z.re <= 0.5 && (z.re - z.re.round()).abs() < 1e-300
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    // valid for Re z >= 0.5
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    (zm1 + 0.5) * t.ln() - t + 0.5 * (2.0 * PI).ln() + series.ln()
}

/// Principal-branch logarithm of the Gamma function.
///
/// For `Re z < 0.5` the reflection formula is applied in a form whose
/// exponential reproduces `Gamma(z)` exactly; winding of the imaginary part
/// is not tracked.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_near_nonpositive_integer(z) {
        return Err(Error::Pole { z });
    }
    if z.re >= 0.5 {
        Ok(lanczos_ln_gamma(z))
    } else {
        let sin_piz = (PI * z).sin();
        if sin_piz == Complex64::default() {
            return Err(Error::Pole { z });
        }
        Ok(Complex64::new(PI, 0.0).ln() - sin_piz.ln() - lanczos_ln_gamma(1.0 - z))
    }
}

/// Gamma function on the complex plane, poles rejected.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// Rising factorial `(z)_k = z (z+1) ... (z+k-1)`, with `(z)_0 = 1`.
pub fn pochhammer(z: Complex64, k: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= z + j as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Faulhaber antidifference
// ---------------------------------------------------------------------------

fn big_binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Power-sum polynomial `p_tau` with `p_tau(n) = sum_{j=0}^{n-1} j^tau`.
///
/// Exact rational coefficients, ascending degree, constant term zero.
pub fn power_sum_poly(tau: usize) -> Vec<BigRational> {
    // Solve sum_{j>l} h_j C(j, l) = delta_{l,tau} from the top degree down.
    let deg = tau + 1;
    let mut h = vec![BigRational::zero(); deg + 1];
    for l in (0..=tau).rev() {
        let mut rhs = if l == tau {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        for (j, hj) in h.iter().enumerate().take(deg + 1).skip(l + 2) {
            rhs -= hj * BigRational::from(big_binomial(j, l));
        }
        h[l + 1] = rhs / BigRational::from(BigInt::from(l + 1));
    }
    h
}

/// Unique polynomial `R1` with `R1(0) = 0` and `R1(z+1) - R1(z) = R(z)`,
/// in exact rational arithmetic.
pub fn faulhaber_r1_rational(r: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); r.len() + 1];
    for (tau, coeff) in r.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for (j, p) in power_sum_poly(tau).into_iter().enumerate() {
            out[j] += coeff * p;
        }
    }
    while out.last().map(|c| c.is_zero()) == Some(true) {
        out.pop();
    }
    out
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    // Exact for the small numerators and denominators produced here.
    let n: f64 = numer.to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = denom.to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// Complex-coefficient front end of [`faulhaber_r1_rational`]: the transform
/// is linear, so each power `z^tau` maps to its exact power-sum polynomial.
pub fn faulhaber_r1(r: &Polynomial) -> Polynomial {
    let deg = match r.degree() {
        Some(d) => d,
        None => return Polynomial::zero(),
    };
    let mut out = vec![Complex64::default(); deg + 2];
    for tau in 0..=deg {
        let coeff = r.coeff(tau);
        if coeff == Complex64::default() {
            continue;
        }
        for (j, p) in power_sum_poly(tau).iter().enumerate() {
            out[j] += coeff * rational_to_f64(p);
        }
    }
    Polynomial::new(out)
}

// ---------------------------------------------------------------------------
// Mellin transform
// ---------------------------------------------------------------------------

/// One numeric sample of a Mellin transform.
#[derive(Debug, Clone, Copy)]
pub struct MellinSample {
    pub s: Complex64,
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Numerical Mellin transform `integral_0^inf t^{s-1} g(t) dt`.
///
/// The substitution `t = exp(v)` maps the two endpoint singularities onto
/// exponential tails, which are summed panel by panel until they decay below
/// the tolerance; non-decaying tails are reported as divergence.
pub fn mellin_numeric<G>(g: G, s: Complex64, strip_hi: f64) -> Result<MellinSample>
where
    G: Fn(f64) -> Complex64,
{
    if !(s.re > 0.0 && s.re < strip_hi) {
        return Err(Error::InvalidInput(format!(
            "Re(s) = {} outside the strip (0, {strip_hi})",
            s.re
        )));
    }
    let integrand = |v: f64| (s * v).exp() * g(v.exp());
    let panel_tol = 1e-11;
    let mut value = Complex64::default();
    let mut err = 0.0f64;

    for dir in [1i64, -1] {
        let mut idle = 0usize;
        let mut prev_norm = f64::INFINITY;
        let mut grew = 0usize;
        let mut m = 0i64;
        loop {
            let (a, b) = if dir == 1 {
                (m as f64, (m + 1) as f64)
            } else {
                (-((m + 1) as f64), -(m as f64))
            };
            let (panel, panel_err) = adaptive_simpson(&integrand, a, b, panel_tol)?;
            value += panel;
            err += panel_err;
            let norm = panel.norm();
            if norm < 1e-13 * (1.0 + value.norm()) {
                idle += 1;
                if idle >= 2 {
                    err += norm;
                    break;
                }
            } else {
                idle = 0;
            }
            if m > 6 && norm > prev_norm * 0.999 {
                grew += 1;
                if grew >= 4 {
                    return Err(Error::Divergent(format!(
                        "tail panels do not decay (|panel| = {norm:.3e} at v = {a})"
                    )));
                }
            } else {
                grew = 0;
            }
            prev_norm = norm;
            m += 1;
            if m > 400 {
                return Err(Error::Divergent("tail truncation not reached".into()));
            }
        }
    }
    Ok(MellinSample {
        s,
        value,
        error_estimate: err,
    })
}

/// Fourier-side bridge `yhat(gamma) = 2 pi g(exp(-gamma))` associating a
/// Mellin subject `g` with the transform of the function whose values on the
/// imaginary axis are `(Mg)`.
pub fn mellin_bridge<G>(g: G, gamma: f64) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    2.0 * PI * g((-gamma).exp())
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
