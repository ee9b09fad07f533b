//! Number-theoretic and coefficient-algebra kernel.
//!
//! Provides the Möbius function, conversions between exponential-series and
//! Lambert-series coefficient sequences, the 2-adic arithmetical inverse,
//! reciprocals of trigonometric polynomials, and the reduction of
//! `sum chi(n) q^f(n)` series to rational functions when the Taylor
//! coefficients turn out periodic.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_MOBIUS_BOUND: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

/// Finite complex sequence indexed from 1.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, f64, f64)>", into = "Vec<(u64, f64, f64)>")]
pub struct CoeffSeq {
    entries: BTreeMap<u64, Complex64>,
}

impl CoeffSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, Complex64)>>(pairs: I) -> Result<Self> {
        let mut seq = Self::new();
        for (n, v) in pairs {
            seq.set(n, v)?;
        }
        Ok(seq)
    }

    /// Delta sequence concentrated at index `n`.
    pub fn delta(n: u64) -> Self {
        let mut seq = Self::new();
        seq.set(n, Complex64::new(1.0, 0.0)).unwrap();
        seq
    }

    pub fn set(&mut self, n: u64, value: Complex64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("sequence indices start at 1".into()));
        }
        if value == Complex64::default() {
            self.entries.remove(&n);
        } else {
            self.entries.insert(n, value);
        }
        Ok(())
    }

    pub fn get(&self, n: u64) -> Complex64 {
        self.entries.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.entries.iter().map(|(&n, &v)| (n, v))
    }

    pub fn max_index(&self) -> u64 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest absolute difference against `other` over the union of supports.
    pub fn max_deviation(&self, other: &CoeffSeq) -> f64 {
        let hi = self.max_index().max(other.max_index());
        (1..=hi)
            .map(|n| (self.get(n) - other.get(n)).norm())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<(u64, f64, f64)>> for CoeffSeq {
    type Error = Error;
    fn try_from(triples: Vec<(u64, f64, f64)>) -> Result<Self> {
        Self::from_pairs(
            triples
                .into_iter()
                .map(|(n, re, im)| (n, Complex64::new(re, im))),
        )
    }
}

impl From<CoeffSeq> for Vec<(u64, f64, f64)> {
    fn from(seq: CoeffSeq) -> Self {
        seq.iter().map(|(n, v)| (n, v.re, v.im)).collect()
    }
}

/// Complex sequence indexed from 0; the operand of [`two_adic_inverse`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwoAdicSeq {
    entries: BTreeMap<u32, Complex64>,
}

impl TwoAdicSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Complex64)>>(pairs: I) -> Self {
        let mut seq = Self::new();
        for (k, v) in pairs {
            seq.set(k, v);
        }
        seq
    }

    pub fn set(&mut self, k: u32, value: Complex64) {
        if value == Complex64::default() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, value);
        }
    }

    pub fn get(&self, k: u32) -> Complex64 {
        self.entries.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

/// Finite trigonometric polynomial `V(x) = sum_n c_n exp(-2*pi*i*n*x/T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyRepr", into = "TrigPolyRepr")]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, Complex64>,
    period: f64,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyRepr {
    period: f64,
    coeffs: Vec<(i64, f64, f64)>,
}

impl TrigPoly {
    /// Empty polynomial with period `2*pi`.
    pub fn new() -> Self {
        Self {
            coeffs: BTreeMap::new(),
            period: TAU,
        }
    }

    pub fn with_period(period: f64) -> Result<Self> {
        let valid = period > 0.0 && period.is_finite();
        if !valid {
            return Err(Error::InvalidInput("period must be positive".into()));
        }
        Ok(Self {
            coeffs: BTreeMap::new(),
            period,
        })
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut p = Self::new();
        for (n, v) in pairs {
            p.set(n, v);
        }
        p
    }

    /// Real-coefficient convenience constructor with period `2*pi`.
    pub fn from_real<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        Self::from_coeffs(pairs.into_iter().map(|(n, v)| (n, Complex64::new(v, 0.0))))
    }

    pub fn set(&mut self, n: i64, value: Complex64) {
        if value == Complex64::default() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, value);
        }
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &v)| (n, v))
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Base angular step `2*pi/T` of the frequency lattice.
    pub fn lattice_step(&self) -> f64 {
        TAU / self.period
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Evaluate `V(x)`; exact for any real `x`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let w = self.lattice_step();
        self.coeffs()
            .map(|(n, c)| c * Complex64::new(0.0, -(n as f64) * w * x).exp())
            .sum()
    }

    /// Evaluate the conjugate-lattice series `sum_n c_n exp(+i n w t)`.
    pub fn eval_conj_lattice(&self, t: f64) -> Complex64 {
        let w = self.lattice_step();
        self.coeffs()
            .map(|(n, c)| c * Complex64::new(0.0, (n as f64) * w * t).exp())
            .sum()
    }

    /// Coefficientwise product (convolution on the frequency lattice).
    pub fn convolve(&self, other: &TrigPoly) -> TrigPoly {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (n, a) in self.coeffs() {
            for (m, b) in other.coeffs() {
                *acc.entry(n + m).or_default() += a * b;
            }
        }
        let mut out = Self {
            coeffs: BTreeMap::new(),
            period: self.period,
        };
        for (n, v) in acc {
            out.set(n, v);
        }
        out
    }
}

impl Default for TrigPoly {
    fn default() -> Self {
        Self::new()
    }
}

impl TryFrom<TrigPolyRepr> for TrigPoly {
    type Error = Error;
    fn try_from(repr: TrigPolyRepr) -> Result<Self> {
        let mut p = TrigPoly::with_period(repr.period)?;
        for (n, re, im) in repr.coeffs {
            p.set(n, Complex64::new(re, im));
        }
        Ok(p)
    }
}

impl From<TrigPoly> for TrigPolyRepr {
    fn from(p: TrigPoly) -> Self {
        TrigPolyRepr {
            period: p.period,
            coeffs: p.coeffs().map(|(n, v)| (n, v.re, v.im)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Moebius function
// ---------------------------------------------------------------------------

/// Divisor-sum sieve of the Möbius function up to a fixed bound.
#[derive(Debug)]
pub struct MobiusSieve {
    mu: Vec<i32>,
}

impl MobiusSieve {
    pub fn new(bound: u64) -> Self {
        let n = bound as usize;
        let mut mu = vec![0i32; n + 1];
        if n >= 1 {
            mu[1] = 1;
            for i in 1..=n {
                let m = mu[i];
                if m != 0 {
                    let mut j = 2 * i;
                    while j <= n {
                        mu[j] -= m;
                        j += i;
                    }
                }
            }
        }
        Self { mu }
    }

    pub fn bound(&self) -> u64 {
        (self.mu.len() - 1) as u64
    }

    pub fn get(&self, n: u64) -> Result<i32> {
        if n == 0 {
            return Err(Error::InvalidInput("mobius is defined for n >= 1".into()));
        }
        if n > self.bound() {
            return Err(Error::InvalidInput(format!(
                "n = {n} exceeds the sieve bound {}",
                self.bound()
            )));
        }
        Ok(self.mu[n as usize])
    }
}

fn default_sieve() -> &'static MobiusSieve {
    static SIEVE: OnceLock<MobiusSieve> = OnceLock::new();
    SIEVE.get_or_init(|| MobiusSieve::new(DEFAULT_MOBIUS_BOUND))
}

/// Möbius function via the default sieve (bound 10^6).
pub fn mobius(n: u64) -> Result<i32> {
    default_sieve().get(n)
}

// ---------------------------------------------------------------------------
// Lambert conversions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambertDirection {
    /// `A -> B` with `B(n) = sum_{d|n} A(d) mu(n/d)`.
    TaylorToLambert,
    /// `B -> A` with `A(n) = sum_{d|n} B(d)`.
    LambertToTaylor,
}

/// Convert between exponential-series coefficients `A` and Lambert-series
/// coefficients `B`; the two directions are mutually inverse.
pub fn lambert_convert(seq: &CoeffSeq, dir: LambertDirection, n_max: u64) -> Result<CoeffSeq> {
    let mut out = CoeffSeq::new();
    match dir {
        LambertDirection::TaylorToLambert => {
            for n in 1..=n_max {
                let mut acc = Complex64::default();
                for d in divisors(n) {
                    let a = seq.get(d);
                    if a != Complex64::default() {
                        acc += a * mobius(n / d)? as f64;
                    }
                }
                out.set(n, acc)?;
            }
        }
        LambertDirection::LambertToTaylor => {
            for n in 1..=n_max {
                let acc: Complex64 = divisors(n).into_iter().map(|d| seq.get(d)).sum();
                out.set(n, acc)?;
            }
        }
    }
    Ok(out)
}

/// Coefficient action of the `nu`-th derivative on the per-divisor sequence:
/// `A_d -> A_d * (-d)^nu`.
pub fn lambert_derivative(seq: &CoeffSeq, nu: u32) -> CoeffSeq {
    let mut out = CoeffSeq::new();
    for (d, a) in seq.iter() {
        let factor = (-(d as f64)).powi(nu as i32);
        out.set(d, a * factor).unwrap();
    }
    out
}

/// Evaluate `f(x) = sum_n A_n exp(-n x)`.
pub fn eval_exp_series(seq: &CoeffSeq, x: f64) -> Complex64 {
    seq.iter().map(|(n, a)| a * (-(n as f64) * x).exp()).sum()
}

/// Evaluate the Lambert series `sum_n B_n / (exp(n x) - 1)` for `x > 0`.
pub fn eval_lambert_series(seq: &CoeffSeq, x: f64) -> Result<Complex64> {
    let valid = x > 0.0;
    if !valid {
        return Err(Error::InvalidInput(
            "lambert series evaluation needs x > 0".into(),
        ));
    }
    Ok(seq.iter().map(|(n, b)| b / ((n as f64 * x).exp_m1())).sum())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

// ---------------------------------------------------------------------------
// 2-adic inverse
// ---------------------------------------------------------------------------

/// Solve `sum_{2^k | n} b_k a_{n/2^k} = delta_{n,1}` for `a` on `1..=n_max`.
///
/// The system is triangular in increasing `n`; only `b_0` is ever divided by.
pub fn two_adic_inverse(b: &TwoAdicSeq, n_max: u64) -> Result<CoeffSeq> {
    let b0 = b.get(0);
    if b0 == Complex64::default() {
        return Err(Error::SingularInversion);
    }
    let mut a = CoeffSeq::new();
    a.set(1, 1.0 / b0)?;
    for n in 2..=n_max {
        let mut acc = Complex64::default();
        let mut k = 1u32;
        let mut shifted = n;
        while shifted.is_multiple_of(2) {
            shifted /= 2;
            let bk = b.get(k);
            if bk != Complex64::default() {
                acc += bk * a.get(shifted);
            }
            k += 1;
        }
        a.set(n, -acc / b0)?;
    }
    Ok(a)
}

/// Largest deviation of the defining convolution identity over `1..=n_max`.
pub fn two_adic_identity_deviation(b: &TwoAdicSeq, a: &CoeffSeq, n_max: u64) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let mut acc = b.get(0) * a.get(n);
        let mut k = 1u32;
        let mut shifted = n;
        while shifted.is_multiple_of(2) {
            shifted /= 2;
            acc += b.get(k) * a.get(shifted);
            k += 1;
        }
        let target = if n == 1 { 1.0 } else { 0.0 };
        worst = worst.max((acc - target).norm());
    }
    worst
}

// ---------------------------------------------------------------------------
// trig-polynomial reciprocal
// ---------------------------------------------------------------------------

/// Truncated reciprocal of a trigonometric polynomial.
#[derive(Debug, Clone)]
pub struct Reciprocal {
    /// Coefficients of `1/V` on the frequency lattice, shift included.
    pub poly: TrigPoly,
    /// Lowest frequency `n0` factored out of `V` before inversion.
    pub shift: i64,
    /// `max |V(x) * V*(x) - 1|` on a 256-point grid.
    pub grid_residual: f64,
}

/// Compute the reciprocal series of `V` to truncation order `K`.
///
/// `V` is factored as `exp(-i n0 w x) * W` with `W` having a nonzero constant
/// coefficient; the convolution identity `sum_k c_k c*_{m-k} = delta_{m,0}`
/// then holds exactly for `0 <= m <= K` on the factored part.
pub fn reciprocal_trigpoly(v: &TrigPoly, order: usize) -> Result<Reciprocal> {
    let n0 = v
        .min_index()
        .ok_or_else(|| Error::InvalidInput("all coefficients zero".into()))?;
    let span = (v.max_index().unwrap() - n0) as usize;
    let mut w = vec![Complex64::default(); span + 1];
    for (n, c) in v.coeffs() {
        w[(n - n0) as usize] = c;
    }
    if w[0] == Complex64::default() {
        return Err(Error::InvalidInput(
            "factored constant term vanishes".into(),
        ));
    }
    let mut wstar = vec![Complex64::default(); order + 1];
    wstar[0] = 1.0 / w[0];
    for m in 1..=order {
        let mut acc = Complex64::default();
        for k in 1..=m.min(span) {
            acc += w[k] * wstar[m - k];
        }
        wstar[m] = -acc / w[0];
    }
    let mut poly = TrigPoly::with_period(v.period())?;
    for (m, &c) in wstar.iter().enumerate() {
        poly.set(m as i64 - n0, c);
    }
    let mut grid_residual = 0.0f64;
    for i in 0..256 {
        let x = v.period() * i as f64 / 256.0;
        let r = (v.eval(x) * poly.eval(x) - 1.0).norm();
        grid_residual = grid_residual.max(r);
    }
    Ok(Reciprocal {
        poly,
        shift: n0,
        grid_residual,
    })
}

// ---------------------------------------------------------------------------
// Lambert-to-rational reduction
// ---------------------------------------------------------------------------

/// Rational closed form `theta(q) = (1 - q^T0)^{-1} sum_{n=1}^{T0} A(n) q^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTheta {
    /// Numerator coefficients for exponents `1..=period`.
    pub numerator: Vec<Complex64>,
    pub period: u64,
}

impl RationalTheta {
    pub fn eval(&self, q: Complex64) -> Complex64 {
        let mut num = Complex64::default();
        let mut qp = Complex64::new(1.0, 0.0);
        for a in &self.numerator {
            qp *= q;
            num += a * qp;
        }
        num / (1.0 - q.powu(self.period as u32))
    }
}

/// Result of the Lambert-series reduction of `theta(q) = sum chi(n) q^f(n)`.
#[derive(Debug, Clone)]
pub struct LambertRational {
    /// `B(n) = sum_{f(d)|n} chi(d) mu(n/f(d))`.
    pub b: CoeffSeq,
    /// `A(n) = sum_{d|n} B(d)`; the Taylor coefficients of `theta`.
    pub a: CoeffSeq,
    /// Smallest detected period of `A` on `[1, n_max]`, if any.
    pub period: Option<u64>,
    pub rational: Option<RationalTheta>,
}

/// Reduce `theta(q) = sum_n chi(n) q^{f(n)}` through its Lambert form and
/// detect whether the Taylor coefficients are periodic.
pub fn lambert_rational<F>(chi: &CoeffSeq, f: F, n_max: u64) -> Result<LambertRational>
where
    F: Fn(u64) -> u64,
{
    // Tabulate f on the range that can reach n_max, validating monotonicity.
    let mut fmap: Vec<(u64, u64)> = Vec::new();
    let mut prev = 0u64;
    for d in 1..=n_max {
        let fd = f(d);
        if fd == 0 {
            return Err(Error::InvalidInput("f must take positive values".into()));
        }
        if fd <= prev {
            return Err(Error::InvalidInput("f must be strictly increasing".into()));
        }
        prev = fd;
        if fd > n_max {
            break;
        }
        fmap.push((d, fd));
    }
    let mut b = CoeffSeq::new();
    for n in 1..=n_max {
        let mut acc = Complex64::default();
        for &(d, fd) in &fmap {
            if n % fd == 0 {
                let x = chi.get(d);
                if x != Complex64::default() {
                    acc += x * mobius(n / fd)? as f64;
                }
            }
        }
        b.set(n, acc)?;
    }
    let a = lambert_convert(&b, LambertDirection::LambertToTaylor, n_max)?;

    let period = detect_period(&a, n_max);
    let rational = period.map(|t0| RationalTheta {
        numerator: (1..=t0).map(|n| a.get(n)).collect(),
        period: t0,
    });
    Ok(LambertRational {
        b,
        a,
        period,
        rational,
    })
}

fn detect_period(a: &CoeffSeq, n_max: u64) -> Option<u64> {
    const TOL: f64 = 1e-12;
    'outer: for t0 in 1..=n_max / 2 {
        for n in 1..=(n_max - t0) {
            if (a.get(n + t0) - a.get(n)).norm() > TOL {
                continue 'outer;
            }
        }
        return Some(t0);
    }
    None
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mobius_by_factorization(n: u64) -> i32 {
        let mut n = n;
        let mut count = 0;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                count += 1;
            }
            p += 1;
        }
        if n > 1 {
            count += 1;
        }
        if count % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn random_seq(rng: &mut ChaCha8Rng, support: u64) -> CoeffSeq {
        let mut seq = CoeffSeq::new();
        for n in 1..=support {
            seq.set(n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .unwrap();
        }
        seq
    }

    #[test]
    fn mobius_basics() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn mobius_matches_factorization_oracle() {
        for n in 1..=1000 {
            assert_eq!(mobius(n).unwrap(), mobius_by_factorization(n), "n = {n}");
        }
    }

    #[test]
    fn mobius_multiplicative_on_coprime_pairs() {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        for m in 1..=1000u64 {
            for n in 1..=(1000 / m) {
                if gcd(m, n) == 1 {
                    assert_eq!(
                        mobius(m * n).unwrap(),
                        mobius(m).unwrap() * mobius(n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn mobius_sieve_bound_rejected() {
        let sieve = MobiusSieve::new(100);
        assert!(sieve.get(101).is_err());
        assert_eq!(sieve.get(30).unwrap(), -1);
    }

    #[test]
    fn lambert_delta_gives_mobius() {
        let b =
            lambert_convert(&CoeffSeq::delta(1), LambertDirection::TaylorToLambert, 64).unwrap();
        for n in 1..=64 {
            assert_eq!(b.get(n).re, mobius(n).unwrap() as f64);
            assert_eq!(b.get(n).im, 0.0);
        }
    }

    #[test]
    fn lambert_delta_back_is_all_ones() {
        let a =
            lambert_convert(&CoeffSeq::delta(1), LambertDirection::LambertToTaylor, 32).unwrap();
        for n in 1..=32 {
            assert_eq!(a.get(n).re, 1.0);
        }
    }

    #[test]
    fn lambert_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_seq(&mut rng, 64);
        let b = lambert_convert(&a, LambertDirection::TaylorToLambert, 64).unwrap();
        let back = lambert_convert(&b, LambertDirection::LambertToTaylor, 64).unwrap();
        assert!(a.max_deviation(&back) < 1e-13);
    }

    // The two series agree as functions: expanding 1/(e^{nx}-1) as a geometric
    // series and collecting e^{-kx} terms reproduces the divisor sums.
    #[test]
    fn lambert_series_equals_exp_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_seq(&mut rng, 8);
        let b = lambert_convert(&a, LambertDirection::TaylorToLambert, 64).unwrap();
        for &x in &[0.9, 2.0, 3.5] {
            let direct = eval_exp_series(&a, x);
            let lambert = eval_lambert_series(&b, x).unwrap();
            assert!((direct - lambert).norm() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn lambert_derivative_order_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_seq(&mut rng, 16);
        assert_eq!(lambert_derivative(&a, 0), a);
    }

    #[test]
    fn lambert_derivative_first_order_pattern() {
        let mut ones = CoeffSeq::new();
        for d in 1..=8 {
            ones.set(d, c(1.0, 0.0)).unwrap();
        }
        let d1 = lambert_derivative(&ones, 1);
        for d in 1..=8 {
            assert_eq!(d1.get(d).re, -(d as f64));
        }
    }

    #[test]
    fn lambert_derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_seq(&mut rng, 8);
        let x = 2.0;
        let h = 1e-3;
        for nu in 1..=2u32 {
            // 4th-order central difference of the direct series.
            let fd = if nu == 1 {
                (-eval_exp_series(&a, x + 2.0 * h) + eval_exp_series(&a, x + h) * 8.0
                    - eval_exp_series(&a, x - h) * 8.0
                    + eval_exp_series(&a, x - 2.0 * h))
                    / (12.0 * h)
            } else {
                (-eval_exp_series(&a, x + 2.0 * h) + eval_exp_series(&a, x + h) * 16.0
                    - eval_exp_series(&a, x) * 30.0
                    + eval_exp_series(&a, x - h) * 16.0
                    - eval_exp_series(&a, x - 2.0 * h))
                    / (12.0 * h * h)
            };
            let transformed = lambert_derivative(&a, nu);
            let b = lambert_convert(&transformed, LambertDirection::TaylorToLambert, 64).unwrap();
            let lambert = eval_lambert_series(&b, x).unwrap();
            assert!((fd - lambert).norm() < 1e-6, "nu = {nu}");
        }
    }

    #[test]
    fn two_adic_identity_element() {
        let b = TwoAdicSeq::from_pairs([(0, c(1.0, 0.0))]);
        let a = two_adic_inverse(&b, 32).unwrap();
        assert_eq!(a.get(1), c(1.0, 0.0));
        for n in 2..=32 {
            assert_eq!(a.get(n), Complex64::default());
        }
    }

    #[test]
    fn two_adic_geometric_pattern() {
        let beta = c(0.3, -0.7);
        let b = TwoAdicSeq::from_pairs([(0, c(1.0, 0.0)), (1, beta)]);
        let a = two_adic_inverse(&b, 128).unwrap();
        for n in 1..=128u64 {
            let expect = if n.is_power_of_two() {
                (-beta).powu(n.trailing_zeros())
            } else {
                Complex64::default()
            };
            assert!((a.get(n) - expect).norm() < 1e-14, "n = {n}");
        }
        assert!(two_adic_identity_deviation(&b, &a, 128) < 1e-14);
    }

    #[test]
    fn two_adic_random_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let b = TwoAdicSeq::from_pairs((0..6).map(|k| {
                (
                    k,
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        + if k == 0 { c(1.5, 0.0) } else { c(0.0, 0.0) },
                )
            }));
            let a = two_adic_inverse(&b, 128).unwrap();
            assert!(two_adic_identity_deviation(&b, &a, 128) < 1e-14);
        }
    }

    #[test]
    fn two_adic_rejects_singular() {
        let b = TwoAdicSeq::from_pairs([(1, c(1.0, 0.0))]);
        assert!(matches!(
            two_adic_inverse(&b, 8),
            Err(Error::SingularInversion)
        ));
    }

    #[test]
    fn reciprocal_of_one() {
        let v = TrigPoly::from_real([(0, 1.0)]);
        let r = reciprocal_trigpoly(&v, 8).unwrap();
        assert_eq!(r.shift, 0);
        assert_eq!(r.poly.coeff(0), c(1.0, 0.0));
        assert!(r.grid_residual < 1e-15);
    }

    #[test]
    fn reciprocal_geometric_series() {
        let v = TrigPoly::from_real([(0, 1.0), (1, 0.5)]);
        let k = 24;
        let r = reciprocal_trigpoly(&v, k).unwrap();
        for n in 0..=k as i64 {
            let expect = (-0.5f64).powi(n as i32);
            assert!((r.poly.coeff(n) - expect).norm() < 1e-13, "n = {n}");
        }
        // residual bound 2 |eps|^{K+1} / (1 - |eps|)
        assert!(r.grid_residual <= 2.0 * 0.5f64.powi(k as i32 + 1) / 0.5 + 1e-15);
    }

    #[test]
    fn reciprocal_of_pure_harmonic_records_shift() {
        let v = TrigPoly::from_real([(1, 1.0)]);
        let r = reciprocal_trigpoly(&v, 4).unwrap();
        assert_eq!(r.shift, 1);
        assert_eq!(r.poly.coeff(-1), c(1.0, 0.0));
        assert!(r.grid_residual < 1e-15);
    }

    #[test]
    fn reciprocal_rejects_zero() {
        assert!(reciprocal_trigpoly(&TrigPoly::new(), 4).is_err());
    }

    proptest! {
        #[test]
        fn reciprocal_convolution_identity(eps_re in -0.4f64..0.4, eps_im in -0.4f64..0.4,
                                           eps2_re in -0.2f64..0.2) {
            let v = TrigPoly::from_coeffs([
                (0, c(1.0, 0.0)),
                (1, c(eps_re, eps_im)),
                (2, c(eps2_re, 0.0)),
            ]);
            let k = 20usize;
            let r = reciprocal_trigpoly(&v, k).unwrap();
            let prod = v.convolve(&r.poly);
            for m in 0..=k as i64 - 2 {
                let target = if m == 0 { 1.0 } else { 0.0 };
                prop_assert!((prod.coeff(m) - target).norm() < 1e-10);
            }
        }

        #[test]
        fn mobius_range(n in 1u64..100_000) {
            let m = mobius(n).unwrap();
            prop_assert!((-1..=1).contains(&m));
        }
    }

    fn theta_direct(chi: &CoeffSeq, f: impl Fn(u64) -> u64, q: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for n in 1..=4000 {
            let x = chi.get(n);
            let term = q.powu(f(n) as u32);
            if term.norm() < 1e-18 {
                break;
            }
            acc += x * term;
        }
        acc
    }

    #[test]
    fn lambert_rational_geometric() {
        let mut chi = CoeffSeq::new();
        for n in 1..=64 {
            chi.set(n, c(1.0, 0.0)).unwrap();
        }
        let r = lambert_rational(&chi, |n| n, 64).unwrap();
        for n in 1..=64 {
            assert!((r.a.get(n) - 1.0).norm() < 1e-13);
        }
        assert_eq!(r.period, Some(1));
        let theta = r.rational.unwrap();
        let q = c(0.25, 0.1);
        assert!((theta.eval(q) - q / (1.0 - q)).norm() < 1e-13);
    }

    #[test]
    fn lambert_rational_single_term() {
        let chi = CoeffSeq::delta(1);
        let r = lambert_rational(&chi, |n| n, 64).unwrap();
        for n in 1..=64 {
            let mu = mobius(n).unwrap() as f64;
            assert!((r.b.get(n).re - mu).abs() < 1e-13);
        }
        assert!((r.a.get(1) - 1.0).norm() < 1e-13);
        for n in 2..=64 {
            assert!(r.a.get(n).norm() < 1e-13);
        }
        // theta(q) = q: A is not periodic, so no rational form is reported.
        assert_eq!(r.period, None);
        let q = c(0.3, 0.0);
        assert!((theta_direct(&chi, |n| n, q) - q).norm() < 1e-14);
    }

    #[test]
    fn lambert_rational_even_exponents() {
        let mut chi = CoeffSeq::new();
        for n in 1..=32 {
            chi.set(n, c(1.0, 0.0)).unwrap();
        }
        let f = |n: u64| 2 * n;
        let r = lambert_rational(&chi, f, 64).unwrap();
        assert_eq!(r.period, Some(2));
        let theta = r.rational.unwrap();
        for &q in &[c(0.5, 0.0), c(-0.35, 0.2), c(0.0, 0.5)] {
            let direct = theta_direct(&chi, f, q);
            assert!((theta.eval(q) - direct).norm() < 1e-12, "q = {q}");
        }
    }

    #[test]
    fn lambert_rational_rejects_non_increasing() {
        let chi = CoeffSeq::delta(1);
        assert!(lambert_rational(&chi, |_| 3, 16).is_err());
    }

    #[test]
    fn coeff_seq_serde_triples() {
        let mut seq = CoeffSeq::new();
        seq.set(2, c(0.5, -1.0)).unwrap();
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(json, "[[2,0.5,-1.0]]");
        let back: CoeffSeq = serde_json::from_str(&json).unwrap();
        assert_eq!(back, seq);
    }
}
