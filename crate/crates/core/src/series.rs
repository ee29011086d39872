//! Power-series solutions of the family's second-order equation
//!
//! ```text
//! w'' - 2 (z + 4z / (1 + 2z^2)) w' + 2 n w = 0
//! ```
//!
//! for an arbitrary degree parameter `n`. The seed `c_0 = c_1 = 1` generates
//! a two-parameter family whose even and odd parts each solve the equation
//! separately; all coefficients are exact rationals, produced either by the
//! four-term recurrence or by closed forms, and the two routes are checked
//! against each other exactly in the test suite.
//!
//! The even projection terminates exactly when `n` is an admissible even
//! degree, the odd projection exactly when `n` is an admissible odd degree;
//! the terminating projection is proportional to the corresponding
//! polynomial family member, with proportionality constants given by
//! [`m1`]/[`m2`]. The full series (both parities together) is the canonical
//! second, non-polynomial solution.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hermite::GapSolution;
use crate::poly::RationalPoly;
use crate::special::{factorial, SpecialError};
use crate::{rational_to_f64, Rational, C64};

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("constant is defined for odd degrees >= 3, got {0}")]
    NeedOddDegree(u64),
    #[error("constant is defined for even degrees != 2, got {0}")]
    NeedEvenDegree(u64),
    #[error("degree {0} is excluded")]
    ExcludedDegree(u64),
}

/// Maclaurin coefficients `c_0 .. c_{len-1}` of the seed solution
/// (`c_0 = c_1 = 1`), by the four-term recurrence
/// `k (k-1) c_k = -2 ((k-2)(k-8) + n) c_{k-2} - 4 (n - k + 4) c_{k-4}`.
pub fn beta_coefficients(n: u64, len: usize) -> Vec<Rational> {
    let n_i = BigInt::from(n);
    let mut c: Vec<Rational> = Vec::with_capacity(len);
    let low = [
        Rational::one(),
        Rational::one(),
        -Rational::from_integer(n_i.clone()),
        -Rational::new(n_i.clone() - BigInt::from(5), BigInt::from(3)),
    ];
    for v in low.into_iter().take(len) {
        c.push(v);
    }
    for k in c.len()..len {
        let k_i = BigInt::from(k);
        let a = BigInt::from(-2) * ((&k_i - 2) * (&k_i - 8) + &n_i);
        let b = BigInt::from(-4) * (&n_i - &k_i + 4);
        let num = Rational::from_integer(a) * &c[k - 2] + Rational::from_integer(b) * &c[k - 4];
        c.push(num / Rational::from_integer(&k_i * (&k_i - 1)));
    }
    c
}

/// Closed form for the even coefficient `c_{2k}`:
/// `(-1)^k n (n - ((2k-1)^2 + 1)) prod_{j=1}^{k-2} (n - 2(1+j))`
/// over `(2k)! / 2^k`, with the usual empty-product convention. The cases
/// `k = 0, 1` are the seed values `1` and `-n`.
pub fn even_coefficient_closed_form(n: u64, k: u32) -> Rational {
    let n_i = BigInt::from(n);
    match k {
        0 => Rational::one(),
        1 => -Rational::from_integer(n_i),
        _ => {
            let sign = if k.is_multiple_of(2) { 1 } else { -1 };
            let root = &n_i - BigInt::from((2 * k as i64 - 1).pow(2) + 1);
            let mut num = BigInt::from(sign) * &n_i * root;
            for j in 1..=(k as i64 - 2) {
                num *= &n_i - BigInt::from(2 * (1 + j));
            }
            let den = factorial(2 * k as u64) / BigInt::from(2).pow(k);
            Rational::new(num, den)
        }
    }
}

/// Closed form for the odd coefficient `c_{2k-1}` (`k >= 1`):
/// `(-1)^{k+1} (n - ((2(k-1))^2 + 1)) prod_{j=1}^{k-2} (n - 2(1+j) + 1)`
/// over `(2k-1)! / 2^{k-1}`. `k = 1` is the seed value `1`.
pub fn odd_coefficient_closed_form(n: u64, k: u32) -> Rational {
    assert!(k >= 1, "odd coefficients start at z^1, i.e. k = 1");
    let n_i = BigInt::from(n);
    match k {
        1 => Rational::one(),
        _ => {
            let sign = if k.is_multiple_of(2) { -1 } else { 1 };
            let root = &n_i - BigInt::from((2 * (k as i64 - 1)).pow(2) + 1);
            let mut num = BigInt::from(sign) * root;
            for j in 1..=(k as i64 - 2) {
                num *= &n_i - BigInt::from(2 * (1 + j) - 1);
            }
            let den = factorial(2 * k as u64 - 1) / BigInt::from(2).pow(k - 1);
            Rational::new(num, den)
        }
    }
}

/// Parity projection selecting which Maclaurin coefficients survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    /// Even powers only.
    Even,
    /// Odd powers only.
    Odd,
    /// Both parities: the seed solution itself.
    Full,
}

impl SolutionKind {
    fn accepts(self, index: usize) -> bool {
        match self {
            SolutionKind::Even => index.is_multiple_of(2),
            SolutionKind::Odd => !index.is_multiple_of(2),
            SolutionKind::Full => true,
        }
    }
}

/// A truncated Maclaurin solution of the family's equation: exact rational
/// coefficients, with termination (polynomial-ness) detected from the
/// coefficient stream itself.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    n: u64,
    kind: SolutionKind,
    coeffs: Vec<Rational>,
    coeffs_f64: Vec<f64>,
    polynomial_degree: Option<u32>,
}

/// Truncation adequate for evaluation near the origin (|z| up to ~2).
pub fn default_truncation(n: u64) -> usize {
    (n as usize + 10).max(40)
}

/// Truncation adequate for |z| up to `r`: past index `2r^2` the terms of
/// these order-two entire functions decay factorially, and the added margin
/// pushes the tail below double precision.
pub fn truncation_for_radius(n: u64, r: f64) -> usize {
    (n as usize).max(40) + (2.0 * r * r).ceil() as usize + 40
}

fn build(kind: SolutionKind, n: u64, truncation_order: usize) -> SeriesSolution {
    // Termination is decided by a run of vanishing same-parity coefficients
    // beyond index n, long enough (8 checks) to rule out the isolated zeros
    // that the closed forms do produce at interior indices.
    let detect_len = n as usize + 18;
    let raw = beta_coefficients(n, (truncation_order + 1).max(detect_len));
    let coeffs: Vec<Rational> = raw
        .iter()
        .take(truncation_order + 1)
        .enumerate()
        .map(|(k, c)| {
            if kind.accepts(k) {
                c.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let tail_zero = (n as usize + 1..detect_len)
        .filter(|&k| kind.accepts(k))
        .all(|k| raw[k].is_zero());
    let polynomial_degree = if tail_zero && kind != SolutionKind::Full {
        (0..=n as usize)
            .filter(|&k| kind.accepts(k) && !raw[k].is_zero())
            .map(|k| k as u32)
            .max()
    } else {
        None
    };
    let coeffs_f64 = coeffs.iter().map(rational_to_f64).collect();
    SeriesSolution {
        n,
        kind,
        coeffs,
        coeffs_f64,
        polynomial_degree,
    }
}

/// Even-parity solution for degree parameter `n`.
pub fn mu(n: u64, truncation_order: usize) -> SeriesSolution {
    build(SolutionKind::Even, n, truncation_order)
}

/// Odd-parity solution for degree parameter `n`.
pub fn nu(n: u64, truncation_order: usize) -> SeriesSolution {
    build(SolutionKind::Odd, n, truncation_order)
}

/// The full seed solution (both parities); never a polynomial, and the
/// canonical companion to the normalized solution in the general linear
/// combination `k1 alpha + k2 beta`.
pub fn beta(n: u64, truncation_order: usize) -> SeriesSolution {
    build(SolutionKind::Full, n, truncation_order)
}

impl SeriesSolution {
    pub fn degree_parameter(&self) -> u64 {
        self.n
    }

    pub fn kind(&self) -> SolutionKind {
        self.kind
    }

    /// Highest stored coefficient index.
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact coefficient of `z^k` (zero beyond the truncation).
    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `Some(d)` when the series terminates: the solution is a polynomial
    /// of degree `d`.
    pub fn polynomial_degree(&self) -> Option<u32> {
        self.polynomial_degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial_degree.is_some()
    }

    /// The terminating series as an exact polynomial; `None` when the
    /// series does not terminate or the truncation cut it off.
    pub fn to_polynomial(&self) -> Option<RationalPoly> {
        let deg = self.polynomial_degree?;
        if (deg as usize) > self.truncation_order() {
            return None;
        }
        let mut p = RationalPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate().take(deg as usize + 1) {
            p.add_term(k as u32, c.clone());
        }
        Some(p)
    }

    fn derived_coeffs_f64(&self, order: u32) -> Vec<f64> {
        let m = order as usize;
        (m..self.coeffs_f64.len())
            .map(|k| {
                let mut f = self.coeffs_f64[k];
                for i in 0..m {
                    f *= (k - i) as f64;
                }
                f
            })
            .collect()
    }

    /// Value of the `order`-th derivative (order 0, 1 or 2) at `z`, plain
    /// double-precision Horner evaluation.
    pub fn eval_derivative(&self, order: u32, z: C64) -> C64 {
        let d = self.derived_coeffs_f64(order);
        let mut acc = C64::new(0.0, 0.0);
        for &c in d.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Forward rounding-error scale of [`Self::eval_derivative`]: roughly
    /// machine epsilon times the sum of term magnitudes. Far from the real
    /// axis the series cancels heavily and this dominates the true error.
    pub fn eval_error_bound(&self, order: u32, z: C64) -> f64 {
        let d = self.derived_coeffs_f64(order);
        let r = z.norm();
        let mut acc = 0.0f64;
        for &c in d.iter().rev() {
            acc = acc * r + c.abs();
        }
        2.0 * d.len() as f64 * f64::EPSILON * acc
    }

    /// Value of the `order`-th derivative at `z` by exact rational
    /// arithmetic (the double-precision point is taken at face value),
    /// rounded only once at the end. Immune to the cancellation that limits
    /// [`Self::eval_derivative`] at points with large `|Im z|`.
    pub fn eval_derivative_precise(&self, order: u32, z: C64) -> C64 {
        let zr = Rational::from_float(z.re).expect("finite real part");
        let zi = Rational::from_float(z.im).expect("finite imaginary part");
        let m = order as usize;
        let (mut ar, mut ai) = (Rational::zero(), Rational::zero());
        for k in (m..self.coeffs.len()).rev() {
            let mut c = self.coeffs[k].clone();
            for i in 0..m {
                c *= Rational::from_integer(BigInt::from(k - i));
            }
            let new_ar = &ar * &zr - &ai * &zi + c;
            let new_ai = &ar * &zi + &ai * &zr;
            ar = new_ar;
            ai = new_ai;
        }
        C64::new(rational_to_f64(&ar), rational_to_f64(&ai))
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.eval_derivative(0, z)
    }

    pub fn eval_d1(&self, z: C64) -> C64 {
        self.eval_derivative(1, z)
    }

    pub fn eval_d2(&self, z: C64) -> C64 {
        self.eval_derivative(2, z)
    }
}

fn require_odd(n: u64) -> Result<(), SeriesError> {
    if n % 2 == 1 && n >= 3 {
        Ok(())
    } else {
        Err(SeriesError::NeedOddDegree(n))
    }
}

fn require_even(n: u64) -> Result<(), SeriesError> {
    if n.is_multiple_of(2) && n != 2 {
        Ok(())
    } else {
        Err(SeriesError::NeedEvenDegree(n))
    }
}

fn p_factor(n: u64) -> BigInt {
    let n = BigInt::from(n);
    (&n - 1) * (&n - 2)
}

/// Matching constant between the normalized polynomial member and the odd
/// series for odd degrees `n >= 3`: `hhat_n = m1(n) nu_n`, with
/// `m1(n) = (-1)^{(n+1)/2} n! 2^{(n+1)/2} / ((n-1)(n-2) prod)` where `prod`
/// runs over `n - 2(1+j) + 1` for `j = 1 .. (n-3)/2`.
pub fn m1(n: u64) -> Result<Rational, SeriesError> {
    require_odd(n)?;
    let sign = if n.div_ceil(2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let num = BigInt::from(sign) * factorial(n) * BigInt::from(2).pow((n as u32).div_ceil(2));
    let mut den = p_factor(n);
    for j in 1..=(n as i64 - 3) / 2 {
        den *= BigInt::from(n as i64 - 2 * (1 + j) + 1);
    }
    Ok(Rational::new(num, den))
}

/// Matching constant for even degrees: `hhat_n = m2(n) mu_n`, with
/// `m2(n) = (-1)^{(n+2)/2} n! 2^{n/2} / (n (n-1)(n-2) prod)` for `n >= 4`
/// (`prod` over `n - 2(1+j)`, `j = 1 .. (n-4)/2`) and `m2(0) = 1`, the
/// value consistent with `hhat_0 = mu_0 = 1`.
pub fn m2(n: u64) -> Result<Rational, SeriesError> {
    require_even(n)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    let sign = if ((n + 2) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let num = BigInt::from(sign) * factorial(n) * BigInt::from(2).pow(n as u32 / 2);
    let mut den = BigInt::from(n) * p_factor(n);
    for j in 1..=(n as i64 - 4) / 2 {
        den *= BigInt::from(n as i64 - 2 * (1 + j));
    }
    Ok(Rational::new(num, den))
}

/// The same constant through the gamma function:
/// `m2(n) = (-1)^{(n+2)/2} 2^{n-1} Gamma((n-1)/2) / sqrt(pi)`,
/// evaluated exactly (the sqrt(pi) factors cancel). Agrees with [`m2`]
/// on every even degree including `n = 0`.
pub fn m2_gamma_form(n: u64) -> Result<Rational, SeriesError> {
    require_even(n)?;
    let coeff = crate::special::gamma_half_coeff(n as i64 - 1)
        .expect("n - 1 is odd for even n, so the argument is a half-integer");
    let sign = if ((n + 2) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let pow2 = if n >= 1 {
        Rational::from_integer(BigInt::from(2).pow(n as u32 - 1))
    } else {
        Rational::new(BigInt::one(), BigInt::from(2))
    };
    Ok(Rational::from_integer(BigInt::from(sign)) * pow2 * coeff)
}

/// Normalizing constant from the raw polynomial member to the series side:
/// `alpha_n = m3(n) hhat_n` with `m3 = 1/m1` (odd), `1/m2` (even), and `1`
/// on the two excluded degrees, where `alpha` is taken to be the
/// corresponding non-polynomial gap solution directly.
pub fn m3(n: u64) -> Result<Rational, SeriesError> {
    if n == 1 || n == 2 {
        return Ok(Rational::one());
    }
    let m = if n % 2 == 1 { m1(n)? } else { m2(n)? };
    Ok(Rational::one() / m)
}

/// Squared-norm coefficient of `nu_n` against the normalized weight
/// `exp(-x^2)/(1+2x^2)^2`, as the exact multiple of sqrt(pi):
/// `(n-1)(n-2) prod^2 / (2 n!)`.
pub fn nu_norm_sqrtpi_coeff(n: u64) -> Result<Rational, SeriesError> {
    require_odd(n)?;
    let mut prod = BigInt::one();
    for j in 1..=(n as i64 - 3) / 2 {
        prod *= BigInt::from(n as i64 - 2 * (1 + j) + 1);
    }
    Ok(Rational::new(
        p_factor(n) * (&prod * &prod),
        BigInt::from(2) * factorial(n),
    ))
}

/// Squared-norm coefficient of `mu_n` (even `n != 2`) against the same
/// weight: `n (n-1)(n-2) prod^2 / (n-1)!`.
pub fn mu_norm_sqrtpi_coeff(n: u64) -> Result<Rational, SeriesError> {
    require_even(n)?;
    if n == 0 {
        // mu_0 = hhat_0 = 1, so this is the bare weight mass, sqrt(pi)/2.
        return Ok(Rational::new(BigInt::one(), BigInt::from(2)));
    }
    let mut prod = BigInt::one();
    for j in 1..=(n as i64 - 4) / 2 {
        prod *= BigInt::from(n as i64 - 2 * (1 + j));
    }
    Ok(Rational::new(
        BigInt::from(n) * p_factor(n) * (&prod * &prod),
        factorial(n - 1),
    ))
}

/// The normalized solution `alpha_n`: the parity series matching the
/// degree's parity when that series terminates, and the closed-form gap
/// solution on the two excluded degrees.
#[derive(Debug, Clone)]
pub enum NormalizedSolution {
    Series(SeriesSolution),
    Gap(GapSolution),
}

/// Construct `alpha_n` with the given series truncation (ignored for the
/// two gap degrees, whose solutions are closed-form).
pub fn alpha(n: u64, truncation_order: usize) -> NormalizedSolution {
    match n {
        1 => NormalizedSolution::Gap(GapSolution::One),
        2 => NormalizedSolution::Gap(GapSolution::Two),
        _ if n.is_multiple_of(2) => NormalizedSolution::Series(mu(n, truncation_order)),
        _ => NormalizedSolution::Series(nu(n, truncation_order)),
    }
}

impl NormalizedSolution {
    pub fn eval(&self, z: C64) -> Result<C64, SpecialError> {
        match self {
            NormalizedSolution::Series(s) => Ok(s.eval(z)),
            NormalizedSolution::Gap(g) => g.eval(z),
        }
    }

    pub fn eval_d1(&self, z: C64) -> Result<C64, SpecialError> {
        match self {
            NormalizedSolution::Series(s) => Ok(s.eval_d1(z)),
            NormalizedSolution::Gap(g) => g.eval_d1(z),
        }
    }

    pub fn eval_d2(&self, z: C64) -> Result<C64, SpecialError> {
        match self {
            NormalizedSolution::Series(s) => Ok(s.eval_d2(z)),
            NormalizedSolution::Gap(g) => g.eval_d2(z),
        }
    }

    /// Cancellation-free evaluation (exact rational summation for the
    /// series arm; the gap solutions are already closed-form).
    pub fn eval_derivative_precise(&self, order: u32, z: C64) -> Result<C64, SpecialError> {
        match self {
            NormalizedSolution::Series(s) => Ok(s.eval_derivative_precise(order, z)),
            NormalizedSolution::Gap(g) => match order {
                0 => g.eval(z),
                1 => g.eval_d1(z),
                2 => g.eval_d2(z),
                _ => unreachable!("only derivatives up to order 2 are provided"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exceptional::hhat_polynomial;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn seed_coefficients_match_hand_values() {
        // c_0..c_4 for n = 7: 1, 1, -7, -2/3, 7(7-10)/6 = -7/2
        let c = beta_coefficients(7, 5);
        assert_eq!(c[0], rat(1, 1));
        assert_eq!(c[1], rat(1, 1));
        assert_eq!(c[2], rat(-7, 1));
        assert_eq!(c[3], rat(-2, 3));
        assert_eq!(c[4], rat(-7, 2));
    }

    #[test]
    fn closed_forms_match_recurrence_spot_checks() {
        for n in [0u64, 3, 5, 8, 13, 22] {
            let c = beta_coefficients(n, 30);
            for k in 2..12u32 {
                assert_eq!(
                    even_coefficient_closed_form(n, k),
                    c[2 * k as usize],
                    "even n={n} k={k}"
                );
                assert_eq!(
                    odd_coefficient_closed_form(n, k),
                    c[2 * k as usize - 1],
                    "odd n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn full_seed_solution_low_coefficients_for_degree_zero() {
        let b = beta(0, 8);
        let expect = [
            rat(1, 1),
            rat(1, 1),
            rat(0, 1),
            rat(5, 3),
            rat(0, 1),
            rat(17, 10),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(&b.coefficient(k), e, "k={k}");
        }
        assert!(!b.is_polynomial());
    }

    #[test]
    fn termination_detection() {
        assert_eq!(mu(4, 40).polynomial_degree(), Some(4));
        assert_eq!(mu(0, 40).polynomial_degree(), Some(0));
        assert_eq!(nu(3, 40).polynomial_degree(), Some(3));
        assert_eq!(nu(15, 40).polynomial_degree(), Some(15));
        assert_eq!(mu(3, 40).polynomial_degree(), None);
        assert_eq!(nu(4, 40).polynomial_degree(), None);
        assert_eq!(mu(2, 40).polynomial_degree(), None);
        assert_eq!(nu(1, 40).polynomial_degree(), None);
        assert_eq!(beta(6, 40).polynomial_degree(), None);
    }

    #[test]
    fn interior_zero_coefficients_do_not_fool_detection() {
        // n = 10 kills the z^4 coefficient of the even series but the
        // series still terminates only at degree 10.
        let m = mu(10, 40);
        assert!(m.coefficient(4).is_zero());
        assert_eq!(m.polynomial_degree(), Some(10));
        // n = 17 kills z^5 of the odd series.
        let s = nu(17, 40);
        assert!(s.coefficient(5).is_zero());
        assert_eq!(s.polynomial_degree(), Some(17));
    }

    #[test]
    fn matching_constants() {
        assert_eq!(m1(3).unwrap(), rat(12, 1));
        assert_eq!(m1(5).unwrap(), rat(-40, 1));
        assert_eq!(m1(7).unwrap(), rat(336, 1));
        assert_eq!(m2(0).unwrap(), rat(1, 1));
        assert_eq!(m2(4).unwrap(), rat(-4, 1));
        assert_eq!(m2(6).unwrap(), rat(24, 1));
        assert_eq!(m3(1).unwrap(), rat(1, 1));
        assert_eq!(m3(2).unwrap(), rat(1, 1));
        assert_eq!(m3(3).unwrap(), rat(1, 12));
        assert_eq!(m1(4), Err(SeriesError::NeedOddDegree(4)));
        assert_eq!(m2(2), Err(SeriesError::NeedEvenDegree(2)));
    }

    #[test]
    fn gamma_form_agrees_exactly_with_rational_form() {
        for n in (0..=12).step_by(2).filter(|&n| n != 2) {
            assert_eq!(m2_gamma_form(n).unwrap(), m2(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn terminating_series_reproduces_the_polynomial_family() {
        for n in [0u64, 3, 4, 5, 6, 7, 8] {
            let sol = alpha(n, default_truncation(n));
            let NormalizedSolution::Series(s) = sol else {
                panic!("degree {n} should be a series");
            };
            let poly = s.to_polynomial().expect("terminates");
            let expect = hhat_polynomial(n).unwrap().scale(&m3(n).unwrap());
            assert_eq!(poly, expect, "n={n}");
        }
    }

    #[test]
    fn excluded_degrees_fall_back_to_gap_solutions() {
        assert!(matches!(
            alpha(1, 40),
            NormalizedSolution::Gap(GapSolution::One)
        ));
        assert!(matches!(
            alpha(2, 40),
            NormalizedSolution::Gap(GapSolution::Two)
        ));
    }

    #[test]
    fn series_satisfies_equation_within_truncation() {
        // Non-terminating examples, checked well inside the reliable region.
        for (n, z) in [
            (5u64, C64::new(0.4, 0.0)),
            (6, C64::new(-0.3, 0.5)),
            (0, C64::new(0.2, -0.7)),
        ] {
            for s in [mu(n, 60), nu(n, 60), beta(n, 60)] {
                let w = s.eval(z);
                let w1 = s.eval_d1(z);
                let w2 = s.eval_d2(z);
                let drift = 2.0 * (z + 4.0 * z / (1.0 + 2.0 * z * z));
                let r = w2 - drift * w1 + 2.0 * n as f64 * w;
                assert!(r.norm() < 1e-12, "n={n} z={z} r={r}");
            }
        }
    }

    #[test]
    fn precise_evaluation_agrees_with_fast_path_where_both_are_accurate() {
        let s = beta(5, 60);
        for &z in &[C64::new(0.3, 0.4), C64::new(-1.0, 0.2)] {
            let fast = s.eval(z);
            let precise = s.eval_derivative_precise(0, z);
            assert!((fast - precise).norm() <= 1e-12 * precise.norm().max(1.0));
        }
        // And remains a solution in the heavy-cancellation regime.
        let z = C64::new(1.8, 3.5);
        let s = beta(5, truncation_for_radius(5, z.norm()));
        let w = s.eval_derivative_precise(0, z);
        let w1 = s.eval_derivative_precise(1, z);
        let w2 = s.eval_derivative_precise(2, z);
        let drift = 2.0 * (z + 4.0 * z / (1.0 + 2.0 * z * z));
        let r = w2 - drift * w1 + 10.0 * w;
        let scale = w.norm().max(w1.norm()).max(1.0);
        assert!(r.norm() <= 1e-9 * scale, "r={r} scale={scale}");
    }

    #[test]
    fn derivatives_match_differencing() {
        let s = nu(6, 50);
        let z = C64::new(0.37, -0.21);
        let h = 1e-5;
        let d1 = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
        assert!((d1 - s.eval_d1(z)).norm() < 1e-9);
        let d2 = (s.eval_d1(z + h) - s.eval_d1(z - h)) / (2.0 * h);
        assert!((d2 - s.eval_d2(z)).norm() < 1e-9);
    }

    #[test]
    fn norm_coefficients_are_consistent_with_matching_constants() {
        use crate::exceptional::hhat_norm_sqrtpi_coeff;
        for n in [3u64, 5, 7, 9] {
            let via_m = hhat_norm_sqrtpi_coeff(n).unwrap() / (m1(n).unwrap() * m1(n).unwrap());
            assert_eq!(nu_norm_sqrtpi_coeff(n).unwrap(), via_m, "n={n}");
        }
        for n in [0u64, 4, 6, 8] {
            let via_m = hhat_norm_sqrtpi_coeff(n).unwrap() / (m2(n).unwrap() * m2(n).unwrap());
            assert_eq!(mu_norm_sqrtpi_coeff(n).unwrap(), via_m, "n={n}");
        }
    }

    proptest! {
        /// The recurrence is a valid identity on the closed forms for all
        /// indices, both parities.
        #[test]
        fn closed_forms_satisfy_recurrence(n in 0u64..25, k in 4usize..30) {
            let c = beta_coefficients(n, k + 1);
            let k_i = k as i64;
            let a = Rational::from_integer(BigInt::from(-2 * ((k_i - 2) * (k_i - 8) + n as i64)));
            let b = Rational::from_integer(BigInt::from(-4 * (n as i64 - k_i + 4)));
            let lhs = Rational::from_integer(BigInt::from(k_i * (k_i - 1))) * &c[k];
            prop_assert_eq!(lhs, a * &c[k - 2] + b * &c[k - 4]);
        }

        /// Parity projections store zeros off their parity class.
        #[test]
        fn parity_projection_is_clean(n in 0u64..12) {
            let m = mu(n, 25);
            let s = nu(n, 25);
            for k in 0..=25usize {
                if k % 2 == 1 {
                    prop_assert!(m.coefficient(k).is_zero());
                } else {
                    prop_assert!(s.coefficient(k).is_zero());
                }
            }
        }

        /// Horner evaluation agrees with the naive power sum.
        #[test]
        fn horner_matches_power_sum(n in 0u64..10, re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let s = beta(n, 40);
            let z = C64::new(re, im);
            let naive: C64 = s
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, c)| z.powu(k as u32) * rational_to_f64(c))
                .sum();
            let fast = s.eval(z);
            prop_assert!((fast - naive).norm() <= 1e-10 * naive.norm().max(1.0));
        }
    }
}
