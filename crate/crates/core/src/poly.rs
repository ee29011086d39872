//! Exact univariate polynomials over the rationals.
//!
//! Coefficients are stored sparsely (degree -> nonzero `BigRational`), which
//! keeps the parity-sparse polynomials of this crate compact and makes the
//! "no stored zero coefficients" invariant easy to uphold: any operation that
//! could produce a zero entry removes it before returning.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::C64;

/// Convert an exact rational to the nearest `f64`.
///
/// `BigRational::to_f64` returns `None`-ish garbage when numerator and
/// denominator both overflow the double range even though their ratio is
/// representable; this helper rescales by a common power of two first so the
/// conversion stays finite whenever the true value is.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() || r.numer().is_zero() {
            return v;
        }
    }
    // Strip matching magnitude from numerator and denominator.
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = (nbits.min(dbits) - 64).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = n.to_f64().unwrap_or(f64::NAN);
    let df = d.to_f64().unwrap_or(f64::NAN);
    nf / df
}

/// A univariate polynomial with exact rational coefficients.
///
/// The zero polynomial has an empty coefficient map and `degree() == None`.
///
/// # Examples
///
/// ```
/// use xherm_core::{RationalPoly, Rational};
///
/// let p = RationalPoly::from_integer_coeffs(&[(1, 2)]); // 2x
/// let q = &p * &p;
/// assert_eq!(q.degree(), Some(2));
/// assert_eq!(q.coeff(2), Rational::from_integer(4.into()));
/// ```
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl RationalPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        RationalPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(1)))
    }

    /// A constant polynomial.
    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    /// `c * x^degree`; collapses to zero when `c == 0`.
    pub fn monomial(degree: u32, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        RationalPoly { coeffs }
    }

    /// Build from `(degree, integer coefficient)` pairs.
    pub fn from_integer_coeffs(pairs: &[(u32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(d, c) in pairs {
            p.add_term(d, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    /// Add `c * x^d` in place, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, degree: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `x^degree` (zero when absent).
    pub fn coeff(&self, degree: u32) -> BigRational {
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.values().next_back()
    }

    /// Iterate `(degree, coefficient)` in ascending degree order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// Multiply by a scalar.
    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * s)).collect(),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.coeffs {
            if *d > 0 {
                out.add_term(d - 1, c * BigRational::from_integer(BigInt::from(*d)));
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // Horner over the sparse representation, highest degree first.
        let mut acc = BigRational::zero();
        let mut last_deg: Option<u32> = None;
        for (d, c) in self.coeffs.iter().rev() {
            if let Some(prev) = last_deg {
                for _ in 0..(prev - d) {
                    acc *= x;
                }
            }
            acc += c;
            last_deg = Some(*d);
        }
        if let Some(d) = last_deg {
            for _ in 0..d {
                acc *= x;
            }
        }
        acc
    }

    /// Floating-point evaluation on the real line.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut last_deg: Option<u32> = None;
        for (d, c) in self.coeffs.iter().rev() {
            if let Some(prev) = last_deg {
                acc *= x.powi((prev - d) as i32);
            }
            acc += rational_to_f64(c);
            last_deg = Some(*d);
        }
        if let Some(d) = last_deg {
            acc *= x.powi(d as i32);
        }
        acc
    }

    /// Floating-point evaluation at a complex point.
    pub fn eval_complex(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut last_deg: Option<u32> = None;
        for (d, c) in self.coeffs.iter().rev() {
            if let Some(prev) = last_deg {
                acc *= z.powu(prev - d);
            }
            acc += C64::new(rational_to_f64(c), 0.0);
            last_deg = Some(*d);
        }
        if let Some(d) = last_deg {
            acc *= z.powu(d);
        }
        acc
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let is_unit = a == BigRational::from_integer(BigInt::from(1));
            match (*d, is_unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{d}")?,
                (_, false) => write!(f, "{a}*x^{d}")?,
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = RationalPoly::zero();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                out.add_term(da + db, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(RationalPoly::zero().degree(), None);
        assert!(RationalPoly::zero().is_zero());
    }

    #[test]
    fn cancelling_addition_removes_the_entry() {
        let p = RationalPoly::from_integer_coeffs(&[(3, 5), (0, 1)]);
        let q = RationalPoly::from_integer_coeffs(&[(3, -5)]);
        let s = &p + &q;
        assert_eq!(s.degree(), Some(0));
        assert_eq!(s.coeff(3), BigRational::zero());
        assert!(s.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn derivative_of_cubic() {
        // d/dx (8x^3 - 12x) = 24x^2 - 12
        let p = RationalPoly::from_integer_coeffs(&[(3, 8), (1, -12)]);
        let d = p.derivative();
        assert_eq!(d, RationalPoly::from_integer_coeffs(&[(2, 24), (0, -12)]));
    }

    #[test]
    fn rational_and_float_evaluation_agree() {
        let p = RationalPoly::from_integer_coeffs(&[(4, 3), (2, -7), (0, 2)]);
        let x = rat(3, 2);
        let exact = p.eval_rational(&x);
        let approx_val = p.eval_f64(1.5);
        assert!((rational_to_f64(&exact) - approx_val).abs() < 1e-12);
    }

    #[test]
    fn complex_evaluation_matches_real_axis() {
        let p = RationalPoly::from_integer_coeffs(&[(5, 1), (3, -4), (1, 2)]);
        let z = C64::new(0.7, 0.0);
        assert!((p.eval_complex(z).re - p.eval_f64(0.7)).abs() < 1e-13);
        assert_eq!(p.eval_complex(z).im, 0.0);
    }

    #[test]
    fn huge_rationals_convert_finitely() {
        // ratio ~ 1 but numerator/denominator far beyond the double range
        let big = BigInt::from(10).pow(400u32);
        let r = BigRational::new(big.clone() * 3, big * 2);
        assert!((rational_to_f64(&r) - 1.5).abs() < 1e-15);
    }

    fn arb_poly() -> impl Strategy<Value = RationalPoly> {
        proptest::collection::vec((0u32..12, -50i64..50), 0..8).prop_map(|pairs| {
            let mut p = RationalPoly::zero();
            for (d, c) in pairs {
                p.add_term(d, BigRational::from_integer(BigInt::from(c)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn product_rule_holds(p in arb_poly(), q in arb_poly()) {
            let lhs = (&p * &q).derivative();
            let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn no_zero_coefficients_stored(p in arb_poly(), q in arb_poly()) {
            let s = &p - &q;
            prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
            let m = &p * &q;
            prop_assert!(m.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn evaluation_is_ring_homomorphism(p in arb_poly(), q in arb_poly(), n in -6i64..6) {
            let x = BigRational::from_integer(BigInt::from(n)) / BigRational::from_integer(BigInt::from(2));
            let sum = (&p + &q).eval_rational(&x);
            prop_assert_eq!(sum, p.eval_rational(&x) + q.eval_rational(&x));
            let prod = (&p * &q).eval_rational(&x);
            prop_assert_eq!(prod, p.eval_rational(&x) * q.eval_rational(&x));
        }
    }

    #[test]
    fn display_is_readable() {
        let p = RationalPoly::from_integer_coeffs(&[(3, 8), (1, -12)]);
        assert_eq!(format!("{p}"), "8*x^3 - 12*x");
        let mut q = RationalPoly::one();
        q.add_term(2, rat(-1, 3));
        assert_eq!(format!("{q}"), "-1/3*x^2 + 1");
        assert!(RationalPoly::one().eval_rational(&rat(5, 1)).is_one());
    }
}
