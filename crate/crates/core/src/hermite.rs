//! Classical Hermite polynomials (physicists' normalization) and the two
//! non-polynomial companions that fill the excluded degrees of the
//! codimension-two exceptional family.
//!
//! The polynomials satisfy `H_{n+1} = 2x H_n - 2n H_{n-1}` with exact
//! rational (in fact integer) coefficients. The index `-1` extension
//! `H_{-1}(z) = (sqrt(pi)/2) exp(z^2) erfc(z)` still satisfies the classical
//! recursion-in-disguise `H' = 2zH - 1` and is the seed from which the
//! excluded-degree solutions below are assembled.

use crate::poly::RationalPoly;
use crate::special::{self, SpecialError, SQRT_PI};
use crate::C64;
use num_bigint::BigInt;
use num_rational::BigRational;

/// The physicists' Hermite polynomial of the given degree, exact.
pub fn hermite(n: u64) -> RationalPoly {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut prev = RationalPoly::one(); // H_0
    if n == 0 {
        return prev;
    }
    let two_x = RationalPoly::monomial(1, two.clone());
    let mut curr = two_x.clone(); // H_1
    for k in 1..n {
        let next = &(&two_x * &curr) - &prev.scale(&BigRational::from_integer(BigInt::from(2 * k)));
        prev = curr;
        curr = next;
    }
    curr
}

/// `H_{-1}(z) = (sqrt(pi)/2) exp(z^2) erfc(z)`: the index `-1` member of the
/// extended Hermite ladder, satisfying `H' = 2zH - 1`. Decays like
/// `1/(2z)` for large positive real part and grows like `sqrt(pi) exp(z^2)`
/// on the other side.
pub fn hermite_minus_one(z: C64) -> Result<C64, SpecialError> {
    Ok(special::erfcx(z)? * (SQRT_PI / 2.0))
}

/// The two distinguished non-polynomial solutions attached to the excluded
/// degrees 1 and 2 of the codimension-two family.
///
/// Both are entire combinations of polynomials and `exp(z^2) erfc(z)`; they
/// solve the family's second-order equation at their respective degree
/// parameter and grow only polynomially along the positive real axis
/// (like `2z` and `4z^2`), unlike the generic exponentially growing second
/// solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSolution {
    /// Degree parameter 1; behaves like `2z + 2/z` for large real `z`.
    One,
    /// Degree parameter 2; behaves like `4z^2 + 6` for large real `z`.
    Two,
}

impl GapSolution {
    /// The excluded degree this solution is attached to.
    pub fn degree(self) -> u64 {
        match self {
            GapSolution::One => 1,
            GapSolution::Two => 2,
        }
    }

    /// Value at a complex point.
    pub fn eval(self, z: C64) -> Result<C64, SpecialError> {
        let g = special::erfcx(z)?;
        let one = C64::new(1.0, 0.0);
        Ok(match self {
            GapSolution::One => 4.0 * z + SQRT_PI * (one - 2.0 * z * z) * g,
            GapSolution::Two => 2.0 * one + 4.0 * z * z + 4.0 * SQRT_PI * z * g,
        })
    }

    /// First derivative, in closed form (no differencing).
    pub fn eval_d1(self, z: C64) -> Result<C64, SpecialError> {
        let g = special::erfcx(z)?;
        let one = C64::new(1.0, 0.0);
        let z2 = z * z;
        Ok(match self {
            GapSolution::One => 2.0 * one + 4.0 * z2 - 2.0 * SQRT_PI * z * (one + 2.0 * z2) * g,
            GapSolution::Two => 4.0 * SQRT_PI * (one + 2.0 * z2) * g,
        })
    }

    /// Second derivative, in closed form.
    pub fn eval_d2(self, z: C64) -> Result<C64, SpecialError> {
        let g = special::erfcx(z)?;
        let one = C64::new(1.0, 0.0);
        let z2 = z * z;
        Ok(match self {
            GapSolution::One => {
                12.0 * z + 8.0 * z2 * z - 2.0 * SQRT_PI * g * (one + 8.0 * z2 + 4.0 * z2 * z2)
            }
            GapSolution::Two => {
                8.0 * SQRT_PI * z * g * (3.0 * one + 2.0 * z2) - 8.0 * one - 16.0 * z2
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn low_degrees_match_known_polynomials() {
        assert_eq!(hermite(0).to_string(), "1");
        assert_eq!(hermite(1).to_string(), "2*x");
        assert_eq!(hermite(2).to_string(), "4*x^2 - 2");
        assert_eq!(hermite(3).to_string(), "8*x^3 - 12*x");
        assert_eq!(hermite(5).to_string(), "32*x^5 - 160*x^3 + 120*x");
    }

    #[test]
    fn index_minus_one_value_and_functional_equation() {
        let h0 = hermite_minus_one(C64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(h0.re, SQRT_PI / 2.0, epsilon = 1e-15);
        assert_eq!(h0.im, 0.0);
        // H'(z) = 2 z H(z) - 1, probed by central differences.
        for &z in &[C64::new(0.7, 0.0), C64::new(-1.1, 0.4), C64::new(0.2, 1.3)] {
            let h = 1e-5;
            let d =
                (hermite_minus_one(z + h).unwrap() - hermite_minus_one(z - h).unwrap()) / (2.0 * h);
            let expect = 2.0 * z * hermite_minus_one(z).unwrap() - 1.0;
            assert!((d - expect).norm() < 1e-8, "z={z}");
        }
        // Matches erfc directly at 1.
        let h1 = hermite_minus_one(C64::new(1.0, 0.0)).unwrap();
        let expect = SQRT_PI / 2.0 * 1.0f64.exp() * special::erfc_real(1.0);
        assert_abs_diff_eq!(h1.re, expect, epsilon = 1e-15);
    }

    #[test]
    fn gap_solutions_initial_values() {
        let zero = C64::new(0.0, 0.0);
        let (h1, h2) = (GapSolution::One, GapSolution::Two);
        assert_abs_diff_eq!(h1.eval(zero).unwrap().re, SQRT_PI, epsilon = 1e-15);
        assert_abs_diff_eq!(h1.eval_d1(zero).unwrap().re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            h1.eval_d2(zero).unwrap().re,
            -2.0 * SQRT_PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(h2.eval(zero).unwrap().re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h2.eval_d1(zero).unwrap().re, 4.0 * SQRT_PI, epsilon = 1e-15);
        assert_abs_diff_eq!(h2.eval_d2(zero).unwrap().re, -8.0, epsilon = 1e-14);
    }

    #[test]
    fn gap_solutions_grow_polynomially() {
        let z = C64::new(5.0, 0.0);
        let h1 = GapSolution::One.eval(z).unwrap().re;
        assert!((h1 - (2.0 * 5.0 + 2.0 / 5.0)).abs() < 0.02, "got {h1}");
        let h2 = GapSolution::Two.eval(z).unwrap().re;
        assert!((h2 - (4.0 * 25.0 + 6.0)).abs() < 0.1, "got {h2}");
    }

    #[test]
    fn gap_solutions_satisfy_their_equation() {
        // w'' - 2(z + 4z/(1+2z^2)) w' + 2n w = 0
        let pts = [
            C64::new(0.7, 0.0),
            C64::new(-1.3, 0.0),
            C64::new(0.4, 0.3),
            C64::new(-0.2, -0.8),
        ];
        for sol in [GapSolution::One, GapSolution::Two] {
            let n = sol.degree() as f64;
            for &z in &pts {
                let w = sol.eval(z).unwrap();
                let w1 = sol.eval_d1(z).unwrap();
                let w2 = sol.eval_d2(z).unwrap();
                let drift = 2.0 * (z + 4.0 * z / (1.0 + 2.0 * z * z));
                let residual = w2 - drift * w1 + 2.0 * n * w;
                assert!(residual.norm() < 1e-12, "sol={sol:?} z={z} r={residual}");
            }
        }
    }

    #[test]
    fn derivatives_match_differencing() {
        let z = C64::new(0.45, -0.6);
        let h = 1e-5;
        for sol in [GapSolution::One, GapSolution::Two] {
            let d1 = (sol.eval(z + h).unwrap() - sol.eval(z - h).unwrap()) / (2.0 * h);
            assert!((d1 - sol.eval_d1(z).unwrap()).norm() < 1e-8);
            let d2 = (sol.eval_d1(z + h).unwrap() - sol.eval_d1(z - h).unwrap()) / (2.0 * h);
            assert!((d2 - sol.eval_d2(z).unwrap()).norm() < 1e-8);
        }
    }

    proptest! {
        #[test]
        fn derivative_lowers_degree_with_factor_two_n(n in 1u64..25) {
            let d = hermite(n).derivative();
            let expect = hermite(n - 1)
                .scale(&BigRational::from_integer(BigInt::from(2 * n)));
            prop_assert_eq!(d, expect);
        }

        #[test]
        fn parity_alternates(n in 0u64..20, x in -3.0f64..3.0) {
            let p = hermite(n);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let (a, b) = (p.eval_f64(-x), sign * p.eval_f64(x));
            prop_assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
    }
}
