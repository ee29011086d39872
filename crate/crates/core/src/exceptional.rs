//! The codimension-two exceptional Hermite family.
//!
//! The family is indexed by the single-row partition `(1)`: its members are
//! Wronskians `Wr(H_1, H_2, H_n)` of classical Hermite polynomials, defined
//! for every degree except the two excluded indices `{1, 2}`. Dividing out
//! the constant `8 (n-1)(n-2)` yields the monic-up-to-`2^n` normalized
//! members, which also admit the three-term classical expansion
//! `H_n + 4n H_{n-2} + 4n(n-3) H_{n-4}` (an identity this crate's tests
//! verify exactly for all computed degrees).
//!
//! Orthogonality lives on the real line against `exp(-x^2)` divided by the
//! square of the Wronskian `Wr(H_1, H_2) = 4(1 + 2x^2)`, which never
//! vanishes: the family is a complete orthogonal system with two degrees
//! missing.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::hermite::hermite;
use crate::partitions::Partition;
use crate::poly::RationalPoly;
use crate::{Rational, C64};

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("degree {0} is excluded from the polynomial family")]
    ExcludedDegree(u64),
    #[error("expansion would need classical index {0} with a non-vanishing coefficient")]
    NegativeIndex(i64),
    #[error("evaluation point {0} is a pole of the rational potential")]
    PotentialPole(C64),
}

/// The partition defining this family.
pub fn family_partition() -> Partition {
    Partition::new(vec![1]).expect("a single row is a valid partition")
}

/// Wronskian of a tuple of polynomials: determinant of the matrix whose
/// rows are successive derivative orders and whose columns are the
/// functions. Exact over the rationals.
pub fn wronskian_poly(fns: &[RationalPoly]) -> RationalPoly {
    let n = fns.len();
    let mut rows: Vec<Vec<RationalPoly>> = Vec::with_capacity(n);
    let mut current: Vec<RationalPoly> = fns.to_vec();
    for _ in 0..n {
        rows.push(current.clone());
        current = current.iter().map(RationalPoly::derivative).collect();
    }
    determinant(&rows)
}

/// Laplace expansion along the first row; fine for the small orders used
/// here (the family needs 3x3).
fn determinant(m: &[Vec<RationalPoly>]) -> RationalPoly {
    let n = m.len();
    if n == 0 {
        return RationalPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = RationalPoly::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RationalPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = &determinant(&minor) * entry;
        if j % 2 == 0 {
            acc = &acc + &cofactor;
        } else {
            acc = &acc - &cofactor;
        }
    }
    acc
}

/// Degree-`n` member of the family as a raw Wronskian,
/// `Wr(H_1, H_2, H_n)`. The excluded degrees `{1, 2}` are rejected: there
/// the Wronskian degenerates (a repeated column) and the family instead has
/// the non-polynomial solutions of [`crate::hermite::GapSolution`].
pub fn xop_polynomial(n: u64) -> Result<RationalPoly, FamilyError> {
    let excluded = family_partition().excluded_indices();
    if excluded.contains(&n) {
        return Err(FamilyError::ExcludedDegree(n));
    }
    Ok(wronskian_poly(&[hermite(1), hermite(2), hermite(n)]))
}

/// Degree-`n` member in the normalization with leading coefficient `2^n`:
/// the classical three-term expansion
/// `H_n + 4n H_{n-2} + 4n(n-3) H_{n-4}`.
///
/// Terms whose classical index would be negative are only dropped when
/// their coefficient vanishes identically (which covers every admissible
/// degree); a negative index with a surviving coefficient is reported as an
/// error rather than silently truncated.
pub fn hhat_polynomial(n: u64) -> Result<RationalPoly, FamilyError> {
    let excluded = family_partition().excluded_indices();
    if excluded.contains(&n) {
        return Err(FamilyError::ExcludedDegree(n));
    }
    let n_i = n as i64;
    let terms: [(i64, i64); 3] = [(n_i, 1), (n_i - 2, 4 * n_i), (n_i - 4, 4 * n_i * (n_i - 3))];
    let mut acc = RationalPoly::zero();
    for (index, coeff) in terms {
        if coeff == 0 {
            continue;
        }
        if index < 0 {
            return Err(FamilyError::NegativeIndex(index));
        }
        acc = &acc + &hermite(index as u64).scale(&BigRational::from_integer(BigInt::from(coeff)));
    }
    Ok(acc)
}

/// The proportionality constant between the raw Wronskian and the
/// normalized member: `Wr(H_1, H_2, H_n) = 8 (n-1)(n-2) hhat_n`.
pub fn wronskian_prefactor(n: u64) -> Rational {
    let n = BigInt::from(n);
    Rational::from_integer(BigInt::from(8) * (n.clone() - BigInt::from(1)) * (n - BigInt::from(2)))
}

/// `Wr(H_1, H_2) = 4 (1 + 2x^2)`: the strictly positive denominator whose
/// square enters the orthogonality weight.
pub fn denominator_polynomial() -> RationalPoly {
    wronskian_poly(&[hermite(1), hermite(2)])
}

/// Orthogonality weight for the raw Wronskian members:
/// `exp(-x^2) / (4(1+2x^2))^2`.
pub fn weight_xop(x: f64) -> f64 {
    let d = 4.0 * (1.0 + 2.0 * x * x);
    (-x * x).exp() / (d * d)
}

/// Orthogonality weight for the normalized members:
/// `exp(-x^2) / (1+2x^2)^2`, i.e. `16` times [`weight_xop`].
pub fn weight_hhat(x: f64) -> f64 {
    let d = 1.0 + 2.0 * x * x;
    (-x * x).exp() / (d * d)
}

/// Exact coefficient `c(n)` in `||hhat_n||^2 = c(n) sqrt(pi)` under
/// [`weight_hhat`]: `2^n n! / ((n-1)(n-2))`. The same closed form covers
/// `n = 0` (giving `1/2`) and all admissible `n >= 3`.
pub fn hhat_norm_sqrtpi_coeff(n: u64) -> Result<Rational, FamilyError> {
    let excluded = family_partition().excluded_indices();
    if excluded.contains(&n) {
        return Err(FamilyError::ExcludedDegree(n));
    }
    let n_i = BigInt::from(n);
    let num = BigInt::from(2).pow(n as u32) * crate::special::factorial(n);
    let den = (n_i.clone() - BigInt::from(1)) * (n_i - BigInt::from(2));
    Ok(Rational::new(num, den))
}

/// Exact coefficient in `||Wr(H_1,H_2,H_n)||^2 = c(n) sqrt(pi)` under
/// [`weight_xop`]: `2^{n+2} n! (n-1)(n-2)`.
pub fn xop_norm_sqrtpi_coeff(n: u64) -> Result<Rational, FamilyError> {
    let excluded = family_partition().excluded_indices();
    if excluded.contains(&n) {
        return Err(FamilyError::ExcludedDegree(n));
    }
    let n_i = BigInt::from(n);
    let num = BigInt::from(2).pow(n as u32 + 2)
        * crate::special::factorial(n)
        * (n_i.clone() - BigInt::from(1))
        * (n_i - BigInt::from(2));
    Ok(Rational::from_integer(num))
}

/// The rational extension of the harmonic oscillator associated with the
/// family: `V(z) = z^2 + 8 (2z^2 - 1) / (2z^2 + 1)^2`.
///
/// Its bound states are `exp(-z^2/2) Wr(H_1,H_2,H_n) / (4(1+2z^2))` with
/// energies `2n - 3`, for every admissible degree. The potential has double
/// poles at `z = +/- i/sqrt(2)`, which are rejected.
pub fn potential(z: C64) -> Result<C64, FamilyError> {
    let d = 2.0 * z * z + 1.0;
    if d.norm() < 1e-12 {
        return Err(FamilyError::PotentialPole(z));
    }
    Ok(z * z + 8.0 * (2.0 * z * z - 1.0) / (d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::SQRT_PI;
    use proptest::prelude::*;

    /// Independent oracle: Leibniz determinant over explicit permutations
    /// of the derivative matrix, for tuples of up to three polynomials.
    fn wronskian_leibniz(fns: &[RationalPoly]) -> RationalPoly {
        let n = fns.len();
        let mut rows: Vec<Vec<RationalPoly>> = Vec::new();
        let mut current = fns.to_vec();
        for _ in 0..n {
            rows.push(current.clone());
            current = current.iter().map(RationalPoly::derivative).collect();
        }
        let perms: Vec<(Vec<usize>, i32)> = match n {
            1 => vec![(vec![0], 1)],
            2 => vec![(vec![0, 1], 1), (vec![1, 0], -1)],
            3 => vec![
                (vec![0, 1, 2], 1),
                (vec![1, 2, 0], 1),
                (vec![2, 0, 1], 1),
                (vec![0, 2, 1], -1),
                (vec![1, 0, 2], -1),
                (vec![2, 1, 0], -1),
            ],
            _ => panic!("oracle limited to order 3"),
        };
        let mut acc = RationalPoly::zero();
        for (perm, sign) in perms {
            let mut prod = RationalPoly::one();
            for (row, &col) in perm.iter().enumerate() {
                prod = &prod * &rows[row][col];
            }
            if sign > 0 {
                acc = &acc + &prod;
            } else {
                acc = &acc - &prod;
            }
        }
        acc
    }

    #[test]
    fn lowest_member_is_the_constant_sixteen() {
        assert_eq!(xop_polynomial(0).unwrap().to_string(), "16");
    }

    #[test]
    fn degree_three_members() {
        assert_eq!(xop_polynomial(3).unwrap().to_string(), "128*x^3 + 192*x");
        assert_eq!(hhat_polynomial(3).unwrap().to_string(), "8*x^3 + 12*x");
    }

    #[test]
    fn excluded_degrees_are_rejected() {
        for n in [1, 2] {
            assert_eq!(xop_polynomial(n), Err(FamilyError::ExcludedDegree(n)));
            assert_eq!(hhat_polynomial(n), Err(FamilyError::ExcludedDegree(n)));
            assert_eq!(
                hhat_norm_sqrtpi_coeff(n),
                Err(FamilyError::ExcludedDegree(n))
            );
        }
    }

    #[test]
    fn wronskian_equals_prefactor_times_normalized_member() {
        for n in (0..=12).filter(|n| !matches!(n, 1 | 2)) {
            let lhs = xop_polynomial(n).unwrap();
            let pref = wronskian_prefactor(n);
            let rhs = hhat_polynomial(n).unwrap().scale(&pref);
            assert_eq!(lhs, rhs, "degree {n}");
        }
    }

    #[test]
    fn denominator_is_positive_quadratic() {
        assert_eq!(denominator_polynomial().to_string(), "8*x^2 + 4");
    }

    #[test]
    fn weights_are_consistent() {
        for &x in &[0.0, 0.5, -1.7, 3.0] {
            let ratio = weight_hhat(x) / weight_xop(x);
            assert!((ratio - 16.0).abs() < 1e-12);
        }
        assert_eq!(weight_hhat(0.0), 1.0);
    }

    #[test]
    fn norm_coefficients() {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(hhat_norm_sqrtpi_coeff(0).unwrap(), half);
        assert_eq!(
            hhat_norm_sqrtpi_coeff(3).unwrap(),
            Rational::from_integer(BigInt::from(24))
        );
        assert_eq!(
            xop_norm_sqrtpi_coeff(0).unwrap(),
            Rational::from_integer(BigInt::from(8))
        );
        assert_eq!(
            xop_norm_sqrtpi_coeff(3).unwrap(),
            Rational::from_integer(BigInt::from(384))
        );
    }

    #[test]
    fn potential_values_and_poles() {
        let v0 = potential(C64::new(0.0, 0.0)).unwrap();
        assert!((v0.re + 8.0).abs() < 1e-15 && v0.im == 0.0);
        let pole = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
        assert!(matches!(
            potential(pole),
            Err(FamilyError::PotentialPole(_))
        ));
    }

    #[test]
    fn bound_states_have_linear_spectrum() {
        // psi_n = exp(-x^2/2) Wr(H_1,H_2,H_n) / (4(1+2x^2)) should satisfy
        // -psi'' + V psi = (2n - 3) psi.
        let psi = |n: u64, x: f64| {
            let p = xop_polynomial(n).unwrap().eval_f64(x);
            (-x * x / 2.0).exp() * p / (4.0 * (1.0 + 2.0 * x * x))
        };
        for n in [0u64, 3, 4, 7] {
            for &x in &[0.3f64, 1.1] {
                let h = 1e-4;
                let lap = (psi(n, x + h) - 2.0 * psi(n, x) + psi(n, x - h)) / (h * h);
                let v = potential(C64::new(x, 0.0)).unwrap().re;
                let energy = (-lap + v * psi(n, x)) / psi(n, x);
                let expect = 2.0 * n as f64 - 3.0;
                assert!(
                    (energy - expect).abs() < 1e-5,
                    "n={n} x={x}: energy {energy} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn first_norm_is_half_sqrt_pi_numerically() {
        // Riemann check of \int exp(-x^2)/(1+2x^2)^2 dx = sqrt(pi)/2 before
        // the dedicated quadrature exists: trapezoid on [-8, 8].
        let m = 160_000;
        let (a, b) = (-8.0, 8.0);
        let h = (b - a) / m as f64;
        let mut s = 0.5 * (weight_hhat(a) + weight_hhat(b));
        for i in 1..m {
            s += weight_hhat(a + i as f64 * h);
        }
        s *= h;
        assert!((s - SQRT_PI / 2.0).abs() < 1e-12, "got {s}");
    }

    proptest! {
        /// Cofactor expansion agrees with the explicit Leibniz oracle.
        #[test]
        fn wronskian_matches_permutation_oracle(
            a in proptest::collection::vec(-5i64..=5, 1..4),
            b in proptest::collection::vec(-5i64..=5, 1..4),
            c in proptest::collection::vec(-5i64..=5, 1..4),
        ) {
            let mk = |cs: &[i64]| {
                let terms: Vec<(u32, i64)> = cs
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (i as u32, v))
                    .collect();
                RationalPoly::from_integer_coeffs(&terms)
            };
            let fns = [mk(&a), mk(&b), mk(&c)];
            prop_assert_eq!(wronskian_poly(&fns), wronskian_leibniz(&fns));
        }

        /// The raw Wronskian has degree exactly n and leading coefficient
        /// `2^{n+3} (n-1)(n-2)` for admissible n.
        #[test]
        fn wronskian_degree_and_leading_term(n in 3u64..15) {
            let p = xop_polynomial(n).unwrap();
            prop_assert_eq!(p.degree(), Some(n as u32));
            let lead = p.leading_coeff().unwrap().clone();
            let expect = Rational::from_integer(
                BigInt::from(2).pow(n as u32 + 3)
                    * BigInt::from(n - 1)
                    * BigInt::from(n - 2),
            );
            prop_assert_eq!(lead, expect);
        }
    }
}
