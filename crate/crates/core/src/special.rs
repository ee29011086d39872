//! Special functions needed by the solution theory and the immersion:
//!
//! * real error function and complement (rational minimax approximations,
//!   correct to machine precision on the whole line),
//! * complex error function via an exponentially convergent trigonometric
//!   series, accurate for moderate imaginary parts (|Im z| <= 8),
//! * imaginary error function `erfi(z) = -i erf(iz)`,
//! * generalized hypergeometric sums `2F2` by direct term summation with
//!   compensated accumulation and a tail estimate,
//! * gamma at half-integer arguments as exact rational multiples of sqrt(pi).
//!
//! Everything here is deterministic: fixed summation orders, no internal
//! randomness, no environment-dependent branching.

// Minimax coefficient tables and frozen reference values keep every digit of
// their published/high-precision sources, beyond what f64 can distinguish.
#![allow(clippy::excessive_precision)]

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::{Rational, C64};

/// sqrt(pi), to full double precision.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;
/// 2 / sqrt(pi).
pub const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialError {
    #[error("complex error function loses precision for |Im z| > 8 (got {0})")]
    ErfImagRange(f64),
    #[error("imaginary error function loses precision for |Re z| > 8 (got {0})")]
    ErfiRealRange(f64),
    #[error("hypergeometric lower parameter {0} hits zero at term {1}")]
    HypergeometricPole(f64, usize),
    #[error("gamma pole at non-positive integer argument {0}/2")]
    GammaPole(i64),
    #[error("exact sqrt(pi) coefficient only exists for odd half-integer arguments, got {0}/2")]
    GammaCoeffParity(i64),
    #[error("exp(z^2) overflows the double range (Re(z^2) = {0})")]
    ExpOverflow(f64),
}

// Rational minimax coefficients for erf/erfc on the three classical regions
// (|x| <= 0.46875, 0.46875 < x <= 4, x > 4). Relative error below 1.2e-16.
const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const ERF_B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const ERFC_C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94e0,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const ERFC_D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
const ERFC_P: [f64; 6] = [
    3.053_266_349_612_323_44e-1,
    3.603_448_999_498_044_39e-1,
    1.257_817_261_112_292_46e-1,
    1.608_378_514_874_227_66e-2,
    6.587_491_615_298_378_03e-4,
    1.631_538_713_730_209_78e-2,
];
const ERFC_Q: [f64; 5] = [
    2.568_520_192_289_822_42e0,
    1.872_952_849_923_460_47e0,
    5.279_051_029_514_284_12e-1,
    6.051_834_131_244_131_91e-2,
    2.335_204_976_268_691_85e-3,
];
const ONE_OVER_SQRT_PI: f64 = 5.641_895_835_477_562_9e-1;

/// erfc(y) * exp(y^2) for y in (0.46875, infinity), region 2/3 rational fits.
fn erfc_scaled_pos(y: f64) -> f64 {
    if y <= 4.0 {
        let mut xnum = ERFC_C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + ERFC_C[i]) * y;
            xden = (xden + ERFC_D[i]) * y;
        }
        (xnum + ERFC_C[7]) / (xden + ERFC_D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut xnum = ERFC_P[5] * z;
        let mut xden = z;
        for i in 0..4 {
            xnum = (xnum + ERFC_P[i]) * z;
            xden = (xden + ERFC_Q[i]) * z;
        }
        let r = z * (xnum + ERFC_P[4]) / (xden + ERFC_Q[4]);
        (ONE_OVER_SQRT_PI - r) / y
    }
}

/// Split exp(-y^2) as exp(-hi^2)*exp(-lo) with hi a 1/16 multiple, which
/// avoids the rounding of y*y dominating the tail.
fn exp_minus_square(y: f64) -> f64 {
    let hi = (y * 16.0).trunc() / 16.0;
    let del = (y - hi) * (y + hi);
    (-hi * hi).exp() * (-del).exp()
}

/// Real error function.
pub fn erf_real(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.46875 {
        let z = y * y;
        let mut xnum = ERF_A[4] * z;
        let mut xden = z;
        for i in 0..3 {
            xnum = (xnum + ERF_A[i]) * z;
            xden = (xden + ERF_B[i]) * z;
        }
        return x * (xnum + ERF_A[3]) / (xden + ERF_B[3]);
    }
    let erfc = erfc_scaled_pos(y) * exp_minus_square(y);
    if x > 0.0 {
        1.0 - erfc
    } else {
        erfc - 1.0
    }
}

/// Real complementary error function, accurate in the far tail.
pub fn erfc_real(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.46875 {
        return 1.0 - erf_real(x);
    }
    let erfc = erfc_scaled_pos(y) * exp_minus_square(y);
    if x > 0.0 {
        erfc
    } else {
        2.0 - erfc
    }
}

/// erfc(x) * exp(x^2) for real x, stable where erfc underflows.
pub fn erfcx_real(x: f64) -> f64 {
    if x > 0.46875 {
        erfc_scaled_pos(x)
    } else {
        erfc_real(x) * (x * x).exp()
    }
}

/// Real imaginary error function `erfi(y) = -i erf(iy)`.
///
/// The defining series has all-positive terms for real arguments, so there is
/// no cancellation; it is summed to machine precision.
pub fn erfi_real(y: f64) -> f64 {
    let z = y * y;
    let mut term = y;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut k = 0u32;
    loop {
        let contrib = term / (2 * k + 1) as f64;
        neumaier(&mut sum, &mut comp, contrib);
        if contrib.abs() <= f64::EPSILON * sum.abs() && k > 2 {
            break;
        }
        k += 1;
        term *= z / k as f64;
        if k > 400 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (sum + comp)
}

fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Complex error function.
///
/// Exact on the real and imaginary axes (delegating to the real
/// implementations); elsewhere an exponentially convergent series with
/// absolute accuracy around 1e-15 times the local scale. Arguments with
/// |Im z| > 8 are rejected because the series' dynamic range degrades.
pub fn erf(z: C64) -> Result<C64, SpecialError> {
    if z.im.abs() > 8.0 {
        return Err(SpecialError::ErfImagRange(z.im));
    }
    if z.im == 0.0 {
        return Ok(C64::new(erf_real(z.re), 0.0));
    }
    if z.re == 0.0 {
        return Ok(C64::new(0.0, erfi_real(z.im)));
    }
    // Oddness reduces to Re z > 0.
    if z.re < 0.0 {
        return erf(-z).map(|w| -w);
    }
    let (x, y) = (z.re, z.im);
    if x < 1e-8 {
        // First-order expansion off the imaginary axis; the series below
        // loses accuracy in its 1/x terms here.
        let scale = FRAC_2_SQRT_PI * (y * y).exp();
        return Ok(C64::new(scale * x, erfi_real(y) - scale * x * x * y));
    }
    let emx2 = (-x * x).exp();
    let s2 = (x * y).sin();
    let re0 = erf_real(x) + emx2 / (2.0 * std::f64::consts::PI * x) * 2.0 * s2 * s2;
    let im0 = emx2 / (2.0 * std::f64::consts::PI * x) * (2.0 * x * y).sin();
    let kmax = (2.0 * y.abs() + 2.0 * (y * y + 45.0).sqrt()).ceil() as u32 + 1;
    let (mut re, mut im) = (0.0, 0.0);
    let (mut cre, mut cim) = (0.0, 0.0);
    let (c2xy, s2xy) = ((2.0 * x * y).cos(), (2.0 * x * y).sin());
    for k in 1..=kmax {
        let kf = k as f64;
        let damp = (-kf * kf / 4.0).exp() / (kf * kf + 4.0 * x * x);
        let (ch, sh) = ((kf * y).cosh(), (kf * y).sinh());
        let fk = 2.0 * x - 2.0 * x * ch * c2xy + kf * sh * s2xy;
        let gk = 2.0 * x * ch * s2xy + kf * sh * c2xy;
        neumaier(&mut re, &mut cre, damp * fk);
        neumaier(&mut im, &mut cim, damp * gk);
    }
    let scale = 2.0 / std::f64::consts::PI * emx2;
    Ok(C64::new(re0 + scale * (re + cre), im0 + scale * (im + cim)))
}

/// Scaled complementary error function `exp(z^2) erfc(z)` for complex
/// arguments.
///
/// On the real axis this is stable on the whole representable range; off the
/// axis it is computed as the literal product, so it inherits the erf
/// cancellation for Re z larger than about 6 and rejects arguments whose
/// `exp(z^2)` factor overflows outright.
pub fn erfcx(z: C64) -> Result<C64, SpecialError> {
    if z.im == 0.0 {
        if z.re < -26.0 {
            return Err(SpecialError::ExpOverflow(z.re * z.re));
        }
        return Ok(C64::new(erfcx_real(z.re), 0.0));
    }
    let re_z2 = z.re * z.re - z.im * z.im;
    if re_z2 > 700.0 {
        return Err(SpecialError::ExpOverflow(re_z2));
    }
    let one = C64::new(1.0, 0.0);
    Ok((z * z).exp() * (one - erf(z)?))
}

/// Complex imaginary error function, `erfi(z) = -i erf(iz)`.
pub fn erfi(z: C64) -> Result<C64, SpecialError> {
    if z.re.abs() > 8.0 {
        return Err(SpecialError::ErfiRealRange(z.re));
    }
    let w = erf(C64::new(-z.im, z.re)).map_err(|_| SpecialError::ErfiRealRange(z.re))?;
    Ok(C64::new(w.im, -w.re))
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Generalized hypergeometric sum `2F2(a1, a2; b1, b2; z)` with its tail
/// estimate (an upper bound on the dropped terms, from the last computed
/// term and the convergence ratio).
///
/// Terms are accumulated with compensated summation in a fixed order, capped
/// at 300 terms; the factorially decaying ratio makes the cap unreachable for
/// the argument ranges used in this crate.
pub fn hyp2f2_with_tail(a: (f64, f64), b: (f64, f64), z: C64) -> Result<(C64, f64), SpecialError> {
    const CAP: usize = 300;
    let mut term = C64::new(1.0, 0.0);
    let (mut re, mut im) = (0.0, 0.0);
    let (mut cre, mut cim) = (0.0, 0.0);
    neumaier(&mut re, &mut cre, 1.0);
    let mut tail = f64::INFINITY;
    for k in 0..CAP {
        let kf = k as f64;
        let (na, nb) = (a.0 + kf, a.1 + kf);
        if na == 0.0 || nb == 0.0 {
            // Terminating series: the polynomial case.
            tail = 0.0;
            break;
        }
        let (da, db) = (b.0 + kf, b.1 + kf);
        if da == 0.0 {
            return Err(SpecialError::HypergeometricPole(b.0, k + 1));
        }
        if db == 0.0 {
            return Err(SpecialError::HypergeometricPole(b.1, k + 1));
        }
        term = term * z * (na * nb) / (da * db * (kf + 1.0));
        neumaier(&mut re, &mut cre, term.re);
        neumaier(&mut im, &mut cim, term.im);
        let sum_mag = (re + cre).hypot(im + cim);
        // Ratio of consecutive terms; once well below one, bound the tail by
        // a geometric series.
        let ratio = z.norm()
            * ((a.0 + kf + 1.0) * (a.1 + kf + 1.0)
                / ((b.0 + kf + 1.0) * (b.1 + kf + 1.0) * (kf + 2.0)))
                .abs();
        if ratio < 0.5 {
            tail = term.norm() * ratio / (1.0 - ratio);
            if tail <= 1e-17 * sum_mag.max(f64::MIN_POSITIVE) {
                break;
            }
        }
    }
    Ok((C64::new(re + cre, im + cim), tail))
}

/// `2F2(a1, a2; b1, b2; z)`, value only.
pub fn hyp2f2(a: (f64, f64), b: (f64, f64), z: C64) -> Result<C64, SpecialError> {
    hyp2f2_with_tail(a, b, z).map(|(v, _)| v)
}

/// Exact coefficient `c` with `Gamma(twice_x / 2) = c * sqrt(pi)`, defined
/// for odd `twice_x` (half-integer arguments, where no pole can occur).
pub fn gamma_half_coeff(twice_x: i64) -> Result<Rational, SpecialError> {
    if twice_x % 2 == 0 {
        return Err(SpecialError::GammaCoeffParity(twice_x));
    }
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut coeff = Rational::one();
    // Walk from Gamma(1/2) to Gamma(twice_x/2) with the functional equation.
    let mut arg = half.clone(); // current argument with Gamma(arg) = coeff*sqrt(pi)
    let target = Rational::new(BigInt::from(twice_x), BigInt::from(2));
    while arg < target {
        coeff *= arg.clone();
        arg += Rational::one();
    }
    while arg > target {
        arg -= Rational::one();
        coeff /= arg.clone();
    }
    Ok(coeff)
}

/// Gamma at `twice_x / 2`: half-integers give exact sqrt(pi) multiples,
/// positive integers give factorials, non-positive integers are poles.
pub fn gamma_half_integer(twice_x: i64) -> Result<f64, SpecialError> {
    if twice_x % 2 == 0 {
        let m = twice_x / 2;
        if m <= 0 {
            return Err(SpecialError::GammaPole(twice_x));
        }
        let mut acc = 1.0;
        for i in 1..m {
            acc *= i as f64;
        }
        Ok(acc)
    } else {
        let c = gamma_half_coeff(twice_x)?;
        Ok(crate::rational_to_f64(&c) * SQRT_PI)
    }
}

/// Exact factorial as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Exact rising factorial over the rationals.
pub fn pochhammer_rational(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= x.clone();
        x += Rational::one();
    }
    acc
}
