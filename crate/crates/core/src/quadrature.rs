//! Deterministic numerical integration, in two flavors:
//!
//! * tanh-sinh (double-exponential) quadrature for real integrals, with
//!   level halving, node reuse, and an interval-bisection fallback — used
//!   for the orthogonality integrals against the family weights;
//! * composite 32-point Gauss-Legendre panels for contour integrals along
//!   straight complex segments, with panel doubling until two successive
//!   refinements agree — used for the immersion's residual integral and for
//!   cross-checking every closed form.
//!
//! Every routine returns `(value, error_estimate)` where the estimate is the
//! observed change under the final refinement: a practical, not rigorous,
//! bound. Summation orders are fixed so results are bit-for-bit reproducible.

use std::sync::OnceLock;

use crate::exceptional::{weight_hhat, weight_xop};
use crate::C64;

/// Integration is restricted to `[-R, R]`: both family weights carry
/// `exp(-x^2)`, so the neglected tails are below `exp(-100)` relative scale.
pub const WEIGHT_CUTOFF: f64 = 10.0;

/// Which orthogonality weight to integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `exp(-x^2) / (4(1+2x^2))^2`, paired with the raw Wronskian members.
    Xop,
    /// `exp(-x^2) / (1+2x^2)^2`, paired with the normalized members.
    HHat,
}

impl WeightKind {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            WeightKind::Xop => weight_xop(x),
            WeightKind::HHat => weight_hhat(x),
        }
    }
}

/// tanh-sinh quadrature on a finite interval.
///
/// Levels halve the step `h` and reuse previous nodes (odd multiples of the
/// new step are the only new evaluations); convergence is declared when two
/// successive levels agree to near machine precision. Smooth integrands
/// converge doubly exponentially; if the level cap is hit the interval is
/// bisected and the halves integrated independently.
pub fn integrate_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    integrate_real_depth(f, a, b, 0)
}

fn integrate_real_depth<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // Node at mapped abscissa u in (-1, 1) with its tanh-sinh weight.
    let node = |t: f64| -> (f64, f64) {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        if s.abs() > 350.0 {
            return (s.signum(), 0.0);
        }
        let u = s.tanh();
        let ch = s.cosh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (ch * ch);
        (u, w)
    };
    let eval = |t: f64| -> f64 {
        let (u, w) = node(t);
        if w == 0.0 {
            0.0
        } else {
            w * f(mid + half * u)
        }
    };

    const T_MAX: f64 = 6.0;
    let mut h = 1.0f64;
    // Level 0: trapezoid of the transformed integrand at integer nodes.
    let mut sum = eval(0.0);
    let mut j = 1.0f64;
    while j <= T_MAX {
        sum += eval(j) + eval(-j);
        j += 1.0;
    }
    let mut value = sum * h * half;
    let mut prev;
    let mut err = f64::INFINITY;
    for _level in 0..11 {
        prev = value;
        h *= 0.5;
        // New nodes are the odd multiples of the refined step.
        let mut t = h;
        while t <= T_MAX {
            sum += eval(t) + eval(-t);
            t += 2.0 * h;
        }
        value = sum * h * half;
        err = (value - prev).abs();
        if err <= 1e-14 * value.abs().max(1e-300) + 1e-305 {
            return (value, err);
        }
    }
    if depth >= 8 {
        return (value, err);
    }
    // Fallback: bisect and recurse; errors add.
    let (left, le) = integrate_real_depth(f, a, mid, depth + 1);
    let (right, re) = integrate_real_depth(f, mid, b, depth + 1);
    (left + right, le + re)
}

/// Whole-line integral of `f(x) * w(x)` for the given family weight,
/// truncated to `[-WEIGHT_CUTOFF, WEIGHT_CUTOFF]`.
pub fn integrate_weighted_line<F: Fn(f64) -> f64>(f: &F, weight: WeightKind) -> (f64, f64) {
    let g = |x: f64| f(x) * weight.eval(x);
    integrate_real(&g, -WEIGHT_CUTOFF, WEIGHT_CUTOFF)
}

/// 32-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre_32() -> &'static [(f64, f64); 32] {
    static NODES: OnceLock<[(f64, f64); 32]> = OnceLock::new();
    NODES.get_or_init(|| {
        const N: usize = 32;
        let mut out = [(0.0f64, 0.0f64); N];
        for (i, node) in out.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            // Newton's method on P_N(x) = 0.
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(N, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(N, x);
            *node = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// One Gauss-Legendre pass over `[from, to]` split into `panels` equal
/// segments.
fn gl_pass<F: Fn(C64) -> C64>(f: &F, from: C64, to: C64, panels: usize) -> C64 {
    let rule = gauss_legendre_32();
    let step = (to - from) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let a = from + step * p as f64;
        let center = a + step * 0.5;
        let half = step * 0.5;
        let mut local = C64::new(0.0, 0.0);
        for &(x, w) in rule.iter() {
            local += f(center + half * x) * w;
        }
        acc += local * half;
    }
    acc
}

/// Contour integral of an entire integrand along the straight segment from
/// `from` to `to`, by composite Gauss-Legendre with panel-count doubling.
pub fn integrate_path<F: Fn(C64) -> C64>(f: &F, from: C64, to: C64) -> (C64, f64) {
    if from == to {
        return (C64::new(0.0, 0.0), 0.0);
    }
    // Scale the starting panel count with the segment length: the
    // integrands here oscillate on a unit scale.
    let len = (to - from).norm();
    let mut panels = (len.ceil() as usize).max(1);
    let mut value = gl_pass(f, from, to, panels);
    let mut err = f64::INFINITY;
    for _ in 0..7 {
        panels *= 2;
        let refined = gl_pass(f, from, to, panels);
        err = (refined - value).norm();
        value = refined;
        if err <= 1e-13 * value.norm().max(1e-300) + 1e-305 {
            break;
        }
    }
    (value, err)
}

/// Contour integral along a polyline; segment values and error estimates
/// accumulate.
pub fn integrate_polyline<F: Fn(C64) -> C64>(f: &F, points: &[C64]) -> (C64, f64) {
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for pair in points.windows(2) {
        let (v, e) = integrate_path(f, pair[0], pair[1]);
        value += v;
        err += e;
    }
    (value, err)
}
