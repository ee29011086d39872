//! Minimal surfaces from the family, via the Enneper-Weierstrass
//! representation.
//!
//! The Weierstrass data attached to degree parameter `n` is
//!
//! ```text
//! eta^2(z) = c1^2 exp(z^2) (1 + 2z^2)^2
//! chi(z)   = -(2n / (lambda c1^2)) (c2 + (sqrt(pi)/4) erf(z)
//!            + z exp(-z^2) / (2 (1 + 2z^2)))
//! ```
//!
//! chosen so that `-lambda eta^2 chi' = 2n` identically — the pairing that
//! makes the associated linear problem's zero-curvature condition collapse
//! to the family's second-order equation. The immersion is
//!
//! ```text
//! F = ( Re(I1 - I2)/2, -Im(I1 + I2)/2, Re I3 ),
//! I1 = \int eta^2, I2 = \int eta^2 chi^2, I3 = \int eta^2 chi,
//! ```
//!
//! all taken from the basepoint `xi0`. Each integral has a closed form in
//! `erf`/`erfi` and `2F2` sums, except for one genuinely non-elementary
//! piece of `I2` proportional to `\int exp(z^2)(1+2z^2)^2 erf(z)^2 dz`,
//! which is evaluated by contour quadrature; everything else is
//! cross-checked against quadrature in tests. All integrands are entire,
//! so the integrals are path independent; the densities for `I2`, `I3` are
//! assembled in pole-free form (the simple poles of `chi` at
//! `z = +/- i/sqrt(2)` cancel against the double zeros of `eta^2`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::integrate_path;
use crate::series::{self, NormalizedSolution, SeriesSolution};
use crate::special::{self, SpecialError, SQRT_PI};
use crate::C64;

#[derive(Debug, Error)]
pub enum WeierstrassError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("the Gauss map has a pole at z = {0} (1 + 2z^2 = 0)")]
    GaussMapPole(C64),
}

/// Parameters of the immersion: degree `n`, the two integration constants
/// `c1`, `c2` of the Weierstrass data, the spectral scale `lambda`, and the
/// integration basepoint `xi0` (where the surface passes through the
/// origin).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassParams {
    pub n: u64,
    pub c1: f64,
    pub c2: f64,
    pub lambda: f64,
    pub xi0: C64,
}

impl Default for WeierstrassParams {
    fn default() -> Self {
        WeierstrassParams {
            n: 3,
            c1: 1.0,
            c2: 1.0,
            lambda: SQRT_PI,
            xi0: C64::new(1.0, 3.0),
        }
    }
}

/// `exp(z^2) (1 + 2z^2)^2`: the entire density behind `I1` (and the
/// reciprocal of the family's orthogonality weight continued to complex
/// arguments).
fn weight_entire(z: C64) -> C64 {
    let d = 1.0 + 2.0 * z * z;
    (z * z).exp() * d * d
}

/// `eta^2(z) = c1^2 exp(z^2)(1+2z^2)^2`.
pub fn eta_squared(p: &WeierstrassParams, z: C64) -> C64 {
    p.c1 * p.c1 * weight_entire(z)
}

/// `d/dz eta^2 = 2 c1^2 z exp(z^2) (1+2z^2)(2z^2+5)`.
pub fn eta_squared_derivative(p: &WeierstrassParams, z: C64) -> C64 {
    let z2 = z * z;
    2.0 * p.c1 * p.c1 * z * z2.exp() * (1.0 + 2.0 * z2) * (2.0 * z2 + 5.0)
}

/// The Gauss-map component `chi`; poles at `1 + 2z^2 = 0` are rejected.
pub fn chi(p: &WeierstrassParams, z: C64) -> Result<C64, WeierstrassError> {
    let d = 1.0 + 2.0 * z * z;
    if d.norm() < 1e-12 {
        return Err(WeierstrassError::GaussMapPole(z));
    }
    let b = p.c2 + SQRT_PI / 4.0 * special::erf(z)?;
    let a = z * (-z * z).exp() / (2.0 * d);
    Ok(-(2.0 * p.n as f64 / (p.lambda * p.c1 * p.c1)) * (b + a))
}

/// `chi'(z) = -(2n/(lambda c1^2)) exp(-z^2)/(1+2z^2)^2`, so that
/// `-lambda eta^2 chi' = 2n` holds identically.
pub fn chi_derivative(p: &WeierstrassParams, z: C64) -> Result<C64, WeierstrassError> {
    let d = 1.0 + 2.0 * z * z;
    if d.norm() < 1e-12 {
        return Err(WeierstrassError::GaussMapPole(z));
    }
    Ok(-(2.0 * p.n as f64 / (p.lambda * p.c1 * p.c1)) * (-z * z).exp() / (d * d))
}

/// `eta^2 chi`, in pole-free entire form.
fn i3_density(p: &WeierstrassParams, z: C64) -> Result<C64, SpecialError> {
    let b = p.c2 + SQRT_PI / 4.0 * special::erf(z)?;
    let elementary = 0.5 * z * (1.0 + 2.0 * z * z);
    Ok(-(2.0 * p.n as f64 / p.lambda) * (b * weight_entire(z) + elementary))
}

/// `eta^2 chi^2`, in pole-free entire form.
fn i2_density(p: &WeierstrassParams, z: C64) -> Result<C64, SpecialError> {
    let n = p.n as f64;
    let b = p.c2 + SQRT_PI / 4.0 * special::erf(z)?;
    let pref = 4.0 * n * n / (p.lambda * p.lambda * p.c1 * p.c1);
    let z2 = z * z;
    Ok(pref * (b * b * weight_entire(z) + b * z * (1.0 + 2.0 * z2) + 0.25 * z2 * (-z2).exp()))
}

/// The non-elementary density left over in `I2`'s closed form.
fn residual_density(z: C64) -> Result<C64, SpecialError> {
    let e = special::erf(z)?;
    Ok(weight_entire(z) * e * e)
}

/// Antiderivative of [`weight_entire`]:
/// `G(z) = sqrt(pi) erfi(z) + z (2z^2 - 1) exp(z^2)`.
fn antiderivative_weight(z: C64) -> Result<C64, SpecialError> {
    Ok(SQRT_PI * special::erfi(z)? + z * (2.0 * z * z - 1.0) * (z * z).exp())
}

/// `S_b(z) = z^2 2F2(1, 1; b, 2; z^2)`: the building block of the
/// antiderivatives of `exp(z^2)-type densities times erf`.
fn s_block(b: f64, z: C64) -> Result<C64, SpecialError> {
    let v = special::hyp2f2((1.0, 1.0), (b, 2.0), z * z)?;
    Ok(z * z * v)
}

/// Antiderivative of `(c2 + (sqrt(pi)/4) erf) weight + z(1+2z^2)/2`, i.e.
/// of `eta^2 chi / (-2n c1^{-2} / lambda)`... concretely: `I3 =
/// -(2n/lambda) [phi3]` with
/// `phi3 = c2 G - S_{-1/2}/4 + S_{1/2}/2 + S_{3/2}/4`.
fn phi3(c2: f64, z: C64) -> Result<C64, SpecialError> {
    Ok(c2 * antiderivative_weight(z)? - 0.25 * s_block(-0.5, z)?
        + 0.5 * s_block(0.5, z)?
        + 0.25 * s_block(1.5, z)?)
}

/// Elementary-plus-`2F2` part of the `I2` antiderivative:
/// `I2 = (4n^2/(lambda^2 c1^2)) [phi2] + (n^2 pi / (4 lambda^2 c1^2)) Q`
/// with `Q` the residual contour integral and
/// `phi2 = c2^2 G + c2 (-S_{-1/2}/2 + S_{1/2} + S_{3/2}/2)
///        + (sqrt(pi)/32)(4z^4 + 4z^2 - 3) erf(z)
///        + z (2z^2 + 3) exp(-z^2)/16`.
fn phi2(c2: f64, z: C64) -> Result<C64, SpecialError> {
    let g = antiderivative_weight(z)?;
    let s = -0.5 * s_block(-0.5, z)? + s_block(0.5, z)? + 0.5 * s_block(1.5, z)?;
    let z2 = z * z;
    let erf = special::erf(z)?;
    let elementary = SQRT_PI / 32.0 * (4.0 * z2 * z2 + 4.0 * z2 - 3.0) * erf
        + z * (2.0 * z2 + 3.0) * (-z2).exp() / 16.0;
    Ok(c2 * c2 * g + c2 * s + elementary)
}

/// The three contour integrals from `xi0` to a point, plus an estimate of
/// the quadrature error in the one non-elementary piece.
#[derive(Debug, Clone, Copy)]
pub struct ImmersionIntegrals {
    pub i1: C64,
    pub i2: C64,
    pub i3: C64,
    pub quadrature_error: f64,
}

impl ImmersionIntegrals {
    /// The immersion point `(Re(I1-I2)/2, -Im(I1+I2)/2, Re I3)`.
    pub fn position(&self) -> [f64; 3] {
        [
            0.5 * (self.i1 - self.i2).re,
            -0.5 * (self.i1 + self.i2).im,
            self.i3.re,
        ]
    }
}

/// Closed-form pieces evaluated at the basepoint, computed once per mesh.
struct BaseValues {
    g: C64,
    phi2: C64,
    phi3: C64,
}

fn base_values(p: &WeierstrassParams) -> Result<BaseValues, SpecialError> {
    Ok(BaseValues {
        g: antiderivative_weight(p.xi0)?,
        phi2: phi2(p.c2, p.xi0)?,
        phi3: phi3(p.c2, p.xi0)?,
    })
}

fn assemble(
    p: &WeierstrassParams,
    base: &BaseValues,
    xi: C64,
    q: C64,
    q_err: f64,
) -> Result<ImmersionIntegrals, SpecialError> {
    let n = p.n as f64;
    let scale2 = p.lambda * p.lambda * p.c1 * p.c1;
    let i1 = p.c1 * p.c1 * (antiderivative_weight(xi)? - base.g);
    let (i2, i3, err) = if p.n == 0 {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.0)
    } else {
        let i3 = -(2.0 * n / p.lambda) * (phi3(p.c2, xi)? - base.phi3);
        let residual_pref = n * n * std::f64::consts::PI / (4.0 * scale2);
        let i2 = 4.0 * n * n / scale2 * (phi2(p.c2, xi)? - base.phi2) + residual_pref * q;
        (i2, i3, residual_pref * q_err)
    };
    Ok(ImmersionIntegrals {
        i1,
        i2,
        i3,
        quadrature_error: err,
    })
}

/// Every point this crate evaluates must stay in the strip where the
/// complex error function is accurate.
fn ensure_strip(points: &[C64]) -> Result<(), WeierstrassError> {
    for z in points {
        if z.im.abs() > 8.0 {
            return Err(WeierstrassError::Special(SpecialError::ErfImagRange(z.im)));
        }
    }
    Ok(())
}

/// The integrals by their closed forms (quadrature only for the residual
/// `I2` piece, along the straight segment from the basepoint).
pub fn immersion_integrals(
    p: &WeierstrassParams,
    xi: C64,
) -> Result<ImmersionIntegrals, WeierstrassError> {
    ensure_strip(&[p.xi0, xi])?;
    let base = base_values(p)?;
    let (q, q_err) = if p.n == 0 {
        (C64::new(0.0, 0.0), 0.0)
    } else {
        integrate_path(&|z| residual_density(z).expect("strip checked"), p.xi0, xi)
    };
    Ok(assemble(p, &base, xi, q, q_err)?)
}

/// The integrals by straight-segment contour quadrature of the densities
/// `eta^2`, `eta^2 chi^2`, `eta^2 chi` — the independent cross-check of
/// every closed form above.
pub fn immersion_integrals_quadrature(
    p: &WeierstrassParams,
    xi: C64,
) -> Result<ImmersionIntegrals, WeierstrassError> {
    ensure_strip(&[p.xi0, xi])?;
    let (i1, e1) = integrate_path(&|z| eta_squared(p, z), p.xi0, xi);
    let (i2, e2) = integrate_path(&|z| i2_density(p, z).expect("strip checked"), p.xi0, xi);
    let (i3, e3) = integrate_path(&|z| i3_density(p, z).expect("strip checked"), p.xi0, xi);
    Ok(ImmersionIntegrals {
        i1,
        i2,
        i3,
        quadrature_error: e1 + e2 + e3,
    })
}

/// Immersion point and accumulated quadrature-error estimate.
pub fn immersion_point(
    p: &WeierstrassParams,
    xi: C64,
) -> Result<([f64; 3], f64), WeierstrassError> {
    let ints = immersion_integrals(p, xi)?;
    Ok((ints.position(), ints.quadrature_error))
}

/// 2x2 complex matrix.
pub type Matrix2 = [[C64; 2]; 2];

/// The su(2)-valued translation frame
/// `-(i/2) [[I3 + conj I3, I1 - conj I2], [conj I1 - I2, -(I3 + conj I3)]]`,
/// equal to `-i (F1 s1 + F2 s2 + F3 s3)` in the Pauli basis. Traceless and
/// anti-Hermitian by construction, exactly, including in floating point.
pub fn su2_frame(ints: &ImmersionIntegrals) -> Matrix2 {
    let neg_half_i = C64::new(0.0, -0.5);
    let d = ints.i3 + ints.i3.conj();
    let top = ints.i1 - ints.i2.conj();
    let bot = ints.i1.conj() - ints.i2;
    [
        [neg_half_i * d, neg_half_i * top],
        [neg_half_i * bot, -(neg_half_i * d)],
    ]
}

/// Killing-form square `<M, M> = -Tr(M^2)/2`; for the frame above this is
/// `F1^2 + F2^2 + F3^2` (up to roundoff in the imaginary part).
pub fn frame_inner_product(m: &Matrix2) -> C64 {
    -(m[0][0] * m[0][0] + m[0][1] * m[1][0])
}

/// The zero-curvature potential `lambda eta^2 [[chi, -1], [chi^2, -chi]]`,
/// assembled from the pole-free densities; traceless with vanishing
/// determinant.
pub fn potential_matrix(p: &WeierstrassParams, z: C64) -> Result<Matrix2, WeierstrassError> {
    ensure_strip(&[z])?;
    let u11 = p.lambda * i3_density(p, z)?;
    let u12 = -p.lambda * eta_squared(p, z);
    let u21 = p.lambda * i2_density(p, z)?;
    Ok([[u11, u12], [u21, -u11]])
}

/// A solution of the linear problem `d/dz Psi = U Psi`: the first component
/// is the general solution `k1 alpha_n + k2 beta_n` of the family's
/// second-order equation, the second the combination
/// `chi Psi_1 - Psi_1' / (lambda eta^2)` forced by the first row of the
/// system.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    params: WeierstrassParams,
    k1: C64,
    k2: C64,
    alpha: NormalizedSolution,
    beta: SeriesSolution,
}

impl Wavefunction {
    /// Series truncations are chosen for evaluation with `|z|` up to ~2.5.
    pub fn new(params: &WeierstrassParams, k1: C64, k2: C64) -> Self {
        let trunc = series::truncation_for_radius(params.n, 2.5);
        Wavefunction {
            params: params.clone(),
            k1,
            k2,
            alpha: series::alpha(params.n, trunc),
            beta: series::beta(params.n, trunc),
        }
    }

    fn first_component(&self, order: u32, z: C64) -> Result<C64, SpecialError> {
        let a = self.alpha.eval_derivative_precise(order, z)?;
        let b = self.beta.eval_derivative_precise(order, z);
        Ok(self.k1 * a + self.k2 * b)
    }

    /// `[Psi_1, Psi_2]` at `z`.
    pub fn value(&self, z: C64) -> Result<[C64; 2], WeierstrassError> {
        let psi1 = self.first_component(0, z)?;
        let d1 = self.first_component(1, z)?;
        let x = chi(&self.params, z)?;
        let e2 = eta_squared(&self.params, z);
        Ok([psi1, x * psi1 - d1 / (self.params.lambda * e2)])
    }

    /// `d/dz [Psi_1, Psi_2]` at `z`, by closed-form differentiation.
    pub fn derivative(&self, z: C64) -> Result<[C64; 2], WeierstrassError> {
        let psi1 = self.first_component(0, z)?;
        let d1 = self.first_component(1, z)?;
        let d2 = self.first_component(2, z)?;
        let x = chi(&self.params, z)?;
        let xp = chi_derivative(&self.params, z)?;
        let e2 = eta_squared(&self.params, z);
        let e2p = eta_squared_derivative(&self.params, z);
        let lam = self.params.lambda;
        let dpsi2 = xp * psi1 + x * d1 - d2 / (lam * e2) + d1 * e2p / (lam * e2 * e2);
        Ok([d1, dpsi2])
    }
}

/// Rectangular evaluation grid in the `z`-plane: `nu x nv` vertices over
/// `[u0, u1] x [v0, v1]`, vertex `(i, j)` at `u_i + i v_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub domain: [f64; 4],
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            nu: 41,
            nv: 41,
            domain: [-1.0, 1.0, -1.0, 1.0],
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

impl GridSpec {
    pub fn u_values(&self) -> Vec<f64> {
        linspace(self.domain[0], self.domain[1], self.nu)
    }

    pub fn v_values(&self) -> Vec<f64> {
        linspace(self.domain[2], self.domain[3], self.nv)
    }

    /// Grid refined by halving both spacings (each count `n -> 2n - 1`),
    /// keeping the original vertices at even indices.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            nu: 2 * self.nu - 1,
            nv: 2 * self.nv - 1,
            domain: self.domain,
        }
    }
}

/// One evaluated surface vertex.
#[derive(Debug, Clone, Serialize)]
pub struct MeshVertex {
    pub u: f64,
    pub v: f64,
    pub position: [f64; 3],
    pub quadrature_error: f64,
}

/// An evaluated surface patch, vertices in row-major order (`j * nu + i`).
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceMesh {
    pub params: WeierstrassParams,
    pub grid: GridSpec,
    pub vertices: Vec<MeshVertex>,
}

impl SurfaceMesh {
    pub fn vertex(&self, i: usize, j: usize) -> &MeshVertex {
        &self.vertices[j * self.grid.nu + i]
    }

    /// Quad faces as 0-based vertex indices, counter-clockwise in `(u,v)`.
    pub fn quad_faces(&self) -> Vec<[usize; 4]> {
        let (nu, nv) = (self.grid.nu, self.grid.nv);
        let mut faces = Vec::with_capacity((nu - 1) * (nv - 1));
        for j in 0..nv - 1 {
            for i in 0..nu - 1 {
                let a = j * nu + i;
                faces.push([a, a + 1, a + nu + 1, a + nu]);
            }
        }
        faces
    }
}

/// Evaluate the immersion over a grid.
///
/// The residual contour integral is accumulated incrementally: one pass
/// down the first column, then along each row, so the total quadrature work
/// is proportional to the number of vertices. Row passes are independent;
/// setting the environment variable `XHERM_THREADS` to a number larger
/// than 1 distributes them over that many OS threads with bit-identical
/// output.
pub fn generate_mesh(
    p: &WeierstrassParams,
    grid: &GridSpec,
) -> Result<SurfaceMesh, WeierstrassError> {
    let threads = std::env::var("XHERM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(1);
    generate_mesh_with_threads(p, grid, threads)
}

/// [`generate_mesh`] with an explicit thread count (1 = fully sequential).
/// The result is identical for every thread count.
pub fn generate_mesh_with_threads(
    p: &WeierstrassParams,
    grid: &GridSpec,
    threads: usize,
) -> Result<SurfaceMesh, WeierstrassError> {
    assert!(grid.nu >= 1 && grid.nv >= 1, "grid must be non-empty");
    let us = grid.u_values();
    let vs = grid.v_values();
    let corner_checks: Vec<C64> = vs
        .iter()
        .map(|&v| C64::new(0.0, v))
        .chain([p.xi0])
        .collect();
    ensure_strip(&corner_checks)?;
    let base = base_values(p)?;
    let point = |i: usize, j: usize| C64::new(us[i], vs[j]);
    let density = |z: C64| residual_density(z).expect("strip checked");

    // First-column accumulation of the residual integral from the basepoint.
    let mut col: Vec<(C64, f64)> = Vec::with_capacity(grid.nv);
    if p.n == 0 {
        col = vec![(C64::new(0.0, 0.0), 0.0); grid.nv];
    } else {
        let first = integrate_path(&density, p.xi0, point(0, 0));
        col.push(first);
        for j in 1..grid.nv {
            let prev = col[j - 1];
            let (dq, de) = integrate_path(&density, point(0, j - 1), point(0, j));
            col.push((prev.0 + dq, prev.1 + de));
        }
    }

    let compute_row = |j: usize| -> Result<Vec<MeshVertex>, WeierstrassError> {
        let mut row = Vec::with_capacity(grid.nu);
        let (mut q, mut q_err) = col[j];
        for (i, &u) in us.iter().enumerate() {
            if i > 0 && p.n != 0 {
                let (dq, de) = integrate_path(&density, point(i - 1, j), point(i, j));
                q += dq;
                q_err += de;
            }
            let ints = assemble(p, &base, point(i, j), q, q_err)?;
            row.push(MeshVertex {
                u,
                v: vs[j],
                position: ints.position(),
                quadrature_error: ints.quadrature_error,
            });
        }
        Ok(row)
    };

    let mut rows: Vec<Option<Result<Vec<MeshVertex>, WeierstrassError>>> =
        (0..grid.nv).map(|_| None).collect();
    if threads <= 1 {
        for (j, slot) in rows.iter_mut().enumerate() {
            *slot = Some(compute_row(j));
        }
    } else {
        let chunk = grid.nv.div_ceil(threads);
        std::thread::scope(|s| {
            for (t, slice) in rows.chunks_mut(chunk).enumerate() {
                let compute_row = &compute_row;
                s.spawn(move || {
                    for (off, slot) in slice.iter_mut().enumerate() {
                        *slot = Some(compute_row(t * chunk + off));
                    }
                });
            }
        });
    }

    let mut vertices = Vec::with_capacity(grid.nu * grid.nv);
    for slot in rows {
        vertices.extend(slot.expect("every row computed")?);
    }
    Ok(SurfaceMesh {
        params: p.clone(),
        grid: grid.clone(),
        vertices,
    })
}

/// The surface's mirror level: reflecting the parameter through the real
/// axis fixes `F1`, `F3` and reflects `F2` through the constant
/// `C = -Im(I1(conj xi0) + I2(conj xi0))/4`, so the plane `F2 = C` is a
/// mirror plane of the surface. Returns `(C, quadrature_error)`.
pub fn mirror_level(p: &WeierstrassParams) -> Result<(f64, f64), WeierstrassError> {
    let ints = immersion_integrals(p, p.xi0.conj())?;
    Ok((-0.25 * (ints.i1 + ints.i2).im, ints.quadrature_error))
}
