//! The affine-invariant Riemannian structure of SPD(n).
//!
//! The metric at x is ⟨X, Y⟩ₓ = Tr(x⁻¹ X x⁻¹ Y). Geodesics, the
//! Riemannian logarithm and exponential, and the distance all reduce to
//! spectral computations on the whitened matrix x^{−1/2} y x^{−1/2}.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::{spd_exp, SpdMatrix, SymMatrix};

/// Minimum |det g| accepted by [`congruence_action`].
pub const MIN_ABS_DET: f64 = 1e-12;

/// Minimum distance between a vertex and the other points of an angle or
/// triangle.
pub const MIN_SEPARATION: f64 = 1e-12;

/// A tangent vector X ∈ T_x SPD(n), represented by a symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub base: SpdMatrix,
    pub vec: SymMatrix,
}

impl TangentVector {
    pub fn new(base: SpdMatrix, vec: SymMatrix) -> Result<Self> {
        check_dim(base.n(), vec.n())?;
        Ok(Self { base, vec })
    }

    pub fn norm(&self) -> f64 {
        metric(&self.base, &self.vec, &self.vec).sqrt()
    }
}

/// The geodesic segment from `x` (t = 0) to `y` (t = 1).
#[derive(Clone, Debug)]
pub struct GeodesicSegment {
    pub x: SpdMatrix,
    pub y: SpdMatrix,
    x_sqrt: SpdMatrix,
    // log(x^{-1/2} y x^{-1/2})
    velocity: SymMatrix,
}

impl GeodesicSegment {
    pub fn new(x: SpdMatrix, y: SpdMatrix) -> Result<Self> {
        check_dim(x.n(), y.n())?;
        let x_sqrt = x.sqrt();
        let velocity = whiten(&x, &y)?.log();
        Ok(Self {
            x,
            y,
            x_sqrt,
            velocity,
        })
    }

    pub fn length(&self) -> f64 {
        self.velocity.frobenius_norm()
    }

    pub fn at(&self, t: f64) -> Result<SpdMatrix> {
        let inner = spd_exp(&self.velocity.scale(t))?;
        SpdMatrix::new(inner.as_sym().sandwich(self.x_sqrt.as_sym()))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// x^{−1/2} · y · x^{−1/2}.
pub(crate) fn whiten(x: &SpdMatrix, y: &SpdMatrix) -> Result<SpdMatrix> {
    check_dim(x.n(), y.n())?;
    SpdMatrix::new(y.as_sym().sandwich(x.inv_sqrt().as_sym()))
}

/// The affine-invariant inner product Tr(x⁻¹ u x⁻¹ v).
pub fn metric(x: &SpdMatrix, u: &SymMatrix, v: &SymMatrix) -> f64 {
    let xi = x.inverse();
    let a = xi.as_matrix() * u.as_matrix();
    let b = xi.as_matrix() * v.as_matrix();
    // Tr(AB) = Σ_ij A_ij B_ji
    a.dot(&b.transpose())
}

/// γ(t) = x^{1/2} exp(t log(x^{−1/2} y x^{−1/2})) x^{1/2}, for any real t.
pub fn geodesic(seg: &GeodesicSegment, t: f64) -> Result<SpdMatrix> {
    seg.at(t)
}

/// Initial velocity at x of the geodesic reaching y at t = 1.
pub fn riem_log(x: &SpdMatrix, y: &SpdMatrix) -> Result<TangentVector> {
    let inner = whiten(x, y)?.log();
    let vec = inner.sandwich(x.sqrt().as_sym());
    Ok(TangentVector {
        base: x.clone(),
        vec,
    })
}

/// Endpoint at t = 1 of the geodesic leaving x with velocity v.
pub fn riem_exp(x: &SpdMatrix, v: &TangentVector) -> Result<SpdMatrix> {
    check_dim(x.n(), v.vec.n())?;
    let drift = (v.base.as_matrix() - x.as_matrix()).norm();
    if drift > 1e-12 * x.frobenius_norm() {
        return Err(Error::Precondition(format!(
            "tangent vector is based at a different point (offset {drift:e})"
        )));
    }
    exp_at(x, &v.vec)
}

/// Riemannian exponential at x applied to a symmetric matrix.
pub fn exp_at(x: &SpdMatrix, v: &SymMatrix) -> Result<SpdMatrix> {
    check_dim(x.n(), v.n())?;
    let inner = spd_exp(&v.sandwich(x.inv_sqrt().as_sym()))?;
    SpdMatrix::new(inner.as_sym().sandwich(x.sqrt().as_sym()))
}

/// Riemannian distance sqrt(Σ ln² λᵢ(x⁻¹y)), evaluated on the symmetric
/// matrix x^{−1/2} y x^{−1/2}.
pub fn distance(x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
    let w = whiten(x, y)?;
    Ok(w.eigen()
        .lambda
        .iter()
        .map(|l| l.ln().powi(2))
        .sum::<f64>()
        .sqrt())
}

/// The isometry x ↦ g·x·gᵀ.
pub fn congruence_action(g: &DMatrix<f64>, x: &SpdMatrix) -> Result<SpdMatrix> {
    if g.nrows() != g.ncols() {
        return Err(Error::NotSquare {
            rows: g.nrows(),
            cols: g.ncols(),
        });
    }
    check_dim(x.n(), g.nrows())?;
    let det = g.determinant();
    if !(det.abs() > MIN_ABS_DET) {
        return Err(Error::IllConditioned(format!(
            "|det g| = {:e} is below {MIN_ABS_DET:e}",
            det.abs()
        )));
    }
    SpdMatrix::new(x.congruence(g))
}

/// The geodesic symmetry at x: s_x(y) = x·y⁻¹·x.
pub fn geodesic_symmetry(x: &SpdMatrix, y: &SpdMatrix) -> Result<SpdMatrix> {
    check_dim(x.n(), y.n())?;
    SpdMatrix::new(y.inverse().as_sym().sandwich(x.as_sym()))
}

/// Angle at `vertex` between the geodesics to `p` and to `q`, in [0, π].
pub fn riemannian_angle(vertex: &SpdMatrix, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
    let u = riem_log(vertex, p)?;
    let w = riem_log(vertex, q)?;
    let nu = u.norm();
    let nw = w.norm();
    if nu <= MIN_SEPARATION || nw <= MIN_SEPARATION {
        return Err(Error::Domain(
            "angle undefined: a side point coincides with the vertex".into(),
        ));
    }
    let c = metric(vertex, &u.vec, &w.vec) / (nu * nw);
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// c² − a² − b² + 2ab·cos(∠ACB) for the geodesic triangle ABC, where a, b, c
/// are the side lengths opposite A, B, C. Non-negative on SPD(n).
pub fn al_kashi_slack(a: &SpdMatrix, b: &SpdMatrix, c: &SpdMatrix) -> Result<f64> {
    let side_a = distance(b, c)?;
    let side_b = distance(a, c)?;
    let side_c = distance(a, b)?;
    if side_a.min(side_b).min(side_c) <= MIN_SEPARATION {
        return Err(Error::Domain(
            "degenerate triangle: coincident vertices".into(),
        ));
    }
    let angle = riemannian_angle(c, a, b)?;
    Ok(side_c * side_c - side_a * side_a - side_b * side_b + 2.0 * side_a * side_b * angle.cos())
}

pub(crate) fn bracket(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Curvature tensor at the identity, R(X, Y)Z = [[X, Y], Z].
pub fn curvature_tensor_id(x: &SymMatrix, y: &SymMatrix, z: &SymMatrix) -> SymMatrix {
    let r = bracket(&bracket(x.as_matrix(), y.as_matrix()), z.as_matrix());
    debug_assert!(SymMatrix::max_asymmetry(&r) <= 1e-9 * r.amax().max(1.0));
    SymMatrix::symmetrize(r)
}

/// Sectional curvature at the identity of the plane spanned by X and Y,
/// ⟨[[X,Y],X], Y⟩ / (⟨X,X⟩⟨Y,Y⟩ − ⟨X,Y⟩²).
pub fn sectional_curvature_id(x: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    check_dim(x.n(), y.n())?;
    let xx = x.dot(x);
    let yy = y.dot(y);
    let xy = x.dot(y);
    let gram = xx * yy - xy * xy;
    if !(gram > 1e-12 * xx * yy) {
        return Err(Error::Domain(format!(
            "degenerate plane: Gram determinant {gram:e}"
        )));
    }
    Ok(curvature_tensor_id(x, y, x).dot(y) / gram)
}
