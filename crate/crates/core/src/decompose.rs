//! Geodesic projection onto a totally geodesic submanifold exp(E) and the
//! Mostow factorizations x = e·f·e on SPD(n) and g = k·f·e on GL(n).
//!
//! The projection π(x) is the closest point of exp(E) to x. It is found by
//! Riemannian gradient descent on exp(E): at y ∈ exp(E) the tangent space
//! of exp(E) is y^{1/2}·E·y^{1/2}, so the descent direction in whitened
//! coordinates is P_E(log(y^{−1/2} x y^{−1/2})). That same quantity vanishes
//! exactly at π(x), so its norm is both the stopping criterion and the
//! certificate that log(π^{−1/2} x π^{−1/2}) is orthogonal to E.
//!
//! Each iteration first tries a Newton step on that residual (Jacobian by
//! forward differences in basis coordinates) and falls back to the gradient
//! step with backtracking when the Newton step does not make progress.

use nalgebra::{DMatrix, DVector};

use crate::dexp::tau;
use crate::error::{Error, Result};
use crate::matfun::{spd_exp, sym_eigen, sym_log, EigenDecomposition, SpdMatrix, SymMatrix};
use crate::subspace::{lts_check, Subspace, DEFAULT_LTS_TOL};

/// Smallest admissible ratio of extreme singular values for [`mostow_gl`].
pub const MIN_INVERSE_CONDITION: f64 = 1e-10;

/// Number of step halvings before a projection step is declared stuck.
const MAX_HALVINGS: usize = 40;

/// Relative change of the squared distance treated as rounding noise.
const DISTANCE_SLACK: f64 = 1e-12;

/// Sufficient-decrease constant of the backtracking test.
const ARMIJO: f64 = 1e-4;

/// Coordinate increment of the finite-difference Jacobian in Newton steps.
const NEWTON_FD_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionOptions {
    /// Stop once ‖P_E(log(y^{−1/2} x y^{−1/2}))‖_F ≤ tol.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial step length; halved while the distance to x increases.
    pub step: f64,
    /// Reject subspaces that fail the Lie-triple-system check.
    pub strict: bool,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_iter: 500,
            step: 1.0,
            strict: true,
        }
    }
}

/// Result of [`geodesic_project`].
#[derive(Clone, Debug)]
pub struct Projection {
    pub pi: SpdMatrix,
    /// log π(x), an element of E.
    pub log_pi: SymMatrix,
    pub iterations: usize,
    pub residual: f64,
    /// Distance from x to π(x).
    pub distance: f64,
    /// False when the subspace was not verified to be a Lie triple system;
    /// the result is then only a stationary point of the distance on exp(E)
    /// and `residual` is the norm of the gradient in the chart u ↦ exp(u).
    pub uniqueness_guaranteed: bool,
}

// exp(±u/2) from one eigendecomposition of u.
fn half_exponentials(eig: &EigenDecomposition) -> (SymMatrix, SymMatrix) {
    let plus: Vec<f64> = eig.lambda.iter().map(|l| (0.5 * l).exp()).collect();
    let minus: Vec<f64> = eig.lambda.iter().map(|l| (-0.5 * l).exp()).collect();
    (eig.compose(&plus), eig.compose(&minus))
}

// State of the descent at y = exp(u).
struct Iterate {
    u: SymMatrix,
    half: SymMatrix,
    // log(y^{-1/2} x y^{-1/2})
    whitened_log: SymMatrix,
    distance: f64,
}

impl Iterate {
    fn at(x: &SpdMatrix, u: SymMatrix) -> Result<Self> {
        let (half, half_inv) = half_exponentials(&sym_eigen(&u)?);
        let whitened_log = sym_log(&x.as_sym().sandwich(&half_inv))?;
        let distance = whitened_log.frobenius_norm();
        Ok(Self {
            u,
            half,
            whitened_log,
            distance,
        })
    }
}

fn check_subspace(x: &SpdMatrix, e: &Subspace, opts: &ProjectionOptions) -> Result<bool> {
    if e.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: e.n(),
        });
    }
    if !(opts.tol > 0.0) || !(opts.step > 0.0) {
        return Err(Error::Precondition("tol and step must be positive".into()));
    }
    let report = lts_check(e, DEFAULT_LTS_TOL);
    if !report.is_lts && opts.strict {
        let w = report.witness.expect("failed check carries a witness");
        return Err(Error::Precondition(format!(
            "subspace is not a Lie triple system: [B{}, [B{}, B{}]] leaves E with residual {:e}",
            w.indices.0, w.indices.1, w.indices.2, w.residual
        )));
    }
    Ok(report.is_lts)
}

/// Geodesic projection of x onto exp(E).
pub fn geodesic_project(
    x: &SpdMatrix,
    e: &Subspace,
    opts: &ProjectionOptions,
) -> Result<Projection> {
    if e.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: e.n(),
        });
    }
    let start = e.project(&x.log());
    geodesic_project_from(x, e, opts, &start)
}

/// Geodesic projection started from exp(P_E(init)) instead of the default
/// exp(P_E(log x)).
pub fn geodesic_project_from(
    x: &SpdMatrix,
    e: &Subspace,
    opts: &ProjectionOptions,
    init: &SymMatrix,
) -> Result<Projection> {
    let is_lts = check_subspace(x, e, opts)?;
    let descent = Descent { x, e, lts: is_lts };
    let mut cur = Iterate::at(x, e.project(init))?;
    let mut iterations = 0;
    loop {
        let g = descent.residual(&cur)?;
        let residual = norm(&g);
        if residual <= opts.tol {
            let pi = spd_exp(&cur.u)?;
            return Ok(Projection {
                pi,
                log_pi: cur.u,
                iterations,
                residual,
                distance: cur.distance,
                uniqueness_guaranteed: is_lts,
            });
        }
        if iterations == opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                residual,
            });
        }
        iterations += 1;

        let d2 = cur.distance * cur.distance;
        let slack = DISTANCE_SLACK * d2.max(1.0);
        let accept = |next: &Iterate, along: f64| {
            let n2 = next.distance * next.distance;
            n2 <= d2 - 2.0 * ARMIJO * along + slack
                || (n2 <= d2 + slack
                    && descent
                        .residual(next)
                        .is_ok_and(|r| norm(&r) <= 0.5 * residual))
        };

        if let Some(c) = descent.newton_direction(&cur, &g) {
            let along: f64 = c.iter().zip(&g).map(|(a, b)| a * b).sum();
            if let Ok(next) = descent.move_along(&cur, &e.combine(&c)) {
                if accept(&next, along) {
                    cur = next;
                    continue;
                }
            }
        }

        let grad = e.combine(&g);
        let mut step = opts.step;
        let mut halvings = 0;
        cur = loop {
            if let Ok(next) = descent.move_along(&cur, &grad.scale(step)) {
                if accept(&next, step * residual * residual) {
                    break next;
                }
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::NonConvergence {
                    iterations,
                    residual,
                });
            }
            step *= 0.5;
        };
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

// Moves and residuals of the descent. For a Lie triple system, moves are
// y^{1/2}·exp(h)·y^{1/2} and the residual is P_E(log(y^{-1/2} x y^{-1/2})).
// Otherwise exp(E) is not totally geodesic, so moves are u ↦ u + h in the
// chart and the residual is the chart gradient P_E(τ_u(log(y^{-1/2} x y^{-1/2}))).
struct Descent<'a> {
    x: &'a SpdMatrix,
    e: &'a Subspace,
    lts: bool,
}

impl Descent<'_> {
    fn residual(&self, it: &Iterate) -> Result<Vec<f64>> {
        if self.lts {
            Ok(self.e.coordinates(&it.whitened_log))
        } else {
            Ok(self.e.coordinates(&tau(&it.u, &it.whitened_log)?))
        }
    }

    fn move_along(&self, cur: &Iterate, h: &SymMatrix) -> Result<Iterate> {
        let u = if self.lts {
            let moved = spd_exp(h)?.as_sym().sandwich(&cur.half);
            self.e.project(&sym_log(&moved)?)
        } else {
            &cur.u + h
        };
        Iterate::at(self.x, u)
    }

    // Newton step for the residual in basis coordinates, with a
    // forward-difference Jacobian.
    fn newton_direction(&self, cur: &Iterate, g: &[f64]) -> Option<Vec<f64>> {
        let m = self.e.dim();
        let mut jac = DMatrix::zeros(m, m);
        for (k, b) in self.e.basis().iter().enumerate() {
            let next = self.move_along(cur, &b.scale(NEWTON_FD_STEP)).ok()?;
            let gk = self.residual(&next).ok()?;
            for (i, (a, b)) in gk.iter().zip(g).enumerate() {
                jac[(i, k)] = (a - b) / NEWTON_FD_STEP;
            }
        }
        let rhs = -DVector::from_column_slice(g);
        let c: Vec<f64> = jac.lu().solve(&rhs)?.iter().copied().collect();
        let along: f64 = c.iter().zip(g).map(|(a, b)| a * b).sum();
        (c.iter().all(|v| v.is_finite()) && along > 0.0).then_some(c)
    }
}

/// x = e·f·e with e ∈ exp(E), f ∈ exp(E^⊥).
#[derive(Clone, Debug)]
pub struct MostowFactors {
    pub e: SpdMatrix,
    pub f: SpdMatrix,
    /// π(x) = e².
    pub pi: SpdMatrix,
    pub iterations: usize,
    pub residual: f64,
    pub uniqueness_guaranteed: bool,
}

impl MostowFactors {
    pub fn reconstruct(&self) -> SymMatrix {
        self.f.as_sym().sandwich(self.e.as_sym())
    }

    /// ‖e·f·e − x‖_F / ‖x‖_F.
    pub fn reconstruction_error(&self, x: &SpdMatrix) -> f64 {
        (self.reconstruct().as_matrix() - x.as_matrix()).norm() / x.frobenius_norm()
    }

    /// ‖P_E(log f)‖_F, zero when f ∈ exp(E^⊥).
    pub fn f_membership_residual(&self, e_sub: &Subspace) -> f64 {
        e_sub.project(&self.f.log()).frobenius_norm()
    }

    /// ‖(I − P_E)(log e²)‖_F, zero when π(x) ∈ exp(E).
    pub fn pi_membership_residual(&self, e_sub: &Subspace) -> f64 {
        e_sub.reject(&self.pi.log()).frobenius_norm()
    }
}

fn factors_from_projection(x: &SpdMatrix, proj: Projection) -> Result<MostowFactors> {
    let eig = sym_eigen(&proj.log_pi)?;
    let (half, half_inv) = half_exponentials(&eig);
    Ok(MostowFactors {
        e: SpdMatrix::new(half)?,
        f: SpdMatrix::new(x.as_sym().sandwich(&half_inv))?,
        pi: proj.pi,
        iterations: proj.iterations,
        residual: proj.residual,
        uniqueness_guaranteed: proj.uniqueness_guaranteed,
    })
}

/// Mostow decomposition of an SPD matrix: e = π(x)^{1/2},
/// f = π(x)^{−1/2}·x·π(x)^{−1/2}.
pub fn mostow_spd(
    x: &SpdMatrix,
    e_sub: &Subspace,
    opts: &ProjectionOptions,
) -> Result<MostowFactors> {
    factors_from_projection(x, geodesic_project(x, e_sub, opts)?)
}

/// As [`mostow_spd`], with the projection started from exp(P_E(init)).
pub fn mostow_spd_from(
    x: &SpdMatrix,
    e_sub: &Subspace,
    opts: &ProjectionOptions,
    init: &SymMatrix,
) -> Result<MostowFactors> {
    factors_from_projection(x, geodesic_project_from(x, e_sub, opts, init)?)
}

/// g = k·f·e with k orthogonal, f ∈ exp(E^⊥), e ∈ exp(E).
#[derive(Clone, Debug)]
pub struct GlFactors {
    pub k: DMatrix<f64>,
    pub f: SpdMatrix,
    pub e: SpdMatrix,
    pub iterations: usize,
    pub residual: f64,
}

impl GlFactors {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.k * self.f.as_matrix() * self.e.as_matrix()
    }

    pub fn reconstruction_error(&self, g: &DMatrix<f64>) -> f64 {
        (self.reconstruct() - g).norm() / g.norm()
    }

    /// ‖kᵀk − I‖_F.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.k.nrows();
        (self.k.transpose() * &self.k - DMatrix::identity(n, n)).norm()
    }
}

/// Factorization of an invertible matrix through the Mostow decomposition
/// of gᵀg = e·f²·e.
pub fn mostow_gl(
    g: &DMatrix<f64>,
    e_sub: &Subspace,
    opts: &ProjectionOptions,
) -> Result<GlFactors> {
    if g.nrows() != g.ncols() {
        return Err(Error::NotSquare {
            rows: g.nrows(),
            cols: g.ncols(),
        });
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let sv = g.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > MIN_INVERSE_CONDITION * smax) {
        return Err(Error::IllConditioned(format!(
            "singular values range over [{smin:e}, {smax:e}]"
        )));
    }
    let gram = SpdMatrix::new(SymMatrix::new(g.transpose() * g)?)?;
    let m = mostow_spd(&gram, e_sub, opts)?;
    let f = m.f.sqrt();
    let e_inv = SymMatrix::symmetrize(m.e.inverse().into_sym().into_matrix());
    let k = g * e_inv.as_matrix() * f.inverse().as_matrix();
    Ok(GlFactors {
        k,
        f,
        e: m.e,
        iterations: m.iterations,
        residual: m.residual,
    })
}

/// The geodesically convex submanifold x^{1/2}·exp(E)·x^{1/2}.
#[derive(Clone, Debug)]
pub struct TranslatedSubmanifold {
    pub base: SpdMatrix,
    pub subspace: Subspace,
    sqrt: SpdMatrix,
    inv_sqrt: SpdMatrix,
}

impl TranslatedSubmanifold {
    /// Point x^{1/2}·exp(u)·x^{1/2}; u is projected onto E first.
    pub fn point(&self, u: &SymMatrix) -> Result<SpdMatrix> {
        let inner = spd_exp(&self.subspace.project(u))?;
        SpdMatrix::new(inner.as_sym().sandwich(self.sqrt.as_sym()))
    }

    /// ‖(I − P_E) log(x^{−1/2} y x^{−1/2})‖_F; zero exactly on the
    /// submanifold.
    pub fn membership_residual(&self, y: &SpdMatrix) -> Result<f64> {
        if y.n() != self.base.n() {
            return Err(Error::DimensionMismatch {
                expected: self.base.n(),
                found: y.n(),
            });
        }
        let l = sym_log(&y.as_sym().sandwich(self.inv_sqrt.as_sym()))?;
        Ok(self.subspace.reject(&l).frobenius_norm())
    }
}

pub fn translate_convex_submanifold(
    x: &SpdMatrix,
    e_sub: &Subspace,
) -> Result<TranslatedSubmanifold> {
    if e_sub.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: e_sub.n(),
        });
    }
    Ok(TranslatedSubmanifold {
        base: x.clone(),
        subspace: e_sub.clone(),
        sqrt: x.sqrt(),
        inv_sqrt: x.inv_sqrt(),
    })
}
