//! Differential of the matrix exponential on Sym(n).
//!
//! Analytic functions of ad(X) are evaluated in the eigenbasis of X: if
//! X = Q·diag(λ)·Qᵀ then φ(ad X) scales entry (i, j) of QᵀYQ by φ(λᵢ − λⱼ).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::manifold::bracket;
use crate::matfun::{spd_exp, sym_eigen, EigenDecomposition, SymMatrix};

/// Default step count for [`integrate_conjugation_flow`].
pub const DEFAULT_FLOW_STEPS: usize = 100;

/// A scalar function φ used as φ(ad X), with its value at the removable
/// singularity u = 0.
#[derive(Clone, Copy, Debug)]
pub struct AdFunction {
    pub name: &'static str,
    pub eval: fn(f64) -> f64,
    pub at_zero: f64,
}

impl AdFunction {
    pub fn value(&self, u: f64) -> f64 {
        if u == 0.0 {
            self.at_zero
        } else {
            (self.eval)(u)
        }
    }
}

fn sinhc_half(u: f64) -> f64 {
    let h = 0.5 * u;
    if h.abs() < 1e-4 {
        let h2 = h * h;
        1.0 + h2 / 6.0 + h2 * h2 / 120.0
    } else {
        h.sinh() / h
    }
}

fn inv_sinhc_half(u: f64) -> f64 {
    1.0 / sinhc_half(u)
}

fn u_coth_half(u: f64) -> f64 {
    let h = 0.5 * u;
    if h.abs() < 1e-4 {
        let h2 = h * h;
        2.0 * (1.0 + h2 / 3.0 - h2 * h2 / 45.0)
    } else {
        2.0 * h / h.tanh()
    }
}

fn one_minus_exp_neg_over_u(u: f64) -> f64 {
    -(-u).exp_m1() / u
}

/// sinh(u/2)/(u/2): the symmetric form of d exp.
pub const SINHC_HALF: AdFunction = AdFunction {
    name: "sinh(u/2)/(u/2)",
    eval: sinhc_half,
    at_zero: 1.0,
};

/// (u/2)/sinh(u/2): inverse of [`SINHC_HALF`].
pub const INV_SINHC_HALF: AdFunction = AdFunction {
    name: "(u/2)/sinh(u/2)",
    eval: inv_sinhc_half,
    at_zero: 1.0,
};

/// u·coth(u/2): velocity field of the conjugation flow.
pub const U_COTH_HALF: AdFunction = AdFunction {
    name: "u*coth(u/2)",
    eval: u_coth_half,
    at_zero: 2.0,
};

/// (1 − e^{−u})/u: the left-trivialized form of d exp.
pub const ONE_MINUS_EXP_NEG_OVER_U: AdFunction = AdFunction {
    name: "(1-exp(-u))/u",
    eval: one_minus_exp_neg_over_u,
    at_zero: 1.0,
};

/// The linear operator φ(ad X) on n×n matrices.
#[derive(Clone, Debug)]
pub struct AdFunctionOperator {
    base: SymMatrix,
    eig: EigenDecomposition,
    phi: AdFunction,
}

impl AdFunctionOperator {
    pub fn new(base: SymMatrix, phi: AdFunction) -> Result<Self> {
        let eig = sym_eigen(&base)?;
        Ok(Self { base, eig, phi })
    }

    fn with_eigen(base: SymMatrix, eig: EigenDecomposition, phi: AdFunction) -> Self {
        Self { base, eig, phi }
    }

    pub fn base(&self) -> &SymMatrix {
        &self.base
    }

    /// Scaling matrix φ(λᵢ − λⱼ).
    fn weights(&self) -> Result<DMatrix<f64>> {
        let n = self.eig.n();
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let d = self.eig.lambda[i] - self.eig.lambda[j];
                let v = self.phi.value(d);
                if !v.is_finite() {
                    return Err(Error::SpectralDomain {
                        function: self.phi.name,
                        value: d,
                    });
                }
                w[(i, j)] = v;
            }
        }
        Ok(w)
    }

    /// Applies the operator to an arbitrary square matrix.
    pub fn apply_matrix(&self, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let n = self.eig.n();
        if y.nrows() != n || y.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.nrows(),
            });
        }
        let q = &self.eig.q;
        let rotated = q.transpose() * y * q;
        let scaled = rotated.component_mul(&self.weights()?);
        Ok(q * scaled * q.transpose())
    }

    /// Applies the operator to a symmetric matrix. The result is symmetric
    /// whenever φ is even.
    pub fn apply(&self, y: &SymMatrix) -> Result<SymMatrix> {
        Ok(SymMatrix::symmetrize(self.apply_matrix(y.as_matrix())?))
    }
}

/// ad(X)(Y) = XY − YX.
pub fn ad(x: &SymMatrix, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if y.nrows() != x.n() || y.ncols() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.nrows(),
        });
    }
    Ok(bracket(x.as_matrix(), y))
}

pub fn ad_function_apply(op: &AdFunctionOperator, y: &SymMatrix) -> Result<SymMatrix> {
    op.apply(y)
}

/// τ_X(Y) = sinh(ad(X/2))/ad(X/2) (Y).
pub fn tau(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    AdFunctionOperator::new(x.clone(), SINHC_HALF)?.apply(y)
}

/// τ_X⁻¹(Y) = ad(X/2)/sinh(ad(X/2)) (Y).
pub fn tau_inv(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    AdFunctionOperator::new(x.clone(), INV_SINHC_HALF)?.apply(y)
}

/// d_X exp(Y) = exp(X/2) · τ_X(Y) · exp(X/2).
pub fn dexp_apply(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eigen(x)?;
    let half_exp = eig.compose(
        &eig.lambda
            .iter()
            .map(|l| (0.5 * l).exp())
            .collect::<Vec<_>>(),
    );
    let t = AdFunctionOperator::with_eigen(x.clone(), eig, SINHC_HALF).apply(y)?;
    Ok(t.sandwich(&half_exp))
}

/// d_X exp(Y) = exp(X) · (1 − e^{−ad X})/ad X (Y), the one-sided form.
pub fn dexp_apply_left(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    let op = AdFunctionOperator::new(x.clone(), ONE_MINUS_EXP_NEG_OVER_U)?;
    let inner = op.apply_matrix(y.as_matrix())?;
    let ex = spd_exp(x)?;
    Ok(SymMatrix::symmetrize(ex.as_matrix() * inner))
}

/// (d_X exp)⁻¹(Z) = τ_X⁻¹(exp(−X/2) · Z · exp(−X/2)).
pub fn dexp_inv_apply(x: &SymMatrix, z: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eigen(x)?;
    let half_exp_inv = eig.compose(
        &eig.lambda
            .iter()
            .map(|l| (-0.5 * l).exp())
            .collect::<Vec<_>>(),
    );
    let w = z.sandwich(&half_exp_inv);
    AdFunctionOperator::with_eigen(x.clone(), eig, INV_SINHC_HALF).apply(&w)
}

/// W(X) = ad(X)·coth(ad(X/2)) (Y), the velocity of
/// t ↦ log(exp(tY)·exp(X₀)·exp(tY)).
pub fn conjugation_flow_field(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    AdFunctionOperator::new(x.clone(), U_COTH_HALF)?.apply(y)
}

/// Integrates Ẋ = W(X) from X(0) = x0 up to time t with `steps`
/// classical Runge–Kutta steps.
pub fn integrate_conjugation_flow(
    x0: &SymMatrix,
    y: &SymMatrix,
    t: f64,
    steps: usize,
) -> Result<SymMatrix> {
    if steps == 0 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    if x0.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x0.n(),
            found: y.n(),
        });
    }
    let h = t / steps as f64;
    let mut x = x0.clone();
    for _ in 0..steps {
        let k1 = conjugation_flow_field(&x, y)?;
        let k2 = conjugation_flow_field(&(&x + &k1.scale(0.5 * h)), y)?;
        let k3 = conjugation_flow_field(&(&x + &k2.scale(0.5 * h)), y)?;
        let k4 = conjugation_flow_field(&(&x + &k3.scale(h)), y)?;
        let incr = &(&k1 + &k4) + &(&k2 + &k3).scale(2.0);
        x = &x + &incr.scale(h / 6.0);
    }
    Ok(x)
}
