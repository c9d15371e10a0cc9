//! Random generators for symmetric, SPD, orthogonal and invertible
//! matrices. Used by the property tests, the acceptance suite and the
//! benchmarks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matfun::{SpdMatrix, SymMatrix};
use crate::subspace::Subspace;

/// Symmetric matrix with entries uniform in [−scale, scale].
pub fn random_sym<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::new(m).expect("finite square matrix")
}

/// Symmetric matrix with Frobenius norm exactly `norm` (uniform direction).
pub fn random_sym_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> SymMatrix {
    let a = random_sym(rng, n, 1.0);
    let f = a.frobenius_norm();
    if f == 0.0 {
        return SymMatrix::identity(n).scale(norm / (n as f64).sqrt());
    }
    a.scale(norm / f)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of R's diagonal folded into Q).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// SPD matrix with condition number at most `max_condition`, random
/// eigenbasis, and log-eigenvalues spread uniformly around zero.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, n: usize, max_condition: f64) -> SpdMatrix {
    let half = 0.5 * max_condition.ln();
    let q = random_orthogonal(rng, n);
    let diag: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-half..=half).exp())
        .collect();
    let d = SymMatrix::from_diagonal(&diag);
    SpdMatrix::new(d.congruence(&q)).expect("well-conditioned SPD sample")
}

/// Invertible matrix g = U·diag(s)·Vᵀ with singular values in [0.2, 5].
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let u = random_orthogonal(rng, n);
    let v = random_orthogonal(rng, n);
    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        rng.random_range(0.2f64.ln()..5f64.ln()).exp()
    }));
    u * s * v.transpose()
}

/// Random element of a subspace, coefficients uniform in [−scale, scale].
pub fn random_in_subspace<R: Rng + ?Sized>(rng: &mut R, e: &Subspace, scale: f64) -> SymMatrix {
    e.combine(
        &(0..e.dim())
            .map(|_| rng.random_range(-scale..=scale))
            .collect::<Vec<_>>(),
    )
}
