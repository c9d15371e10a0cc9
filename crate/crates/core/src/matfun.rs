//! Symmetric matrices, SPD matrices and spectral matrix functions.
//!
//! Everything downstream is built on [`sym_eigen`], a cyclic Jacobi
//! eigensolver, and on applying scalar functions to the eigenvalues of a
//! symmetric matrix ([`sym_apply`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative threshold below which an eigenvalue is not considered positive.
pub const SPD_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input norm.
pub const JACOBI_TOL: f64 = 1e-14;

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_SWEEPS: usize = 50;

/// A dense real symmetric matrix, an element of Sym(n).
#[derive(Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Wraps a square matrix, enforcing exact symmetry by averaging with the
    /// transpose.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::symmetrize(m))
    }

    /// Builds from row slices. Panics if the rows are ragged or empty.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(
            n > 0 && rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j])).expect("finite square input")
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty());
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0);
        Self(DMatrix::identity(n, n))
    }

    // Averages with the transpose; the caller guarantees the matrix is square.
    pub(crate) fn symmetrize(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// The trace inner product Tr(AB), which for symmetric matrices is the
    /// Frobenius inner product.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix(&self.0 * s)
    }

    /// g · A · gᵀ for any square g of matching size.
    pub fn congruence(&self, g: &DMatrix<f64>) -> SymMatrix {
        Self::symmetrize(g * &self.0 * g.transpose())
    }

    /// B · A · B for symmetric B.
    pub fn sandwich(&self, b: &SymMatrix) -> SymMatrix {
        Self::symmetrize(&b.0 * &self.0 * &b.0)
    }

    /// Largest absolute entry of A − Aᵀ, for checking inputs that arrive as
    /// general matrices.
    pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix{:?}", self.rows())
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        SymMatrix(-&self.0)
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

/// Orthonormal eigenbasis and eigenvalues of a symmetric matrix, with the
/// eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    /// Columns are eigenvectors.
    pub q: DMatrix<f64>,
    pub lambda: Vec<f64>,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn max(&self) -> f64 {
        self.lambda[0]
    }

    pub fn min(&self) -> f64 {
        self.lambda[self.lambda.len() - 1]
    }

    /// Q · diag(values) · Qᵀ.
    pub fn compose(&self, values: &[f64]) -> SymMatrix {
        let mut scaled = self.q.clone();
        for (j, v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*v);
        }
        SymMatrix::symmetrize(scaled * self.q.transpose())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.compose(&self.lambda)
    }

    /// Applies `phi` to every eigenvalue; fails if any result is not finite.
    pub fn map(&self, function: &'static str, phi: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        let values = self.mapped_values(function, phi)?;
        Ok(self.compose(&values))
    }

    fn mapped_values(&self, function: &'static str, phi: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        self.lambda
            .iter()
            .map(|&l| {
                let v = phi(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::SpectralDomain { function, value: l })
                }
            })
            .collect()
    }

    /// Eigendecomposition of phi(A) where phi is strictly increasing, so the
    /// descending order is preserved.
    fn map_monotone(&self, function: &'static str, phi: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(Self {
            q: self.q.clone(),
            lambda: self.mapped_values(function, phi)?,
        })
    }
}

fn off_diagonal_norm(w: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[i * n + j] * w[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    let n = a.n();
    // row-major working copy
    let mut w: Vec<f64> = (0..n * n).map(|k| a.0[(k / n, k % n)]).collect();
    let mut v: Vec<f64> = (0..n * n)
        .map(|k| if k / n == k % n { 1.0 } else { 0.0 })
        .collect();
    let target = JACOBI_TOL * a.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = off_diagonal_norm(&w, n);
        if off <= target {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence {
                sweeps: MAX_SWEEPS,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = w[p * n + p];
                let aqq = w[q * n + q];
                // Once the diagonal dwarfs the element, the rotation would be
                // the identity to machine precision.
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    w[p * n + q] = 0.0;
                    w[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = w[k * n + p];
                    let akq = w[k * n + q];
                    w[k * n + p] = c * akp - s * akq;
                    w[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = w[p * n + k];
                    let aqk = w[q * n + k];
                    w[p * n + k] = c * apk - s * aqk;
                    w[q * n + k] = s * apk + c * aqk;
                }
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[j * n + j].total_cmp(&w[i * n + i]));
    let lambda = order.iter().map(|&i| w[i * n + i]).collect();
    let q = DMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(EigenDecomposition { q, lambda })
}

/// Applies a scalar function through the spectral decomposition of `a`.
pub fn sym_apply(a: &SymMatrix, phi: impl Fn(f64) -> f64) -> Result<SymMatrix> {
    sym_eigen(a)?.map("phi", phi)
}

/// A validated symmetric positive-definite matrix. Keeps the
/// eigendecomposition computed during validation so that powers, logarithm
/// and inverse are cheap.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    mat: SymMatrix,
    eig: EigenDecomposition,
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

fn check_positive(eig: &EigenDecomposition) -> Result<()> {
    let (lmin, lmax) = (eig.min(), eig.max());
    if lmin > SPD_TOL * lmax.max(1.0) {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite {
            min_eigenvalue: lmin,
            max_eigenvalue: lmax,
        })
    }
}

impl SpdMatrix {
    pub fn new(mat: SymMatrix) -> Result<Self> {
        let eig = sym_eigen(&mat)?;
        check_positive(&eig)?;
        Ok(Self { mat, eig })
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        Self::new(SymMatrix::new(m)?)
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(SymMatrix::from_rows(rows))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(SymMatrix::from_diagonal(diag))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(SymMatrix::identity(n)).expect("identity is SPD")
    }

    /// Builds from an eigendecomposition with positive eigenvalues.
    pub fn from_eigen(eig: EigenDecomposition) -> Result<Self> {
        check_positive(&eig)?;
        Ok(Self {
            mat: eig.reconstruct(),
            eig,
        })
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.mat
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        self.mat.as_matrix()
    }

    pub fn into_sym(self) -> SymMatrix {
        self.mat
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn condition_number(&self) -> f64 {
        self.eig.max() / self.eig.min()
    }

    pub fn log(&self) -> SymMatrix {
        self.eig
            .compose(&self.eig.lambda.iter().map(|l| l.ln()).collect::<Vec<_>>())
    }

    /// x^t for real t.
    pub fn powf(&self, t: f64) -> Result<SpdMatrix> {
        let eig = if t >= 0.0 {
            self.eig.map_monotone("power", |l| l.powf(t))?
        } else {
            let mut e = self.eig.map_monotone("power", |l| (1.0 / l).powf(-t))?;
            e.q = reverse_columns(&e.q);
            e.lambda.reverse();
            e
        };
        SpdMatrix::from_eigen(eig)
    }

    pub fn sqrt(&self) -> SpdMatrix {
        self.powf(0.5).expect("square root of an SPD matrix is SPD")
    }

    pub fn inv_sqrt(&self) -> SpdMatrix {
        self.powf(-0.5)
            .expect("inverse square root of an SPD matrix is SPD")
    }

    pub fn inverse(&self) -> SpdMatrix {
        self.powf(-1.0).expect("inverse of an SPD matrix is SPD")
    }

    /// g · x · gᵀ, without checking that the result stays positive definite.
    pub fn congruence(&self, g: &DMatrix<f64>) -> SymMatrix {
        self.mat.congruence(g)
    }
}

fn reverse_columns(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.ncols();
    DMatrix::from_fn(q.nrows(), n, |r, c| q[(r, n - 1 - c)])
}

/// Matrix exponential of a symmetric matrix.
pub fn spd_exp(a: &SymMatrix) -> Result<SpdMatrix> {
    let eig = sym_eigen(a)?.map_monotone("exp", f64::exp)?;
    SpdMatrix::from_eigen(eig)
}

/// Principal matrix logarithm of an SPD matrix.
pub fn spd_log(x: &SpdMatrix) -> SymMatrix {
    x.log()
}

pub fn spd_sqrt(x: &SpdMatrix) -> SpdMatrix {
    x.sqrt()
}

pub fn spd_inv_sqrt(x: &SpdMatrix) -> SpdMatrix {
    x.inv_sqrt()
}

/// Logarithm of a symmetric matrix that is expected to be positive definite.
pub fn sym_log(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eigen(a)?;
    if let Err(Error::NotPositiveDefinite { min_eigenvalue, .. }) = check_positive(&eig) {
        return Err(Error::SpectralDomain {
            function: "log",
            value: min_eigenvalue,
        });
    }
    eig.map("log", f64::ln)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    fn sym_strategy(max_n: usize) -> impl Strategy<Value = SymMatrix> {
        (2..=max_n).prop_flat_map(|n| {
            prop::collection::vec(-1.0f64..1.0, n * n)
                .prop_map(move |v| SymMatrix::new(DMatrix::from_vec(n, n, v)).unwrap())
        })
    }

    #[test]
    fn eigen_of_diagonal() {
        let e = sym_eigen(&SymMatrix::from_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(e.lambda, vec![3.0, 1.0]);
        assert_abs_diff_eq!(e.q[(0, 0)].abs(), 1.0);
        assert_abs_diff_eq!(e.q[(1, 1)].abs(), 1.0);
    }

    #[test]
    fn eigen_of_hadamard_pair() {
        let a = SymMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = sym_eigen(&a).unwrap();
        assert_abs_diff_eq!(e.lambda[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.lambda[1], 1.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // columns up to sign
        assert_abs_diff_eq!((e.q[(0, 0)] * e.q[(1, 0)]), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(e.q[(0, 0)].abs(), h, epsilon = 1e-14);
        assert_abs_diff_eq!((e.q[(0, 1)] * e.q[(1, 1)]), -0.5, epsilon = 1e-14);
    }

    #[test]
    fn eigen_of_identity() {
        for n in 1..6 {
            let e = sym_eigen(&SymMatrix::identity(n)).unwrap();
            assert!(e.lambda.iter().all(|&l| l == 1.0));
        }
    }

    #[test]
    fn eigen_of_zero_matrix() {
        let e = sym_eigen(&SymMatrix::zeros(3)).unwrap();
        assert_eq!(e.lambda, vec![0.0; 3]);
    }

    #[test]
    fn eigen_is_deterministic() {
        let a = SymMatrix::from_rows(&[&[1.0, 0.3, -0.2], &[0.3, 2.0, 0.7], &[-0.2, 0.7, -1.0]]);
        assert_eq!(sym_eigen(&a).unwrap(), sym_eigen(&a).unwrap());
    }

    #[test]
    fn eigen_matches_nalgebra_at_n64() {
        let n = 64;
        let m = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 13) % 17) as f64 / 17.0 - 0.5);
        let a = SymMatrix::new(m).unwrap();
        let e = sym_eigen(&a).unwrap();
        let mut reference: Vec<f64> = a
            .as_matrix()
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        reference.sort_by(|x, y| y.total_cmp(x));
        for (l, r) in e.lambda.iter().zip(&reference) {
            assert_abs_diff_eq!(l, r, epsilon = 1e-11);
        }
        let recon = e.reconstruct();
        assert!((recon.as_matrix() - a.as_matrix()).norm() <= 1e-10 * a.frobenius_norm());
        let orth = e.q.transpose() * &e.q - DMatrix::identity(n, n);
        assert!(orth.norm() <= 1e-10 * n as f64);
    }

    #[test]
    fn eigen_handles_repeated_eigenvalues() {
        let a = SymMatrix::from_rows(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]]);
        let e = sym_eigen(&a).unwrap();
        assert_abs_diff_eq!(e.lambda[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.lambda[1], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.lambda[2], 0.0, epsilon = 1e-14);
        assert!(max_abs_diff(e.reconstruct().as_matrix(), a.as_matrix()) < 1e-14);
    }

    #[test]
    fn apply_sqrt_on_diagonal() {
        let r = sym_apply(&SymMatrix::from_diagonal(&[1.0, 4.0]), f64::sqrt).unwrap();
        assert_eq!(r, SymMatrix::from_diagonal(&[1.0, 2.0]));
    }

    #[test]
    fn apply_log_in_hadamard_basis() {
        let a = SymMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let r = sym_apply(&a, f64::ln).unwrap();
        let h = 3f64.ln() / 2.0;
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(r.get(i, j), h, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn apply_exp_of_zero() {
        let r = sym_apply(&SymMatrix::zeros(3), f64::exp).unwrap();
        assert_eq!(r, SymMatrix::identity(3));
    }

    #[test]
    fn apply_reports_offending_eigenvalue() {
        let a = SymMatrix::from_diagonal(&[2.0, -1.0]);
        match sym_apply(&a, f64::ln) {
            Err(Error::SpectralDomain { value, .. }) => assert_eq!(value, -1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetrizes_on_construction() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let s = SymMatrix::new(m).unwrap();
        assert_eq!(s.get(0, 1), 1.0);
        assert_eq!(s.get(1, 0), 1.0);
        assert!(matches!(
            SymMatrix::new(DMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(
            spd_exp(&SymMatrix::zeros(2)).unwrap().as_sym(),
            &SymMatrix::identity(2)
        );
        let x = SpdMatrix::from_diagonal(&[std::f64::consts::E, 1.0]).unwrap();
        let l = spd_log(&x);
        assert_abs_diff_eq!(l.get(0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.get(1, 1), 0.0, epsilon = 1e-15);
        let a = 0.7;
        let v = SymMatrix::from_rows(&[&[0.0, a], &[a, 0.0]]);
        let ev = spd_exp(&v).unwrap();
        assert_abs_diff_eq!(ev.as_sym().get(0, 0), a.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(ev.as_sym().get(1, 1), a.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(ev.as_sym().get(0, 1), a.sinh(), epsilon = 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        let x = SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap();
        assert_eq!(
            spd_sqrt(&x).as_sym(),
            &SymMatrix::from_diagonal(&[2.0, 3.0])
        );
        assert_eq!(
            spd_sqrt(&SpdMatrix::identity(3)).as_sym(),
            &SymMatrix::identity(3)
        );
        let h = SpdMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let r = spd_sqrt(&h);
        assert_abs_diff_eq!(r.eigen().lambda[0], 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.eigen().lambda[1], 1.0, epsilon = 1e-14);
        // (√3 ± 1)/2 on the diagonal / off-diagonal
        assert_abs_diff_eq!(
            r.as_sym().get(0, 0),
            (3f64.sqrt() + 1.0) / 2.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            r.as_sym().get(0, 1),
            (3f64.sqrt() - 1.0) / 2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn rejects_non_spd() {
        assert!(matches!(
            SpdMatrix::from_diagonal(&[1.0, 0.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            SpdMatrix::from_diagonal(&[1.0, 1e-13]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(SpdMatrix::from_diagonal(&[1.0, 1e-11]).is_ok());
        assert!(matches!(
            sym_log(&SymMatrix::from_diagonal(&[1.0, -2.0])),
            Err(Error::SpectralDomain {
                function: "log",
                ..
            })
        ));
    }

    #[test]
    fn inverse_and_inverse_sqrt() {
        let x =
            SpdMatrix::from_rows(&[&[3.0, 1.0, 0.5], &[1.0, 2.0, 0.2], &[0.5, 0.2, 1.0]]).unwrap();
        let s = x.inv_sqrt();
        let id = s.as_matrix() * x.as_matrix() * s.as_matrix();
        assert!(max_abs_diff(&id, &DMatrix::identity(3, 3)) < 1e-13);
        let inv = x.inverse();
        assert!(max_abs_diff(&(inv.as_matrix() * x.as_matrix()), &DMatrix::identity(3, 3)) < 1e-13);
        let sq = x.sqrt();
        assert!(max_abs_diff(&(sq.as_matrix() * sq.as_matrix()), x.as_matrix()) < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn eigen_reconstructs(a in sym_strategy(8)) {
            let n = a.n() as f64;
            let e = sym_eigen(&a).unwrap();
            let err = (e.reconstruct().as_matrix() - a.as_matrix()).norm();
            prop_assert!(err <= 1e-10 * n * a.frobenius_norm().max(1e-300));
            let orth = (e.q.transpose() * &e.q - DMatrix::identity(a.n(), a.n())).norm();
            prop_assert!(orth <= 1e-10 * n);
            prop_assert!(e.lambda.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    proptest! {
        #[test]
        fn exp_log_round_trip(a in sym_strategy(8)) {
            let x = spd_exp(&a).unwrap();
            let back = spd_log(&x);
            prop_assert!((&back - &a).frobenius_norm() <= 1e-9 * a.frobenius_norm().max(1.0));
            let again = spd_exp(&back).unwrap();
            prop_assert!((again.as_matrix() - x.as_matrix()).norm() <= 1e-9 * x.frobenius_norm());
        }

        #[test]
        fn identity_function_is_identity(a in sym_strategy(8)) {
            let r = sym_apply(&a, |l| l).unwrap();
            prop_assert!(max_abs_diff(r.as_matrix(), a.as_matrix()) <= 1e-12);
        }
    }
}
