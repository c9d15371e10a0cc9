//! Linear subspaces E ⊂ Sym(n) under the trace inner product, and the
//! Lie-triple-system test that decides whether exp(E) is totally geodesic.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::manifold::bracket;
use crate::matfun::SymMatrix;

/// Default tolerance for [`lts_check`].
pub const DEFAULT_LTS_TOL: f64 = 1e-9;

/// Relative residual below which a generator is considered dependent.
const RANK_TOL: f64 = 1e-10;

/// A subspace of Sym(n) with an orthonormal basis for ⟨A, B⟩ = Tr(AB).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    n: usize,
    basis: Vec<SymMatrix>,
}

/// Dimension of Sym(n).
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Standard orthonormal basis of Sym(n): eᵢeᵢᵀ, then (eᵢeⱼᵀ + eⱼeᵢᵀ)/√2.
pub fn standard_basis(n: usize) -> Vec<SymMatrix> {
    let mut out: Vec<SymMatrix> = (0..n).map(|i| unit(n, i, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(unit(n, i, j));
        }
    }
    out
}

// Normalized symmetric unit matrix supported on (i, j) and (j, i).
fn unit(n: usize, i: usize, j: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    if i == j {
        m[(i, i)] = 1.0;
    } else {
        m[(i, j)] = FRAC_1_SQRT_2;
        m[(j, i)] = FRAC_1_SQRT_2;
    }
    SymMatrix::new(m).expect("finite")
}

fn block_ranges(sizes: &[usize]) -> Result<Vec<std::ops::Range<usize>>> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::Precondition(
            "block sizes must be a non-empty list of positive integers".into(),
        ));
    }
    let mut start = 0;
    Ok(sizes
        .iter()
        .map(|s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect())
}

// Gram–Schmidt of `v` against `basis`, twice for numerical orthogonality.
fn orthogonalize(basis: &[SymMatrix], v: &SymMatrix) -> SymMatrix {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            r = &r - &b.scale(r.dot(b));
        }
    }
    r
}

impl Subspace {
    /// Orthonormalizes the generators, dropping dependent ones.
    pub fn from_generators(generators: &[SymMatrix]) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptySubspace)?;
        let n = first.n();
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n(),
            });
        }
        let scale = generators
            .iter()
            .map(SymMatrix::frobenius_norm)
            .fold(0.0, f64::max);
        if !(scale > 1e-12) {
            return Err(Error::EmptySubspace);
        }
        let mut basis: Vec<SymMatrix> = Vec::new();
        for g in generators {
            let r = orthogonalize(&basis, g);
            let norm = r.frobenius_norm();
            if norm > RANK_TOL * scale {
                basis.push(r.scale(1.0 / norm));
            }
        }
        Ok(Self { n, basis })
    }

    /// All of Sym(n).
    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: standard_basis(n),
        }
    }

    /// Diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        Self {
            n,
            basis: (0..n).map(|i| unit(n, i, i)).collect(),
        }
    }

    /// Block-diagonal matrices for the given block sizes.
    pub fn block_diagonal(sizes: &[usize]) -> Result<Self> {
        let ranges = block_ranges(sizes)?;
        let n = sizes.iter().sum();
        let mut basis = Vec::new();
        for r in &ranges {
            for i in r.clone() {
                for j in i..r.end {
                    basis.push(unit(n, i, j));
                }
            }
        }
        Ok(Self { n, basis })
    }

    /// Symmetric matrices whose diagonal blocks vanish.
    pub fn zero_diagonal_blocks(sizes: &[usize]) -> Result<Self> {
        let ranges = block_ranges(sizes)?;
        if ranges.len() < 2 {
            return Err(Error::Precondition(
                "a single block has no off-diagonal part".into(),
            ));
        }
        let n = sizes.iter().sum();
        let mut basis = Vec::new();
        for (a, ra) in ranges.iter().enumerate() {
            for rb in &ranges[a + 1..] {
                for i in ra.clone() {
                    for j in rb.clone() {
                        basis.push(unit(n, i, j));
                    }
                }
            }
        }
        Ok(Self { n, basis })
    }

    /// Block-anti-diagonal matrices [[0, C], [Cᵀ, 0]] with C of size p×q.
    pub fn block_anti_diagonal(p: usize, q: usize) -> Result<Self> {
        Self::zero_diagonal_blocks(&[p, q])
    }

    /// span{diag(1, −1)} in Sym(2).
    pub fn sl2_e() -> Self {
        Self {
            n: 2,
            basis: vec![SymMatrix::from_diagonal(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2])],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SymMatrix] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == sym_dim(self.n)
    }

    pub fn coordinates(&self, y: &SymMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| y.dot(b)).collect()
    }

    pub fn combine(&self, coeffs: &[f64]) -> SymMatrix {
        assert_eq!(coeffs.len(), self.dim());
        let mut m = DMatrix::zeros(self.n, self.n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            m += b.as_matrix() * *c;
        }
        SymMatrix::symmetrize(m)
    }

    /// Orthogonal projection for the trace inner product.
    pub fn project(&self, y: &SymMatrix) -> SymMatrix {
        self.combine(&self.coordinates(y))
    }

    /// (I − P_E)(y).
    pub fn reject(&self, y: &SymMatrix) -> SymMatrix {
        y - &self.project(y)
    }

    /// Orthogonal complement in Sym(n); `None` when E is all of Sym(n).
    pub fn complement(&self) -> Option<Subspace> {
        let target = sym_dim(self.n) - self.dim();
        if target == 0 {
            return None;
        }
        let mut all = self.basis.clone();
        let mut comp = Vec::with_capacity(target);
        for s in standard_basis(self.n) {
            if comp.len() == target {
                break;
            }
            let r = orthogonalize(&all, &s);
            let norm = r.frobenius_norm();
            if norm > RANK_TOL {
                let b = r.scale(1.0 / norm);
                all.push(b.clone());
                comp.push(b);
            }
        }
        debug_assert_eq!(comp.len(), target);
        Some(Subspace {
            n: self.n,
            basis: comp,
        })
    }

    /// Re-expresses the basis through a dim×dim orthogonal matrix; spans the
    /// same subspace.
    pub fn rotated(&self, rotation: &DMatrix<f64>) -> Subspace {
        assert_eq!(rotation.nrows(), self.dim());
        let basis = (0..self.dim())
            .map(|i| {
                let coeffs: Vec<f64> = (0..self.dim()).map(|j| rotation[(i, j)]).collect();
                self.combine(&coeffs)
            })
            .collect();
        Subspace { n: self.n, basis }
    }
}

pub fn build_subspace(generators: &[SymMatrix]) -> Result<Subspace> {
    Subspace::from_generators(generators)
}

pub fn project_trace(e: &Subspace, y: &SymMatrix) -> SymMatrix {
    e.project(y)
}

pub fn orthogonal_complement(e: &Subspace) -> Option<Subspace> {
    e.complement()
}

/// A triple of basis elements whose bracket [X, [Y, Z]] leaves E.
#[derive(Clone, Debug)]
pub struct LtsWitness {
    pub indices: (usize, usize, usize),
    pub x: SymMatrix,
    pub y: SymMatrix,
    pub z: SymMatrix,
    /// Component of [X, [Y, Z]] orthogonal to E.
    pub direction: SymMatrix,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct LtsReport {
    /// Verdict of the full triple condition [X, [Y, Z]] ∈ E.
    pub is_lts: bool,
    pub max_triple_residual: f64,
    /// Verdict of the double-bracket condition [X, [X, Y]] ∈ E, checked on
    /// basis pairs and their polarizations.
    pub double_bracket_is_lts: bool,
    pub max_double_bracket_residual: f64,
    pub tol: f64,
    pub witness: Option<LtsWitness>,
}

impl LtsReport {
    /// Both forms of the condition reach the same verdict.
    pub fn forms_agree(&self) -> bool {
        self.is_lts == self.double_bracket_is_lts
    }
}

// Relative residual of (I − P_E)[a, [b, c]] and the rejected component.
fn bracket_residual(
    e: &Subspace,
    a: &SymMatrix,
    inner: &DMatrix<f64>,
    scale: f64,
) -> (f64, SymMatrix) {
    let out = SymMatrix::symmetrize(bracket(a.as_matrix(), inner));
    let rej = e.reject(&out);
    (rej.frobenius_norm() / scale.max(1.0), rej)
}

/// Tests whether E is a Lie triple system.
pub fn lts_check(e: &Subspace, tol: f64) -> LtsReport {
    let b = e.basis();
    let k = b.len();
    let norms: Vec<f64> = b.iter().map(SymMatrix::frobenius_norm).collect();

    // full triple condition; [B_j, B_k] is antisymmetric in (j, k)
    let mut max_triple = 0.0;
    let mut witness = None;
    for j in 0..k {
        for l in (j + 1)..k {
            let inner = bracket(b[j].as_matrix(), b[l].as_matrix());
            for i in 0..k {
                let scale = norms[i] * norms[j] * norms[l];
                let (r, dir) = bracket_residual(e, &b[i], &inner, scale);
                if r > max_triple {
                    max_triple = r;
                    witness = Some(LtsWitness {
                        indices: (i, j, l),
                        x: b[i].clone(),
                        y: b[j].clone(),
                        z: b[l].clone(),
                        direction: dir,
                        residual: r,
                    });
                }
            }
        }
    }

    // [X, [X, Y]] on basis elements and on the sums B_i + B_j
    let mut max_double: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let inner = bracket(b[i].as_matrix(), b[j].as_matrix());
            let scale = norms[i] * norms[i] * norms[j];
            max_double = max_double.max(bracket_residual(e, &b[i], &inner, scale).0);
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let s = &b[i] + &b[j];
            let ns = s.frobenius_norm();
            for l in 0..k {
                let inner = bracket(s.as_matrix(), b[l].as_matrix());
                let scale = ns * ns * norms[l];
                max_double = max_double.max(bracket_residual(e, &s, &inner, scale).0);
            }
        }
    }

    let is_lts = max_triple <= tol;
    LtsReport {
        is_lts,
        max_triple_residual: max_triple,
        double_bracket_is_lts: max_double <= tol,
        max_double_bracket_residual: max_double,
        tol,
        witness: if is_lts { None } else { witness },
    }
}

/// Builds the zero-diagonal-block subspace for `num_blocks` equal blocks
/// and runs [`lts_check`] on it. With three or more blocks the check fails.
pub fn multi_block_zero_diag_counterexample(
    num_blocks: usize,
    block_size: usize,
) -> Result<LtsReport> {
    if num_blocks < 3 || block_size == 0 {
        return Err(Error::Precondition(
            "need at least three blocks of positive size".into(),
        ));
    }
    let e = Subspace::zero_diagonal_blocks(&vec![block_size; num_blocks])?;
    Ok(lts_check(&e, DEFAULT_LTS_TOL))
}
