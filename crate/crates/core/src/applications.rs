//! Worked decompositions of covariance matrices: correlation normalization
//! versus diagonal projection, the block DAD / ADA factorizations with
//! their cosh/sinh splits, and the SO(2)·exp F·exp E factorization of
//! SL(2, ℝ).

use nalgebra::DMatrix;

use crate::decompose::{mostow_gl, mostow_spd, ProjectionOptions};
use crate::error::{Error, Result};
use crate::matfun::{spd_exp, sym_eigen, SpdMatrix, SymMatrix};
use crate::subspace::Subspace;

/// Tolerance for block-structure checks on inputs and intermediate results.
const STRUCTURE_TOL: f64 = 1e-10;

/// Sizes of consecutive diagonal blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Precondition(
                "block sizes must be a non-empty list of positive integers".into(),
            ));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn two_block(&self) -> Result<TwoBlockPartition> {
        match self.sizes[..] {
            [p, q] => TwoBlockPartition::new(p, q),
            _ => Err(Error::Precondition(format!(
                "expected exactly two blocks, got {}",
                self.sizes.len()
            ))),
        }
    }

    /// Block index of every row.
    fn labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    }
}

/// A partition of n = p + q into two diagonal blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoBlockPartition {
    pub p: usize,
    pub q: usize,
}

impl TwoBlockPartition {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Precondition("both blocks must be non-empty".into()));
        }
        Ok(Self { p, q })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn partition(&self) -> BlockPartition {
        BlockPartition {
            sizes: vec![self.p, self.q],
        }
    }

    pub fn block_diagonal(&self) -> Subspace {
        Subspace::block_diagonal(&[self.p, self.q]).expect("positive sizes")
    }

    pub fn block_anti_diagonal(&self) -> Subspace {
        Subspace::block_anti_diagonal(self.p, self.q).expect("positive sizes")
    }

    /// Frobenius norm of the off-diagonal blocks.
    pub fn off_block_norm(&self, m: &SymMatrix) -> f64 {
        self.split_norms(m).1
    }

    /// Frobenius norm of the diagonal blocks.
    pub fn diag_block_norm(&self, m: &SymMatrix) -> f64 {
        self.split_norms(m).0
    }

    fn split_norms(&self, m: &SymMatrix) -> (f64, f64) {
        let labels = self.partition().labels();
        let (mut on, mut off) = (0.0, 0.0);
        for i in 0..m.n() {
            for j in 0..m.n() {
                let v = m.get(i, j) * m.get(i, j);
                if labels[i] == labels[j] {
                    on += v;
                } else {
                    off += v;
                }
            }
        }
        (on.sqrt(), off.sqrt())
    }

    /// (block-diagonal part, block-anti-diagonal part) of m, entrywise.
    pub fn split_entries(&self, m: &SymMatrix) -> (SymMatrix, SymMatrix) {
        let labels = self.partition().labels();
        let n = m.n();
        let d = DMatrix::from_fn(n, n, |i, j| {
            if labels[i] == labels[j] {
                m.get(i, j)
            } else {
                0.0
            }
        });
        let a = DMatrix::from_fn(n, n, |i, j| {
            if labels[i] != labels[j] {
                m.get(i, j)
            } else {
                0.0
            }
        });
        (SymMatrix::symmetrize(d), SymMatrix::symmetrize(a))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                found: n,
            })
        }
    }
}

/// A symmetric matrix written as block-diagonal plus block-anti-diagonal.
#[derive(Clone, Debug)]
pub struct BlockSplit {
    pub d_part: SymMatrix,
    pub a_part: SymMatrix,
}

impl BlockSplit {
    pub fn sum(&self) -> SymMatrix {
        &self.d_part + &self.a_part
    }
}

/// corr = d^{−1/2}·cov·d^{−1/2} with d the diagonal of cov.
pub fn correlation_normalize(cov: &SpdMatrix) -> Result<(SpdMatrix, SpdMatrix)> {
    let n = cov.n();
    let diag: Vec<f64> = (0..n).map(|i| cov.as_sym().get(i, i)).collect();
    let scale: Vec<f64> = diag.iter().map(|v| 1.0 / v.sqrt()).collect();
    let corr = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            cov.as_sym().get(i, j) * scale[i] * scale[j]
        }
    });
    Ok((
        SpdMatrix::from_matrix(corr)?,
        SpdMatrix::from_diagonal(&diag)?,
    ))
}

/// Comparison of the geodesic projection onto diagonal matrices with the
/// entrywise diagonal.
#[derive(Clone, Debug)]
pub struct DiagProjectionReport {
    pub pi: SpdMatrix,
    pub diag_cov: SpdMatrix,
    pub equal: bool,
    /// ‖π(cov) − diag(cov)‖_F.
    pub gap: f64,
    /// ‖diag(e^v) − I‖_F with v = log(π^{−1/2}·cov·π^{−1/2}); vanishes
    /// exactly when π(cov) = diag(cov).
    pub lemma_residual: f64,
}

pub fn diag_projection_compare(
    cov: &SpdMatrix,
    opts: &ProjectionOptions,
) -> Result<DiagProjectionReport> {
    let n = cov.n();
    let m = mostow_spd(cov, &Subspace::diagonal(n), opts)?;
    let diag: Vec<f64> = (0..n).map(|i| cov.as_sym().get(i, i)).collect();
    let diag_cov = SpdMatrix::from_diagonal(&diag)?;
    let gap = (m.pi.as_matrix() - diag_cov.as_matrix()).norm();
    // e^v = f
    let lemma_residual = (0..n)
        .map(|i| (m.f.as_sym().get(i, i) - 1.0).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(DiagProjectionReport {
        pi: m.pi,
        diag_cov,
        equal: gap <= 1e-8 * cov.frobenius_norm(),
        gap,
        lemma_residual,
    })
}

/// Σ = exp D · exp A · exp D with D block-diagonal, A block-anti-diagonal.
#[derive(Clone, Debug)]
pub struct DadFactors {
    pub d: SymMatrix,
    pub a: SymMatrix,
    pub iterations: usize,
    pub reconstruction_error: f64,
}

/// Σ = exp A' · exp D' · exp A' with A' block-anti-diagonal, D'
/// block-diagonal.
#[derive(Clone, Debug)]
pub struct AdaFactors {
    pub a_prime: SymMatrix,
    pub d_prime: SymMatrix,
    pub iterations: usize,
    pub reconstruction_error: f64,
}

fn check_structure(label: &str, residual: f64, scale: f64) -> Result<()> {
    if residual <= STRUCTURE_TOL * scale.max(1.0) {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "{label} violates the block structure (residual {residual:e})"
        )))
    }
}

fn outer_product_error(outer: &SymMatrix, inner: &SymMatrix, sigma: &SpdMatrix) -> Result<f64> {
    let eo = spd_exp(outer)?;
    let ei = spd_exp(inner)?;
    let r = ei.as_sym().sandwich(eo.as_sym());
    Ok((r.as_matrix() - sigma.as_matrix()).norm() / sigma.frobenius_norm())
}

pub fn dad_decompose(
    sigma: &SpdMatrix,
    part: &TwoBlockPartition,
    opts: &ProjectionOptions,
) -> Result<DadFactors> {
    part.check_dim(sigma.n())?;
    let m = mostow_spd(sigma, &part.block_diagonal(), opts)?;
    let d = m.pi.log().scale(0.5);
    let a = m.f.log();
    check_structure("log f", part.diag_block_norm(&a), a.frobenius_norm())?;
    let reconstruction_error = outer_product_error(&d, &a, sigma)?;
    Ok(DadFactors {
        d,
        a,
        iterations: m.iterations,
        reconstruction_error,
    })
}

pub fn ada_decompose(
    sigma: &SpdMatrix,
    part: &TwoBlockPartition,
    opts: &ProjectionOptions,
) -> Result<AdaFactors> {
    part.check_dim(sigma.n())?;
    let m = mostow_spd(sigma, &part.block_anti_diagonal(), opts)?;
    let a_prime = m.pi.log().scale(0.5);
    let d_prime = m.f.log();
    check_structure(
        "log f",
        part.off_block_norm(&d_prime),
        d_prime.frobenius_norm(),
    )?;
    let reconstruction_error = outer_product_error(&a_prime, &d_prime, sigma)?;
    Ok(AdaFactors {
        a_prime,
        d_prime,
        iterations: m.iterations,
        reconstruction_error,
    })
}

// (cosh A, sinh A), checked to be block-diagonal and block-anti-diagonal.
fn cosh_sinh(a: &SymMatrix, part: &TwoBlockPartition) -> Result<(SymMatrix, SymMatrix)> {
    let eig = sym_eigen(a)?;
    let ch = eig.compose(&eig.lambda.iter().map(|l| l.cosh()).collect::<Vec<_>>());
    let sh = eig.compose(&eig.lambda.iter().map(|l| l.sinh()).collect::<Vec<_>>());
    check_structure("cosh A", part.off_block_norm(&ch), ch.frobenius_norm())?;
    check_structure("sinh A", part.diag_block_norm(&sh), sh.frobenius_norm())?;
    Ok((ch, sh))
}

fn check_inputs(d: &SymMatrix, a: &SymMatrix, part: &TwoBlockPartition) -> Result<()> {
    part.check_dim(d.n())?;
    part.check_dim(a.n())?;
    let d_off = part.off_block_norm(d);
    if d_off > STRUCTURE_TOL * d.frobenius_norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "block-diagonal argument has off-diagonal blocks of norm {d_off:e}"
        )));
    }
    let a_on = part.diag_block_norm(a);
    if a_on > STRUCTURE_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "block-anti-diagonal argument has diagonal blocks of norm {a_on:e}"
        )));
    }
    Ok(())
}

fn product_sum(terms: &[(&SymMatrix, &SymMatrix, &SymMatrix)]) -> SymMatrix {
    let n = terms[0].0.n();
    let mut m = DMatrix::zeros(n, n);
    for (l, c, r) in terms {
        m += l.as_matrix() * c.as_matrix() * r.as_matrix();
    }
    SymMatrix::symmetrize(m)
}

/// exp D·exp A·exp D = exp D·cosh A·exp D + exp D·sinh A·exp D.
pub fn cosh_sinh_split(
    d: &SymMatrix,
    a: &SymMatrix,
    part: &TwoBlockPartition,
) -> Result<BlockSplit> {
    check_inputs(d, a, part)?;
    let (ch, sh) = cosh_sinh(a, part)?;
    let ed = spd_exp(d)?;
    let split = BlockSplit {
        d_part: ch.sandwich(ed.as_sym()),
        a_part: sh.sandwich(ed.as_sym()),
    };
    let whole = spd_exp(a)?.as_sym().sandwich(ed.as_sym());
    let err = (&split.sum() - &whole).frobenius_norm();
    check_structure("cosh/sinh split", err, whole.frobenius_norm())?;
    Ok(split)
}

/// exp A'·exp D'·exp A' split into its block-diagonal part
/// cosh A'·e^{D'}·cosh A' + sinh A'·e^{D'}·sinh A' and block-anti-diagonal
/// part sinh A'·e^{D'}·cosh A' + cosh A'·e^{D'}·sinh A'.
pub fn ada_sum_split(
    a_prime: &SymMatrix,
    d_prime: &SymMatrix,
    part: &TwoBlockPartition,
) -> Result<BlockSplit> {
    check_inputs(d_prime, a_prime, part)?;
    let (ch, sh) = cosh_sinh(a_prime, part)?;
    let ed = spd_exp(d_prime)?.into_sym();
    let split = BlockSplit {
        d_part: product_sum(&[(&ch, &ed, &ch), (&sh, &ed, &sh)]),
        a_part: product_sum(&[(&sh, &ed, &ch), (&ch, &ed, &sh)]),
    };
    check_structure(
        "diagonal group",
        part.off_block_norm(&split.d_part),
        split.d_part.frobenius_norm(),
    )?;
    check_structure(
        "anti-diagonal group",
        part.diag_block_norm(&split.a_part),
        split.a_part.frobenius_norm(),
    )?;
    let whole = ed.sandwich(spd_exp(a_prime)?.as_sym());
    let err = (&split.sum() - &whole).frobenius_norm();
    check_structure("cosh/sinh split", err, whole.frobenius_norm())?;
    Ok(split)
}

/// g = k · [[cosh β, sinh β], [sinh β, cosh β]] · diag(e^α, e^{−α}).
#[derive(Clone, Debug)]
pub struct Sl2Factors {
    /// Rotation, det k = +1.
    pub k: DMatrix<f64>,
    pub beta: f64,
    pub alpha: f64,
    pub f: SpdMatrix,
    pub e: SpdMatrix,
    pub reconstruction_error: f64,
}

pub fn sl2_decompose(g: &DMatrix<f64>, opts: &ProjectionOptions) -> Result<Sl2Factors> {
    if g.nrows() != 2 || g.ncols() != 2 {
        return Err(Error::Precondition("expected a 2x2 matrix".into()));
    }
    let det = g.determinant();
    if !((det - 1.0).abs() <= 1e-9) {
        return Err(Error::Precondition(format!("det g = {det} is not 1")));
    }
    let r = mostow_gl(g, &Subspace::sl2_e(), opts)?;
    let det_k = r.k.determinant();
    if !((det_k - 1.0).abs() <= 1e-9) {
        return Err(Error::Numerical(format!("rotation factor has det {det_k}")));
    }
    let beta = r.f.log().get(0, 1);
    let alpha = r.e.log().get(0, 0);
    let reconstruction_error = r.reconstruction_error(g);
    Ok(Sl2Factors {
        k: r.k,
        beta,
        alpha,
        f: r.f,
        e: r.e,
        reconstruction_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_in_subspace, random_invertible, random_spd};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn opts() -> ProjectionOptions {
        ProjectionOptions::default()
    }

    fn sigma() -> SpdMatrix {
        SpdMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()
    }

    fn offdiag(a: f64) -> SymMatrix {
        SymMatrix::from_rows(&[&[0.0, a], &[a, 0.0]])
    }

    fn close(a: &SymMatrix, b: &SymMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    fn one_one() -> TwoBlockPartition {
        TwoBlockPartition::new(1, 1).unwrap()
    }

    #[test]
    fn partitions() {
        assert!(BlockPartition::new(vec![]).is_err());
        assert!(BlockPartition::new(vec![2, 0]).is_err());
        let p = BlockPartition::new(vec![2, 3]).unwrap();
        assert_eq!(p.n(), 5);
        assert_eq!(p.two_block().unwrap(), TwoBlockPartition { p: 2, q: 3 });
        assert!(BlockPartition::new(vec![1, 1, 1])
            .unwrap()
            .two_block()
            .is_err());
    }

    #[test]
    fn correlation_examples() {
        let (c, d) =
            correlation_normalize(&SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap()).unwrap();
        assert_eq!(c.as_sym(), &SymMatrix::identity(2));
        assert_eq!(d.as_sym(), &SymMatrix::from_diagonal(&[4.0, 1.0]));

        let cov = SpdMatrix::from_rows(&[&[4.0, 1.0], &[1.0, 1.0]]).unwrap();
        let (c, d) = correlation_normalize(&cov).unwrap();
        assert!(close(
            c.as_sym(),
            &SymMatrix::from_rows(&[&[1.0, 0.5], &[0.5, 1.0]]),
            1e-15
        ));
        assert_eq!(d.as_sym(), &SymMatrix::from_diagonal(&[4.0, 1.0]));
        let back = c.as_sym().sandwich(d.sqrt().as_sym());
        assert!(close(&back, cov.as_sym(), 1e-14));

        let (c, d) = correlation_normalize(&sigma()).unwrap();
        assert!(close(
            c.as_sym(),
            &SymMatrix::from_rows(&[&[1.0, 0.5], &[0.5, 1.0]]),
            1e-15
        ));
        assert_eq!(d.as_sym(), &SymMatrix::from_diagonal(&[2.0, 2.0]));
    }

    #[test]
    fn diag_projection_examples() {
        let r = diag_projection_compare(&SpdMatrix::from_diagonal(&[3.0, 0.5]).unwrap(), &opts())
            .unwrap();
        assert!(r.equal);
        assert!(r.gap <= 1e-15);
        assert!(r.lemma_residual <= 1e-12);

        let r = diag_projection_compare(&sigma(), &opts()).unwrap();
        assert!(!r.equal);
        assert_abs_diff_eq!(r.pi.as_sym().get(0, 0), 1.7320508, epsilon = 1e-7);
        assert_abs_diff_eq!(r.gap, 2f64.sqrt() * (2.0 - 3f64.sqrt()), epsilon = 1e-10);
        assert!(r.lemma_residual > 1e-3);
    }

    #[test]
    fn diag_projection_lemma_at_n2() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..200 {
            let a: f64 = rng.random_range(0.1..10.0);
            let c: f64 = rng.random_range(0.1..10.0);
            let diagonal = i % 4 == 0;
            let rho = if diagonal {
                0.0
            } else {
                rng.random_range(0.05..0.95) * if rng.random::<bool>() { 1.0 } else { -1.0 }
            };
            let b = rho * (a * c).sqrt();
            let cov = SpdMatrix::from_rows(&[&[a, b], &[b, c]]).unwrap();
            let r = diag_projection_compare(&cov, &opts()).unwrap();
            assert_eq!(r.equal, diagonal);
            if r.equal {
                assert!(r.lemma_residual <= 1e-9);
            } else {
                assert!(r.lemma_residual > 1e-6);
            }
        }
    }

    #[test]
    fn dad_examples() {
        let r = dad_decompose(&sigma(), &one_one(), &opts()).unwrap();
        let q = 0.25 * 3f64.ln();
        assert!(close(&r.d, &SymMatrix::identity(2).scale(q), 1e-10));
        assert!(close(&r.a, &offdiag(2.0 * q), 1e-10));
        assert_abs_diff_eq!(2.0 * q, 0.5493061, epsilon = 1e-7);
        assert!(r.reconstruction_error <= 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let part = TwoBlockPartition::new(2, 1).unwrap();
        let d0 = random_in_subspace(&mut rng, &part.block_diagonal(), 1.0);
        let s = spd_exp(&d0).unwrap();
        let r = dad_decompose(&s, &part, &opts()).unwrap();
        assert!(r.a.frobenius_norm() <= 1e-10);
        assert!(close(&r.d, &d0.scale(0.5), 1e-10));

        let a0 = random_in_subspace(&mut rng, &part.block_anti_diagonal(), 1.0);
        let r = dad_decompose(&spd_exp(&a0).unwrap(), &part, &opts()).unwrap();
        assert!(r.d.frobenius_norm() <= 1e-10);
        assert!(close(&r.a, &a0, 1e-10));

        assert!(matches!(
            dad_decompose(&sigma(), &part, &opts()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ada_examples() {
        let r = ada_decompose(&sigma(), &one_one(), &opts()).unwrap();
        let a = 0.5 * 0.5f64.atanh();
        assert_abs_diff_eq!(a, 0.2746531, epsilon = 1e-7);
        assert!(close(&r.a_prime, &offdiag(a), 1e-10));
        assert!(close(
            &r.d_prime,
            &SymMatrix::identity(2).scale(0.5 * 3f64.ln()),
            1e-10
        ));
        assert_abs_diff_eq!((0.5 * 3f64.ln()).exp(), 3f64.sqrt(), epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let part = TwoBlockPartition::new(2, 2).unwrap();
        let a0 = random_in_subspace(&mut rng, &part.block_anti_diagonal(), 1.0);
        let r = ada_decompose(&spd_exp(&a0).unwrap(), &part, &opts()).unwrap();
        assert!(r.d_prime.frobenius_norm() <= 1e-10);

        let d0 = random_in_subspace(&mut rng, &part.block_diagonal(), 1.0);
        let r = ada_decompose(&spd_exp(&d0).unwrap(), &part, &opts()).unwrap();
        assert!(r.a_prime.frobenius_norm() <= 1e-10);
        assert!(close(&r.d_prime, &d0, 1e-10));
    }

    #[test]
    fn cosh_sinh_examples() {
        let part = one_one();
        let d = SymMatrix::from_diagonal(&[0.3, -0.2]);
        let s = cosh_sinh_split(&d, &SymMatrix::zeros(2), &part).unwrap();
        assert!(close(
            &s.d_part,
            &spd_exp(&d.scale(2.0)).unwrap().into_sym(),
            1e-14
        ));
        assert!(s.a_part.frobenius_norm() < 1e-15);

        let a = 0.8;
        let s = cosh_sinh_split(&SymMatrix::zeros(2), &offdiag(a), &part).unwrap();
        assert!(close(
            &s.d_part,
            &SymMatrix::identity(2).scale(a.cosh()),
            1e-14
        ));
        assert!(close(&s.a_part, &offdiag(a.sinh()), 1e-14));

        let r = dad_decompose(&sigma(), &part, &opts()).unwrap();
        let s = cosh_sinh_split(&r.d, &r.a, &part).unwrap();
        assert!(close(
            &s.d_part,
            &SymMatrix::from_diagonal(&[2.0, 2.0]),
            1e-10
        ));
        assert!(close(&s.a_part, &offdiag(1.0), 1e-10));

        assert!(matches!(
            cosh_sinh_split(&offdiag(1.0), &offdiag(1.0), &part),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            cosh_sinh_split(&d, &d, &part),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ada_sum_examples() {
        let part = one_one();
        let d = SymMatrix::from_diagonal(&[0.3, -0.2]);
        let s = ada_sum_split(&SymMatrix::zeros(2), &d, &part).unwrap();
        assert!(close(&s.d_part, &spd_exp(&d).unwrap().into_sym(), 1e-14));
        assert!(s.a_part.frobenius_norm() < 1e-15);

        let a = 0.6;
        let s = ada_sum_split(&offdiag(a), &SymMatrix::zeros(2), &part).unwrap();
        assert!(close(
            &s.d_part,
            &SymMatrix::identity(2).scale((2.0 * a).cosh()),
            1e-14
        ));
        assert!(close(&s.a_part, &offdiag((2.0 * a).sinh()), 1e-14));

        let r = ada_decompose(&sigma(), &part, &opts()).unwrap();
        let s = ada_sum_split(&r.a_prime, &r.d_prime, &part).unwrap();
        assert!(close(
            &s.d_part,
            &SymMatrix::from_diagonal(&[2.0, 2.0]),
            1e-10
        ));
        assert!(close(&s.a_part, &offdiag(1.0), 1e-10));
    }

    #[test]
    fn random_block_decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 0..30 {
            let n = [2, 4, 6][k % 3];
            let part = TwoBlockPartition::new(n / 2, n / 2).unwrap();
            let s = random_spd(&mut rng, n, 1e3);
            let dad = dad_decompose(&s, &part, &opts()).unwrap();
            let ada = ada_decompose(&s, &part, &opts()).unwrap();
            assert!(dad.reconstruction_error <= 1e-8);
            assert!(ada.reconstruction_error <= 1e-8);

            let (bd, ba) = part.split_entries(s.as_sym());
            let tol = 1e-10 * s.frobenius_norm();
            let s1 = cosh_sinh_split(&dad.d, &dad.a, &part).unwrap();
            assert!(close(&s1.d_part, &bd, tol) && close(&s1.a_part, &ba, tol));
            let s2 = ada_sum_split(&ada.a_prime, &ada.d_prime, &part).unwrap();
            assert!(close(&s2.d_part, &bd, tol) && close(&s2.a_part, &ba, tol));
        }
    }

    fn rotation(theta: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
    }

    #[test]
    fn sl2_examples() {
        let g = rotation(0.7);
        let r = sl2_decompose(&g, &opts()).unwrap();
        assert!((&r.k - &g).norm() < 1e-12);
        assert_abs_diff_eq!(r.beta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.alpha, 0.0, epsilon = 1e-12);

        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let r = sl2_decompose(&g, &opts()).unwrap();
        assert!((&r.k - DMatrix::identity(2, 2)).norm() < 1e-12);
        assert_abs_diff_eq!(r.beta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.alpha, 2f64.ln(), epsilon = 1e-12);

        let (c, s) = (1f64.cosh(), 1f64.sinh());
        let g = DMatrix::from_row_slice(2, 2, &[c, s, s, c]);
        let r = sl2_decompose(&g, &opts()).unwrap();
        assert!((&r.k - DMatrix::identity(2, 2)).norm() < 1e-9);
        assert_abs_diff_eq!(r.beta, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.alpha, 0.0, epsilon = 1e-9);

        assert!(matches!(
            sl2_decompose(
                &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]),
                &opts()
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sl2_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let mut g = random_invertible(&mut rng, 2);
            if g.determinant() < 0.0 {
                g.column_mut(0).neg_mut();
            }
            g /= g.determinant().sqrt();
            let r = sl2_decompose(&g, &opts()).unwrap();
            assert!(r.reconstruction_error <= 1e-8);
            assert_abs_diff_eq!(r.k.determinant(), 1.0, epsilon = 1e-9);
            let f = SymMatrix::from_rows(&[
                &[r.beta.cosh(), r.beta.sinh()],
                &[r.beta.sinh(), r.beta.cosh()],
            ]);
            assert!(close(r.f.as_sym(), &f, 1e-9));
            let e = SymMatrix::from_diagonal(&[r.alpha.exp(), (-r.alpha).exp()]);
            assert!(close(r.e.as_sym(), &e, 1e-9));
        }
    }
}
