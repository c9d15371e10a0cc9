//! Affine-invariant Riemannian geometry of symmetric positive-definite
//! matrices.
//!
//! The crate covers the matrix functions underneath the geometry
//! ([`matfun`]), the Riemannian structure of SPD(n) ([`manifold`]), the
//! differential of the matrix exponential ([`dexp`]), subspaces of Sym(n)
//! and Lie triple systems ([`subspace`]), geodesic projection and Mostow
//! factorizations ([`decompose`]), and worked covariance-matrix
//! decompositions ([`applications`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod decompose;
pub mod dexp;
pub mod error;
pub mod manifold;
pub mod matfun;
pub mod sample;
pub mod subspace;

pub use applications::{BlockPartition, BlockSplit, TwoBlockPartition};
pub use decompose::{GlFactors, MostowFactors, Projection, ProjectionOptions};
pub use error::{Error, Result};
pub use manifold::{GeodesicSegment, TangentVector};
pub use matfun::{EigenDecomposition, SpdMatrix, SymMatrix};
pub use subspace::{LtsReport, Subspace};

pub use nalgebra::DMatrix;
