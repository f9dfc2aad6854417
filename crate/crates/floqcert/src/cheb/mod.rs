//! Chebyshev grids, spectral differentiation, interpolation, and the
//! polynomial-evaluation and norm-estimation kernels everything else is
//! built on.

pub(crate) mod coeffs;
mod diff;
mod grid;
mod nodepoly;
mod poly;
mod supnorm;

pub use coeffs::ChebCoeffs;
pub use diff::diff_matrix;
pub use grid::{collocation_points, ChebGrid};
pub use nodepoly::{node_poly, node_poly_norm};
pub use poly::ChebPoly;
pub use supnorm::{adaptive_sup_norm, adaptive_sup_norm_vec, sup_norm_bound, SupNormBound};
