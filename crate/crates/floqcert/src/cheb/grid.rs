//! Chebyshev collocation points (extreme points of T_N).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use ndarray::Array1;

/// The N+1 collocation points t_j = cos(pi*j/N), descending from t_0 = 1 to
/// t_N = -1.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid<R: Scalar> {
    n: usize,
    points: Array1<R>,
}

/// Build the degree-N collocation grid. N = 0 is rejected as degenerate.
pub fn collocation_points<R: Scalar>(n: usize) -> Result<ChebGrid<R>> {
    ChebGrid::new(n)
}

impl<R: Scalar> ChebGrid<R> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegenerateGrid);
        }
        let nf = R::usize(n);
        let points = Array1::from_iter((0..=n).map(|j| (R::PI() * R::usize(j) / nf).cos()));
        Ok(ChebGrid { n, points })
    }

    /// Polynomial degree N; the grid has N+1 points.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &Array1<R> {
        &self.points
    }

    pub fn point(&self, j: usize) -> R {
        self.points[j]
    }
}
