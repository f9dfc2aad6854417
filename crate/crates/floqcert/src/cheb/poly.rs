//! Polynomials represented by their collocation node values, with stable
//! barycentric evaluation.

use crate::cheb::coeffs::cheb_coeffs;
use crate::cheb::{ChebCoeffs, ChebGrid};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Scalar};
use ndarray::{Array1, Array2};

/// A degree-N polynomial (possibly C^d-valued) stored as its values at the
/// N+1 collocation points; column s holds component s.
#[derive(Debug, Clone)]
pub struct ChebPoly<R: Scalar> {
    grid: ChebGrid<R>,
    values: Array2<Cplx<R>>,
}

impl<R: Scalar> ChebPoly<R> {
    pub fn from_values(grid: ChebGrid<R>, values: Array2<Cplx<R>>) -> Result<Self> {
        if values.nrows() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} value rows for a grid of {} points",
                values.nrows(),
                grid.len()
            )));
        }
        Ok(ChebPoly { grid, values })
    }

    /// Interpolate a scalar function at the grid.
    pub fn interpolate_scalar(grid: ChebGrid<R>, f: impl Fn(R) -> Cplx<R>) -> Self {
        let values = Array2::from_shape_fn((grid.len(), 1), |(j, _)| f(grid.point(j)));
        ChebPoly { grid, values }
    }

    /// Interpolate a vector-valued function at the grid.
    pub fn interpolate(grid: ChebGrid<R>, d: usize, f: impl Fn(R) -> Array1<Cplx<R>>) -> Self {
        let mut values = Array2::zeros((grid.len(), d));
        for j in 0..grid.len() {
            let row = f(grid.point(j));
            for s in 0..d {
                values[(j, s)] = row[s];
            }
        }
        ChebPoly { grid, values }
    }

    pub fn grid(&self) -> &ChebGrid<R> {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.grid.degree()
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<Cplx<R>> {
        &self.values
    }

    /// The single-component polynomial for component s.
    pub fn component(&self, s: usize) -> ChebPoly<R> {
        let col = self.values.column(s);
        let values = Array2::from_shape_fn((self.grid.len(), 1), |(j, _)| col[j]);
        ChebPoly {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Chebyshev coefficients, per component.
    pub fn coeffs(&self) -> ChebCoeffs<R> {
        cheb_coeffs(self)
    }

    /// Evaluate component s at t by the second barycentric formula with the
    /// weights special to Chebyshev extreme points. A query within 2 eps of a
    /// node returns the stored value.
    pub fn eval_component(&self, s: usize, t: R) -> Cplx<R> {
        bary_eval_slice(self.grid.points(), &self.values.column(s).to_vec(), t)
    }

    /// Evaluate all components at t.
    pub fn eval(&self, t: R) -> Array1<Cplx<R>> {
        Array1::from_iter((0..self.dim()).map(|s| self.eval_component(s, t)))
    }
}

/// Barycentric evaluation of the polynomial with node values `v` on `points`.
pub(crate) fn bary_eval_slice<R: Scalar>(points: &Array1<R>, v: &[Cplx<R>], t: R) -> Cplx<R> {
    let n = v.len() - 1;
    let tol = R::lit(2.0) * R::epsilon();
    for (j, &tj) in points.iter().enumerate() {
        if (t - tj).abs() <= tol {
            return v[j];
        }
    }
    // w_j = (-1)^j, halved at both endpoints.
    let mut num = Cplx::new(R::zero(), R::zero());
    let mut den = R::zero();
    let mut sign = R::one();
    for j in 0..=n {
        let mut w = sign;
        if j == 0 || j == n {
            w = w * R::lit(0.5);
        }
        let z = w / (t - points[j]);
        num = num + v[j] * z;
        den += z;
        sign = -sign;
    }
    num / den
}
