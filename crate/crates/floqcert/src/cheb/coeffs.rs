//! Discrete Chebyshev series: node values <-> T_k coefficients via an
//! even FFT of length 2N.

use crate::cheb::{ChebGrid, ChebPoly};
use crate::error::Result;
use crate::scalar::{Cplx, Scalar};
use ndarray::{Array1, Array2};
use rustfft::FftPlanner;

/// Coefficients a_k of p(t) = sum_k a_k T_k(t), one column per component.
#[derive(Debug, Clone)]
pub struct ChebCoeffs<R: Scalar> {
    coeffs: Array2<Cplx<R>>,
}

/// Node values -> T_k coefficients for a single component.
pub(crate) fn values_to_coeffs<R: Scalar>(v: &[Cplx<R>]) -> Vec<Cplx<R>> {
    let n = v.len() - 1;
    if n == 0 {
        return v.to_vec();
    }
    // Even extension [v_0..v_N, v_{N-1}..v_1], transform, rescale endpoints.
    let mut z: Vec<Cplx<R>> = Vec::with_capacity(2 * n);
    z.extend_from_slice(v);
    for j in (1..n).rev() {
        z.push(v[j]);
    }
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut z);
    let nf = R::usize(n);
    let half = R::lit(0.5);
    let mut a: Vec<Cplx<R>> = (0..=n).map(|k| z[k] / nf).collect();
    a[0] = a[0] * half;
    a[n] = a[n] * half;
    a
}

/// T_k coefficients -> node values for a single component.
pub(crate) fn coeffs_to_values<R: Scalar>(a: &[Cplx<R>]) -> Vec<Cplx<R>> {
    let n = a.len() - 1;
    if n == 0 {
        return a.to_vec();
    }
    let two = R::lit(2.0);
    let mut z: Vec<Cplx<R>> = Vec::with_capacity(2 * n);
    z.push(a[0] * two);
    z.extend_from_slice(&a[1..n]);
    z.push(a[n] * two);
    for k in (1..n).rev() {
        z.push(a[k]);
    }
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut z);
    let half = R::lit(0.5);
    (0..=n).map(|j| z[j] * half).collect()
}

impl<R: Scalar> ChebCoeffs<R> {
    pub fn from_array(coeffs: Array2<Cplx<R>>) -> Self {
        ChebCoeffs { coeffs }
    }

    /// Coefficients of a single scalar component.
    pub fn from_vec(coeffs: Vec<Cplx<R>>) -> Self {
        let n = coeffs.len();
        ChebCoeffs {
            coeffs: Array2::from_shape_vec((n, 1), coeffs).expect("shape"),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &Array2<Cplx<R>> {
        &self.coeffs
    }

    pub fn component(&self, s: usize) -> Array1<Cplx<R>> {
        self.coeffs.column(s).to_owned()
    }

    /// Evaluate the Chebyshev series back at the collocation nodes.
    pub fn to_poly(&self) -> Result<ChebPoly<R>> {
        let n = self.degree();
        let d = self.dim();
        let mut values = Array2::zeros((n + 1, d));
        for s in 0..d {
            let col: Vec<Cplx<R>> = self.coeffs.column(s).to_vec();
            let v = coeffs_to_values(&col);
            for (j, x) in v.into_iter().enumerate() {
                values[(j, s)] = x;
            }
        }
        ChebPoly::from_values(ChebGrid::new(n)?, values)
    }
}

/// Forward map of a node-value polynomial, per component.
pub fn cheb_coeffs<R: Scalar>(p: &ChebPoly<R>) -> ChebCoeffs<R> {
    let n = p.degree();
    let d = p.dim();
    let mut coeffs = Array2::zeros((n + 1, d));
    for s in 0..d {
        let col: Vec<Cplx<R>> = p.values().column(s).to_vec();
        let a = values_to_coeffs(&col);
        for (k, x) in a.into_iter().enumerate() {
            coeffs[(k, s)] = x;
        }
    }
    ChebCoeffs { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::collocation_points;
    use num_complex::Complex64;

    fn poly_from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> ChebPoly<f64> {
        let grid = collocation_points::<f64>(n).unwrap();
        ChebPoly::interpolate_scalar(grid, f)
    }

    #[test]
    fn basis_function_t3() {
        let p = poly_from_fn(5, |t| {
            Complex64::new(4.0 * t.powi(3) - 3.0 * t, 0.0) // T_3
        });
        let a = cheb_coeffs(&p);
        for k in 0..=5 {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!(
                (a.coeffs()[(k, 0)] - expect).norm() < 1e-14,
                "k={k}: {:?}",
                a.coeffs()[(k, 0)]
            );
        }
    }

    #[test]
    fn constant_one() {
        let p = poly_from_fn(6, |_| Complex64::new(1.0, 0.0));
        let a = cheb_coeffs(&p);
        assert!((a.coeffs()[(0, 0)] - 1.0).norm() < 1e-15);
        for k in 1..=6 {
            assert!(a.coeffs()[(k, 0)].norm() < 1e-15);
        }
    }

    #[test]
    fn roundtrip_random_complex() {
        let n = 64;
        // Deterministic pseudo-random values.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let grid = collocation_points::<f64>(n).unwrap();
        let mut values = Array2::zeros((n + 1, 1));
        for j in 0..=n {
            values[(j, 0)] = Complex64::new(next(), next());
        }
        let norm = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let p = ChebPoly::from_values(grid, values.clone()).unwrap();
        let back = cheb_coeffs(&p).to_poly().unwrap();
        let mut max = 0.0f64;
        for j in 0..=n {
            max = max.max((back.values()[(j, 0)] - values[(j, 0)]).norm());
        }
        assert!(max < 1e-13 * norm, "roundtrip error {max}");
    }
}
