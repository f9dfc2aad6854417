//! Rigorous sup-norm bounds from Chebyshev coefficients, and the adaptive
//! degree-doubling estimator for analytic functions.

use crate::cheb::coeffs::values_to_coeffs;
use crate::cheb::ChebCoeffs;
use crate::scalar::{Cplx, Scalar};

/// Largest interpolation degree the adaptive estimator will try (2^12 - 1).
pub const ADAPTIVE_MAX_DEGREE: usize = 4095;

/// ||p||_inf <= sum_k |a_k|, per component combined in Euclidean norm.
pub fn sup_norm_bound<R: Scalar>(c: &ChebCoeffs<R>) -> R {
    let mut total = R::zero();
    for s in 0..c.dim() {
        let col: R = c.coeffs().column(s).iter().map(|a| a.norm()).sum();
        total += col * col;
    }
    total.sqrt()
}

/// Result of [`adaptive_sup_norm`]: the coefficient-sum bound together with
/// the degree it was accepted at. `resolved` is false when the coefficient
/// tail never fell under the acceptance threshold by degree 4095; the bound
/// is still returned but may be loose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormBound<R> {
    pub value: R,
    pub degree: usize,
    pub resolved: bool,
}

impl<R: Scalar> SupNormBound<R> {
    fn combine_sq(parts: &[SupNormBound<R>]) -> SupNormBound<R> {
        let value = parts.iter().map(|p| p.value * p.value).sum::<R>().sqrt();
        SupNormBound {
            value,
            degree: parts.iter().map(|p| p.degree).max().unwrap_or(15),
            resolved: parts.iter().all(|p| p.resolved),
        }
    }
}

/// Estimate ||f||_inf for an analytic scalar function on [-1,1].
///
/// Interpolates at degree M = 15, accepts once the last four coefficients are
/// below 10 eps relative to max(1, max_k |a_k|), otherwise doubles
/// M <- 2(M+1)-1 up to 4095. Returns the coefficient-sum bound of the
/// accepted interpolant.
pub fn adaptive_sup_norm<R: Scalar>(f: impl Fn(R) -> Cplx<R>) -> SupNormBound<R> {
    let mut m = 15usize;
    loop {
        let mf = R::usize(m);
        let v: Vec<Cplx<R>> = (0..=m)
            .map(|j| f((R::PI() * R::usize(j) / mf).cos()))
            .collect();
        let a = values_to_coeffs(&v);
        let max_mag = a.iter().map(|z| z.norm()).fold(R::zero(), R::max);
        let tail = a[m - 3..=m].iter().map(|z| z.norm()).fold(R::zero(), R::max);
        let threshold = R::lit(10.0) * R::epsilon() * max_mag.max(R::one());
        let accepted = tail < threshold;
        if accepted || m >= ADAPTIVE_MAX_DEGREE {
            let value: R = a.iter().map(|z| z.norm()).sum();
            return SupNormBound {
                value,
                degree: m,
                resolved: accepted,
            };
        }
        m = 2 * (m + 1) - 1;
    }
}

/// Componentwise adaptive bounds combined in Euclidean norm; this is the
/// vector-sup upper bound used by the system certificates.
pub fn adaptive_sup_norm_vec<R: Scalar>(
    d: usize,
    f: impl Fn(R, usize) -> Cplx<R>,
) -> SupNormBound<R> {
    let parts: Vec<SupNormBound<R>> = (0..d).map(|s| adaptive_sup_norm(|t| f(t, s))).collect();
    SupNormBound::combine_sq(&parts)
}
