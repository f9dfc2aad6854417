//! The Chebyshev-weighted L^2 and H^1 norms, normalized basis polynomials,
//! and the pointwise / sup-norm bridges used by the certification pipeline.

use crate::cheb::ChebCoeffs;
use crate::scalar::Scalar;

/// Pointwise-evaluation constant: |f(t)| <= 0.9062 ||f||_{H^1}. The literal
/// slightly exceeds the exact sqrt(2) sqrt(pi/3 - 2/pi), keeping the bound
/// valid.
pub const POINTWISE_CONSTANT: f64 = 0.9062;

/// L^2 and H^1 norms of a polynomial, computed exactly from its coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Norm<R> {
    pub l2: R,
    pub h1: R,
}

/// The L^2-normalized Chebyshev polynomial T-hat_k at t.
pub fn cheb_hat<R: Scalar>(k: usize, t: R) -> R {
    let base = (R::usize(k) * t.min(R::one()).max(-R::one()).acos()).cos();
    if k == 0 {
        base / R::PI().sqrt()
    } else {
        base * (R::lit(2.0) / R::PI()).sqrt()
    }
}

/// The H^1-normalized Chebyshev polynomial T-tilde_k = T-hat_k / (1+k) at t.
pub fn cheb_tilde<R: Scalar>(k: usize, t: R) -> R {
    cheb_hat(k, t) / R::usize(k + 1)
}

/// Norms of the polynomial with plain T_k coefficients `c` (components
/// combined in Euclidean norm). Internally rescales to the orthonormal
/// basis: f-hat_0 = sqrt(pi) a_0, f-hat_k = sqrt(pi/2) a_k.
pub fn h1_norm<R: Scalar>(c: &ChebCoeffs<R>) -> H1Norm<R> {
    let sqrt_pi = R::PI().sqrt();
    let sqrt_pi_half = (R::PI() / R::lit(2.0)).sqrt();
    let mut l2_sq = R::zero();
    let mut h1_sq = R::zero();
    for s in 0..c.dim() {
        for (k, a) in c.coeffs().column(s).iter().enumerate() {
            let scale = if k == 0 { sqrt_pi } else { sqrt_pi_half };
            let mag_sq = a.norm_sqr() * scale * scale;
            let w = R::usize(k + 1);
            l2_sq += mag_sq;
            h1_sq += w * w * mag_sq;
        }
    }
    H1Norm {
        l2: l2_sq.sqrt(),
        h1: h1_sq.sqrt(),
    }
}

/// Uniform bound |f(t)| <= 0.9062 ||f||_{H^1}.
pub fn pointwise_bound<R: Scalar>(h1: R) -> R {
    R::lit(POINTWISE_CONSTANT) * h1
}

/// ||f||_{H^1}^2 <= 2 pi ||f||_inf^2 + 2 pi ||f'||_inf^2 for C^1 functions;
/// also valid for vector-valued f with Euclidean-norm sups.
pub fn h1_bound_from_sup<R: Scalar>(f_sup: R, fdot_sup: R) -> R {
    let two_pi = R::lit(2.0) * R::PI();
    (two_pi * f_sup * f_sup + two_pi * fdot_sup * fdot_sup).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::{collocation_points, ChebPoly};
    use num_complex::Complex64;

    #[test]
    fn normalized_basis_values() {
        assert!((cheb_hat::<f64>(0, 0.3) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let expect = (2.0 / std::f64::consts::PI).sqrt() / 2.0;
        assert!((cheb_tilde::<f64>(1, 1.0) - expect).abs() < 1e-12);
        assert!((expect - 0.3989422804).abs() < 1e-9);
    }

    #[test]
    fn tilde_basis_is_orthonormal_in_h1() {
        for k in 0..=10usize {
            let n = (k + 2).max(4);
            let grid = collocation_points::<f64>(n).unwrap();
            let p = ChebPoly::interpolate_scalar(grid, |t| Complex64::new(cheb_tilde(k, t), 0.0));
            let norms = h1_norm(&p.coeffs());
            assert!((norms.h1 - 1.0).abs() < 1e-12, "k={k}: {}", norms.h1);
        }
    }

    #[test]
    fn constant_norms() {
        let grid = collocation_points::<f64>(4).unwrap();
        let one = ChebPoly::interpolate_scalar(grid, |_| Complex64::new(1.0, 0.0));
        let norms = h1_norm(&one.coeffs());
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((norms.l2 - sqrt_pi).abs() < 1e-12);
        assert!((norms.h1 - sqrt_pi).abs() < 1e-12);
    }

    #[test]
    fn t1_h1_norm() {
        let grid = collocation_points::<f64>(4).unwrap();
        let p = ChebPoly::interpolate_scalar(grid, |t| Complex64::new(t, 0.0));
        let norms = h1_norm(&p.coeffs());
        let expect = 2.0 * (std::f64::consts::PI / 2.0).sqrt();
        assert!((norms.h1 - expect).abs() < 1e-12);
    }

    #[test]
    fn pointwise_bound_basics() {
        assert_eq!(pointwise_bound(0.0f64), 0.0);
        assert_eq!(pointwise_bound(1.0f64), 0.9062);
        // f = T-tilde_0 has sup 1/sqrt(pi) ~ 0.564 <= 0.9062.
        assert!(1.0 / std::f64::consts::PI.sqrt() <= 0.9062);
    }

    #[test]
    fn sup_bridge_values() {
        assert_eq!(h1_bound_from_sup(0.0f64, 0.0), 0.0);
        let expect = (2.0 * std::f64::consts::PI).sqrt();
        assert!((h1_bound_from_sup(1.0f64, 0.0) - expect).abs() < 1e-13);
        // f = 1: true H^1 norm sqrt(pi) <= sqrt(2 pi).
        assert!(std::f64::consts::PI.sqrt() <= expect);
    }

    fn random_poly(n: usize, seed: u64) -> ChebPoly<f64> {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let grid = collocation_points::<f64>(n).unwrap();
        let values =
            ndarray::Array2::from_shape_fn((n + 1, 1), |_| Complex64::new(next(), next()));
        ChebPoly::from_values(grid, values).unwrap()
    }

    #[test]
    fn pointwise_bound_dominates_samples() {
        for seed in 0..20u64 {
            let p = random_poly(32, 1 + seed);
            let bound = pointwise_bound(h1_norm(&p.coeffs()).h1);
            let mut sampled = 0.0f64;
            for i in 0..1000 {
                let t = -1.0 + 2.0 * i as f64 / 999.0;
                sampled = sampled.max(p.eval_component(0, t).norm());
            }
            assert!(bound >= sampled, "seed {seed}: {bound} < {sampled}");
        }
    }

    #[test]
    fn sup_bridge_dominates_h1() {
        use crate::cheb::diff_matrix;
        let d = diff_matrix::<f64>(32).unwrap();
        for seed in 0..10u64 {
            let p = random_poly(32, 100 + seed);
            let col: Vec<Complex64> = p.values().column(0).to_vec();
            let mut dv = vec![Complex64::new(0.0, 0.0); 33];
            for i in 0..33 {
                for j in 0..33 {
                    dv[i] += col[j] * d[(i, j)];
                }
            }
            let mut p_sup = 0.0f64;
            let mut dp_sup = 0.0f64;
            let dpoly = ChebPoly::from_values(
                p.grid().clone(),
                ndarray::Array2::from_shape_fn((33, 1), |(j, _)| dv[j]),
            )
            .unwrap();
            for i in 0..2000 {
                let t = -1.0 + i as f64 / 999.5;
                p_sup = p_sup.max(p.eval_component(0, t).norm());
                dp_sup = dp_sup.max(dpoly.eval_component(0, t).norm());
            }
            let bridge = h1_bound_from_sup(p_sup, dp_sup);
            let h1 = h1_norm(&p.coeffs()).h1;
            assert!(bridge >= h1 * (1.0 - 1e-9), "seed {seed}: {bridge} < {h1}");
        }
    }

    #[test]
    fn h1_is_homogeneous() {
        for seed in 0..5u64 {
            let p = random_poly(24, 7 + seed);
            let alpha = 3.7f64;
            let scaled = ChebPoly::from_values(p.grid().clone(), p.values() * Complex64::from(alpha))
                .unwrap();
            let a = h1_norm(&p.coeffs()).h1 * alpha;
            let b = h1_norm(&scaled.coeffs()).h1;
            assert!((a - b).abs() <= 1e-13 * a.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn h1_weights_dominate_l2() {
        for seed in 0..5u64 {
            let p = random_poly(16, 55 + seed);
            let norms = h1_norm(&p.coeffs());
            assert!(norms.h1 >= norms.l2);
        }
    }
}
