//! Property tests for the Chebyshev layer invariants.

use floqcert::cheb::{collocation_points, node_poly, sup_norm_bound, ChebPoly};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

fn values_strategy(max_degree: usize) -> impl Strategy<Value = Vec<Complex64>> {
    (1..=max_degree).prop_flat_map(|n| {
        prop::collection::vec(
            (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
            n + 1,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coeff_value_roundtrip(values in values_strategy(80)) {
        let n = values.len() - 1;
        let grid = collocation_points::<f64>(n).unwrap();
        let arr = Array2::from_shape_fn((n + 1, 1), |(j, _)| values[j]);
        let norm = arr.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let p = ChebPoly::from_values(grid, arr.clone()).unwrap();
        let back = p.coeffs().to_poly().unwrap();
        let tol = 100.0 * f64::EPSILON * (n + 1) as f64 * norm.max(f64::MIN_POSITIVE);
        for j in 0..=n {
            let err = (back.values()[(j, 0)] - arr[(j, 0)]).norm();
            prop_assert!(err <= tol, "node {j}: err {err} vs tol {tol}");
        }
    }

    #[test]
    fn barycentric_reproduces_interpolated_polynomials(
        coeffs in prop::collection::vec(-3.0..3.0f64, 1..10),
        extra in 0usize..12,
        ts in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        // Interpolate a random polynomial at a grid of higher degree, then
        // evaluate off-grid: values must match the polynomial exactly.
        let eval = |t: f64| {
            let mut acc = 0.0;
            for &c in coeffs.iter().rev() {
                acc = acc * t + c;
            }
            acc
        };
        let n = coeffs.len() - 1 + extra;
        let n = n.max(1);
        let grid = collocation_points::<f64>(n).unwrap();
        let p = ChebPoly::interpolate_scalar(grid, |t| Complex64::new(eval(t), 0.0));
        let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
        for &t in &ts {
            let err = (p.eval_component(0, t).re - eval(t)).abs();
            prop_assert!(err <= 1e-12 * scale, "t={t}: err {err}");
        }
    }

    #[test]
    fn coefficient_sum_bounds_sampled_sup(values in values_strategy(48)) {
        let n = values.len() - 1;
        let grid = collocation_points::<f64>(n).unwrap();
        let arr = Array2::from_shape_fn((n + 1, 1), |(j, _)| values[j]);
        let p = ChebPoly::from_values(grid, arr).unwrap();
        let bound = sup_norm_bound(&p.coeffs());
        let mut sampled = 0.0f64;
        for i in 0..400 {
            let t = -1.0 + 2.0 * i as f64 / 399.0;
            sampled = sampled.max(p.eval_component(0, t).norm());
        }
        prop_assert!(
            bound >= sampled * (1.0 - 1e-12),
            "bound {bound} < sampled {sampled}"
        );
    }

    #[test]
    fn node_polynomial_closed_form(n in 1usize..14, t in -1.0..1.0f64) {
        let grid = collocation_points::<f64>(n).unwrap();
        let mut direct = 1.0f64;
        for j in 0..n {
            direct *= t - grid.point(j);
        }
        let closed = node_poly(n, t);
        prop_assert!((closed - direct).abs() <= 1e-11, "{closed} vs {direct}");
    }
}
