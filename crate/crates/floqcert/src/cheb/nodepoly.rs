//! The monic node polynomial l_N(t) = (t - t_0)...(t - t_{N-1}) in its closed
//! trigonometric form.

use crate::scalar::Scalar;

/// Evaluate l_N(t) via l_N(cos th) = (cos th - 1) sin(N th) / (2^{N-1} sin th).
///
/// The quotient is 0/0 at the endpoints; near th = 0 the limit is 0 and near
/// th = pi it is (-1)^N N 2^{2-N}, switched to when |sin th| < 1e-8.
pub fn node_poly<R: Scalar>(n: usize, t: R) -> R {
    let theta = t.min(R::one()).max(-R::one()).acos();
    let sin_t = theta.sin();
    let scale = R::lit(2.0).powi(n as i32 - 1);
    if sin_t < R::lit(1e-8) {
        return if theta < R::FRAC_PI_2() {
            R::zero()
        } else {
            let sign = if n % 2 == 0 { R::one() } else { -R::one() };
            sign * R::usize(n) * R::lit(2.0).powi(2 - n as i32)
        };
    }
    (theta.cos() - R::one()) * (R::usize(n) * theta).sin() / (scale * sin_t)
}

/// ||l_N||_inf = N 2^{2-N}, attained at t = -1.
pub fn node_poly_norm<R: Scalar>(n: usize) -> R {
    R::usize(n) * R::lit(2.0).powi(2 - n as i32)
}
