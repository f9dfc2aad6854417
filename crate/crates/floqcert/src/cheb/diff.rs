//! The Chebyshev spectral differentiation matrix D_N.

use crate::cheb::ChebGrid;
use crate::error::Result;
use crate::scalar::Scalar;
use ndarray::Array2;

/// Build D_N, the (N+1)x(N+1) real matrix mapping node values of a degree-N
/// polynomial to node values of its derivative.
///
/// Off-diagonal entries use the closed form (c_i/c_j)(-1)^{i+j}/(t_i - t_j);
/// the diagonal is the negated row sum, which keeps constants exactly in the
/// kernel and suppresses cancellation at larger N.
pub fn diff_matrix<R: Scalar>(n: usize) -> Result<Array2<R>> {
    let grid = ChebGrid::<R>::new(n)?;
    let t = grid.points();
    let m = n + 1;
    let mut d = Array2::<R>::zeros((m, m));
    let c = |i: usize| {
        if i == 0 || i == n {
            R::lit(2.0)
        } else {
            R::one()
        }
    };
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let sign = if (i + j) % 2 == 0 { R::one() } else { -R::one() };
                d[(i, j)] = c(i) / c(j) * sign / (t[i] - t[j]);
            }
        }
    }
    for i in 0..m {
        let mut row_sum = R::zero();
        for j in 0..m {
            if i != j {
                row_sum += d[(i, j)];
            }
        }
        d[(i, i)] = -row_sum;
    }
    Ok(d)
}
