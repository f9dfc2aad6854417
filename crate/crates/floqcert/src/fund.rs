//! A priori and bootstrap a posteriori bounds C_A on |Phi_A(t) Phi_A(s)^{-1}|
//! for the fundamental solution of y' = A(t) y.

use crate::cheb::{adaptive_sup_norm, ChebPoly};
use crate::error::{Error, Result};
use crate::ivp::{apost_certificate, frobenius, CoeffFn, CollocationSystem, LinearIvp};
use ndarray::{Array1, Array2};
use ndarray_linalg::SVDInto;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundProvenance {
    APriori,
    Bootstrap { iterations: usize },
}

/// A bound C_A on |Phi_A(t) Phi_A(s)^{-1}|, -1 <= s <= t <= 1, with the
/// sequence of successive bounds that produced it.
#[derive(Debug, Clone)]
pub struct FundamentalBound {
    pub value: f64,
    pub provenance: BoundProvenance,
    pub history: Vec<f64>,
}

/// e^{2 alpha} with alpha an adaptive coefficient-sum bound on the Frobenius
/// norm of A(t); the interval has length 2.
pub fn apriori_bound(coeff: &CoeffFn) -> FundamentalBound {
    let alpha = adaptive_sup_norm(|t: f64| Complex64::new(frobenius(&coeff(t)), 0.0));
    let value = (2.0 * alpha.value).exp();
    FundamentalBound {
        value,
        provenance: BoundProvenance::APriori,
        history: vec![value],
    }
}

/// One side of the bootstrap: d collocation solutions of y' = M(t) y,
/// y(-1) = e_s, certified against the current bound.
struct FundSide {
    columns: Vec<ChebPoly<f64>>,
    /// sqrt(sum_s nu_s^2) from the per-column certificates.
    xi: f64,
    flagged: bool,
}

fn solve_side(
    coeff: &CoeffFn,
    d: usize,
    sys: &CollocationSystem,
    c_current: f64,
) -> Result<FundSide> {
    let mut columns = Vec::with_capacity(d);
    let mut xi_sq = 0.0;
    let mut flagged = false;
    for s in 0..d {
        let mut e_s = Array1::<Complex64>::zeros(d);
        e_s[s] = Complex64::new(1.0, 0.0);
        let zero: crate::ivp::ForcingFn = Arc::new(move |_| Array1::zeros(d));
        let p = sys.solve(&zero, &e_s)?;
        let ivp = LinearIvp {
            dim: d,
            coeff: coeff.clone(),
            forcing: zero,
            initial: e_s,
        };
        let cert = apost_certificate(&ivp, &p, c_current)?;
        xi_sq += cert.err_sup * cert.err_sup;
        flagged |= cert.flagged;
        columns.push(p);
    }
    Ok(FundSide {
        columns,
        xi: xi_sq.sqrt(),
        flagged,
    })
}

/// Evaluate the matrix polynomial whose s-th column is `columns[s]` at t.
pub(crate) fn eval_matrix(columns: &[ChebPoly<f64>], t: f64) -> Array2<Complex64> {
    let d = columns.len();
    let mut m = Array2::zeros((d, d));
    for (s, col) in columns.iter().enumerate() {
        let v = col.eval(t);
        for r in 0..d {
            m[(r, s)] = v[r];
        }
    }
    m
}

pub(crate) fn spectral_norm(m: Array2<Complex64>) -> f64 {
    match m.svd_into(false, false) {
        Ok((_, sv, _)) => sv[0],
        Err(_) => f64::NAN,
    }
}

/// max_t |M(t)| in the induced 2-norm, by dense sampling with local
/// refinement around the discrete maximizer.
pub(crate) fn matrix_sup_norm_2(columns: &[ChebPoly<f64>]) -> f64 {
    const COARSE: usize = 2001;
    let at = |i: usize| -1.0 + 2.0 * i as f64 / (COARSE - 1) as f64;
    let mut best = 0.0f64;
    let mut best_i = 0usize;
    for i in 0..COARSE {
        let v = spectral_norm(eval_matrix(columns, at(i)));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = at(best_i.saturating_sub(1));
    let mut hi = at((best_i + 1).min(COARSE - 1));
    for _ in 0..12 {
        let mut local_best = best;
        let mut local_j = 4usize;
        for j in 0..9 {
            let t = lo + (hi - lo) * j as f64 / 8.0;
            let v = spectral_norm(eval_matrix(columns, t));
            if v > local_best {
                local_best = v;
                local_j = j;
            }
        }
        best = local_best;
        let step = (hi - lo) / 8.0;
        let center = lo + step * local_j as f64;
        lo = (center - step).max(-1.0);
        hi = (center + step).min(1.0);
    }
    best
}

/// Iterated a posteriori tightening of C_A: with the current bound, certify
/// collocation approximations of Phi_A and of the adjoint fundamental
/// solution Psi_A (z' = -A^T z), then
///
///   C' = (xi + ||Phi_N||_inf)(omega + ||Psi_N||_inf).
///
/// Stops when the relative change drops below `rel_tol` or after `max_iters`
/// passes; returns the smallest bound achieved, with the full history.
/// Errors with `Diverged` if an iteration exceeds 10x the previous bound.
pub fn bootstrap_bound(
    coeff: &CoeffFn,
    d: usize,
    n: usize,
    max_iters: usize,
    rel_tol: f64,
) -> Result<FundamentalBound> {
    let apriori = apriori_bound(coeff);
    let mut history = apriori.history.clone();
    let mut current = apriori.value;

    let coeff_for_adj = coeff.clone();
    let adjoint: CoeffFn = Arc::new(move |t| {
        let a = coeff_for_adj(t);
        let d = a.nrows();
        Array2::from_shape_fn((d, d), |(r, c)| -a[(c, r)])
    });

    let sys_fwd = CollocationSystem::new(coeff, d, n)?;
    let sys_adj = CollocationSystem::new(&adjoint, d, n)?;

    let mut iterations = 0;
    for _ in 0..max_iters {
        let fwd = solve_side(coeff, d, &sys_fwd, current)?;
        let adj = solve_side(&adjoint, d, &sys_adj, current)?;
        let phi_sup = matrix_sup_norm_2(&fwd.columns);
        let psi_sup = matrix_sup_norm_2(&adj.columns);
        let next = (fwd.xi + phi_sup) * (adj.xi + psi_sup);
        iterations += 1;
        history.push(next);
        if !next.is_finite() || next > 10.0 * current {
            return Err(Error::Diverged { history });
        }
        let rel = (next - current).abs() / next.max(f64::MIN_POSITIVE);
        current = next;
        if rel < rel_tol || fwd.flagged || adj.flagged {
            break;
        }
    }

    let value = history.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FundamentalBound {
        value,
        provenance: BoundProvenance::Bootstrap { iterations },
        history,
    })
}

/// Bootstrap with the module defaults (rel_tol 1e-3, at most 8 iterations).
pub fn bootstrap_bound_default(coeff: &CoeffFn, d: usize, n: usize) -> Result<FundamentalBound> {
    bootstrap_bound(coeff, d, n, 8, 1e-3)
}
