//! The monodromy matrix U_N for linear periodic DDE systems with delay equal
//! to the period (normalized to 2), its spectrum, and method-of-steps
//! stepping.

use crate::cheb::{adaptive_sup_norm, ChebGrid, ChebPoly};
use crate::error::{Error, Result};
use crate::hilbert::POINTWISE_CONSTANT;
use crate::ivp::{frobenius, unstack, CoeffFn, CollocationSystem};
use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

/// y'(t) = A(t) y(t) + B(t) y(t-2) with A, B continuous and 2-periodic.
#[derive(Clone)]
pub struct DdeSystem {
    pub dim: usize,
    pub coeff_a: CoeffFn,
    pub coeff_b: CoeffFn,
}

impl DdeSystem {
    pub fn scalar(
        a: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        b: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        DdeSystem {
            dim: 1,
            coeff_a: Arc::new(move |t| Array2::from_elem((1, 1), a(t))),
            coeff_b: Arc::new(move |t| Array2::from_elem((1, 1), b(t))),
        }
    }
}

/// Eigendecomposition of U_N, eigenvalues sorted by descending magnitude
/// (ties by descending real then imaginary part).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Eigenvector matrix, columns ordered like `values`.
    pub vectors: Array2<Complex64>,
}

/// The l x l collocation monodromy matrix, l = d(N+1).
pub struct MonodromyMatrix {
    n: usize,
    d: usize,
    matrix: Array2<Complex64>,
    grid: ChebGrid<f64>,
    eigen: OnceLock<Result<Eigen>>,
}

/// U_N = (D-hat - M-hat_A)^{-1} M-hat_B, where M-hat_B carries the delayed
/// term at the interior rows and the wrap f(1) -> new initial value in its
/// last block-row.
pub fn build_monodromy(sys: &DdeSystem, n: usize) -> Result<MonodromyMatrix> {
    let d = sys.dim;
    let l = d * (n + 1);
    let colloc = CollocationSystem::new(&sys.coeff_a, d, n)?;
    let grid = colloc.grid().clone();

    let mut m_b = Array2::<Complex64>::zeros((l, l));
    for j in 0..n {
        let b = (sys.coeff_b)(grid.point(j));
        for r in 0..d {
            for c in 0..d {
                m_b[(j * d + r, j * d + c)] = b[(r, c)];
            }
        }
    }
    // History wrap: the next initial value is f(t_0) = f(1).
    for s in 0..d {
        m_b[(n * d + s, s)] = Complex64::new(1.0, 0.0);
    }

    let mut u = Array2::<Complex64>::zeros((l, l));
    for c in 0..l {
        let col = m_b.column(c).to_owned();
        let sol = colloc.solve_stacked(&col)?;
        for r in 0..l {
            u[(r, c)] = sol[r];
        }
    }

    Ok(MonodromyMatrix {
        n,
        d,
        matrix: u,
        grid,
        eigen: OnceLock::new(),
    })
}

impl MonodromyMatrix {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn size(&self) -> usize {
        self.d * (self.n + 1)
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn grid(&self) -> &ChebGrid<f64> {
        &self.grid
    }

    /// The cached eigendecomposition; computed on first use.
    pub fn eigen(&self) -> Result<&Eigen> {
        self.eigen
            .get_or_init(|| {
                let (vals, vecs) = self
                    .matrix
                    .eig()
                    .map_err(|e| Error::EigFailure(e.to_string()))?;
                let mut order: Vec<usize> = (0..vals.len()).collect();
                order.sort_by(|&i, &j| {
                    vals[j]
                        .norm()
                        .total_cmp(&vals[i].norm())
                        .then(vals[j].re.total_cmp(&vals[i].re))
                        .then(vals[j].im.total_cmp(&vals[i].im))
                });
                let values: Vec<Complex64> = order.iter().map(|&i| vals[i]).collect();
                let l = values.len();
                let vectors = Array2::from_shape_fn((l, l), |(r, c)| vecs[(r, order[c])]);
                Ok(Eigen { values, vectors })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Spectral radius |lambda_1|.
    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.eigen()?.values[0].norm())
    }

    /// Apply U_N to stacked node values.
    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.matrix.dot(v)
    }

    /// Apply U_N to a history polynomial, returning the next segment.
    pub fn step(&self, f: &ChebPoly<f64>) -> ChebPoly<f64> {
        let v = stack(f);
        unstack(&self.grid, self.d, &self.apply(&v))
    }
}

pub(crate) fn stack(p: &ChebPoly<f64>) -> Array1<Complex64> {
    let (m, d) = (p.values().nrows(), p.values().ncols());
    Array1::from_shape_fn(m * d, |i| p.values()[(i / d, i % d)])
}

/// Method-of-steps: apply U_N k times to the history segment f, returning the
/// k successive solution segments.
pub fn step_history(m: &MonodromyMatrix, f: &ChebPoly<f64>, k: usize) -> Vec<ChebPoly<f64>> {
    let mut out = Vec::with_capacity(k);
    let mut v = stack(f);
    for _ in 0..k {
        v = m.apply(&v);
        out.push(unstack(&m.grid, m.d, &v));
    }
    out
}

/// Operator-norm bound for the monodromy operator on H^1.
///
/// Scalar systems use c_0 + c_1 C_a + c_2 C_a^2 with c_0 = ||b||, c_1 =
/// 2.3 (1 + ||a||) + pi ||b||, c_2 = pi sqrt(2) ||a|| ||b||; d >= 2 uses
/// sqrt(2 pi d) (c a C_A + ||B|| (c^2 + pi a^2 C_A^2 / 2)^{1/2}) with
/// a^2 = 1 + ||A||^2 and c = 0.9062. Sup norms are adaptive Frobenius
/// bounds.
pub fn uhat_norm_bound(sys: &DdeSystem, c_a: f64) -> f64 {
    let a_sup = adaptive_sup_norm(|t: f64| Complex64::new(frobenius(&(sys.coeff_a)(t)), 0.0)).value;
    let b_sup = adaptive_sup_norm(|t: f64| Complex64::new(frobenius(&(sys.coeff_b)(t)), 0.0)).value;
    let pi = std::f64::consts::PI;
    if sys.dim == 1 {
        let c0 = b_sup;
        let c1 = 2.3 * (1.0 + a_sup) + pi * b_sup;
        let c2 = pi * 2f64.sqrt() * a_sup * b_sup;
        c0 + c1 * c_a + c2 * c_a * c_a
    } else {
        let d = sys.dim as f64;
        let a_sq = 1.0 + a_sup * a_sup;
        let c = POINTWISE_CONSTANT;
        (2.0 * pi * d).sqrt()
            * (c * a_sq.sqrt() * c_a + b_sup * (c * c + pi * a_sq * c_a * c_a / 2.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivp::{solve_ivp, LinearIvp};
    use ndarray_linalg::SVDInto;

    fn intro_dde() -> DdeSystem {
        DdeSystem::scalar(
            |_| Complex64::new(-1.1, 0.0),
            |t| Complex64::new(1.0 + (3.0 * std::f64::consts::PI * t).sin(), 0.0),
        )
    }

    fn trivial_dde(d: usize) -> DdeSystem {
        DdeSystem {
            dim: d,
            coeff_a: Arc::new(move |_| Array2::zeros((d, d))),
            coeff_b: Arc::new(move |_| Array2::zeros((d, d))),
        }
    }

    #[test]
    fn trivial_system_maps_to_constants() {
        let m = build_monodromy(&trivial_dde(1), 8).unwrap();
        // U f solves y' = 0, y(-1) = f(1): every output node carries f(t_0).
        let grid = m.grid().clone();
        let f = ChebPoly::interpolate_scalar(grid, |t| Complex64::new(t, 0.0));
        let stepped = m.step(&f);
        for j in 0..=8 {
            assert!((stepped.values()[(j, 0)] - 1.0).norm() < 1e-12);
        }
        assert!((m.spectral_radius().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn step_history_on_trivial_system() {
        let m = build_monodromy(&trivial_dde(1), 8).unwrap();
        let f = ChebPoly::interpolate_scalar(m.grid().clone(), |t| Complex64::new(t, 0.0));
        assert!(step_history(&m, &f, 0).is_empty());
        let steps = step_history(&m, &f, 3);
        for step in &steps {
            for j in 0..=8 {
                assert!((step.values()[(j, 0)] - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn intro_dde_spectral_radius() {
        for n in [32usize, 64] {
            let m = build_monodromy(&intro_dde(), n).unwrap();
            let rho = m.spectral_radius().unwrap();
            assert!((rho - 0.9369).abs() < 5e-4, "n={n}: rho {rho}");
        }
    }

    #[test]
    fn stable_dde_steps_decay_geometrically() {
        let m = build_monodromy(&intro_dde(), 48).unwrap();
        let f = ChebPoly::interpolate_scalar(m.grid().clone(), |t| {
            Complex64::new(1.0 - 0.3 * t, 0.0)
        });
        let steps = step_history(&m, &f, 40);
        let sup = |p: &ChebPoly<f64>| {
            (0..1000)
                .map(|i| {
                    let t = -1.0 + 2.0 * i as f64 / 999.0;
                    p.eval_component(0, t).norm()
                })
                .fold(0.0f64, f64::max)
        };
        let early = sup(&steps[9]);
        let late = sup(&steps[39]);
        let expect_ratio = 0.9369f64.powi(30);
        let ratio = late / early;
        assert!(
            (ratio / expect_ratio - 1.0).abs() < 0.2,
            "decay ratio {ratio} vs {expect_ratio}"
        );
    }

    #[test]
    fn delayed_term_rank_collapse() {
        // With B = 0 the only coupling is the history wrap, so U_N (and its
        // powers) has rank <= d.
        for (d, n) in [(1usize, 16usize), (2, 16)] {
            let sys = DdeSystem {
                dim: d,
                coeff_a: Arc::new(move |t| {
                    Array2::from_shape_fn((d, d), |(r, c)| {
                        if r == c {
                            Complex64::new(0.1 * t, 0.0)
                        } else {
                            Complex64::new(0.02, 0.0)
                        }
                    })
                }),
                coeff_b: Arc::new(move |_| Array2::zeros((d, d))),
            };
            let m = build_monodromy(&sys, n).unwrap();
            let u2 = m.matrix().dot(m.matrix());
            let (_, sv, _) = u2.svd_into(false, false).unwrap();
            let tol = sv[0] * 1e-10;
            let rank = sv.iter().filter(|&&s| s > tol).count();
            assert!(rank <= d, "d={d}: numerical rank {rank}");
        }
    }

    #[test]
    fn constant_coefficient_eigenvalue_oracle() {
        // Largest eigenvalue of U_N vs the root of lambda = e^{2a + 2b/lambda}.
        for (a0, b0) in [(-1.0, 0.5), (0.2, -1.0)] {
            let sys = DdeSystem::scalar(
                move |_| Complex64::new(a0, 0.0),
                move |_| Complex64::new(b0, 0.0),
            );
            let m = build_monodromy(&sys, 64).unwrap();
            let lam = m.eigen().unwrap().values[0];
            // Damped fixed-point iteration on the oracle equation.
            let mut root = lam;
            for _ in 0..500 {
                let next =
                    (Complex64::new(2.0 * a0, 0.0) + Complex64::new(2.0 * b0, 0.0) / root).exp();
                root = 0.5 * root + 0.5 * next;
            }
            assert!(
                (lam - root).norm() < 1e-8,
                "({a0},{b0}): {lam} vs oracle {root}"
            );
        }
    }

    #[test]
    fn monodromy_composes_with_ivp_solver() {
        // Applying U_N to E_N f equals solving the IVP with forcing B(t) f(t)
        // and initial value f(1).
        let sys = intro_dde();
        let n = 24;
        let m = build_monodromy(&sys, n).unwrap();
        let f = ChebPoly::interpolate_scalar(m.grid().clone(), |t| {
            Complex64::new((1.3 * t).cos(), 0.2 * t)
        });
        let stepped = m.step(&f);

        let b = sys.coeff_b.clone();
        let f_for_forcing = f.clone();
        let ivp = LinearIvp {
            dim: 1,
            coeff: sys.coeff_a.clone(),
            forcing: Arc::new(move |t| {
                let val = f_for_forcing.eval_component(0, t);
                Array1::from_elem(1, b(t)[(0, 0)] * val)
            }),
            initial: Array1::from_elem(1, f.eval_component(0, 1.0)),
        };
        let direct = solve_ivp(&ivp, n).unwrap();
        for j in 0..=n {
            let diff = (stepped.values()[(j, 0)] - direct.values()[(j, 0)]).norm();
            assert!(diff < 1e-10, "node {j}: {diff}");
        }
    }

    #[test]
    fn uhat_norm_scalar_base_case() {
        // a = b = 0 scalar: bound reduces to c_1 C_a = 2.3.
        let sys = trivial_dde(1);
        let bound = uhat_norm_bound(&sys, 1.0);
        assert!((bound - 2.3).abs() < 1e-12, "{bound}");
    }

    #[test]
    fn uhat_norm_dominates_spectral_radius() {
        let sys = intro_dde();
        let bound = uhat_norm_bound(&sys, 1.0);
        let m = build_monodromy(&sys, 48).unwrap();
        assert!(bound >= m.spectral_radius().unwrap());
    }
}
