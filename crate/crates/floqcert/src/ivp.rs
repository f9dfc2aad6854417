//! The collocation algorithm for linear ODE initial value problems on
//! [-1,1], with a posteriori sup-norm certificates for the solution and its
//! derivative.

use crate::cheb::{adaptive_sup_norm, adaptive_sup_norm_vec, diff_matrix, ChebGrid, ChebPoly};
use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use ndarray_linalg::error::LinalgError;
use ndarray_linalg::{Norm, Solve};
use num_complex::Complex64;
use std::sync::Arc;

/// Coefficient callable t -> d x d complex matrix, safe for concurrent calls.
pub type CoeffFn = Arc<dyn Fn(f64) -> Array2<Complex64> + Send + Sync>;
/// Forcing callable t -> complex d-vector.
pub type ForcingFn = Arc<dyn Fn(f64) -> Array1<Complex64> + Send + Sync>;

/// Wrap a scalar coefficient a(t) as a 1x1 matrix callable.
pub fn scalar_coeff(a: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> CoeffFn {
    Arc::new(move |t| Array2::from_elem((1, 1), a(t)))
}

/// Wrap a scalar forcing u(t).
pub fn scalar_forcing(u: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> ForcingFn {
    Arc::new(move |t| Array1::from_elem(1, u(t)))
}

/// Linear initial value problem y' = A(t) y + u(t), y(-1) = y0.
#[derive(Clone)]
pub struct LinearIvp {
    pub dim: usize,
    pub coeff: CoeffFn,
    pub forcing: ForcingFn,
    pub initial: Array1<Complex64>,
}

impl LinearIvp {
    pub fn scalar(
        a: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        u: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        y0: Complex64,
    ) -> Self {
        LinearIvp {
            dim: 1,
            coeff: scalar_coeff(a),
            forcing: scalar_forcing(u),
            initial: Array1::from_elem(1, y0),
        }
    }
}

/// The collocation operator (D-hat - M-hat_A) at degree N, factorized once so
/// many right-hand sides (columns of a fundamental solution, the nu-table
/// problems) reuse it.
pub struct CollocationSystem {
    n: usize,
    d: usize,
    grid: ChebGrid<f64>,
    diff: Array2<f64>,
    matrix: Array2<Complex64>,
    lu: ndarray_linalg::LUFactorized<ndarray::OwnedRepr<Complex64>>,
}

/// Build D-hat (rows 0..N-1 of D_N, last block-row the identity on the final
/// node), the block-diagonal M-hat_A, and the stacked right-hand side.
pub fn build_system_matrices(
    ivp: &LinearIvp,
    n: usize,
) -> Result<(Array2<Complex64>, Array2<Complex64>, Array1<Complex64>)> {
    let grid = ChebGrid::<f64>::new(n)?;
    let diff = diff_matrix::<f64>(n)?;
    let d = ivp.dim;
    let hat_d = hat_d_matrix(&diff, n, d);
    let hat_m = hat_m_matrix(&ivp.coeff, &grid, d);
    let hat_u = hat_u_vector(&ivp.forcing, &ivp.initial, &grid, d);
    Ok((hat_d, hat_m, hat_u))
}

fn hat_d_matrix(diff: &Array2<f64>, n: usize, d: usize) -> Array2<Complex64> {
    let l = d * (n + 1);
    let mut out = Array2::zeros((l, l));
    for i in 0..n {
        for j in 0..=n {
            let v = Complex64::new(diff[(i, j)], 0.0);
            for s in 0..d {
                out[(i * d + s, j * d + s)] = v;
            }
        }
    }
    for s in 0..d {
        out[(n * d + s, n * d + s)] = Complex64::new(1.0, 0.0);
    }
    out
}

fn hat_m_matrix(coeff: &CoeffFn, grid: &ChebGrid<f64>, d: usize) -> Array2<Complex64> {
    let n = grid.degree();
    let l = d * (n + 1);
    let mut out = Array2::zeros((l, l));
    for j in 0..n {
        let a = coeff(grid.point(j));
        for r in 0..d {
            for c in 0..d {
                out[(j * d + r, j * d + c)] = a[(r, c)];
            }
        }
    }
    out
}

fn hat_u_vector(
    forcing: &ForcingFn,
    initial: &Array1<Complex64>,
    grid: &ChebGrid<f64>,
    d: usize,
) -> Array1<Complex64> {
    let n = grid.degree();
    let mut out = Array1::zeros(d * (n + 1));
    for j in 0..n {
        let u = forcing(grid.point(j));
        for s in 0..d {
            out[j * d + s] = u[s];
        }
    }
    for s in 0..d {
        out[n * d + s] = initial[s];
    }
    out
}

impl CollocationSystem {
    /// Factorize (D-hat - M-hat_A) for the coefficient `coeff` at degree N.
    pub fn new(coeff: &CoeffFn, d: usize, n: usize) -> Result<Self> {
        let grid = ChebGrid::<f64>::new(n)?;
        let diff = diff_matrix::<f64>(n)?;
        let hat_d = hat_d_matrix(&diff, n, d);
        let hat_m = hat_m_matrix(coeff, &grid, d);
        let matrix = hat_d - hat_m;
        use ndarray_linalg::Factorize;
        let lu = matrix.factorize().map_err(singular_or)?;
        // Cheap condition estimate; reject systems past the precision budget.
        let rcond = ndarray_linalg::ReciprocalConditionNum::rcond(&lu)?;
        if !(rcond > f64::EPSILON) {
            return Err(Error::SingularSystem { rcond });
        }
        Ok(CollocationSystem {
            n,
            d,
            grid,
            diff,
            matrix,
            lu,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn grid(&self) -> &ChebGrid<f64> {
        &self.grid
    }

    pub fn diff(&self) -> &Array2<f64> {
        &self.diff
    }

    /// Solve for a stacked right-hand side with one step of iterative
    /// refinement, returning the stacked node values.
    pub fn solve_stacked(&self, hat_u: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        let mut v = self.lu.solve(hat_u)?;
        let residual = hat_u - &self.matrix.dot(&v);
        let dv = self.lu.solve(&residual)?;
        v += &dv;
        Ok(v)
    }

    /// Solve the IVP with the given forcing and initial value.
    pub fn solve(
        &self,
        forcing: &ForcingFn,
        initial: &Array1<Complex64>,
    ) -> Result<ChebPoly<f64>> {
        let hat_u = hat_u_vector(forcing, initial, &self.grid, self.d);
        let v = self.solve_stacked(&hat_u)?;
        Ok(unstack(&self.grid, self.d, &v))
    }

    /// Node values of the interpolant's derivative, (D_N (x) I_d) v.
    pub fn derivative_values(&self, p: &ChebPoly<f64>) -> Array2<Complex64> {
        let m = self.n + 1;
        let mut out = Array2::zeros((m, self.d));
        for i in 0..m {
            for j in 0..m {
                let w = Complex64::new(self.diff[(i, j)], 0.0);
                for s in 0..self.d {
                    out[(i, s)] += w * p.values()[(j, s)];
                }
            }
        }
        out
    }
}

fn singular_or(e: LinalgError) -> Error {
    match e {
        LinalgError::Lapack(_) => Error::SingularSystem { rcond: 0.0 },
        other => Error::Linalg(other.to_string()),
    }
}

pub(crate) fn unstack(grid: &ChebGrid<f64>, d: usize, v: &Array1<Complex64>) -> ChebPoly<f64> {
    let m = grid.len();
    let values = Array2::from_shape_fn((m, d), |(j, s)| v[j * d + s]);
    ChebPoly::from_values(grid.clone(), values).expect("stacked length matches grid")
}

/// Collocation solution of the IVP at degree N.
pub fn solve_ivp(ivp: &LinearIvp, n: usize) -> Result<ChebPoly<f64>> {
    let sys = CollocationSystem::new(&ivp.coeff, ivp.dim, n)?;
    sys.solve(&ivp.forcing, &ivp.initial)
}

/// A collocation solution together with its a posteriori error certificate.
#[derive(Debug, Clone)]
pub struct CertifiedSolution {
    pub poly: ChebPoly<f64>,
    /// Initial residual R_p = p'(-1) - A(-1) y0 - u(-1).
    pub residual: Array1<Complex64>,
    /// Certified bound on ||y - p||_inf.
    pub err_sup: f64,
    /// Certified bound on ||y' - p'||_inf.
    pub deriv_err_sup: f64,
    /// The fundamental-solution bound the certificate was computed with.
    pub c_a_used: f64,
    /// Set when some adaptive norm estimate hit its degree cap; the bounds
    /// are still valid but may be loose.
    pub flagged: bool,
}

/// A posteriori certificate for the collocation polynomial `p`:
///
///   ||y - p||_inf  <= 2 C_A ( ||Ap - I_N(Ap)||_inf + ||u - I_N u||_inf + |R_p| )
///   ||y' - p'||_inf <= (2 ||A||_inf C_A + 1) ( same bracket )
///
/// `c_a` must bound |Phi_A(t) Phi_A(s)^{-1}| for -1 <= s <= t <= 1.
pub fn apost_certificate(ivp: &LinearIvp, p: &ChebPoly<f64>, c_a: f64) -> Result<CertifiedSolution> {
    let n = p.degree();
    let d = ivp.dim;
    let sys_diff = diff_matrix::<f64>(n)?;
    let grid = p.grid().clone();

    // p'(-1) from the differentiation matrix (last node row).
    let mut pdot_last = Array1::<Complex64>::zeros(d);
    for j in 0..=n {
        let w = Complex64::new(sys_diff[(n, j)], 0.0);
        for s in 0..d {
            pdot_last[s] += w * p.values()[(j, s)];
        }
    }
    let a_end = (ivp.coeff)(-1.0);
    let u_end = (ivp.forcing)(-1.0);
    let residual = &pdot_last - &a_end.dot(&ivp.initial) - &u_end;
    let r_norm = residual.norm_l2();

    // Node values of A p and u define the interpolants the bracket compares
    // against.
    let ap_nodes = ChebPoly::interpolate(grid.clone(), d, |t| {
        // Exact at nodes: A(t_j) p(t_j).
        (ivp.coeff)(t).dot(&p.eval(t))
    });
    let u_nodes = ChebPoly::interpolate(grid.clone(), d, |t| (ivp.forcing)(t));

    let ap_bound = adaptive_sup_norm_vec(d, |t, s| {
        let row = (ivp.coeff)(t).dot(&p.eval(t));
        row[s] - ap_nodes.eval_component(s, t)
    });
    let u_bound = adaptive_sup_norm_vec(d, |t, s| {
        (ivp.forcing)(t)[s] - u_nodes.eval_component(s, t)
    });

    let bracket = ap_bound.value + u_bound.value + r_norm;

    // ||A||_inf bounded through the Frobenius norm, which dominates the
    // induced 2-norm.
    let a_sup = adaptive_sup_norm(|t: f64| {
        let a = (ivp.coeff)(t);
        Complex64::new(frobenius(&a), 0.0)
    });

    Ok(CertifiedSolution {
        poly: p.clone(),
        residual,
        err_sup: 2.0 * c_a * bracket,
        deriv_err_sup: (2.0 * a_sup.value * c_a + 1.0) * bracket,
        c_a_used: c_a,
        flagged: !(ap_bound.resolved && u_bound.resolved && a_sup.resolved),
    })
}

pub(crate) fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Constant-coefficient scalar certificate. For Re a0 > 0:
///
///   ||y - p||_inf <= 2 e^{2 Re a0} ||u - I_N u||_inf + c |R_p|,
///   c = (pi (|a0|+1) + 4) e^{2 Re a0} / (2 N^2);
///
/// otherwise the multiplier is min(c-tilde, pi/(2N)) with the reflected
/// exponent and the leading factor drops to 2.
pub fn constant_coeff_certificate(
    a0: Complex64,
    forcing: &ForcingFn,
    y0: Complex64,
    p: &ChebPoly<f64>,
) -> Result<f64> {
    let n = p.degree();
    let diff = diff_matrix::<f64>(n)?;
    let mut pdot_last = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        pdot_last += Complex64::new(diff[(n, j)], 0.0) * p.values()[(j, 0)];
    }
    let r_p = (pdot_last - a0 * y0 - forcing(-1.0)[0]).norm();

    let u_nodes = ChebPoly::interpolate_scalar(p.grid().clone(), |t| forcing(t)[0]);
    let u_bound = adaptive_sup_norm(|t: f64| forcing(t)[0] - u_nodes.eval_component(0, t));

    let nf = n as f64;
    let base = (std::f64::consts::PI * (a0.norm() + 1.0) + 4.0) / (2.0 * nf * nf);
    let bound = if a0.re > 0.0 {
        let growth = (2.0 * a0.re).exp();
        2.0 * growth * u_bound.value + base * growth * r_p
    } else {
        let c_tilde = base * (-2.0 * a0.re).exp();
        2.0 * u_bound.value + c_tilde.min(std::f64::consts::PI / (2.0 * nf)) * r_p
    };
    Ok(bound)
}

/// C_a = exp(int_{-1}^1 max(Re a, 0) dt) by panel-doubled Clenshaw-Curtis
/// quadrature; the achieved level difference is added to the integral as a
/// safety margin before exponentiating.
pub fn scalar_growth_constant(a: impl Fn(f64) -> Complex64) -> Result<f64> {
    let integrand = |t: f64| a(t).re.max(0.0);
    let mut panels = 1usize;
    let mut prev = composite_clenshaw_curtis(&integrand, panels);
    loop {
        panels *= 2;
        let cur = composite_clenshaw_curtis(&integrand, panels);
        let diff = (cur - prev).abs();
        if diff <= 1e-10 * cur.abs().max(1.0) {
            return Ok((cur + diff).exp());
        }
        if panels * (CC_PANEL_ORDER + 1) >= 1 << 15 {
            return Err(Error::NonConverged {
                evals: panels * (CC_PANEL_ORDER + 1),
            });
        }
        prev = cur;
    }
}

const CC_PANEL_ORDER: usize = 16;

/// Composite Clenshaw-Curtis over `panels` equal subintervals of [-1,1].
fn composite_clenshaw_curtis(f: &impl Fn(f64) -> f64, panels: usize) -> f64 {
    let w = cc_weights(CC_PANEL_ORDER);
    let width = 2.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = -1.0 + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (j, &wj) in w.iter().enumerate() {
            let x = (std::f64::consts::PI * j as f64 / CC_PANEL_ORDER as f64).cos();
            acc += wj * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Clenshaw-Curtis weights on the N+1 extreme points for integrating over
/// [-1,1].
fn cc_weights(n: usize) -> Vec<f64> {
    // w_j = (c_j/N) (1 - sum_{k even} 2 cos(k theta_j) / (k^2 - 1)), written
    // directly from the cosine expansion; adequate for the small fixed order
    // used per panel.
    let mut w = vec![0.0; n + 1];
    for j in 0..=n {
        let theta = std::f64::consts::PI * j as f64 / n as f64;
        let mut sum = 1.0;
        let half = n / 2;
        for k in 1..=half {
            let bk = if 2 * k == n { 0.5 } else { 1.0 };
            sum -= bk * 2.0 * (2.0 * k as f64 * theta).cos() / ((4 * k * k - 1) as f64);
        }
        let cj = if j == 0 || j == n { 1.0 } else { 2.0 };
        w[j] = cj * sum / n as f64;
    }
    w
}
