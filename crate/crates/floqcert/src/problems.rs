//! Named problem constructors: the DDE systems the certification pipeline is
//! exercised on, their closed-form ellipse bounds, and the IVP test problems.
//!
//! Keeping coefficient functions in a registry (rather than behind an
//! expression parser) keeps the certification path auditable; custom
//! coefficients enter through [`crate::ivp::LinearIvp`] / state
//! [`crate::monodromy::DdeSystem`] directly.

use crate::cert::{DataProvenance, EllipseData, RegularityEllipse};
use crate::ivp::{CoeffFn, LinearIvp};
use crate::monodromy::DdeSystem;
use ndarray::{array, Array1};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// y' = a y + (b + sin(3 pi t)) y(t-2).
pub fn intro_dde(a: f64, b: f64) -> DdeSystem {
    DdeSystem::scalar(
        move |_| Complex64::new(a, 0.0),
        move |t| Complex64::new(b + (3.0 * PI * t).sin(), 0.0),
    )
}

/// Closed-form ellipse data for [`intro_dde`]:
/// A_E = |a| (1 + S); B_E <= |b| (1 + S) + (cosh(3 pi s) + 1) / (3 pi).
pub fn intro_dde_data(a: f64, b: f64, ell: &RegularityEllipse) -> EllipseData {
    EllipseData::Scalar {
        a_e: a.abs() * (1.0 + ell.cap_s),
        b_e: b.abs() * (1.0 + ell.cap_s) + ((3.0 * PI * ell.s).cosh() + 1.0) / (3.0 * PI),
        provenance: DataProvenance::UserSupplied,
    }
}

/// The delayed, damped Mathieu system
/// x'' + c x' + (1 + cos(pi t)) x = b x(t-2) in first-order form.
pub fn delayed_mathieu(b: f64, c: f64) -> DdeSystem {
    DdeSystem {
        dim: 2,
        coeff_a: Arc::new(move |t| {
            array![
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                [
                    Complex64::new(-1.0 - (PI * t).cos(), 0.0),
                    Complex64::new(-c, 0.0)
                ]
            ]
        }),
        coeff_b: Arc::new(move |_| {
            array![
                [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(b, 0.0), Complex64::new(0.0, 0.0)]
            ]
        }),
    }
}

/// Closed-form C_lambda for [`delayed_mathieu`]:
/// exp((1 + S) sqrt(1 + c^2 + (2 + |b|/delta)^2)).
pub fn delayed_mathieu_data(b: f64, c: f64, ell: &RegularityEllipse, delta: f64) -> EllipseData {
    let alpha = (1.0 + c * c + (2.0 + b.abs() / delta).powi(2)).sqrt();
    EllipseData::System {
        c_lambda: ((1.0 + ell.cap_s) * alpha).exp(),
        provenance: DataProvenance::UserSupplied,
    }
}

/// y' = a0 y + b0 y(t-2) with constant coefficients; its nonzero multipliers
/// solve lambda = exp(2 a0 + 2 b0 / lambda) exactly.
pub fn scalar_constant(a0: f64, b0: f64) -> DdeSystem {
    DdeSystem::scalar(
        move |_| Complex64::new(a0, 0.0),
        move |_| Complex64::new(b0, 0.0),
    )
}

/// Closed-form ellipse data for [`scalar_constant`]: the segment integrals
/// are |a0| |z+1| and |b0| |z+1|, maximized at z = S.
pub fn scalar_constant_data(a0: f64, b0: f64, ell: &RegularityEllipse) -> EllipseData {
    EllipseData::Scalar {
        a_e: a0.abs() * (1.0 + ell.cap_s),
        b_e: b0.abs() * (1.0 + ell.cap_s),
        provenance: DataProvenance::UserSupplied,
    }
}

/// Homogeneous part of the stiff damped Mathieu equation
/// x'' + x' + (10 + 9 cos(pi t)) x = 0, used for fundamental-solution bounds.
pub fn stiff_mathieu_coeff() -> CoeffFn {
    Arc::new(|t| {
        array![
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [
                Complex64::new(-10.0 - 9.0 * (PI * t).cos(), 0.0),
                Complex64::new(-1.0, 0.0)
            ]
        ]
    })
}

/// y' = a y + t, y(-1) = y0; exact solution
/// e^{a(t+1)} (y0 + (a+1)/a^2) - (a t + 1)/a^2 for a != 0 (the registry
/// default a = 3, y0 = 0.2 matches the reference problem).
pub fn linear_forced(a: f64, y0: f64) -> LinearIvp {
    LinearIvp::scalar(
        move |_| Complex64::new(a, 0.0),
        |t| Complex64::new(t, 0.0),
        Complex64::new(y0, 0.0),
    )
}

/// y' = a y, y(-1) = 1.
pub fn pure_exponential(a: f64) -> LinearIvp {
    LinearIvp::scalar(
        move |_| Complex64::new(a, 0.0),
        |_| Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

/// y' = (a_re + i a_im) y + sin(20 t), y(-1) = y0.
pub fn oscillatory_forced(a: Complex64, y0: f64) -> LinearIvp {
    LinearIvp::scalar(
        move |_| a,
        |t| Complex64::new((20.0 * t).sin(), 0.0),
        Complex64::new(y0, 0.0),
    )
}

/// y' = 2t y + t sin(3 t^2), y(-1) = 1; C_a = e is a valid growth bound.
pub fn variable_coeff() -> LinearIvp {
    LinearIvp::scalar(
        |t| Complex64::new(2.0 * t, 0.0),
        |t| Complex64::new(t * (3.0 * t * t).sin(), 0.0),
        Complex64::new(1.0, 0.0),
    )
}

/// The plane rotation y' = [[0,1],[-1,0]] y, y(-1) = (1, 0), with solution
/// (cos(t+1), -sin(t+1)).
pub fn rotation() -> LinearIvp {
    LinearIvp {
        dim: 2,
        coeff: Arc::new(|_| {
            array![
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]
            ]
        }),
        forcing: Arc::new(|_| Array1::zeros(2)),
        initial: array![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    }
}

/// y' = 0, y(-1) = 0.
pub fn zero_ivp() -> LinearIvp {
    LinearIvp::scalar(
        |_| Complex64::new(0.0, 0.0),
        |_| Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Rescale a DDE with period T to the normalized interval: the solution
/// segments are sampled on the same coefficient shapes, with rates scaled by
/// T/2. Multipliers are invariant under this rescaling.
pub fn rescale_dde(sys: &DdeSystem, period: f64) -> DdeSystem {
    let scale = Complex64::new(period / 2.0, 0.0);
    let a = sys.coeff_a.clone();
    let b = sys.coeff_b.clone();
    DdeSystem {
        dim: sys.dim,
        coeff_a: Arc::new(move |t| a(t).mapv(|x| x * scale)),
        coeff_b: Arc::new(move |t| b(t).mapv(|x| x * scale)),
    }
}

/// Rescale ellipse data for a period-T problem: the coefficient scale factor
/// multiplies the segment integrals and the exponent of C_lambda.
pub fn rescale_data(data: &EllipseData, period: f64) -> EllipseData {
    let k = period / 2.0;
    match *data {
        EllipseData::Scalar {
            a_e,
            b_e,
            provenance,
        } => EllipseData::Scalar {
            a_e: k * a_e,
            b_e: k * b_e,
            provenance,
        },
        EllipseData::System {
            c_lambda,
            provenance,
        } => EllipseData::System {
            c_lambda: c_lambda.powf(k),
            provenance,
        },
    }
}

/// Complex-extended coefficient callables for the numeric ellipse-data mode.
pub mod analytic {
    use crate::cert::{AnalyticFn, AnalyticMatrixFn};
    use ndarray::array;
    use num_complex::Complex64;
    use std::f64::consts::PI;
    use std::sync::Arc;

    pub fn intro_dde_a(a: f64) -> AnalyticFn {
        Arc::new(move |_| Complex64::new(a, 0.0))
    }

    pub fn intro_dde_b(b: f64) -> AnalyticFn {
        Arc::new(move |z| Complex64::new(b, 0.0) + (z * 3.0 * PI).sin())
    }

    pub fn constant(c: f64) -> AnalyticFn {
        Arc::new(move |_| Complex64::new(c, 0.0))
    }

    pub fn delayed_mathieu_a(c: f64) -> AnalyticMatrixFn {
        Arc::new(move |z| {
            let one = Complex64::new(1.0, 0.0);
            array![
                [Complex64::new(0.0, 0.0), one],
                [-one - (z * PI).cos(), Complex64::new(-c, 0.0)]
            ]
        })
    }

    pub fn delayed_mathieu_b(b: f64) -> AnalyticMatrixFn {
        Arc::new(move |_| {
            array![
                [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(b, 0.0), Complex64::new(0.0, 0.0)]
            ]
        })
    }
}
