//! Spectral-collocation toolkit for linear periodic ODE/DDE problems:
//! certified initial value solves on [-1,1] and Floquet multipliers of
//! delay-equation monodromy operators with rigorous error discs.
//!
//! The Chebyshev layer ([`cheb`], [`hilbert`]) is generic over the real
//! scalar; the solver and certification layers ([`ivp`], [`fund`],
//! [`monodromy`], [`cert`]) work in `f64`/`Complex64`, where the LAPACK
//! eigendecomposition and the double-precision constants live.

pub mod cheb;
pub mod error;
pub mod hilbert;
pub mod scalar;

pub mod cert;
pub mod fund;
pub mod ivp;
pub mod monodromy;
pub mod problems;

pub use error::{Error, Result};

/// Concrete f64 aliases for the generic Chebyshev layer.
pub type Grid = cheb::ChebGrid<f64>;
pub type Poly = cheb::ChebPoly<f64>;
pub type Coeffs = cheb::ChebCoeffs<f64>;
