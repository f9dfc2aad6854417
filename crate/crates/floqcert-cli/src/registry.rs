//! The problem registry: name -> system constructors, parameter defaults,
//! and the closed-form certification constants.

use crate::config::{ChartEffective, ChartFileConfig, Effective, FileConfig};
use anyhow::{bail, Result};
use floqcert::cert::{
    estimate_scalar_data, estimate_system_data, DataProvenance, EllipseData, RegularityEllipse,
};
use floqcert::ivp::{CoeffFn, LinearIvp};
use floqcert::monodromy::DdeSystem;
use floqcert::problems;
use num_complex::Complex64;
use std::collections::BTreeMap;

pub const DDE_PROBLEMS: &[&str] = &["intro_dde", "delayed_mathieu", "scalar_constant"];
pub const IVP_PROBLEMS: &[&str] = &[
    "linear_forced",
    "pure_exponential",
    "oscillatory_forced",
    "variable_coeff",
    "rotation",
    "zero",
];
pub const BOUND_PROBLEMS: &[&str] = &[
    "mathieu_stiff",
    "intro_dde",
    "delayed_mathieu",
    "scalar_constant",
];

fn defaults(name: &str) -> Option<(&'static [(&'static str, f64)], usize, f64, f64)> {
    // (params, default N, default delta, default ellipse s)
    match name {
        "intro_dde" => Some((&[("a", -1.1), ("b", 1.0)], 184, 0.2, 0.5)),
        "delayed_mathieu" => Some((&[("b", 0.5), ("c", 1.0)], 73, 0.3, 1.5)),
        "scalar_constant" => Some((&[("a0", -1.0), ("b0", -0.5)], 64, 0.2, 2.0)),
        "linear_forced" => Some((&[("a", 3.0), ("y0", 0.2)], 20, 0.2, 0.5)),
        "pure_exponential" => Some((&[("a", 10.0)], 32, 0.2, 0.5)),
        "oscillatory_forced" => Some((&[("a_re", 3.0), ("a_im", 37.0), ("y0", 0.2)], 81, 0.2, 0.5)),
        "variable_coeff" => Some((&[], 16, 0.2, 0.5)),
        "rotation" => Some((&[], 32, 0.2, 0.5)),
        "zero" => Some((&[], 8, 0.2, 0.5)),
        "mathieu_stiff" => Some((&[], 50, 0.2, 0.5)),
        _ => None,
    }
}

/// Resolve the file config plus flag overrides into a complete run
/// description, filling per-problem defaults and rejecting unknown names or
/// parameters.
pub fn resolve(
    cfg: &FileConfig,
    flag_n: Option<usize>,
    flag_delta: Option<f64>,
    flag_ellipse_s: Option<f64>,
    flag_workers: Option<usize>,
) -> Result<Effective> {
    let problem = cfg.problem.clone().unwrap_or_else(|| "intro_dde".into());
    let Some((param_defaults, def_n, def_delta, def_s)) = defaults(&problem) else {
        bail!(
            "stage: config (unknown problem {problem:?}; known: {:?})",
            DDE_PROBLEMS
                .iter()
                .chain(IVP_PROBLEMS)
                .chain(["mathieu_stiff"].iter())
                .collect::<Vec<_>>()
        );
    };
    let mut params: BTreeMap<String, f64> = param_defaults
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (k, v) in &cfg.params {
        if !params.contains_key(k) {
            bail!("stage: config (problem {problem} has no parameter {k:?})");
        }
        params.insert(k.clone(), *v);
    }

    let n = flag_n.or(cfg.n).unwrap_or(def_n);
    let delta = flag_delta.or(cfg.delta).unwrap_or(def_delta);
    let ellipse_s = flag_ellipse_s.or(cfg.ellipse_s).unwrap_or(def_s);
    let period = cfg.period.unwrap_or(2.0);
    if n < 1 {
        bail!("stage: config (n must be >= 1)");
    }
    if !(delta > 0.0 && delta < 1.0) {
        bail!("stage: config (delta must lie in (0,1))");
    }
    if ellipse_s <= 0.0 {
        bail!("stage: config (ellipse_s must be positive)");
    }
    if period <= 0.0 {
        bail!("stage: config (period must be positive)");
    }

    let workers = flag_workers
        .or(cfg.workers)
        .or_else(|| {
            std::env::var("FLOQCERT_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });

    let chart = resolve_chart(&problem, cfg.chart.as_ref())?;

    Ok(Effective {
        problem,
        params,
        n,
        delta,
        ellipse_s,
        period,
        tol: cfg.tol,
        numeric_data: cfg.numeric_data,
        bound_n: cfg.bound_n.unwrap_or(50),
        bounds: cfg.bounds.clone().unwrap_or_default(),
        chart,
        workers,
    })
}

fn resolve_chart(problem: &str, cfg: Option<&ChartFileConfig>) -> Result<Option<ChartEffective>> {
    let (dx, dy, dxr, dyr): (&str, &str, [f64; 2], [f64; 2]) = match problem {
        "intro_dde" => ("a", "b", [-3.0, 3.0], [-2.0, 4.0]),
        "delayed_mathieu" => ("b", "c", [-4.0, 4.0], [0.0, 3.0]),
        "scalar_constant" => ("a0", "b0", [-2.0, 2.0], [-2.0, 2.0]),
        _ => return Ok(None),
    };
    let c = cfg.cloned().unwrap_or_default();
    let eff = ChartEffective {
        x: c.x.unwrap_or_else(|| dx.into()),
        y: c.y.unwrap_or_else(|| dy.into()),
        x_range: c.x_range.unwrap_or(dxr),
        y_range: c.y_range.unwrap_or(dyr),
        resolution: c.resolution.unwrap_or([120, 120]),
    };
    if eff.resolution[0] < 2 || eff.resolution[1] < 2 {
        bail!("stage: config (chart resolution must be at least 2 per axis)");
    }
    if eff.x_range[0] >= eff.x_range[1] || eff.y_range[0] >= eff.y_range[1] {
        bail!("stage: config (chart ranges must be increasing)");
    }
    Ok(Some(eff))
}

fn p(params: &BTreeMap<String, f64>, key: &str) -> f64 {
    params[key]
}

/// Build the (period-rescaled) DDE system for a registry name.
pub fn dde_system(eff: &Effective) -> Result<DdeSystem> {
    let sys = match eff.problem.as_str() {
        "intro_dde" => problems::intro_dde(p(&eff.params, "a"), p(&eff.params, "b")),
        "delayed_mathieu" => problems::delayed_mathieu(p(&eff.params, "b"), p(&eff.params, "c")),
        "scalar_constant" => problems::scalar_constant(p(&eff.params, "a0"), p(&eff.params, "b0")),
        other => bail!("stage: config (problem {other} is not a DDE; certify/chart want one of {DDE_PROBLEMS:?})"),
    };
    Ok(if eff.period != 2.0 {
        problems::rescale_dde(&sys, eff.period)
    } else {
        sys
    })
}

/// Ellipse data for the certification run: user-supplied values take
/// precedence, then the registry closed forms, or the sampled estimate when
/// `numeric_data` is set.
pub fn dde_data(eff: &Effective, ell: &RegularityEllipse) -> Result<EllipseData> {
    let scale = eff.period / 2.0;
    if let Some(c_lambda) = eff.bounds.c_lambda {
        return Ok(EllipseData::System {
            c_lambda,
            provenance: DataProvenance::UserSupplied,
        });
    }
    if eff.bounds.a_e.is_some() || eff.bounds.b_e.is_some() {
        let (a_e, b_e) = (eff.bounds.a_e.unwrap_or(0.0), eff.bounds.b_e.unwrap_or(0.0));
        return Ok(EllipseData::Scalar {
            a_e,
            b_e,
            provenance: DataProvenance::UserSupplied,
        });
    }
    let data = match eff.problem.as_str() {
        "intro_dde" => {
            let (a, b) = (p(&eff.params, "a"), p(&eff.params, "b"));
            if eff.numeric_data {
                estimate_scalar_data(
                    &problems::analytic::intro_dde_a(a),
                    &problems::analytic::intro_dde_b(b),
                    ell,
                )
            } else {
                problems::intro_dde_data(a, b, ell)
            }
        }
        "delayed_mathieu" => {
            let (b, c) = (p(&eff.params, "b"), p(&eff.params, "c"));
            if eff.numeric_data {
                estimate_system_data(
                    &problems::analytic::delayed_mathieu_a(c),
                    &problems::analytic::delayed_mathieu_b(b),
                    ell,
                    eff.delta,
                )
            } else {
                problems::delayed_mathieu_data(b, c, ell, eff.delta)
            }
        }
        "scalar_constant" => {
            let (a0, b0) = (p(&eff.params, "a0"), p(&eff.params, "b0"));
            if eff.numeric_data {
                estimate_scalar_data(
                    &problems::analytic::constant(a0),
                    &problems::analytic::constant(b0),
                    ell,
                )
            } else {
                problems::scalar_constant_data(a0, b0, ell)
            }
        }
        other => bail!("stage: config (no ellipse data for problem {other})"),
    };
    Ok(if scale != 1.0 {
        problems::rescale_data(&data, eff.period)
    } else {
        data
    })
}

/// Build the IVP for a registry name (solve subcommand).
pub fn ivp_problem(eff: &Effective) -> Result<LinearIvp> {
    Ok(match eff.problem.as_str() {
        "linear_forced" => problems::linear_forced(p(&eff.params, "a"), p(&eff.params, "y0")),
        "pure_exponential" => problems::pure_exponential(p(&eff.params, "a")),
        "oscillatory_forced" => problems::oscillatory_forced(
            Complex64::new(p(&eff.params, "a_re"), p(&eff.params, "a_im")),
            p(&eff.params, "y0"),
        ),
        "variable_coeff" => problems::variable_coeff(),
        "rotation" => problems::rotation(),
        "zero" => problems::zero_ivp(),
        other => {
            bail!("stage: config (problem {other} is not an IVP; solve wants one of {IVP_PROBLEMS:?})")
        }
    })
}

/// Coefficient matrix whose fundamental solution the bound subcommand
/// analyzes.
pub fn bound_coeff(eff: &Effective) -> Result<(CoeffFn, usize)> {
    Ok(match eff.problem.as_str() {
        "mathieu_stiff" => (problems::stiff_mathieu_coeff(), 2),
        "intro_dde" | "delayed_mathieu" | "scalar_constant" => {
            let sys = dde_system(eff)?;
            (sys.coeff_a, sys.dim)
        }
        other => bail!("stage: config (problem {other} has no homogeneous part registered; bound wants one of {BOUND_PROBLEMS:?})"),
    })
}
