//! The four batch commands: solve, certify, chart, bound.

use crate::config::Effective;
use crate::registry;
use crate::report::{self, BoundEntry, BoundReport, CertifyReport, ChartReport, SolveReport};
use anyhow::{Context, Result};
use floqcert::cert::{certify, RegularityEllipse};
use floqcert::fund::{apriori_bound, bootstrap_bound_default, BoundProvenance, FundamentalBound};
use floqcert::ivp::{apost_certificate, scalar_growth_constant, solve_ivp};
use floqcert::monodromy::build_monodromy;
use rayon::prelude::*;
use std::path::Path;

const SOLVE_N_CAP: usize = 512;

fn user_bound(value: f64) -> FundamentalBound {
    FundamentalBound {
        value,
        provenance: BoundProvenance::APriori,
        history: vec![value],
    }
}

/// Fundamental-solution bound for the certification pipeline: user-supplied
/// if present, the scalar growth constant for d = 1, otherwise a bootstrap.
fn resolve_c_a(eff: &Effective, sys: &floqcert::monodromy::DdeSystem) -> Result<FundamentalBound> {
    if let Some(value) = eff.bounds.c_a {
        return Ok(user_bound(value));
    }
    if sys.dim == 1 {
        let a = sys.coeff_a.clone();
        let value = scalar_growth_constant(move |t| a(t)[(0, 0)])
            .context("stage: growth-constant quadrature")?;
        Ok(FundamentalBound {
            value,
            provenance: BoundProvenance::APriori,
            history: vec![value],
        })
    } else {
        bootstrap_bound_default(&sys.coeff_a, sys.dim, eff.bound_n)
            .context("stage: bootstrap fundamental bound")
    }
}

pub fn cmd_certify(eff: &Effective, out: &Path) -> Result<()> {
    let sys = registry::dde_system(eff)?;
    let ell = RegularityEllipse::new(eff.ellipse_s);
    let data = registry::dde_data(eff, &ell)?;
    let c_a = resolve_c_a(eff, &sys)?;
    let m = build_monodromy(&sys, eff.n).context("stage: build_monodromy")?;
    let cert = certify(&sys, &m, c_a.value, &ell, &data, eff.delta).context("stage: certify")?;

    let report: CertifyReport = report::certify_report(eff, &c_a, &cert);
    report::write_json(&out.join("report.json"), &report)?;
    println!(
        "certify {}: |lambda_1| = {:.6}, radius = {:.6e}, verdict = {}",
        eff.problem,
        cert.lambda1_abs,
        cert.radius,
        report::verdict_tag(cert.verdict())
    );
    Ok(())
}

pub fn cmd_solve(eff: &Effective, out: &Path) -> Result<()> {
    let ivp = registry::ivp_problem(eff)?;
    let c_a = if let Some(value) = eff.bounds.c_a {
        user_bound(value)
    } else if ivp.dim == 1 {
        let a = ivp.coeff.clone();
        user_bound(
            scalar_growth_constant(move |t| a(t)[(0, 0)])
                .context("stage: growth-constant quadrature")?,
        )
    } else {
        apriori_bound(&ivp.coeff)
    };

    let mut n = eff.n;
    let (poly, cert) = loop {
        let p = solve_ivp(&ivp, n).context("stage: solve_ivp")?;
        let cert = apost_certificate(&ivp, &p, c_a.value).context("stage: apost_certificate")?;
        match eff.tol {
            Some(tol) if cert.err_sup >= tol && n < SOLVE_N_CAP => n = (2 * n).min(SOLVE_N_CAP),
            _ => break (p, cert),
        }
    };

    // solution.csv: node abscissae and components (re, im columns).
    let csv_path = out.join("solution.csv");
    let mut csv = String::from("t");
    for s in 0..ivp.dim {
        csv.push_str(&format!(",re_y{s},im_y{s}"));
    }
    csv.push('\n');
    for (j, &t) in poly.grid().points().iter().enumerate() {
        csv.push_str(&format!("{t:.17e}"));
        for s in 0..ivp.dim {
            let z = poly.values()[(j, s)];
            csv.push_str(&format!(",{:.17e},{:.17e}", z.re, z.im));
        }
        csv.push('\n');
    }
    std::fs::write(&csv_path, csv)
        .with_context(|| format!("stage: output (writing {})", csv_path.display()))?;

    let mut notes = vec![];
    if eff.tol.is_some() && n >= SOLVE_N_CAP && cert.err_sup >= eff.tol.unwrap() {
        notes.push(format!(
            "degree cap {SOLVE_N_CAP} reached before err_sup < {}",
            eff.tol.unwrap()
        ));
    }
    let report = SolveReport {
        command: "solve",
        version: env!("CARGO_PKG_VERSION"),
        config: eff,
        n_used: n,
        err_sup: cert.err_sup,
        deriv_err_sup: cert.deriv_err_sup,
        initial_residual: cert.residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        c_a: (&c_a).into(),
        flagged: cert.flagged,
        solution_csv: "solution.csv".into(),
        notes,
    };
    report::write_json(&out.join("report.json"), &report)?;
    println!(
        "solve {}: N = {n}, err_sup = {:.6e}, deriv_err_sup = {:.6e}",
        eff.problem, cert.err_sup, cert.deriv_err_sup
    );
    Ok(())
}

pub fn cmd_bound(eff: &Effective, out: &Path) -> Result<()> {
    let (coeff, dim) = registry::bound_coeff(eff)?;
    let bound = bootstrap_bound_default(&coeff, dim, eff.bound_n)
        .context("stage: bootstrap fundamental bound")?;
    let report = BoundReport {
        command: "bound",
        version: env!("CARGO_PKG_VERSION"),
        config: eff,
        bound: BoundEntry::from(&bound),
    };
    report::write_json(&out.join("report.json"), &report)?;
    println!(
        "bound {}: C_A = {:.6} after {} entries (history {:?})",
        eff.problem,
        bound.value,
        bound.history.len(),
        bound.history.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>()
    );
    Ok(())
}

/// Grayscale rule: g = clamp((log10 rho + 2) / 4, 0, 1) mapped to
/// 255 (bright, very stable) .. 0 (dark, very unstable); rho = 1 sits at 127
/// and failed pixels render mid-gray.
fn gray(rho: f64) -> u8 {
    if !rho.is_finite() {
        return 127;
    }
    let g = ((rho.max(1e-300).log10() + 2.0) / 4.0).clamp(0.0, 1.0);
    (255.0 - (g * 255.0).round()) as u8
}

pub fn cmd_chart(eff: &Effective, out: &Path) -> Result<()> {
    let chart = eff
        .chart
        .clone()
        .ok_or_else(|| anyhow::anyhow!("stage: config (problem {} has no chart axes; chart wants a DDE problem)", eff.problem))?;
    let [nx, ny] = chart.resolution;
    let pixels: Vec<(usize, usize)> = (0..ny)
        .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
        .collect();

    let rho: Vec<f64> = pixels
        .par_iter()
        .map(|&(ix, iy)| {
            let x = chart.x_range[0]
                + (chart.x_range[1] - chart.x_range[0]) * ix as f64 / (nx - 1) as f64;
            let y = chart.y_range[0]
                + (chart.y_range[1] - chart.y_range[0]) * iy as f64 / (ny - 1) as f64;
            let mut sub = eff.clone();
            sub.params.insert(chart.x.clone(), x);
            sub.params.insert(chart.y.clone(), y);
            registry::dde_system(&sub)
                .ok()
                .and_then(|sys| build_monodromy(&sys, eff.n).ok())
                .and_then(|m| m.spectral_radius().ok())
                .unwrap_or(f64::NAN)
        })
        .collect();

    // chart.csv: x,y,rho rows in y-major order (ground truth for the image).
    let mut csv = String::from("x,y,rho\n");
    for iy in 0..ny {
        for ix in 0..nx {
            let x = chart.x_range[0]
                + (chart.x_range[1] - chart.x_range[0]) * ix as f64 / (nx - 1) as f64;
            let y = chart.y_range[0]
                + (chart.y_range[1] - chart.y_range[0]) * iy as f64 / (ny - 1) as f64;
            let r = rho[iy * nx + ix];
            if r.is_finite() {
                csv.push_str(&format!("{x:.12e},{y:.12e},{r:.12e}\n"));
            } else {
                csv.push_str(&format!("{x:.12e},{y:.12e},NaN\n"));
            }
        }
    }
    let csv_path = out.join("chart.csv");
    std::fs::write(&csv_path, csv)
        .with_context(|| format!("stage: output (writing {})", csv_path.display()))?;

    // chart.pgm: P5, maxval 255, top row = largest y.
    let mut pgm = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    for iy in (0..ny).rev() {
        for ix in 0..nx {
            pgm.push(gray(rho[iy * nx + ix]));
        }
    }
    let pgm_path = out.join("chart.pgm");
    std::fs::write(&pgm_path, pgm)
        .with_context(|| format!("stage: output (writing {})", pgm_path.display()))?;

    let failures = rho.iter().filter(|r| !r.is_finite()).count();
    let stable_pixels = rho.iter().filter(|r| r.is_finite() && **r < 1.0).count();
    let report = ChartReport {
        command: "chart",
        version: env!("CARGO_PKG_VERSION"),
        config: eff,
        chart_csv: "chart.csv".into(),
        chart_pgm: "chart.pgm".into(),
        pixels: nx * ny,
        failures,
        stable_pixels,
        notes: vec![
            "grayscale: 255 - 255*clamp((log10 rho + 2)/4, 0, 1); stable pixels brighter than 127"
                .into(),
        ],
    };
    report::write_json(&out.join("report.json"), &report)?;
    println!(
        "chart {}: {}x{} pixels, {} stable, {} failures",
        eff.problem, nx, ny, stable_pixels, failures
    );
    Ok(())
}
