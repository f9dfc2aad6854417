//! JSON report schemas. Every report embeds the effective config, the crate
//! version, and provenance tags for each computed constant.

use crate::config::Effective;
use anyhow::{Context, Result};
use floqcert::cert::{Certification, DataProvenance, EllipseData, Verdict};
use floqcert::fund::{BoundProvenance, FundamentalBound};
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

impl From<Complex64> for ComplexEntry {
    fn from(z: Complex64) -> Self {
        ComplexEntry {
            re: z.re,
            im: z.im,
            abs: z.norm(),
        }
    }
}

#[derive(Serialize)]
pub struct BoundEntry {
    pub value: f64,
    pub provenance: String,
    pub history: Vec<f64>,
}

impl From<&FundamentalBound> for BoundEntry {
    fn from(b: &FundamentalBound) -> Self {
        BoundEntry {
            value: b.value,
            provenance: match b.provenance {
                BoundProvenance::APriori => "a-priori".into(),
                BoundProvenance::Bootstrap { iterations } => {
                    format!("bootstrap({iterations} iterations)")
                }
            },
            history: b.history.clone(),
        }
    }
}

pub fn provenance_tag(p: DataProvenance) -> &'static str {
    match p {
        DataProvenance::UserSupplied => "rigorous (closed form / user supplied)",
        DataProvenance::NumericEstimate => "numeric estimate (NOT rigorous)",
    }
}

#[derive(Serialize)]
#[serde(tag = "kind")]
pub enum EllipseDataEntry {
    #[serde(rename = "scalar")]
    Scalar { a_e: f64, b_e: f64, provenance: String },
    #[serde(rename = "system")]
    System { c_lambda: f64, provenance: String },
}

impl From<&EllipseData> for EllipseDataEntry {
    fn from(d: &EllipseData) -> Self {
        match *d {
            EllipseData::Scalar { a_e, b_e, provenance } => EllipseDataEntry::Scalar {
                a_e,
                b_e,
                provenance: provenance_tag(provenance).into(),
            },
            EllipseData::System { c_lambda, provenance } => EllipseDataEntry::System {
                c_lambda,
                provenance: provenance_tag(provenance).into(),
            },
        }
    }
}

pub fn verdict_tag(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::NotProvenStable => "not-stable",
        Verdict::Unverifiable => "inconclusive",
    }
}

#[derive(Serialize)]
pub struct CertifyReport<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: &'a Effective,
    pub c_a: BoundEntry,
    pub ellipse: EllipseEntry,
    pub ellipse_data: EllipseDataEntry,
    pub eigenvalues: Vec<ComplexEntry>,
    pub eigenvalues_above_delta: usize,
    pub lambda1_abs: f64,
    pub cond_vhat: f64,
    pub uhat_norm: f64,
    pub nus: Vec<Vec<f64>>,
    pub xis: Vec<f64>,
    pub epss: Vec<f64>,
    pub omegas: Vec<f64>,
    pub k_min: usize,
    pub radius: f64,
    pub stable: bool,
    pub verdict: &'static str,
    pub flagged: bool,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct EllipseEntry {
    pub s: f64,
    pub semi_major: f64,
    pub eta: f64,
}

pub fn certify_report<'a>(
    config: &'a Effective,
    c_a: &FundamentalBound,
    cert: &Certification,
) -> CertifyReport<'a> {
    let mut notes = vec![format!(
        "guarantee: every exact multiplier with |mu| >= {} lies within radius {} of a listed eigenvalue",
        cert.delta, cert.radius
    )];
    notes.push(format!(
        "ellipse data: {}",
        provenance_tag(cert.data.provenance())
    ));
    if cert.flagged {
        notes.push(
            "some adaptive norm estimate hit its degree cap; bounds valid but possibly loose"
                .into(),
        );
    }
    CertifyReport {
        command: "certify",
        version: env!("CARGO_PKG_VERSION"),
        config,
        c_a: c_a.into(),
        ellipse: EllipseEntry {
            s: cert.ellipse.s,
            semi_major: cert.ellipse.cap_s,
            eta: cert.ellipse.eta,
        },
        ellipse_data: (&cert.data).into(),
        eigenvalues: cert.lambdas.iter().map(|&z| z.into()).collect(),
        eigenvalues_above_delta: cert
            .lambdas
            .iter()
            .filter(|l| l.norm() >= cert.delta)
            .count(),
        lambda1_abs: cert.lambda1_abs,
        cond_vhat: cert.cond_v,
        uhat_norm: cert.uhat_norm,
        nus: cert
            .nus
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect(),
        xis: cert.xis.clone(),
        epss: cert.epss.clone(),
        omegas: cert.omegas.clone(),
        k_min: cert.k_min,
        radius: cert.radius,
        stable: cert.stable,
        verdict: verdict_tag(cert.verdict()),
        flagged: cert.flagged,
        notes,
    }
}

#[derive(Serialize)]
pub struct SolveReport<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: &'a Effective,
    pub n_used: usize,
    pub err_sup: f64,
    pub deriv_err_sup: f64,
    pub initial_residual: f64,
    pub c_a: BoundEntry,
    pub flagged: bool,
    pub solution_csv: String,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct BoundReport<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: &'a Effective,
    pub bound: BoundEntry,
}

#[derive(Serialize)]
pub struct ChartReport<'a> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: &'a Effective,
    pub chart_csv: String,
    pub chart_pgm: String,
    pub pixels: usize,
    pub failures: usize,
    pub stable_pixels: usize,
    pub notes: Vec<String>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("stage: report (serializing)")?;
    std::fs::write(path, text)
        .with_context(|| format!("stage: report (writing {})", path.display()))
}
