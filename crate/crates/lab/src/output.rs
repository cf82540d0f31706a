//! JSON and CSV serialization of command results.
//!
//! Reals use the shortest representation that parses back to the same
//! `f64`, so every printed number round-trips exactly. JSON writes
//! non-finite values as `null`; CSV writes them as `NaN`/`inf`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A serializable result row with a fixed CSV layout.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

pub fn real(x: f64) -> String {
    ryu::Buffer::new().format(x).to_owned()
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Renders rows. A single JSON row is written as an object when
/// `single_object` is set, otherwise rows form an array.
pub fn render<R: Row>(rows: &[R], format: Format, single_object: bool) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    match format {
        Format::Json => {
            if single_object && rows.len() == 1 {
                serde_json::to_writer_pretty(&mut out, &rows[0])?;
            } else {
                serde_json::to_writer_pretty(&mut out, rows)?;
            }
            out.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(R::HEADER)?;
            for r in rows {
                w.write_record(r.cells())?;
            }
            w.flush()?;
        }
    }
    Ok(out)
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Monte Carlo estimate, optionally compared with a reference value.
///
/// For `statistic = "variance"` rows the comparison is against `variance`
/// and `z` uses `variance_stderr`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub quantity: String,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Row for EstimateRecord {
    const HEADER: &'static [&'static str] = &[
        "quantity",
        "n",
        "alpha",
        "samples",
        "seed",
        "mean",
        "variance",
        "stderr",
        "statistic",
        "variance_stderr",
        "closed_form",
        "z",
        "rule",
        "pass",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.n.to_string(),
            opt_real(self.alpha),
            self.samples.to_string(),
            self.seed.to_string(),
            real(self.mean),
            real(self.variance),
            real(self.stderr),
            opt(&self.statistic),
            opt_real(self.variance_stderr),
            opt_real(self.closed_form),
            opt_real(self.z),
            opt(&self.rule),
            opt(&self.pass),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRecord {
    pub quantity: String,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    /// True for values built on the numerically observed negativity constant.
    pub asymptotic_reference: bool,
}

impl Row for ClosedFormRecord {
    const HEADER: &'static [&'static str] =
        &["quantity", "n", "alpha", "value", "limit", "asymptotic_reference"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.n.to_string(),
            opt_real(self.alpha),
            real(self.value),
            opt_real(self.limit),
            self.asymptotic_reference.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRecord {
    pub quantity: String,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub samples: u64,
    pub seed: u64,
    pub center: f64,
    pub epsilon: f64,
    pub tail: f64,
    pub tail_stderr: f64,
    pub exceed: u64,
    /// Analytic concentration bound, where the paper states one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Chebyshev bound from the exact variance, where one is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chebyshev: Option<f64>,
}

impl Row for TailRecord {
    const HEADER: &'static [&'static str] = &[
        "quantity",
        "n",
        "alpha",
        "samples",
        "seed",
        "center",
        "epsilon",
        "tail",
        "tail_stderr",
        "exceed",
        "bound",
        "chebyshev",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.n.to_string(),
            opt_real(self.alpha),
            self.samples.to_string(),
            self.seed.to_string(),
            real(self.center),
            real(self.epsilon),
            real(self.tail),
            real(self.tail_stderr),
            self.exceed.to_string(),
            opt_real(self.bound),
            opt_real(self.chebyshev),
        ]
    }
}

/// One point of the entangled-Bures-versus-`κ` figure, `N = 2^κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub kappa: u32,
    pub n: u64,
    pub closed_form: f64,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl Row for FigureRow {
    const HEADER: &'static [&'static str] =
        &["kappa", "n", "closed_form", "mc_mean", "mc_stderr", "samples", "seed"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.kappa.to_string(),
            self.n.to_string(),
            real(self.closed_form),
            opt_real(self.mc_mean),
            opt_real(self.mc_stderr),
            opt(&self.samples),
            opt(&self.seed),
        ]
    }
}

/// A closed form (`kind = "closed_form"`) or a concentration bound
/// (`kind = "bound"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub kind: String,
    pub id: String,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_ratio: Option<f64>,
}

impl Row for ReportRow {
    const HEADER: &'static [&'static str] = &[
        "kind",
        "id",
        "n",
        "alpha",
        "epsilon",
        "value",
        "limit",
        "reconstruction",
        "exponent_ratio",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            self.id.clone(),
            self.n.to_string(),
            opt_real(self.alpha),
            opt_real(self.epsilon),
            real(self.value),
            opt_real(self.limit),
            opt_real(self.reconstruction),
            opt_real(self.exponent_ratio),
        ]
    }
}
