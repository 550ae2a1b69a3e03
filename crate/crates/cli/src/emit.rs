//! Result serialisation: CSV, JSON and tab-separated plot data.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wigner_core::numfmt::significant;

use crate::sweep::{ExactReport, PointDiagnostics, SweepConfig, SweepRecord, SweepReport};
use crate::{CliError, Result};

pub const CSV_HEADER: &str = "U,E_exact,E_raw,E_mitigated,rel_error_raw_pct,rel_error_mitigated_pct";

const DIGITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    PlotData,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "plotdata" => Ok(Format::PlotData),
            other => Err(format!("unknown format {other:?} (expected csv, json or plotdata)")),
        }
    }
}

/// Energy column written by the plot-data format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    Exact,
    Raw,
    Mitigated,
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Series::Exact),
            "raw" => Ok(Series::Raw),
            "mitigated" => Ok(Series::Mitigated),
            other => Err(format!("unknown series {other:?} (expected exact, raw or mitigated)")),
        }
    }
}

/// The JSON document: config echo, records and per-point diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub config: SweepConfig,
    pub records: Vec<SweepRecord>,
    pub mitigation: Vec<PointDiagnostics>,
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| significant(v, DIGITS)).unwrap_or_default()
}

pub fn csv(records: &[SweepRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        let row = [
            Some(r.u),
            Some(r.e_exact),
            Some(r.e_raw),
            r.e_mitigated,
            Some(r.rel_error_raw),
            r.rel_error_mitigated,
        ]
        .map(cell);
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}

pub fn json(config: &SweepConfig, report: &SweepReport) -> String {
    let doc = SweepDocument {
        config: config.clone(),
        records: report.records.clone(),
        mitigation: report.diagnostics.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serialises") + "\n"
}

pub fn parse_json(text: &str) -> Result<SweepDocument> {
    Ok(serde_json::from_str(text)?)
}

/// `U<TAB>energy` rows under a `#` comment header. Points without a value for
/// `series` are skipped.
pub fn plotdata(records: &[SweepRecord], series: Series) -> String {
    let (name, pick): (&str, fn(&SweepRecord) -> Option<f64>) = match series {
        Series::Exact => ("E_exact", |r| Some(r.e_exact)),
        Series::Raw => ("E_raw", |r| Some(r.e_raw)),
        Series::Mitigated => ("E_mitigated", |r| r.e_mitigated),
    };
    let mut out = format!("# U\t{name}\n");
    for r in records {
        if let Some(e) = pick(r) {
            writeln!(out, "{}\t{}", significant(r.u, DIGITS), significant(e, DIGITS)).unwrap();
        }
    }
    out
}

pub fn render_sweep(config: &SweepConfig, report: &SweepReport, format: Format, series: Series) -> Result<String> {
    if report.records.is_empty() {
        return Err(CliError::config("nothing to emit"));
    }
    Ok(match format {
        Format::Csv => csv(&report.records),
        Format::Json => json(config, report),
        Format::PlotData => plotdata(&report.records, series),
    })
}

pub fn render_exact(report: &ExactReport, format: Format) -> String {
    match format {
        Format::Csv => format!(
            "U,E_exact,E_classical,classical_bitmask,V_nearest,V_antipodal,localised\n{},{},{},{:#b},{},{},{}\n",
            significant(report.u, DIGITS),
            significant(report.e_exact, DIGITS),
            significant(report.e_classical, DIGITS),
            report.classical_bitmask,
            significant(report.v_nearest, DIGITS),
            significant(report.v_antipodal, DIGITS),
            report.localised,
        ),
        Format::Json => serde_json::to_string_pretty(report).expect("plain data serialises") + "\n",
        Format::PlotData => format!(
            "# U\tE_exact\n{}\t{}\n",
            significant(report.u, DIGITS),
            significant(report.e_exact, DIGITS)
        ),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
