//! CSV, JSON and SVG output for sweep records.
//!
//! CSV columns, one row per record, values taken at the deepest computed depth:
//!
//! `parameter,param_kind,sim_dim,delta_n,has_collision,d_n,depth,rho_n,entropy_nats,witnesses,phi,budget,errors`
//!
//! Absent values are empty fields.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sweep::SweepRecord;

pub const CSV_HEADER: &str =
    "parameter,param_kind,sim_dim,delta_n,has_collision,d_n,depth,rho_n,entropy_nats,witnesses,phi,budget,errors";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "svg" => Ok(ReportFormat::Svg),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rec in records {
        let sep = rec.separation.as_ref().filter(|s| !s.is_empty());
        let dim = rec.dimension.as_ref().filter(|d| !d.depths.is_empty());
        let depth = match (sep, dim) {
            (Some(s), _) => s.depths.last().copied(),
            (None, Some(d)) => d.depths.last().copied(),
            _ => None,
        };
        let fields = [
            rec.parameter.to_string(),
            rec.parameter.kind().to_string(),
            opt(rec.similarity_dim),
            opt(sep.map(|s| s.delta_n.last().unwrap().to_string())),
            opt(sep.map(|s| *s.has_collision.last().unwrap())),
            opt(dim.map(|d| *d.ratio.last().unwrap())),
            opt(depth),
            opt(sep.map(|s| *s.rho_n.last().unwrap())),
            opt(dim.map(|d| *d.entropy_nats.last().unwrap())),
            opt(rec.witnesses.as_ref().map(Vec::len)),
            opt(rec.phi_values.as_ref().and_then(|p| p.last().copied())),
            rec.budget.to_string(),
            rec.errors.join("; "),
        ];
        let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(records: &[SweepRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn from_json(text: &str) -> Result<Vec<SweepRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Scatter of the deepest `d_n` against the parameter, with the similarity
/// dimension and the height-1 reference lines. Every record gets exactly one
/// `<circle class="marker ...">`; records without an estimate sit on the axis
/// with class `missing`.
pub fn to_svg(records: &[SweepRecord]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const PAD: f64 = 50.0;

    let xs: Vec<f64> = records.iter().map(|r| r.parameter.to_f64()).collect();
    let ds: Vec<Option<f64>> = records
        .iter()
        .map(|r| r.dimension.as_ref().and_then(|d| d.ratio.last().copied()))
        .collect();
    let sims: Vec<Option<f64>> = records
        .iter()
        .map(|r| {
            r.similarity_dim
                .or_else(|| r.dimension.as_ref().and_then(|d| d.similarity_dim))
        })
        .collect();

    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_max = ds
        .iter()
        .chain(&sims)
        .flatten()
        .copied()
        .fold(1.0_f64, f64::max)
        * 1.1;
    let px = |x: f64| PAD + (x - x_min) / x_span * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - y / y_max * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{PAD}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        y0 = py(0.0),
        x1 = W - PAD
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{y0}" stroke="black"/>"#,
        y0 = py(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line class="reference unit" x1="{PAD}" y1="{y}" x2="{x1}" y2="{y}" stroke="#888" stroke-dasharray="6 4"/>"##,
        y = py(1.0),
        x1 = W - PAD
    );
    let sim_points: Vec<String> = xs
        .iter()
        .zip(&sims)
        .filter_map(|(&x, s)| s.map(|s| format!("{:.2},{:.2}", px(x), py(s))))
        .collect();
    if !sim_points.is_empty() {
        let _ = writeln!(
            s,
            r##"<polyline class="reference similarity" points="{}" fill="none" stroke="#c33"/>"##,
            sim_points.join(" ")
        );
    }
    for (&x, d) in xs.iter().zip(&ds) {
        match d {
            Some(d) => {
                let _ = writeln!(
                    s,
                    r##"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3" fill="#236"/>"##,
                    px(x),
                    py(*d)
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    r##"<circle class="marker missing" cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="#236"/>"##,
                    px(x),
                    py(0.0)
                );
            }
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}" font-size="12">parameter [{x_min}, {x_max}]; y max {y_max:.3}</text>"#,
        H - 15.0
    );
    s.push_str("</svg>\n");
    s
}

pub fn render(records: &[SweepRecord], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => to_csv(records),
        ReportFormat::Json => to_json(records),
        ReportFormat::Svg => to_svg(records),
    }
}

pub fn emit_report(records: &[SweepRecord], format: ReportFormat, path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Invalid("no records to report".into()));
    }
    std::fs::write(path, render(records, format))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
