use std::fmt::Write;
use std::str::FromStr;

use super::{FitReport, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

pub const CSV_HEADER: &str = "generated,source,mean_hu,mean_hd,count";

/// Deterministic text rendering. Markdown rows are generated fits and
/// columns are source fits, each with Hu and Hd sub-columns.
pub fn render_report(report: &FitReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for c in &report.cells {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.generated, c.source, c.mean_hu, c.mean_hd, c.count
                )
                .unwrap();
            }
            s
        }
        ReportFormat::Markdown => {
            let fits = report.kind.fits();
            let mut s = String::from("| pd \\ gt |");
            for f in fits {
                write!(s, " {f} Hu | {f} Hd |").unwrap();
            }
            s.push_str("\n|---|");
            s.push_str(&"---:|".repeat(2 * fits.len()));
            s.push('\n');
            for &g in fits {
                write!(s, "| {g} |").unwrap();
                for &src in fits {
                    match report.cell(g, src) {
                        Some(c) => write!(s, " {:.4} | {:.4} |", c.mean_hu, c.mean_hd).unwrap(),
                        None => s.push_str(" - | - |"),
                    }
                }
                s.push('\n');
            }
            s
        }
    }
}

pub fn parse_json_report(text: &str) -> Result<FitReport> {
    serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))
}
