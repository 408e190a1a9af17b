use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::run::BenchReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Renders a report. Timing is left out unless `include_timing` is set, so
/// that the same plan always yields the same bytes.
pub fn emit_report(
    report: &BenchReport,
    format: ReportFormat,
    include_timing: bool,
) -> Result<String> {
    let stripped;
    let report = if include_timing {
        report
    } else {
        stripped = report.without_timing();
        &stripped
    };
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Csv => to_csv(report, include_timing),
        ReportFormat::Markdown => Ok(to_markdown(report)),
    }
}

fn to_csv(report: &BenchReport, include_timing: bool) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "case",
        "m",
        "family",
        "n",
        "assumed_m",
        "replicates",
        "correct",
        "accuracy",
        "x_causes_y",
        "y_causes_x",
        "independent",
        "undecided",
        "errors",
    ];
    if include_timing {
        header.push("mean_runtime_ms");
    }
    writer.write_record(&header)?;
    for c in &report.cells {
        let mut row = vec![
            c.case.to_string(),
            c.m.to_string(),
            c.family.clone(),
            c.n.to_string(),
            c.assumed_m.map(|a| a.to_string()).unwrap_or_default(),
            c.replicates.to_string(),
            c.correct.to_string(),
            c.accuracy.to_string(),
            c.x_causes_y.to_string(),
            c.y_causes_x.to_string(),
            c.independent.to_string(),
            c.undecided.to_string(),
            c.errors.to_string(),
        ];
        if include_timing {
            row.push(
                c.mean_runtime_ms
                    .map(|t| format!("{t:.3}"))
                    .unwrap_or_default(),
            );
        }
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows per case, latent count, family and assumed count; one column per
/// sample size.
fn to_markdown(report: &BenchReport) -> String {
    let mut sizes: Vec<usize> = report.cells.iter().map(|c| c.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let forced = report.cells.iter().any(|c| c.assumed_m.is_some());

    let mut rows: Vec<(String, String, Option<usize>)> = Vec::new();
    for c in &report.cells {
        let key = (
            format!("{} (m={})", c.case, c.m),
            c.family.clone(),
            c.assumed_m,
        );
        if !rows.contains(&key) {
            rows.push(key);
        }
    }

    let mut out = String::from("| Case | Family |");
    if forced {
        out.push_str(" AN |");
    }
    for n in &sizes {
        let _ = write!(out, " n={n} |");
    }
    out.push_str("\n|---|---|");
    if forced {
        out.push_str("---|");
    }
    out.push_str(&"---:|".repeat(sizes.len()));
    out.push('\n');
    for (case, family, assumed) in rows {
        let _ = write!(out, "| {case} | {family} |");
        if forced {
            let _ = write!(
                out,
                " {} |",
                assumed.map(|a| a.to_string()).unwrap_or_default()
            );
        }
        for &n in &sizes {
            let cell = report.cells.iter().find(|c| {
                format!("{} (m={})", c.case, c.m) == case
                    && c.family == family
                    && c.assumed_m == assumed
                    && c.n == n
            });
            match cell {
                Some(c) => {
                    let _ = write!(out, " {:.2} |", c.accuracy);
                }
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{BenchPlan, CellResult};
    use crate::model::{Case, NoiseFamily};

    fn cell(case: Case, family: NoiseFamily, n: usize) -> CellResult {
        CellResult {
            case,
            m: case.default_m(),
            family: family.name().into(),
            n,
            assumed_m: None,
            replicates: 10,
            correct: 9,
            accuracy: 0.9,
            x_causes_y: 5,
            y_causes_x: 4,
            independent: 0,
            undecided: 1,
            errors: 0,
            mean_runtime_ms: Some(1.25),
        }
    }

    fn full_report() -> BenchReport {
        let plan = BenchPlan::table1();
        let mut cells = Vec::new();
        for (case, _) in plan.structures() {
            for &family in &plan.families {
                for &n in &plan.sample_sizes {
                    cells.push(cell(case, family, n));
                }
            }
        }
        BenchReport { plan, cells }
    }

    #[test]
    fn csv_rows() {
        let mut one = full_report();
        one.cells.truncate(1);
        let text = emit_report(&one, ReportFormat::Csv, false).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains("runtime"));
        let full = emit_report(&full_report(), ReportFormat::Csv, true).unwrap();
        assert_eq!(full.lines().count(), 46);
        assert!(full.lines().next().unwrap().ends_with("mean_runtime_ms"));
    }

    #[test]
    fn json_roundtrip() {
        let report = full_report();
        let text = emit_report(&report, ReportFormat::Json, true).unwrap();
        assert_eq!(serde_json::from_str::<BenchReport>(&text).unwrap(), report);
        let text = emit_report(&report, ReportFormat::Json, false).unwrap();
        assert_eq!(
            serde_json::from_str::<BenchReport>(&text).unwrap(),
            report.without_timing()
        );
    }

    #[test]
    fn markdown_layout() {
        let text = emit_report(&full_report(), ReportFormat::Markdown, false).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "| Case | Family | n=5000 | n=10000 | n=50000 |");
        assert_eq!(lines.len(), 2 + 15);
        assert_eq!(lines[2], "| 1 (m=0) | laplace | 0.90 | 0.90 | 0.90 |");
    }

    #[test]
    fn format_parsing() {
        assert_eq!(
            "MD".parse::<ReportFormat>().unwrap(),
            ReportFormat::Markdown
        );
        assert!(matches!(
            "xlsx".parse::<ReportFormat>(),
            Err(Error::UnsupportedFormat(_))
        ));
    }
}
