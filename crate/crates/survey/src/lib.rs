//! Analysis and enumeration harness behind the `plumb-hf` binary.

pub mod cache;
pub mod cli;
pub mod report;
pub mod survey;

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use plumbing::format::{parse_graph, ParseError};
use plumbing::{GameError, GraphError, PlumbingGraph, SeifertError};

pub use cache::{graph_hash, Cache};
pub use report::{analyze, AnalysisReport, AnalyzeOptions, Verdict};
pub use survey::{run_survey, s3_rows, Mode, SurveyConfig, SurveyOutcome, SurveyRow};

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Game(#[from] GameError),
    #[error("{0}")]
    Seifert(#[from] SeifertError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cache: {0}")]
    Cache(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("determinant does not fit in 128 bits")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn parse_graph_file(path: &Path) -> Result<PlumbingGraph, SurveyError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_graph(&text)?)
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> Result<(), SurveyError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv<'a>(
    header: &[&str],
    records: impl Iterator<Item = Vec<String>> + 'a,
    out: &mut dyn Write,
) -> Result<(), SurveyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in records {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report(
    report: &AnalysisReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), SurveyError> {
    match format {
        Format::Json => write_json(report, out),
        Format::Csv => write_csv(
            &report::REPORT_CSV_HEADER,
            std::iter::once(report.csv_record()),
            out,
        ),
    }
}

pub fn write_rows(
    rows: &[SurveyRow],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), SurveyError> {
    match format {
        Format::Json => write_json(rows, out),
        Format::Csv => write_csv(
            &survey::ROW_CSV_HEADER,
            rows.iter().map(SurveyRow::csv_record),
            out,
        ),
    }
}
