//! Run and summary CSV files.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use frcfr::MetricsRow;

use crate::error::{CliError, CliResult};

/// Per-run CSV header.
pub const RUN_HEADER: [&str; 10] = [
    "iteration",
    "player",
    "exploitability_milli",
    "avg_regret_p1",
    "avg_regret_p2",
    "err_sum_p1",
    "err_sum_p2",
    "bound_p1",
    "bound_p2",
    "wall_ms",
];

pub const SUMMARY_HEADER: [&str; 10] = [
    "game",
    "link",
    "param",
    "partitions",
    "buckets",
    "lambda",
    "update",
    "iterations",
    "seeds",
    "mean_final_exploitability_milli",
];

/// Value of the `player` column on metric rows; the error marker row uses `error`.
pub const BOTH_PLAYERS: &str = "both";
pub const ERROR_MARKER: &str = "error";

pub fn format_row(row: &MetricsRow, timing: bool) -> [String; 10] {
    let wall = if timing { row.wall_ms } else { 0.0 };
    [
        row.iteration.to_string(),
        BOTH_PLAYERS.to_string(),
        row.exploitability_milli.to_string(),
        row.avg_regret[0].to_string(),
        row.avg_regret[1].to_string(),
        row.err_sum[0].to_string(),
        row.err_sum[1].to_string(),
        row.bound[0].to_string(),
        row.bound[1].to_string(),
        wall.to_string(),
    ]
}

/// Streams one run's rows to disk.
pub struct RunWriter<W: Write> {
    inner: csv::Writer<W>,
    timing: bool,
}

impl RunWriter<File> {
    pub fn create(path: &Path, timing: bool) -> CliResult<Self> {
        let file = File::create(path).map_err(CliError::io(path))?;
        Self::new(file, timing)
    }
}

impl<W: Write> RunWriter<W> {
    pub fn new(writer: W, timing: bool) -> CliResult<Self> {
        let mut inner = csv::Writer::from_writer(writer);
        inner.write_record(RUN_HEADER)?;
        Ok(Self { inner, timing })
    }

    pub fn write_row(&mut self, row: &MetricsRow) -> CliResult<()> {
        self.inner.write_record(format_row(row, self.timing))?;
        self.inner.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Marks the file as partial: the run stopped after `iteration` iterations.
    pub fn write_error(&mut self, iteration: usize) -> CliResult<()> {
        let mut record = vec![iteration.to_string(), ERROR_MARKER.to_string()];
        record.resize(RUN_HEADER.len(), String::new());
        self.inner.write_record(&record)?;
        self.inner.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn into_inner(self) -> CliResult<W> {
        self.inner
            .into_inner()
            .map_err(|e| CliError::Csv(csv::Error::from(e.into_error())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub game: String,
    pub link: String,
    pub param: f64,
    pub partitions: usize,
    pub buckets: usize,
    pub lambda: f64,
    pub update: String,
    pub iterations: usize,
    pub seeds: usize,
    pub mean_final_exploitability_milli: f64,
}

pub fn write_summary<W: Write>(writer: W, rows: &[SummaryRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.game.clone(),
            r.link.clone(),
            r.param.to_string(),
            r.partitions.to_string(),
            r.buckets.to_string(),
            r.lambda.to_string(),
            r.update.clone(),
            r.iterations.to_string(),
            r.seeds.to_string(),
            r.mean_final_exploitability_milli.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
