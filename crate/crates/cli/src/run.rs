//! Executing a manifest: one CSV per run, then `summary.csv`.

use std::fs::{self, File};
use std::io::BufWriter;

use frcfr::links::LinkFamily;
use frcfr::Solver;
use log::{error, info};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::manifest::{RunManifest, RunSpec};
use crate::output::{write_summary, RunWriter, SummaryRow};

pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub file_name: String,
    /// Exploitability at the last row; `None` when the run failed.
    pub final_exploitability_milli: Option<f64>,
}

/// Runs every entry of `manifest` on a pool of `jobs` threads.
pub fn execute(manifest: &RunManifest, jobs: usize, timing: bool) -> CliResult<Vec<RunOutcome>> {
    fs::create_dir_all(&manifest.out_dir).map_err(CliError::io(&manifest.out_dir))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    let outcomes: Vec<CliResult<RunOutcome>> = pool.install(|| {
        manifest
            .runs
            .par_iter()
            .map(|spec| run_one(manifest, spec, timing))
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<CliResult<Vec<_>>>()?;
    let summary = summarize(manifest, &outcomes);
    let path = manifest.out_dir.join(SUMMARY_FILE);
    let file = File::create(&path).map_err(CliError::io(&path))?;
    write_summary(BufWriter::new(file), &summary)?;
    let failed = outcomes
        .iter()
        .filter(|o| o.final_exploitability_milli.is_none())
        .count();
    if failed > 0 {
        return Err(CliError::RunsFailed {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(outcomes)
}

/// Solver failures become an error row; only I/O problems are returned.
fn run_one(manifest: &RunManifest, spec: &RunSpec, timing: bool) -> CliResult<RunOutcome> {
    let path = manifest.out_dir.join(&spec.file_name);
    let mut writer = RunWriter::create(&path, timing)?;
    info!("start {}", spec.file_name);
    let mut io_error = None;
    let mut last = None;
    let result = spec.config.game.build_tree().and_then(|tree| {
        let mut solver = Solver::new(&tree, spec.config.clone())?;
        let run = solver.run(|row| {
            last = Some(row.exploitability_milli);
            if io_error.is_none() {
                io_error = writer.write_row(row).err();
            }
        });
        if let Err(e) = run {
            let t = solver.iteration();
            error!("{} failed at iteration {t}: {e}", spec.file_name);
            last = None;
            io_error = io_error.take().or(writer.write_error(t).err());
        }
        Ok(())
    });
    if let Err(e) = result {
        error!("{} failed during setup: {e}", spec.file_name);
        last = None;
        writer.write_error(0)?;
    }
    if let Some(e) = io_error {
        return Err(e);
    }
    writer.into_inner()?;
    info!("done {}", spec.file_name);
    Ok(RunOutcome {
        file_name: spec.file_name.clone(),
        final_exploitability_milli: last,
    })
}

/// Mean final exploitability over the successful seeds of each group, in
/// manifest order.
pub fn summarize(manifest: &RunManifest, outcomes: &[RunOutcome]) -> Vec<SummaryRow> {
    let mut rows: Vec<(String, SummaryRow, f64)> = Vec::new();
    for (spec, outcome) in manifest.runs.iter().zip(outcomes) {
        let index = match rows.iter().position(|(g, _, _)| *g == spec.group) {
            Some(i) => i,
            None => {
                let c = &spec.config;
                rows.push((
                    spec.group.clone(),
                    SummaryRow {
                        game: c.game.name(),
                        link: match c.link.family() {
                            LinkFamily::Polynomial => "poly".into(),
                            LinkFamily::Exponential => "exp".into(),
                        },
                        param: c.link.param(),
                        partitions: c.partitions,
                        buckets: c.buckets,
                        lambda: c.lambda,
                        update: c.update.to_string(),
                        iterations: c.iterations,
                        seeds: 0,
                        mean_final_exploitability_milli: f64::NAN,
                    },
                    0.0,
                ));
                rows.len() - 1
            }
        };
        if let Some(x) = outcome.final_exploitability_milli {
            rows[index].1.seeds += 1;
            rows[index].2 += x;
        }
    }
    rows.into_iter()
        .map(|(_, mut row, total)| {
            if row.seeds > 0 {
                row.mean_final_exploitability_milli = total / row.seeds as f64;
            }
            row
        })
        .collect()
}
