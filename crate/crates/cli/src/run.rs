use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cscf::{optimize, RunRecord};
use rayon::prelude::*;

use crate::experiment::{ExperimentSpec, Job};

pub const RECORDS_DIR: &str = "records";
pub const CURVES_DIR: &str = "curves";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub ran: usize,
    pub skipped: usize,
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    file.write_all(bytes)?;
    file.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
}

pub fn record_path(out: &Path, job: &Job) -> PathBuf {
    let mut p = out.join(RECORDS_DIR).join(job.stem()).into_os_string();
    p.push(".jsonl");
    p.into()
}

pub fn curve_path(out: &Path, job: &Job) -> PathBuf {
    let mut p = out.join(CURVES_DIR).join(job.stem()).into_os_string();
    p.push(".csv");
    p.into()
}

/// `iteration,best_fitness[,violation]`, one row per curve point.
pub fn curve_csv(record: &RunRecord) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let constrained = !record.violation_curve.is_empty();
    if constrained {
        w.write_record(["iteration", "best_fitness", "violation"])?;
    } else {
        w.write_record(["iteration", "best_fitness"])?;
    }
    for (i, f) in record.best_curve.iter().enumerate() {
        let mut row = vec![i.to_string(), f.to_string()];
        if constrained {
            row.push(record.violation_curve[i].to_string());
        }
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

pub fn run_job(spec: &ExperimentSpec, job: &Job) -> Result<RunRecord> {
    let problem = job.problem.build(job.dim)?;
    let mut record = optimize(problem.as_ref(), &job.config(&spec.optimizer))
        .with_context(|| format!("run {}", job.stem().display()))?;
    record.replicate = job.replicate;
    Ok(record)
}

fn execute(spec: &ExperimentSpec, job: &Job) -> Result<bool> {
    let record_file = record_path(&spec.out, job);
    if record_file.exists() && !spec.force {
        return Ok(false);
    }
    let record = run_job(spec, job)?;
    let mut line = serde_json::to_vec(&record)?;
    line.push(b'\n');
    write_atomic(&curve_path(&spec.out, job), &curve_csv(&record)?)?;
    write_atomic(&record_file, &line)?;
    Ok(true)
}

/// Runs every job of `spec`, skipping runs whose record already exists unless
/// `spec.force` is set.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunSummary> {
    let jobs = spec.jobs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .context("starting worker pool")?;
    let outcomes: Vec<Result<bool>> =
        pool.install(|| jobs.par_iter().map(|job| execute(spec, job)).collect());
    let mut summary = RunSummary::default();
    for outcome in outcomes {
        if outcome? {
            summary.ran += 1;
        } else {
            summary.skipped += 1;
        }
    }
    Ok(summary)
}
