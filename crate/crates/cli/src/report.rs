use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cscf::analysis::{self, ComparisonReport, SummaryRow};
use cscf::RunRecord;

use crate::experiment::reference_for;
use crate::run::{write_atomic, RECORDS_DIR};

#[derive(Debug)]
pub enum ReportError {
    EmptyInput(PathBuf),
    AllCorrupt { lines: usize },
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyInput(p) => write!(f, "no run records found under {}", p.display()),
            Self::AllCorrupt { lines } => write!(f, "all {lines} record lines are corrupt"),
        }
    }
}

impl std::error::Error for ReportError {}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportSummary {
    pub records: usize,
    pub corrupt_lines: usize,
    pub wilcoxon_skipped: bool,
    pub written: Vec<PathBuf>,
}

fn jsonl_files(dir: &Path, skip: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path == skip {
            continue;
        }
        if path.is_dir() {
            jsonl_files(&path, skip, out)?;
        } else if path.extension().is_some_and(|e| e == "jsonl") {
            out.push(path);
        }
    }
    Ok(())
}

/// Every parseable record under `input` (its `records/` subdirectory when
/// present), plus the number of lines that failed to parse.
pub fn load_records(input: &Path, skip: &Path) -> Result<(Vec<RunRecord>, usize)> {
    let root = match input.join(RECORDS_DIR) {
        r if r.is_dir() => r,
        _ => input.to_path_buf(),
    };
    let mut files = Vec::new();
    jsonl_files(&root, skip, &mut files)?;
    files.sort();
    let (mut records, mut corrupt) = (Vec::new(), 0);
    for file in files {
        let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<RunRecord>(line) {
                Ok(r) => records.push(r),
                Err(_) => corrupt += 1,
            }
        }
    }
    if records.is_empty() {
        return Err(if corrupt > 0 {
            ReportError::AllCorrupt { lines: corrupt }.into()
        } else {
            ReportError::EmptyInput(input.to_path_buf()).into()
        });
    }
    Ok((records, corrupt))
}

fn group_by_label(records: &[RunRecord]) -> BTreeMap<String, Vec<RunRecord>> {
    let mut groups: BTreeMap<String, Vec<RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.label()).or_default().push(r.clone());
    }
    groups
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn summary_csv(rows: &[SummaryRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "problem", "dim", "algorithm", "runs", "mean", "std", "best", "worst", "mae", "feasible_runs",
        "mean_wall_time",
    ])?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.dim.to_string(),
            r.algorithm.clone(),
            r.stats.n.to_string(),
            r.stats.mean.to_string(),
            r.stats.std.to_string(),
            r.stats.best.to_string(),
            r.stats.worst.to_string(),
            opt(r.mae),
            r.feasible_runs.to_string(),
            r.mean_wall_time.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

fn summary_jsonl(rows: &[SummaryRow]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    Ok(out)
}

/// Per-problem rank-sum rows, then one signed-rank row per pair over the
/// per-problem means, carrying the win/loss counts.
fn wilcoxon_csv(report: &ComparisonReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "a", "b", "test", "problem", "mean_a", "mean_b", "r_plus", "r_minus", "p_value",
        "significant_010", "significant_005", "wins", "losses",
    ])?;
    for pair in &report.pairwise {
        for c in &pair.per_problem {
            let t = &c.rank_sum;
            w.write_record([
                pair.a.clone(),
                pair.b.clone(),
                "rank_sum".into(),
                c.problem.clone(),
                c.mean_a.to_string(),
                c.mean_b.to_string(),
                t.r_plus.to_string(),
                t.r_minus.to_string(),
                t.p_value.to_string(),
                t.significant_010.to_string(),
                t.significant_005.to_string(),
                String::new(),
                String::new(),
            ])?;
        }
        let t = pair.multi_problem;
        w.write_record([
            pair.a.clone(),
            pair.b.clone(),
            "signed_rank".into(),
            "all".into(),
            String::new(),
            String::new(),
            opt(t.map(|t| t.r_plus)),
            opt(t.map(|t| t.r_minus)),
            opt(t.map(|t| t.p_value)),
            t.map(|t| t.significant_010.to_string()).unwrap_or_default(),
            t.map(|t| t.significant_005.to_string()).unwrap_or_default(),
            pair.wins.to_string(),
            pair.losses.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

type CellKey = (String, usize, String, String);

/// MAE per (problem, dim, map, variant) over hybrid records with a known
/// reference.
fn mae_cells(records: &[RunRecord]) -> Result<BTreeMap<CellKey, (f64, usize)>> {
    let mut samples: BTreeMap<CellKey, Vec<f64>> = BTreeMap::new();
    for r in records {
        let (Some(v), Some(m)) = (r.variant, r.map.as_ref()) else { continue };
        if reference_for(&r.problem, r.dim).is_none() {
            continue;
        }
        samples
            .entry((r.problem.clone(), r.dim, m.clone(), v.to_string()))
            .or_default()
            .push(r.best_fitness);
    }
    samples
        .into_iter()
        .map(|(k, v)| {
            let reference = reference_for(&k.0, k.1).expect("filtered above");
            Ok((k, (analysis::mae(&v, reference)?, v.len())))
        })
        .collect()
}

fn mae_grid_csv(cells: &BTreeMap<CellKey, (f64, usize)>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["problem", "dim", "map", "variant", "replicates", "mae"])?;
    for ((problem, dim, map, variant), (mae, n)) in cells {
        w.write_record([problem.clone(), dim.to_string(), map.clone(), variant.clone(), n.to_string(), mae.to_string()])?;
    }
    Ok(w.into_inner()?)
}

/// Mean rank of each variant within its (problem, dim, map) cells.
fn variant_rank_csv(cells: &BTreeMap<CellKey, (f64, usize)>) -> Result<Vec<u8>> {
    let mut by_cell: BTreeMap<(&str, usize, &str), Vec<(&str, f64)>> = BTreeMap::new();
    for ((problem, dim, map, variant), (mae, _)) in cells {
        by_cell.entry((problem, *dim, map)).or_default().push((variant, *mae));
    }
    let mut totals: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for entries in by_cell.values() {
        let errors: Vec<f64> = entries.iter().map(|e| e.1).collect();
        for ((variant, _), rank) in entries.iter().zip(analysis::midranks(&errors)) {
            let t = totals.entry(variant).or_default();
            t.0 += rank;
            t.1 += 1;
        }
    }
    let mut ranking: Vec<(&str, f64, usize)> =
        totals.into_iter().map(|(v, (sum, n))| (v, sum / n as f64, n)).collect();
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(b.0)));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["variant", "mean_rank", "cells"])?;
    for (v, r, n) in ranking {
        w.write_record([v.to_string(), r.to_string(), n.to_string()])?;
    }
    Ok(w.into_inner()?)
}

fn wall_time_csv(groups: &BTreeMap<String, Vec<RunRecord>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algorithm", "runs", "mean_wall_time"])?;
    for (label, runs) in groups {
        let mean = runs.iter().map(|r| r.wall_time).sum::<f64>() / runs.len() as f64;
        w.write_record([label.clone(), runs.len().to_string(), mean.to_string()])?;
    }
    Ok(w.into_inner()?)
}

/// Pointwise mean best-so-far curve per (problem, dim, label), over runs of
/// equal length.
fn mean_curves(records: &[RunRecord]) -> Result<Vec<(String, Vec<u8>)>> {
    let mut groups: BTreeMap<(String, usize, String), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.problem.clone(), r.dim, r.label())).or_default().push(r);
    }
    let mut out = Vec::new();
    for ((problem, dim, label), runs) in groups {
        let len = runs.iter().map(|r| r.best_curve.len()).min().unwrap_or(0);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iteration", "mean_best_fitness", "runs"])?;
        for i in 0..len {
            let mean = runs.iter().map(|r| r.best_curve[i]).sum::<f64>() / runs.len() as f64;
            w.write_record([i.to_string(), mean.to_string(), runs.len().to_string()])?;
        }
        out.push((format!("{problem}_d{dim}_{label}.csv"), w.into_inner()?));
    }
    Ok(out)
}

/// Reads every record under `input` and writes summary, Wilcoxon, MAE,
/// variant-rank, wall-time and mean-curve tables into `out`.
pub fn cmd_report(input: &Path, out: &Path) -> Result<ReportSummary> {
    let (records, corrupt_lines) = load_records(input, out)?;
    if corrupt_lines > 0 {
        eprintln!("warning: skipped {corrupt_lines} corrupt record line(s)");
    }
    let groups = group_by_label(&records);
    let reference = |p: &str, d: usize| reference_for(p, d);
    let mut summary = ReportSummary {
        records: records.len(),
        corrupt_lines,
        ..Default::default()
    };
    let mut emit = |name: &str, bytes: Vec<u8>| -> Result<()> {
        let path = out.join(name);
        write_atomic(&path, &bytes)?;
        summary.written.push(path);
        Ok(())
    };

    let rows = analysis::summarize_groups(&groups, &reference)?;
    emit("summary.csv", summary_csv(&rows)?)?;
    emit("summary.jsonl", summary_jsonl(&rows)?)?;
    let wilcoxon_skipped = groups.len() < 2;
    if wilcoxon_skipped {
        eprintln!("warning: only one algorithm present, Wilcoxon comparison skipped");
    } else {
        let report = analysis::compare_report(&groups, &reference)?;
        emit("wilcoxon.csv", wilcoxon_csv(&report)?)?;
    }
    let cells = mae_cells(&records)?;
    if !cells.is_empty() {
        emit("mae_grid.csv", mae_grid_csv(&cells)?)?;
        emit("variant_rank.csv", variant_rank_csv(&cells)?)?;
    }
    emit("wall_time.csv", wall_time_csv(&groups)?)?;
    for (name, bytes) in mean_curves(&records)? {
        emit(&format!("curves/{name}"), bytes)?;
    }
    summary.wilcoxon_skipped = wilcoxon_skipped;
    Ok(summary)
}
