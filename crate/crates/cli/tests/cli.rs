use std::fs;
use std::path::{Path, PathBuf};

use assert_cmd::Command;
use cscf::RunRecord;
use tempfile::TempDir;

fn cscf() -> Command {
    let mut cmd = Command::cargo_bin("cscf").unwrap();
    cmd.env_remove("CSCF_OUT");
    cmd
}

fn run_small(out: &Path, algo: &str, extra: &[&str]) -> assert_cmd::assert::Assert {
    cscf()
        .args(["run", "--problem", "sphere", "--dim", "2", "--pop", "5", "--iters", "4", "--seed", "3"])
        .args(["--algo", algo, "--out"])
        .arg(out)
        .args(extra)
        .assert()
}

fn files_under(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut out = Vec::new();
    if let Ok(entries) = fs::read_dir(dir) {
        for e in entries.flatten() {
            let p = e.path();
            if p.is_dir() {
                out.extend(files_under(&p, ext));
            } else if p.extension().is_some_and(|e| e == ext) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn run_writes_one_record_and_curve() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path(), "ff", &[]).success();
    let records = files_under(&dir.path().join("records"), "jsonl");
    assert_eq!(records.len(), 1);
    assert_eq!(files_under(&dir.path().join("curves"), "csv").len(), 1);

    let text = fs::read_to_string(&records[0]).unwrap();
    let record: RunRecord = serde_json::from_str(text.trim()).unwrap();
    assert_eq!((record.problem.as_str(), record.dim, record.seed), ("sphere", 2, 3));
    assert_eq!(record.best_curve.len(), 5);
    assert_eq!(record.evals, 25);
    assert_eq!(serde_json::to_string(&record).unwrap(), text.trim());
}

#[test]
fn unknown_problem_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    cscf()
        .args(["run", "--problem", "nosuch", "--out"])
        .arg(dir.path())
        .assert()
        .code(2);
    assert!(files_under(dir.path(), "jsonl").is_empty());
}

#[test]
fn existing_records_are_skipped_unless_forced() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path(), "sca", &[]).success();
    let record = files_under(dir.path(), "jsonl").remove(0);
    fs::write(&record, "marker\n").unwrap();

    run_small(dir.path(), "sca", &[]).success().stderr(predicates::str::contains("skipped 1"));
    assert_eq!(fs::read_to_string(&record).unwrap(), "marker\n");

    run_small(dir.path(), "sca", &["--force"]).success();
    assert_ne!(fs::read_to_string(&record).unwrap(), "marker\n");
}

#[test]
fn config_file_drives_the_grid_and_flags_override_it() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("exp.toml");
    fs::write(
        &config,
        "[problem]\nnames = [\"sphere\", \"ackley\"]\ndims = [2]\n\n\
         [algorithm]\nnames = [\"ff\", \"iff\"]\npopulation = 4\nmax_iter = 2\n\n\
         [experiment]\nreplicates = 2\nseed = 1\n",
    )
    .unwrap();
    let out = dir.path().join("res");
    cscf().args(["run", "--config"]).arg(&config).arg("--out").arg(&out).assert().success();
    assert_eq!(files_under(&out, "jsonl").len(), 2 * 2 * 2);

    let out = dir.path().join("one");
    cscf()
        .args(["run", "--algo", "ff", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    assert_eq!(files_under(&out, "jsonl").len(), 2 * 2);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "[algorithm]\npopsize = 4\n").unwrap();
    cscf().args(["run", "--config"]).arg(&config).assert().code(2);
}

#[test]
fn report_with_one_algorithm_skips_wilcoxon() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path(), "ff", &["--replicates", "3"]).success();
    cscf()
        .arg("report")
        .arg(dir.path())
        .assert()
        .success()
        .stderr(predicates::str::contains("Wilcoxon comparison skipped"));
    let report = dir.path().join("report");
    assert!(report.join("summary.csv").is_file());
    assert!(report.join("wall_time.csv").is_file());
    assert!(!report.join("wilcoxon.csv").exists());
}

#[test]
fn report_compares_two_algorithms() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path(), "ff,cscf", &["--replicates", "3", "--variant", "all"]).success();
    let out = dir.path().join("tables");
    cscf().arg("report").arg(dir.path()).arg("--out").arg(&out).assert().success();

    let wilcoxon = fs::read_to_string(out.join("wilcoxon.csv")).unwrap();
    assert!(wilcoxon.starts_with("a,b,test,problem"));
    assert!(wilcoxon.lines().any(|l| l.contains("rank_sum,sphere")));
    assert!(wilcoxon.lines().any(|l| l.contains("signed_rank,all")));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(out.join("mae_grid.csv").is_file());
    assert_eq!(files_under(&out.join("curves"), "csv").len(), 2);
}

#[test]
fn corrupt_lines_are_skipped() {
    let dir = TempDir::new().unwrap();
    run_small(dir.path(), "ff,sca", &[]).success();
    fs::write(dir.path().join("records").join("junk.jsonl"), "{not json\n").unwrap();
    cscf()
        .arg("report")
        .arg(dir.path())
        .assert()
        .success()
        .stderr(predicates::str::contains("skipped 1 corrupt"));
}

#[test]
fn all_corrupt_input_fails() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("a.jsonl"), "garbage\n{\"x\":1}\n").unwrap();
    cscf()
        .arg("report")
        .arg(dir.path())
        .assert()
        .failure()
        .stderr(predicates::str::contains("corrupt"));
}

#[test]
fn empty_directory_fails() {
    let dir = TempDir::new().unwrap();
    cscf()
        .arg("report")
        .arg(dir.path())
        .assert()
        .failure()
        .stderr(predicates::str::contains("no run records"));
}

#[test]
fn listings_cover_every_problem_and_map() {
    let problems = cscf().arg("list-problems").assert().success();
    let text = String::from_utf8(problems.get_output().stdout.clone()).unwrap();
    assert!(text.contains("fn20"));
    assert!(text.contains("welded_beam") || text.contains("welded-beam"));
    assert_eq!(text.lines().count(), 1 + 20 + 3);

    let maps = cscf().arg("list-maps").assert().success();
    let text = String::from_utf8(maps.get_output().stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.contains("logistic"));
}
