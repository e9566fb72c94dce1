use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use cscf::{BenchmarkId, ChaoticMapKind, DesignKind};
use cscf_cli::experiment::{FileConfig, DEFAULT_OUT, OUT_ENV};
use cscf_cli::{cmd_report, cmd_run, ConfigError, ExperimentSpec, Overrides};

#[derive(Parser)]
#[command(name = "cscf", version, about = "Chaotic sine cosine firefly experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cross-product of the selected problems, algorithms, variants and maps.
    Run(RunArgs),
    /// Summarize and compare the records under a results directory.
    Report {
        /// Results directory (defaults to $CSCF_OUT, then `results`).
        input: Option<PathBuf>,
        /// Where to write the tables (defaults to INPUT/report).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List benchmark and design problems.
    ListProblems,
    /// List chaotic maps.
    ListMaps,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problems: names, fnN, ranges like fn1..fn20, `all`, `engineering`.
    #[arg(long, visible_alias = "problems")]
    problem: Option<String>,
    /// ff, iff, sca, cscf or all (comma-separated).
    #[arg(long, visible_alias = "algos")]
    algo: Option<String>,
    /// i, ii, iii, iv, v, all (composite) or single (i through v).
    #[arg(long, visible_alias = "variants")]
    variant: Option<String>,
    /// Map names or `all`.
    #[arg(long, visible_alias = "maps")]
    map: Option<String>,
    #[arg(long, visible_alias = "dims")]
    dim: Option<String>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    trial_limit: Option<u32>,
    /// Base seed; replicate r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<u32>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output root (defaults to $CSCF_OUT, then `results`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite existing records.
    #[arg(long)]
    force: bool,
}

fn run(args: RunArgs) -> Result<()> {
    let file = args.config.as_deref().map(FileConfig::load).transpose()?;
    let spec = ExperimentSpec::resolve(
        file,
        Overrides {
            problems: args.problem,
            algorithms: args.algo,
            variants: args.variant,
            maps: args.map,
            dims: args.dim,
            population: args.pop,
            max_iter: args.iters,
            trial_limit: args.trial_limit,
            seed: args.seed,
            replicates: args.replicates,
            jobs: args.jobs,
            out: args.out,
            force: args.force,
        },
    )?;
    let summary = cmd_run(&spec)?;
    eprintln!(
        "ran {} run(s), skipped {} existing, output in {}",
        summary.ran,
        summary.skipped,
        spec.out.display()
    );
    Ok(())
}

fn list_problems() {
    println!("{:<6} {:<16} {:>10} {:>10} {:>7}  reference(d=20)", "id", "name", "lower", "upper", "min_dim");
    for id in BenchmarkId::all() {
        let (lo, hi) = id.range();
        println!(
            "{:<6} {:<16} {:>10} {:>10} {:>7}  {}",
            id.to_string(),
            id.name(),
            lo,
            hi,
            id.min_dim(),
            id.reference(20.max(id.min_dim()))
        );
    }
    for kind in DesignKind::ALL {
        println!(
            "{:<6} {:<16} {:>10} {:>10} {:>7}  {}",
            "-",
            kind.name(),
            "-",
            "-",
            kind.dim(),
            kind.reference_best()
        );
    }
}

fn list_maps() {
    for kind in ChaoticMapKind::ALL {
        let (lo, hi) = kind.attractor();
        println!("{:<14} [{lo}, {hi}]", kind.name());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_root = || {
        std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Report { input, out } => {
            let input = input.unwrap_or_else(default_root);
            let out = out.unwrap_or_else(|| input.join("report"));
            cmd_report(&input, &out).map(|s| {
                eprintln!("read {} record(s), wrote {} file(s) to {}", s.records, s.written.len(), out.display());
            })
        }
        Command::ListProblems => {
            list_problems();
            Ok(())
        }
        Command::ListMaps => {
            list_maps();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
