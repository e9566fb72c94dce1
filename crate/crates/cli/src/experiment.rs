//! Experiment description: selectors, optimizer settings and output location,
//! assembled from an optional TOML file and command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use cscf::engineering::PenaltyMode;
use cscf::{
    Algorithm, BenchmarkId, ChaoticMapKind, ConstrainedProblem, DesignKind, ObjectiveProblem,
    OptimizerConfig, Problem, Variant,
};
use serde::Deserialize;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "CSCF_OUT";
pub const DEFAULT_OUT: &str = "results";

/// Invalid experiment description; reported with a distinct exit status.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// A benchmark function or a design problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProblemSel {
    Benchmark(BenchmarkId),
    Design(DesignKind),
}

impl ProblemSel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Benchmark(id) => id.name(),
            Self::Design(kind) => kind.name(),
        }
    }

    /// The design problems have a fixed dimension and ignore `dim`.
    pub fn build(self, dim: usize) -> Result<Box<dyn Problem>> {
        Ok(match self {
            Self::Benchmark(id) => Box::new(ObjectiveProblem::new(id, dim).map_err(|e| config_err(e.to_string()))?),
            Self::Design(kind) => Box::new(ConstrainedProblem::new(kind)),
        })
    }

    pub fn effective_dim(self, dim: usize) -> usize {
        match self {
            Self::Benchmark(_) => dim,
            Self::Design(kind) => kind.dim(),
        }
    }

    pub fn reference(self, dim: usize) -> f64 {
        match self {
            Self::Benchmark(id) => id.reference(dim),
            Self::Design(kind) => kind.reference_best(),
        }
    }
}

impl FromStr for ProblemSel {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(kind) = s.parse::<DesignKind>() {
            return Ok(Self::Design(kind));
        }
        s.parse::<BenchmarkId>()
            .map(Self::Benchmark)
            .map_err(|e| config_err(e.to_string()))
    }
}

/// Reference optimum for a recorded problem name and dimension.
pub fn reference_for(problem: &str, dim: usize) -> Option<f64> {
    problem.parse::<ProblemSel>().ok().map(|p| p.reference(dim))
}

fn split(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Comma-separated names, `fnA..fnB` ranges, `all` (every benchmark) and
/// `engineering` (every design problem).
pub fn parse_problems(list: &str) -> Result<Vec<ProblemSel>> {
    let mut out = Vec::new();
    for item in split(list) {
        match item.to_ascii_lowercase().as_str() {
            "all" => out.extend(BenchmarkId::all().map(ProblemSel::Benchmark)),
            "engineering" => out.extend(DesignKind::ALL.map(ProblemSel::Design)),
            key => {
                if let Some((lo, hi)) = key.split_once("..") {
                    let lo: BenchmarkId = lo.parse().map_err(|e: cscf::Error| config_err(e.to_string()))?;
                    let hi: BenchmarkId = hi.parse().map_err(|e: cscf::Error| config_err(e.to_string()))?;
                    if lo.index() > hi.index() {
                        return Err(config_err(format!("empty problem range `{item}`")));
                    }
                    for i in lo.index()..=hi.index() {
                        out.push(ProblemSel::Benchmark(BenchmarkId::new(i)?));
                    }
                } else {
                    out.push(item.parse()?);
                }
            }
        }
    }
    dedup(out, "problem")
}

fn dedup<T: PartialEq>(items: Vec<T>, what: &str) -> Result<Vec<T>> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    if out.is_empty() {
        return Err(config_err(format!("no {what} selected")));
    }
    Ok(out)
}

fn parse_each<T: FromStr<Err = cscf::Error> + PartialEq>(list: &str, what: &str) -> Result<Vec<T>> {
    let items = split(list)
        .map(|s| s.parse::<T>().map_err(|e| config_err(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    dedup(items, what)
}

pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(Algorithm::ALL.to_vec());
    }
    parse_each(list, "algorithm")
}

/// `all` here is the composite variant; `single` expands to I through V.
pub fn parse_variants(list: &str) -> Result<Vec<Variant>> {
    if list.trim().eq_ignore_ascii_case("single") {
        return Ok(Variant::SINGLE.to_vec());
    }
    parse_each(list, "variant")
}

pub fn parse_maps(list: &str) -> Result<Vec<ChaoticMapKind>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(ChaoticMapKind::ALL.to_vec());
    }
    parse_each(list, "map")
}

pub fn parse_dims(list: &str) -> Result<Vec<usize>> {
    let dims = split(list)
        .map(|s| {
            s.parse::<usize>()
                .ok()
                .filter(|d| *d > 0)
                .ok_or_else(|| config_err(format!("invalid dimension `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    dedup(dims, "dimension")
}

/// Sections of the TOML experiment file; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub algorithm: AlgorithmSection,
    #[serde(default)]
    pub variant: VariantSection,
    #[serde(default)]
    pub chaos: ChaosSection,
    #[serde(default)]
    pub penalty: PenaltySection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub names: Option<Vec<String>>,
    pub dims: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub names: Option<Vec<String>>,
    pub population: Option<usize>,
    pub max_iter: Option<usize>,
    pub trial_limit: Option<u32>,
    pub alpha0: Option<f64>,
    pub beta: Option<f64>,
    pub j_step: Option<f64>,
    pub k_step: Option<f64>,
    pub eta_scale: Option<f64>,
    pub a_const: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSection {
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChaosSection {
    pub maps: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySection {
    pub mode: Option<PenaltyMode>,
    pub weight: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub replicates: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub force: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }
}

/// Command-line values; `None` defers to the config file, then to defaults.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub problems: Option<String>,
    pub algorithms: Option<String>,
    pub variants: Option<String>,
    pub maps: Option<String>,
    pub dims: Option<String>,
    pub population: Option<usize>,
    pub max_iter: Option<usize>,
    pub trial_limit: Option<u32>,
    pub seed: Option<u64>,
    pub replicates: Option<u32>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub force: bool,
}

/// A fully resolved experiment: the cross-product of its selectors, each
/// repeated `replicates` times with seeds `seed + replicate`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problems: Vec<ProblemSel>,
    pub algorithms: Vec<Algorithm>,
    pub variants: Vec<Variant>,
    pub maps: Vec<ChaoticMapKind>,
    pub dims: Vec<usize>,
    pub replicates: u32,
    pub seed: u64,
    pub out: PathBuf,
    pub force: bool,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    /// Shared optimizer settings; algorithm, variant, map and seed are set per run.
    pub optimizer: OptimizerConfig,
}

impl ExperimentSpec {
    pub fn resolve(file: Option<FileConfig>, cli: Overrides) -> Result<Self> {
        let mut file = file.unwrap_or_default();
        let joined = |v: Option<Vec<String>>| v.map(|v| v.join(","));
        let problems = cli
            .problems
            .or_else(|| joined(file.problem.names.take()))
            .ok_or_else(|| config_err("no problem selected (use --problem)"))?;
        let algorithms = cli
            .algorithms
            .or_else(|| joined(file.algorithm.names.take()))
            .unwrap_or_else(|| "cscf".into());
        let variants = cli
            .variants
            .or_else(|| joined(file.variant.names.take()))
            .unwrap_or_else(|| "all".into());
        let maps = cli
            .maps
            .or_else(|| joined(file.chaos.maps.take()))
            .unwrap_or_else(|| "logistic".into());
        let dims = cli
            .dims
            .or_else(|| {
                file.problem
                    .dims
                    .map(|d| d.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            })
            .unwrap_or_else(|| "20".into());

        let mut optimizer = OptimizerConfig::default();
        let a = &file.algorithm;
        optimizer.population = cli.population.or(a.population).unwrap_or(optimizer.population);
        optimizer.max_iter = cli.max_iter.or(a.max_iter).unwrap_or(optimizer.max_iter);
        optimizer.trial_limit = cli.trial_limit.or(a.trial_limit).unwrap_or(optimizer.trial_limit);
        let ff = &mut optimizer.firefly;
        ff.alpha0 = a.alpha0.unwrap_or(ff.alpha0);
        ff.beta = a.beta.unwrap_or(ff.beta);
        ff.j = a.j_step.unwrap_or(ff.j);
        ff.k = a.k_step.unwrap_or(ff.k);
        ff.eta_scale = a.eta_scale.unwrap_or(ff.eta_scale);
        optimizer.sca.a_const = a.a_const.unwrap_or(optimizer.sca.a_const);
        optimizer.penalty.mode = file.penalty.mode.unwrap_or(optimizer.penalty.mode);
        optimizer.penalty.weight = file.penalty.weight.unwrap_or(optimizer.penalty.weight);
        optimizer.validate().map_err(|e| config_err(e.to_string()))?;

        let e = file.experiment;
        let replicates = cli.replicates.or(e.replicates).unwrap_or(1);
        if replicates == 0 {
            return Err(config_err("replicates must be at least 1"));
        }
        let out = cli
            .out
            .or(e.out)
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

        let spec = Self {
            problems: parse_problems(&problems)?,
            algorithms: parse_algorithms(&algorithms)?,
            variants: parse_variants(&variants)?,
            maps: parse_maps(&maps)?,
            dims: parse_dims(&dims)?,
            replicates,
            seed: cli.seed.or(e.seed).unwrap_or(0),
            out,
            force: cli.force || e.force.unwrap_or(false),
            jobs: cli.jobs.or(e.jobs).unwrap_or(0),
            optimizer,
        };
        spec.check_dims()?;
        Ok(spec)
    }

    fn check_dims(&self) -> Result<()> {
        for p in &self.problems {
            if let ProblemSel::Benchmark(id) = p {
                if let Some(d) = self.dims.iter().find(|d| **d < id.min_dim()) {
                    return Err(config_err(format!(
                        "{} needs at least {} dimensions, got {d}",
                        id.name(),
                        id.min_dim()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every run of the experiment, in a fixed order.
    pub fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        for &problem in &self.problems {
            let mut dims: Vec<usize> = self.dims.iter().map(|d| problem.effective_dim(*d)).collect();
            dims.dedup();
            for dim in dims {
                for &algorithm in &self.algorithms {
                    let chaos: Vec<Option<(Variant, ChaoticMapKind)>> = if algorithm == Algorithm::Cscf {
                        self.variants
                            .iter()
                            .flat_map(|v| self.maps.iter().map(move |m| Some((*v, *m))))
                            .collect()
                    } else {
                        vec![None]
                    };
                    for c in chaos {
                        for replicate in 0..self.replicates {
                            jobs.push(Job {
                                problem,
                                algorithm,
                                chaos: c,
                                dim,
                                replicate,
                                seed: self.seed.wrapping_add(u64::from(replicate)),
                            });
                        }
                    }
                }
            }
        }
        jobs
    }
}

/// One optimizer run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub problem: ProblemSel,
    pub algorithm: Algorithm,
    pub chaos: Option<(Variant, ChaoticMapKind)>,
    pub dim: usize,
    pub replicate: u32,
    pub seed: u64,
}

impl Job {
    pub fn label(&self) -> String {
        match self.chaos {
            Some((v, m)) => format!("{}-{}-{}", self.algorithm, v, m.name()),
            None => self.algorithm.to_string(),
        }
    }

    /// `problem/d{dim}/{label}/r{replicate}`, unique within an experiment.
    pub fn stem(&self) -> PathBuf {
        PathBuf::from(self.problem.name())
            .join(format!("d{}", self.dim))
            .join(self.label())
            .join(format!("r{:03}", self.replicate))
    }

    pub fn config(&self, base: &OptimizerConfig) -> OptimizerConfig {
        let mut config = OptimizerConfig {
            algorithm: self.algorithm,
            seed: self.seed,
            ..base.clone()
        };
        if let Some((variant, map)) = self.chaos {
            config.variant = variant;
            config.map = map;
        }
        config
    }
}
