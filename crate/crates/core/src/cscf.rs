//! The chaotic sine cosine firefly hybrid and its baselines.
//!
//! Every agent carries a stagnation counter. While the counter is below the
//! trial limit the agent takes an improved-firefly step; once it reaches the
//! limit the counter is reset and the agent takes a sine cosine step around
//! the best-so-far position. A candidate replaces the agent only if its
//! fitness is strictly better, otherwise the counter grows.
//!
//! The five variants make one of `J`, `K`, `r1`, `r2`, `r3` chaos-driven;
//! [`Variant::All`] makes all five chaos-driven at once with independent
//! generators of the same map kind.
//!
//! Agents are updated in index order within an iteration, and each run draws
//! from three ChaCha8 streams of its seed (search, chaos seeding, objective
//! noise), so a `(seed, config, problem)` triple fully determines the run.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chaos::{ChaoticMapKind, ChaoticMapState};
use crate::engineering::{penalized_fitness, Fitness, PenaltyParams};
use crate::error::{Error, Result};
use crate::firefly::{self, Agent, FireflyParams};
use crate::problem::{Bounds, Evaluation, Problem};
use crate::record::RunRecord;
use crate::sca::{self, ScaDraw, ScaParams, R2_MAX, R3_MAX};

const SEARCH_STREAM: u64 = 0;
const CHAOS_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Standard firefly.
    Ff,
    /// Improved firefly (pull toward a random third agent).
    Iff,
    /// Sine cosine algorithm.
    Sca,
    /// The chaotic hybrid.
    Cscf,
}

impl Algorithm {
    pub const ALL: [Self; 4] = [Self::Ff, Self::Iff, Self::Sca, Self::Cscf];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ff => "ff",
            Self::Iff => "iff",
            Self::Sca => "sca",
            Self::Cscf => "cscf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or(Error::UnknownName {
                what: "algorithm",
                name: s.to_string(),
            })
    }
}

/// A parameter that a variant can hand over to a chaotic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TunedParam {
    J,
    K,
    R1,
    R2,
    R3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Chaotic `J`.
    I,
    /// Chaotic `K`.
    II,
    /// Chaotic `r1`.
    III,
    /// Chaotic `r2`.
    IV,
    /// Chaotic `r3`.
    V,
    /// All five at once.
    All,
}

impl Variant {
    pub const SINGLE: [Self; 5] = [Self::I, Self::II, Self::III, Self::IV, Self::V];

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "i",
            Self::II => "ii",
            Self::III => "iii",
            Self::IV => "iv",
            Self::V => "v",
            Self::All => "all",
        }
    }

    pub fn tuned(self) -> &'static [TunedParam] {
        use TunedParam::*;
        match self {
            Self::I => &[J],
            Self::II => &[K],
            Self::III => &[R1],
            Self::IV => &[R2],
            Self::V => &[R3],
            Self::All => &[J, K, R1, R2, R3],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let found = match key.as_str() {
            "i" | "1" => Self::I,
            "ii" | "2" => Self::II,
            "iii" | "3" => Self::III,
            "iv" | "4" => Self::IV,
            "v" | "5" => Self::V,
            "all" | "composite" => Self::All,
            _ => {
                return Err(Error::UnknownName {
                    what: "variant",
                    name: s.to_string(),
                })
            }
        };
        Ok(found)
    }
}

/// A variant together with the map driving its tuned parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantKind {
    pub variant: Variant,
    pub map: ChaoticMapKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub max_iter: usize,
    pub trial_limit: u32,
    pub seed: u64,
    pub variant: Variant,
    pub map: ChaoticMapKind,
    pub firefly: FireflyParams,
    pub sca: ScaParams,
    pub penalty: PenaltyParams,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Cscf,
            population: 20,
            max_iter: 500,
            trial_limit: 10,
            seed: 0,
            variant: Variant::All,
            map: ChaoticMapKind::LOGISTIC,
            firefly: FireflyParams::default(),
            sca: ScaParams::default(),
            penalty: PenaltyParams::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 3 {
            return Err(Error::Config(format!(
                "population must be at least 3, got {}",
                self.population
            )));
        }
        if self.trial_limit < 1 {
            return Err(Error::Config("trial_limit must be at least 1".into()));
        }
        self.firefly.validate()?;
        self.sca.validate()?;
        self.penalty.validate()
    }

    pub fn variant_kind(&self) -> VariantKind {
        VariantKind {
            variant: self.variant,
            map: self.map,
        }
    }
}

/// Chaotic generators for the tuned parameters of one run.
#[derive(Debug, Clone, Default)]
pub struct ChaosSet {
    pub j: Option<ChaoticMapState>,
    pub k: Option<ChaoticMapState>,
    pub r1: Option<ChaoticMapState>,
    pub r2: Option<ChaoticMapState>,
    pub r3: Option<ChaoticMapState>,
}

impl ChaosSet {
    /// One independent generator per tuned parameter, seeds drawn from `rng`.
    pub fn new<R: Rng + ?Sized>(kind: VariantKind, rng: &mut R) -> Result<Self> {
        let mut set = Self::default();
        for param in kind.variant.tuned() {
            let state = ChaoticMapState::from_unit_seed(kind.map, rng.gen::<f64>())?;
            *set.slot(*param) = Some(state);
        }
        Ok(set)
    }

    fn slot(&mut self, param: TunedParam) -> &mut Option<ChaoticMapState> {
        match param {
            TunedParam::J => &mut self.j,
            TunedParam::K => &mut self.k,
            TunedParam::R1 => &mut self.r1,
            TunedParam::R2 => &mut self.r2,
            TunedParam::R3 => &mut self.r3,
        }
    }

    fn draw(slot: &mut Option<ChaoticMapState>) -> Result<Option<f64>> {
        slot.as_mut().map(ChaoticMapState::next_unit).transpose()
    }
}

/// Which half of the hybrid an update uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Firefly,
    SineCosine,
}

/// Population state visible to a single update.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub population: &'a [Agent],
    pub best: &'a [f64],
    pub iter: usize,
    pub max_iter: usize,
    pub bounds: &'a Bounds,
}

/// Index of the brightest agent, lowest index on ties; `x` itself when no
/// agent is strictly brighter.
fn brightest(population: &[Agent], x: usize) -> usize {
    (0..population.len()).fold(x, |b, i| {
        if population[i].is_brighter_than(&population[b]) {
            i
        } else {
            b
        }
    })
}

/// Improved-firefly move of agent `x` toward the brightest agent, with
/// `J` and `K` scaled by their chaotic generators when present. The brightest
/// agent keeps only the perturbation and third-agent terms.
pub fn firefly_step<R: Rng + ?Sized>(
    ctx: &StepContext<'_>,
    x: usize,
    params: &FireflyParams,
    chaos: &mut ChaosSet,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let y = brightest(ctx.population, x);
    let a = firefly::pick_partner(rng, ctx.population.len(), x, y)?;
    let mut tuned = *params;
    if let Some(u) = ChaosSet::draw(&mut chaos.j)? {
        tuned.j = params.j * u;
    }
    if let Some(u) = ChaosSet::draw(&mut chaos.k)? {
        tuned.k = params.k * u;
    }
    firefly::move_improved(ctx.population, x, y, a, &tuned, ctx.bounds, rng)
}

/// Sine cosine move of agent `x` around the best-so-far position. `r1` is a
/// chaotic number in `[0, 1]` when chaos-driven and follows the linear
/// schedule otherwise; `r2` and `r3` are per-coordinate and rescaled onto
/// `[0, 2 pi]` and `[0, 2]` when chaos-driven.
pub fn sca_branch_step<R: Rng + ?Sized>(
    ctx: &StepContext<'_>,
    x: usize,
    params: &ScaParams,
    chaos: &mut ChaosSet,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let r1 = match ChaosSet::draw(&mut chaos.r1)? {
        Some(u) => u,
        None => sca::r1_schedule(ctx.iter, ctx.max_iter.max(1), params.a_const),
    };
    let dim = ctx.bounds.dim();
    let mut draws = Vec::with_capacity(dim);
    for _ in 0..dim {
        let r2 = match ChaosSet::draw(&mut chaos.r2)? {
            Some(u) => R2_MAX * u,
            None => R2_MAX * rng.gen::<f64>(),
        };
        let r3 = match ChaosSet::draw(&mut chaos.r3)? {
            Some(u) => R3_MAX * u,
            None => R3_MAX * rng.gen::<f64>(),
        };
        let r4 = rng.gen::<f64>();
        draws.push(ScaDraw { r1, r2, r3, r4 });
    }
    sca::sca_step(&ctx.population[x].position, ctx.best, &draws, ctx.bounds)
}

/// One update of agent `x` on the given branch of the hybrid.
pub fn step_variant<R: Rng + ?Sized>(
    ctx: &StepContext<'_>,
    x: usize,
    branch: Branch,
    config: &OptimizerConfig,
    chaos: &mut ChaosSet,
    rng: &mut R,
) -> Result<Vec<f64>> {
    match branch {
        Branch::Firefly => firefly_step(ctx, x, &config.firefly, chaos, rng),
        Branch::SineCosine => sca_branch_step(ctx, x, &config.sca, chaos, rng),
    }
}

struct Scored {
    eval: Evaluation,
    fitness: Fitness,
}

fn score(
    problem: &dyn Problem,
    x: &[f64],
    penalty: &PenaltyParams,
    noise: &mut ChaCha8Rng,
) -> Result<Scored> {
    let eval = problem.evaluate(x, noise)?;
    let fitness = penalized_fitness(eval.cost, &eval.constraints, penalty);
    Ok(Scored { eval, fitness })
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

struct Incumbent {
    position: Vec<f64>,
    fitness: Fitness,
    eval: Evaluation,
}

/// Runs `config.algorithm` on `problem`.
///
/// Evaluates `population * (1 + max_iter)` candidates: the initial population
/// plus one candidate per agent per iteration.
pub fn optimize(problem: &dyn Problem, config: &OptimizerConfig) -> Result<RunRecord> {
    config.validate()?;
    let start = Instant::now();
    let bounds = problem.bounds().clone();
    let dim = bounds.dim();
    let mut rng = stream(config.seed, SEARCH_STREAM);
    let mut noise = stream(config.seed, NOISE_STREAM);
    let hybrid = config.algorithm == Algorithm::Cscf;
    let mut chaos = if hybrid {
        ChaosSet::new(config.variant_kind(), &mut stream(config.seed, CHAOS_STREAM))?
    } else {
        ChaosSet::default()
    };

    let mut population = Vec::with_capacity(config.population);
    let mut initial = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let position: Vec<f64> = (0..dim)
            .map(|k| rng.gen_range(bounds.lower()[k]..=bounds.upper()[k]))
            .collect();
        let s = score(problem, &position, &config.penalty, &mut noise)?;
        population.push(Agent {
            position,
            fitness: s.eval.cost,
            penalized_fitness: s.fitness,
            trial: 0,
        });
        initial.push(s.eval);
    }
    let mut evals = config.population as u64;

    let first = (1..population.len()).fold(0, |b, i| {
        if population[i].is_brighter_than(&population[b]) {
            i
        } else {
            b
        }
    });
    let mut best = Incumbent {
        position: population[first].position.clone(),
        fitness: population[first].penalized_fitness,
        eval: initial.swap_remove(first),
    };

    let constrained = !best.eval.constraints.is_empty();
    let mut curve = Vec::with_capacity(config.max_iter + 1);
    let mut violation_curve = Vec::new();
    let mut record_point = |best: &Incumbent| {
        curve.push(best.fitness.value);
        if constrained {
            violation_curve.push(best.fitness.violation);
        }
    };
    record_point(&best);

    for iter in 0..config.max_iter {
        for x in 0..population.len() {
            let branch = if population[x].trial < config.trial_limit {
                Branch::Firefly
            } else {
                population[x].trial = 0;
                Branch::SineCosine
            };
            let ctx = StepContext {
                population: &population,
                best: &best.position,
                iter,
                max_iter: config.max_iter,
                bounds: &bounds,
            };
            let candidate = match config.algorithm {
                Algorithm::Ff => {
                    let y = brightest(&population, x);
                    firefly::move_standard(&population, x, y, &config.firefly, &bounds, &mut rng)?
                }
                Algorithm::Iff => firefly_step(&ctx, x, &config.firefly, &mut chaos, &mut rng)?,
                Algorithm::Sca => sca_branch_step(&ctx, x, &config.sca, &mut chaos, &mut rng)?,
                Algorithm::Cscf => step_variant(&ctx, x, branch, config, &mut chaos, &mut rng)?,
            };
            let s = score(problem, &candidate, &config.penalty, &mut noise)?;
            evals += 1;

            if s.fitness.better_than(&best.fitness) {
                best = Incumbent {
                    position: candidate.clone(),
                    fitness: s.fitness,
                    eval: s.eval.clone(),
                };
            }
            // the hybrid is greedy; the baselines always move
            let agent = &mut population[x];
            let improved = s.fitness.better_than(&agent.penalized_fitness);
            if improved {
                agent.trial = 0;
            } else {
                agent.trial += 1;
            }
            if improved || !hybrid {
                agent.position = candidate;
                agent.fitness = s.eval.cost;
                agent.penalized_fitness = s.fitness;
            }
        }
        record_point(&best);
    }

    Ok(RunRecord {
        problem: problem.name().to_string(),
        algorithm: config.algorithm,
        variant: hybrid.then_some(config.variant),
        map: hybrid.then(|| config.map.name().to_string()),
        dim,
        replicate: 0,
        seed: config.seed,
        population: config.population,
        max_iter: config.max_iter,
        best_position: problem.decode(&best.position),
        best_fitness: best.fitness.value,
        best_cost: best.eval.cost,
        best_violation: best.fitness.violation,
        best_constraints: best.eval.constraints,
        best_curve: curve,
        violation_curve,
        evals,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Error of one (problem, variant, map) combination over its replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub problem: String,
    pub variant: Variant,
    pub map: ChaoticMapKind,
    pub mae: f64,
    pub replicates: u32,
}

/// Mean rank of a variant across (problem, map) cells, 1 being best.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantRank {
    pub variant: Variant,
    pub mean_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Problem-major, then variant, then map, in the order given.
    pub cells: Vec<SweepCell>,
    /// Sorted best first.
    pub ranking: Vec<VariantRank>,
}

/// Runs every (problem, variant, map) combination of the hybrid for
/// `replicates` seeds starting at `base.seed`, scoring each by the mean
/// absolute error of the best fitness against the problem's reference.
pub fn variant_sweep(
    problems: &[&dyn Problem],
    variants: &[Variant],
    maps: &[ChaoticMapKind],
    replicates: u32,
    base: &OptimizerConfig,
) -> Result<SweepResult> {
    if replicates < 1 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    if problems.is_empty() || variants.is_empty() || maps.is_empty() {
        return Err(Error::Config("sweep needs problems, variants and maps".into()));
    }
    let mut cells = Vec::with_capacity(problems.len() * variants.len() * maps.len());
    for problem in problems {
        let reference = problem.reference().ok_or_else(|| {
            Error::Config(format!("problem `{}` has no reference optimum", problem.name()))
        })?;
        for &variant in variants {
            for &map in maps {
                let mut best = Vec::with_capacity(replicates as usize);
                for r in 0..replicates {
                    let config = OptimizerConfig {
                        algorithm: Algorithm::Cscf,
                        variant,
                        map,
                        seed: base.seed.wrapping_add(u64::from(r)),
                        ..base.clone()
                    };
                    best.push(optimize(*problem, &config)?.best_fitness);
                }
                cells.push(SweepCell {
                    problem: problem.name().to_string(),
                    variant,
                    map,
                    mae: crate::analysis::mae(&best, reference)?,
                    replicates,
                });
            }
        }
    }

    let mut rank_sums = vec![0.0; variants.len()];
    let groups = problems.len() * maps.len();
    for p in 0..problems.len() {
        for m in 0..maps.len() {
            let errors: Vec<f64> = (0..variants.len())
                .map(|v| cells[(p * variants.len() + v) * maps.len() + m].mae)
                .collect();
            for (sum, rank) in rank_sums.iter_mut().zip(crate::analysis::midranks(&errors)) {
                *sum += rank;
            }
        }
    }
    let mut ranking: Vec<VariantRank> = variants
        .iter()
        .zip(rank_sums)
        .map(|(&variant, sum)| VariantRank {
            variant,
            mean_rank: sum / groups as f64,
        })
        .collect();
    ranking.sort_by(|a, b| a.mean_rank.total_cmp(&b.mean_rank));
    Ok(SweepResult { cells, ranking })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{BenchmarkId, ObjectiveProblem};

    fn sphere(dim: usize) -> ObjectiveProblem {
        ObjectiveProblem::new(BenchmarkId::new(6).unwrap(), dim).unwrap()
    }

    fn small(algorithm: Algorithm) -> OptimizerConfig {
        OptimizerConfig {
            algorithm,
            population: 8,
            max_iter: 30,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        for v in Variant::SINGLE.into_iter().chain([Variant::All]) {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("3".parse::<Variant>().unwrap(), Variant::III);
        assert_eq!("composite".parse::<Variant>().unwrap(), Variant::All);
        assert!("vi".parse::<Variant>().is_err());
    }

    #[test]
    fn single_variants_tune_one_parameter() {
        for v in Variant::SINGLE {
            assert_eq!(v.tuned().len(), 1);
        }
        assert_eq!(Variant::All.tuned().len(), 5);
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            population: 2,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = OptimizerConfig {
            trial_limit: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(optimize(&sphere(2), &bad).is_err());
    }

    #[test]
    fn zero_iterations_keep_initial_best() {
        let config = OptimizerConfig {
            max_iter: 0,
            ..small(Algorithm::Cscf)
        };
        let r = optimize(&sphere(3), &config).unwrap();
        assert_eq!(r.best_curve, vec![r.best_fitness]);
        assert_eq!(r.evals, 8);
    }

    #[test]
    fn budget_curve_and_determinism() {
        for algorithm in Algorithm::ALL {
            let config = small(algorithm);
            let a = optimize(&sphere(4), &config).unwrap();
            let b = optimize(&sphere(4), &config).unwrap();
            assert_eq!(a.without_timing(), b.without_timing());
            assert_eq!(a.evals, 8 * 31);
            assert_eq!(a.best_curve.len(), 31);
            assert_eq!(*a.best_curve.last().unwrap(), a.best_fitness);
            assert!(a.is_monotone(), "{algorithm}");
            assert_eq!(a.variant.is_some(), algorithm == Algorithm::Cscf);
        }
    }

    #[test]
    fn sphere_small_dimension_converges() {
        let r = optimize(&sphere(2), &OptimizerConfig::default()).unwrap();
        assert!(r.best_fitness < 1e-2, "{}", r.best_fitness);
    }

    #[test]
    fn sweep_mae_against_reference() {
        let p = sphere(2);
        let problems: [&dyn Problem; 1] = [&p];
        let base = OptimizerConfig {
            population: 5,
            max_iter: 3,
            ..Default::default()
        };
        let sweep = variant_sweep(
            &problems,
            &[Variant::I, Variant::III],
            &[ChaoticMapKind::LOGISTIC, ChaoticMapKind::SINE],
            2,
            &base,
        )
        .unwrap();
        assert_eq!(sweep.cells.len(), 4);
        assert!(sweep.cells.iter().all(|c| c.mae >= 0.0 && c.replicates == 2));
        assert_eq!(sweep.ranking.len(), 2);
        let total: f64 = sweep.ranking.iter().map(|r| r.mean_rank).sum();
        assert!((total - 3.0).abs() < 1e-12);
        assert!(variant_sweep(&problems, &[Variant::I], &[ChaoticMapKind::LOGISTIC], 0, &base).is_err());
    }
}
