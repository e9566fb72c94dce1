use cscf::analysis::{wilcoxon_rank_sum, wilcoxon_signed_rank};
use cscf::engineering::{penalized_fitness, PenaltyMode, PenaltyParams};
use cscf::firefly::{attractiveness, move_improved, move_standard, Agent, FireflyParams};
use cscf::sca::{r1_schedule, sca_step, ScaDraw};
use cscf::{
    optimize, Algorithm, BenchmarkId, Bounds, ChaoticMapKind, ChaoticMapState, Fitness,
    ObjectiveProblem, OptimizerConfig, Problem, RunRecord, Variant,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agent(position: Vec<f64>) -> Agent {
    Agent {
        position,
        fitness: 0.0,
        penalized_fitness: Fitness::scalar(0.0),
        trial: 0,
    }
}

fn map_kind() -> impl Strategy<Value = ChaoticMapKind> {
    (0..12usize).prop_map(|i| ChaoticMapKind::ALL[i])
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![
        Just(Variant::I),
        Just(Variant::II),
        Just(Variant::III),
        Just(Variant::IV),
        Just(Variant::V),
        Just(Variant::All),
    ]
}

fn algorithm() -> impl Strategy<Value = Algorithm> {
    (0..4usize).prop_map(|i| Algorithm::ALL[i])
}

/// A box, a population inside it, and firefly parameters.
fn swarm() -> impl Strategy<Value = (Bounds, Vec<Vec<f64>>, FireflyParams)> {
    (1..5usize, 3..7usize).prop_flat_map(|(dim, n)| {
        (
            prop::collection::vec(-20.0..0.0f64, dim),
            prop::collection::vec(0.5..30.0f64, dim),
            prop::collection::vec(prop::collection::vec(0.0..1.0f64, dim), n),
            (0.1..2.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.1..2.0f64),
        )
            .prop_map(|(lo, width, unit, (alpha0, beta, j, k, eta_scale))| {
                let hi: Vec<f64> = lo.iter().zip(&width).map(|(l, w)| l + w).collect();
                let population = unit
                    .iter()
                    .map(|u| u.iter().enumerate().map(|(d, t)| lo[d] + t * width[d]).collect())
                    .collect();
                let params = FireflyParams { alpha0, beta, j, k, eta_scale };
                (Bounds::new(lo, hi).unwrap(), population, params)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chaos_is_deterministic_and_unit_bounded(kind in map_kind(), u in 0.0..1.0f64) {
        let mut a = ChaoticMapState::from_unit_seed(kind, u).unwrap();
        let mut b = ChaoticMapState::from_unit_seed(kind, u).unwrap();
        for _ in 0..2000 {
            let x = a.next_unit().unwrap();
            prop_assert_eq!(x.to_bits(), b.next_unit().unwrap().to_bits());
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert_eq!(a.step_count(), 2000);
    }

    #[test]
    fn attractiveness_decays_with_distance(
        alpha0 in 0.01..5.0f64,
        beta in 0.001..5.0f64,
        mut d in prop::collection::vec(0.0..10.0f64, 2..20),
    ) {
        d.sort_by(f64::total_cmp);
        for w in d.windows(2) {
            prop_assert!(attractiveness(alpha0, beta, w[1]) <= attractiveness(alpha0, beta, w[0]));
        }
    }

    #[test]
    fn moves_stay_in_bounds((bounds, positions, params) in swarm(), seed in any::<u64>()) {
        let pop: Vec<Agent> = positions.into_iter().map(agent).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let next = move_improved(&pop, 0, 1, 2, &params, &bounds, &mut rng).unwrap();
        prop_assert!(bounds.contains(&next));
        let next = move_standard(&pop, 2, 0, &params, &bounds, &mut rng).unwrap();
        prop_assert!(bounds.contains(&next));
    }

    #[test]
    fn zero_k_matches_standard_move((bounds, positions, params) in swarm(), seed in any::<u64>()) {
        let pop: Vec<Agent> = positions.into_iter().map(agent).collect();
        let params = FireflyParams { k: 0.0, ..params };
        let a = move_standard(&pop, 0, 1, &params, &bounds, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = move_improved(&pop, 0, 1, 2, &params, &bounds, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn noiseless_move_lies_on_segment((bounds, positions, params) in swarm(), seed in any::<u64>()) {
        let pop: Vec<Agent> = positions.into_iter().map(agent).collect();
        let params = FireflyParams { j: 0.0, k: 0.0, alpha0: params.alpha0.min(1.0), ..params };
        let next = move_standard(&pop, 0, 1, &params, &bounds, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (x, y) = (&pop[0].position, &pop[1].position);
        // a common t in [0, 1] with next = x + t (y - x)
        let mut t: Option<f64> = None;
        for k in 0..x.len() {
            let gap = y[k] - x[k];
            if gap.abs() > 1e-9 {
                let tk = (next[k] - x[k]) / gap;
                prop_assert!((-1e-9..=1.0 + 1e-9).contains(&tk));
                if let Some(t0) = t {
                    prop_assert!((tk - t0).abs() < 1e-6);
                }
                t = Some(tk);
            } else {
                prop_assert!((next[k] - x[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sca_step_is_bounded_by_its_amplitude(
        x in prop::collection::vec(-10.0..10.0f64, 1..6),
        seed in any::<u64>(),
        r1 in 0.0..2.0f64,
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = x.len();
        let bounds = Bounds::uniform(dim, -10.0, 10.0).unwrap();
        let dest: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let draws: Vec<ScaDraw> = (0..dim).map(|_| ScaDraw::random(&mut rng, r1)).collect();
        let next = sca_step(&x, &dest, &draws, &bounds).unwrap();
        for k in 0..dim {
            let limit = r1 * (draws[k].r3 * dest[k] - x[k]).abs();
            prop_assert!((next[k] - x[k]).abs() <= limit * (1.0 + 1e-12) + 1e-12);
            prop_assert!((0.0..=2.0 * std::f64::consts::PI).contains(&draws[k].r2));
            prop_assert!((0.0..=2.0).contains(&draws[k].r3));
        }
    }

    #[test]
    fn schedule_endpoints_are_exact(max_iter in 1..10_000usize, a in 0.1..10.0f64) {
        prop_assert_eq!(r1_schedule(0, max_iter, a), a);
        prop_assert_eq!(r1_schedule(max_iter, max_iter, a), 0.0);
        let mid = r1_schedule(max_iter / 2, max_iter, a);
        prop_assert!((0.0..=a).contains(&mid));
    }

    #[test]
    fn feasible_beats_infeasible(
        feasible_cost in -1e6..1e6f64,
        infeasible_cost in -1e6..1e6f64,
        excess in 1e-9..1e3f64,
    ) {
        let rules = PenaltyParams::default();
        let ok = penalized_fitness(feasible_cost, &[-1.0, 0.0], &rules);
        let bad = penalized_fitness(infeasible_cost, &[excess, -1.0], &rules);
        prop_assert!(ok.better_than(&bad));
    }

    #[test]
    fn static_penalty_grows_with_violation(cost in -100.0..100.0f64, g in 0.01..10.0f64, dg in 0.01..10.0f64) {
        let p = PenaltyParams { mode: PenaltyMode::StaticPenalty, weight: 10.0 };
        let a = penalized_fitness(cost, &[g, -1.0], &p);
        let b = penalized_fitness(cost, &[g + dg, -1.0], &p);
        prop_assert!(b.value > a.value);
    }

    #[test]
    fn rank_sum_identities(
        a in prop::collection::vec(0..8i32, 1..15),
        b in prop::collection::vec(0..8i32, 1..15),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let ab = wilcoxon_rank_sum(&a, &b).unwrap();
        let ba = wilcoxon_rank_sum(&b, &a).unwrap();
        let n = (a.len() + b.len()) as f64;
        prop_assert!((ab.r_plus + ab.r_minus - n * (n + 1.0) / 2.0).abs() < 1e-9);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        prop_assert_eq!(wilcoxon_rank_sum(&a, &a).unwrap().p_value, 1.0);
    }

    #[test]
    fn signed_rank_identities(pairs in prop::collection::vec((0..6i32, 0..6i32), 1..30)) {
        let a: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
        let b: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        let m = pairs.iter().filter(|p| p.0 != p.1).count() as f64;
        match wilcoxon_signed_rank(&a, &b) {
            Ok(r) => {
                prop_assert!((r.r_plus + r.r_minus - m * (m + 1.0) / 2.0).abs() < 1e-9);
                prop_assert!((0.0..=1.0).contains(&r.p_value));
                let swapped = wilcoxon_signed_rank(&b, &a).unwrap();
                prop_assert_eq!(swapped.r_plus, r.r_minus);
                prop_assert!((swapped.p_value - r.p_value).abs() < 1e-12);
            }
            Err(_) => prop_assert_eq!(m, 0.0),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn runs_are_monotone_budgeted_and_reproducible(
        algorithm in algorithm(),
        variant in variant(),
        map in map_kind(),
        function in 1..=20u8,
        population in 3..9usize,
        max_iter in 0..25usize,
        trial_limit in 1..6u32,
        seed in any::<u64>(),
    ) {
        let id = BenchmarkId::new(function).unwrap();
        let problem = ObjectiveProblem::new(id, id.min_dim().max(3)).unwrap();
        let config = OptimizerConfig {
            algorithm, variant, map, population, max_iter, trial_limit, seed,
            ..Default::default()
        };
        let r = optimize(&problem, &config).unwrap();
        prop_assert_eq!(r.evals, (population * (1 + max_iter)) as u64);
        prop_assert_eq!(r.best_curve.len(), max_iter + 1);
        prop_assert!(r.best_curve.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*r.best_curve.last().unwrap(), r.best_fitness);
        prop_assert!(problem.bounds().contains(&r.best_position));
        let again = optimize(&problem, &config).unwrap();
        prop_assert_eq!(r.without_timing(), again.without_timing());

        let line = serde_json::to_string(&r).unwrap();
        let back: RunRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back, r);
    }
}
