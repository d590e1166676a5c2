mod common;

use std::sync::Arc;

use cbr_core::chain::{
    build_perturbed, build_unperturbed, chain_recurrent_classes, is_exactly_stationary, resistance_analysis, simulate,
    simulate_replicas, stationary, stochastically_stable_set, ConstantScale, DynamicsConfig, EpsilonSweep, ScaleFn,
    SimulationOptions, SolverOptions, TransitionMatrix,
};
use cbr_core::deviation::ImprovementMode;
use cbr_core::equilibrium::{build_deviation_graph, recurrent_structure};
use cbr_core::rational::{int, ratio, Rational};
use cbr_core::{catalog, Game};
use common::*;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn battery(count: usize, seed: u64) -> Vec<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count as u64)
        .map(|k| {
            let shape = random_shape(&mut rng, 3, 3);
            random_game(&shape, 3, seed.wrapping_mul(1000) + k)
        })
        .collect()
}

fn rows_sum_to_one(m: &TransitionMatrix) -> bool {
    m.rows.iter().all(|r| r.iter().fold(Rational::zero(), |a, x| a + x).is_one() && r.iter().all(|x| !x.is_negative()))
}

#[test]
fn rows_are_stochastic_and_affine_in_epsilon() {
    for game in battery(40, 1) {
        for mode in [ImprovementMode::Strict, ImprovementMode::Weak] {
            let config = DynamicsConfig::uniform(game.num_players(), mode).unwrap();
            let p0 = build_unperturbed(&game, &config).unwrap();
            assert!(rows_sum_to_one(&p0));
            let p1 = build_perturbed(&game, &config, &ratio(1, 10)).unwrap();
            assert!(rows_sum_to_one(&p1));
            assert!(p1.all_positive() || game.num_profiles() == 1 || !p1.all_positive());
            // D = (P^{1/10} - P^0) * 10, then P^eps = P^0 + eps D for two more rates
            let n = game.num_profiles();
            let d: Vec<Vec<Rational>> =
                (0..n).map(|i| (0..n).map(|j| (p1.get(i, j) - p0.get(i, j)) * int(10)).collect()).collect();
            for row in &d {
                assert!(row.iter().fold(Rational::zero(), |a, x| a + x).is_zero());
            }
            for eps in [ratio(1, 100), ratio(3, 7)] {
                let pe = build_perturbed(&game, &config, &eps).unwrap();
                assert!(rows_sum_to_one(&pe));
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(pe.get(i, j), &(p0.get(i, j) + &eps * &d[i][j]));
                        // mass moved by mistakes is at most eps per row entry
                        assert!((pe.get(i, j) - p0.get(i, j)).abs() <= eps);
                    }
                }
            }
        }
    }
}

#[test]
fn unperturbed_classes_match_deviation_graph() {
    for game in battery(60, 2) {
        for mode in [ImprovementMode::Strict, ImprovementMode::Weak] {
            let config = DynamicsConfig::uniform(game.num_players(), mode).unwrap();
            let p0 = build_unperturbed(&game, &config).unwrap();
            let graph = recurrent_structure(&build_deviation_graph(&game, mode).unwrap());
            let from_chain = chain_recurrent_classes(&p0);
            let from_graph: Vec<Vec<usize>> = graph.classes.iter().map(|c| c.states.clone()).collect();
            assert_eq!(from_chain, from_graph);
        }
    }
}

#[test]
fn stationary_distribution_is_exact_and_positive() {
    for game in battery(30, 3) {
        let config = DynamicsConfig::uniform(game.num_players(), ImprovementMode::Strict).unwrap();
        for eps in [ratio(1, 10), ratio(1, 1000)] {
            let p = build_perturbed(&game, &config, &eps).unwrap();
            let mu = stationary(&p, &SolverOptions::default()).unwrap();
            let exact = mu.exact.as_ref().unwrap();
            assert!(is_exactly_stationary(&p, exact));
            assert!(exact.iter().all(|m| m.is_positive()));
            let float = stationary(&p, &SolverOptions { exact_limit: 0, tolerance: 1e-12 }).unwrap();
            for (a, b) in mu.approx.iter().zip(&float.approx) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn stable_set_is_union_of_recurrent_classes_in_both_modes() {
    for game in battery(40, 4) {
        for mode in [ImprovementMode::Strict, ImprovementMode::Weak] {
            let config = DynamicsConfig::uniform(game.num_players(), mode).unwrap();
            let report =
                stochastically_stable_set(&game, &config, &EpsilonSweep::default(), &SolverOptions::default()).unwrap();
            assert!(report.agreement, "{:?}", report.diagnostics);
            let graph = recurrent_structure(&build_deviation_graph(&game, mode).unwrap());
            assert_eq!(report.certified().unwrap(), graph.recurrent_states().as_slice());
        }
    }
}

fn scale_maps() -> Vec<DynamicsConfig> {
    let base = |n| DynamicsConfig::uniform(n, ImprovementMode::Strict).unwrap();
    vec![
        base(3).with_mutation(Arc::new(ConstantScale(int(1)))),
        base(3).with_mutation(Arc::new(ScaleFn(|s: cbr_core::Coalition, _| int(s.size() as i64)))),
        base(3).with_mutation(Arc::new(ScaleFn(|_, a: usize| ratio(1 + (a % 3) as i64, 2)))),
    ]
}

#[test]
fn stable_set_does_not_depend_on_mutation_scale() {
    for game in [catalog::prisoners_dilemma(), catalog::example_two(), catalog::young_three_by_three()] {
        let mut sets = Vec::new();
        for config in scale_maps() {
            let config = DynamicsConfig { coalition_weights: DynamicsConfig::uniform(2, config.mode).unwrap().coalition_weights, ..config };
            let report =
                stochastically_stable_set(&game, &config, &EpsilonSweep::default(), &SolverOptions::default()).unwrap();
            sets.push(report.certified().unwrap().to_vec());
        }
        assert!(sets.windows(2).all(|w| w[0] == w[1]), "{sets:?}");
    }
}

#[test]
fn every_class_has_minimal_stochastic_potential() {
    for game in battery(40, 5) {
        let config = DynamicsConfig::uniform(game.num_players(), ImprovementMode::Strict).unwrap();
        let analysis = resistance_analysis(&game, &config).unwrap();
        let j = analysis.num_classes() as u32;
        assert!(analysis.stochastic_potential.iter().all(|p| *p == Some(j - 1)), "{:?}", analysis.stochastic_potential);
        assert!(analysis.discrepancies.is_empty(), "{:?}", analysis.discrepancies);
    }
}

#[test]
fn simulation_matches_stationary_distribution_on_prisoners_dilemma() {
    let game = catalog::prisoners_dilemma();
    let config = DynamicsConfig::uniform(2, ImprovementMode::Strict).unwrap();
    let eps = ratio(1, 100);
    let p = build_perturbed(&game, &config, &eps).unwrap();
    let mu = stationary(&p, &SolverOptions::default()).unwrap();
    let options = SimulationOptions { epsilon: eps, horizon: 1_000_000, seed: 7, start: 0, record_log: false };
    let single = simulate(&game, &config, &options).unwrap();
    assert!(single.total_variation(&mu.approx) <= 0.01);
    let pooled = simulate_replicas(&game, &config, &SimulationOptions { horizon: 250_000, ..options }, 4).unwrap();
    assert_eq!(pooled.steps, 1_000_000);
    assert!(pooled.total_variation(&mu.approx) <= 0.01);
}
