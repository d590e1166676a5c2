#![allow(dead_code)]

use cbr_core::deviation::ImprovementMode;
use cbr_core::game::{Game, Profile};
use cbr_core::rational::{int, Rational};
use cbr_core::Coalition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random game with integer payoffs in `-range..=range`. Small ranges give ties.
pub fn random_game(counts: &[usize], range: i64, seed: u64) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Game::from_fn(counts, |_| (0..counts.len()).map(|_| int(rng.gen_range(-range..=range))).collect()).unwrap()
}

/// Action counts with `1..=max_players` players and `1..=max_actions` actions each.
pub fn random_shape(rng: &mut ChaCha8Rng, max_players: usize, max_actions: usize) -> Vec<usize> {
    let n = rng.gen_range(1..=max_players);
    (0..n).map(|_| rng.gen_range(1..=max_actions)).collect()
}

/// Brute force: every profile that agrees with `a` off the coalition.
pub fn oracle_reachable(game: &Game, s: Coalition, a: usize) -> Vec<usize> {
    let pa = game.profile_at(a);
    (0..game.num_profiles())
        .filter(|&b| {
            let pb = game.profile_at(b);
            (0..game.num_players()).all(|i| s.contains(i) || pa.0[i] == pb.0[i])
        })
        .collect()
}

pub fn oracle_improves(game: &Game, s: Coalition, a: usize, b: usize, mode: ImprovementMode) -> bool {
    let members: Vec<usize> = (0..game.num_players()).filter(|&i| s.contains(i)).collect();
    let gt = |i: usize| game.payoff_at(i, b) > game.payoff_at(i, a);
    let ge = |i: usize| game.payoff_at(i, b) >= game.payoff_at(i, a);
    match mode {
        ImprovementMode::Strict => members.iter().all(|&i| gt(i)),
        ImprovementMode::Weak => members.iter().all(|&i| ge(i)) && members.iter().any(|&i| gt(i)),
    }
}

pub fn oracle_improving(game: &Game, s: Coalition, a: usize, mode: ImprovementMode) -> Vec<usize> {
    oracle_reachable(game, s, a)
        .into_iter()
        .filter(|&b| oracle_improves(game, s, a, b, mode))
        .collect()
}

pub fn all_coalitions(n: usize) -> Vec<Coalition> {
    (1u32..(1 << n)).map(|m| Coalition::from_mask(m).unwrap()).collect()
}

/// Brute-force equilibria: no coalition has any improving move.
pub fn oracle_equilibria(game: &Game, mode: ImprovementMode) -> Vec<usize> {
    let cs = all_coalitions(game.num_players());
    (0..game.num_profiles())
        .filter(|&a| cs.iter().all(|&s| oracle_improving(game, s, a, mode).is_empty()))
        .collect()
}

/// `b` Pareto dominates `a`: all weakly better and one strictly (weak = false),
/// or all strictly better (strict = true).
pub fn pareto_dominates(game: &Game, b: usize, a: usize, strict: bool) -> bool {
    let n = game.num_players();
    if strict {
        (0..n).all(|i| game.payoff_at(i, b) > game.payoff_at(i, a))
    } else {
        (0..n).all(|i| game.payoff_at(i, b) >= game.payoff_at(i, a))
            && (0..n).any(|i| game.payoff_at(i, b) > game.payoff_at(i, a))
    }
}

pub fn named(game: &Game, names: &[&str]) -> usize {
    game.index_of(&game.profile_named(names).expect("profile name"))
}

pub fn profile(game: &Game, actions: &[usize]) -> usize {
    game.index_of(&Profile(actions.to_vec()))
}

pub fn rat(s: &str) -> Rational {
    cbr_core::rational::parse_rational(s).unwrap()
}
