//! Acceptance criteria 1-10. Prints one line per criterion and exits nonzero
//! if any fails. Run with `cargo test -p cbr-core --test acceptance`.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use cbr_core::chain::{
    build_perturbed, build_unperturbed, chain_recurrent_classes, is_exactly_stationary, resistance_analysis, simulate,
    stationary, stochastically_stable_set, DynamicsConfig, EpsilonSweep, ScaleFn, SimulationOptions, SolverOptions,
    StabilityReport, MAX_TREE_CLASSES,
};
use cbr_core::deviation::ImprovementMode::{self, Strict, Weak};
use cbr_core::dominance::{dominance_2x2, dominance_symmetric};
use cbr_core::equilibrium::{build_deviation_graph, find_equilibria_scan, recurrent_structure, ClassKind, ScanOptions};
use cbr_core::game::Profile;
use cbr_core::netform::{find_strongly_stable, obtainable, Network, NetworkGame};
use cbr_core::rational::{int, ratio, Rational};
use cbr_core::{catalog, Coalition, CoalitionalModel, Game};
use common::*;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stable(model: &dyn CoalitionalModel, config: &DynamicsConfig) -> Result<StabilityReport, String> {
    stochastically_stable_set(model, config, &EpsilonSweep::default(), &SolverOptions::default()).map_err(|e| e.to_string())
}

fn default_config(n: usize, mode: ImprovementMode) -> DynamicsConfig {
    DynamicsConfig::uniform(n, mode).unwrap()
}

fn scan(model: &dyn CoalitionalModel, mode: ImprovementMode) -> Vec<usize> {
    find_equilibria_scan(model, mode, ScanOptions::default()).unwrap()
}

fn labels(model: &dyn CoalitionalModel, states: &[usize]) -> String {
    let v: Vec<String> = states.iter().map(|&s| model.state_label(s)).collect();
    format!("{{{}}}", v.join(" "))
}

fn criterion_1() -> Outcome {
    let pd = catalog::prisoners_dilemma();
    ensure(scan(&pd, Strict).is_empty() && scan(&pd, Weak).is_empty(), || "SNE or SSNE set not empty".into())?;
    let graph = build_deviation_graph(&pd, Strict).unwrap();
    let expected = [
        (["a1", "b1"], ["a1", "b2"], "{2}"),
        (["a1", "b1"], ["a2", "b1"], "{1}"),
        (["a2", "b1"], ["a2", "b2"], "{2}"),
        (["a1", "b2"], ["a2", "b2"], "{1}"),
        (["a2", "b2"], ["a1", "b1"], "{1,2}"),
    ];
    ensure(graph.edge_count() == 5, || format!("{} edges, expected 5", graph.edge_count()))?;
    for (from, to, label) in expected {
        let got = graph.labels(named(&pd, &from), named(&pd, &to)).map(|l| {
            l.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        });
        ensure(got.as_deref() == Some(label), || format!("edge {from:?}->{to:?} labelled {got:?}, expected {label}"))?;
    }
    let rs = recurrent_structure(&graph);
    ensure(
        rs.classes.len() == 1 && rs.classes[0].kind == ClassKind::ClosedCycle && rs.classes[0].states == [0, 1, 2, 3],
        || format!("recurrent structure {:?}", rs.classes),
    )?;
    let report = stable(&pd, &default_config(2, Strict))?;
    let set = report.certified().map_err(|e| e.to_string())?;
    ensure(set == [0, 1, 2, 3], || format!("stable set {}", labels(&pd, set)))?;
    Ok("no SNE/SSNE; one closed cycle of 4 profiles, 5 labelled edges; stable set = all 4".into())
}

fn criterion_2() -> Outcome {
    let ex2 = catalog::example_two();
    let sne = scan(&ex2, Strict);
    ensure(sne == [named(&ex2, &["a1", "b1"])], || format!("SNE {}", labels(&ex2, &sne)))?;
    let rs = recurrent_structure(&build_deviation_graph(&ex2, Strict).unwrap());
    let mut cycle: Vec<usize> =
        [["a2", "b2"], ["a2", "b3"], ["a3", "b3"], ["a3", "b2"]].iter().map(|p| named(&ex2, p)).collect();
    cycle.sort_unstable();
    let cycles: Vec<&Vec<usize>> = rs.closed_cycles().map(|c| &c.states).collect();
    ensure(cycles == [&cycle] && rs.classes.len() == 2, || format!("classes {:?}", rs.classes))?;
    ensure(scan(&ex2, Weak).is_empty(), || "SSNE set not empty".into())?;
    let modified = catalog::example_two_with(int(3));
    let ssne = scan(&modified, Weak);
    ensure(ssne == [named(&modified, &["a1", "b1"])], || format!("modified SSNE {}", labels(&modified, &ssne)))?;

    let report = stable(&ex2, &default_config(2, Strict))?;
    let set = report.certified().map_err(|e| e.to_string())?.to_vec();
    let mut recurrent = cycle.clone();
    recurrent.push(named(&ex2, &["a1", "b1"]));
    recurrent.sort_unstable();
    ensure(set == recurrent, || format!("stable set {}", labels(&ex2, &set)))?;
    let transient = report.transient_mass();
    let at_1e4 = report
        .distributions
        .iter()
        .position(|d| d.epsilon == ratio(1, 10_000))
        .map(|k| transient[k])
        .ok_or("sweep lacks 1e-4")?;
    ensure(at_1e4 <= 1e-2, || format!("transient mass {at_1e4:e} at eps=1e-4"))?;
    ensure(transient.windows(2).all(|w| w[1] < w[0]), || format!("transient mass not decreasing: {transient:?}"))?;
    Ok(format!("SNE {{(a1,b1)}} + 4-cycle; no SSNE; modified SSNE {{(a1,b1)}}; 5 stable; transient mass {at_1e4:.3e} at eps=1e-4"))
}

fn criterion_3() -> Outcome {
    let young = catalog::young_three_by_three();
    let s3 = named(&young, &["s3", "s3"]);
    let sne = scan(&young, Strict);
    ensure(sne == [s3], || format!("SNE {}", labels(&young, &sne)))?;
    let dom = dominance_symmetric(&young).map_err(|e| e.to_string())?;
    let want = Some(Profile(vec![2, 2]));
    ensure(dom.payoff_dominant == want, || format!("payoff dominant {:?}", dom.payoff_dominant))?;
    ensure(dom.risk_dominant == want, || format!("risk dominant {:?}", dom.risk_dominant))?;
    let report = stable(&young, &default_config(2, Strict))?;
    let set = report.certified().map_err(|e| e.to_string())?;
    ensure(set == [s3], || format!("stable set {}", labels(&young, set)))?;
    Ok("(s3,s3) unique SNE, payoff and pairwise risk dominant, stable set {(s3,s3)}".into())
}

fn random_coordination(rng: &mut ChaCha8Rng) -> Game {
    // a11 > a21, a22 > a12, b11 > b12, b22 > b21
    let mut v = || rng.gen_range(-5i64..=5);
    loop {
        let (a11, a12, a21, a22, b11, b12, b21, b22) = (v(), v(), v(), v(), v(), v(), v(), v());
        if a11 > a21 && a22 > a12 && b11 > b12 && b22 > b21 {
            return catalog::two_by_two([
                [(int(a11), int(b11)), (int(a12), int(b12))],
                [(int(a21), int(b21)), (int(a22), int(b22))],
            ]);
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut with_pd, mut without) = (0, 0);
    for k in 0..200 {
        let game = random_coordination(&mut rng);
        let dom = dominance_2x2(&game).map_err(|e| format!("game {k}: {e}"))?;
        let sne = scan(&game, Strict);
        let set = stable(&game, &default_config(2, Strict))?.certified().map_err(|e| e.to_string())?.to_vec();
        match dom.payoff_dominant {
            Some(p) => {
                with_pd += 1;
                let idx = game.index_of(&p);
                ensure(sne.contains(&idx), || format!("game {k}: payoff dominant {p:?} not an SNE"))?;
                ensure(set == [idx], || format!("game {k}: stable set {} != payoff dominant", labels(&game, &set)))?;
            }
            None => {
                without += 1;
                let diag = vec![0, 3];
                ensure(diag.iter().all(|d| sne.contains(d)), || format!("game {k}: diagonal not SNE"))?;
                ensure(set == diag, || format!("game {k}: stable set {}", labels(&game, &set)))?;
            }
        }
    }
    Ok(format!("200 games ({with_pd} with a payoff-dominant equilibrium, {without} without)"))
}

fn test_games() -> Vec<(String, Game)> {
    let mut games = vec![
        ("prisoners dilemma".to_string(), catalog::prisoners_dilemma()),
        ("example two".into(), catalog::example_two()),
        ("example two modified".into(), catalog::example_two_with(int(3))),
        ("young 3x3".into(), catalog::young_three_by_three()),
        // constant payoffs: every profile is its own class (J = 4 and J = 8)
        ("constant 2x2".into(), Game::from_fn(&[2, 2], |_| vec![int(0); 2]).unwrap()),
        ("constant 2x2x2".into(), Game::from_fn(&[2, 2, 2], |_| vec![int(0); 3]).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..100 {
        let shape = random_shape(&mut rng, 3, 3);
        games.push((format!("random {k} {shape:?}"), random_game(&shape, 3, 5_000 + k)));
    }
    games
}

fn criterion_5() -> Outcome {
    let (mut checked, mut skipped, mut max_j) = (0, 0, 0);
    for (name, game) in test_games() {
        for mode in [Strict, Weak] {
            let j = recurrent_structure(&build_deviation_graph(&game, mode).unwrap()).classes.len();
            if j > MAX_TREE_CLASSES {
                skipped += 1;
                continue;
            }
            let analysis = resistance_analysis(&game, &default_config(game.num_players(), mode)).map_err(|e| e.to_string())?;
            ensure(analysis.num_classes() == j, || format!("{name}: J mismatch"))?;
            let want = Some(j as u32 - 1);
            ensure(analysis.stochastic_potential.iter().all(|p| *p == want), || {
                format!("{name} ({mode}): potentials {:?}, expected J-1 = {}", analysis.stochastic_potential, j - 1)
            })?;
            checked += 1;
            max_j = max_j.max(j);
        }
    }
    Ok(format!("{checked} game/mode pairs, J up to {max_j}, every class potential = J-1 ({skipped} skipped with J > 8)"))
}

fn rows_exact(rows: &[Vec<Rational>]) -> bool {
    rows.iter().all(|r| r.iter().all(|x| !x.is_negative()) && r.iter().fold(Rational::zero(), |a, x| a + x).is_one())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut states = 0;
    for k in 0..100u64 {
        let shape = random_shape(&mut rng, 3, 3);
        let game = random_game(&shape, 3, 6_000 + k);
        let n = game.num_profiles();
        states += n;
        let config = default_config(game.num_players(), Strict);
        let p0 = build_unperturbed(&game, &config).unwrap();
        ensure(rows_exact(&p0.rows), || format!("game {k}: P0 rows not stochastic"))?;
        let p1 = build_perturbed(&game, &config, &ratio(1, 10)).unwrap();
        let d: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| (p1.get(i, j) - p0.get(i, j)) * int(10)).collect()).collect();
        let report = stable(&game, &config)?;
        for mu in &report.distributions {
            let eps = &mu.epsilon;
            let pe = build_perturbed(&game, &config, eps).unwrap();
            ensure(rows_exact(&pe.rows), || format!("game {k}: P^eps rows not stochastic"))?;
            let affine = (0..n).all(|i| (0..n).all(|j| *pe.get(i, j) == p0.get(i, j) + eps * &d[i][j]));
            ensure(affine, || format!("game {k}: P^eps not affine in eps"))?;
            ensure(chain_recurrent_classes(&pe).len() == 1, || format!("game {k}: stationary distribution not unique"))?;
            let exact = mu.exact.as_ref().ok_or_else(|| format!("game {k}: no exact solution"))?;
            ensure(exact.iter().all(|m| m.is_positive()), || format!("game {k}: mass not positive"))?;
            ensure(is_exactly_stationary(&pe, exact), || format!("game {k}: muP != mu"))?;
        }
        ensure(report.agreement && report.numeric == report.structural, || {
            format!("game {k}: sweep {:?} vs classes {:?}", report.numeric, report.structural)
        })?;
    }
    Ok(format!("100 games ({states} states), 6 rates each: rows exact, affine, mu exact and positive, sweep = classes"))
}

fn criterion_7() -> Outcome {
    let maps = |n: usize| {
        vec![
            default_config(n, Strict),
            default_config(n, Strict).with_mutation(Arc::new(ScaleFn(|s: Coalition, _| int(s.size() as i64)))),
            default_config(n, Strict).with_mutation(Arc::new(ScaleFn(|_, a: usize| ratio(1 + (a % 3) as i64, 2)))),
        ]
    };
    for (name, game) in [
        ("prisoners dilemma", catalog::prisoners_dilemma()),
        ("example two", catalog::example_two()),
        ("young 3x3", catalog::young_three_by_three()),
    ] {
        let mut sets = Vec::new();
        for config in maps(2) {
            sets.push(stable(&game, &config)?.certified().map_err(|e| e.to_string())?.to_vec());
        }
        ensure(sets.windows(2).all(|w| w[0] == w[1]), || format!("{name}: stable sets differ {sets:?}"))?;
    }
    Ok("3 games x 3 mutation scales (1, |S|, (1 + a mod 3)/2): identical stable sets".into())
}

fn criterion_8() -> Outcome {
    let pd = catalog::prisoners_dilemma();
    let config = default_config(2, Strict);
    let eps = ratio(1, 100);
    let mu = stationary(&build_perturbed(&pd, &config, &eps).unwrap(), &SolverOptions::default()).unwrap();
    let options = SimulationOptions { epsilon: eps, horizon: 1_000_000, seed: 20_240_601, start: 0, record_log: false };
    let run = simulate(&pd, &config, &options).map_err(|e| e.to_string())?;
    let tv = run.total_variation(&mu.approx);
    ensure(tv <= 0.01, || format!("total variation {tv:.5} > 0.01"))?;
    Ok(format!("T = 10^6, seed {}: total variation {tv:.5}", options.seed))
}

fn network_values(f: impl Fn(&Network, usize) -> i64) -> NetworkGame {
    NetworkGame::from_fn(3, |g| (0..3).map(|i| int(f(g, i))).collect()).unwrap()
}

/// Definition-level scan: no coalition can obtain a network that all members
/// weakly prefer and some member strictly prefers.
fn direct_strongly_stable(game: &NetworkGame) -> Vec<usize> {
    let count = game.num_networks();
    (0..count)
        .filter(|&g| {
            let from = game.network(g);
            all_coalitions(3).iter().all(|&s| {
                (0..count).filter(|&h| h != g).all(|h| {
                    let to = game.network(h);
                    let members: Vec<usize> = s.members().collect();
                    let improving = members.iter().all(|&i| game.value(i, &to) >= game.value(i, &from))
                        && members.iter().any(|&i| game.value(i, &to) > game.value(i, &from));
                    !(obtainable(&from, &to, s).unwrap() && improving)
                })
            })
        })
        .collect()
}

fn criterion_9() -> Outcome {
    let complete = Network::complete(3).index();
    let empty = Network::empty(3).index();
    for (name, game, want) in [
        ("total edge count", network_values(|g, _| g.edge_count() as i64), complete),
        ("minus own degree", network_values(|g, i| -(g.degree(i) as i64)), empty),
    ] {
        let ss: Vec<usize> = find_strongly_stable(&game).unwrap().iter().map(Network::index).collect();
        ensure(ss == [want], || format!("{name}: strongly stable {ss:?}"))?;
        let config = DynamicsConfig::uniform(3, game.mode()).unwrap();
        let set = stable(&game, &config)?.certified().map_err(|e| e.to_string())?.to_vec();
        ensure(set == [want], || format!("{name}: stable set {set:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut nonempty = 0;
    for k in 0..256 {
        let game = NetworkGame::from_fn(3, |_| (0..3).map(|_| int(rng.gen_range(-3..=3))).collect()).unwrap();
        let ss: Vec<usize> = find_strongly_stable(&game).unwrap().iter().map(Network::index).collect();
        let direct = direct_strongly_stable(&game);
        ensure(ss == direct, || format!("table {k}: {ss:?} vs direct scan {direct:?}"))?;
        nonempty += usize::from(!ss.is_empty());
    }
    Ok(format!("edge count -> complete, -degree -> empty; 256 random tables agree with direct scan ({nonempty} with stable networks)"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut profiles = 0;
    for k in 0..500u64 {
        let shape = random_shape(&mut rng, 4, 4);
        let game = random_game(&shape, 3, 10_000 + k);
        profiles += game.num_profiles();
        let sne = scan(&game, Strict);
        let graph = build_deviation_graph(&game, Strict).unwrap();
        let sinks: Vec<usize> = (0..graph.num_nodes()).filter(|&v| graph.out_degree(v) == 0).collect();
        ensure(sne == sinks, || format!("game {k}: scan {sne:?} vs out-degree-0 {sinks:?}"))?;
        let ssne = scan(&game, Weak);
        ensure(ssne.iter().all(|x| sne.contains(x)), || format!("game {k}: SSNE not within SNE"))?;
    }
    Ok(format!("500 games ({profiles} profiles): scan = out-degree-0 nodes, SSNE within SNE"))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome, Option<u64>); 10] = [
        (1, criterion_1, Some(1)),
        (2, criterion_2, Some(1)),
        (3, criterion_3, Some(1)),
        (4, criterion_4, Some(30)),
        (5, criterion_5, None),
        (6, criterion_6, Some(300)),
        (7, criterion_7, None),
        (8, criterion_8, Some(30)),
        (9, criterion_9, Some(60)),
        (10, criterion_10, Some(120)),
    ];
    let mut failures = 0;
    for (id, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = limit.filter(|&l| elapsed > Duration::from_secs(l));
        let budget = limit.map_or(String::new(), |l| format!(", limit {l} s"));
        let (status, detail) = match (&outcome, over) {
            (Ok(d), None) => ("PASS", d.clone()),
            (Ok(d), Some(l)) => ("FAIL", format!("{d}; runtime over {l} s")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {id:>2}: {status} - {detail} [{:.2} s{budget}]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
