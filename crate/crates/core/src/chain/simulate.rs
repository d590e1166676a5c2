//! Seeded Monte Carlo sample paths of the coalitional better-response process.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::DynamicsConfig;
use super::matrix::{DeviationTable, MoveSets};
use crate::error::{Error, Result};
use crate::game::Coalition;
use crate::model::CoalitionalModel;
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    pub epsilon: Rational,
    pub horizon: u64,
    pub seed: u64,
    pub start: usize,
    /// Keep every step in [`Trajectory::log`]. Off for long runs.
    pub record_log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u64,
    pub coalition: Coalition,
    pub mutated: bool,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// Visits to each state over steps `1..=horizon` (the start is not counted).
    pub visits: Vec<u64>,
    pub log: Vec<StepRecord>,
    pub final_state: usize,
    pub steps: u64,
}

impl Trajectory {
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.visits.iter().sum::<u64>().max(1) as f64;
        self.visits.iter().map(|&v| v as f64 / total).collect()
    }

    /// Pools the occupation counts of an independent replica.
    pub fn merge(&mut self, other: &Trajectory) {
        for (a, b) in self.visits.iter_mut().zip(&other.visits) {
            *a += b;
        }
        self.steps += other.steps;
    }

    pub fn total_variation(&self, distribution: &[f64]) -> f64 {
        0.5 * self
            .frequencies()
            .iter()
            .zip(distribution)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

struct Sampler {
    coalition_cdf: Vec<f64>,
    coalitions: Vec<Coalition>,
    // per state, per coalition
    moves: Vec<Vec<SampledMoves>>,
}

struct SampledMoves {
    improving: Cdf,
    erroneous: Cdf,
    erroneous_moves: Cdf,
    error_probability: f64,
}

struct Cdf {
    states: Vec<usize>,
    cumulative: Vec<f64>,
}

impl Cdf {
    fn new(weighted: &[(usize, Rational)]) -> Self {
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(weighted.len());
        for (_, w) in weighted {
            acc += to_f64(w);
            cumulative.push(acc);
        }
        Cdf { states: weighted.iter().map(|(s, _)| *s).collect(), cumulative }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        let total = *self.cumulative.last()?;
        let u = rng.gen::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.states.len() - 1);
        Some(self.states[k])
    }
}

fn pick<R: Rng>(cumulative: &[f64], rng: &mut R) -> usize {
    let u = rng.gen::<f64>() * cumulative.last().copied().unwrap_or(1.0);
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

impl Sampler {
    fn new(table: &DeviationTable, epsilon: &Rational) -> Self {
        let mut acc = 0.0;
        let coalition_cdf = table
            .coalition_weights
            .iter()
            .map(|(_, p)| {
                acc += to_f64(p);
                acc
            })
            .collect();
        let moves = table
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m: &MoveSets| SampledMoves {
                        improving: Cdf::new(&m.improving),
                        erroneous: Cdf::new(&m.erroneous),
                        erroneous_moves: Cdf::new(&m.erroneous_moves),
                        error_probability: to_f64(&(&m.scale * epsilon)),
                    })
                    .collect()
            })
            .collect();
        Sampler {
            coalition_cdf,
            coalitions: table.coalition_weights.iter().map(|(s, _)| *s).collect(),
            moves,
        }
    }

    fn step<R: Rng>(&self, state: usize, rng: &mut R) -> (Coalition, bool, usize) {
        let k = pick(&self.coalition_cdf, rng);
        let m = &self.moves[state][k];
        let mutated = m.error_probability > 0.0 && rng.gen::<f64>() < m.error_probability;
        let has_improvement = !m.improving.states.is_empty();
        let next = match (mutated, has_improvement) {
            (false, true) => m.improving.sample(rng),
            (false, false) => None,
            (true, true) => m.erroneous.sample(rng),
            (true, false) => m.erroneous_moves.sample(rng),
        };
        (self.coalitions[k], mutated, next.unwrap_or(state))
    }
}

fn run(sampler: &Sampler, num_states: usize, options: &SimulationOptions, stream: u64) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    rng.set_stream(stream);
    let mut visits = vec![0u64; num_states];
    let mut log = Vec::new();
    let mut state = options.start;
    for step in 1..=options.horizon {
        let (coalition, mutated, next) = sampler.step(state, &mut rng);
        state = next;
        visits[state] += 1;
        if options.record_log {
            log.push(StepRecord { step, coalition, mutated, state });
        }
    }
    Trajectory { visits, log, final_state: state, steps: options.horizon }
}

fn prepare<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
    options: &SimulationOptions,
) -> Result<Sampler> {
    if options.horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if options.start >= model.num_states() {
        return Err(Error::InvalidArgument(format!("start state {} out of range", options.start)));
    }
    let table = DeviationTable::build(model, config)?;
    if !options.epsilon.is_zero() {
        table.check_epsilon(&options.epsilon)?;
    }
    Ok(Sampler::new(&table, &options.epsilon))
}

/// One sample path of length `horizon`. `epsilon = 0` runs the unperturbed process.
pub fn simulate<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
    options: &SimulationOptions,
) -> Result<Trajectory> {
    let sampler = prepare(model, config, options)?;
    Ok(run(&sampler, model.num_states(), options, 0))
}

/// Independent replicas on separate threads; replica `k` uses stream `k` of the
/// seeded generator. Counts are pooled; logs are dropped.
pub fn simulate_replicas<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
    options: &SimulationOptions,
    replicas: usize,
) -> Result<Trajectory> {
    if replicas == 0 {
        return Err(Error::InvalidArgument("need at least one replica".into()));
    }
    let sampler = prepare(model, config, options)?;
    let opts = SimulationOptions { record_log: false, ..options.clone() };
    let n = model.num_states();
    let parts: Vec<Trajectory> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..replicas)
            .map(|k| {
                let (sampler, opts) = (&sampler, &opts);
                scope.spawn(move || run(sampler, n, opts, k as u64))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("replica thread")).collect()
    });
    let mut pooled = Trajectory { visits: vec![0; n], log: Vec::new(), final_state: parts[0].final_state, steps: 0 };
    for part in &parts {
        pooled.merge(part);
    }
    Ok(pooled)
}
