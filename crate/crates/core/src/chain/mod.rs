//! Markov chains of coalitional better-response dynamics, with and without mistakes.

mod config;
mod matrix;
mod resistance;
mod simulate;
mod stability;
mod stationary;

pub mod csv;

pub use config::{ChoiceRule, ConstantScale, DynamicsConfig, MutationScale, ScaleFn, UniformChoice};
pub use matrix::{
    build_perturbed, build_unperturbed, perturbed_from_table, unperturbed_from_table, DeviationTable, MoveSets,
    TransitionMatrix, MAX_CHAIN_STATES,
};
pub use resistance::{min_tree_weight, resistance_analysis, ResistanceAnalysis, MAX_TREE_CLASSES};
pub use simulate::{simulate, simulate_replicas, SimulationOptions, StepRecord, Trajectory};
pub use stability::{stochastically_stable_set, EpsilonSweep, StabilityReport};
pub use stationary::{
    chain_recurrent_classes, is_exactly_stationary, stationary, stationary_on_class, SolverOptions,
    StationaryDistribution,
};
