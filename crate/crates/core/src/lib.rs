//! Coalitional better-response (CBR) dynamics on finite games.
//!
//! Given a finite strategic game or a network formation game this crate finds
//! strong and strict strong Nash equilibria (strongly stable networks), closed
//! cycles of improving deviations, builds the exact transition laws of the CBR
//! Markov chain with and without mutations, and certifies which states are
//! stochastically stable, both from an ε-sweep of exact stationary
//! distributions and from the recurrent classes of the unperturbed chain.
//!
//! ```
//! use cbr_core::catalog::example_two;
//! use cbr_core::deviation::ImprovementMode;
//! use cbr_core::equilibrium::{build_deviation_graph, recurrent_structure};
//!
//! let game = example_two();
//! let graph = build_deviation_graph(&game, ImprovementMode::Strict).unwrap();
//! let classes = recurrent_structure(&graph);
//! assert_eq!(classes.classes.len(), 2); // one equilibrium, one closed cycle
//! ```

pub mod catalog;
pub mod chain;
pub mod deviation;
pub mod dominance;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod graph;
pub mod model;
pub mod netform;
pub mod rational;

pub use error::{Error, Result};
pub use game::{Coalition, Game, Profile};
pub use model::CoalitionalModel;
pub use rational::Rational;
