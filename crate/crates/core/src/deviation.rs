//! Reachable, improving and erroneous deviation sets.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::game::{Coalition, Game, Profile};
use crate::model::CoalitionalModel;

/// Which notion of a profitable coalitional move is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ImprovementMode {
    /// Every member strictly gains (strong Nash equilibrium semantics).
    #[default]
    Strict,
    /// Every member weakly gains and at least one strictly gains (strict strong Nash).
    Weak,
}

impl fmt::Display for ImprovementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImprovementMode::Strict => "strict",
            ImprovementMode::Weak => "weak",
        })
    }
}

impl FromStr for ImprovementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "strict" => Ok(ImprovementMode::Strict),
            "weak" => Ok(ImprovementMode::Weak),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationKind {
    Reachable,
    Improving(ImprovementMode),
    Erroneous(ImprovementMode),
}

/// A materialized set of states a coalition can move to from a base state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationSet {
    pub base: usize,
    pub coalition: Coalition,
    pub kind: DeviationKind,
    /// Sorted state indices.
    pub members: Vec<usize>,
}

impl DeviationSet {
    pub fn contains(&self, state: usize) -> bool {
        self.members.binary_search(&state).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn profiles(&self, game: &Game) -> Vec<Profile> {
        self.members.iter().map(|&k| game.profile_at(k)).collect()
    }
}

/// Does moving `from -> to` count as an improvement for every member of `coalition`?
pub fn is_improvement<M: CoalitionalModel + ?Sized>(
    model: &M,
    coalition: Coalition,
    from: usize,
    to: usize,
    mode: ImprovementMode,
) -> bool {
    let mut any_strict = false;
    for i in coalition.members() {
        let before = model.payoff(i, from);
        let after = model.payoff(i, to);
        match mode {
            ImprovementMode::Strict if after <= before => return false,
            ImprovementMode::Weak if after < before => return false,
            _ => {}
        }
        any_strict |= after > before;
    }
    any_strict
}

pub fn reachable_set<M: CoalitionalModel + ?Sized>(
    model: &M,
    coalition: Coalition,
    state: usize,
) -> DeviationSet {
    DeviationSet {
        base: state,
        coalition,
        kind: DeviationKind::Reachable,
        members: model.reachable_states(coalition, state),
    }
}

pub fn improving_states<M: CoalitionalModel + ?Sized>(
    model: &M,
    coalition: Coalition,
    state: usize,
    mode: ImprovementMode,
) -> DeviationSet {
    let members = model
        .reachable_states(coalition, state)
        .into_iter()
        .filter(|&to| is_improvement(model, coalition, state, to, mode))
        .collect();
    DeviationSet { base: state, coalition, kind: DeviationKind::Improving(mode), members }
}

pub fn erroneous_states<M: CoalitionalModel + ?Sized>(
    model: &M,
    coalition: Coalition,
    state: usize,
    mode: ImprovementMode,
) -> DeviationSet {
    let members = model
        .reachable_states(coalition, state)
        .into_iter()
        .filter(|&to| !is_improvement(model, coalition, state, to, mode))
        .collect();
    DeviationSet { base: state, coalition, kind: DeviationKind::Erroneous(mode), members }
}

/// `A(S,a)`: every profile that agrees with `a` outside the coalition.
pub fn reachable_profiles(game: &Game, coalition: Coalition, profile: &Profile) -> DeviationSet {
    reachable_set(game, coalition, game.index_of(profile))
}

/// `I(S,a)` under the given mode.
pub fn improving_set(
    game: &Game,
    coalition: Coalition,
    profile: &Profile,
    mode: ImprovementMode,
) -> DeviationSet {
    improving_states(game, coalition, game.index_of(profile), mode)
}

/// `A(S,a) \ I(S,a)`: the moves available to a coalition that errs. Always contains `a`.
pub fn erroneous_set(
    game: &Game,
    coalition: Coalition,
    profile: &Profile,
    mode: ImprovementMode,
) -> DeviationSet {
    erroneous_states(game, coalition, game.index_of(profile), mode)
}
