use num_traits::{One, Signed, Zero};

use super::config::{checked_scale, checked_weights, DynamicsConfig};
use crate::deviation::is_improvement;
use crate::error::{Error, Result};
use crate::game::Coalition;
use crate::model::CoalitionalModel;
use crate::rational::{fmt_rational, Rational};

/// Largest state space for which transition matrices are materialized.
pub const MAX_CHAIN_STATES: usize = 1024;

/// Precomputed per-(state, coalition) move sets with their choice weights.
#[derive(Debug, Clone)]
pub struct DeviationTable {
    pub num_states: usize,
    pub coalition_weights: Vec<(Coalition, Rational)>,
    /// `entries[state][coalition index]`
    pub entries: Vec<Vec<MoveSets>>,
    /// `M = max f(S, a)`.
    pub max_scale: Rational,
}

#[derive(Debug, Clone)]
pub struct MoveSets {
    /// `I(S,a)` with `p_I` weights.
    pub improving: Vec<(usize, Rational)>,
    /// `A(S,a) \ I(S,a)` with error-rule weights.
    pub erroneous: Vec<(usize, Rational)>,
    /// Erroneous set without the base state, with error-rule weights renormalised by the rule.
    pub erroneous_moves: Vec<(usize, Rational)>,
    pub scale: Rational,
}

impl DeviationTable {
    pub fn build<M: CoalitionalModel + ?Sized>(model: &M, config: &DynamicsConfig) -> Result<Self> {
        let n = model.num_states();
        if n > MAX_CHAIN_STATES {
            return Err(Error::CapExceeded { what: "chain state count", actual: n, limit: MAX_CHAIN_STATES });
        }
        config.validate_coalitions(model.num_players())?;
        let mut max_scale = Rational::zero();
        let mut entries = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(config.coalition_weights.len());
            for (s, _) in &config.coalition_weights {
                let s = *s;
                let (improving, erroneous): (Vec<usize>, Vec<usize>) = model
                    .reachable_states(s, a)
                    .into_iter()
                    .partition(|&t| is_improvement(model, s, a, t, config.mode));
                let moves: Vec<usize> = erroneous.iter().copied().filter(|&t| t != a).collect();
                let zip = |set: Vec<usize>, w: Vec<Rational>| set.into_iter().zip(w).collect::<Vec<_>>();
                let wi = checked_weights(config.improvement_choice.as_ref(), "improvement choice", s, a, &improving)?;
                let we = checked_weights(config.error_choice.as_ref(), "error choice", s, a, &erroneous)?;
                let wm = checked_weights(config.error_choice.as_ref(), "error choice", s, a, &moves)?;
                let scale = checked_scale(config.mutation.as_ref(), s, a)?;
                if scale > max_scale {
                    max_scale = scale.clone();
                }
                row.push(MoveSets {
                    improving: zip(improving, wi),
                    erroneous: zip(erroneous, we),
                    erroneous_moves: zip(moves, wm),
                    scale,
                });
            }
            entries.push(row);
        }
        Ok(DeviationTable { num_states: n, coalition_weights: config.coalition_weights.clone(), entries, max_scale })
    }

    /// Upper end of the admissible mutation rates, `1/M`.
    pub fn epsilon_bound(&self) -> Rational {
        self.max_scale.recip()
    }

    pub fn check_epsilon(&self, epsilon: &Rational) -> Result<()> {
        let bound = self.epsilon_bound();
        if !epsilon.is_positive() || *epsilon >= bound {
            return Err(Error::EpsilonOutOfRange {
                epsilon: fmt_rational(epsilon),
                bound: fmt_rational(&bound),
            });
        }
        Ok(())
    }
}

/// Row-stochastic matrix over states with exact entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub epsilon: Rational,
    pub rows: Vec<Vec<Rational>>,
}

impl TransitionMatrix {
    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, from: usize, to: usize) -> &Rational {
        &self.rows[from][to]
    }

    /// Rows whose entries do not sum to exactly one.
    pub fn non_stochastic_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, row)| {
                !row.iter().fold(Rational::zero(), |acc, x| acc + x).is_one()
                    || row.iter().any(Signed::is_negative)
            })
            .map(|(k, _)| k)
            .collect()
    }

    /// Positive off-diagonal entries as an adjacency list.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(b, p)| b != a && p.is_positive())
                    .map(|(b, _)| b)
                    .collect()
            })
            .collect()
    }

    pub fn all_positive(&self) -> bool {
        self.rows.iter().all(|row| row.iter().all(Signed::is_positive))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(crate::rational::to_f64).collect())
            .collect()
    }
}

fn add(row: &mut [Rational], to: usize, value: Rational) {
    row[to] += value;
}

/// Transition law without mistakes: coalition `S` (prob. `p_S`) moves to an
/// improving state chosen by `p_I`, or stays when it has none.
pub fn unperturbed_from_table(table: &DeviationTable) -> TransitionMatrix {
    let n = table.num_states;
    let rows = (0..n)
        .map(|a| {
            let mut row = vec![Rational::zero(); n];
            for ((_, p_s), sets) in table.coalition_weights.iter().zip(&table.entries[a]) {
                if sets.improving.is_empty() {
                    add(&mut row, a, p_s.clone());
                } else {
                    for (t, w) in &sets.improving {
                        add(&mut row, *t, p_s * w);
                    }
                }
            }
            row
        })
        .collect();
    TransitionMatrix { epsilon: Rational::zero(), rows }
}

/// Transition law with mistakes at rate `epsilon`. With probability `f(S,a)·ε`
/// the coalition errs: it picks from the erroneous set, or, when it has no
/// improving move, from the erroneous set minus the current state. A coalition
/// that cannot move at all stays put.
pub fn perturbed_from_table(table: &DeviationTable, epsilon: &Rational) -> Result<TransitionMatrix> {
    table.check_epsilon(epsilon)?;
    let n = table.num_states;
    let rows = (0..n)
        .map(|a| {
            let mut row = vec![Rational::zero(); n];
            for ((_, p_s), sets) in table.coalition_weights.iter().zip(&table.entries[a]) {
                let err = &sets.scale * epsilon;
                let ok = Rational::one() - &err;
                if sets.improving.is_empty() {
                    if sets.erroneous_moves.is_empty() {
                        add(&mut row, a, p_s.clone());
                        continue;
                    }
                    add(&mut row, a, p_s * &ok);
                    for (t, w) in &sets.erroneous_moves {
                        add(&mut row, *t, p_s * &err * w);
                    }
                } else {
                    for (t, w) in &sets.improving {
                        add(&mut row, *t, p_s * &ok * w);
                    }
                    for (t, w) in &sets.erroneous {
                        add(&mut row, *t, p_s * &err * w);
                    }
                }
            }
            row
        })
        .collect();
    Ok(TransitionMatrix { epsilon: epsilon.clone(), rows })
}

pub fn build_unperturbed<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
) -> Result<TransitionMatrix> {
    Ok(unperturbed_from_table(&DeviationTable::build(model, config)?))
}

pub fn build_perturbed<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
    epsilon: &Rational,
) -> Result<TransitionMatrix> {
    perturbed_from_table(&DeviationTable::build(model, config)?, epsilon)
}
