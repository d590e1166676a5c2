//! One-step resistances, class-to-class resistances and stochastic potentials.

use std::collections::VecDeque;

use num_traits::Signed;

use super::config::DynamicsConfig;
use super::matrix::{perturbed_from_table, unperturbed_from_table, DeviationTable};
use super::stationary::chain_recurrent_classes;
use crate::equilibrium::RecurrentStructure;
use crate::error::{Error, Result};
use crate::model::CoalitionalModel;
use crate::rational::int;

/// Largest number of recurrent classes for exhaustive tree enumeration.
pub const MAX_TREE_CLASSES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceAnalysis {
    /// `resistance[a][b]` for `a != b`: `Some(0)` for an unperturbed move,
    /// `Some(1)` for a move needing one mutation, `None` if impossible. Diagonal is `None`.
    pub resistance: Vec<Vec<Option<u32>>>,
    pub classes: RecurrentStructure,
    /// Minimum path resistance between recurrent classes (diagonal `Some(0)`).
    pub class_resistance: Vec<Vec<Option<u32>>>,
    /// Minimum-resistance rooted tree weight for each class.
    pub stochastic_potential: Vec<Option<u32>>,
    /// Every class pair not separated by exactly one mutation, and every
    /// potential that differs from `J - 1`.
    pub discrepancies: Vec<String>,
}

impl ResistanceAnalysis {
    pub fn num_classes(&self) -> usize {
        self.classes.classes.len()
    }

    /// Classes attaining the minimum stochastic potential.
    pub fn minimum_potential_classes(&self) -> Vec<usize> {
        let min = self.stochastic_potential.iter().flatten().min();
        (0..self.num_classes())
            .filter(|&k| self.stochastic_potential[k].is_some() && self.stochastic_potential[k].as_ref() == min)
            .collect()
    }
}

pub fn resistance_analysis<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
) -> Result<ResistanceAnalysis> {
    let table = DeviationTable::build(model, config)?;
    let p0 = unperturbed_from_table(&table);
    let probe = table.epsilon_bound() / int(2);
    let pe = perturbed_from_table(&table, &probe)?;
    let n = model.num_states();
    let resistance: Vec<Vec<Option<u32>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == b {
                        None
                    } else if p0.rows[a][b].is_positive() {
                        Some(0)
                    } else if pe.rows[a][b].is_positive() {
                        Some(1)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();

    let classes = RecurrentStructure::from_sinks(n, chain_recurrent_classes(&p0));
    let j = classes.classes.len();
    if j > MAX_TREE_CLASSES {
        return Err(Error::CapExceeded {
            what: "recurrent classes for tree enumeration",
            actual: j,
            limit: MAX_TREE_CLASSES,
        });
    }

    let class_resistance: Vec<Vec<Option<u32>>> = classes
        .classes
        .iter()
        .map(|from| {
            let dist = zero_one_bfs(&resistance, &from.states);
            classes
                .classes
                .iter()
                .map(|to| to.states.iter().filter_map(|&s| dist[s]).min())
                .collect()
        })
        .collect();
    let stochastic_potential: Vec<Option<u32>> = (0..j).map(|root| min_tree_weight(&class_resistance, root)).collect();

    let mut discrepancies = Vec::new();
    for (x, row) in class_resistance.iter().enumerate() {
        for (y, r) in row.iter().enumerate() {
            if x != y && *r != Some(1) {
                discrepancies.push(format!("class {x} -> class {y} resistance {r:?}, expected 1"));
            }
        }
    }
    for (k, p) in stochastic_potential.iter().enumerate() {
        if *p != Some(j as u32 - 1) {
            discrepancies.push(format!("class {k} stochastic potential {p:?}, expected {}", j - 1));
        }
    }
    Ok(ResistanceAnalysis { resistance, classes, class_resistance, stochastic_potential, discrepancies })
}

/// Shortest resistance from any of `sources` to every state.
fn zero_one_bfs(resistance: &[Vec<Option<u32>>], sources: &[usize]) -> Vec<Option<u32>> {
    let n = resistance.len();
    let mut dist: Vec<Option<u32>> = vec![None; n];
    let mut deque = VecDeque::new();
    for &s in sources {
        dist[s] = Some(0);
        deque.push_back(s);
    }
    while let Some(v) = deque.pop_front() {
        let dv = dist[v].expect("settled");
        for (w, r) in resistance[v].iter().enumerate() {
            let Some(r) = *r else { continue };
            let cand = dv + r;
            if dist[w].map_or(true, |d| cand < d) {
                dist[w] = Some(cand);
                if r == 0 {
                    deque.push_front(w);
                } else {
                    deque.push_back(w);
                }
            }
        }
    }
    dist
}

/// Minimum weight over all spanning trees directed into `root`, by enumerating
/// every parent assignment of the non-root nodes.
pub fn min_tree_weight(weights: &[Vec<Option<u32>>], root: usize) -> Option<u32> {
    let j = weights.len();
    if j == 1 {
        return Some(0);
    }
    let others: Vec<usize> = (0..j).filter(|&v| v != root).collect();
    let mut parent = vec![usize::MAX; j];
    let mut best = None;
    enumerate_parents(weights, root, &others, 0, &mut parent, &mut best);
    best
}

fn enumerate_parents(
    weights: &[Vec<Option<u32>>],
    root: usize,
    others: &[usize],
    depth: usize,
    parent: &mut Vec<usize>,
    best: &mut Option<u32>,
) {
    let j = weights.len();
    if depth == others.len() {
        if let Some(w) = tree_weight(weights, root, others, parent) {
            if best.map_or(true, |b| w < b) {
                *best = Some(w);
            }
        }
        return;
    }
    let v = others[depth];
    for p in 0..j {
        if p != v && weights[v][p].is_some() {
            parent[v] = p;
            enumerate_parents(weights, root, others, depth + 1, parent, best);
        }
    }
}

fn tree_weight(weights: &[Vec<Option<u32>>], root: usize, others: &[usize], parent: &[usize]) -> Option<u32> {
    let j = weights.len();
    for &v in others {
        let mut cur = v;
        let mut steps = 0;
        while cur != root {
            cur = parent[cur];
            steps += 1;
            if steps > j {
                return None;
            }
        }
    }
    others.iter().map(|&v| weights[v][parent[v]]).sum()
}
