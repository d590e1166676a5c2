//! Strong and strict strong Nash equilibria, the improving-deviation digraph,
//! closed cycles and improving paths.

use std::fmt::Write as _;

use crate::deviation::{improving_states, ImprovementMode};
use crate::error::{Error, Result};
use crate::game::{enumerate_coalitions, Coalition};
use crate::graph;
use crate::model::CoalitionalModel;

#[derive(Debug, Clone, Copy, Default)]
pub struct ScanOptions {
    /// Stop at the first surviving candidate, as the textbook elimination loop does.
    pub first_only: bool,
}

/// Candidate elimination: a state survives when no coalition has any deviation
/// meeting the payoff condition of `mode`. Returns every survivor (or just the
/// first with [`ScanOptions::first_only`]) in canonical order.
///
/// The payoff test is written out here rather than shared with
/// [`crate::deviation`] so the scan can cross-check the graph route.
pub fn find_equilibria_scan<M: CoalitionalModel + ?Sized>(
    model: &M,
    mode: ImprovementMode,
    options: ScanOptions,
) -> Result<Vec<usize>> {
    let coalitions = enumerate_coalitions(model.num_players())?;
    let mut survivors = Vec::new();
    'candidates: for a in 0..model.num_states() {
        for &s in &coalitions {
            for target in model.reachable_states(s, a) {
                let gains: Vec<std::cmp::Ordering> = s
                    .members()
                    .map(|i| model.payoff(i, target).cmp(model.payoff(i, a)))
                    .collect();
                let eliminated = match mode {
                    ImprovementMode::Strict => gains.iter().all(|g| g.is_gt()),
                    ImprovementMode::Weak => {
                        gains.iter().all(|g| g.is_ge()) && gains.iter().any(|g| g.is_gt())
                    }
                };
                if eliminated {
                    continue 'candidates;
                }
            }
        }
        survivors.push(a);
        if options.first_only {
            break;
        }
    }
    Ok(survivors)
}

/// Directed graph over states with an edge `a -> a'` whenever some coalition
/// has `a'` in its improving set at `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationGraph {
    pub mode: ImprovementMode,
    /// `edges[a]` lists `(target, coalitions)` sorted by target; coalitions sorted.
    pub edges: Vec<Vec<(usize, Vec<Coalition>)>>,
}

impl DeviationGraph {
    pub fn num_nodes(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges[node].len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|row| row.iter().map(|(t, _)| *t).collect())
            .collect()
    }

    pub fn labels(&self, from: usize, to: usize) -> Option<&[Coalition]> {
        self.edges[from]
            .binary_search_by_key(&to, |(t, _)| *t)
            .ok()
            .map(|k| self.edges[from][k].1.as_slice())
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.labels(from, to).is_some()
    }
}

/// Cap on `Σ_a Σ_S |A(S,a)|`, the candidate moves a deviation graph must test.
pub const MAX_GRAPH_WORK: usize = 1 << 27;

/// Candidate moves the deviation graph would test, or an error once over [`MAX_GRAPH_WORK`].
pub fn check_graph_work<M: CoalitionalModel + ?Sized>(model: &M) -> Result<usize> {
    let coalitions = enumerate_coalitions(model.num_players())?;
    let mut total = 0usize;
    for a in 0..model.num_states() {
        for &s in &coalitions {
            total = total.saturating_add(model.reachable_count(s, a));
            if total > MAX_GRAPH_WORK {
                return Err(Error::CapExceeded {
                    what: "deviation graph work (state, coalition, target triples)",
                    actual: total,
                    limit: MAX_GRAPH_WORK,
                });
            }
        }
    }
    Ok(total)
}

pub fn build_deviation_graph<M: CoalitionalModel + ?Sized>(
    model: &M,
    mode: ImprovementMode,
) -> Result<DeviationGraph> {
    check_graph_work(model)?;
    let coalitions = enumerate_coalitions(model.num_players())?;
    let edges = (0..model.num_states())
        .map(|a| {
            let mut row: Vec<(usize, Vec<Coalition>)> = Vec::new();
            for &s in &coalitions {
                for target in improving_states(model, s, a, mode).members {
                    match row.binary_search_by_key(&target, |(t, _)| *t) {
                        Ok(k) => row[k].1.push(s),
                        Err(k) => row.insert(k, (target, vec![s])),
                    }
                }
            }
            row
        })
        .collect();
    Ok(DeviationGraph { mode, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// Singleton sink: a strong (or strict strong) equilibrium.
    Equilibrium,
    /// Sink component with two or more states.
    ClosedCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentClass {
    pub kind: ClassKind,
    pub states: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentStructure {
    pub classes: Vec<RecurrentClass>,
    pub transient: Vec<usize>,
}

impl RecurrentStructure {
    pub fn equilibria(&self) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|c| c.kind == ClassKind::Equilibrium)
            .map(|c| c.states[0])
            .collect()
    }

    pub fn closed_cycles(&self) -> impl Iterator<Item = &RecurrentClass> {
        self.classes.iter().filter(|c| c.kind == ClassKind::ClosedCycle)
    }

    /// Union of all classes, sorted.
    pub fn recurrent_states(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.classes.iter().flat_map(|c| c.states.iter().copied()).collect();
        all.sort_unstable();
        all
    }

    pub(crate) fn from_sinks(num_states: usize, sinks: Vec<Vec<usize>>) -> Self {
        let mut recurrent = vec![false; num_states];
        let classes = sinks
            .into_iter()
            .map(|states| {
                for &s in &states {
                    recurrent[s] = true;
                }
                let kind = if states.len() == 1 { ClassKind::Equilibrium } else { ClassKind::ClosedCycle };
                RecurrentClass { kind, states }
            })
            .collect();
        let transient = (0..num_states).filter(|&s| !recurrent[s]).collect();
        RecurrentStructure { classes, transient }
    }
}

/// Sink strongly connected components of the deviation graph.
pub fn recurrent_structure(graph: &DeviationGraph) -> RecurrentStructure {
    let sinks = graph::sink_components(&graph.adjacency());
    RecurrentStructure::from_sinks(graph.num_nodes(), sinks)
}

/// An improving path: `states[k] -> states[k+1]` is witnessed by `coalitions[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovingPath {
    pub states: Vec<usize>,
    pub coalitions: Vec<Coalition>,
}

impl ImprovingPath {
    pub fn len(&self) -> usize {
        self.coalitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }
}

/// Shortest improving path, using the smallest coalition label on each step.
pub fn improving_path(graph: &DeviationGraph, from: usize, to: usize) -> Option<ImprovingPath> {
    let states = graph::shortest_path(&graph.adjacency(), from, to)?;
    let coalitions = states
        .windows(2)
        .map(|w| graph.labels(w[0], w[1]).expect("path edge")[0])
        .collect();
    Some(ImprovingPath { states, coalitions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub scan: Vec<usize>,
    pub graph_singletons: Vec<usize>,
    pub only_in_scan: Vec<usize>,
    pub only_in_graph: Vec<usize>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.only_in_scan.is_empty() && self.only_in_graph.is_empty()
    }
}

/// Compares the elimination scan against the singleton sinks of the deviation graph.
pub fn equilibria_consistency_check<M: CoalitionalModel + ?Sized>(
    model: &M,
    mode: ImprovementMode,
) -> Result<ConsistencyReport> {
    let scan = find_equilibria_scan(model, mode, ScanOptions::default())?;
    let graph = build_deviation_graph(model, mode)?;
    let graph_singletons = recurrent_structure(&graph).equilibria();
    let only_in_scan = scan.iter().filter(|s| !graph_singletons.contains(s)).copied().collect();
    let only_in_graph = graph_singletons.iter().filter(|s| !scan.contains(s)).copied().collect();
    Ok(ConsistencyReport { scan, graph_singletons, only_in_scan, only_in_graph })
}

/// Graphviz rendering with coalition labels on edges, e.g. `{1,2}`.
pub fn to_dot<M: CoalitionalModel + ?Sized>(graph: &DeviationGraph, model: &M) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph deviations {{");
    let _ = writeln!(out, "  // mode: {}", graph.mode);
    for v in 0..graph.num_nodes() {
        let _ = writeln!(out, "  n{v} [label=\"{}\"];", escape(&model.state_label(v)));
    }
    for (v, row) in graph.edges.iter().enumerate() {
        for (w, labels) in row {
            let text: Vec<String> = labels.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  n{v} -> n{w} [label=\"{}\"];", escape(&text.join(" ")));
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
