//! Network formation games: undirected networks as states, coalitional
//! obtainability (bilateral link addition, unilateral severance), strongly
//! stable networks and closed cycles of networks.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_traits::Zero;

use crate::chain::{build_perturbed, build_unperturbed, DynamicsConfig, TransitionMatrix};
use crate::deviation::{improving_states, reachable_set, ImprovementMode};
use crate::equilibrium::{build_deviation_graph, find_equilibria_scan, recurrent_structure, RecurrentStructure, ScanOptions};
use crate::error::{Error, Result};
use crate::game::Coalition;
use crate::model::CoalitionalModel;
use crate::rational::{parse_rational, Rational};

/// Largest node count for exhaustive stability analysis (2^15 networks).
pub const MAX_STABILITY_NODES: usize = 6;
/// Largest node count for the Markov chain bridge (2^10 networks).
pub const MAX_CHAIN_NODES: usize = 5;

/// Canonical edge order: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
pub fn canonical_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Simple undirected graph on `n` nodes, stored as a bitmask over canonical edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Network {
    nodes: usize,
    mask: u32,
}

impl Network {
    pub fn empty(nodes: usize) -> Self {
        Network { nodes, mask: 0 }
    }

    pub fn complete(nodes: usize) -> Self {
        let m = nodes * nodes.saturating_sub(1) / 2;
        Network { nodes, mask: ((1u64 << m) - 1) as u32 }
    }

    pub fn from_index(nodes: usize, index: usize) -> Self {
        Network { nodes, mask: index as u32 }
    }

    /// Zero-based endpoints; rejects self-loops, out-of-range nodes and repeats.
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut mask = 0u32;
        for &(a, b) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at node {}", i + 1)));
            }
            if j >= nodes {
                return Err(Error::InvalidArgument(format!("edge {}-{} outside {nodes} nodes", a + 1, b + 1)));
            }
            let bit = 1 << edge_index(nodes, i, j);
            if mask & bit != 0 {
                return Err(Error::InvalidArgument(format!("edge {}-{} listed twice", i + 1, j + 1)));
            }
            mask |= bit;
        }
        Ok(Network { nodes, mask })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn index(&self) -> usize {
        self.mask as usize
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.mask & (1 << edge_index(self.nodes, i.min(j), i.max(j))) != 0
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        canonical_edges(self.nodes)
            .into_iter()
            .enumerate()
            .filter(|(k, _)| self.mask & (1 << k) != 0)
            .map(|(_, e)| e)
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges().iter().filter(|&&(i, j)| i == node || j == node).count()
    }

    /// One line per edge, one-based: `1 2`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        out
    }

    pub fn adjacency_matrix(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nodes {
            let row: Vec<&str> = (0..self.nodes).map(|j| if self.has_edge(i, j) { "1" } else { "0" }).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

fn edge_index(n: usize, i: usize, j: usize) -> usize {
    // edges before row i, then offset within the row
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `{12,23}` style, one-based; dashes separate endpoints past nine nodes.
impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.nodes > 9 { "-" } else { "" };
        let parts: Vec<String> = self.edges().iter().map(|(i, j)| format!("{}{sep}{}", i + 1, j + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Is `to` obtainable from `from` by `coalition`? Added links need both
/// endpoints in the coalition; severed links need at least one.
pub fn obtainable(from: &Network, to: &Network, coalition: Coalition) -> Result<bool> {
    if from.nodes != to.nodes {
        return Err(Error::NodeCountMismatch(from.nodes, to.nodes));
    }
    for (i, j) in to.edges() {
        if !from.has_edge(i, j) && !(coalition.contains(i) && coalition.contains(j)) {
            return Ok(false);
        }
    }
    for (i, j) in from.edges() {
        if !to.has_edge(i, j) && !(coalition.contains(i) || coalition.contains(j)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Default)]
pub struct RawNetworkGame {
    pub nodes: usize,
    pub values: Vec<RawValueRow>,
}

#[derive(Debug, Clone)]
pub struct RawValueRow {
    /// One-based endpoints as written in the file.
    pub edges: Vec<(i64, i64)>,
    pub payoff: Vec<String>,
}

/// Value `u_i(g)` for every player and every network on `n` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGame {
    nodes: usize,
    // values[network index * nodes + player]
    values: Vec<Rational>,
    mode: ImprovementMode,
}

fn check_nodes(nodes: usize, limit: usize) -> Result<()> {
    if nodes == 0 {
        return Err(Error::InvalidNetworkGame(vec!["network game needs at least one node".into()]));
    }
    if nodes > limit {
        return Err(Error::CapExceeded { what: "network node count", actual: nodes, limit });
    }
    Ok(())
}

impl NetworkGame {
    /// Evaluates `value(g)` (one payoff per node) on every network.
    /// Uses weak improvement (all weakly better, someone strictly).
    pub fn from_fn<F>(nodes: usize, mut value: F) -> Result<Self>
    where
        F: FnMut(&Network) -> Vec<Rational>,
    {
        check_nodes(nodes, MAX_STABILITY_NODES)?;
        let count = 1usize << canonical_edges(nodes).len();
        let mut values = Vec::with_capacity(count * nodes);
        for k in 0..count {
            let v = value(&Network::from_index(nodes, k));
            if v.len() != nodes {
                return Err(Error::InvalidNetworkGame(vec![format!(
                    "network {} has {} values, expected {nodes}",
                    Network::from_index(nodes, k),
                    v.len()
                )]));
            }
            values.extend(v);
        }
        Ok(NetworkGame { nodes, values, mode: ImprovementMode::Weak })
    }

    /// Switches to the strict (every member strictly better) notion. Extension;
    /// the weak notion is the default.
    pub fn with_mode(mut self, mode: ImprovementMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> ImprovementMode {
        self.mode
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn num_networks(&self) -> usize {
        self.values.len() / self.nodes
    }

    pub fn value(&self, player: usize, network: &Network) -> &Rational {
        &self.values[network.index() * self.nodes + player]
    }

    pub fn network(&self, index: usize) -> Network {
        Network::from_index(self.nodes, index)
    }
}

/// Checks a raw description and produces a [`NetworkGame`], or every defect found.
pub fn validate_network_game(raw: &RawNetworkGame) -> Result<NetworkGame> {
    check_nodes(raw.nodes, MAX_STABILITY_NODES)?;
    let n = raw.nodes;
    let mut defects = Vec::new();
    let mut table: HashMap<usize, Vec<Rational>> = HashMap::new();
    for (row_no, row) in raw.values.iter().enumerate() {
        let mut edges = Vec::new();
        let mut malformed = false;
        for &(a, b) in &row.edges {
            if a < 1 || b < 1 || a as usize > n || b as usize > n {
                defects.push(format!("value row {}: edge {a}-{b} outside nodes 1..{n}", row_no + 1));
                malformed = true;
            } else {
                edges.push((a as usize - 1, b as usize - 1));
            }
        }
        if malformed {
            continue;
        }
        let network = match Network::from_edges(n, &edges) {
            Ok(g) => g,
            Err(e) => {
                defects.push(format!("value row {}: malformed edge list: {e}", row_no + 1));
                continue;
            }
        };
        if row.payoff.len() != n {
            defects.push(format!(
                "value row {} for {network}: {} values, expected {n}",
                row_no + 1,
                row.payoff.len()
            ));
            continue;
        }
        let parsed: Vec<Result<Rational>> = row.payoff.iter().map(|v| parse_rational(v)).collect();
        if let Some(bad) = row.payoff.iter().zip(&parsed).find(|(_, p)| p.is_err()) {
            defects.push(format!("value row {} for {network}: non-rational value literal `{}`", row_no + 1, bad.0));
            continue;
        }
        let values = parsed.into_iter().map(|p| p.expect("checked")).collect();
        if table.insert(network.index(), values).is_some() {
            defects.push(format!("duplicate value row for network {network}"));
        }
    }
    let count = 1usize << canonical_edges(n).len();
    let mut values = Vec::with_capacity(count * n);
    for k in 0..count {
        match table.remove(&k) {
            Some(v) => values.extend(v),
            None => {
                defects.push(format!("missing values for network {}", Network::from_index(n, k)));
                values.extend(std::iter::repeat(Rational::zero()).take(n));
            }
        }
    }
    if !defects.is_empty() {
        return Err(Error::InvalidNetworkGame(defects));
    }
    Ok(NetworkGame { nodes: n, values, mode: ImprovementMode::Weak })
}

impl CoalitionalModel for NetworkGame {
    fn num_players(&self) -> usize {
        self.nodes
    }

    fn num_states(&self) -> usize {
        self.num_networks()
    }

    fn payoff(&self, player: usize, state: usize) -> &Rational {
        &self.values[state * self.nodes + player]
    }

    fn reachable_states(&self, coalition: Coalition, state: usize) -> Vec<usize> {
        let g = self.network(state);
        let toggle = toggleable(&g, coalition);
        // every submask of `toggle`
        let mut out = Vec::with_capacity(1 << toggle.count_ones());
        let mut sub = toggle;
        loop {
            out.push((g.mask ^ sub) as usize);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & toggle;
        }
        out.sort_unstable();
        out
    }

    fn reachable_count(&self, coalition: Coalition, state: usize) -> usize {
        1 << toggleable(&self.network(state), coalition).count_ones()
    }

    fn state_label(&self, state: usize) -> String {
        self.network(state).to_string()
    }
}

/// Edges the coalition may flip: present links with an endpoint in the
/// coalition, absent links with both endpoints in it.
fn toggleable(g: &Network, coalition: Coalition) -> u32 {
    let mut toggle = 0u32;
    for (k, (i, j)) in canonical_edges(g.nodes).into_iter().enumerate() {
        let allowed = if g.mask & (1 << k) != 0 {
            coalition.contains(i) || coalition.contains(j)
        } else {
            coalition.contains(i) && coalition.contains(j)
        };
        if allowed {
            toggle |= 1 << k;
        }
    }
    toggle
}

fn check_game(game: &NetworkGame, network: &Network) -> Result<()> {
    if network.nodes != game.nodes {
        return Err(Error::NodeCountMismatch(game.nodes, network.nodes));
    }
    Ok(())
}

/// Every network `coalition` can reach from `network`, including `network`.
pub fn network_reachable(game: &NetworkGame, coalition: Coalition, network: &Network) -> Result<Vec<Network>> {
    check_game(game, network)?;
    let set = reachable_set(game, coalition, network.index());
    Ok(set.members.into_iter().map(|k| game.network(k)).collect())
}

/// Improving deviations of `coalition` from `network` under the game's mode.
pub fn network_improving_set(game: &NetworkGame, coalition: Coalition, network: &Network) -> Result<Vec<Network>> {
    check_game(game, network)?;
    let set = improving_states(game, coalition, network.index(), game.mode);
    Ok(set.members.into_iter().map(|k| game.network(k)).collect())
}

/// Obtainable but non-improving networks; always contains `network`.
pub fn network_erroneous_set(game: &NetworkGame, coalition: Coalition, network: &Network) -> Result<Vec<Network>> {
    check_game(game, network)?;
    let set = crate::deviation::erroneous_states(game, coalition, network.index(), game.mode);
    Ok(set.members.into_iter().map(|k| game.network(k)).collect())
}

/// Networks from which no coalition has an improving deviation.
pub fn find_strongly_stable(game: &NetworkGame) -> Result<Vec<Network>> {
    let states = find_equilibria_scan(game, game.mode, ScanOptions::default())?;
    Ok(states.into_iter().map(|k| game.network(k)).collect())
}

pub fn network_recurrent_structure(game: &NetworkGame) -> Result<RecurrentStructure> {
    Ok(recurrent_structure(&build_deviation_graph(game, game.mode)?))
}

/// Default dynamics for a network game: uniform coalitions and choices, `f ≡ 1`.
pub fn default_network_config(game: &NetworkGame) -> Result<DynamicsConfig> {
    DynamicsConfig::uniform(game.nodes, game.mode)
}

/// Transition matrix of the network dynamics; `epsilon = 0` gives the unperturbed chain.
pub fn netgame_as_chain(game: &NetworkGame, config: &DynamicsConfig, epsilon: &Rational) -> Result<TransitionMatrix> {
    if game.nodes > MAX_CHAIN_NODES {
        return Err(Error::CapExceeded { what: "network node count for chain analysis", actual: game.nodes, limit: MAX_CHAIN_NODES });
    }
    if epsilon.is_zero() {
        build_unperturbed(game, config)
    } else {
        build_perturbed(game, config, epsilon)
    }
}
