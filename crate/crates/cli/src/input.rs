//! Game and network files (TOML).
//!
//! A strategic game:
//!
//! ```toml
//! players = 2
//! actions = [["a1", "a2"], ["b1", "b2"]]
//! payoffs = [
//!   { profile = ["a1", "b1"], payoff = [-2, -2] },
//!   { profile = ["a1", "b2"], payoff = [-10, "-1/2"] },
//!   # ...one row per profile
//! ]
//! ```
//!
//! A network formation game (edges are 1-based node pairs; `[]` is the empty network):
//!
//! ```toml
//! nodes = 3
//! values = [
//!   { edges = [], payoff = [0, 0, 0] },
//!   { edges = [[1, 2]], payoff = [1, 1, 0] },
//!   # ...one row per network
//! ]
//! ```
//!
//! Payoffs are integers or quoted exact rationals (`"3/4"`, `"0.25"`, `"1e-3"`).
//! TOML floats are rejected because they are not exact.

use std::ops::Range;

use cbr_core::game::{validate_game, RawGame, RawPayoffRow};
use cbr_core::netform::{validate_network_game, RawNetworkGame, RawValueRow};
use cbr_core::{CoalitionalModel, Game};
use cbr_core::netform::NetworkGame;
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Document {
    Game(Game),
    Network(NetworkGame),
}

impl Document {
    pub fn model(&self) -> &dyn CoalitionalModel {
        match self {
            Document::Game(g) => g,
            Document::Network(g) => g,
        }
    }

    /// What a state is called in reports.
    pub fn noun(&self) -> &'static str {
        match self {
            Document::Game(_) => "profile",
            Document::Network(_) => "network",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    players: Spanned<i64>,
    actions: Vec<Vec<String>>,
    payoffs: Vec<PayoffDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PayoffDoc {
    profile: Vec<String>,
    payoff: Vec<Spanned<toml::Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    nodes: Spanned<i64>,
    values: Vec<ValueDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueDoc {
    edges: Spanned<Vec<Vec<i64>>>,
    payoff: Vec<Spanned<toml::Value>>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn at(text: &str, span: Range<usize>, msg: impl std::fmt::Display) -> CliError {
    let (line, col) = line_col(text, span.start);
    CliError::Parse(format!("line {line}, column {col}: {msg}"))
}

fn toml_error(text: &str, e: toml::de::Error) -> CliError {
    let msg = e.message().trim_end().to_string();
    match e.span() {
        Some(span) => at(text, span, msg),
        None => CliError::Parse(msg),
    }
}

fn literal(text: &str, value: &Spanned<toml::Value>) -> Result<String, CliError> {
    match value.get_ref() {
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Float(f) => Err(at(
            text,
            value.span(),
            format!("non-rational payoff literal `{f}` (write exact values as integers or quoted \"p/q\")"),
        )),
        other => Err(at(text, value.span(), format!("payoff must be an integer or a quoted rational, found {}", other.type_str()))),
    }
}

fn count(text: &str, value: &Spanned<i64>, what: &str) -> Result<usize, CliError> {
    usize::try_from(*value.get_ref()).map_err(|_| at(text, value.span(), format!("{what} must be non-negative")))
}

/// Parses a game or network file. The kind is taken from the header key:
/// `players` for strategic games, `nodes` for network formation games.
pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    match (table.contains_key("players"), table.contains_key("nodes")) {
        (true, false) => parse_game(text).map(Document::Game),
        (false, true) => parse_network(text).map(Document::Network),
        (true, true) => Err(CliError::Parse("file has both `players` and `nodes`; cannot tell the document kind".into())),
        (false, false) => Err(CliError::Parse("missing header key: expected `players` (game) or `nodes` (network)".into())),
    }
}

fn parse_game(text: &str) -> Result<Game, CliError> {
    let doc: GameDoc = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let mut payoffs = Vec::with_capacity(doc.payoffs.len());
    for row in &doc.payoffs {
        let values = row.payoff.iter().map(|v| literal(text, v)).collect::<Result<_, _>>()?;
        payoffs.push(RawPayoffRow { profile: row.profile.clone(), values });
    }
    let raw = RawGame { players: count(text, &doc.players, "players")?, actions: doc.actions, payoffs };
    let game = validate_game(&raw)?;
    game.check_caps()?;
    Ok(game)
}

fn parse_network(text: &str) -> Result<NetworkGame, CliError> {
    let doc: NetworkDoc = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let mut values = Vec::with_capacity(doc.values.len());
    for row in &doc.values {
        let mut edges = Vec::new();
        for pair in row.edges.get_ref() {
            match pair.as_slice() {
                [i, j] => edges.push((*i, *j)),
                _ => return Err(at(text, row.edges.span(), format!("malformed edge {pair:?}: expected a pair [i, j]"))),
            }
        }
        let payoff = row.payoff.iter().map(|v| literal(text, v)).collect::<Result<_, _>>()?;
        values.push(RawValueRow { edges, payoff });
    }
    let raw = RawNetworkGame { nodes: count(text, &doc.nodes, "nodes")?, values };
    Ok(validate_network_game(&raw)?)
}
