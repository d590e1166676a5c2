use std::path::PathBuf;

use cbr_core::deviation::ImprovementMode;
use cbr_core::rational::{int, parse_rational, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

#[derive(Debug, Parser)]
#[command(name = "cbr", version, about = "Coalitional better-response analysis of finite games and network formation games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strong Nash equilibria (or strongly stable networks), closed cycles and transient states.
    Equilibria(Common),
    /// The improving-deviation digraph, as a report or in DOT.
    Graph(Common),
    /// Exact transition matrix of the unperturbed (`--eps 0`) or perturbed chain.
    Chain(ChainArgs),
    /// Stochastically stable set from an epsilon sweep, certified against recurrent classes.
    Stable(StableArgs),
    /// Seeded sample path of the perturbed chain.
    Simulate(SimulateArgs),
    /// Strongly stable networks with edge lists and adjacency matrices.
    Netform(NetformArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Report,
    Dot,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Game or network file (TOML).
    pub input: PathBuf,
    /// Improvement notion: strict (every member gains) or weak (none loses, one gains).
    /// Defaults to strict for games and weak for networks.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ImprovementMode>,
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mutation rate; 0 gives the unperturbed chain.
    #[arg(long, default_value = "0", value_parser = parse_single_rate)]
    pub eps: Rational,
}

#[derive(Debug, Args)]
pub struct StableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Decreasing rates: a list `1/10,1/100` or a decade range `1e-1..1e-6`.
    #[arg(long, default_value = "1e-1..1e-6", value_parser = parse_sweep)]
    pub eps: Sweep,
    /// Also report one-step resistances and stochastic potentials (CSV: the resistance matrix).
    #[arg(long)]
    pub resistance: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_single_rate)]
    pub eps: Rational,
    #[arg(long, default_value_t = 100_000)]
    pub horizon: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Starting state, as its label (e.g. `(a1,b1)` or `{12}`) or index. Defaults to the first state.
    #[arg(long)]
    pub start: Option<String>,
    /// Independent replicas pooled together (report only).
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
}

#[derive(Debug, Args)]
pub struct NetformArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also certify the stochastically stable networks over this sweep.
    #[arg(long, value_parser = parse_sweep)]
    pub eps: Option<Sweep>,
}

/// Decreasing list of mutation rates.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<Rational>);

fn parse_mode(s: &str) -> Result<ImprovementMode, String> {
    s.parse().map_err(|e: cbr_core::Error| e.to_string())
}

fn parse_single_rate(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r < Rational::zero() {
        return Err(format!("negative rate `{s}`"));
    }
    Ok(r)
}

/// `a..b` walks down from `a` by factors of ten and must land on `b`;
/// otherwise a comma-separated list.
pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let rates: Vec<Rational> = if let Some((hi, lo)) = s.split_once("..") {
        let (hi, lo) = (parse_single_rate(hi.trim())?, parse_single_rate(lo.trim())?);
        if hi.is_zero() || lo.is_zero() || lo > hi {
            return Err(format!("range `{s}` must run from a larger to a smaller positive rate"));
        }
        let mut out = vec![hi];
        while out.last().unwrap() > &lo {
            let next = out.last().unwrap() / int(10);
            out.push(next);
        }
        if out.last() != Some(&lo) {
            return Err(format!("range `{s}` is not a whole number of decades"));
        }
        out
    } else {
        s.split(',').map(|p| parse_single_rate(p.trim())).collect::<Result<_, _>>()?
    };
    if rates.iter().any(Rational::is_zero) {
        return Err("sweep rates must be positive".into());
    }
    Ok(Sweep(rates))
}
