//! CSV emitters for stationary distributions, resistances and trajectories.
//!
//! Labels are always double-quoted since profile labels contain commas.
//! Probabilities are fixed-point decimals with 12 digits (display rounding).

use std::fmt::Write as _;

use super::resistance::ResistanceAnalysis;
use super::simulate::Trajectory;
use super::stationary::StationaryDistribution;
use crate::model::CoalitionalModel;
use crate::rational::{fmt_decimal, fmt_rational, Rational};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn decimal(d: &StationaryDistribution, state: usize) -> String {
    match &d.exact {
        Some(exact) => fmt_decimal(&exact[state], 12),
        None => format!("{:.12}", d.approx[state]),
    }
}

/// `profile,eps=1/10,eps=1/100,...` with one row per state.
pub fn stationary_csv<M: CoalitionalModel + ?Sized>(model: &M, distributions: &[StationaryDistribution]) -> String {
    let mut out = String::from("profile");
    for d in distributions {
        let _ = write!(out, ",eps={}", fmt_rational(&d.epsilon));
    }
    out.push('\n');
    for s in 0..model.num_states() {
        out.push_str(&quote(&model.state_label(s)));
        for d in distributions {
            let _ = write!(out, ",{}", decimal(d, s));
        }
        out.push('\n');
    }
    out
}

/// Square matrix of one-step resistances; `-` on the diagonal, empty when impossible.
pub fn resistance_csv<M: CoalitionalModel + ?Sized>(model: &M, analysis: &ResistanceAnalysis) -> String {
    let n = model.num_states();
    let mut out = String::from("from\\to");
    for s in 0..n {
        let _ = write!(out, ",{}", quote(&model.state_label(s)));
    }
    out.push('\n');
    for a in 0..n {
        out.push_str(&quote(&model.state_label(a)));
        for b in 0..n {
            let cell = match analysis.resistance[a][b] {
                _ if a == b => "-".to_string(),
                Some(r) => r.to_string(),
                None => String::new(),
            };
            let _ = write!(out, ",{cell}");
        }
        out.push('\n');
    }
    out
}

/// `step,coalition,mutated,profile` for every logged step.
pub fn trajectory_csv<M: CoalitionalModel + ?Sized>(model: &M, trajectory: &Trajectory) -> String {
    let mut out = String::from("step,coalition,mutated,profile\n");
    for r in &trajectory.log {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.step,
            quote(&r.coalition.to_string()),
            r.mutated,
            quote(&model.state_label(r.state))
        );
    }
    out
}

/// `from\to` matrix of exact entries written as `p/q`.
pub fn matrix_csv<M: CoalitionalModel + ?Sized>(model: &M, rows: &[Vec<Rational>]) -> String {
    let n = model.num_states();
    let mut out = String::from("from\\to");
    for s in 0..n {
        let _ = write!(out, ",{}", quote(&model.state_label(s)));
    }
    out.push('\n');
    for (a, row) in rows.iter().enumerate() {
        out.push_str(&quote(&model.state_label(a)));
        for x in row {
            let _ = write!(out, ",{}", fmt_rational(x));
        }
        out.push('\n');
    }
    out
}
