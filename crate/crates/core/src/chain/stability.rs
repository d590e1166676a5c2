//! Numerical (ε-sweep) and structural certification of the stochastically stable set.

use num_traits::Signed;

use super::config::DynamicsConfig;
use super::matrix::{perturbed_from_table, unperturbed_from_table, DeviationTable};
use super::stationary::{chain_recurrent_classes, stationary, SolverOptions, StationaryDistribution};
use crate::equilibrium::{build_deviation_graph, recurrent_structure, RecurrentStructure};
use crate::error::{Error, Result};
use crate::model::CoalitionalModel;
use crate::rational::{fmt_rational, parse_rational, Rational};

/// Decreasing mutation rates plus the thresholds that separate O(1) from O(ε) mass.
#[derive(Debug, Clone)]
pub struct EpsilonSweep {
    pub values: Vec<Rational>,
    /// Optional absolute floor on the mass at the smallest ε. Zero by default:
    /// recurrent states of a large closed cycle can carry well under 10⁻³.
    pub threshold: f64,
    /// Minimum ratio `μ(ε_last) / μ(ε_second_last)`; O(ε) mass shrinks by
    /// roughly the step factor between the last two rates, O(1) mass does not.
    pub trend_ratio: f64,
}

impl Default for EpsilonSweep {
    fn default() -> Self {
        let values = (1..=6)
            .map(|k| parse_rational(&format!("1e-{k}")).expect("literal"))
            .collect();
        EpsilonSweep { values, threshold: 0.0, trend_ratio: 0.5 }
    }
}

impl EpsilonSweep {
    pub fn new(values: Vec<Rational>) -> Self {
        EpsilonSweep { values, ..Default::default() }
    }

    fn validate(&self, table: &DeviationTable) -> Result<()> {
        for eps in &self.values {
            table.check_epsilon(eps)?;
        }
        if self.values.len() < 2 {
            return Err(Error::InvalidArgument("epsilon sweep needs at least two rates for the trend test".into()));
        }
        if self.values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument("epsilon sweep must be strictly decreasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// One stationary distribution per ε, in sweep order.
    pub distributions: Vec<StationaryDistribution>,
    /// States judged stable from the sweep.
    pub numeric: Vec<usize>,
    /// Union of recurrent classes of the unperturbed chain.
    pub structural: Vec<usize>,
    /// Recurrent classes read off the unperturbed transition matrix.
    pub classes: RecurrentStructure,
    pub agreement: bool,
    pub diagnostics: Vec<String>,
}

impl StabilityReport {
    /// The stable set, or an error when the two certifications disagree.
    pub fn certified(&self) -> Result<&[usize]> {
        if self.agreement {
            Ok(&self.structural)
        } else {
            Err(Error::SweepDisagreement(self.diagnostics.join("; ")))
        }
    }

    /// Total mass outside the structural stable set at each ε.
    pub fn transient_mass(&self) -> Vec<f64> {
        self.distributions
            .iter()
            .map(|d| {
                (0..d.approx.len())
                    .filter(|s| self.structural.binary_search(s).is_err())
                    .fold(0.0, |acc, s| acc + d.approx[s])
            })
            .collect()
    }
}

pub fn stochastically_stable_set<M: CoalitionalModel + ?Sized>(
    model: &M,
    config: &DynamicsConfig,
    sweep: &EpsilonSweep,
    options: &SolverOptions,
) -> Result<StabilityReport> {
    let table = DeviationTable::build(model, config)?;
    sweep.validate(&table)?;
    let mut diagnostics = Vec::new();

    let p0 = unperturbed_from_table(&table);
    let classes = RecurrentStructure::from_sinks(model.num_states(), chain_recurrent_classes(&p0));
    let graph_classes = recurrent_structure(&build_deviation_graph(model, config.mode)?);
    if graph_classes != classes {
        diagnostics.push("recurrent classes of the unperturbed chain differ from the deviation graph".into());
    }
    let structural = classes.recurrent_states();

    let mut distributions = Vec::with_capacity(sweep.values.len());
    for eps in &sweep.values {
        let p = perturbed_from_table(&table, eps)?;
        let mu = stationary(&p, options)?;
        if let Some(exact) = &mu.exact {
            if exact.iter().any(|m| !m.is_positive()) {
                diagnostics.push(format!("non-positive stationary mass at epsilon {}", fmt_rational(eps)));
            }
        }
        distributions.push(mu);
    }

    let last = distributions.last().expect("nonempty sweep");
    let prev = distributions.len().checked_sub(2).map(|k| &distributions[k]);
    let numeric: Vec<usize> = (0..model.num_states())
        .filter(|&s| {
            let m = last.mass(s);
            let trend_ok = prev.map_or(true, |p| m >= sweep.trend_ratio * p.mass(s));
            m > 0.0 && m >= sweep.threshold && trend_ok
        })
        .collect();

    if numeric != structural {
        let extra: Vec<String> = numeric
            .iter()
            .filter(|s| structural.binary_search(s).is_err())
            .map(|&s| model.state_label(s))
            .collect();
        let missing: Vec<String> = structural
            .iter()
            .filter(|s| numeric.binary_search(s).is_err())
            .map(|&s| model.state_label(s))
            .collect();
        diagnostics.push(format!(
            "sweep-only states [{}], recurrent-only states [{}]",
            extra.join(" "),
            missing.join(" ")
        ));
    }
    let agreement = diagnostics.is_empty();
    Ok(StabilityReport { distributions, numeric, structural, classes, agreement, diagnostics })
}
