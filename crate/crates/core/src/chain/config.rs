use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::deviation::ImprovementMode;
use crate::error::{Error, Result};
use crate::game::{enumerate_coalitions, Coalition};
use crate::rational::{fmt_rational, int, sum, Rational};

/// Distribution over a nonempty support of candidate target states.
pub trait ChoiceRule: Send + Sync + fmt::Debug {
    /// One weight per element of `support`, in the same order.
    fn weights(&self, coalition: Coalition, from: usize, support: &[usize]) -> Vec<Rational>;
}

/// Every candidate equally likely.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformChoice;

impl ChoiceRule for UniformChoice {
    fn weights(&self, _: Coalition, _: usize, support: &[usize]) -> Vec<Rational> {
        let share = Rational::new(1.into(), support.len().into());
        vec![share; support.len()]
    }
}

/// Mutation scale `f(S, a)`; the error probability of coalition `S` at state `a` is `f(S,a)·ε`.
pub trait MutationScale: Send + Sync + fmt::Debug {
    fn scale(&self, coalition: Coalition, state: usize) -> Rational;
}

#[derive(Debug, Clone)]
pub struct ConstantScale(pub Rational);

impl MutationScale for ConstantScale {
    fn scale(&self, _: Coalition, _: usize) -> Rational {
        self.0.clone()
    }
}

/// Wraps a closure as a [`MutationScale`].
pub struct ScaleFn<F>(pub F);

impl<F> fmt::Debug for ScaleFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScaleFn(..)")
    }
}

impl<F> MutationScale for ScaleFn<F>
where
    F: Fn(Coalition, usize) -> Rational + Send + Sync,
{
    fn scale(&self, coalition: Coalition, state: usize) -> Rational {
        (self.0)(coalition, state)
    }
}

/// Parameters of the coalitional better-response process.
#[derive(Debug, Clone)]
pub struct DynamicsConfig {
    pub mode: ImprovementMode,
    /// `p_S` for every nonempty coalition, in canonical coalition order.
    pub coalition_weights: Vec<(Coalition, Rational)>,
    pub improvement_choice: Arc<dyn ChoiceRule>,
    pub error_choice: Arc<dyn ChoiceRule>,
    pub mutation: Arc<dyn MutationScale>,
}

impl DynamicsConfig {
    /// Uniform `p_S`, uniform choice rules and `f ≡ 1`.
    pub fn uniform(num_players: usize, mode: ImprovementMode) -> Result<Self> {
        let coalitions = enumerate_coalitions(num_players)?;
        let share = Rational::new(1.into(), coalitions.len().into());
        Ok(DynamicsConfig {
            mode,
            coalition_weights: coalitions.into_iter().map(|s| (s, share.clone())).collect(),
            improvement_choice: Arc::new(UniformChoice),
            error_choice: Arc::new(UniformChoice),
            mutation: Arc::new(ConstantScale(int(1))),
        })
    }

    pub fn with_mutation(mut self, mutation: Arc<dyn MutationScale>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn with_coalition_weights(mut self, weights: Vec<(Coalition, Rational)>) -> Self {
        self.coalition_weights = weights;
        self
    }

    pub fn with_improvement_choice(mut self, rule: Arc<dyn ChoiceRule>) -> Self {
        self.improvement_choice = rule;
        self
    }

    pub fn with_error_choice(mut self, rule: Arc<dyn ChoiceRule>) -> Self {
        self.error_choice = rule;
        self
    }

    /// `p_S` must be positive on every nonempty coalition and sum to one.
    pub fn validate_coalitions(&self, num_players: usize) -> Result<()> {
        let expected = enumerate_coalitions(num_players)?;
        let given: Vec<Coalition> = self.coalition_weights.iter().map(|(s, _)| *s).collect();
        if given != expected {
            return Err(Error::InvalidConfig(format!(
                "coalition weights must list all {} nonempty coalitions in canonical order",
                expected.len()
            )));
        }
        if let Some((s, p)) = self.coalition_weights.iter().find(|(_, p)| !p.is_positive()) {
            return Err(Error::InvalidConfig(format!(
                "p_S for {s} is {}, must be positive",
                fmt_rational(p)
            )));
        }
        let total = sum(self.coalition_weights.iter().map(|(_, p)| p));
        if !total.is_one() {
            return Err(Error::InvalidConfig(format!(
                "coalition weights sum to {}, not 1",
                fmt_rational(&total)
            )));
        }
        Ok(())
    }
}

/// Checks a choice rule's output on one support.
pub(crate) fn checked_weights(
    rule: &dyn ChoiceRule,
    what: &str,
    coalition: Coalition,
    from: usize,
    support: &[usize],
) -> Result<Vec<Rational>> {
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let w = rule.weights(coalition, from, support);
    if w.len() != support.len() {
        return Err(Error::InvalidConfig(format!(
            "{what} rule returned {} weights for a support of {} at coalition {coalition}, state {from}",
            w.len(),
            support.len()
        )));
    }
    if w.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidConfig(format!(
            "{what} rule gave a non-positive weight at coalition {coalition}, state {from}"
        )));
    }
    let total = sum(&w);
    if !total.is_one() {
        return Err(Error::InvalidConfig(format!(
            "{what} rule weights sum to {} at coalition {coalition}, state {from}",
            fmt_rational(&total)
        )));
    }
    Ok(w)
}

pub(crate) fn checked_scale(mutation: &dyn MutationScale, coalition: Coalition, state: usize) -> Result<Rational> {
    let f = mutation.scale(coalition, state);
    if f.is_zero() || f.is_negative() {
        return Err(Error::InvalidConfig(format!(
            "mutation scale f({coalition}, {state}) = {} must be positive",
            fmt_rational(&f)
        )));
    }
    Ok(f)
}
