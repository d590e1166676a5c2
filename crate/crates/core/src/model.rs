use crate::game::Coalition;
use crate::rational::Rational;

/// A finite state space on which coalitions deviate: action profiles of a
/// strategic game, or networks of a network formation game.
///
/// States are indexed `0..num_states()` in a canonical order. Everything
/// downstream (improvement sets, deviation graphs, Markov chains) is written
/// against this trait.
pub trait CoalitionalModel: Sync {
    fn num_players(&self) -> usize;

    fn num_states(&self) -> usize;

    fn payoff(&self, player: usize, state: usize) -> &Rational;

    /// States the coalition can move to from `state`, sorted ascending and
    /// always including `state` itself.
    fn reachable_states(&self, coalition: Coalition, state: usize) -> Vec<usize>;

    /// `reachable_states(coalition, state).len()`, ideally without building the list.
    fn reachable_count(&self, coalition: Coalition, state: usize) -> usize {
        self.reachable_states(coalition, state).len()
    }

    fn state_label(&self, state: usize) -> String;
}
