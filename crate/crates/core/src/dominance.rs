//! Payoff and risk dominance for two-player coordination games.

use crate::error::{Error, Result};
use crate::game::{Game, Profile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub payoff_dominant: Option<Profile>,
    pub risk_dominant: Option<Profile>,
    /// Only set for 2x2 games.
    pub r1: Option<Rational>,
    pub r2: Option<Rational>,
    /// Pairwise contests between diagonal equilibria (m x m case).
    pub contests: Vec<PairwiseContest>,
}

/// Risk-dominance contest between diagonal equilibria `(first, first)` and `(second, second)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseContest {
    pub first: usize,
    pub second: usize,
    /// `None` when the restricted 2x2 game is not a coordination game.
    pub ratios: Option<(Rational, Rational)>,
    pub winner: Option<usize>,
}

struct Cells {
    a: [[Rational; 2]; 2],
    b: [[Rational; 2]; 2],
}

fn restricted(game: &Game, j: usize, k: usize) -> Cells {
    let idx = [j, k];
    let at = |p: usize, r: usize, c: usize| game.payoff(p, &Profile(vec![idx[r], idx[c]])).clone();
    Cells {
        a: [[at(0, 0, 0), at(0, 0, 1)], [at(0, 1, 0), at(0, 1, 1)]],
        b: [[at(1, 0, 0), at(1, 0, 1)], [at(1, 1, 0), at(1, 1, 1)]],
    }
}

fn coordination_defect(c: &Cells) -> Option<&'static str> {
    if c.a[0][0] <= c.a[1][0] {
        Some("a11 > a21 fails")
    } else if c.b[0][0] <= c.b[0][1] {
        Some("b11 > b12 fails")
    } else if c.a[1][1] <= c.a[0][1] {
        Some("a22 > a12 fails")
    } else if c.b[1][1] <= c.b[1][0] {
        Some("b22 > b21 fails")
    } else {
        None
    }
}

/// `(R1, R2)`: the smallest opponent probability on the other action that still
/// makes each diagonal a best reply, minimised over the two players.
fn risk_ratios(c: &Cells) -> (Rational, Rational) {
    let (a, b) = (&c.a, &c.b);
    let da = &a[0][0] - &a[0][1] - &a[1][0] + &a[1][1];
    let db = &b[0][0] - &b[0][1] - &b[1][0] + &b[1][1];
    let r1 = ((&a[0][0] - &a[1][0]) / &da).min((&b[0][0] - &b[0][1]) / &db);
    let r2 = ((&a[1][1] - &a[0][1]) / &da).min((&b[1][1] - &b[1][0]) / &db);
    (r1, r2)
}

fn diag(k: usize) -> Profile {
    Profile(vec![k, k])
}

/// Exact 2x2 analysis. Requires `a11>a21, b11>b12, a22>a12, b22>b21`.
pub fn dominance_2x2(game: &Game) -> Result<DominanceReport> {
    if game.action_counts() != [2, 2] {
        return Err(Error::NotCoordinationGame("game is not 2x2".into()));
    }
    let cells = restricted(game, 0, 1);
    if let Some(defect) = coordination_defect(&cells) {
        return Err(Error::NotCoordinationGame(defect.into()));
    }
    let (r1, r2) = risk_ratios(&cells);
    let (a, b) = (&cells.a, &cells.b);
    let payoff_dominant = if a[0][0] > a[1][1] && b[0][0] > b[1][1] {
        Some(diag(0))
    } else if a[0][0] < a[1][1] && b[0][0] < b[1][1] {
        Some(diag(1))
    } else {
        None
    };
    let risk_dominant = match r1.cmp(&r2) {
        std::cmp::Ordering::Greater => Some(diag(0)),
        std::cmp::Ordering::Less => Some(diag(1)),
        std::cmp::Ordering::Equal => None,
    };
    Ok(DominanceReport { payoff_dominant, risk_dominant, r1: Some(r1), r2: Some(r2), contests: Vec::new() })
}

/// Symmetric m x m coordination game. Risk dominance is decided by pairwise
/// 2x2 contests among the strict diagonal equilibria; an equilibrium is risk
/// dominant only if it wins every contest it takes part in.
pub fn dominance_symmetric(game: &Game) -> Result<DominanceReport> {
    let counts = game.action_counts();
    if counts.len() != 2 || counts[0] != counts[1] {
        return Err(Error::NotCoordinationGame("game is not square two-player".into()));
    }
    let m = counts[0];
    for j in 0..m {
        for k in 0..m {
            if game.payoff(0, &Profile(vec![j, k])) != game.payoff(1, &Profile(vec![k, j])) {
                return Err(Error::NotCoordinationGame("game is not symmetric".into()));
            }
        }
    }
    if m == 2 {
        return dominance_2x2(game);
    }
    let u = |p: usize, r: usize, c: usize| game.payoff(p, &Profile(vec![r, c]));
    let equilibria: Vec<usize> = (0..m)
        .filter(|&k| (0..m).filter(|&j| j != k).all(|j| u(0, k, k) > u(0, j, k) && u(1, k, k) > u(1, k, j)))
        .collect();
    if equilibria.len() < 2 {
        return Err(Error::NotCoordinationGame(
            "fewer than two strict diagonal equilibria".into(),
        ));
    }

    let payoff_dominant = equilibria
        .iter()
        .copied()
        .find(|&k| {
            equilibria
                .iter()
                .filter(|&&j| j != k)
                .all(|&j| u(0, k, k) > u(0, j, j) && u(1, k, k) > u(1, j, j))
        })
        .map(diag);

    let mut contests = Vec::new();
    for (x, &j) in equilibria.iter().enumerate() {
        for &k in &equilibria[x + 1..] {
            let cells = restricted(game, j, k);
            let (ratios, winner) = if coordination_defect(&cells).is_some() {
                (None, None)
            } else {
                let (r1, r2) = risk_ratios(&cells);
                let winner = match r1.cmp(&r2) {
                    std::cmp::Ordering::Greater => Some(j),
                    std::cmp::Ordering::Less => Some(k),
                    std::cmp::Ordering::Equal => None,
                };
                (Some((r1, r2)), winner)
            };
            contests.push(PairwiseContest { first: j, second: k, ratios, winner });
        }
    }
    let risk_dominant = equilibria
        .iter()
        .copied()
        .find(|&k| {
            contests
                .iter()
                .filter(|c| c.first == k || c.second == k)
                .all(|c| c.winner == Some(k))
        })
        .map(diag);

    Ok(DominanceReport { payoff_dominant, risk_dominant, r1: None, r2: None, contests })
}
