//! Small reference games used in tests, docs and the CLI's bundled inputs.

use crate::game::Game;
use crate::rational::{int, Rational};

fn cells(rows: &[&[(i64, i64)]]) -> Vec<Vec<(Rational, Rational)>> {
    rows.iter()
        .map(|r| r.iter().map(|&(a, b)| (int(a), int(b))).collect())
        .collect()
}

/// Prisoner's dilemma: no strong Nash equilibrium, one closed cycle over all four cells.
pub fn prisoners_dilemma() -> Game {
    Game::bimatrix(&cells(&[&[(-2, -2), (-10, -1)], &[(-1, -10), (-5, -5)]]))
        .expect("static game")
}

/// 3x3 game with strong Nash equilibrium `(a1,b1)` and a four-profile closed cycle.
pub fn example_two() -> Game {
    example_two_with(int(4))
}

/// [`example_two`] with the row player's payoff at `(a2,b2)` replaced.
pub fn example_two_with(row_payoff_a2b2: Rational) -> Game {
    let mut c = cells(&[
        &[(4, 4), (0, 0), (0, 0)],
        &[(0, 0), (4, 5), (1, 6)],
        &[(0, 0), (2, 5), (6, 1)],
    ]);
    c[1][1].0 = row_payoff_a2b2;
    Game::bimatrix(&c).expect("static game")
}

/// Young's symmetric 3x3 coordination game; `(s3,s3)` is payoff and risk dominant.
pub fn young_three_by_three() -> Game {
    let names = vec![
        vec!["s1".to_string(), "s2".into(), "s3".into()],
        vec!["s1".to_string(), "s2".into(), "s3".into()],
    ];
    Game::bimatrix(&cells(&[
        &[(6, 6), (0, 5), (0, 0)],
        &[(5, 0), (7, 7), (5, 5)],
        &[(0, 0), (5, 5), (8, 8)],
    ]))
    .and_then(|g| g.with_action_names(names))
    .expect("static game")
}

/// 2x2 game with `s1`/`s2` action names from row-major `(row, column)` payoffs.
pub fn two_by_two(cells_: [[(Rational, Rational); 2]; 2]) -> Game {
    let names = vec![
        vec!["s1".to_string(), "s2".into()],
        vec!["s1".to_string(), "s2".into()],
    ];
    let rows: Vec<Vec<(Rational, Rational)>> = cells_.iter().map(|r| r.to_vec()).collect();
    Game::bimatrix(&rows)
        .and_then(|g| g.with_action_names(names))
        .expect("2x2 shape")
}
