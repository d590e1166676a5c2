use std::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};
use crate::graph;
use crate::rational::{fmt_rational, to_f64, Rational};

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Chains up to this many states are solved exactly over the rationals.
    pub exact_limit: usize,
    /// Max-norm residual accepted from the floating-point solver.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { exact_limit: 512, tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub epsilon: Rational,
    /// Present when solved over the rationals.
    pub exact: Option<Vec<Rational>>,
    pub approx: Vec<f64>,
    /// `max_j |(μP)_j − μ_j|`, zero for exact solutions.
    pub residual: f64,
}

impl StationaryDistribution {
    pub fn mass(&self, state: usize) -> f64 {
        self.approx[state]
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Grassmann-Taksar-Heyman state reduction. Needs no subtraction, so it is
/// stable in floating point. `p` must be the transition matrix of an
/// irreducible chain; returns `None` when a reduction step finds no exit.
fn gth<T>(mut p: Vec<Vec<T>>) -> Option<Vec<T>>
where
    T: Clone + Zero + One + PartialOrd + Add<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = p.len();
    for k in (1..n).rev() {
        let s = p[k][..k].iter().fold(T::zero(), |acc, x| acc + x.clone());
        if !(s > T::zero()) {
            return None;
        }
        for i in 0..k {
            p[i][k] = p[i][k].clone() / s.clone();
        }
        for i in 0..k {
            let pik = p[i][k].clone();
            if pik.is_zero() {
                continue;
            }
            for j in 0..k {
                if !p[k][j].is_zero() {
                    p[i][j] = p[i][j].clone() + pik.clone() * p[k][j].clone();
                }
            }
        }
    }
    let mut pi = vec![T::zero(); n];
    pi[0] = T::one();
    for j in 1..n {
        pi[j] = (0..j).fold(T::zero(), |acc, i| acc + pi[i].clone() * p[i][j].clone());
    }
    let total = pi.iter().fold(T::zero(), |acc, x| acc + x.clone());
    Some(pi.into_iter().map(|x| x / total.clone()).collect())
}

/// Exact stationary vector of an irreducible rational chain. Scales `P − I` to
/// integers by the lcm of the denominators, replaces one balance equation by
/// `Σμ = 1` and runs fraction-free (Bareiss) elimination, which keeps every
/// intermediate an exact integer without gcd work. `None` if singular.
fn bareiss_stationary(p: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = p.len();
    let lcm = p.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // a[j][i] = L (P − I)[i][j], i.e. the transposed generator; last row = ones
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..n)
                .map(|i| {
                    let scaled = p[i][j].numer() * (&lcm / p[i][j].denom());
                    if i == j { scaled - &lcm } else { scaled }
                })
                .collect();
            row.push(BigInt::zero());
            row
        })
        .collect();
    a[n - 1] = vec![BigInt::one(); n + 1];

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, pivot);
        for r in k + 1..n {
            for c in k + 1..=n {
                let v = (&a[k][k] * &a[r][c] - &a[r][k] * &a[k][c]) / &prev;
                a[r][c] = v;
            }
            a[r][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = Rational::from_integer(a[k][n].clone());
        for c in k + 1..n {
            if !a[k][c].is_zero() {
                acc -= Rational::from_integer(a[k][c].clone()) * &x[c];
            }
        }
        x[k] = acc / Rational::from_integer(a[k][k].clone());
    }
    Some(x)
}

fn residual_f64(p: &[Vec<f64>], mu: &[f64]) -> f64 {
    let n = mu.len();
    (0..n)
        .map(|j| ((0..n).map(|i| mu[i] * p[i][j]).sum::<f64>() - mu[j]).abs())
        .fold(0.0, f64::max)
}

/// Exact check of `μP = μ` and `Σμ = 1`.
pub fn is_exactly_stationary(matrix: &TransitionMatrix, mu: &[Rational]) -> bool {
    let n = matrix.num_states();
    if mu.len() != n || !mu.iter().fold(Rational::zero(), |a, x| a + x).is_one() {
        return false;
    }
    (0..n).all(|j| {
        let lhs = (0..n).fold(Rational::zero(), |acc, i| acc + &mu[i] * &matrix.rows[i][j]);
        lhs == mu[j]
    })
}

fn solve_sub(matrix: &TransitionMatrix, states: &[usize], options: &SolverOptions) -> Result<(Option<Vec<Rational>>, Vec<f64>, f64)> {
    let degenerate = || Error::Degenerate(format!(
        "chain restricted to {} states at epsilon {} is not irreducible",
        states.len(),
        fmt_rational(&matrix.epsilon)
    ));
    if states.len() <= options.exact_limit {
        let sub: Vec<Vec<Rational>> = states
            .iter()
            .map(|&i| states.iter().map(|&j| matrix.rows[i][j].clone()).collect())
            .collect();
        let mu = bareiss_stationary(&sub).ok_or_else(degenerate)?;
        let approx = mu.iter().map(to_f64).collect();
        return Ok((Some(mu), approx, 0.0));
    }
    let sub: Vec<Vec<f64>> = states
        .iter()
        .map(|&i| states.iter().map(|&j| to_f64(&matrix.rows[i][j])).collect())
        .collect();
    let mu = gth(sub.clone()).ok_or_else(degenerate)?;
    let residual = residual_f64(&sub, &mu);
    if !(residual <= options.tolerance) {
        return Err(Error::Degenerate(format!(
            "floating-point solve residual {residual:e} above tolerance {:e}",
            options.tolerance
        )));
    }
    Ok((None, mu, residual))
}

/// The unique stationary distribution of a chain with a single recurrent class
/// (every `ε > 0` chain). Chains with several recurrent classes are rejected;
/// use [`stationary_on_class`] for those.
pub fn stationary(matrix: &TransitionMatrix, options: &SolverOptions) -> Result<StationaryDistribution> {
    let classes = chain_recurrent_classes(matrix);
    if classes.len() != 1 {
        return Err(Error::Degenerate(format!(
            "chain at epsilon {} has {} recurrent classes; stationary distribution is not unique",
            fmt_rational(&matrix.epsilon),
            classes.len()
        )));
    }
    stationary_on_class(matrix, &classes[0], options)
}

/// Stationary distribution supported on one closed class of a reducible chain
/// (typically a recurrent class of the unperturbed chain).
pub fn stationary_on_class(
    matrix: &TransitionMatrix,
    class: &[usize],
    options: &SolverOptions,
) -> Result<StationaryDistribution> {
    let n = matrix.num_states();
    let mut inside = vec![false; n];
    for &s in class {
        inside[s] = true;
    }
    let support = matrix.support();
    for &s in class {
        if support[s].iter().any(|&t| !inside[t]) {
            return Err(Error::InvalidArgument(format!("state {s} leaves the designated class")));
        }
    }
    let mut states = class.to_vec();
    states.sort_unstable();
    let (sub_exact, sub_approx, residual) = solve_sub(matrix, &states, options)?;
    let mut approx = vec![0.0; n];
    for (&s, &m) in states.iter().zip(&sub_approx) {
        approx[s] = m;
    }
    let exact = sub_exact.map(|mu| {
        let mut full = vec![Rational::zero(); n];
        for (&s, m) in states.iter().zip(mu) {
            full[s] = m;
        }
        full
    });
    Ok(StationaryDistribution { epsilon: matrix.epsilon.clone(), exact, approx, residual })
}

/// Recurrent classes of a chain: sink components of its transition support.
pub fn chain_recurrent_classes(matrix: &TransitionMatrix) -> Vec<Vec<usize>> {
    graph::sink_components(&matrix.support())
}
