//! Finite zero-sum matrix games. Min picks the row, Max the column; entries
//! are paid by Min to Max.
//!
//! Values come from a dense simplex with Bland's rule. Floating results are
//! certified by their duality gap and re-solved in exact rationals when the
//! certificate misses the requested accuracy.


use crate::error::{Error, Result};
use crate::scalar::{convert, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGameResult<S> {
    pub value: S,
    /// Min's mixed strategy over rows.
    pub row_strategy: Vec<S>,
    /// Max's mixed strategy over columns.
    pub col_strategy: Vec<S>,
    /// Half the duality gap, a bound on `|value - val(G)|`.
    pub accuracy: S,
}

/// Which player optimizes a turn-based cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Min,
    Max,
}

/// Exact min or max of a list with lowest-index tie-break.
pub fn solve_turnbased_cell<S: Scalar>(values: &[S], side: Side) -> Result<(S, usize)> {
    let (first, rest) = values.split_first().ok_or(Error::EmptyValuation)?;
    let mut best = (first.clone(), 0);
    for (k, v) in rest.iter().enumerate() {
        let better = match side {
            Side::Min => *v < best.0,
            Side::Max => *v > best.0,
        };
        if better {
            best = (v.clone(), k + 1);
        }
    }
    Ok(best)
}

/// Pure `min_a max_b G_ab` with Max observing Min's row; returns the value,
/// Min's row and Max's best response to every row.
pub fn solve_sequential_cell<S: Scalar>(g: &[Vec<S>]) -> Result<(S, usize, Vec<usize>)> {
    let maxima = g
        .iter()
        .map(|row| solve_turnbased_cell(row, Side::Max))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<S> = maxima.iter().map(|(v, _)| v.clone()).collect();
    let (value, row) = solve_turnbased_cell(&values, Side::Min)?;
    Ok((value, row, maxima.into_iter().map(|(_, b)| b).collect()))
}

/// Value and optimal strategies of `G` to accuracy `eta`.
pub fn solve_matrix_game<S: Scalar>(g: &[Vec<S>], eta: &S) -> Result<MatrixGameResult<S>> {
    let m = g.len();
    let k = g.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 || k == 0 || g.iter().any(|r| r.len() != k) {
        return Err(Error::Parameter("matrix game must be a nonempty rectangle".into()));
    }
    if g.iter().flatten().any(|x| !x.is_finite_value()) {
        return Err(Error::NonFiniteGame);
    }
    if *eta < S::zero() || !eta.is_finite_value() {
        return Err(Error::Parameter(format!("accuracy must be nonnegative, got {eta}")));
    }
    let (row, col) = simplex_strategies(g);
    let result = certify(g, row, col);
    if S::EXACT || result.accuracy <= *eta {
        return Ok(result);
    }
    let exact: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(convert).collect()).collect();
    let (row, col) = simplex_strategies(&exact);
    let certified = certify(&exact, row, col);
    Ok(MatrixGameResult {
        value: S::from_rational(&certified.value),
        row_strategy: certified.row_strategy.iter().map(S::from_rational).collect(),
        col_strategy: certified.col_strategy.iter().map(S::from_rational).collect(),
        accuracy: S::zero(),
    })
}

fn certify<S: Scalar>(g: &[Vec<S>], row: Vec<S>, col: Vec<S>) -> MatrixGameResult<S> {
    let k = g[0].len();
    let upper = (0..k)
        .map(|b| row.iter().zip(g).fold(S::zero(), |acc, (p, r)| acc + p.clone() * r[b].clone()))
        .fold(None, |m: Option<S>, x| Some(m.map_or(x.clone(), |m| S::max_of(m, x))))
        .expect("k > 0");
    let lower = g
        .iter()
        .map(|r| r.iter().zip(&col).fold(S::zero(), |acc, (x, q)| acc + x.clone() * q.clone()))
        .fold(None, |m: Option<S>, x| Some(m.map_or(x.clone(), |m| S::min_of(m, x))))
        .expect("m > 0");
    let two = S::one() + S::one();
    let accuracy = S::max_of(S::zero(), (upper.clone() - lower.clone()) / two.clone());
    MatrixGameResult { value: (upper + lower) / two, row_strategy: row, col_strategy: col, accuracy }
}

/// Normalizes `G` into `[1, 2]` and solves `max Σy s.t. G'ᵀ y ≤ 1, y ≥ 0`.
/// Min's strategy is `y/Σy`; Max's comes from the slack reduced costs.
fn simplex_strategies<S: Scalar>(g: &[Vec<S>]) -> (Vec<S>, Vec<S>) {
    let m = g.len();
    let k = g[0].len();
    let lo = g.iter().flatten().fold(g[0][0].clone(), |a, x| S::min_of(a, x.clone()));
    let hi = g.iter().flatten().fold(g[0][0].clone(), |a, x| S::max_of(a, x.clone()));
    let range = hi - lo.clone();
    if range <= S::pivot_tolerance() {
        let row = (0..m).map(|a| if a == 0 { S::one() } else { S::zero() }).collect();
        let col = (0..k).map(|b| if b == 0 { S::one() } else { S::zero() }).collect();
        return (row, col);
    }
    let scaled = |a: usize, b: usize| (g[a][b].clone() - lo.clone()) / range.clone() + S::one();

    // Tableau rows: one per column constraint b; columns: y_0..y_{m-1}, slack_0..slack_{k-1}, rhs.
    let width = m + k;
    let mut t: Vec<Vec<S>> = (0..k)
        .map(|b| {
            let mut r: Vec<S> = (0..m).map(|a| scaled(a, b)).collect();
            r.extend((0..k).map(|s| if s == b { S::one() } else { S::zero() }));
            r.push(S::one());
            r
        })
        .collect();
    let mut objective: Vec<S> = (0..m).map(|_| -S::one()).chain((0..=k).map(|_| S::zero())).collect();
    let mut basis: Vec<usize> = (m..m + k).collect();
    let tol = S::pivot_tolerance();
    let neg_tol = -tol.clone();

    while let Some(enter) = (0..width).find(|&j| objective[j] < neg_tol) {
        let mut leave: Option<(usize, S)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[enter] > tol {
                let ratio = row[width].clone() / row[enter].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else { break };
        let pivot = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        let f = objective[enter].clone();
        for (x, p) in objective.iter_mut().zip(&pivot_row) {
            *x = x.clone() - f.clone() * p.clone();
        }
        basis[pr] = enter;
    }

    let mut y = vec![S::zero(); m];
    for (r, &var) in basis.iter().enumerate() {
        if var < m {
            y[var] = S::max_of(S::zero(), t[r][width].clone());
        }
    }
    let z: Vec<S> = (0..k).map(|b| S::max_of(S::zero(), objective[m + b].clone())).collect();
    (normalize(y), normalize(z))
}

fn normalize<S: Scalar>(v: Vec<S>) -> Vec<S> {
    let total = v.iter().fold(S::zero(), |a, x| a + x.clone());
    if total <= S::zero() {
        let n = v.len();
        return (0..n).map(|i| if i == 0 { S::one() } else { S::zero() }).collect();
    }
    v.into_iter().map(|x| x / total.clone()).collect()
}
