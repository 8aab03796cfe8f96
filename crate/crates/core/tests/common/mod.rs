#![allow(dead_code)]

use ergodic_games::format::{load_game, LoadedGame};
use ergodic_games::{EntropyGame, Rational, TurnBasedGame};
use num_traits::{One, Zero};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn turnbased_fixture(name: &str) -> (TurnBasedGame<f64>, TurnBasedGame<Rational>) {
    match load_game(fixture_path(name)).unwrap() {
        LoadedGame::TurnBased { float, exact: Some(exact) } => (float, exact),
        other => panic!("unexpected game {other:?}"),
    }
}

pub fn entropy_fixture(name: &str) -> EntropyGame {
    match load_game(fixture_path(name)).unwrap() {
        LoadedGame::Entropy(g) => g,
        other => panic!("unexpected game {other:?}"),
    }
}

/// Solves a square rational system, `None` when singular.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[i][j] -= d;
                }
                let d = &f * &b[col];
                b[i] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Value of a matrix game by enumerating square kernels: for a positive
/// matrix some nonsingular square submatrix `K` gives the value
/// `1 / (1ᵀ K⁻¹ 1)` with strategies proportional to `1ᵀ K⁻¹` and `K⁻¹ 1`.
pub fn value_by_support_enumeration(g: &[Vec<Rational>]) -> Rational {
    let m = g.len();
    let k = g[0].len();
    let lo = g.iter().flatten().min().unwrap().clone();
    let shift = Rational::one() - lo;
    let pos: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(|x| x + &shift).collect()).collect();
    for s in 1..=m.min(k) {
        for rows in subsets(m, s) {
            for cols in subsets(k, s) {
                let kern: Vec<Vec<Rational>> = rows.iter().map(|&i| cols.iter().map(|&j| pos[i][j].clone()).collect()).collect();
                let transpose: Vec<Vec<Rational>> = (0..s).map(|j| (0..s).map(|i| kern[i][j].clone()).collect()).collect();
                let (Some(col_w), Some(row_w)) =
                    (solve_exact(kern.clone(), vec![Rational::one(); s]), solve_exact(transpose, vec![Rational::one(); s]))
                else {
                    continue;
                };
                let total: Rational = col_w.iter().sum();
                if total <= Rational::zero() || col_w.iter().chain(&row_w).any(|x| *x < Rational::zero()) {
                    continue;
                }
                let v = Rational::one() / &total;
                let mut alpha = vec![Rational::zero(); m];
                for (idx, &i) in rows.iter().enumerate() {
                    alpha[i] = &row_w[idx] * &v;
                }
                let mut beta = vec![Rational::zero(); k];
                for (idx, &j) in cols.iter().enumerate() {
                    beta[j] = &col_w[idx] * &v;
                }
                let max_guard = (0..k).all(|b| (0..m).map(|a| &alpha[a] * &pos[a][b]).sum::<Rational>() <= v);
                let min_guard = (0..m).all(|a| (0..k).map(|b| &pos[a][b] * &beta[b]).sum::<Rational>() >= v);
                if max_guard && min_guard {
                    return v - shift;
                }
            }
        }
    }
    panic!("no kernel found");
}
