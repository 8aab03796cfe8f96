//! Brute-force ground truth for desk-scale games: exact mean payoffs of
//! policy pairs, exhaustive pure saddle-point search and Perron roots.

use std::collections::HashMap;

use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::game::{EntropyGame, PurePolicyPair, TurnBasedGame};
use crate::numeric::StochasticMatrix;
use crate::scalar::{convert, Rational, Scalar};
use crate::structure::final_classes_of_support;

/// Gain of a unichain matrix from the gain–bias equations
/// `g + h_i = r_i + Σ_j P_ij h_j`, `h_0 = 0`, solved exactly.
pub fn gain_exact<S: Scalar>(p: &StochasticMatrix<S>, r: &[S]) -> Result<Rational> {
    let n = p.dim();
    if r.len() != n {
        return Err(Error::Dimension { expected: n, got: r.len() });
    }
    let finals = final_classes_of_support(&p.support());
    if finals.len() > 1 {
        return Err(Error::Multichain(finals));
    }
    // unknowns: g, h_1, ..., h_{n-1}
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); n + 1];
            row[0] = Rational::one();
            for j in 1..n {
                let pij: Rational = convert(p.get(i, j));
                row[j] = if i == j { Rational::one() - pij } else { -pij };
            }
            row[n] = convert(&r[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::MultipleInvariantMeasures)?;
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &pv;
        }
        let prow = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Ok(a[0][n].clone())
}

/// Exact mean payoff `ρ(σ, τ)` of a policy pair.
pub fn mean_payoff_of_pair<S: Scalar>(g: &TurnBasedGame<S>, pp: &PurePolicyPair) -> Result<Rational> {
    let (p, r) = g.induced_matrix_and_payoff(pp)?;
    gain_exact(&p, &r)
}

/// Payoff table over pure policy pairs and every saddle point in it.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleResult<V> {
    pub min_policies: Vec<Vec<usize>>,
    pub max_policies: Vec<Vec<usize>>,
    /// `table[s][t]` is the payoff of `(min_policies[s], max_policies[t])`.
    pub table: Vec<Vec<V>>,
    /// Index pairs `(s, t)` of all saddle points.
    pub saddles: Vec<(usize, usize)>,
    pub value: V,
}

impl<V> SaddleResult<V> {
    pub fn saddle_pairs(&self) -> Vec<PurePolicyPair> {
        self.saddles
            .iter()
            .map(|&(s, t)| PurePolicyPair { sigma: self.min_policies[s].clone(), tau: self.max_policies[t].clone() })
            .collect()
    }

    pub fn is_saddle(&self, pp: &PurePolicyPair) -> bool {
        self.saddles
            .iter()
            .any(|&(s, t)| self.min_policies[s] == pp.sigma && self.max_policies[t] == pp.tau)
    }
}

/// Saddle points of a table where Min picks the row and Max the column:
/// entries that are maximal in their row and minimal in their column, up to
/// `tol`.
fn scan_saddles<V: Clone + PartialOrd>(table: &[Vec<V>], within: impl Fn(&V, &V) -> bool) -> Vec<(usize, usize)> {
    let cols = table.first().map_or(0, Vec::len);
    let row_max: Vec<&V> = table
        .iter()
        .map(|row| row.iter().fold(&row[0], |m, x| if x > m { x } else { m }))
        .collect();
    let col_min: Vec<&V> = (0..cols)
        .map(|t| table.iter().map(|row| &row[t]).fold(&table[0][t], |m, x| if x < m { x } else { m }))
        .collect();
    let mut out = Vec::new();
    for (s, row) in table.iter().enumerate() {
        for (t, v) in row.iter().enumerate() {
            if within(v, row_max[s]) && within(col_min[t], v) {
                out.push((s, t));
            }
        }
    }
    out
}

/// Exhaustive pure saddle search of a unichain turn-based game.
pub fn turnbased_saddle<S: Scalar>(g: &TurnBasedGame<S>, cap: u128) -> Result<SaddleResult<Rational>> {
    let space = g.policy_space();
    space.check_cap(cap)?;
    let min_policies: Vec<Vec<usize>> = space.min_policies().collect();
    let max_policies: Vec<Vec<usize>> = space.max_policies().collect();
    let mut by_profile: HashMap<Vec<(usize, usize)>, Rational> = HashMap::new();
    let mut table = Vec::with_capacity(min_policies.len());
    for sigma in &min_policies {
        let mut row = Vec::with_capacity(max_policies.len());
        for tau in &max_policies {
            let pp = PurePolicyPair { sigma: sigma.clone(), tau: tau.clone() };
            let profile = g.action_profile(&pp)?;
            let value = match by_profile.get(&profile) {
                Some(v) => v.clone(),
                None => {
                    let v = mean_payoff_of_pair(g, &pp)?;
                    by_profile.insert(profile, v.clone());
                    v
                }
            };
            row.push(value);
        }
        table.push(row);
    }
    let saddles = scan_saddles(&table, |a, b| a >= b);
    let &(s, t) = saddles.first().ok_or(Error::NoSaddle)?;
    let value = table[s][t].clone();
    Ok(SaddleResult { min_policies, max_policies, table, saddles, value })
}

/// Certified accuracy of [`spectral_radius`].
pub const SPECTRAL_TOLERANCE: f64 = 1e-10;
const SPECTRAL_MAX_ITERS: usize = 1_000_000;

/// Perron root of an irreducible nonnegative block, by power iteration on
/// `I + B` with Collatz–Wielandt bounds.
fn irreducible_radius(b: &[Vec<f64>]) -> Result<f64> {
    let n = b.len();
    if n == 1 {
        return Ok(b[0][0]);
    }
    let mut x = vec![1.0; n];
    for _ in 0..SPECTRAL_MAX_ITERS {
        let y: Vec<f64> = (0..n).map(|i| x[i] + b[i].iter().zip(&x).map(|(m, v)| m * v).sum::<f64>()).collect();
        let (lo, hi) = y
            .iter()
            .zip(&x)
            .map(|(a, v)| a / v)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if hi - lo <= SPECTRAL_TOLERANCE {
            return Ok((lo + hi) / 2.0 - 1.0);
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        x = y.iter().map(|v| v / scale).collect();
    }
    Err(Error::SpectralNonConvergence)
}

/// Strongly connected components of the support of `m`, each with the
/// Perron root of its diagonal block, plus the component of every index.
fn component_radii(m: &[Vec<f64>]) -> Result<(Vec<Vec<usize>>, Vec<f64>, Vec<usize>)> {
    let n = m.len();
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let comps: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut owner = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &i in comp {
            owner[i] = c;
        }
    }
    let radii = comps
        .iter()
        .map(|comp| {
            let block: Vec<Vec<f64>> = comp.iter().map(|&i| comp.iter().map(|&j| m[i][j]).collect()).collect();
            irreducible_radius(&block)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((comps, radii, owner))
}

fn check_square(m: &[Vec<f64>]) -> Result<()> {
    if m.is_empty() {
        return Err(Error::EmptyValuation);
    }
    if let Some(row) = m.iter().find(|r| r.len() != m.len()) {
        return Err(Error::Dimension { expected: m.len(), got: row.len() });
    }
    if m.iter().flatten().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Parameter("spectral radius needs a finite nonnegative matrix".into()));
    }
    Ok(())
}

/// Perron root of a nonnegative matrix, the largest root over its strongly
/// connected blocks.
pub fn spectral_radius(m: &[Vec<f64>]) -> Result<f64> {
    check_square(m)?;
    let (_, radii, _) = component_radii(m)?;
    Ok(radii.into_iter().fold(0.0, f64::max))
}

/// Growth rate from every initial index: the largest Perron root among the
/// blocks accessible from it.
pub fn accessible_spectral_radii(m: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_square(m)?;
    let n = m.len();
    let (_, radii, owner) = component_radii(m)?;
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            let mut best = 0.0f64;
            while let Some(i) = stack.pop() {
                best = best.max(radii[owner[i]]);
                for j in 0..n {
                    if m[i][j] > 0.0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            Ok(best)
        })
        .collect()
}

/// Exhaustive pure saddle search of an entropy game. Each table entry is the
/// vector of growth rates per initial Despot vertex; a saddle must be one for
/// every initial vertex, up to twice the spectral tolerance.
pub fn entropy_saddle(g: &EntropyGame, cap: u128) -> Result<SaddleResult<Vec<f64>>> {
    let space = g.policy_space();
    space.check_cap(cap)?;
    let min_policies: Vec<Vec<usize>> = space.min_policies().collect();
    let max_policies: Vec<Vec<usize>> = space.max_policies().collect();
    let mut table = Vec::with_capacity(min_policies.len());
    for sigma in &min_policies {
        let row = max_policies
            .iter()
            .map(|tau| {
                let m = g.induced_entropy_matrix(&PurePolicyPair { sigma: sigma.clone(), tau: tau.clone() })?;
                let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
                accessible_spectral_radii(&mf)
            })
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    let tol = 2.0 * SPECTRAL_TOLERANCE;
    let n = g.n();
    let mut saddles: Option<Vec<(usize, usize)>> = None;
    for d in 0..n {
        let scalar: Vec<Vec<f64>> = table.iter().map(|row| row.iter().map(|v| v[d]).collect()).collect();
        let found = scan_saddles(&scalar, |a, b| *a >= *b - tol);
        saddles = Some(match saddles {
            None => found,
            Some(prev) => prev.into_iter().filter(|p| found.contains(p)).collect(),
        });
    }
    let saddles = saddles.unwrap_or_default();
    let &(s, t) = saddles.first().ok_or(Error::NoSaddle)?;
    let value = table[s][t].clone();
    Ok(SaddleResult { min_policies, max_policies, table, saddles, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ConcurrentGame, StateSpec};

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn radii() {
        assert!((spectral_radius(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(spectral_radius(&[vec![2.0]]).unwrap(), 2.0);
        let r = spectral_radius(&[vec![1.0, 2.0], vec![3.0, 1.0]]).unwrap();
        assert!((r - (1.0 + 6f64.sqrt())).abs() < 1e-10);
        assert!((spectral_radius(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(spectral_radius(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(), 0.0);
    }

    #[test]
    fn accessible_rule() {
        // 0 -> 1, 1 has a self-loop of weight 3, 0 has weight 2
        let m = vec![vec![2.0, 1.0], vec![0.0, 3.0]];
        assert_eq!(accessible_spectral_radii(&m).unwrap(), vec![3.0, 3.0]);
        let m = vec![vec![5.0, 1.0], vec![0.0, 3.0]];
        assert_eq!(accessible_spectral_radii(&m).unwrap(), vec![5.0, 3.0]);
    }

    #[test]
    fn two_cycle_gain() {
        let spec = |n: &str| StateSpec { name: n.into(), min_actions: vec!["a".into()], max_actions: vec!["b".into()] };
        let g = ConcurrentGame::new(
            vec![spec("x"), spec("y")],
            vec![vec![vec![q(3, 1)]], vec![vec![q(8, 1)]]],
            vec![vec![vec![vec![q(0, 1), q(1, 1)]]], vec![vec![vec![q(1, 1), q(0, 1)]]]],
        )
        .unwrap();
        let g = TurnBasedGame::new(g);
        let pp = PurePolicyPair { sigma: vec![0, 0], tau: vec![0, 0] };
        assert_eq!(mean_payoff_of_pair(&g, &pp).unwrap(), q(11, 2));
        let saddle = turnbased_saddle(&g, 10).unwrap();
        assert_eq!(saddle.value, q(11, 2));
        assert_eq!(saddle.saddle_pairs(), vec![pp]);
    }

    #[test]
    fn multichain_pair_lists_classes() {
        let p = StochasticMatrix::new(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        assert_eq!(gain_exact(&p, &[q(0, 1), q(1, 1)]), Err(Error::Multichain(vec![vec![0], vec![1]])));
    }
}
