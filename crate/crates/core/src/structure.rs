//! Structural analysis of games: unichain and irreducibility checks, the
//! unichain and irreducibility indices of the damped transition matrices,
//! contraction certificates, entropy-game ambiguity, and the separation
//! bounds used to pick exact-solving precisions.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::game::{assumption_denominator, ConcurrentGame, EntropyGame, TurnBasedGame};
use crate::game::MixedRadix;
use crate::scalar::{bigint_ln, Rational, Scalar};

/// Largest state count accepted by the support-set searches.
pub const INDEX_MAX_STATES: usize = 12;

/// `(p_min, θ)` with `θ = p_min / (1 + p_min)`.
pub fn compute_pmin_theta<S: Scalar>(g: &ConcurrentGame<S>) -> Result<(S, S)> {
    let p = g.min_offdiagonal_probability().ok_or(Error::AllMassOnDiagonal)?;
    let theta = p.clone() / (S::one() + p.clone());
    Ok((p, theta))
}

/// [`compute_pmin_theta`], except that a single-state game (which has no
/// off-diagonal entries) gets `p_min = 1`, `θ = 1/2`.
pub fn effective_pmin_theta<S: Scalar>(g: &ConcurrentGame<S>) -> Result<(S, S)> {
    match compute_pmin_theta(g) {
        Err(Error::AllMassOnDiagonal) if g.n() == 1 => {
            let one = S::one();
            Ok((one.clone(), one.clone() / (one.clone() + one)))
        }
        other => other,
    }
}

/// Strongly connected components of a support digraph and, for each, whether
/// it is final (no arc leaves it).
fn final_classes(support: &[Vec<usize>]) -> (usize, Vec<Vec<usize>>) {
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..support.len()).map(|_| graph.add_node(())).collect();
    for (i, row) in support.iter().enumerate() {
        for &j in row {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0; support.len()];
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let finals = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter().all(|node| support[node.index()].iter().all(|&j| component[j] == *c))
        })
        .map(|(_, scc)| {
            let mut class: Vec<usize> = scc.iter().map(|x| x.index()).collect();
            class.sort_unstable();
            class
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    (sccs.len(), finals)
}

/// Final classes of a nonnegative matrix given by its support lists; more
/// than one means the matrix is multichain.
pub fn final_classes_of_support(support: &[Vec<usize>]) -> Vec<Vec<usize>> {
    final_classes(support).1
}

/// Whether the support digraph is strongly connected.
pub fn is_irreducible_support(support: &[Vec<usize>]) -> bool {
    final_classes(support).0 == 1
}

/// Per-state `(a, b)` profiles; row `i` of every induced matrix depends only
/// on the profile chosen at `i`.
fn profile_supports<S: Scalar>(g: &ConcurrentGame<S>) -> Vec<Vec<Vec<usize>>> {
    (0..g.n())
        .map(|i| {
            let mut rows = BTreeSet::new();
            for a in 0..g.min_action_count(i) {
                for b in 0..g.max_action_count(i) {
                    let row: Vec<usize> = g
                        .transition(i, a, b)
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| **p > S::zero())
                        .map(|(j, _)| j)
                        .collect();
                    rows.insert(row);
                }
            }
            rows.into_iter().collect()
        })
        .collect()
}

fn for_each_support<S: Scalar>(g: &ConcurrentGame<S>, cap: u128, mut f: impl FnMut(&[Vec<usize>]) -> bool) -> Result<bool> {
    let options = profile_supports(g);
    let count = options.iter().fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128));
    if count > cap {
        return Err(Error::PolicyCap { count, cap });
    }
    for choice in MixedRadix::new(options.iter().map(Vec::len).collect()) {
        let support: Vec<Vec<usize>> = choice.iter().enumerate().map(|(i, &c)| options[i][c].clone()).collect();
        if !f(&support) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every pure policy pair induces a unichain matrix.
pub fn check_unichain<S: Scalar>(g: &ConcurrentGame<S>, cap: u128) -> Result<bool> {
    for_each_support(g, cap, |s| final_classes(s).1.len() == 1)
}

/// Whether every pure policy pair induces an irreducible matrix.
pub fn check_irreducible<S: Scalar>(g: &ConcurrentGame<S>, cap: u128) -> Result<bool> {
    for_each_support(g, cap, is_irreducible_support)
}

fn mask(items: impl IntoIterator<Item = usize>) -> u64 {
    items.into_iter().fold(0, |m, j| m | (1u64 << j))
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(j)
    })
}

/// Keeps the inclusion-minimal sets.
fn minimal(sets: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut all: Vec<u64> = sets.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    all.sort_by_key(|s| (s.count_ones(), *s));
    let mut kept: Vec<u64> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| k & s == *k) {
            kept.push(s);
        }
    }
    kept
}

/// Row supports of the damped matrices `θI + (1−θ)P`, per state, as masks.
fn damped_row_options<S: Scalar>(g: &ConcurrentGame<S>) -> Vec<Vec<u64>> {
    profile_supports(g)
        .into_iter()
        .enumerate()
        .map(|(i, rows)| minimal(rows.into_iter().map(|r| mask(r) | (1 << i))))
        .collect()
}

/// All minimal one-step images `∪_{j∈S} R_j(c_j)` of a support set.
fn images(set: u64, options: &[Vec<u64>]) -> Vec<u64> {
    bits(set).fold(vec![0u64], |partial, j| {
        minimal(partial.iter().flat_map(|u| options[j].iter().map(move |o| u | o)))
    })
}

fn check_index_size(n: usize) -> Result<()> {
    if n > INDEX_MAX_STATES {
        return Err(Error::SearchCap(format!("{n} states, support search is limited to {INDEX_MAX_STATES}")));
    }
    Ok(())
}

/// Minimal support sets reachable from each singleton, level by level.
struct Reach<'a> {
    options: &'a [Vec<u64>],
    families: Vec<Vec<u64>>,
}

impl<'a> Reach<'a> {
    fn new(options: &'a [Vec<u64>]) -> Self {
        Self { options, families: (0..options.len()).map(|i| vec![1u64 << i]).collect() }
    }

    fn step(&mut self) {
        for fam in self.families.iter_mut() {
            *fam = minimal(fam.iter().flat_map(|&s| images(s, self.options)).collect::<Vec<_>>());
        }
    }

    fn pairwise_intersecting(&self) -> bool {
        let n = self.families.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.families[i].iter().all(|a| self.families[j].iter().all(|b| a & b != 0)))
        })
    }

    fn all_full(&self) -> bool {
        let full = if self.families.len() == 64 { u64::MAX } else { (1u64 << self.families.len()) - 1 };
        self.families.iter().all(|f| f.iter().all(|&s| s == full))
    }
}

/// Smallest `k` such that every `k`-fold product of damped transition
/// matrices has pairwise intersecting row supports.
///
/// Two row supports evolve with independent per-state choices as long as
/// they are disjoint, and supports only grow, so it suffices to track the
/// minimal reachable support sets from each state separately.
pub fn unichain_index<S: Scalar>(g: &ConcurrentGame<S>) -> Result<usize> {
    let n = g.n();
    check_index_size(n)?;
    let options = damped_row_options(g);
    let mut reach = Reach::new(&options);
    for k in 1..=n {
        reach.step();
        if reach.pairwise_intersecting() {
            return Ok(k);
        }
    }
    Err(Error::NotUnichain)
}

/// Smallest `k` such that every `k`-fold product of damped transition
/// matrices is positive.
pub fn irreducibility_index<S: Scalar>(g: &ConcurrentGame<S>) -> Result<usize> {
    let n = g.n();
    check_index_size(n)?;
    let options = damped_row_options(g);
    let mut reach = Reach::new(&options);
    for k in 1..=n {
        reach.step();
        if reach.all_full() {
            return Ok(k);
        }
    }
    Err(Error::NotIrreducible)
}

/// Contraction certificate: `T_θ^q` contracts Hilbert's seminorm at rate `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction<S> {
    pub q: usize,
    pub gamma: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport<S> {
    /// `None` when the policy count exceeds the enumeration cap.
    pub is_unichain: Option<bool>,
    pub is_irreducible: Option<bool>,
    pub k_uni: Option<usize>,
    pub k_irr: Option<usize>,
    pub p_min: S,
    pub theta: S,
    pub contraction: Option<Contraction<S>>,
}

fn power<S: Scalar>(x: &S, k: usize) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

/// Best available certificate from `k_uni` and `k_irr`.
pub fn contraction_certificate<S: Scalar>(n: usize, theta: &S, k_uni: Option<usize>, k_irr: Option<usize>) -> Option<Contraction<S>> {
    let uni = k_uni.map(|q| Contraction { q, gamma: S::one() - power(theta, q) });
    let irr = k_irr
        .map(|q| Contraction { q, gamma: S::one() - S::from_usize_exact(n) * power(theta, q) })
        .filter(|c| c.gamma > S::zero());
    match (uni, irr) {
        (Some(u), Some(i)) if i.gamma < u.gamma => Some(i),
        (Some(u), _) => Some(u),
        (None, i) => i,
    }
}

/// Runs every analysis the game's size permits.
pub fn analyze_structure<S: Scalar>(g: &ConcurrentGame<S>, cap: u128) -> Result<StructureReport<S>> {
    let (p_min, theta) = effective_pmin_theta(g)?;
    let capped = |r: Result<bool>| match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::PolicyCap { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let is_unichain = capped(check_unichain(g, cap))?;
    let is_irreducible = capped(check_irreducible(g, cap))?;
    let index = |flag: Option<bool>, f: fn(&ConcurrentGame<S>) -> Result<usize>| match flag {
        Some(true) if g.n() <= INDEX_MAX_STATES => f(g).map(Some),
        _ => Ok(None),
    };
    let k_uni = index(is_unichain, unichain_index)?;
    let k_irr = index(is_irreducible, irreducibility_index)?;
    let contraction = contraction_certificate(g.n(), &theta, k_uni, k_irr);
    Ok(StructureReport { is_unichain, is_irreducible, k_uni, k_irr, p_min, theta, contraction })
}

/// Precision `ε = (1−θ) / (n² M^{2(n−1)})` below which rounding the
/// relative value iteration yields optimal policies of a turn-based game.
pub fn turnbased_epsilon(g: &TurnBasedGame<Rational>) -> Result<Rational> {
    let game = g.game();
    let m = assumption_denominator(game)?;
    let (_, theta) = effective_pmin_theta(game)?;
    let n = BigInt::from(game.n());
    let denom = &n * &n * Pow::pow(&m, 2 * (game.n() as u32 - 1));
    Ok((Rational::one() - theta) / Rational::from_integer(denom))
}

/// `(n·M^{n−1})^{−2}`, the minimal gap between distinct policy values.
pub fn separation_turnbased(n: usize, m: &BigInt) -> Rational {
    let base = BigInt::from(n) * Pow::pow(m, n.saturating_sub(1) as u32);
    Rational::new(BigInt::one(), &base * &base)
}

/// `ln ν_n` with `ν_n = 2^n (n+1)^{8n} n^{2n²+n+1} e^{4n²} max(1, W/2)^{4n²}`.
pub fn nu_n_log(n: usize, w: u64) -> f64 {
    let nf = n as f64;
    let sq = nf * nf;
    nf * 2f64.ln()
        + 8.0 * nf * (nf + 1.0).ln()
        + (2.0 * sq + nf + 1.0) * nf.ln()
        + 4.0 * sq
        + 4.0 * sq * (w as f64 / 2.0).max(1.0).ln()
}

/// `ln(1 + e^x)` without overflow.
fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln ε` for the entropy-game precision `ε = (1 + (m̲+W)ν_n)^{−1}`.
pub fn entropy_epsilon_log(n: usize, m_lower: u64, w: u64) -> f64 {
    -log1p_exp(((m_lower + w) as f64).ln() + nu_n_log(n, w))
}

/// Contraction data of an irreducible entropy game.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyContraction {
    pub k_irr: usize,
    /// `A_l` for `l = 1..=k_irr`.
    pub ambiguity_l: Vec<BigUint>,
    pub ambiguity: f64,
    pub m_bar: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub is_irreducible: bool,
    pub w: u64,
    /// Minimum off-diagonal multiplicity, or 1 when there is none.
    pub m_lower: u64,
    pub has_offdiagonal: bool,
    /// Multiplicative damping `ϑ = m̲`.
    pub vartheta: u64,
    pub nu_n_log: f64,
    pub epsilon_log: f64,
    pub contraction: Option<EntropyContraction>,
}

/// Distinct induced supports of an entropy game, one list of row masks per
/// policy pair.
fn entropy_policy_supports(g: &EntropyGame, cap: u128) -> Result<Vec<Vec<u64>>> {
    let mut out = BTreeSet::new();
    for pp in g.policy_space().enumerate(cap)? {
        let m = g.induced_entropy_matrix(&pp)?;
        out.insert(m.iter().map(|row| mask(row.iter().enumerate().filter(|(_, x)| **x > 0).map(|(j, _)| j))).collect::<Vec<_>>());
    }
    Ok(out.into_iter().collect())
}

/// Whether every policy pair induces an irreducible matrix.
pub fn check_entropy_irreducible(g: &EntropyGame, cap: u128) -> Result<bool> {
    Ok(entropy_policy_supports(g, cap)?.iter().all(|rows| {
        let support: Vec<Vec<usize>> = rows.iter().map(|&r| bits(r).collect()).collect();
        is_irreducible_support(&support)
    }))
}

/// Irreducibility index of an entropy game on the damped matrices
/// `ϑI + M^{σ,τ}`. Tribunes are shared between Despots, so each step
/// chooses a whole policy pair.
pub fn entropy_irreducibility_index(g: &EntropyGame, cap: u128) -> Result<usize> {
    let n = g.n();
    check_index_size(n)?;
    let policies: Vec<Vec<u64>> = entropy_policy_supports(g, cap)?
        .into_iter()
        .map(|rows| rows.into_iter().enumerate().map(|(d, r)| r | (1 << d)).collect())
        .collect();
    let full = (1u64 << n) - 1;
    let mut families: Vec<Vec<u64>> = (0..n).map(|d| vec![1u64 << d]).collect();
    for k in 1..=n {
        for fam in families.iter_mut() {
            *fam = minimal(
                fam.iter()
                    .flat_map(|&s| policies.iter().map(move |rows| bits(s).fold(0, |acc, d| acc | rows[d])))
                    .collect::<Vec<_>>(),
            );
        }
        if families.iter().all(|f| f.iter().all(|&s| s == full)) {
            return Ok(k);
        }
    }
    Err(Error::NotIrreducible)
}

/// `A_l` for `l = 1..=max_len`.
///
/// For a fixed column `e_{d'}`, `max_{M} (M w)_d` is attained for all `d` by
/// one policy pair (each Tribune maximizes `m_p · w` independently of the
/// Despot), and `w ↦ M w` is monotone, so the backward greedy recursion
/// gives the exact entrywise maximum of every product.
pub fn ambiguity_sequence(g: &EntropyGame, max_len: usize) -> Vec<BigUint> {
    let n = g.n();
    let best_step = |w: &[BigUint]| -> Vec<BigUint> {
        let people_value = |p: usize| {
            g.people_moves(p).iter().fold(BigUint::zero(), |acc, &(d, m)| acc + BigUint::from(m) * &w[d])
        };
        let tribune_value: Vec<BigUint> = (0..g.tribunes().len())
            .map(|t| g.tribune_moves(t).iter().map(|&p| people_value(p)).max().unwrap_or_default())
            .collect();
        (0..n)
            .map(|d| g.despot_moves(d).iter().map(|&t| tribune_value[t].clone()).max().unwrap_or_default())
            .collect()
    };
    let mut out = vec![BigUint::zero(); max_len];
    for target in 0..n {
        let mut w: Vec<BigUint> = (0..n).map(|d| if d == target { BigUint::one() } else { BigUint::zero() }).collect();
        for a in out.iter_mut() {
            w = best_step(&w);
            if let Some(m) = w.iter().max() {
                if *m > *a {
                    *a = m.clone();
                }
            }
        }
    }
    out
}

fn biguint_ln(x: &BigUint) -> f64 {
    bigint_ln(&BigInt::from(x.clone()))
}

/// Entropy-game analysis: multiplicities, ambiguity, contraction rate and
/// separation bound.
pub fn entropy_structure(g: &EntropyGame, cap: u128) -> Result<EntropyReport> {
    let n = g.n();
    let w = g.max_multiplicity();
    let offdiagonal = g.min_offdiagonal_multiplicity();
    let m_lower = offdiagonal.unwrap_or(1);
    let is_irreducible = check_entropy_irreducible(g, cap)?;
    let contraction = if is_irreducible {
        let k_irr = entropy_irreducibility_index(g, cap)?;
        let ambiguity_l = ambiguity_sequence(g, k_irr);
        let ambiguity = ambiguity_l
            .iter()
            .enumerate()
            .map(|(l, a)| (biguint_ln(a) / (l + 1) as f64).exp())
            .fold(0.0, f64::max);
        let m_bar = (1.0 + ambiguity / m_lower as f64).powi(k_irr as i32);
        let gamma = (m_bar - 1.0) / (m_bar + 1.0);
        Some(EntropyContraction { k_irr, ambiguity_l, ambiguity, m_bar, gamma })
    } else {
        None
    };
    Ok(EntropyReport {
        is_irreducible,
        w,
        m_lower,
        has_offdiagonal: offdiagonal.is_some(),
        vartheta: m_lower,
        nu_n_log: nu_n_log(n, w),
        epsilon_log: entropy_epsilon_log(n, m_lower, w),
        contraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{EntropyEdge, StateSpec, DEFAULT_POLICY_CAP};

    fn spec(name: &str, na: usize, nb: usize) -> StateSpec {
        StateSpec {
            name: name.into(),
            min_actions: (0..na).map(|a| format!("a{a}")).collect(),
            max_actions: (0..nb).map(|b| format!("b{b}")).collect(),
        }
    }

    /// One action per state with the given transition rows.
    fn markov(rows: Vec<Vec<f64>>) -> ConcurrentGame<f64> {
        let n = rows.len();
        ConcurrentGame::new(
            (0..n).map(|i| spec(&format!("s{i}"), 1, 1)).collect(),
            vec![vec![vec![0.0]]; n],
            rows.into_iter().map(|r| vec![vec![r]]).collect(),
        )
        .unwrap()
    }

    fn cycle(n: usize) -> ConcurrentGame<f64> {
        markov((0..n).map(|i| (0..n).map(|j| if j == (i + 1) % n { 1.0 } else { 0.0 }).collect()).collect())
    }

    #[test]
    fn pmin_examples() {
        let uniform = markov(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(compute_pmin_theta(&uniform).unwrap(), (0.5, 1.0 / 3.0));
        assert_eq!(compute_pmin_theta(&cycle(3)).unwrap(), (1.0, 0.5));
        let absorbing = markov(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(compute_pmin_theta(&absorbing), Err(Error::AllMassOnDiagonal));
    }

    #[test]
    fn unichain_and_irreducible_checks() {
        let absorbing = markov(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(!check_unichain(&absorbing, DEFAULT_POLICY_CAP).unwrap());
        let positive = markov(vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
        assert!(check_irreducible(&positive, DEFAULT_POLICY_CAP).unwrap());
        let transient = markov(vec![vec![0.5, 0.5], vec![0.0, 1.0]]);
        assert!(check_unichain(&transient, DEFAULT_POLICY_CAP).unwrap());
        assert!(!check_irreducible(&transient, DEFAULT_POLICY_CAP).unwrap());
        assert!(matches!(check_unichain(&positive, 0), Err(Error::PolicyCap { .. })));
    }

    #[test]
    fn indices() {
        let positive = markov(vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
        assert_eq!(unichain_index(&positive).unwrap(), 1);
        assert_eq!(irreducibility_index(&positive).unwrap(), 1);
        // damped 3-cycle: supports {i,i+1} pairwise intersect after one step
        // for adjacent states only; positivity needs two steps
        assert_eq!(unichain_index(&cycle(3)).unwrap(), 1);
        assert_eq!(irreducibility_index(&cycle(3)).unwrap(), 2);
        assert_eq!(unichain_index(&cycle(4)).unwrap(), 2);
        assert_eq!(irreducibility_index(&cycle(4)).unwrap(), 3);
        let absorbing = markov(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(unichain_index(&absorbing), Err(Error::NotUnichain));
        let single = markov(vec![vec![1.0]]);
        assert_eq!(unichain_index(&single).unwrap(), 1);
        assert_eq!(irreducibility_index(&single).unwrap(), 1);
    }

    #[test]
    fn certificate_prefers_smaller_rate() {
        let c = contraction_certificate(3, &0.25, Some(1), None).unwrap();
        assert_eq!((c.q, c.gamma), (1, 0.75));
        let c = contraction_certificate(2, &0.5, Some(2), Some(1)).unwrap();
        assert_eq!((c.q, c.gamma), (2, 0.75));
        let c = contraction_certificate(2, &0.5, Some(1), Some(1)).unwrap();
        assert_eq!((c.q, c.gamma), (1, 0.5));
    }

    #[test]
    fn separation_examples() {
        assert_eq!(separation_turnbased(1, &1.into()), Rational::one());
        assert_eq!(separation_turnbased(2, &2.into()), Rational::new(1.into(), 16.into()));
        assert_eq!(separation_turnbased(3, &2.into()), Rational::new(1.into(), 144.into()));
    }

    #[test]
    fn turnbased_epsilon_single_state() {
        let g = ConcurrentGame::new(
            vec![spec("x", 1, 1), spec("y", 1, 1)],
            vec![vec![vec![Rational::from_integer(1.into())]], vec![vec![Rational::zero()]]],
            vec![
                vec![vec![vec![Rational::zero(), Rational::one()]]],
                vec![vec![vec![Rational::one(), Rational::zero()]]],
            ],
        )
        .unwrap();
        // deterministic moves: M = 1, θ = 1/2, ε = (1/2)/4
        assert_eq!(turnbased_epsilon(&TurnBasedGame::new(g)).unwrap(), Rational::new(1.into(), 8.into()));
    }

    #[test]
    fn nu_n_small_case() {
        let expected = 2.0 * 2f64.ln() + 16.0 * 3f64.ln() + 11.0 * 2f64.ln() + 16.0;
        assert!((nu_n_log(2, 1) - expected).abs() < 1e-12 * expected);
        assert!(entropy_epsilon_log(2, 1, 1) < -expected);
    }

    fn entropy_edges(list: &[(&str, &str, Option<u64>)]) -> Vec<EntropyEdge> {
        list.iter().map(|(f, t, m)| EntropyEdge { from: (*f).into(), to: (*t).into(), multiplicity: *m }).collect()
    }

    #[test]
    fn entropy_two_cycle_report() {
        let g = EntropyGame::new(
            vec!["d0".into(), "d1".into()],
            vec!["t0".into(), "t1".into()],
            vec!["p0".into(), "p1".into()],
            entropy_edges(&[
                ("d0", "t0", None),
                ("t0", "p0", None),
                ("p0", "d1", Some(1)),
                ("d1", "t1", None),
                ("t1", "p1", None),
                ("p1", "d0", Some(1)),
            ]),
        )
        .unwrap();
        let r = entropy_structure(&g, DEFAULT_POLICY_CAP).unwrap();
        assert!(r.is_irreducible);
        assert_eq!((r.w, r.m_lower, r.vartheta), (1, 1, 1));
        let c = r.contraction.unwrap();
        // ϑI + M is already positive for the damped 2-cycle
        assert_eq!(c.k_irr, 1);
        assert_eq!(c.ambiguity_l, vec![BigUint::one()]);
        assert_eq!(c.m_bar, 2.0);
        assert!((c.gamma - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_readout() {
        let g = EntropyGame::new(
            vec!["d0".into(), "d1".into()],
            vec!["t0".into(), "t1".into()],
            vec!["p0".into(), "p1".into()],
            entropy_edges(&[
                ("d0", "t0", None),
                ("t0", "p0", None),
                ("p0", "d1", Some(2)),
                ("d1", "t1", None),
                ("t1", "p1", None),
                ("p1", "d0", Some(3)),
            ]),
        )
        .unwrap();
        let r = entropy_structure(&g, DEFAULT_POLICY_CAP).unwrap();
        assert_eq!((r.w, r.m_lower), (3, 2));
        let c = r.contraction.unwrap();
        assert_eq!(c.ambiguity_l, vec![BigUint::from(3u32)]);
    }
}
