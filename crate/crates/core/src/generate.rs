//! Seeded random instances for property tests and benchmarks.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::game::{ConcurrentGame, EntropyEdge, EntropyGame, StateSpec, TurnBasedGame, DEFAULT_POLICY_CAP};
use crate::numeric::StochasticMatrix;
use crate::scalar::Rational;
use crate::structure::{check_entropy_irreducible, check_unichain, compute_pmin_theta};

/// Row-stochastic matrix with a random support and weights.
pub fn random_stochastic_matrix<R: Rng>(rng: &mut R, n: usize) -> StochasticMatrix<f64> {
    let rows = (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.6) { rng.gen_range(0.0..1.0) } else { 0.0 })
                .collect();
            if row.iter().all(|x| *x == 0.0) {
                row[rng.gen_range(0..n)] = 1.0;
            }
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= total);
            row
        })
        .collect();
    StochasticMatrix::new(rows).expect("normalized rows")
}

/// Shape of random stochastic games.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameShape {
    pub max_states: usize,
    pub max_actions: usize,
    pub max_denominator: u32,
    /// Payments are drawn from `-max_payoff..=max_payoff`.
    pub max_payoff: i64,
    /// One player moves at each state.
    pub turn_based: bool,
}

impl Default for GameShape {
    fn default() -> Self {
        Self { max_states: 3, max_actions: 3, max_denominator: 4, max_payoff: 5, turn_based: true }
    }
}

fn random_row<R: Rng>(rng: &mut R, n: usize, max_denominator: u32) -> Vec<Rational> {
    let den = rng.gen_range(1..=max_denominator);
    let mut counts = vec![0u32; n];
    let support = rng.gen_range(1..=n.min(den as usize));
    let mut states: Vec<usize> = (0..n).collect();
    states.shuffle(rng);
    let chosen = &states[..support];
    for &j in chosen {
        counts[j] = 1;
    }
    for _ in support as u32..den {
        counts[*chosen.choose(rng).expect("nonempty")] += 1;
    }
    counts.into_iter().map(|c| Rational::new(BigInt::from(c), BigInt::from(den))).collect()
}

/// Random game with rational transitions of bounded denominator and integer
/// payments.
pub fn random_game<R: Rng>(rng: &mut R, shape: &GameShape) -> ConcurrentGame<Rational> {
    let n = rng.gen_range(1..=shape.max_states);
    let mut states = Vec::with_capacity(n);
    let mut payoff = Vec::with_capacity(n);
    let mut transition = Vec::with_capacity(n);
    for i in 0..n {
        let (na, nb) = if shape.turn_based {
            let k = rng.gen_range(1..=shape.max_actions);
            if rng.gen_bool(0.5) {
                (k, 1)
            } else {
                (1, k)
            }
        } else {
            (rng.gen_range(1..=shape.max_actions), rng.gen_range(1..=shape.max_actions))
        };
        states.push(StateSpec {
            name: format!("s{i}"),
            min_actions: (0..na).map(|a| format!("a{a}")).collect(),
            max_actions: (0..nb).map(|b| format!("b{b}")).collect(),
        });
        payoff.push(
            (0..na)
                .map(|_| (0..nb).map(|_| Rational::from_integer(rng.gen_range(-shape.max_payoff..=shape.max_payoff).into())).collect())
                .collect(),
        );
        transition.push((0..na).map(|_| (0..nb).map(|_| random_row(rng, n, shape.max_denominator)).collect()).collect());
    }
    ConcurrentGame::new(states, payoff, transition).expect("generated game is valid")
}

/// Rejection-samples a unichain game with at least one off-diagonal
/// transition (or a single state).
pub fn random_unichain_game<R: Rng>(rng: &mut R, shape: &GameShape) -> ConcurrentGame<Rational> {
    loop {
        let g = random_game(rng, shape);
        let damping_defined = g.n() == 1 || compute_pmin_theta(&g).is_ok();
        if damping_defined && check_unichain(&g, DEFAULT_POLICY_CAP).unwrap_or(false) {
            return g;
        }
    }
}

/// Random unichain turn-based game.
pub fn random_unichain_turnbased<R: Rng>(rng: &mut R, shape: &GameShape) -> TurnBasedGame<Rational> {
    TurnBasedGame::new(random_unichain_game(rng, &GameShape { turn_based: true, ..*shape }))
}

/// Random entropy game where every vertex is reachable from a Despot.
pub fn random_entropy_game<R: Rng>(rng: &mut R, max_despots: usize, max_multiplicity: u64) -> EntropyGame {
    let n = rng.gen_range(1..=max_despots);
    let nt = rng.gen_range(1..=n + 1);
    let np = rng.gen_range(1..=nt + 1);
    let despots: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    let tribunes: Vec<String> = (0..nt).map(|i| format!("t{i}")).collect();
    let people: Vec<String> = (0..np).map(|i| format!("p{i}")).collect();
    let mut edges = Vec::new();
    let mut link = |from: &[String], to: &[String], weight: &mut dyn FnMut() -> Option<u64>, rng: &mut R| {
        let mut used = vec![false; to.len()];
        for f in from {
            let k = rng.gen_range(1..=to.len().min(2));
            let mut targets: Vec<usize> = (0..to.len()).collect();
            targets.shuffle(rng);
            for &t in &targets[..k] {
                used[t] = true;
                edges.push(EntropyEdge { from: f.clone(), to: to[t].clone(), multiplicity: weight() });
            }
        }
        for (t, u) in used.iter().enumerate() {
            if !u {
                let f = from.choose(rng).expect("nonempty");
                edges.push(EntropyEdge { from: f.clone(), to: to[t].clone(), multiplicity: weight() });
            }
        }
    };
    link(&despots, &tribunes, &mut || None, rng);
    link(&tribunes, &people, &mut || None, rng);
    let weights: Vec<u64> = (0..4 * np * n).map(|_| rng.gen_range(1..=max_multiplicity)).collect();
    let mut next = weights.into_iter();
    link(&people, &despots, &mut || next.next(), rng);
    EntropyGame::new(despots, tribunes, people, edges).expect("generated entropy game is valid")
}

/// Rejection-samples an irreducible entropy game.
pub fn random_irreducible_entropy_game<R: Rng>(rng: &mut R, max_despots: usize, max_multiplicity: u64) -> EntropyGame {
    loop {
        let g = random_entropy_game(rng, max_despots, max_multiplicity);
        if check_entropy_irreducible(&g, DEFAULT_POLICY_CAP).unwrap_or(false) {
            return g;
        }
    }
}
