//! Game data model: concurrent and turn-based stochastic games, entropy
//! games, and pure policy pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::StochasticMatrix;
use crate::scalar::{convert, Rational, Scalar};

/// Default cap on the number of enumerated pure policy pairs.
pub const DEFAULT_POLICY_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub name: String,
    pub min_actions: Vec<String>,
    pub max_actions: Vec<String>,
}

/// Finite zero-sum stochastic game with simultaneous moves.
///
/// `payoff[i][a][b]` is paid by Min to Max; `transition[i][a][b][j]` is the
/// probability of moving to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrentGame<S> {
    states: Vec<StateSpec>,
    payoff: Vec<Vec<Vec<S>>>,
    transition: Vec<Vec<Vec<Vec<S>>>>,
}

fn cell_location(spec: &StateSpec, i: usize, a: usize, b: usize) -> String {
    format!(
        "state '{}' (#{i}), min action '{}', max action '{}'",
        spec.name, spec.min_actions[a], spec.max_actions[b]
    )
}

impl<S: Scalar> ConcurrentGame<S> {
    pub fn new(states: Vec<StateSpec>, payoff: Vec<Vec<Vec<S>>>, transition: Vec<Vec<Vec<Vec<S>>>>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::Schema("game has no states".into()));
        }
        if payoff.len() != n || transition.len() != n {
            return Err(Error::Schema(format!(
                "expected payoff and transition tables for {n} states, got {} and {}",
                payoff.len(),
                transition.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, spec) in states.iter().enumerate() {
            if !seen.insert(spec.name.as_str()) {
                return Err(Error::Schema(format!("duplicate state name '{}'", spec.name)));
            }
            if spec.min_actions.is_empty() || spec.max_actions.is_empty() {
                return Err(Error::Schema(format!("state '{}' (#{i}) has an empty action set", spec.name)));
            }
            let (na, nb) = (spec.min_actions.len(), spec.max_actions.len());
            if payoff[i].len() != na || payoff[i].iter().any(|r| r.len() != nb) {
                return Err(Error::Schema(format!("payoff of state '{}' (#{i}) must be {na}x{nb}", spec.name)));
            }
            if transition[i].len() != na || transition[i].iter().any(|r| r.len() != nb) {
                return Err(Error::Schema(format!("transition of state '{}' (#{i}) must be {na}x{nb}", spec.name)));
            }
            for a in 0..na {
                for b in 0..nb {
                    let loc = || cell_location(spec, i, a, b);
                    if !payoff[i][a][b].is_finite_value() {
                        return Err(Error::Schema(format!("non-finite payoff at {}", loc())));
                    }
                    let row = &transition[i][a][b];
                    if row.len() != n {
                        return Err(Error::Schema(format!("transition at {} has {} entries, expected {n}", loc(), row.len())));
                    }
                    if let Some(j) = row.iter().position(|x| !x.is_finite_value() || *x < S::zero()) {
                        return Err(Error::Schema(format!(
                            "transition at {} to state #{j} is negative or non-finite",
                            loc()
                        )));
                    }
                    let sum = row.iter().fold(S::zero(), |acc, x| acc + x.clone());
                    if (sum.clone() - S::one()).abs() > S::row_sum_tolerance() {
                        return Err(Error::RowSum { location: loc(), sum: sum.to_string() });
                    }
                }
            }
        }
        Ok(Self { states, payoff, transition })
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[StateSpec] {
        &self.states
    }

    pub fn min_action_count(&self, i: usize) -> usize {
        self.states[i].min_actions.len()
    }

    pub fn max_action_count(&self, i: usize) -> usize {
        self.states[i].max_actions.len()
    }

    pub fn payoff(&self, i: usize, a: usize, b: usize) -> &S {
        &self.payoff[i][a][b]
    }

    pub fn transition(&self, i: usize, a: usize, b: usize) -> &[S] {
        &self.transition[i][a][b]
    }

    pub fn payoff_table(&self) -> &[Vec<Vec<S>>] {
        &self.payoff
    }

    pub fn transition_table(&self) -> &[Vec<Vec<Vec<S>>>] {
        &self.transition
    }

    /// Converts every number to another scalar type.
    pub fn map<T: Scalar>(&self) -> ConcurrentGame<T> {
        ConcurrentGame {
            states: self.states.clone(),
            payoff: self.payoff.iter().map(|s| s.iter().map(|r| r.iter().map(convert).collect()).collect()).collect(),
            transition: self
                .transition
                .iter()
                .map(|s| s.iter().map(|r| r.iter().map(|p| p.iter().map(convert).collect()).collect()).collect())
                .collect(),
        }
    }

    /// Stage matrix `G_ab = r_i^{ab} + Σ_j P_ij^{ab} v_j` of state `i`.
    pub fn stage_matrix(&self, i: usize, v: &[S]) -> Vec<Vec<S>> {
        self.payoff[i]
            .iter()
            .zip(&self.transition[i])
            .map(|(pay_row, trans_row)| {
                pay_row
                    .iter()
                    .zip(trans_row)
                    .map(|(r, p)| r.clone() + crate::numeric::dot(p, v))
                    .collect()
            })
            .collect()
    }

    /// `max |r_i^{ab}|`.
    pub fn payoff_sup_norm(&self) -> S {
        self.payoff.iter().flatten().flatten().fold(S::zero(), |m, x| S::max_of(m, x.abs()))
    }

    /// Whether every payment is an integer.
    pub fn has_integer_payoffs(&self) -> bool {
        self.payoff
            .iter()
            .flatten()
            .flatten()
            .all(|x| x.to_rational().map(|r| r.is_integer()).unwrap_or(false))
    }

    /// Least common multiple of all transition denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.transition
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.to_rational().expect("finite").denom()))
    }

    /// Number of per-state action profiles `Π_i |A(i)|·|B(i)|`.
    pub fn profile_count(&self) -> u128 {
        (0..self.n())
            .map(|i| (self.min_action_count(i) * self.max_action_count(i)) as u128)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    /// Transition matrix and payments selected by one `(a, b)` pair per state.
    pub fn induced_by_profile(&self, profile: &[(usize, usize)]) -> Result<(StochasticMatrix<S>, Vec<S>)> {
        if profile.len() != self.n() {
            return Err(Error::InvalidPolicy(format!("profile has {} entries, expected {}", profile.len(), self.n())));
        }
        let mut rows = Vec::with_capacity(self.n());
        let mut pay = Vec::with_capacity(self.n());
        for (i, &(a, b)) in profile.iter().enumerate() {
            if a >= self.min_action_count(i) || b >= self.max_action_count(i) {
                return Err(Error::InvalidPolicy(format!(
                    "action pair ({a},{b}) out of range at state '{}' (#{i})",
                    self.states[i].name
                )));
            }
            rows.push(self.transition[i][a][b].clone());
            pay.push(self.payoff[i][a][b].clone());
        }
        Ok((StochasticMatrix::from_rows_unchecked(rows), pay))
    }

    pub fn policy_space(&self) -> PolicySpace {
        PolicySpace {
            min_radices: (0..self.n()).map(|i| self.min_action_count(i)).collect(),
            max_radices: (0..self.n()).map(|i| self.max_action_count(i)).collect(),
        }
    }

    /// Per-state `(a, b)` profile of a policy pair; both players pick per state.
    pub fn action_profile(&self, pp: &PurePolicyPair) -> Result<Vec<(usize, usize)>> {
        self.policy_space().validate(pp)?;
        Ok(pp.sigma.iter().copied().zip(pp.tau.iter().copied()).collect())
    }

    /// `(P^{σ,τ}, r^{σ,τ})` by coordinate selection.
    pub fn induced_matrix_and_payoff(&self, pp: &PurePolicyPair) -> Result<(StochasticMatrix<S>, Vec<S>)> {
        self.induced_by_profile(&self.action_profile(pp)?)
    }

    /// Smallest positive off-diagonal transition probability, if any.
    pub fn min_offdiagonal_probability(&self) -> Option<S> {
        let mut best: Option<S> = None;
        for (i, state) in self.transition.iter().enumerate() {
            for p in state.iter().flatten().flat_map(|row| row.iter().enumerate()) {
                let (j, x) = p;
                if j != i && *x > S::zero() {
                    best = Some(match best {
                        Some(b) => S::min_of(b, x.clone()),
                        None => x.clone(),
                    });
                }
            }
        }
        best
    }
}

/// Who moves at a state of a turn-based game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    /// Both action sets are singletons.
    Forced,
    Min,
    Max,
    /// Min moves first, then Max responds having observed Min's action.
    Sequential,
}

/// Perfect-information game stored in the concurrent layout.
///
/// At every state Min picks `a`, then Max picks `b` knowing `a`, so the
/// stage value is the pure `min_a max_b`. States where one action set is a
/// singleton are the usual Min/Max states. Max's decision points are the
/// pairs `(i, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TurnBasedGame<S> {
    game: ConcurrentGame<S>,
}

impl<S: Scalar> TurnBasedGame<S> {
    pub fn new(game: ConcurrentGame<S>) -> Self {
        Self { game }
    }

    pub fn game(&self) -> &ConcurrentGame<S> {
        &self.game
    }

    pub fn n(&self) -> usize {
        self.game.n()
    }

    pub fn control(&self, i: usize) -> Control {
        match (self.game.min_action_count(i) > 1, self.game.max_action_count(i) > 1) {
            (false, false) => Control::Forced,
            (true, false) => Control::Min,
            (false, true) => Control::Max,
            (true, true) => Control::Sequential,
        }
    }

    pub fn map<T: Scalar>(&self) -> TurnBasedGame<T> {
        TurnBasedGame { game: self.game.map() }
    }

    /// Index of the Max decision point `(i, a)` in a flattened `tau`.
    pub fn max_point(&self, i: usize, a: usize) -> usize {
        (0..i).map(|j| self.game.min_action_count(j)).sum::<usize>() + a
    }

    pub fn policy_space(&self) -> PolicySpace {
        let g = &self.game;
        PolicySpace {
            min_radices: (0..g.n()).map(|i| g.min_action_count(i)).collect(),
            max_radices: (0..g.n())
                .flat_map(|i| std::iter::repeat_n(g.max_action_count(i), g.min_action_count(i)))
                .collect(),
        }
    }

    pub fn action_profile(&self, pp: &PurePolicyPair) -> Result<Vec<(usize, usize)>> {
        self.policy_space().validate(pp)?;
        Ok((0..self.n())
            .map(|i| {
                let a = pp.sigma[i];
                (a, pp.tau[self.max_point(i, a)])
            })
            .collect())
    }

    pub fn induced_matrix_and_payoff(&self, pp: &PurePolicyPair) -> Result<(StochasticMatrix<S>, Vec<S>)> {
        self.game.induced_by_profile(&self.action_profile(pp)?)
    }
}

/// One action per Min decision point and one per Max decision point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PurePolicyPair {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

/// Mixed-radix description of all pure policy pairs of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicySpace {
    pub min_radices: Vec<usize>,
    pub max_radices: Vec<usize>,
}

fn radix_product(r: &[usize]) -> u128 {
    r.iter().fold(1u128, |acc, &k| acc.saturating_mul(k as u128))
}

impl PolicySpace {
    pub fn min_count(&self) -> u128 {
        radix_product(&self.min_radices)
    }

    pub fn max_count(&self) -> u128 {
        radix_product(&self.max_radices)
    }

    pub fn count(&self) -> u128 {
        self.min_count().saturating_mul(self.max_count())
    }

    pub fn check_cap(&self, cap: u128) -> Result<()> {
        let count = self.count();
        if count > cap {
            return Err(Error::PolicyCap { count, cap });
        }
        Ok(())
    }

    pub fn validate(&self, pp: &PurePolicyPair) -> Result<()> {
        if pp.sigma.len() != self.min_radices.len() || pp.tau.len() != self.max_radices.len() {
            return Err(Error::InvalidPolicy(format!(
                "expected {} Min and {} Max choices, got {} and {}",
                self.min_radices.len(),
                self.max_radices.len(),
                pp.sigma.len(),
                pp.tau.len()
            )));
        }
        for (k, (&c, &r)) in pp.sigma.iter().zip(&self.min_radices).enumerate() {
            if c >= r {
                return Err(Error::InvalidPolicy(format!("Min choice {c} out of range at decision point {k}")));
            }
        }
        for (k, (&c, &r)) in pp.tau.iter().zip(&self.max_radices).enumerate() {
            if c >= r {
                return Err(Error::InvalidPolicy(format!("Max choice {c} out of range at decision point {k}")));
            }
        }
        Ok(())
    }

    /// All Min policies in lexicographic order.
    pub fn min_policies(&self) -> MixedRadix {
        MixedRadix::new(self.min_radices.clone())
    }

    /// All Max policies in lexicographic order.
    pub fn max_policies(&self) -> MixedRadix {
        MixedRadix::new(self.max_radices.clone())
    }

    /// Exhaustive, duplicate-free enumeration; fails above `cap`.
    pub fn enumerate(&self, cap: u128) -> Result<impl Iterator<Item = PurePolicyPair> + '_> {
        self.check_cap(cap)?;
        Ok(self
            .min_policies()
            .flat_map(move |sigma| self.max_policies().map(move |tau| PurePolicyPair { sigma: sigma.clone(), tau })))
    }
}

/// Lexicographic counter over `∏ 0..radix[k]`.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let next = if radices.iter().any(|&r| r == 0) { None } else { Some(vec![0; radices.len()]) };
        Self { radices, next }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.radices[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// Vertex kinds of an entropy game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Despot(usize),
    Tribune(usize),
    People(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyEdge {
    pub from: String,
    pub to: String,
    pub multiplicity: Option<u64>,
}

/// Despot/Tribune/People game on a tripartite digraph with multiplicities on
/// People→Despot edges.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyGame {
    despots: Vec<String>,
    tribunes: Vec<String>,
    people: Vec<String>,
    edges: Vec<EntropyEdge>,
    despot_moves: Vec<Vec<usize>>,
    tribune_moves: Vec<Vec<usize>>,
    people_moves: Vec<Vec<(usize, u64)>>,
}

impl EntropyGame {
    pub fn new(despots: Vec<String>, tribunes: Vec<String>, people: Vec<String>, edges: Vec<EntropyEdge>) -> Result<Self> {
        if despots.is_empty() {
            return Err(Error::Schema("entropy game needs at least one Despot vertex".into()));
        }
        let mut index = std::collections::HashMap::new();
        for (list, kind) in [(&despots, 0u8), (&tribunes, 1), (&people, 2)] {
            for (k, name) in list.iter().enumerate() {
                let v = match kind {
                    0 => Vertex::Despot(k),
                    1 => Vertex::Tribune(k),
                    _ => Vertex::People(k),
                };
                if index.insert(name.clone(), v).is_some() {
                    return Err(Error::Schema(format!("duplicate vertex name '{name}'")));
                }
            }
        }
        let mut despot_moves = vec![Vec::new(); despots.len()];
        let mut tribune_moves = vec![Vec::new(); tribunes.len()];
        let mut people_moves: Vec<Vec<(usize, u64)>> = vec![Vec::new(); people.len()];
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            let from = *index
                .get(&e.from)
                .ok_or_else(|| Error::Schema(format!("dangling edge {} -> {}: unknown vertex '{}'", e.from, e.to, e.from)))?;
            let to = *index
                .get(&e.to)
                .ok_or_else(|| Error::Schema(format!("dangling edge {} -> {}: unknown vertex '{}'", e.from, e.to, e.to)))?;
            if !seen.insert((e.from.clone(), e.to.clone())) {
                return Err(Error::Schema(format!("duplicate edge {} -> {}", e.from, e.to)));
            }
            match (from, to) {
                (Vertex::Despot(_), Vertex::Tribune(_)) | (Vertex::Tribune(_), Vertex::People(_))
                    if e.multiplicity.is_some() =>
                {
                    return Err(Error::Schema(format!("edge {} -> {} must not carry a multiplicity", e.from, e.to)));
                }
                (Vertex::Despot(d), Vertex::Tribune(t)) => despot_moves[d].push(t),
                (Vertex::Tribune(t), Vertex::People(p)) => tribune_moves[t].push(p),
                (Vertex::People(p), Vertex::Despot(d)) => match e.multiplicity {
                    Some(m) if m >= 1 => people_moves[p].push((d, m)),
                    Some(m) => {
                        return Err(Error::Schema(format!("non-positive multiplicity {m} on edge {} -> {}", e.from, e.to)))
                    }
                    None => return Err(Error::Schema(format!("edge {} -> {} needs a multiplicity", e.from, e.to))),
                },
                _ => return Err(Error::Schema(format!("edge {} -> {} does not follow Despot→Tribune→People→Despot", e.from, e.to))),
            }
        }
        for (d, moves) in despot_moves.iter().enumerate() {
            if moves.is_empty() {
                return Err(Error::Schema(format!("Despot vertex '{}' has no outgoing edge", despots[d])));
            }
        }
        for (d, moves) in despot_moves.iter().enumerate() {
            for &t in moves {
                if tribune_moves[t].is_empty() {
                    return Err(Error::Schema(format!(
                        "Tribune vertex '{}' (reached from '{}') has no outgoing edge",
                        tribunes[t], despots[d]
                    )));
                }
                for &p in &tribune_moves[t] {
                    if people_moves[p].is_empty() {
                        return Err(Error::Schema(format!(
                            "People vertex '{}' (reached from '{}') has no outgoing edge",
                            people[p], tribunes[t]
                        )));
                    }
                }
            }
        }
        Ok(Self { despots, tribunes, people, edges, despot_moves, tribune_moves, people_moves })
    }

    /// Number of Despot states.
    pub fn n(&self) -> usize {
        self.despots.len()
    }

    pub fn despots(&self) -> &[String] {
        &self.despots
    }

    pub fn tribunes(&self) -> &[String] {
        &self.tribunes
    }

    pub fn people(&self) -> &[String] {
        &self.people
    }

    pub fn edges(&self) -> &[EntropyEdge] {
        &self.edges
    }

    pub fn despot_moves(&self, d: usize) -> &[usize] {
        &self.despot_moves[d]
    }

    pub fn tribune_moves(&self, t: usize) -> &[usize] {
        &self.tribune_moves[t]
    }

    pub fn people_moves(&self, p: usize) -> &[(usize, u64)] {
        &self.people_moves[p]
    }

    /// Row `(m_{p,d'})_{d'}` of People vertex `p`.
    pub fn people_row(&self, p: usize) -> Vec<u64> {
        let mut row = vec![0; self.n()];
        for &(d, m) in &self.people_moves[p] {
            row[d] = m;
        }
        row
    }

    /// Largest multiplicity `W`.
    pub fn max_multiplicity(&self) -> u64 {
        self.people_moves.iter().flatten().map(|&(_, m)| m).max().unwrap_or(0)
    }

    /// A multiplicity `m_{p,d'}` is off-diagonal when some Despot `d ≠ d'`
    /// reaches `p` through a Tribune, so that it lands off the diagonal of some
    /// induced matrix `M^{σ,τ}`.
    pub fn is_offdiagonal(&self, p: usize, d: usize) -> bool {
        (0..self.n()).filter(|&e| e != d).any(|e| {
            self.despot_moves[e].iter().any(|&t| self.tribune_moves[t].contains(&p))
        })
    }

    /// Minimum off-diagonal multiplicity `m̲`, if one exists.
    pub fn min_offdiagonal_multiplicity(&self) -> Option<u64> {
        self.people_moves
            .iter()
            .enumerate()
            .flat_map(|(p, moves)| moves.iter().map(move |&(d, m)| (p, d, m)))
            .filter(|&(p, d, _)| self.is_offdiagonal(p, d))
            .map(|(_, _, m)| m)
            .min()
    }

    /// Despot policies choose a Tribune per Despot; Tribune policies choose a
    /// People vertex per Tribune (Tribunes without moves get one dummy slot).
    pub fn policy_space(&self) -> PolicySpace {
        PolicySpace {
            min_radices: self.despot_moves.iter().map(|m| m.len()).collect(),
            max_radices: self.tribune_moves.iter().map(|m| m.len().max(1)).collect(),
        }
    }

    /// `M^{σ,τ}_{d,d'} = m_{τ(σ(d)),d'}`.
    pub fn induced_entropy_matrix(&self, pp: &PurePolicyPair) -> Result<Vec<Vec<u64>>> {
        self.policy_space().validate(pp)?;
        (0..self.n())
            .map(|d| {
                let t = self.despot_moves[d][pp.sigma[d]];
                let p = *self.tribune_moves[t].get(pp.tau[t]).ok_or_else(|| {
                    Error::InvalidPolicy(format!("Tribune '{}' has no outgoing edge", self.tribunes[t]))
                })?;
                Ok(self.people_row(p))
            })
            .collect()
    }
}

/// Checks that every number of a game is a rational with an integer payment,
/// returning the common transition denominator.
pub fn assumption_denominator(game: &ConcurrentGame<Rational>) -> Result<BigInt> {
    if !game.has_integer_payoffs() {
        return Err(Error::Assumption("payments must be integers".into()));
    }
    let m = game.common_denominator();
    debug_assert!(!m.is_zero());
    Ok(m)
}
