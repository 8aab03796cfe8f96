//! Shapley operators of the three game classes, Krasnoselskii–Mann damping
//! and the residual used by relative value iteration.

use crate::error::{Error, Result};
use crate::game::{ConcurrentGame, EntropyGame, PurePolicyPair, TurnBasedGame};
use crate::matrix_game::{solve_matrix_game, solve_sequential_cell, solve_turnbased_cell, Side};
use crate::numeric::{bottom, difference, top};
use crate::scalar::Scalar;

/// An order-preserving, additively homogeneous map on `S^n`.
pub trait ShapleyOperator<S: Scalar> {
    fn dim(&self) -> usize;

    fn apply(&self, v: &[S]) -> Result<Vec<S>>;
}

fn check_dim(expected: usize, v: &[impl Sized]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::Dimension { expected, got: v.len() });
    }
    Ok(())
}

/// Shapley operator of a concurrent game; each state's matrix game is
/// solved to accuracy `eta`.
#[derive(Debug, Clone)]
pub struct ConcurrentOperator<'a, S> {
    game: &'a ConcurrentGame<S>,
    eta: S,
}

impl<'a, S: Scalar> ConcurrentOperator<'a, S> {
    pub fn new(game: &'a ConcurrentGame<S>, eta: S) -> Result<Self> {
        if eta < S::zero() || !eta.is_finite_value() {
            return Err(Error::Parameter(format!("oracle accuracy must be nonnegative, got {eta}")));
        }
        Ok(Self { game, eta })
    }

    pub fn eta(&self) -> &S {
        &self.eta
    }
}

impl<S: Scalar> ShapleyOperator<S> for ConcurrentOperator<'_, S> {
    fn dim(&self) -> usize {
        self.game.n()
    }

    fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        check_dim(self.dim(), v)?;
        (0..self.game.n())
            .map(|i| Ok(solve_matrix_game(&self.game.stage_matrix(i, v), &self.eta)?.value))
            .collect()
    }
}

/// Shapley operator of a turn-based game, evaluated exactly.
#[derive(Debug)]
pub struct TurnBasedOperator<'a, S> {
    game: &'a TurnBasedGame<S>,
}

impl<S> Clone for TurnBasedOperator<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for TurnBasedOperator<'_, S> {}

impl<'a, S: Scalar> TurnBasedOperator<'a, S> {
    pub fn new(game: &'a TurnBasedGame<S>) -> Self {
        Self { game }
    }

    /// `T(v)` together with the policies attaining every min and max
    /// (lowest index on ties).
    pub fn apply_with_policies(&self, v: &[S]) -> Result<(Vec<S>, PurePolicyPair)> {
        check_dim(self.dim(), v)?;
        let g = self.game.game();
        let mut values = Vec::with_capacity(g.n());
        let mut sigma = Vec::with_capacity(g.n());
        let mut tau = Vec::new();
        for i in 0..g.n() {
            let (value, a, responses) = solve_sequential_cell(&g.stage_matrix(i, v))?;
            values.push(value);
            sigma.push(a);
            tau.extend(responses);
        }
        Ok((values, PurePolicyPair { sigma, tau }))
    }
}

impl<S: Scalar> ShapleyOperator<S> for TurnBasedOperator<'_, S> {
    fn dim(&self) -> usize {
        self.game.n()
    }

    fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        Ok(self.apply_with_policies(v)?.0)
    }
}

/// Krasnoselskii–Mann damping `T_θ = θI + (1−θ)T`.
#[derive(Debug, Clone)]
pub struct Damped<O, S> {
    inner: O,
    theta: S,
}

impl<O: ShapleyOperator<S>, S: Scalar> Damped<O, S> {
    pub fn new(inner: O, theta: S) -> Result<Self> {
        if !(theta > S::zero() && theta < S::one()) {
            return Err(Error::Parameter(format!("damping θ must lie in (0, 1), got {theta}")));
        }
        Ok(Self { inner, theta })
    }

    pub fn theta(&self) -> &S {
        &self.theta
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: ShapleyOperator<S>, S: Scalar> ShapleyOperator<S> for Damped<O, S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        let tv = self.inner.apply(v)?;
        let rest = S::one() - self.theta.clone();
        Ok(v.iter()
            .zip(tv)
            .map(|(x, t)| self.theta.clone() * x.clone() + rest.clone() * t)
            .collect())
    }
}

/// `θ·v + (1−θ)·T(v)`.
pub fn apply_km<S: Scalar, O: ShapleyOperator<S>>(op: O, theta: S, v: &[S]) -> Result<Vec<S>> {
    Damped::new(op, theta)?.apply(v)
}

/// `(b(T(x) − x), t(T(x) − x))`.
pub fn residual<S: Scalar>(op: &impl ShapleyOperator<S>, x: &[S]) -> Result<(S, S)> {
    let tx = op.apply(x)?;
    residual_from(&tx, x)
}

pub(crate) fn residual_from<S: Scalar>(tx: &[S], x: &[S]) -> Result<(S, S)> {
    let d = difference(tx, x);
    Ok((bottom(&d)?, top(&d)?))
}

/// Oracle accuracy making the approximate iteration `ε`-correct:
/// `ε / (12 + 24q/(1−γ))` with a contraction certificate, else `ε/12`.
pub fn default_eta<S: Scalar>(epsilon: &S, certificate: Option<(u64, &S)>) -> S {
    let twelve = S::from_usize_exact(12);
    match certificate {
        Some((q, gamma)) => {
            let q = S::from_usize_exact(q as usize);
            let denom = twelve.clone() + twelve.clone() * (S::one() + S::one()) * q / (S::one() - gamma.clone());
            epsilon.clone() / denom
        }
        None => epsilon.clone() / twelve,
    }
}

/// One step of the entropy operator on positive vectors:
/// `min_t max_p (ϑ x_d + Σ_{d'} m_{p,d'} x_{d'})` with `ϑ = 0` when absent.
/// Also returns the Despot and Tribune choices attaining it.
pub fn entropy_step<S: Scalar>(
    game: &EntropyGame,
    x: &[S],
    vartheta: Option<&S>,
) -> Result<(Vec<S>, PurePolicyPair)> {
    check_dim(game.n(), x)?;
    let people_value = |p: usize| {
        game.people_moves(p).iter().fold(S::zero(), |acc, &(d, m)| {
            acc + S::from_u64(m).expect("multiplicity fits the scalar type") * x[d].clone()
        })
    };
    let tau = (0..game.tribunes().len())
        .map(|t| {
            let moves = game.tribune_moves(t);
            if moves.is_empty() {
                return Ok(0);
            }
            let values: Vec<S> = moves.iter().map(|&p| people_value(p)).collect();
            Ok(solve_turnbased_cell(&values, Side::Max)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    let tribune_value = |t: usize| people_value(game.tribune_moves(t)[tau[t]]);
    let mut values = Vec::with_capacity(game.n());
    let mut sigma = Vec::with_capacity(game.n());
    for d in 0..game.n() {
        let options: Vec<S> = game.despot_moves(d).iter().map(|&t| tribune_value(t)).collect();
        let (best, choice) = solve_turnbased_cell(&options, Side::Min)?;
        let diagonal = vartheta.map_or(S::zero(), |w| w.clone() * x[d].clone());
        values.push(diagonal + best);
        sigma.push(choice);
    }
    Ok((values, PurePolicyPair { sigma, tau }))
}

/// `F(x)_d = min_t max_p Σ_{d'} m_{p,d'} x_{d'}` for `x > 0`.
pub fn apply_entropy<S: Scalar>(game: &EntropyGame, x: &[S]) -> Result<Vec<S>> {
    if let Some(k) = x.iter().position(|v| *v <= S::zero() || !v.is_finite_value()) {
        return Err(Error::Parameter(format!("entropy operator needs a positive vector, entry {k} is {}", x[k])));
    }
    Ok(entropy_step(game, x, None)?.0)
}

/// Entropy operator conjugated by `exp`, optionally with multiplicative
/// damping `ϑ`: `v ↦ log min_t max_p (ϑ e^{v_d} + Σ m_{p,d'} e^{v_{d'}})`.
#[derive(Debug, Clone, Copy)]
pub struct EntropyOperator<'a> {
    game: &'a EntropyGame,
    vartheta: Option<f64>,
}

impl<'a> EntropyOperator<'a> {
    pub fn plain(game: &'a EntropyGame) -> Self {
        Self { game, vartheta: None }
    }

    pub fn multiplicative(game: &'a EntropyGame, vartheta: f64) -> Result<Self> {
        if !(vartheta > 0.0 && vartheta.is_finite()) {
            return Err(Error::Parameter(format!("multiplicative damping ϑ must be positive, got {vartheta}")));
        }
        Ok(Self { game, vartheta: Some(vartheta) })
    }

    pub fn vartheta(&self) -> Option<f64> {
        self.vartheta
    }

    pub fn apply_with_policies(&self, v: &[f64]) -> Result<(Vec<f64>, PurePolicyPair)> {
        check_dim(self.game.n(), v)?;
        if let Some(k) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        let shift = top(v)?;
        let x: Vec<f64> = v.iter().map(|vi| (vi - shift).exp()).collect();
        let (y, policies) = entropy_step(self.game, &x, self.vartheta.as_ref())?;
        Ok((y.into_iter().map(|yi| yi.ln() + shift).collect(), policies))
    }
}

impl ShapleyOperator<f64> for EntropyOperator<'_> {
    fn dim(&self) -> usize {
        self.game.n()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        Ok(self.apply_with_policies(v)?.0)
    }
}

/// `T_{m,ϑ}(v)`.
pub fn apply_entropy_km(game: &EntropyGame, vartheta: f64, v: &[f64]) -> Result<Vec<f64>> {
    EntropyOperator::multiplicative(game, vartheta)?.apply(v)
}
