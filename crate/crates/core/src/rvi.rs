//! Relative value iteration in approximate arithmetic, with certified value
//! intervals, iteration-bound prediction, policy extraction, and exact
//! solving of turn-based and entropy games.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{ConcurrentGame, EntropyGame, PurePolicyPair, TurnBasedGame, DEFAULT_POLICY_CAP};
use crate::numeric::{hilbert_seminorm, mean_payoff_exact, top};
use crate::operators::{default_eta, entropy_step, residual_from, ConcurrentOperator, Damped, EntropyOperator, ShapleyOperator, TurnBasedOperator};
use crate::scalar::{convert, rational_ln, rational_to_f64, Rational, Scalar};
use crate::structure::{
    analyze_structure, check_unichain, effective_pmin_theta, contraction_certificate, entropy_structure, turnbased_epsilon,
    unichain_index, EntropyReport, StructureReport, INDEX_MAX_STATES,
};

/// Iteration cap used when no contraction certificate is available.
pub const FALLBACK_MAX_ITERS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<S> {
    pub iteration: u64,
    /// `‖x − T̃(x)‖_H`.
    pub residual: S,
    pub alpha: S,
    pub beta: S,
}

/// Output of relative value iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    /// Final iterate, normalized so that `t(x) = 0`.
    pub x: Vec<S>,
    pub alpha: S,
    pub beta: S,
    pub iterations: u64,
    /// False when the iteration budget ran out before the stopping rule held.
    pub terminated: bool,
    pub trace: Vec<TraceRow<S>>,
    pub epsilon: S,
    pub eta: S,
    /// `[α − ε/3, β + ε/3]`.
    pub value_interval: (S, S),
    /// Damping of the iterated operator, if any.
    pub theta: Option<S>,
    /// Value interval of the undamped operator, `value_interval / (1−θ)`.
    pub rescaled_value_interval: Option<(S, S)>,
}

impl<S: Scalar> Certificate<S> {
    /// Interval for the undamped operator.
    pub fn interval(&self) -> &(S, S) {
        self.rescaled_value_interval.as_ref().unwrap_or(&self.value_interval)
    }

    pub fn to_f64(&self) -> Certificate<f64> {
        let f = |x: &S| x.to_f64_lossy();
        let pair = |p: &(S, S)| (f(&p.0), f(&p.1));
        Certificate {
            x: self.x.iter().map(f).collect(),
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            iterations: self.iterations,
            terminated: self.terminated,
            trace: self
                .trace
                .iter()
                .map(|r| TraceRow { iteration: r.iteration, residual: f(&r.residual), alpha: f(&r.alpha), beta: f(&r.beta) })
                .collect(),
            epsilon: f(&self.epsilon),
            eta: f(&self.eta),
            value_interval: pair(&self.value_interval),
            theta: self.theta.as_ref().map(f),
            rescaled_value_interval: self.rescaled_value_interval.as_ref().map(pair),
        }
    }
}

/// Writes the residual trace as CSV with 17 significant digits.
pub fn write_trace_csv<S: Scalar>(trace: &[TraceRow<S>], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "iteration,residual_H,alpha,beta")?;
    for r in trace {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            r.iteration,
            r.residual.to_f64_lossy(),
            r.alpha.to_f64_lossy(),
            r.beta.to_f64_lossy()
        )?;
    }
    Ok(())
}

fn check_precision<S: Scalar>(epsilon: &S, eta: &S) -> Result<()> {
    if !(*epsilon > S::zero()) || !epsilon.is_finite_value() {
        return Err(Error::Parameter(format!("precision ε must be positive, got {epsilon}")));
    }
    let three = S::from_usize_exact(3);
    if *eta < S::zero() || *eta > epsilon.clone() / three {
        return Err(Error::Parameter(format!("oracle accuracy η must lie in [0, ε/3], got {eta} with ε = {epsilon}")));
    }
    Ok(())
}

/// Relative value iteration from `x = 0`: repeat `x := T̃(x) − t(T̃(x))e`
/// until `‖x − T̃(x)‖_H ≤ ε/3`.
pub fn rvi<S: Scalar, O: ShapleyOperator<S>>(op: &O, epsilon: &S, eta: &S, max_iters: u64) -> Result<Certificate<S>> {
    check_precision(epsilon, eta)?;
    let third = epsilon.clone() / S::from_usize_exact(3);
    let mut x = vec![S::zero(); op.dim()];
    let mut tx = op.apply(&x)?;
    let (mut alpha, mut beta) = residual_from(&tx, &x)?;
    let mut trace = Vec::new();
    let mut terminated = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let t = top(&tx)?;
        x = tx.iter().map(|v| v.clone() - t.clone()).collect();
        tx = op.apply(&x)?;
        (alpha, beta) = residual_from(&tx, &x)?;
        let residual = beta.clone() - alpha.clone();
        trace.push(TraceRow { iteration: iterations, residual: residual.clone(), alpha: alpha.clone(), beta: beta.clone() });
        if residual <= third {
            terminated = true;
            break;
        }
    }
    let value_interval = (alpha.clone() - third.clone(), beta.clone() + third);
    Ok(Certificate {
        x,
        alpha,
        beta,
        iterations,
        terminated,
        trace,
        epsilon: epsilon.clone(),
        eta: eta.clone(),
        value_interval,
        theta: None,
        rescaled_value_interval: None,
    })
}

/// Runs [`rvi`] on `T_θ` with precision `(1−θ)ε`, so the rescaled interval
/// for `T` has width at most `ε`. `eta` is the accuracy of `T̃`.
pub fn rvi_damped<S: Scalar, O: ShapleyOperator<S>>(
    inner: O,
    theta: S,
    epsilon: &S,
    eta: &S,
    max_iters: u64,
) -> Result<Certificate<S>> {
    let rest = S::one() - theta.clone();
    let op = Damped::new(inner, theta.clone())?;
    let mut cert = rvi(&op, &(rest.clone() * epsilon.clone()), &(rest.clone() * eta.clone()), max_iters)?;
    let (lo, hi) = &cert.value_interval;
    cert.rescaled_value_interval = Some((lo.clone() / rest.clone(), hi.clone() / rest));
    cert.theta = Some(theta);
    Ok(cert)
}

fn ceil_count(x: f64) -> u64 {
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

/// `⌈q (log‖T(0)‖_H + log 6 + |log ε|) / |log γ|⌉`, or 0 when the logarithm
/// is nonpositive.
pub fn predict_iteration_bound(q: u64, gamma: f64, t0_norm: f64, epsilon: f64) -> Result<u64> {
    if q < 1 || !(gamma > 0.0 && gamma < 1.0) || !(epsilon > 0.0) || !(t0_norm >= 0.0) || !t0_norm.is_finite() {
        return Err(Error::Parameter(format!(
            "iteration bound needs q ≥ 1, 0 < γ < 1, ε > 0, ‖T(0)‖_H ≥ 0 (got q = {q}, γ = {gamma}, ε = {epsilon}, ‖T(0)‖_H = {t0_norm})"
        )));
    }
    if t0_norm == 0.0 {
        return Ok(0);
    }
    let logs = t0_norm.ln() + 6f64.ln() + epsilon.ln().abs();
    Ok(ceil_count(q as f64 * logs / gamma.ln().abs()))
}

/// Concurrent-game bound
/// `(|log ε| + log(1−θ) + log 12 + log‖r‖_∞) k_uni θ^{−k_uni}`.
pub fn predict_concurrent_bound(epsilon: f64, theta: f64, k_uni: u64, payoff_norm: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(theta > 0.0 && theta < 1.0) || k_uni < 1 || !(payoff_norm >= 0.0) {
        return Err(Error::Parameter("concurrent bound needs 0 < ε < 1, 0 < θ < 1, k_uni ≥ 1, ‖r‖ ≥ 0".into()));
    }
    if payoff_norm == 0.0 {
        return Ok(0);
    }
    let logs = epsilon.ln().abs() + (1.0 - theta).ln() + 12f64.ln() + payoff_norm.ln();
    Ok(ceil_count(logs * k_uni as f64 * theta.powi(-(k_uni as i32))))
}

/// Entropy-game bound `(log(1+(m̲+W)ν_n) + log 6) k_irr M̄/2`, given `log ε`
/// of the matching precision `ε = (1+(m̲+W)ν_n)^{−1}`.
pub fn predict_entropy_bound(epsilon_log: f64, k_irr: u64, m_bar: f64) -> u64 {
    ceil_count((-epsilon_log + 6f64.ln()) * k_irr as f64 * m_bar / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyMethod {
    /// Turn-based rounding at the separation precision; the value is exact.
    ExactTurnBased,
    /// Entropy-game rounding at the separation precision.
    ExactEntropy,
    /// Policies read off an iterate with no optimality guarantee.
    Heuristic,
}

impl PolicyMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyMethod::ExactTurnBased => "exact-turnbased",
            PolicyMethod::ExactEntropy => "exact-entropy",
            PolicyMethod::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyCertificate {
    pub pair: PurePolicyPair,
    pub claimed_value: f64,
    pub exact_value: Option<Rational>,
    pub method: PolicyMethod,
}

/// Policies attaining the min and max in `T(x*)`, lowest index on ties.
pub fn extract_policies<S: Scalar>(g: &TurnBasedGame<S>, x_star: &[S]) -> Result<PurePolicyPair> {
    Ok(TurnBasedOperator::new(g).apply_with_policies(x_star)?.1)
}

/// Policies attaining the min and max in `T_{m,ϑ}(x*)`.
pub fn extract_entropy_policies(g: &EntropyGame, vartheta: f64, x_star: &[f64]) -> Result<PurePolicyPair> {
    Ok(EntropyOperator::multiplicative(g, vartheta)?.apply_with_policies(x_star)?.1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub epsilon: f64,
    /// Oracle accuracy; derived from the contraction certificate when absent.
    pub eta: Option<f64>,
    /// Damping override; the structural `θ` is used when absent.
    pub theta: Option<f64>,
    pub max_iters: Option<u64>,
    pub policy_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { epsilon: 1e-6, eta: None, theta: None, max_iters: None, policy_cap: DEFAULT_POLICY_CAP }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticSolution {
    pub structure: Option<StructureReport<f64>>,
    pub certificate: Certificate<f64>,
    pub predicted_iterations: Option<u64>,
    pub max_iters: u64,
    /// Policies read off the final iterate (turn-based games only).
    pub policies: Option<PolicyCertificate>,
}

fn solve_stochastic<O: ShapleyOperator<f64>>(
    game: &ConcurrentGame<f64>,
    opts: &SolveOptions,
    make_op: impl Fn(f64) -> Result<O>,
) -> Result<StochasticSolution> {
    let structure = match analyze_structure(game, opts.policy_cap) {
        Ok(report) => Some(report),
        Err(Error::AllMassOnDiagonal) if opts.theta.is_some() => None,
        Err(e) => return Err(e),
    };
    let theta = match (opts.theta, &structure) {
        (Some(t), _) => t,
        (None, Some(r)) => r.theta,
        (None, None) => return Err(Error::AllMassOnDiagonal),
    };
    let certificate = if opts.theta.is_none() { structure.as_ref().and_then(|r| r.contraction.clone()) } else { None };
    let eta = match opts.eta {
        Some(e) => e,
        None => default_eta(&opts.epsilon, certificate.as_ref().map(|c| (c.q as u64, &c.gamma))),
    };
    check_precision(&opts.epsilon, &eta)?;
    let damped = Damped::new(make_op(eta)?, theta)?;
    let t0 = hilbert_seminorm(&damped.apply(&vec![0.0; game.n()])?)?;
    let predicted = match &certificate {
        Some(c) => Some(predict_iteration_bound(c.q as u64, c.gamma, t0, (1.0 - theta) * opts.epsilon)?),
        None => None,
    };
    let max_iters = opts.max_iters.unwrap_or(match predicted {
        Some(p) => p.max(1).saturating_mul(10),
        None => FALLBACK_MAX_ITERS,
    });
    let cert = rvi_damped(make_op(eta)?, theta, &opts.epsilon, &eta, max_iters)?;
    Ok(StochasticSolution { structure, certificate: cert, predicted_iterations: predicted, max_iters, policies: None })
}

/// Approximate value of a concurrent game by damped relative value iteration.
pub fn solve_concurrent(game: &ConcurrentGame<f64>, opts: &SolveOptions) -> Result<StochasticSolution> {
    solve_stochastic(game, opts, |eta| ConcurrentOperator::new(game, eta))
}

/// Approximate value of a turn-based game, with policies read off the final
/// iterate.
pub fn solve_turnbased(game: &TurnBasedGame<f64>, opts: &SolveOptions) -> Result<StochasticSolution> {
    let mut sol = solve_stochastic(game.game(), opts, |_| Ok(TurnBasedOperator::new(game)))?;
    let cert = &sol.certificate;
    let (lo, hi) = cert.interval();
    sol.policies = Some(PolicyCertificate {
        pair: extract_policies(game, &cert.x)?,
        claimed_value: (lo + hi) / 2.0,
        exact_value: None,
        method: PolicyMethod::Heuristic,
    });
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactTurnBasedSolution {
    pub value: Rational,
    /// Precision of the damped iteration.
    pub epsilon: Rational,
    pub theta: Rational,
    pub certificate: Certificate<f64>,
    pub policies: PolicyCertificate,
    pub predicted_iterations: Option<u64>,
    pub max_iters: u64,
}

/// Precisions above this run in floating point; smaller ones in rationals.
const FLOAT_PRECISION_FLOOR: f64 = 1e-10;

/// Exact value and optimal pure policies of a unichain turn-based game with
/// rational transitions and integer payments.
pub fn solve_turnbased_exact(
    g: &TurnBasedGame<Rational>,
    policy_cap: u128,
    max_iters: Option<u64>,
) -> Result<ExactTurnBasedSolution> {
    let game = g.game();
    if !check_unichain(game, policy_cap)? {
        return Err(Error::NotUnichain);
    }
    let epsilon = turnbased_epsilon(g)?;
    let (_, theta) = effective_pmin_theta(game)?;
    let rest = Rational::one() - &theta;
    // the damped iteration runs at precision `epsilon`, i.e. `epsilon/(1−θ)` for T
    let epsilon_t = &epsilon / &rest;
    let theta_f = rational_to_f64(&theta);
    let k_uni = if game.n() <= INDEX_MAX_STATES { Some(unichain_index(game)?) } else { None };
    let contraction = contraction_certificate(game.n(), &theta_f, k_uni, None);
    let float_game: TurnBasedGame<f64> = g.map();
    let t0 = hilbert_seminorm(&Damped::new(TurnBasedOperator::new(&float_game), theta_f)?.apply(&vec![0.0; game.n()])?)?;
    let predicted = match &contraction {
        Some(c) => Some(predict_iteration_bound(c.q as u64, c.gamma, t0, rational_to_f64(&epsilon))?),
        None => None,
    };
    let allowed = max_iters.unwrap_or(predicted.map_or(FALLBACK_MAX_ITERS, |p| p.max(1).saturating_mul(10)));

    let (certificate, x_star): (Certificate<f64>, Vec<Rational>) = if rational_to_f64(&epsilon) >= FLOAT_PRECISION_FLOOR {
        let cert = rvi_damped(TurnBasedOperator::new(&float_game), theta_f, &rational_to_f64(&epsilon_t), &0.0, allowed)?;
        let x = cert.x.iter().map(|v| convert::<f64, Rational>(v)).collect();
        (cert, x)
    } else {
        let cert = rvi_damped(TurnBasedOperator::new(g), theta.clone(), &epsilon_t, &Rational::zero(), allowed)?;
        let x = cert.x.clone();
        (cert.to_f64(), x)
    };
    if !certificate.terminated {
        return Err(Error::IterationBudget { predicted: predicted.unwrap_or(allowed), allowed });
    }
    let pair = extract_policies(g, &x_star)?;
    let (p, r) = g.induced_matrix_and_payoff(&pair)?;
    let value = mean_payoff_exact(&p, &r)?;
    let (lo, hi) = certificate.interval();
    let (lo, hi) = (convert::<f64, Rational>(lo), convert::<f64, Rational>(hi));
    if value < lo || value > hi {
        return Err(Error::Consistency(format!(
            "exact value {value} of the extracted policies lies outside [{lo}, {hi}]"
        )));
    }
    let policies = PolicyCertificate {
        pair,
        claimed_value: rational_to_f64(&value),
        exact_value: Some(value.clone()),
        method: PolicyMethod::ExactTurnBased,
    };
    Ok(ExactTurnBasedSolution { value, epsilon, theta, certificate, policies, predicted_iterations: predicted, max_iters: allowed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyMode {
    Approx { epsilon: f64 },
    /// Precision from the separation bound, iterated in exact integers.
    ExactPolicies,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropySolution {
    pub report: EntropyReport,
    /// Certificate for `T_{m,ϑ}`; its interval brackets `μ = log(ϑ + ρ)`.
    pub certificate: Certificate<f64>,
    pub vartheta: f64,
    /// Bracket of the game value `ρ = e^μ − ϑ`.
    pub value_interval: (f64, f64),
    pub value: f64,
    pub policies: PolicyCertificate,
    pub predicted_iterations: Option<u64>,
    pub max_iters: u64,
}

/// Solves an irreducible entropy game with the multiplicatively damped
/// operator `T_{m,ϑ}`.
pub fn solve_entropy(g: &EntropyGame, mode: EntropyMode, policy_cap: u128, max_iters: Option<u64>) -> Result<EntropySolution> {
    let report = entropy_structure(g, policy_cap)?;
    let contraction = report.contraction.clone().ok_or(Error::NotIrreducible)?;
    let vartheta = report.vartheta as f64;
    let (certificate, pair, predicted, allowed) = match mode {
        EntropyMode::Approx { epsilon } => {
            let certified = contraction.gamma < 1.0;
            let eta = default_eta(&epsilon, certified.then_some((contraction.k_irr as u64, &contraction.gamma)));
            let op = EntropyOperator::multiplicative(g, vartheta)?;
            let t0 = hilbert_seminorm(&op.apply(&vec![0.0; g.n()])?)?;
            let predicted = if certified {
                Some(predict_iteration_bound(contraction.k_irr as u64, contraction.gamma, t0, epsilon)?)
            } else {
                None
            };
            let allowed = max_iters.unwrap_or(predicted.map_or(FALLBACK_MAX_ITERS, |p| p.max(1).saturating_mul(10)));
            let cert = rvi(&op, &epsilon, &eta, allowed)?;
            let pair = extract_entropy_policies(g, vartheta, &cert.x)?;
            (cert, pair, predicted, allowed)
        }
        EntropyMode::ExactPolicies => {
            let predicted = predict_entropy_bound(report.epsilon_log, contraction.k_irr as u64, contraction.m_bar);
            let allowed = max_iters.unwrap_or(FALLBACK_MAX_ITERS);
            if predicted > allowed {
                return Err(Error::IterationBudget { predicted, allowed });
            }
            let (cert, pair) = exact_entropy_iteration(g, report.vartheta, report.epsilon_log.exp(), allowed)?;
            (cert, pair, Some(predicted), allowed)
        }
    };
    let (lo, hi) = certificate.value_interval;
    let value_interval = ((lo.exp() - vartheta).max(0.0), (hi.exp() - vartheta).max(0.0));
    let value = (((certificate.alpha + certificate.beta) / 2.0).exp() - vartheta).max(0.0);
    let method = match mode {
        EntropyMode::Approx { .. } => PolicyMethod::Heuristic,
        EntropyMode::ExactPolicies => PolicyMethod::ExactEntropy,
    };
    let policies = PolicyCertificate { pair, claimed_value: value, exact_value: None, method };
    Ok(EntropySolution { report, certificate, vartheta, value_interval, value, policies, predicted_iterations: predicted, max_iters: allowed })
}

/// Projective iteration `y := F_{m,ϑ}(y)` on integer vectors (divided by their
/// gcd), stopping once `log max_d(F(y)_d/y_d) − log min_d(F(y)_d/y_d) ≤ ε/3`.
fn exact_entropy_iteration(g: &EntropyGame, vartheta: u64, epsilon: f64, max_iters: u64) -> Result<(Certificate<f64>, PurePolicyPair)> {
    let theta = Rational::from_integer(BigInt::from(vartheta));
    let third = epsilon / 3.0;
    let mut y: Vec<Rational> = vec![Rational::one(); g.n()];
    let mut fy = entropy_step(g, &y, Some(&theta))?.0;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut bounds = (0.0, 0.0);
    let mut terminated = false;
    while iterations < max_iters {
        iterations += 1;
        let divisor = fy.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()));
        y = fy.iter().map(|v| v / Rational::from_integer(divisor.clone())).collect();
        fy = entropy_step(g, &y, Some(&theta))?.0;
        let ratios: Vec<Rational> = fy.iter().zip(&y).map(|(f, v)| f / v).collect();
        let lo = ratios.iter().min().expect("nonempty").clone();
        let hi = ratios.iter().max().expect("nonempty").clone();
        let residual = rational_to_f64(&(&hi / &lo - Rational::one())).ln_1p();
        bounds = (rational_ln(&lo), rational_ln(&hi));
        trace.push(TraceRow { iteration: iterations, residual, alpha: bounds.0, beta: bounds.1 });
        if residual <= third {
            terminated = true;
            break;
        }
    }
    let logs: Vec<f64> = y.iter().map(rational_ln).collect();
    let t = top(&logs)?;
    let pair = entropy_step(g, &y, Some(&theta))?.1;
    let cert = Certificate {
        x: logs.iter().map(|v| v - t).collect(),
        alpha: bounds.0,
        beta: bounds.1,
        iterations,
        terminated,
        trace,
        epsilon,
        eta: 0.0,
        value_interval: (bounds.0 - third, bounds.1 + third),
        theta: None,
        rescaled_value_interval: None,
    };
    Ok((cert, pair))
}
