//! Certificate files written by `solve` and read back by `verify`.

use serde::{Deserialize, Serialize};

use ergodic_games::rvi::{Certificate, PolicyCertificate};
use ergodic_games::PurePolicyPair;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyRecord {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub method: String,
    pub claimed_value: f64,
    /// Exact value of the pair as `p/q`, when known.
    pub exact_value: Option<String>,
}

impl PolicyRecord {
    pub fn from_certificate(p: &PolicyCertificate) -> Self {
        Self {
            sigma: p.pair.sigma.clone(),
            tau: p.pair.tau.clone(),
            method: p.method.name().to_string(),
            claimed_value: p.claimed_value,
            exact_value: p.exact_value.as_ref().map(|v| v.to_string()),
        }
    }

    pub fn pair(&self) -> PurePolicyPair {
        PurePolicyPair { sigma: self.sigma.clone(), tau: self.tau.clone() }
    }
}

/// Everything needed to re-check a run without hidden state.
///
/// For stochastic games `x` is a bias vector of `T` and `value_interval`
/// brackets the mean payoff. For entropy games `x` lives in log space,
/// `operator_interval` brackets `log(ϑ + ρ)` and `value_interval` brackets
/// the growth rate `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub kind: String,
    pub epsilon: f64,
    pub eta: f64,
    pub theta: Option<f64>,
    pub vartheta: Option<f64>,
    pub max_iters: u64,
    pub iterations: u64,
    pub predicted_iterations: Option<u64>,
    pub terminated: bool,
    pub x: Vec<f64>,
    pub operator_interval: (f64, f64),
    pub value_interval: (f64, f64),
    pub exact_value: Option<String>,
    pub policies: Option<PolicyRecord>,
}

impl CertificateFile {
    /// Record of a damped stochastic run; precisions are reported on the
    /// scale of the undamped operator.
    pub fn stochastic(kind: &str, cert: &Certificate<f64>, max_iters: u64, predicted: Option<u64>) -> Self {
        let rest = 1.0 - cert.theta.unwrap_or(0.0);
        Self {
            kind: kind.to_string(),
            epsilon: cert.epsilon / rest,
            eta: cert.eta / rest,
            theta: cert.theta,
            vartheta: None,
            max_iters,
            iterations: cert.iterations,
            predicted_iterations: predicted,
            terminated: cert.terminated,
            x: cert.x.clone(),
            operator_interval: *cert.interval(),
            value_interval: *cert.interval(),
            exact_value: None,
            policies: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
