//! `ergodic-games` command-line front end: structural analysis, solving with
//! certificate and trace output, and oracle verification of certificates.

pub mod cert;

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use ergodic_games::format::{load_game, LoadedGame};
use ergodic_games::game::{assumption_denominator, DEFAULT_POLICY_CAP};
use ergodic_games::numeric::hilbert_seminorm;
use ergodic_games::operators::{ConcurrentOperator, Damped, EntropyOperator, TurnBasedOperator};
use ergodic_games::oracle::{entropy_saddle, turnbased_saddle};
use ergodic_games::rvi::{
    predict_concurrent_bound, predict_entropy_bound, predict_iteration_bound, solve_concurrent, solve_entropy,
    solve_turnbased, solve_turnbased_exact, write_trace_csv, Certificate, EntropyMode, SolveOptions,
};
use ergodic_games::scalar::{parse_rational, rational_to_f64};
use ergodic_games::structure::{
    analyze_structure, entropy_structure, separation_turnbased, turnbased_epsilon, StructureReport,
};
use ergodic_games::{ConcurrentGame, EntropyGame, PurePolicyPair, Rational, Scalar, ShapleyOperator, TurnBasedGame};

use cert::{CertificateFile, PolicyRecord};

/// Environment variable overriding the policy enumeration cap.
pub const POLICY_CAP_VAR: &str = "ERGODIC_GAMES_POLICY_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NON_TERMINATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NonTermination(String),
    #[error("{0}")]
    Verification(String),
    #[error("unverifiable at desk scale: {0}")]
    Unverifiable(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::NonTermination(_) => EXIT_NON_TERMINATION,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Unverifiable(_) => EXIT_CAP,
        }
    }
}

impl From<ergodic_games::Error> for CliError {
    fn from(e: ergodic_games::Error) -> Self {
        use ergodic_games::Error as E;
        match e {
            E::PolicyCap { .. } | E::OracleSizeLimit(_) | E::SearchCap(_) => CliError::Unverifiable(e.to_string()),
            E::IterationBudget { .. } => CliError::NonTermination(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ergodic-games", version, about = "Relative value iteration for stochastic mean-payoff and entropy games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural analysis: unichain and irreducibility, indices, damping and contraction rate.
    Analyze {
        file: PathBuf,
        /// Precision used for the predicted iteration counts.
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Also write the analysis as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Solves a game and optionally writes a certificate and a residual trace.
    Solve(RunConfig),
    /// Re-checks a certificate against the game with the brute-force oracle.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    pub file: PathBuf,
    /// Width of the value interval (default 1e-6).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Accuracy of the matrix-game oracle; at most ε/3.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Damping parameter overriding p_min/(1+p_min).
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<u64>,
    /// Exact optimal policies and value (rational turn-based or entropy games).
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

pub const DEFAULT_EPSILON: f64 = 1e-6;

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        let eps = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(CliError::Input(format!("--epsilon must be positive, got {eps}")));
        }
        if let Some(eta) = self.eta {
            if !(eta >= 0.0 && eta <= eps / 3.0) {
                return Err(CliError::Input(format!("--eta must lie in [0, ε/3] = [0, {}], got {eta}", eps / 3.0)));
            }
        }
        if let Some(theta) = self.theta {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(CliError::Input(format!("--theta must lie in (0, 1), got {theta}")));
            }
        }
        if self.exact && (self.epsilon.is_some() || self.eta.is_some() || self.theta.is_some()) {
            return Err(CliError::Input("--exact fixes ε, η and θ itself; drop --epsilon, --eta and --theta".into()));
        }
        Ok(())
    }
}

/// Policy cap from the environment, or the library default.
pub fn policy_cap() -> CliResult<u128> {
    match std::env::var(POLICY_CAP_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{POLICY_CAP_VAR} must be a non-negative integer, got '{text}'"))),
        Err(_) => Ok(DEFAULT_POLICY_CAP),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let result = policy_cap().and_then(|cap| match cli.command {
        Command::Analyze { file, epsilon, report } => analyze(&file, epsilon, report.as_deref(), cap, out),
        Command::Solve(config) => solve(&config, cap, out),
        Command::Verify { file, cert } => verify(&file, &cert, cap, out),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn yes_no(flag: Option<bool>, cap: u128) -> String {
    match flag {
        Some(true) => "yes".into(),
        Some(false) => "no".into(),
        None => format!("unverified (more than {cap} policy pairs)"),
    }
}

fn opt<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), |x| x.to_string())
}

fn analyze(path: &Path, epsilon: f64, report_path: Option<&Path>, cap: u128, out: &mut dyn Write) -> CliResult<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::Input(format!("--epsilon must lie in (0, 1), got {epsilon}")));
    }
    let game = load_game(path)?;
    let report = match &game {
        LoadedGame::Concurrent { float, exact: Some(exact) } => analyze_stochastic("concurrent", exact, float, epsilon, cap, out)?,
        LoadedGame::Concurrent { float, exact: None } => analyze_stochastic("concurrent", float, float, epsilon, cap, out)?,
        LoadedGame::TurnBased { float, exact: Some(exact) } => {
            let mut r = analyze_stochastic("turnbased", exact.game(), float.game(), epsilon, cap, out)?;
            analyze_turnbased_precision(exact, &mut r, out)?;
            r
        }
        LoadedGame::TurnBased { float, exact: None } => analyze_stochastic("turnbased", float.game(), float.game(), epsilon, cap, out)?,
        LoadedGame::Entropy(g) => analyze_entropy(g, epsilon, cap, out)?,
    };
    if let Some(p) = report_path {
        std::fs::write(p, serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;
    }
    Ok(())
}

fn analyze_stochastic<S: Scalar>(
    kind: &str,
    g: &ConcurrentGame<S>,
    float: &ConcurrentGame<f64>,
    epsilon: f64,
    cap: u128,
    out: &mut dyn Write,
) -> CliResult<Value> {
    let r: StructureReport<S> = analyze_structure(g, cap)?;
    let theta = r.theta.to_f64_lossy();
    writeln!(out, "kind: {kind}{}", if S::EXACT { " (exact)" } else { "" })?;
    writeln!(out, "states: {}", g.n())?;
    writeln!(out, "unichain: {}", yes_no(r.is_unichain, cap))?;
    writeln!(out, "irreducible: {}", yes_no(r.is_irreducible, cap))?;
    writeln!(out, "p_min: {}", r.p_min)?;
    writeln!(out, "theta: {}", r.theta)?;
    writeln!(out, "k_uni: {}", opt(&r.k_uni))?;
    writeln!(out, "k_irr: {}", opt(&r.k_irr))?;
    let damped_t0 = hilbert_seminorm(&Damped::new(ConcurrentOperator::new(float, 0.0)?, theta)?.apply(&vec![0.0; g.n()])?)?;
    let mut predicted = None;
    let mut corollary = None;
    match &r.contraction {
        Some(c) => {
            writeln!(out, "T_theta^{} is a contraction of rate {}", c.q, c.gamma)?;
            let bound = predict_iteration_bound(c.q as u64, c.gamma.to_f64_lossy(), damped_t0, (1.0 - theta) * epsilon)?;
            writeln!(out, "predicted iterations (epsilon = {epsilon}): {bound}")?;
            predicted = Some(bound);
        }
        None => writeln!(out, "no contraction certificate")?,
    }
    if let Some(k) = r.k_uni {
        let bound = predict_concurrent_bound(epsilon, theta, k as u64, float.payoff_sup_norm())?;
        writeln!(out, "unichain iteration bound (epsilon = {epsilon}): {bound}")?;
        corollary = Some(bound);
    }
    Ok(json!({
        "kind": kind,
        "exact": S::EXACT,
        "states": g.n(),
        "unichain": r.is_unichain,
        "irreducible": r.is_irreducible,
        "p_min": r.p_min.to_string(),
        "theta": r.theta.to_string(),
        "k_uni": r.k_uni,
        "k_irr": r.k_irr,
        "contraction": r.contraction.as_ref().map(|c| json!({ "q": c.q, "gamma": c.gamma.to_string() })),
        "epsilon": epsilon,
        "predicted_iterations": predicted,
        "unichain_iteration_bound": corollary,
    }))
}

fn analyze_turnbased_precision(g: &TurnBasedGame<Rational>, report: &mut Value, out: &mut dyn Write) -> CliResult<()> {
    let (eps, sep) = match (turnbased_epsilon(g), assumption_denominator(g.game())) {
        (Ok(eps), Ok(m)) => (eps, separation_turnbased(g.n(), &m)),
        (Err(e), _) | (_, Err(e)) => {
            writeln!(out, "exact precision: unavailable ({e})")?;
            return Ok(());
        }
    };
    writeln!(out, "exact precision: {eps}")?;
    writeln!(out, "value separation: {sep}")?;
    report["exact_precision"] = json!(eps.to_string());
    report["value_separation"] = json!(sep.to_string());
    Ok(())
}

fn analyze_entropy(g: &EntropyGame, epsilon: f64, cap: u128, out: &mut dyn Write) -> CliResult<Value> {
    writeln!(out, "kind: entropy")?;
    writeln!(out, "despots: {}", g.n())?;
    let r = match entropy_structure(g, cap) {
        Ok(r) => r,
        Err(ergodic_games::Error::PolicyCap { .. }) => {
            writeln!(out, "W: {}", g.max_multiplicity())?;
            writeln!(out, "m_lower: {}", opt(&g.min_offdiagonal_multiplicity()))?;
            writeln!(out, "irreducible: {}", yes_no(None, cap))?;
            return Ok(json!({
                "kind": "entropy",
                "despots": g.n(),
                "w": g.max_multiplicity(),
                "m_lower": g.min_offdiagonal_multiplicity(),
                "irreducible": Value::Null,
            }));
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "W: {}", r.w)?;
    let lower_note = if r.has_offdiagonal { "" } else { " (no off-diagonal multiplicity)" };
    writeln!(out, "m_lower: {}{lower_note}", r.m_lower)?;
    writeln!(out, "vartheta: {}", r.vartheta)?;
    writeln!(out, "irreducible: {}", yes_no(Some(r.is_irreducible), cap))?;
    writeln!(out, "log nu_n: {}", r.nu_n_log)?;
    writeln!(out, "log epsilon (exact policies): {}", r.epsilon_log)?;
    let mut predicted = None;
    let mut exact_bound = None;
    if let Some(c) = &r.contraction {
        let ambiguity: Vec<String> = c.ambiguity_l.iter().map(|a| a.to_string()).collect();
        writeln!(out, "k_irr: {}", c.k_irr)?;
        writeln!(out, "ambiguity A_l: [{}]", ambiguity.join(", "))?;
        writeln!(out, "ambiguity A: {}", c.ambiguity)?;
        writeln!(out, "M_bar: {}", c.m_bar)?;
        writeln!(out, "T_m,vartheta^{} is a contraction of rate {}", c.k_irr, c.gamma)?;
        let op = EntropyOperator::multiplicative(g, r.vartheta as f64)?;
        let t0 = hilbert_seminorm(&op.apply(&vec![0.0; g.n()])?)?;
        if c.gamma < 1.0 {
            let bound = predict_iteration_bound(c.k_irr as u64, c.gamma, t0, epsilon)?;
            writeln!(out, "predicted iterations (epsilon = {epsilon}): {bound}")?;
            predicted = Some(bound);
        }
        let bound = predict_entropy_bound(r.epsilon_log, c.k_irr as u64, c.m_bar);
        writeln!(out, "predicted iterations (exact policies): {bound}")?;
        exact_bound = Some(bound);
    }
    Ok(json!({
        "kind": "entropy",
        "despots": g.n(),
        "w": r.w,
        "m_lower": r.m_lower,
        "has_offdiagonal": r.has_offdiagonal,
        "vartheta": r.vartheta,
        "irreducible": r.is_irreducible,
        "nu_n_log": r.nu_n_log,
        "epsilon_log": r.epsilon_log,
        "contraction": r.contraction.as_ref().map(|c| json!({
            "k_irr": c.k_irr,
            "ambiguity_l": c.ambiguity_l.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "ambiguity": c.ambiguity,
            "m_bar": c.m_bar,
            "gamma": c.gamma,
        })),
        "epsilon": epsilon,
        "predicted_iterations": predicted,
        "predicted_iterations_exact": exact_bound,
    }))
}

fn write_outputs(config: &RunConfig, trace: &Certificate<f64>, cert: Option<&CertificateFile>) -> CliResult<()> {
    if let Some(p) = &config.trace {
        let mut w = BufWriter::new(File::create(p)?);
        write_trace_csv(&trace.trace, &mut w)?;
        w.flush()?;
    }
    if let (Some(p), Some(c)) = (&config.cert, cert) {
        std::fs::write(p, c.to_json())?;
    }
    Ok(())
}

fn print_run(out: &mut dyn Write, c: &CertificateFile) -> CliResult<()> {
    writeln!(out, "epsilon: {}", c.epsilon)?;
    writeln!(out, "eta: {}", c.eta)?;
    if let Some(t) = c.theta {
        writeln!(out, "theta: {t}")?;
    }
    if let Some(v) = c.vartheta {
        writeln!(out, "vartheta: {v}")?;
    }
    writeln!(out, "iterations: {} (predicted bound {}, budget {})", c.iterations, opt(&c.predicted_iterations), c.max_iters)?;
    Ok(())
}

fn non_termination(out: &mut dyn Write, cert: &Certificate<f64>) -> CliError {
    let residual = cert.trace.last().map(|r| r.residual);
    let _ = writeln!(out, "no certificate: not terminated after {} iterations", cert.iterations);
    CliError::NonTermination(format!(
        "relative value iteration did not terminate within {} iterations (last residual {})",
        cert.iterations,
        opt(&residual)
    ))
}

fn print_turnbased_policies(out: &mut dyn Write, g: &ConcurrentGame<f64>, pp: &PurePolicyPair) -> CliResult<()> {
    if g.states().iter().all(|st| st.min_actions.len() == 1 && st.max_actions.len() == 1) {
        writeln!(out, "  (no choices)")?;
    }
    let mut point = 0;
    for (i, st) in g.states().iter().enumerate() {
        if st.min_actions.len() > 1 {
            writeln!(out, "  Min at {}: {}", st.name, st.min_actions[pp.sigma[i]])?;
        }
        for a in &st.min_actions {
            if st.max_actions.len() > 1 {
                let after = if st.min_actions.len() > 1 { format!(" after {a}") } else { String::new() };
                writeln!(out, "  Max at {}{after}: {}", st.name, st.max_actions[pp.tau[point]])?;
            }
            point += 1;
        }
    }
    Ok(())
}

fn print_entropy_policies(out: &mut dyn Write, g: &EntropyGame, pp: &PurePolicyPair) -> CliResult<()> {
    let choices = (0..g.n()).any(|d| g.despot_moves(d).len() > 1) || (0..g.tribunes().len()).any(|t| g.tribune_moves(t).len() > 1);
    if !choices {
        writeln!(out, "  (no choices)")?;
    }
    for (d, name) in g.despots().iter().enumerate() {
        if g.despot_moves(d).len() > 1 {
            writeln!(out, "  Despot {name} -> {}", g.tribunes()[g.despot_moves(d)[pp.sigma[d]]])?;
        }
    }
    for (t, name) in g.tribunes().iter().enumerate() {
        if g.tribune_moves(t).len() > 1 {
            writeln!(out, "  Tribune {name} -> {}", g.people()[g.tribune_moves(t)[pp.tau[t]]])?;
        }
    }
    Ok(())
}

fn solve(config: &RunConfig, cap: u128, out: &mut dyn Write) -> CliResult<()> {
    config.validate()?;
    let game = load_game(&config.file)?;
    let opts = SolveOptions {
        epsilon: config.epsilon.unwrap_or(DEFAULT_EPSILON),
        eta: config.eta,
        theta: config.theta,
        max_iters: config.max_iters,
        policy_cap: cap,
    };
    match game {
        LoadedGame::TurnBased { float, exact: Some(exact) } if config.exact => {
            let sol = solve_turnbased_exact(&exact, cap, config.max_iters)?;
            let mut c = CertificateFile::stochastic("turnbased", &sol.certificate, sol.max_iters, sol.predicted_iterations);
            c.exact_value = Some(sol.value.to_string());
            c.policies = Some(PolicyRecord::from_certificate(&sol.policies));
            write_outputs(config, &sol.certificate, Some(&c))?;
            writeln!(out, "value: {} (exact)", sol.value)?;
            writeln!(out, "interval: [{}, {}]", c.value_interval.0, c.value_interval.1)?;
            writeln!(out, "damped precision: {}", sol.epsilon)?;
            print_run(out, &c)?;
            writeln!(out, "policies ({}):", sol.policies.method.name())?;
            print_turnbased_policies(out, float.game(), &sol.policies.pair)?;
            Ok(())
        }
        LoadedGame::TurnBased { exact: None, .. } if config.exact => Err(CliError::Input(
            "--exact needs rational transitions and integer payments written as strings such as \"1/3\"".into(),
        )),
        LoadedGame::TurnBased { float, .. } => {
            let sol = solve_turnbased(&float, &opts)?;
            let cert = &sol.certificate;
            write_outputs(config, cert, None)?;
            if !cert.terminated {
                return Err(non_termination(out, cert));
            }
            let mut c = CertificateFile::stochastic("turnbased", cert, sol.max_iters, sol.predicted_iterations);
            c.policies = sol.policies.as_ref().map(PolicyRecord::from_certificate);
            write_outputs(config, cert, Some(&c))?;
            writeln!(out, "value interval: [{}, {}]", c.value_interval.0, c.value_interval.1)?;
            print_run(out, &c)?;
            if let Some(p) = &sol.policies {
                writeln!(out, "policies ({}):", p.method.name())?;
                print_turnbased_policies(out, float.game(), &p.pair)?;
            }
            Ok(())
        }
        LoadedGame::Concurrent { .. } if config.exact => {
            Err(CliError::Input("--exact is available for turn-based and entropy games".into()))
        }
        LoadedGame::Concurrent { float, .. } => {
            let sol = solve_concurrent(&float, &opts)?;
            let cert = &sol.certificate;
            write_outputs(config, cert, None)?;
            if !cert.terminated {
                return Err(non_termination(out, cert));
            }
            let c = CertificateFile::stochastic("concurrent", cert, sol.max_iters, sol.predicted_iterations);
            write_outputs(config, cert, Some(&c))?;
            writeln!(out, "value interval: [{}, {}]", c.value_interval.0, c.value_interval.1)?;
            print_run(out, &c)
        }
        LoadedGame::Entropy(g) => {
            if config.eta.is_some() || config.theta.is_some() {
                return Err(CliError::Input("entropy games take neither --eta nor --theta".into()));
            }
            let mode = if config.exact { EntropyMode::ExactPolicies } else { EntropyMode::Approx { epsilon: opts.epsilon } };
            let sol = solve_entropy(&g, mode, cap, config.max_iters)?;
            let cert = &sol.certificate;
            write_outputs(config, cert, None)?;
            if !cert.terminated {
                return Err(non_termination(out, cert));
            }
            let c = CertificateFile {
                kind: "entropy".into(),
                epsilon: cert.epsilon,
                eta: cert.eta,
                theta: None,
                vartheta: Some(sol.vartheta),
                max_iters: sol.max_iters,
                iterations: cert.iterations,
                predicted_iterations: sol.predicted_iterations,
                terminated: true,
                x: cert.x.clone(),
                operator_interval: cert.value_interval,
                value_interval: sol.value_interval,
                exact_value: None,
                policies: Some(PolicyRecord::from_certificate(&sol.policies)),
            };
            write_outputs(config, cert, Some(&c))?;
            writeln!(out, "value: {}", sol.value)?;
            writeln!(out, "value interval: [{}, {}]", c.value_interval.0, c.value_interval.1)?;
            print_run(out, &c)?;
            writeln!(out, "policies ({}):", sol.policies.method.name())?;
            print_entropy_policies(out, &g, &sol.policies.pair)?;
            Ok(())
        }
    }
}

/// Relative slack for floating comparisons against certificate endpoints.
const VERIFY_TOLERANCE: f64 = 1e-9;

fn within(v: f64, (lo, hi): (f64, f64), tol: f64) -> bool {
    let slack = tol * v.abs().max(1.0);
    lo - slack <= v && v <= hi + slack
}

/// `[min(T(x) − x), max(T(x) − x)]`, which brackets the value of the game
/// for any `x`.
fn residual_bounds(tx: &[f64], x: &[f64]) -> (f64, f64) {
    tx.iter().zip(x).map(|(a, b)| a - b).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)))
}

struct Checks<'a> {
    out: &'a mut dyn Write,
    failures: Vec<String>,
}

impl Checks<'_> {
    fn record(&mut self, name: &str, ok: bool, detail: String) -> CliResult<()> {
        writeln!(self.out, "{name}: {} ({detail})", if ok { "pass" } else { "FAIL" })?;
        if !ok {
            self.failures.push(name.to_string());
        }
        Ok(())
    }
}

fn verify(path: &Path, cert_path: &Path, cap: u128, out: &mut dyn Write) -> CliResult<()> {
    let game = load_game(path)?;
    let text = std::fs::read_to_string(cert_path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", cert_path.display())))?;
    let c = CertificateFile::from_json(&text).map_err(|e| CliError::Input(format!("malformed certificate: {e}")))?;
    if c.kind != game.kind() {
        return Err(CliError::Input(format!("certificate is for a {} game, file holds a {} game", c.kind, game.kind())));
    }
    let n = match &game {
        LoadedGame::Concurrent { float, .. } => float.n(),
        LoadedGame::TurnBased { float, .. } => float.n(),
        LoadedGame::Entropy(g) => g.n(),
    };
    if c.x.len() != n || c.x.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("certificate vector must hold {n} finite entries")));
    }
    let mut checks = Checks { out, failures: Vec::new() };
    checks.record("terminated", c.terminated, format!("{} iterations", c.iterations))?;
    match &game {
        LoadedGame::Concurrent { float, .. } => {
            let tx = ConcurrentOperator::new(float, 1e-12)?.apply(&c.x)?;
            let (lo, hi) = residual_bounds(&tx, &c.x);
            let ok = within(lo, c.value_interval, VERIFY_TOLERANCE) && within(hi, c.value_interval, VERIFY_TOLERANCE);
            checks.record("residual", ok, format!("T(x) - x within [{lo}, {hi}]"))?;
            writeln!(checks.out, "oracle: none for concurrent games, the residual bracket is the check")?;
        }
        LoadedGame::TurnBased { float, exact } => {
            let tx = TurnBasedOperator::new(float).apply(&c.x)?;
            let (lo, hi) = residual_bounds(&tx, &c.x);
            let ok = within(lo, c.value_interval, VERIFY_TOLERANCE) && within(hi, c.value_interval, VERIFY_TOLERANCE);
            checks.record("residual", ok, format!("T(x) - x within [{lo}, {hi}]"))?;
            let saddle = match exact {
                Some(g) => turnbased_saddle(g, cap)?,
                None => turnbased_saddle(float, cap)?,
            };
            let v = rational_to_f64(&saddle.value);
            checks.record("oracle value", within(v, c.value_interval, 1e-12), format!("{} in [{}, {}]", saddle.value, c.value_interval.0, c.value_interval.1))?;
            if let Some(text) = &c.exact_value {
                let claimed = parse_rational(text).ok_or_else(|| CliError::Input(format!("bad exact value '{text}'")))?;
                checks.record("exact value", claimed == saddle.value, format!("{claimed} vs oracle {}", saddle.value))?;
            }
            if let Some(p) = &c.policies {
                let pair = p.pair();
                let ok = float.policy_space().validate(&pair).is_ok() && saddle.is_saddle(&pair);
                checks.record("policies", ok, "saddle point of the oracle table".into())?;
            }
        }
        LoadedGame::Entropy(g) => {
            let vartheta = c.vartheta.ok_or_else(|| CliError::Input("entropy certificate without vartheta".into()))?;
            let tx = EntropyOperator::multiplicative(g, vartheta)?.apply(&c.x)?;
            let (lo, hi) = residual_bounds(&tx, &c.x);
            let ok = within(lo, c.operator_interval, VERIFY_TOLERANCE) && within(hi, c.operator_interval, VERIFY_TOLERANCE);
            checks.record("residual", ok, format!("T(x) - x within [{lo}, {hi}]"))?;
            let saddle = entropy_saddle(g, cap)?;
            let rho = saddle.value[0];
            checks.record("oracle value", within(rho, c.value_interval, VERIFY_TOLERANCE), format!("{rho} in [{}, {}]", c.value_interval.0, c.value_interval.1))?;
            if let Some(p) = &c.policies {
                let pair = p.pair();
                let ok = g.policy_space().validate(&pair).is_ok() && saddle.is_saddle(&pair);
                checks.record("policies", ok, "saddle point of the oracle table".into())?;
            }
        }
    }
    if checks.failures.is_empty() {
        writeln!(checks.out, "verification: PASS")?;
        Ok(())
    } else {
        writeln!(checks.out, "verification: FAIL")?;
        Err(CliError::Verification(format!("failed checks: {}", checks.failures.join(", "))))
    }
}
