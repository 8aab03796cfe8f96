use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ergodic_games::format::{to_json, LoadedGame};
use ergodic_games::generate::{random_unichain_turnbased, GameShape};
use ergodic_games_cli::cert::CertificateFile;
use ergodic_games_cli::{run, EXIT_CAP, EXIT_INPUT, EXIT_NON_TERMINATION, EXIT_OK, EXIT_VERIFICATION};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergodic-games")).args(args).env_remove("ERGODIC_GAMES_POLICY_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["ergodic-games"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_the_three_state_game_contraction() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let f = fixture("three_state.json");
    let (code, out, _) = in_process(&["analyze", path_str(&f), "--report", path_str(&report)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("contraction of rate 3/4"), "{out}");
    assert!(out.contains("k_uni: 1"));
    assert!(out.contains("theta: 1/4"));
    assert!(out.contains("exact precision: 1/15552"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["contraction"]["gamma"], "3/4");
    assert_eq!(json["p_min"], "1/3");
}

#[test]
fn analyze_positive_transitions() {
    let dir = TempDir::new().unwrap();
    let game = dir.path().join("positive.json");
    std::fs::write(
        &game,
        r#"{ "kind": "turnbased",
             "states": [ { "name": "a", "min_actions": ["x", "y"], "max_actions": ["-"] },
                         { "name": "b", "min_actions": ["-"], "max_actions": ["x", "y"] } ],
             "payoff": [ [["1"], ["2"]], [["0", "3"]] ],
             "transition": [ [[["1/2", "1/2"]], [["1/4", "3/4"]]], [[["1/3", "2/3"], ["2/3", "1/3"]]] ] }"#,
    )
    .unwrap();
    let (code, out, _) = in_process(&["analyze", path_str(&game)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("k_uni: 1"), "{out}");
    assert!(out.contains("irreducible: yes"));
}

#[test]
fn solve_then_verify_the_three_state_game() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("a.cert");
    let trace = dir.path().join("a.csv");
    let f = fixture("three_state.json");
    let o = bin(&["solve", path_str(&f), "--epsilon", "1e-6", "--cert", path_str(&cert), "--trace", path_str(&trace)]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert!(text.contains("Min at 2: to_max_3"), "{text}");
    let c = CertificateFile::from_json(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let (lo, hi) = c.value_interval;
    assert!(lo <= 3.75 && 3.75 <= hi && hi - lo <= 1e-6);
    assert_eq!(c.theta, Some(0.25));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(csv.lines().next(), Some("iteration,residual_H,alpha,beta"));
    assert_eq!(csv.lines().count() as u64, c.iterations + 1);

    let v = bin(&["verify", path_str(&f), "--cert", path_str(&cert)]);
    assert_eq!(v.status.code(), Some(EXIT_OK));
    assert!(stdout(&v).contains("oracle value: pass (15/4"));
}

#[test]
fn exact_solve_records_the_rational_value() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("b.cert");
    let f = fixture("three_state.json");
    let (code, out, _) = in_process(&["solve", path_str(&f), "--exact", "--cert", path_str(&cert)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value: 15/4 (exact)"));
    let c = CertificateFile::from_json(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c.exact_value.as_deref(), Some("15/4"));
    assert_eq!(c.policies.unwrap().sigma, vec![0, 1, 0]);
    let (code, out, _) = in_process(&["verify", path_str(&f), "--cert", path_str(&cert)]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("exact value: pass"));
}

#[test]
fn corrupted_certificates_fail() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("a.cert");
    let f = fixture("three_state.json");
    assert_eq!(in_process(&["solve", path_str(&f), "--cert", path_str(&cert)]).0, EXIT_OK);
    let good = CertificateFile::from_json(&std::fs::read_to_string(&cert).unwrap()).unwrap();

    let mut shifted = good.clone();
    shifted.value_interval = (3.8, 3.9);
    shifted.operator_interval = (3.8, 3.9);
    std::fs::write(&cert, shifted.to_json()).unwrap();
    let (code, out, _) = in_process(&["verify", path_str(&f), "--cert", path_str(&cert)]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert!(out.contains("verification: FAIL"));

    let mut wrong_policy = good.clone();
    wrong_policy.policies.as_mut().unwrap().sigma = vec![0, 0, 0];
    std::fs::write(&cert, wrong_policy.to_json()).unwrap();
    assert_eq!(in_process(&["verify", path_str(&f), "--cert", path_str(&cert)]).0, EXIT_VERIFICATION);

    let mut wrong_value = good;
    wrong_value.exact_value = Some("7/2".into());
    std::fs::write(&cert, wrong_value.to_json()).unwrap();
    assert_eq!(in_process(&["verify", path_str(&f), "--cert", path_str(&cert)]).0, EXIT_VERIFICATION);
}

#[test]
fn single_state_takes_one_iteration() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("s.cert");
    let (code, _, _) = in_process(&["solve", path_str(&fixture("single_state.json")), "--cert", path_str(&cert)]);
    assert_eq!(code, EXIT_OK);
    let c = CertificateFile::from_json(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c.iterations, 1);
    assert!(c.value_interval.0 <= 5.0 && 5.0 <= c.value_interval.1);
}

#[test]
fn entropy_two_cycle_has_value_one() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("e.cert");
    let f = fixture("entropy_two_cycle.json");
    let (code, out, _) = in_process(&["solve", path_str(&f), "--cert", path_str(&cert)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value: 1\n"), "{out}");
    let c = CertificateFile::from_json(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c.vartheta, Some(1.0));
    assert_eq!(in_process(&["verify", path_str(&f), "--cert", path_str(&cert)]).0, EXIT_OK);
    let (code, out, _) = in_process(&["solve", path_str(&f), "--exact"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value: 1\n"));
}

#[test]
fn multichain_game_does_not_terminate() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("m.cert");
    let o = bin(&["solve", path_str(&fixture("multichain.json")), "--max-iters", "500", "--cert", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(EXIT_NON_TERMINATION));
    assert!(!cert.exists());
    let o = bin(&["solve", path_str(&fixture("multichain.json")), "--exact"]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
}

#[test]
fn policy_cap_makes_verification_unavailable() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("a.cert");
    let f = fixture("three_state.json");
    assert_eq!(bin(&["solve", path_str(&f), "--cert", path_str(&cert)]).status.code(), Some(EXIT_OK));
    let o = Command::new(env!("CARGO_BIN_EXE_ergodic-games"))
        .args(["verify", path_str(&f), "--cert", path_str(&cert)])
        .env("ERGODIC_GAMES_POLICY_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CAP));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unverifiable at desk scale"));
    let o = Command::new(env!("CARGO_BIN_EXE_ergodic-games"))
        .args(["analyze", path_str(&f)])
        .env("ERGODIC_GAMES_POLICY_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(stdout(&o).contains("unichain: unverified"));
}

#[test]
fn input_errors() {
    let f = fixture("three_state.json");
    assert_eq!(bin(&["solve", "/nonexistent/game.json"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(bin(&["solve", path_str(&f), "--eta", "1"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(bin(&["solve", path_str(&f), "--epsilon", "0"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(bin(&["solve", path_str(&f), "--exact", "--theta", "0.5"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(bin(&["solve", path_str(&fixture("matching_pennies.json")), "--exact"]).status.code(), Some(EXIT_INPUT));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "kind": "turnbased", "states": [] "#).unwrap();
    assert_eq!(bin(&["analyze", path_str(&bad)]).status.code(), Some(EXIT_INPUT));
    let cert = dir.path().join("c.cert");
    assert_eq!(bin(&["solve", path_str(&fixture("entropy_two_cycle.json")), "--cert", path_str(&cert)]).status.code(), Some(EXIT_OK));
    assert_eq!(bin(&["verify", path_str(&f), "--cert", path_str(&cert)]).status.code(), Some(EXIT_INPUT));
}

#[test]
fn runs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = fixture("matching_pennies.json");
    let outputs: Vec<(String, String, String)> = (0..2)
        .map(|k| {
            let cert = dir.path().join(format!("{k}.cert"));
            let trace = dir.path().join(format!("{k}.csv"));
            let o = bin(&["solve", path_str(&f), "--cert", path_str(&cert), "--trace", path_str(&trace)]);
            assert_eq!(o.status.code(), Some(EXIT_OK));
            (stdout(&o), std::fs::read_to_string(cert).unwrap(), std::fs::read_to_string(trace).unwrap())
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn random_turnbased_instances_verify() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shape = GameShape { max_states: 3, max_actions: 3, max_denominator: 4, max_payoff: 5, turn_based: true };
    for seed in 0..100 {
        let g = random_unichain_turnbased(&mut rng, &shape);
        let game = dir.path().join(format!("g{seed}.json"));
        let cert = dir.path().join(format!("g{seed}.cert"));
        std::fs::write(&game, to_json(&LoadedGame::TurnBased { float: g.map(), exact: Some(g) })).unwrap();
        let (code, out, err) = in_process(&["solve", path_str(&game), "--exact", "--cert", path_str(&cert)]);
        assert_eq!(code, EXIT_OK, "seed {seed}: {out}{err}");
        let (code, out, _) = in_process(&["verify", path_str(&game), "--cert", path_str(&cert)]);
        assert_eq!(code, EXIT_OK, "seed {seed}: {out}");
    }
}
