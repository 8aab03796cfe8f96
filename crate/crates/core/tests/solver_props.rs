use ergodic_games::generate::{random_irreducible_entropy_game, random_unichain_game, random_unichain_turnbased, GameShape};
use ergodic_games::operators::{residual, Damped, ShapleyOperator, TurnBasedOperator};
use ergodic_games::oracle::{entropy_saddle, turnbased_saddle};
use ergodic_games::rvi::{rvi_damped, solve_concurrent, solve_entropy, solve_turnbased, solve_turnbased_exact, EntropyMode, SolveOptions};
use ergodic_games::scalar::rational_to_f64;
use ergodic_games::structure::effective_pmin_theta;
use ergodic_games::{ConcurrentGame, Rational, TurnBasedGame};
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u128 = 1_000_000;

fn shape() -> GameShape {
    GameShape { max_states: 3, max_actions: 3, max_denominator: 4, max_payoff: 5, turn_based: true }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_solver_agrees_with_saddle_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_unichain_turnbased(&mut rng, &shape());
        let sol = solve_turnbased_exact(&g, CAP, None).unwrap();
        let saddle = turnbased_saddle(&g, CAP).unwrap();
        prop_assert_eq!(&sol.value, &saddle.value);
        prop_assert!(saddle.is_saddle(&sol.policies.pair));
        let (lo, hi) = sol.certificate.interval();
        let v = rational_to_f64(&saddle.value);
        prop_assert!(*lo <= v && v <= *hi);
    }

    #[test]
    fn approximate_certificates_contain_the_value(seed in any::<u64>(), eps_exp in 2i32..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = random_unichain_turnbased(&mut rng, &GameShape { max_states: 4, ..shape() });
        let value = rational_to_f64(&turnbased_saddle(&exact, CAP).unwrap().value);
        let g: TurnBasedGame<f64> = exact.map();
        let epsilon = 10f64.powi(-eps_exp);
        let sol = solve_turnbased(&g, &SolveOptions { epsilon, ..SolveOptions::default() }).unwrap();
        let cert = &sol.certificate;
        prop_assert!(cert.terminated);
        let (lo, hi) = cert.interval();
        prop_assert!(*lo <= value + 1e-12 && value <= *hi + 1e-12, "{} not in [{}, {}]", value, lo, hi);
        prop_assert!(hi - lo <= epsilon * (1.0 + 1e-9));
        if let Some(p) = sol.predicted_iterations {
            prop_assert!(cert.iterations <= p.max(1));
        }
    }

    #[test]
    fn residual_envelope_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = random_unichain_turnbased(&mut rng, &GameShape { max_states: 4, ..shape() });
        let (_, theta) = effective_pmin_theta(exact.game()).unwrap();
        let cert = rvi_damped(TurnBasedOperator::new(&exact), theta, &Rational::new(1.into(), 1000.into()), &Rational::from_integer(0.into()), 200).unwrap();
        for w in cert.trace.windows(2) {
            prop_assert!(w[1].alpha >= w[0].alpha);
            prop_assert!(w[1].beta <= w[0].beta);
            prop_assert!(w[1].residual <= w[0].residual);
        }
    }

    #[test]
    fn damped_and_plain_residuals_are_proportional(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = random_unichain_turnbased(&mut rng, &shape());
        let (_, theta) = effective_pmin_theta(exact.game()).unwrap();
        let op = TurnBasedOperator::new(&exact);
        let damped = Damped::new(op, theta.clone()).unwrap();
        let x: Vec<Rational> = (0..exact.n()).map(|_| Rational::new(rng.gen_range(-30..30).into(), rng.gen_range(1..7).into())).collect();
        let rest = Rational::one() - &theta;
        let (a, b) = residual(&op, &x).unwrap();
        let (ad, bd) = residual(&damped, &x).unwrap();
        prop_assert_eq!(ad, &rest * a);
        prop_assert_eq!(bd, &rest * b);
        let tx = op.apply(&x).unwrap();
        let td = damped.apply(&x).unwrap();
        for i in 0..x.len() {
            prop_assert_eq!(&td[i], &(&theta * &x[i] + &rest * &tx[i]));
        }
    }

    #[test]
    fn concurrent_runs_respect_the_iteration_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = random_unichain_game(&mut rng, &GameShape { max_states: 4, turn_based: false, ..shape() });
        let g: ConcurrentGame<f64> = exact.map();
        let sol = solve_concurrent(&g, &SolveOptions { epsilon: 1e-6, ..SolveOptions::default() }).unwrap();
        prop_assert!(sol.certificate.terminated);
        let (lo, hi) = sol.certificate.interval();
        prop_assert!(hi - lo <= 1e-6 * (1.0 + 1e-9));
        if let Some(p) = sol.predicted_iterations {
            prop_assert!(sol.certificate.iterations <= p.max(1));
        }
    }

    #[test]
    fn entropy_solver_agrees_with_saddle_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_irreducible_entropy_game(&mut rng, 3, 4);
        let sol = solve_entropy(&g, EntropyMode::Approx { epsilon: 1e-8 }, CAP, None).unwrap();
        prop_assert!(sol.certificate.terminated);
        let saddle = entropy_saddle(&g, CAP).unwrap();
        let rho = saddle.value[0];
        prop_assert!(saddle.value.iter().all(|v| (v - rho).abs() <= 1e-9));
        prop_assert!((sol.value - rho).abs() <= 1e-6, "{} vs {}", sol.value, rho);
        let (lo, hi) = sol.certificate.value_interval;
        let mu = (sol.vartheta + rho).ln();
        prop_assert!(lo <= mu + 1e-10 && mu <= hi + 1e-10);
        if let Some(p) = sol.predicted_iterations {
            prop_assert!(sol.certificate.iterations <= p.max(1));
        }
    }
}

#[test]
fn float_and_rational_runs_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let exact = random_unichain_turnbased(&mut rng, &shape());
        let (_, theta) = effective_pmin_theta(exact.game()).unwrap();
        let float: TurnBasedGame<f64> = exact.map();
        let eps = Rational::new(1.into(), 10_000.into());
        let r = rvi_damped(TurnBasedOperator::new(&exact), theta.clone(), &eps, &Rational::from_integer(0.into()), 500).unwrap();
        let f = rvi_damped(TurnBasedOperator::new(&float), rational_to_f64(&theta), &1e-4, &0.0, 500).unwrap();
        assert_eq!(r.iterations, f.iterations);
        for (a, b) in r.x.iter().zip(&f.x) {
            assert!((rational_to_f64(a) - b).abs() < 1e-9);
        }
    }
}
