mod common;

use ergodic_games::generate::{random_game, random_irreducible_entropy_game, random_unichain_game, GameShape};
use ergodic_games::numeric::{hilbert_distance, sup_norm};
use ergodic_games::operators::{apply_entropy, apply_entropy_km, ConcurrentOperator, Damped, ShapleyOperator, TurnBasedOperator};
use ergodic_games::structure::{analyze_structure, entropy_structure};
use ergodic_games::{ConcurrentGame, Rational, TurnBasedGame};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u128 = 1_000_000;

fn concurrent_shape() -> GameShape {
    GameShape { max_states: 5, max_actions: 3, max_denominator: 4, max_payoff: 5, turn_based: false }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

fn iterate<O: ShapleyOperator<f64>>(op: &O, v: &[f64], k: usize) -> Vec<f64> {
    (0..k).fold(v.to_vec(), |x, _| op.apply(&x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn turnbased_operator_is_exactly_monotone_and_homogeneous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TurnBasedGame::new(random_game(&mut rng, &GameShape { max_states: 5, ..GameShape::default() }));
        let op = TurnBasedOperator::new(&g);
        let n = g.n();
        let v: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(-20..20).into(), rng.gen_range(1..5).into())).collect();
        let w: Vec<Rational> = v.iter().map(|x| x + Rational::new(rng.gen_range(0..10).into(), 3.into())).collect();
        let (tv, tw) = (op.apply(&v).unwrap(), op.apply(&w).unwrap());
        prop_assert!(tv.iter().zip(&tw).all(|(a, b)| a <= b));
        let c = Rational::new(7.into(), 3.into());
        let shifted: Vec<Rational> = v.iter().map(|x| x + &c).collect();
        let ts = op.apply(&shifted).unwrap();
        prop_assert!(ts.iter().zip(&tv).all(|(a, b)| *a == b + &c));
    }

    #[test]
    fn concurrent_operator_is_monotone_and_nonexpansive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: ConcurrentGame<f64> = random_game(&mut rng, &concurrent_shape()).map();
        let eta = 1e-9;
        let op = ConcurrentOperator::new(&g, eta).unwrap();
        let n = g.n();
        let v = random_vec(&mut rng, n, 10.0);
        let up: Vec<f64> = v.iter().map(|x| x + rng.gen_range(0.0..3.0)).collect();
        let (tv, tu) = (op.apply(&v).unwrap(), op.apply(&up).unwrap());
        prop_assert!(tv.iter().zip(&tu).all(|(a, b)| *a <= b + 2.0 * eta));
        let w = random_vec(&mut rng, n, 10.0);
        let tw = op.apply(&w).unwrap();
        prop_assert!(hilbert_distance(&tv, &tw).unwrap() <= hilbert_distance(&v, &w).unwrap() + 4.0 * eta);
        let diff: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
        let tdiff: Vec<f64> = tv.iter().zip(&tw).map(|(a, b)| a - b).collect();
        prop_assert!(sup_norm(&tdiff).unwrap() <= sup_norm(&diff).unwrap() + 4.0 * eta);
    }

    #[test]
    fn damped_operator_contracts_at_the_certified_rate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exact = random_unichain_game(&mut rng, &GameShape { max_states: 4, ..concurrent_shape() });
        let report = analyze_structure(&exact, CAP).unwrap();
        let k = report.k_uni.unwrap();
        let g: ConcurrentGame<f64> = exact.map();
        let theta = ergodic_games::scalar::rational_to_f64(&report.theta);
        let damped = Damped::new(ConcurrentOperator::new(&g, 1e-12).unwrap(), theta).unwrap();
        let rate = 1.0 - theta.powi(k as i32);
        for _ in 0..20 {
            let v = random_vec(&mut rng, g.n(), 10.0);
            let w = random_vec(&mut rng, g.n(), 10.0);
            let before = hilbert_distance(&v, &w).unwrap();
            let after = hilbert_distance(&iterate(&damped, &v, k), &iterate(&damped, &w, k)).unwrap();
            prop_assert!(after <= rate * before + 1e-9, "{} > {} * {}", after, rate, before);
        }
    }

    #[test]
    fn entropy_operator_homogeneity(seed in any::<u64>(), s in 0.01f64..100.0, c in -50.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_irreducible_entropy_game(&mut rng, 3, 4);
        let x: Vec<f64> = (0..g.n()).map(|_| rng.gen_range(0.1..10.0)).collect();
        let fx = apply_entropy(&g, &x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        let fs = apply_entropy(&g, &scaled).unwrap();
        prop_assert!(fs.iter().zip(&fx).all(|(a, b)| (a - s * b).abs() <= 1e-9 * a.abs().max(1.0)));
        let v: Vec<f64> = x.iter().map(|t| t.ln()).collect();
        let tv = apply_entropy_km(&g, 1.0, &v).unwrap();
        let shifted: Vec<f64> = v.iter().map(|t| t + c).collect();
        let ts = apply_entropy_km(&g, 1.0, &shifted).unwrap();
        prop_assert!(ts.iter().zip(&tv).all(|(a, b)| (a - b - c).abs() <= 1e-9));
    }

    #[test]
    fn entropy_damped_operator_contracts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_irreducible_entropy_game(&mut rng, 3, 4);
        let report = entropy_structure(&g, CAP).unwrap();
        let c = report.contraction.unwrap();
        let op = ergodic_games::operators::EntropyOperator::multiplicative(&g, report.vartheta as f64).unwrap();
        for _ in 0..20 {
            let v = random_vec(&mut rng, g.n(), 5.0);
            let w = random_vec(&mut rng, g.n(), 5.0);
            let before = hilbert_distance(&v, &w).unwrap();
            let after = hilbert_distance(&iterate(&op, &v, c.k_irr), &iterate(&op, &w, c.k_irr)).unwrap();
            prop_assert!(after <= c.gamma * before + 1e-9, "{} > {} * {}", after, c.gamma, before);
        }
    }
}

#[test]
fn eigenvector_of_the_damped_entropy_operator() {
    // one-cycle with multiplicity 2: T(u) = u + log 2, so T_{m,ϑ}(u) = u + log(ϑ + 2)
    let g = common::entropy_fixture("entropy_one_cycle.json");
    let t = apply_entropy_km(&g, 1.5, &[0.7]).unwrap();
    assert!((t[0] - 0.7 - 3.5f64.ln()).abs() < 1e-14);
}
