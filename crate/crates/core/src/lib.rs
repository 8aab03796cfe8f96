//! Solvers for zero-sum stochastic mean-payoff games (concurrent and
//! turn-based) and entropy games by relative value iteration on
//! Krasnoselskii–Mann damped Shapley operators.
//!
//! Numeric code is generic over [`Scalar`], implemented for `f32`, `f64` and
//! the exact [`Rational`]. Iteration runs in floating point by default;
//! verification paths use exact rationals.

pub mod error;
pub mod format;
pub mod game;
pub mod generate;
pub mod matrix_game;
pub mod numeric;
pub mod operators;
pub mod oracle;
pub mod rvi;
pub mod scalar;
pub mod structure;

pub use error::{Error, Result};
pub use game::{ConcurrentGame, Control, EntropyGame, PurePolicyPair, TurnBasedGame};
pub use numeric::{StochasticMatrix, Valuation};
pub use operators::ShapleyOperator;
pub use rvi::{Certificate, PolicyCertificate};
pub use scalar::{Rational, Scalar};

/// Floating-point concurrent game.
pub type ConcurrentGameF64 = ConcurrentGame<f64>;
/// Exact concurrent game.
pub type ExactConcurrentGame = ConcurrentGame<Rational>;
/// Floating-point turn-based game.
pub type TurnBasedGameF64 = TurnBasedGame<f64>;
/// Exact turn-based game.
pub type ExactTurnBasedGame = TurnBasedGame<Rational>;
