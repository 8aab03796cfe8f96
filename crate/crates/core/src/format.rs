//! JSON game files.
//!
//! ```json
//! { "kind": "turnbased",
//!   "states": [ { "name": "s", "min_actions": ["a"], "max_actions": ["b"] } ],
//!   "payoff": [ [ [5] ] ],
//!   "transition": [ [ [ ["1/1"] ] ] ] }
//! ```
//!
//! Numbers may be JSON numbers or strings (`"p/q"` or a decimal literal).
//! A string anywhere in `payoff` or `transition` loads the game in exact
//! rational mode. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ConcurrentGame, EntropyEdge, EntropyGame, StateSpec, TurnBasedGame};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    name: String,
    min_actions: Vec<String>,
    max_actions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StochasticFile {
    states: Vec<StateEntry>,
    payoff: Vec<Vec<Vec<Number>>>,
    transition: Vec<Vec<Vec<Vec<Number>>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    from: String,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntropyFile {
    despot: Vec<String>,
    tribune: Vec<String>,
    people: Vec<String>,
    edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GameFile {
    Concurrent(StochasticFile),
    Turnbased(StochasticFile),
    Entropy(EntropyFile),
}

/// A validated game as read from a file.
///
/// Stochastic games always carry a floating copy; `exact` is present when the
/// file was in rational mode.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedGame {
    Concurrent { float: ConcurrentGame<f64>, exact: Option<ConcurrentGame<Rational>> },
    TurnBased { float: TurnBasedGame<f64>, exact: Option<TurnBasedGame<Rational>> },
    Entropy(EntropyGame),
}

impl LoadedGame {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedGame::Concurrent { .. } => "concurrent",
            LoadedGame::TurnBased { .. } => "turnbased",
            LoadedGame::Entropy(_) => "entropy",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LoadedGame::Concurrent { exact: Some(_), .. } | LoadedGame::TurnBased { exact: Some(_), .. })
    }
}

pub fn load_game(path: impl AsRef<Path>) -> Result<LoadedGame> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    parse_game(&bytes)
}

pub fn parse_game(bytes: &[u8]) -> Result<LoadedGame> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Schema(format!("file is not UTF-8: {e}")))?;
    let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    match file {
        GameFile::Concurrent(f) => {
            let (float, exact) = build_stochastic(f)?;
            Ok(LoadedGame::Concurrent { float, exact })
        }
        GameFile::Turnbased(f) => {
            let (float, exact) = build_stochastic(f)?;
            Ok(LoadedGame::TurnBased {
                float: TurnBasedGame::new(float),
                exact: exact.map(TurnBasedGame::new),
            })
        }
        GameFile::Entropy(f) => Ok(LoadedGame::Entropy(build_entropy(f)?)),
    }
}

fn uses_text(f: &StochasticFile) -> bool {
    let is_text = |x: &Number| matches!(x, Number::Text(_));
    f.payoff.iter().flatten().flatten().any(is_text) || f.transition.iter().flatten().flatten().flatten().any(is_text)
}

fn exact_number(x: &Number, what: &str) -> Result<Rational> {
    match x {
        Number::Text(t) => parse_rational(t).ok_or_else(|| Error::Schema(format!("cannot parse {what} '{t}'"))),
        // shortest round-trip decimal of the literal, so 0.1 becomes 1/10
        Number::Float(v) => parse_rational(&format!("{v}")).ok_or_else(|| Error::Schema(format!("cannot parse {what} {v}"))),
    }
}

fn float_number(x: &Number) -> f64 {
    match x {
        Number::Float(v) => *v,
        Number::Text(_) => unreachable!("text forces exact mode"),
    }
}

type Built = (ConcurrentGame<f64>, Option<ConcurrentGame<Rational>>);

fn build_stochastic(f: StochasticFile) -> Result<Built> {
    let exact = uses_text(&f);
    let states: Vec<StateSpec> = f
        .states
        .iter()
        .map(|s| StateSpec { name: s.name.clone(), min_actions: s.min_actions.clone(), max_actions: s.max_actions.clone() })
        .collect();
    if exact {
        let payoff = map3(&f.payoff, |x| exact_number(x, "payoff"))?;
        let transition = f
            .transition
            .iter()
            .map(|s| map3(s, |x| exact_number(x, "probability")))
            .collect::<Result<Vec<_>>>()?;
        let game = ConcurrentGame::new(states, payoff, transition)?;
        Ok((game.map(), Some(game)))
    } else {
        let payoff = map3(&f.payoff, |x| Ok(float_number(x)))?;
        let transition = f
            .transition
            .iter()
            .map(|s| map3(s, |x| Ok(float_number(x))))
            .collect::<Result<Vec<_>>>()?;
        Ok((ConcurrentGame::new(states, payoff, transition)?, None))
    }
}

fn map3<T, U>(v: &[Vec<Vec<T>>], f: impl Fn(&T) -> Result<U> + Copy) -> Result<Vec<Vec<Vec<U>>>> {
    v.iter()
        .map(|a| a.iter().map(|b| b.iter().map(f).collect()).collect())
        .collect()
}

fn build_entropy(f: EntropyFile) -> Result<EntropyGame> {
    let edges = f
        .edges
        .into_iter()
        .map(|e| {
            let multiplicity = match e.multiplicity {
                Some(m) if m < 1 => {
                    return Err(Error::Schema(format!("non-positive multiplicity {m} on edge {} -> {}", e.from, e.to)))
                }
                Some(m) => Some(m as u64),
                None => None,
            };
            Ok(EntropyEdge { from: e.from, to: e.to, multiplicity })
        })
        .collect::<Result<Vec<_>>>()?;
    EntropyGame::new(f.despot, f.tribune, f.people, edges)
}

fn stochastic_file<S: Scalar>(g: &ConcurrentGame<S>, number: impl Fn(&S) -> Number + Copy) -> StochasticFile {
    StochasticFile {
        states: g
            .states()
            .iter()
            .map(|s| StateEntry { name: s.name.clone(), min_actions: s.min_actions.clone(), max_actions: s.max_actions.clone() })
            .collect(),
        payoff: g.payoff_table().iter().map(|a| a.iter().map(|b| b.iter().map(number).collect()).collect()).collect(),
        transition: g
            .transition_table()
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(|p| p.iter().map(number).collect()).collect()).collect())
            .collect(),
    }
}

fn exact_text(x: &Rational) -> Number {
    Number::Text(format_rational(x))
}

fn float_value(x: &f64) -> Number {
    Number::Float(*x)
}

/// Serializes a game; exact games are written with `"p/q"` strings.
pub fn to_json(game: &LoadedGame) -> String {
    let file = match game {
        LoadedGame::Concurrent { exact: Some(g), .. } => GameFile::Concurrent(stochastic_file(g, exact_text)),
        LoadedGame::Concurrent { float, .. } => GameFile::Concurrent(stochastic_file(float, float_value)),
        LoadedGame::TurnBased { exact: Some(g), .. } => GameFile::Turnbased(stochastic_file(g.game(), exact_text)),
        LoadedGame::TurnBased { float, .. } => GameFile::Turnbased(stochastic_file(float.game(), float_value)),
        LoadedGame::Entropy(g) => GameFile::Entropy(EntropyFile {
            despot: g.despots().to_vec(),
            tribune: g.tribunes().to_vec(),
            people: g.people().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeEntry { from: e.from.clone(), to: e.to.clone(), multiplicity: e.multiplicity.map(|m| m as i64) })
                .collect(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("game files serialize")
}
