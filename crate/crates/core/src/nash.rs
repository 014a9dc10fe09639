//! Normal-form bimatrix games and pure Nash equilibria.
//!
//! Best responses are materialized as [`SimpleResponse`] relations over a
//! single frozen state (the bimatrix itself), and pure equilibria are the
//! fixed points of their composition. `brute_force_nash` checks every
//! profile against all unilateral deviations and serves as the independent
//! oracle for `pure_nash`.

use crate::arena::{compose_simple, ArenaError, Player, SimpleResponse};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NashError {
    #[error("payoff matrix must be {rows}x{cols}, got row {row} of length {got}")]
    BadShape { rows: usize, cols: usize, row: usize, got: usize },
    #[error("move sets must be non-empty")]
    Empty,
    #[error("payoff entries must be finite")]
    NonFinite,
    #[error("duplicate move label `{0}`")]
    DuplicateLabel(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

/// The single frozen state label carried by both players of a bimatrix game.
const STATE_LABEL: &str = "sigma";

/// A pair of payoff matrices indexed by (row move of A, column move of B).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffBimatrix {
    a_moves: Vec<String>,
    b_moves: Vec<String>,
    payoff_a: Vec<Vec<f64>>,
    payoff_b: Vec<Vec<f64>>,
}

/// A pure strategy profile, by move label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StrategyProfile {
    pub a_move: String,
    pub b_move: String,
}

impl PayoffBimatrix {
    pub fn new(
        a_moves: Vec<String>,
        b_moves: Vec<String>,
        payoff_a: Vec<Vec<f64>>,
        payoff_b: Vec<Vec<f64>>,
    ) -> Result<Self, NashError> {
        if a_moves.is_empty() || b_moves.is_empty() {
            return Err(NashError::Empty);
        }
        for labels in [&a_moves, &b_moves] {
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(NashError::DuplicateLabel(l.clone()));
                }
            }
        }
        let (rows, cols) = (a_moves.len(), b_moves.len());
        for m in [&payoff_a, &payoff_b] {
            if m.len() != rows {
                return Err(NashError::BadShape { rows, cols, row: m.len(), got: 0 });
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != cols {
                    return Err(NashError::BadShape { rows, cols, row: i, got: row.len() });
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(NashError::NonFinite);
                }
            }
        }
        Ok(PayoffBimatrix { a_moves, b_moves, payoff_a, payoff_b })
    }

    /// Convenience constructor with generated labels `a0..`, `b0..`.
    pub fn from_matrices(
        payoff_a: Vec<Vec<f64>>,
        payoff_b: Vec<Vec<f64>>,
    ) -> Result<Self, NashError> {
        let rows = payoff_a.len();
        let cols = payoff_a.first().map(|r| r.len()).unwrap_or(0);
        PayoffBimatrix::new(
            (0..rows).map(|i| format!("a{i}")).collect(),
            (0..cols).map(|j| format!("b{j}")).collect(),
            payoff_a,
            payoff_b,
        )
    }

    /// Reads the plain-text format: `rows cols`, then the row-player block,
    /// then the column-player block, all whitespace separated.
    pub fn from_text(text: &str) -> Result<Self, NashError> {
        let mut tokens = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                tokens.push((lineno + 1, tok));
            }
        }
        let mut iter = tokens.iter();
        let mut next_num = |what: &str| -> Result<(usize, f64), NashError> {
            match iter.next() {
                None => Err(NashError::Parse {
                    line: tokens.last().map(|(l, _)| *l).unwrap_or(0),
                    message: format!("unexpected end of input while reading {what}"),
                }),
                Some((line, tok)) => tok.parse::<f64>().map(|v| (*line, v)).map_err(|_| {
                    NashError::Parse {
                        line: *line,
                        message: format!("expected a number for {what}, got `{tok}`"),
                    }
                }),
            }
        };
        let (line, rows_f) = next_num("row count")?;
        let (_, cols_f) = next_num("column count")?;
        if rows_f.fract() != 0.0 || cols_f.fract() != 0.0 || rows_f < 1.0 || cols_f < 1.0 {
            return Err(NashError::Parse { line, message: "dimensions must be positive integers".into() });
        }
        let (rows, cols) = (rows_f as usize, cols_f as usize);
        let mut read_block = |name: &str| -> Result<Vec<Vec<f64>>, NashError> {
            let mut m = Vec::with_capacity(rows);
            for _ in 0..rows {
                let mut row = Vec::with_capacity(cols);
                for _ in 0..cols {
                    row.push(next_num(name)?.1);
                }
                m.push(row);
            }
            Ok(m)
        };
        let payoff_a = read_block("row-player payoff")?;
        let payoff_b = read_block("column-player payoff")?;
        if let Some((line, tok)) = iter.next() {
            return Err(NashError::Parse {
                line: *line,
                message: format!("trailing token `{tok}` after both payoff blocks"),
            });
        }
        PayoffBimatrix::from_matrices(payoff_a, payoff_b)
    }

    pub fn a_moves(&self) -> &[String] {
        &self.a_moves
    }

    pub fn b_moves(&self) -> &[String] {
        &self.b_moves
    }

    pub fn payoff_a(&self) -> &[Vec<f64>] {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &[Vec<f64>] {
        &self.payoff_b
    }

    /// Player A with the frozen bimatrix as its only state.
    pub fn player_a(&self) -> Player {
        Player::new(self.a_moves.clone(), vec![STATE_LABEL.to_string()]).expect("non-empty")
    }

    pub fn player_b(&self) -> Player {
        Player::new(self.b_moves.clone(), vec![STATE_LABEL.to_string()]).expect("non-empty")
    }

    fn profile(&self, a: usize, b: usize) -> StrategyProfile {
        StrategyProfile { a_move: self.a_moves[a].clone(), b_move: self.b_moves[b].clone() }
    }
}

/// A's best responses to each B move: the relation keeps every maximizer of
/// the corresponding column of A's payoff matrix, leaving the state fixed.
pub fn best_response_a(g: &PayoffBimatrix) -> SimpleResponse {
    let mut quads = Vec::new();
    for b in 0..g.b_moves.len() {
        let best = (0..g.a_moves.len())
            .map(|a| g.payoff_a[a][b])
            .fold(f64::NEG_INFINITY, f64::max);
        for a in 0..g.a_moves.len() {
            if g.payoff_a[a][b] >= best {
                quads.push((b, 0, 0, a));
            }
        }
    }
    SimpleResponse::new(g.player_b(), g.player_a(), quads).expect("indices valid by construction")
}

/// B's best responses to each A move: row maximizers of B's payoff matrix.
pub fn best_response_b(g: &PayoffBimatrix) -> SimpleResponse {
    let mut quads = Vec::new();
    for a in 0..g.a_moves.len() {
        let best = (0..g.b_moves.len())
            .map(|b| g.payoff_b[a][b])
            .fold(f64::NEG_INFINITY, f64::max);
        for b in 0..g.b_moves.len() {
            if g.payoff_b[a][b] >= best {
                quads.push((a, 0, 0, b));
            }
        }
    }
    SimpleResponse::new(g.player_a(), g.player_b(), quads).expect("indices valid by construction")
}

/// Pure Nash equilibria as fixed points of the composite best-response
/// relation A -> B -> A, with the mediating B move recovered as witness.
pub fn pure_nash(g: &PayoffBimatrix) -> BTreeSet<StrategyProfile> {
    let br_a = best_response_a(g);
    let br_b = best_response_b(g);
    let round_trip = compose_simple(&br_b, &br_a).expect("players line up");
    let mut out = BTreeSet::new();
    for a in 0..g.a_moves.len() {
        if !round_trip.contains((a, 0, 0, a)) {
            continue;
        }
        for b in 0..g.b_moves.len() {
            if br_b.contains((a, 0, 0, b)) && br_a.contains((b, 0, 0, a)) {
                out.insert(g.profile(a, b));
            }
        }
    }
    out
}

/// Deviation-check oracle: a profile is an equilibrium when no unilateral
/// deviation strictly improves the deviating player.
pub fn brute_force_nash(g: &PayoffBimatrix) -> BTreeSet<StrategyProfile> {
    let mut out = BTreeSet::new();
    for a in 0..g.a_moves.len() {
        for b in 0..g.b_moves.len() {
            let a_ok = (0..g.a_moves.len()).all(|x| g.payoff_a[x][b] <= g.payoff_a[a][b]);
            let b_ok = (0..g.b_moves.len()).all(|y| g.payoff_b[a][y] <= g.payoff_b[a][b]);
            if a_ok && b_ok {
                out.insert(g.profile(a, b));
            }
        }
    }
    out
}
