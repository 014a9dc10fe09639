//! Players and the responses between them.
//!
//! A player is a finite set of move labels together with a finite set of
//! state labels. A simple response from player `A` to player `B` relates an
//! `A`-move and a `B`-state to a `B`-state update and a `B`-reply; a mixed
//! response attaches probabilities instead, normalized jointly over the
//! `(state, state', reply)` outcome for each incoming move. Composition
//! routes through the shared middle player and is associative and unitary.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Tolerance for the stochasticity invariant of mixed responses.
pub const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ArenaError {
    #[error("player must have at least one move and one state")]
    EmptyPlayer,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("quadruple index out of range: {0:?}")]
    IndexOutOfRange((usize, usize, usize, usize)),
    #[error("composition requires first.target = second.source")]
    PlayerMismatch,
    #[error("kernel row for move `{mv}` sums to {sum}, expected 1")]
    NonStochastic { mv: String, sum: f64 },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("move `{0}` has no quadruple; relation is not liftable")]
    NotLiftable(String),
}

/// A player: finite ordered move and state label sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    moves: Vec<String>,
    states: Vec<String>,
}

impl Player {
    pub fn new<S: Into<String>>(
        moves: impl IntoIterator<Item = S>,
        states: impl IntoIterator<Item = S>,
    ) -> Result<Self, ArenaError> {
        let moves: Vec<String> = moves.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if moves.is_empty() || states.is_empty() {
            return Err(ArenaError::EmptyPlayer);
        }
        for labels in [&moves, &states] {
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l.clone()) {
                    return Err(ArenaError::DuplicateLabel(l.clone()));
                }
            }
        }
        Ok(Player { moves, states })
    }

    pub fn moves(&self) -> &[String] {
        &self.moves
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn move_index(&self, label: &str) -> Result<usize, ArenaError> {
        self.moves
            .iter()
            .position(|m| m == label)
            .ok_or_else(|| ArenaError::UnknownLabel(label.to_string()))
    }

    pub fn state_index(&self, label: &str) -> Result<usize, ArenaError> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| ArenaError::UnknownLabel(label.to_string()))
    }
}

/// Quadruple `(a, state, state', b)`: indices into the source player's moves
/// (first) and the target player's states and moves (rest).
pub type Quad = (usize, usize, usize, usize);

/// A relation prescribing, for a source move and a target state, the target's
/// state update and reply move.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleResponse {
    source: Player,
    target: Player,
    relation: BTreeSet<Quad>,
}

impl SimpleResponse {
    pub fn new(
        source: Player,
        target: Player,
        relation: impl IntoIterator<Item = Quad>,
    ) -> Result<Self, ArenaError> {
        let relation: BTreeSet<Quad> = relation.into_iter().collect();
        for &q in &relation {
            if q.0 >= source.moves.len()
                || q.1 >= target.states.len()
                || q.2 >= target.states.len()
                || q.3 >= target.moves.len()
            {
                return Err(ArenaError::IndexOutOfRange(q));
            }
        }
        Ok(SimpleResponse { source, target, relation })
    }

    /// Builds a response from `(move, state, state', move)` label quadruples.
    pub fn from_labels(
        source: Player,
        target: Player,
        quads: &[(&str, &str, &str, &str)],
    ) -> Result<Self, ArenaError> {
        let mut relation = BTreeSet::new();
        for (a, s0, s1, b) in quads {
            relation.insert((
                source.move_index(a)?,
                target.state_index(s0)?,
                target.state_index(s1)?,
                target.move_index(b)?,
            ));
        }
        Ok(SimpleResponse { source, target, relation })
    }

    pub fn source(&self) -> &Player {
        &self.source
    }

    pub fn target(&self) -> &Player {
        &self.target
    }

    pub fn relation(&self) -> &BTreeSet<Quad> {
        &self.relation
    }

    pub fn contains(&self, q: Quad) -> bool {
        self.relation.contains(&q)
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }

    /// A source move is single-valued when it has exactly one quadruple.
    pub fn is_deterministic(&self) -> bool {
        let mut counts = BTreeMap::new();
        for q in &self.relation {
            *counts.entry(q.0).or_insert(0usize) += 1;
        }
        counts.values().all(|&c| c == 1)
    }
}

/// Identity response: every move replied verbatim, every state preserved.
pub fn identity_response(p: &Player) -> SimpleResponse {
    let mut relation = BTreeSet::new();
    for a in 0..p.moves.len() {
        for s in 0..p.states.len() {
            relation.insert((a, s, s, a));
        }
    }
    SimpleResponse { source: p.clone(), target: p.clone(), relation }
}

/// Relational composition through the shared middle player: the result
/// relates `(a, state_c, state_c', c)` whenever some middle move `b` links a
/// first-response quadruple to a second-response quadruple.
pub fn compose_simple(
    first: &SimpleResponse,
    second: &SimpleResponse,
) -> Result<SimpleResponse, ArenaError> {
    if first.target != second.source {
        return Err(ArenaError::PlayerMismatch);
    }
    // group the second relation by its incoming move
    let mut by_move: BTreeMap<usize, Vec<Quad>> = BTreeMap::new();
    for &q in &second.relation {
        by_move.entry(q.0).or_default().push(q);
    }
    let mut relation = BTreeSet::new();
    for &(a, _, _, b) in &first.relation {
        if let Some(links) = by_move.get(&b) {
            for &(_, g0, g1, c) in links {
                relation.insert((a, g0, g1, c));
            }
        }
    }
    Ok(SimpleResponse { source: first.source.clone(), target: second.target.clone(), relation })
}

/// A finitely supported stochastic kernel over quadruples. For every source
/// move, the probabilities of all `(state, state', reply)` outcomes sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedResponse {
    source: Player,
    target: Player,
    kernel: BTreeMap<Quad, f64>,
}

impl MixedResponse {
    pub fn new(
        source: Player,
        target: Player,
        kernel: impl IntoIterator<Item = (Quad, f64)>,
    ) -> Result<Self, ArenaError> {
        let mut map: BTreeMap<Quad, f64> = BTreeMap::new();
        for (q, p) in kernel {
            if q.0 >= source.moves.len()
                || q.1 >= target.states.len()
                || q.2 >= target.states.len()
                || q.3 >= target.moves.len()
            {
                return Err(ArenaError::IndexOutOfRange(q));
            }
            if !(0.0..=1.0 + STOCHASTIC_TOL).contains(&p) || !p.is_finite() {
                return Err(ArenaError::InvalidProbability(p));
            }
            if p > 0.0 {
                *map.entry(q).or_insert(0.0) += p;
            }
        }
        let resp = MixedResponse { source, target, kernel: map };
        resp.check_stochastic()?;
        Ok(resp)
    }

    fn check_stochastic(&self) -> Result<(), ArenaError> {
        for a in 0..self.source.moves.len() {
            let sum: f64 = self
                .kernel
                .iter()
                .filter(|(q, _)| q.0 == a)
                .map(|(_, p)| p)
                .sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(ArenaError::NonStochastic {
                    mv: self.source.moves[a].clone(),
                    sum,
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Player {
        &self.source
    }

    pub fn target(&self) -> &Player {
        &self.target
    }

    pub fn kernel(&self) -> &BTreeMap<Quad, f64> {
        &self.kernel
    }

    pub fn probability(&self, q: Quad) -> f64 {
        self.kernel.get(&q).copied().unwrap_or(0.0)
    }

    /// Row sum over all outcomes for one source move.
    pub fn row_sum(&self, a: usize) -> f64 {
        self.kernel.iter().filter(|(q, _)| q.0 == a).map(|(_, p)| p).sum()
    }
}

/// Kernel composition: the probability of `(a, g, g', c)` is the sum over all
/// middle outcomes `(s, s', b)` of the product of the two kernels.
pub fn compose_mixed(
    first: &MixedResponse,
    second: &MixedResponse,
) -> Result<MixedResponse, ArenaError> {
    if first.target != second.source {
        return Err(ArenaError::PlayerMismatch);
    }
    let mut by_move: BTreeMap<usize, Vec<(Quad, f64)>> = BTreeMap::new();
    for (&q, &p) in &second.kernel {
        by_move.entry(q.0).or_default().push((q, p));
    }
    let mut kernel: BTreeMap<Quad, f64> = BTreeMap::new();
    for (&(a, _, _, b), &p1) in &first.kernel {
        if let Some(links) = by_move.get(&b) {
            for &((_, g0, g1, c), p2) in links {
                *kernel.entry((a, g0, g1, c)).or_insert(0.0) += p1 * p2;
            }
        }
    }
    let resp =
        MixedResponse { source: first.source.clone(), target: second.target.clone(), kernel };
    resp.check_stochastic()?;
    Ok(resp)
}

/// Embeds a simple response as the uniform kernel over each move's
/// quadruples. Fails when some move has no quadruple at all, since the
/// result could not be stochastic there.
pub fn lift_to_mixed(s: &SimpleResponse) -> Result<MixedResponse, ArenaError> {
    let mut by_move: BTreeMap<usize, Vec<Quad>> = BTreeMap::new();
    for &q in &s.relation {
        by_move.entry(q.0).or_default().push(q);
    }
    let mut kernel = BTreeMap::new();
    for a in 0..s.source.moves.len() {
        match by_move.get(&a) {
            None => return Err(ArenaError::NotLiftable(s.source.moves[a].clone())),
            Some(quads) => {
                let p = 1.0 / quads.len() as f64;
                for &q in quads {
                    kernel.insert(q, p);
                }
            }
        }
    }
    Ok(MixedResponse { source: s.source.clone(), target: s.target.clone(), kernel })
}
