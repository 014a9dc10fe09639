//! Finitely supported distributions and depth-truncated belief hierarchies.
//!
//! Hierarchies reference other hierarchies through ids in an append-only
//! registry instead of nesting values, which keeps the mutually recursive
//! state space finitely representable. Level 0 is an opaque payload id (a
//! payoff matrix, or a private-position/strategy pair); level `i` is a
//! distribution over the opponent's level-`i-1` hierarchy ids.

use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default hierarchy depth: own payload, belief about the opponent, and
/// belief about the opponent's belief.
pub const DEFAULT_DEPTH: usize = 2;

/// Tolerance for distribution normalization.
pub const DIST_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum BeliefError {
    #[error("weights must be non-negative and not all zero")]
    InvalidDistribution,
    #[error("duplicate element in support")]
    DuplicateElement,
    #[error("no valuation for a support element")]
    UndefinedValuation,
    #[error("observation impossible under every believed type")]
    Contradiction,
    #[error("requested depth {requested} exceeds hierarchy depth {depth}")]
    InsufficientDepth { requested: usize, depth: usize },
    #[error("id {0} does not resolve in the registry")]
    UnknownId(u64),
    #[error("strategy id {0} is not in the registered catalog")]
    UnknownStrategy(u64),
}

/// A finitely supported probability distribution over ordered elements.
/// Entries hold strictly positive probability and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution<T: Ord + Clone> {
    support: Vec<(T, f64)>,
}

impl<T: Ord + Clone> FiniteDistribution<T> {
    /// Normalizes non-negative weights into a distribution, dropping zero
    /// entries. Rejects negative, non-finite or all-zero weights.
    pub fn new(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self, BeliefError> {
        let mut support: Vec<(T, f64)> = Vec::new();
        for (x, w) in pairs {
            if w < 0.0 || !w.is_finite() {
                return Err(BeliefError::InvalidDistribution);
            }
            if w > 0.0 {
                support.push((x, w));
            }
        }
        if support.is_empty() {
            return Err(BeliefError::InvalidDistribution);
        }
        support.sort_by(|a, b| a.0.cmp(&b.0));
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(BeliefError::DuplicateElement);
            }
        }
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        for (_, w) in &mut support {
            *w /= total;
        }
        Ok(FiniteDistribution { support })
    }

    pub fn point_mass(x: T) -> Self {
        FiniteDistribution { support: vec![(x, 1.0)] }
    }

    pub fn uniform(elems: impl IntoIterator<Item = T>) -> Result<Self, BeliefError> {
        FiniteDistribution::new(elems.into_iter().map(|x| (x, 1.0)))
    }

    pub fn support(&self) -> &[(T, f64)] {
        &self.support
    }

    pub fn probability(&self, x: &T) -> f64 {
        self.support
            .binary_search_by(|(y, _)| y.cmp(x))
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.support.iter().map(|(_, w)| w).sum()
    }

    /// Expected value of `valuation` over the support; every support element
    /// must be valued.
    pub fn expectation(&self, valuation: &BTreeMap<T, f64>) -> Result<f64, BeliefError> {
        let mut acc = 0.0;
        for (x, p) in &self.support {
            let v = valuation.get(x).ok_or(BeliefError::UndefinedValuation)?;
            acc += p * v;
        }
        Ok(acc)
    }

    /// Draws one element by inverse CDF over the (ordered) support.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &T {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (x, p) in &self.support {
            acc += p;
            if u < acc {
                return x;
            }
        }
        &self.support.last().expect("non-empty support").0
    }

    /// Bayesian conditioning: the posterior is proportional to prior times
    /// likelihood. Fails when every believed element has zero likelihood.
    pub fn bayes_update(&self, likelihood: impl Fn(&T) -> f64) -> Result<Self, BeliefError> {
        let mut posterior = Vec::with_capacity(self.support.len());
        for (x, p) in &self.support {
            let l = likelihood(x);
            if l < 0.0 || !l.is_finite() {
                return Err(BeliefError::InvalidDistribution);
            }
            posterior.push((x.clone(), p * l));
        }
        if posterior.iter().map(|(_, w)| w).sum::<f64>() <= 0.0 {
            return Err(BeliefError::Contradiction);
        }
        FiniteDistribution::new(posterior)
    }

    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> Result<FiniteDistribution<U>, BeliefError> {
        let mut acc: BTreeMap<U, f64> = BTreeMap::new();
        for (x, p) in &self.support {
            *acc.entry(f(x)).or_insert(0.0) += p;
        }
        FiniteDistribution::new(acc)
    }
}

/// Spec-level constructor name for distributions.
pub fn make_distribution<T: Ord + Clone>(
    pairs: impl IntoIterator<Item = (T, f64)>,
) -> Result<FiniteDistribution<T>, BeliefError> {
    FiniteDistribution::new(pairs)
}

/// Id of a base payload (a payoff matrix id, or a private-position/strategy
/// pair id) registered in a [`BeliefRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PayloadId(pub u64);

/// Id of a hierarchy stored in a [`BeliefRegistry`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HierarchyId(pub u64);

/// Id of a strategy in the registered catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyId(pub u64);

/// A depth-truncated belief tower: `levels[i]` is a distribution over
/// opponent hierarchies of depth `i` (referenced by id).
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefHierarchy {
    level0: PayloadId,
    levels: Vec<FiniteDistribution<HierarchyId>>,
}

impl BeliefHierarchy {
    pub fn bare(level0: PayloadId) -> Self {
        BeliefHierarchy { level0, levels: Vec::new() }
    }

    pub fn new(level0: PayloadId, levels: Vec<FiniteDistribution<HierarchyId>>) -> Self {
        BeliefHierarchy { level0, levels }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level0(&self) -> PayloadId {
        self.level0
    }

    pub fn levels(&self) -> &[FiniteDistribution<HierarchyId>] {
        &self.levels
    }

    /// Drops levels beyond `k`, keeping the base payload.
    pub fn truncate(&self, k: usize) -> Result<Self, BeliefError> {
        if k > self.depth() {
            return Err(BeliefError::InsufficientDepth { requested: k, depth: self.depth() });
        }
        Ok(BeliefHierarchy { level0: self.level0, levels: self.levels[..k].to_vec() })
    }
}

/// Append-only store resolving payload, hierarchy and strategy ids.
/// Hierarchies may only reference hierarchies inserted before them, which
/// rules out cycles by construction.
#[derive(Debug, Default, Clone)]
pub struct BeliefRegistry {
    payloads: Vec<String>,
    hierarchies: Vec<BeliefHierarchy>,
    strategies: Vec<String>,
}

impl BeliefRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_payload(&mut self, label: impl Into<String>) -> PayloadId {
        self.payloads.push(label.into());
        PayloadId(self.payloads.len() as u64 - 1)
    }

    pub fn register_strategy(&mut self, label: impl Into<String>) -> StrategyId {
        self.strategies.push(label.into());
        StrategyId(self.strategies.len() as u64 - 1)
    }

    pub fn payload(&self, id: PayloadId) -> Result<&str, BeliefError> {
        self.payloads.get(id.0 as usize).map(|s| s.as_str()).ok_or(BeliefError::UnknownId(id.0))
    }

    pub fn hierarchy(&self, id: HierarchyId) -> Result<&BeliefHierarchy, BeliefError> {
        self.hierarchies.get(id.0 as usize).ok_or(BeliefError::UnknownId(id.0))
    }

    pub fn has_strategy(&self, id: StrategyId) -> bool {
        (id.0 as usize) < self.strategies.len()
    }

    /// Validates every id the hierarchy references, then stores it.
    pub fn insert_hierarchy(&mut self, h: BeliefHierarchy) -> Result<HierarchyId, BeliefError> {
        if h.level0.0 as usize >= self.payloads.len() {
            return Err(BeliefError::UnknownId(h.level0.0));
        }
        for level in &h.levels {
            for (id, _) in level.support() {
                if id.0 as usize >= self.hierarchies.len() {
                    return Err(BeliefError::UnknownId(id.0));
                }
            }
        }
        self.hierarchies.push(h);
        Ok(HierarchyId(self.hierarchies.len() as u64 - 1))
    }
}

/// One player's state in a security game: a private position, a strategy
/// from the registered catalog, and a belief hierarchy over the opponent's
/// private-position/strategy pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityGameState {
    pub private_state: PayloadId,
    pub own_strategy: StrategyId,
    pub belief: BeliefHierarchy,
}

impl SecurityGameState {
    pub fn new(
        registry: &BeliefRegistry,
        private_state: PayloadId,
        own_strategy: StrategyId,
        belief: BeliefHierarchy,
    ) -> Result<Self, BeliefError> {
        registry.payload(private_state)?;
        if !registry.has_strategy(own_strategy) {
            return Err(BeliefError::UnknownStrategy(own_strategy.0));
        }
        for level in belief.levels() {
            for (id, _) in level.support() {
                registry.hierarchy(*id)?;
            }
        }
        Ok(SecurityGameState { private_state, own_strategy, belief })
    }
}
