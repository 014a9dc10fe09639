//! The territorial attack-vectors game: boundary-sampled territories, force
//! distributions along the boundary, the two-case push update (free push and
//! contact), hull-limited observation, and win conditions.
//!
//! Territories are polygons sampling the boundary map at equispaced
//! parameter angles; the interior is never materialized. A force
//! distribution assigns each boundary vertex a mass; masses sum to 1 and the
//! implied density `mass * N / (2*pi)` stays in `[0, 1]`.
//!
//! Two update rules are provided. `literal` applies the source formulas
//! exactly: a free vertex scales about the plane origin by `(1+density)/2`,
//! and a contacting vertex becomes the sum of the two residually scaled
//! position vectors. `displacement` moves a vertex along its outward normal
//! by `push_scale * density` and composes residual pushes as vectors at the
//! collision point. Both run through the same post-processing pipeline:
//! optional perimeter renormalization, adjacency snapping at contact loci,
//! and overlap repair projecting offending vertices back to the opponent's
//! boundary along their motion path.

pub mod contact;

use crate::geom::{self, Vec2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

use contact::{
    displacement_contact, displacement_contact_point, literal_contact, literal_contact_point,
};

/// Maximum tolerated interior overlap area between the two territories.
pub const OVERLAP_TOL: f64 = 1e-6;
/// Required boundary adjacency at contact loci after a step.
pub const ADJACENCY_TOL: f64 = 1e-6;
/// Tolerance on force mass normalization.
pub const FORCE_TOL: f64 = 1e-9;
/// Tolerance used by visibility tests against the convex hull.
pub const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("territory needs at least 8 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("territory vertices must be finite")]
    NonFinite,
    #[error("territory must be counterclockwise (signed area {0})")]
    NotCounterclockwise(f64),
    #[error(transparent)]
    Geometry(#[from] geom::GeomError),
    #[error("force masses must sum to 1 (got {0})")]
    ForceNotNormalized(f64),
    #[error("force mass {mass} at vertex {index} implies density {density} outside [0, 1]")]
    InvalidForce { index: usize, mass: f64, density: f64 },
    #[error("force vector length {got} does not match territory resolution {expected}")]
    ForceLengthMismatch { got: usize, expected: usize },
    #[error("territories overlap by area {0}, exceeding tolerance")]
    Overlapping(f64),
    #[error("contact solve produced a non-finite point at vertex {0}")]
    ContactSolve(usize),
    #[error("irreparable geometry after step {0}")]
    Irreparable(u64),
    #[error("asset region radius must be positive")]
    BadAssetRadius,
    #[error("asset area {theta} exceeds the region's circumscribing area {max}")]
    BadAssetArea { theta: f64, max: f64 },
}

/// Which of the two players a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Attacker,
    Defender,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Attacker => Side::Defender,
            Side::Defender => Side::Attacker,
        }
    }
}

/// Boundary update rule applied by [`step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    /// The source formulas applied exactly (scaling about the plane origin).
    #[default]
    Literal,
    /// Outward-normal displacement with vector composition at contacts.
    Displacement,
}

/// Post-step border-length policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BorderPolicy {
    /// Leave boundaries as the update produced them.
    #[default]
    None,
    /// Rescale each territory about its centroid so its perimeter returns to
    /// the value it had at the start of the game.
    Renormalize,
}

/// Win condition for [`check_win`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WinCondition {
    /// The defender holds while the asset region lies inside his territory.
    #[default]
    Containment,
    /// The defender holds while his territory area stays at or above theta.
    Area,
}

/// How much of the opponent each player's observation discloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InfoVariant {
    /// Positions are mutually known; moves are only observed through border
    /// changes and hull visibility.
    #[default]
    Perfect,
    /// Only the part of the opponent inside one's own convex hull is seen.
    HullOnly,
    /// As `perfect`, plus the opponent's pending move is disclosed at
    /// visible vertices before the step resolves.
    Preview,
}

/// Simulation parameters shared by every step of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub rule: UpdateRule,
    pub border_policy: BorderPolicy,
    /// Distance travelled per unit density under the displacement rule.
    pub push_scale: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            rule: UpdateRule::Literal,
            border_policy: BorderPolicy::None,
            push_scale: DEFAULT_PUSH_SCALE,
        }
    }
}

/// Default displacement travel per unit density. Densities reach 1.0 at the
/// cap, so this is also the largest per-step vertex travel.
pub const DEFAULT_PUSH_SCALE: f64 = 0.05;

/// A territory: the boundary map sampled at N equispaced parameter angles,
/// stored as a counterclockwise simple polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Territory {
    vertices: Vec<Vec2>,
}

impl Territory {
    pub const MIN_VERTICES: usize = 8;

    pub fn new(vertices: Vec<Vec2>) -> Result<Self, SimError> {
        if vertices.len() < Self::MIN_VERTICES {
            return Err(SimError::TooFewVertices(vertices.len()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite);
        }
        let area = geom::signed_area(&vertices);
        if area <= 0.0 {
            return Err(SimError::NotCounterclockwise(area));
        }
        geom::is_simple(&vertices, 1e-9)?;
        Ok(Territory { vertices })
    }

    /// Disk of the given radius sampled at `n` boundary angles.
    pub fn disk(center: Vec2, radius: f64, n: usize) -> Result<Self, SimError> {
        Territory::new(geom::regular_polygon(center, radius, n))
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shoelace area; positive by the orientation invariant.
    pub fn area(&self) -> f64 {
        geom::signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        geom::perimeter(&self.vertices)
    }

    pub fn centroid(&self) -> Vec2 {
        geom::centroid(&self.vertices)
    }

    pub fn convex_hull(&self) -> Vec<Vec2> {
        geom::convex_hull(&self.vertices).expect("territory has >= 8 non-collinear vertices")
    }

    /// Outward unit normal of the edge starting at vertex `i`.
    pub fn edge_normal(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        let e = self.vertices[(i + 1) % n] - self.vertices[i];
        Vec2::new(e.y, -e.x).normalized()
    }

    /// Outward unit normal at vertex `i`, averaging the adjacent edges.
    pub fn vertex_normal(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        let prev = self.edge_normal((i + n - 1) % n);
        let next = self.edge_normal(i);
        let sum = prev + next;
        if sum.norm() < 1e-12 {
            next
        } else {
            sum.normalized()
        }
    }

    fn vertex_normals(&self) -> Vec<Vec2> {
        (0..self.vertices.len()).map(|i| self.vertex_normal(i)).collect()
    }
}

/// Masses along the boundary vertices: non-negative, summing to 1, with the
/// implied density at every vertex staying within [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceDistribution {
    masses: Vec<f64>,
}

impl ForceDistribution {
    pub fn new(masses: Vec<f64>) -> Result<Self, SimError> {
        let n = masses.len();
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > FORCE_TOL {
            return Err(SimError::ForceNotNormalized(sum));
        }
        for (i, &m) in masses.iter().enumerate() {
            let density = m * n as f64 / (2.0 * PI);
            if m < 0.0 || !m.is_finite() || density > 1.0 + FORCE_TOL {
                return Err(SimError::InvalidForce { index: i, mass: m, density });
            }
        }
        Ok(ForceDistribution { masses })
    }

    pub fn uniform(n: usize) -> Self {
        ForceDistribution { masses: vec![1.0 / n as f64; n] }
    }

    /// Largest admissible mass for one vertex of an `n`-gon.
    pub fn mass_cap(n: usize) -> f64 {
        2.0 * PI / n as f64
    }

    /// Normalizes non-negative weights into a valid distribution, spilling
    /// mass over the per-vertex cap to the remaining vertices (water
    /// filling). All-zero weights fall back to uniform.
    pub fn from_weights_capped(weights: &[f64]) -> Self {
        let n = weights.len();
        let cap = Self::mass_cap(n) * (1.0 - 1e-12);
        let total: f64 = weights.iter().filter(|w| w.is_finite() && **w > 0.0).sum();
        if total <= 0.0 {
            return Self::uniform(n);
        }
        let mut masses = vec![0.0f64; n];
        let mut capped = vec![false; n];
        let mut remaining = 1.0f64;
        let mut pool: Vec<usize> =
            (0..n).filter(|&i| weights[i].is_finite() && weights[i] > 0.0).collect();
        // distribute proportionally, freezing capped vertices each round
        for _ in 0..n {
            let w_sum: f64 = pool.iter().map(|&i| weights[i]).sum();
            if w_sum <= 0.0 || remaining <= 0.0 || pool.is_empty() {
                break;
            }
            let mut overflow = 0.0;
            let mut next_pool = Vec::with_capacity(pool.len());
            for &i in &pool {
                let share = remaining * weights[i] / w_sum;
                let take = (masses[i] + share).min(cap);
                overflow += masses[i] + share - take;
                masses[i] = take;
                if take < cap {
                    next_pool.push(i);
                } else {
                    capped[i] = true;
                }
            }
            pool = next_pool;
            remaining = overflow;
            if remaining < 1e-15 {
                remaining = 0.0;
                break;
            }
        }
        if remaining > 0.0 {
            // every weighted vertex is capped; spread the rest uniformly
            let open: Vec<usize> = (0..n).filter(|&i| !capped[i]).collect();
            if open.is_empty() {
                return Self::uniform(n);
            }
            let share = remaining / open.len() as f64;
            for i in open {
                masses[i] = (masses[i] + share).min(cap);
            }
        }
        // final renormalization guards accumulated rounding
        let sum: f64 = masses.iter().sum();
        if sum > 0.0 {
            for m in &mut masses {
                *m /= sum;
            }
        }
        ForceDistribution { masses }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Density at vertex `i`: mass divided by the boundary arc one vertex
    /// covers (`2*pi/n`).
    pub fn density(&self, i: usize) -> f64 {
        self.masses[i] * self.masses.len() as f64 / (2.0 * PI)
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.masses.len()).map(|i| self.density(i)).collect()
    }
}

/// Free push of one boundary point: scale about the plane origin by
/// `(1 + density)/2`, where the density is `mass * n / (2*pi)`.
pub fn free_push(vertex: Vec2, mass: f64, n: usize) -> Result<Vec2, SimError> {
    let density = mass * n as f64 / (2.0 * PI);
    if !(0.0..=1.0 + FORCE_TOL).contains(&density) || !density.is_finite() {
        return Err(SimError::InvalidForce { index: 0, mass, density });
    }
    Ok(vertex * ((1.0 + density) / 2.0))
}

/// The protected asset: a disk region and the minimal area the defender must
/// hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssetSpec {
    pub center: Vec2,
    pub radius: f64,
    pub theta_area: f64,
}

impl AssetSpec {
    pub fn new(center: Vec2, radius: f64, theta_area: Option<f64>) -> Result<Self, SimError> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(SimError::BadAssetRadius);
        }
        let max = PI * radius * radius;
        let theta = theta_area.unwrap_or(max);
        if theta <= 0.0 || theta > max + 1e-12 {
            return Err(SimError::BadAssetArea { theta, max });
        }
        Ok(AssetSpec { center, radius, theta_area: theta })
    }
}

/// Contact bookkeeping for one vertex in the step that produced a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactRecord {
    /// Opponent edge index of the locus.
    pub edge: usize,
    /// Interpolation parameter along that edge.
    pub u: f64,
    /// Own density spent reaching the contact.
    pub s: f64,
    /// Opponent density spent at the locus.
    pub t: f64,
    /// Opponent residual density at the locus.
    pub opp_residual: f64,
}

/// The joint position of the game plus its move history.
#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    attacker: Territory,
    defender: Territory,
    step: u64,
    history: Vec<(ForceDistribution, ForceDistribution)>,
    attacker_ref_perimeter: f64,
    defender_ref_perimeter: f64,
    /// Contact records of the step that produced this state, per own vertex.
    attacker_contacts: Vec<Option<ContactRecord>>,
    defender_contacts: Vec<Option<ContactRecord>>,
}

impl GameState {
    pub fn new(attacker: Territory, defender: Territory) -> Result<Self, SimError> {
        let overlap = geom::intersection_area(attacker.vertices(), defender.vertices());
        if overlap > OVERLAP_TOL {
            return Err(SimError::Overlapping(overlap));
        }
        let na = attacker.len();
        let nd = defender.len();
        Ok(GameState {
            attacker_ref_perimeter: attacker.perimeter(),
            defender_ref_perimeter: defender.perimeter(),
            attacker,
            defender,
            step: 0,
            history: Vec::new(),
            attacker_contacts: vec![None; na],
            defender_contacts: vec![None; nd],
        })
    }

    pub fn territory(&self, side: Side) -> &Territory {
        match side {
            Side::Attacker => &self.attacker,
            Side::Defender => &self.defender,
        }
    }

    pub fn attacker(&self) -> &Territory {
        &self.attacker
    }

    pub fn defender(&self) -> &Territory {
        &self.defender
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn history(&self) -> &[(ForceDistribution, ForceDistribution)] {
        &self.history
    }

    pub fn contacts(&self, side: Side) -> &[Option<ContactRecord>] {
        match side {
            Side::Attacker => &self.attacker_contacts,
            Side::Defender => &self.defender_contacts,
        }
    }

    pub fn ref_perimeter(&self, side: Side) -> f64 {
        match side {
            Side::Attacker => self.attacker_ref_perimeter,
            Side::Defender => self.defender_ref_perimeter,
        }
    }

    /// Interior overlap area between the two territories.
    pub fn overlap_area(&self) -> f64 {
        geom::intersection_area(self.attacker.vertices(), self.defender.vertices())
    }

    /// Worst adjacency violation over all contact loci of the last step: the
    /// distance between the two boundaries near each contact. Returns 0.0
    /// when there were no contacts.
    pub fn adjacency_violation(&self) -> f64 {
        adjacency_residual(
            self.attacker.vertices(),
            &self.attacker_contacts,
            self.defender.vertices(),
            &self.defender_contacts,
        )
    }
}


/// Worst distance between the two boundaries near any contact locus: for a
/// contact vertex the boundaries must meet within its neighborhood, either
/// through the vertex itself or through a nearby opponent vertex lying on
/// the own boundary.
fn adjacency_residual(
    att: &[Vec2],
    att_contacts: &[Option<ContactRecord>],
    def: &[Vec2],
    def_contacts: &[Option<ContactRecord>],
) -> f64 {
    let mut worst: f64 = 0.0;
    let mut eval = |own: &[Vec2], contacts: &[Option<ContactRecord>], opp: &[Vec2]| {
        let neighborhood = 4.0 * geom::perimeter(own) / own.len() as f64;
        for (i, rec) in contacts.iter().enumerate() {
            if rec.is_none() {
                continue;
            }
            let v = own[i];
            let mut best = geom::distance_to_boundary(opp, v);
            if best > 0.0 {
                for &w in opp.iter() {
                    if w.dist(v) <= neighborhood {
                        best = best.min(geom::distance_to_boundary(own, w));
                    }
                }
            }
            worst = worst.max(best);
        }
    };
    eval(att, att_contacts, def);
    eval(def, def_contacts, att);
    worst
}

/// Length of the attacker boundary visible from the defender's range: the
/// total length of `p_a` boundary edges clipped to the convex hull of `p_d`.
pub fn visible_boundary_length(p_a: &Territory, p_d: &Territory) -> f64 {
    let hull = p_d.convex_hull();
    let verts = p_a.vertices();
    let n = verts.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        if let Some((t0, t1)) = geom::clip_segment_to_convex(a, b, &hull) {
            total += (t1 - t0).max(0.0) * a.dist(b);
        }
    }
    total
}

/// What one player can see: his own territory, which opponent boundary
/// points fall inside his range, the opponent border densities inferred from
/// the previous step, the full opponent position when the information
/// variant grants it, and (preview variant) the disclosed components of the
/// opponent's pending move.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationReport {
    pub side: Side,
    pub own_territory: Territory,
    pub opponent_visible_indices: Vec<usize>,
    pub inferred_border_force: BTreeMap<usize, f64>,
    pub opponent_territory_full: Option<Territory>,
    pub disclosed_opponent_masses: Option<BTreeMap<usize, f64>>,
}

/// Builds the observation report for one side against the current state.
/// `inference` is the recovered opponent border force from the previous
/// transition (empty at the first step); `pending_opponent_move` is consumed
/// only by the preview variant.
pub fn observe(
    state: &GameState,
    side: Side,
    variant: InfoVariant,
    pending_opponent_move: Option<&ForceDistribution>,
    inference: &BTreeMap<usize, f64>,
) -> ObservationReport {
    let own = state.territory(side);
    let opp = state.territory(side.opponent());
    let hull = own.convex_hull();
    let visible: Vec<usize> = opp
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, &p)| geom::point_in_convex(&hull, p, HULL_TOL))
        .map(|(i, _)| i)
        .collect();
    let full = match variant {
        InfoVariant::HullOnly => None,
        InfoVariant::Perfect | InfoVariant::Preview => Some(opp.clone()),
    };
    let disclosed = match (variant, pending_opponent_move) {
        (InfoVariant::Preview, Some(mv)) => {
            Some(visible.iter().map(|&i| (i, mv.masses()[i])).collect())
        }
        _ => None,
    };
    ObservationReport {
        side,
        own_territory: own.clone(),
        opponent_visible_indices: visible,
        inferred_border_force: inference.clone(),
        opponent_territory_full: full,
        disclosed_opponent_masses: disclosed,
    }
}

/// Game status as judged by [`check_win`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WinStatus {
    DefenderHolding,
    DefenderLost,
    AttackerContained,
}

impl std::fmt::Display for WinStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WinStatus::DefenderHolding => write!(f, "defender-holding"),
            WinStatus::DefenderLost => write!(f, "defender-lost"),
            WinStatus::AttackerContained => write!(f, "attacker-contained"),
        }
    }
}

/// Judges the state: in containment mode the defender loses as soon as some
/// sample point of the asset disk falls outside his territory; in area mode
/// he loses when his area drops below theta. Either way, the attacker is
/// contained when his convex hull lies inside the defender's.
pub fn check_win(state: &GameState, assets: &AssetSpec, condition: WinCondition) -> WinStatus {
    let defender = state.defender();
    let lost = match condition {
        WinCondition::Area => defender.area() < assets.theta_area,
        WinCondition::Containment => {
            let step = 0.01 * assets.radius;
            let r2 = assets.radius * assets.radius;
            let mut lost = false;
            let steps = (2.0 * assets.radius / step).ceil() as i64;
            'grid: for gx in 0..=steps {
                for gy in 0..=steps {
                    let p = Vec2::new(
                        assets.center.x - assets.radius + gx as f64 * step,
                        assets.center.y - assets.radius + gy as f64 * step,
                    );
                    if (p - assets.center).norm_sq() <= r2
                        && !geom::point_in_polygon(defender.vertices(), p, HULL_TOL)
                    {
                        lost = true;
                        break 'grid;
                    }
                }
            }
            lost
        }
    };
    if lost {
        return WinStatus::DefenderLost;
    }
    let att_hull = state.attacker().convex_hull();
    let def_hull = defender.convex_hull();
    if att_hull.iter().all(|&p| geom::point_in_convex(&def_hull, p, HULL_TOL)) {
        return WinStatus::AttackerContained;
    }
    WinStatus::DefenderHolding
}

/// Exposed literal-rule contact solve for one attacker vertex against the
/// defender's scaled boundary family: returns the updated point, the spent
/// budgets `(s, t)` and the defender edge index, or `None` when the budgets
/// cannot reach any defender point.
pub fn contact_resolve(
    vertex_index: usize,
    m_a: &ForceDistribution,
    state: &GameState,
    m_d: &ForceDistribution,
) -> Result<Option<(Vec2, f64, f64, usize)>, SimError> {
    let v = state.attacker().vertices()[vertex_index];
    let budget = m_a.density(vertex_index);
    let normals = state.defender().vertex_normals();
    let found = literal_contact(v, budget, state.defender().vertices(), &m_d.densities(), &normals);
    match found {
        None => Ok(None),
        Some(c) => {
            let p = literal_contact_point(v, budget, &c);
            if !p.is_finite() {
                return Err(SimError::ContactSolve(vertex_index));
            }
            Ok(Some((p, c.s, c.t, c.edge)))
        }
    }
}

struct SideUpdate {
    vertices: Vec<Vec2>,
    contacts: Vec<Option<ContactRecord>>,
}

fn update_side(
    own: &Territory,
    own_force: &ForceDistribution,
    opp: &Territory,
    opp_force: &ForceDistribution,
    params: &SimParams,
) -> Result<SideUpdate, SimError> {
    let n = own.len();
    let own_density = own_force.densities();
    let opp_density = opp_force.densities();
    let opp_normals = opp.vertex_normals();
    let mut vertices = Vec::with_capacity(n);
    let mut contacts = vec![None; n];
    match params.rule {
        UpdateRule::Literal => {
            for i in 0..n {
                let v = own.vertices()[i];
                let d = own_density[i];
                let found =
                    literal_contact(v, d, opp.vertices(), &opp_density, &opp_normals);
                let p = match found {
                    Some(c) => {
                        contacts[i] = Some(ContactRecord {
                            edge: c.edge,
                            u: c.u,
                            s: c.s,
                            t: c.t,
                            opp_residual: c.opp_budget - c.t,
                        });
                        literal_contact_point(v, d, &c)
                    }
                    None => v * ((1.0 + d) / 2.0),
                };
                if !p.is_finite() {
                    return Err(SimError::ContactSolve(i));
                }
                vertices.push(p);
            }
        }
        UpdateRule::Displacement => {
            let scale = params.push_scale;
            let opp_travel: Vec<f64> = opp_density.iter().map(|d| d * scale).collect();
            for i in 0..n {
                let v = own.vertices()[i];
                let travel = own_density[i] * scale;
                let dir = own.vertex_normal(i);
                let found = if travel > 0.0 {
                    displacement_contact(v, dir, travel, opp.vertices(), &opp_travel, &opp_normals)
                } else {
                    None
                };
                let p = match found {
                    Some(c) => {
                        contacts[i] = Some(ContactRecord {
                            edge: c.edge,
                            u: c.u,
                            s: c.s / scale,
                            t: c.t / scale,
                            opp_residual: (c.opp_budget - c.t) / scale,
                        });
                        displacement_contact_point(v, dir, travel, &c)
                    }
                    None => v + dir * travel,
                };
                if !p.is_finite() {
                    return Err(SimError::ContactSolve(i));
                }
                vertices.push(p);
            }
        }
    }
    Ok(SideUpdate { vertices, contacts })
}

/// Restores a territory's perimeter by scaling its free boundary about the
/// centroid. Contact vertices stay pinned so the fronts remain adjacent; the
/// scale factor for the free vertices is solved by bisection. With no
/// contacts this reduces to plain radial rescaling.
fn renormalize(vertices: &mut [Vec2], contacts: &[Option<ContactRecord>], target_perimeter: f64) {
    let current = geom::perimeter(vertices);
    if current <= 1e-12 {
        return;
    }
    let c = geom::centroid(vertices);
    let any_pinned = contacts.iter().any(Option::is_some);
    if !any_pinned {
        let scale = target_perimeter / current;
        for v in vertices.iter_mut() {
            *v = c + (*v - c) * scale;
        }
        return;
    }
    let base: Vec<Vec2> = vertices.to_vec();
    let perimeter_at = |lambda: f64| -> f64 {
        let n = base.len();
        let pos = |i: usize| {
            if contacts[i].is_some() {
                base[i]
            } else {
                c + (base[i] - c) * lambda
            }
        };
        (0..n).map(|i| pos(i).dist(pos((i + 1) % n))).sum()
    };
    // bracket the target
    let (mut lo, mut hi) = (0.25f64, 4.0f64);
    let (p_lo, p_hi) = (perimeter_at(lo), perimeter_at(hi));
    if !(p_lo <= target_perimeter && target_perimeter <= p_hi) {
        return; // perimeter not reachable by scaling the free boundary alone
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if perimeter_at(mid) < target_perimeter {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    for (i, v) in vertices.iter_mut().enumerate() {
        if contacts[i].is_none() {
            *v = c + (*v - c) * lambda;
        }
    }
}

/// Contact locus of a record evaluated on the opponent's current polygon.
fn contact_locus(opp: &[Vec2], rec: &ContactRecord) -> Vec2 {
    let m = opp.len();
    opp[rec.edge].lerp(opp[(rec.edge + 1) % m], rec.u)
}

/// Moves every contact vertex of both sides halfway toward its recorded
/// locus on the opponent's current boundary, simultaneously. After a border
/// policy has displaced the two fronts apart (or into each other), this
/// makes them meet mid-gap instead of chasing each other's boundaries.
fn pair_contact_fronts(att: &mut SideUpdate, def: &mut SideUpdate) {
    let att_targets: Vec<Option<Vec2>> = att
        .contacts
        .iter()
        .map(|c| c.as_ref().map(|rec| contact_locus(&def.vertices, rec)))
        .collect();
    let def_targets: Vec<Option<Vec2>> = def
        .contacts
        .iter()
        .map(|c| c.as_ref().map(|rec| contact_locus(&att.vertices, rec)))
        .collect();
    for (v, t) in att.vertices.iter_mut().zip(&att_targets) {
        if let Some(t) = t {
            *v = (*v + *t) * 0.5;
        }
    }
    for (v, t) in def.vertices.iter_mut().zip(&def_targets) {
        if let Some(t) = t {
            *v = (*v + *t) * 0.5;
        }
    }
}

/// Welds the two contact fronts together. Contact vertices of both sides
/// are clustered by proximity (union-find over pairs closer than the weld
/// radius); every cluster containing vertices of both sides collapses to its
/// centroid, making that point part of both boundaries exactly. Contact
/// vertices without a cross-side partner are projected one-way onto the
/// opponent's boundary. Clustering keeps pinched fronts consistent where
/// one-to-one pairing would weave the two boundaries through each other.
fn weld_contacts(att: &mut SideUpdate, def: &mut SideUpdate, weld_radius: f64) {
    struct Member {
        side: Side,
        index: usize,
        pos: Vec2,
    }
    let mut members: Vec<Member> = Vec::new();
    for (i, c) in att.contacts.iter().enumerate() {
        if c.is_some() {
            members.push(Member { side: Side::Attacker, index: i, pos: att.vertices[i] });
        }
    }
    for (j, c) in def.contacts.iter().enumerate() {
        if c.is_some() {
            members.push(Member { side: Side::Defender, index: j, pos: def.vertices[j] });
        }
    }
    // union-find over proximity
    let m = members.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != c {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for a in 0..m {
        for b in (a + 1)..m {
            if members[a].pos.dist(members[b].pos) <= weld_radius {
                let ra = find(&mut parent, a);
                let rb = find(&mut parent, b);
                if ra != rb {
                    parent[rb.max(ra)] = rb.min(ra);
                }
            }
        }
    }
    // collapse mixed clusters to their centroid
    let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..m {
        let r = find(&mut parent, x);
        clusters.entry(r).or_default().push(x);
    }
    let mut welded_att = vec![false; att.vertices.len()];
    let mut welded_def = vec![false; def.vertices.len()];
    for group in clusters.values() {
        let mixed = group.iter().any(|&x| members[x].side == Side::Attacker)
            && group.iter().any(|&x| members[x].side == Side::Defender);
        if !mixed {
            continue;
        }
        let centroid = group.iter().fold(Vec2::ZERO, |acc, &x| acc + members[x].pos)
            * (1.0 / group.len() as f64);
        for &x in group {
            match members[x].side {
                Side::Attacker => {
                    att.vertices[members[x].index] = centroid;
                    welded_att[members[x].index] = true;
                }
                Side::Defender => {
                    def.vertices[members[x].index] = centroid;
                    welded_def[members[x].index] = true;
                }
            }
        }
    }
    // unpaired contact vertices attach one-way
    for (i, c) in att.contacts.iter().enumerate() {
        if c.is_some() && !welded_att[i] {
            att.vertices[i] = geom::project_to_boundary(&def.vertices, att.vertices[i]);
        }
    }
    for (j, c) in def.contacts.iter().enumerate() {
        if c.is_some() && !welded_def[j] {
            def.vertices[j] = geom::project_to_boundary(&att.vertices, def.vertices[j]);
        }
    }
}

/// One settling pass: contact vertices are glued onto their recorded locus
/// on the opponent's current boundary (when `glue` is set); any other vertex
/// found strictly inside the opponent is projected back along its motion
/// path. Gluing to the recorded locus rather than the nearest boundary point
/// keeps the front continuous when the opponent carries spikes.
fn settle_pass(
    vertices: &mut [Vec2],
    previous: &[Vec2],
    contacts: &[Option<ContactRecord>],
    opp: &[Vec2],
    glue: bool,
) {
    for (i, v) in vertices.iter_mut().enumerate() {
        if glue && contacts[i].is_some() {
            *v = contact_locus(opp, contacts[i].as_ref().expect("checked"));
        } else if geom::point_in_polygon(opp, *v, 0.0)
            && geom::distance_to_boundary(opp, *v) > 1e-12
        {
            let from = previous[i];
            let motion = *v - from;
            let dist = motion.norm();
            let hit = if dist > 1e-15 {
                geom::ray_polygon_first_hit(from, motion * (1.0 / dist), dist, opp, 0.0)
            } else {
                None
            };
            *v = match hit {
                Some((t, _, _)) => from + motion * (t / dist),
                None => geom::project_to_boundary(opp, *v),
            };
        }
    }
}


/// Redistributes the free boundary vertices at equal arc spacing along the
/// existing polyline, keeping contact vertices as fixed nodes (the whole
/// ring is redistributed from vertex 0 when nothing is pinned). Sampled
/// fronts bunch up under sustained directional pushing; without periodic
/// redistribution the crowded stretches knot. Only the displacement rule
/// uses this: under the literal rule each vertex is the sample of one fixed
/// parameter angle.
fn resample_free_arcs(vertices: &mut [Vec2], contacts: &[Option<ContactRecord>]) {
    let n = vertices.len();
    let orig: Vec<Vec2> = vertices.to_vec();
    let place = |out: &mut [Vec2], start: usize, count: usize| {
        // redistribute `count` vertices strictly between the path endpoints
        // start and start+count+1 (cyclic) along the original polyline
        let segs = count + 1;
        let mut cum = vec![0.0; segs + 1];
        for s in 0..segs {
            let p = orig[(start + s) % n];
            let q = orig[(start + s + 1) % n];
            cum[s + 1] = cum[s] + p.dist(q);
        }
        let total = cum[segs];
        if total <= 1e-12 {
            return;
        }
        for k in 1..=count {
            let target = total * k as f64 / segs as f64;
            let mut seg = cum.partition_point(|c| *c <= target).saturating_sub(1);
            seg = seg.min(segs - 1);
            let seg_len = cum[seg + 1] - cum[seg];
            let t = if seg_len > 1e-15 { (target - cum[seg]) / seg_len } else { 0.0 };
            out[(start + k) % n] = orig[(start + seg) % n]
                .lerp(orig[(start + seg + 1) % n], t.clamp(0.0, 1.0));
        }
    };
    let pinned: Vec<usize> = (0..n).filter(|&i| contacts[i].is_some()).collect();
    if pinned.is_empty() {
        place(vertices, 0, n - 1);
        return;
    }
    for w in 0..pinned.len() {
        let a = pinned[w];
        let b = pinned[(w + 1) % pinned.len()];
        let gap = (b + n - a) % n;
        let gap = if gap == 0 { n } else { gap };
        if gap > 1 {
            place(vertices, a, gap - 1);
        }
    }
}

/// Collapses local boundary folds: when two edges at most six apart cross,
/// the vertices between them move to the crossing point, leaving degenerate
/// edges instead of a self-intersection. Micro-folds arise under strong
/// shear between neighboring boundary vertices.
fn untangle(vertices: &mut [Vec2]) {
    let n = vertices.len();
    for _ in 0..4 {
        let mut changed = false;
        for i in 0..n {
            for k in 2..=6usize {
                let j = (i + k) % n;
                let a0 = vertices[i];
                let a1 = vertices[(i + 1) % n];
                let b0 = vertices[j];
                let b1 = vertices[(j + 1) % n];
                if let Some((s, t)) = geom::segment_intersection(a0, a1, b0, b1) {
                    let p = a0.lerp(a1, s);
                    let q = b0.lerp(b1, t);
                    let at_endpoint = [a0, a1, b0, b1].iter().any(|e| e.dist(p) <= 1e-12);
                    if !at_endpoint && p.dist(q) <= 1e-9 {
                        for m in 1..=k {
                            vertices[(i + m) % n] = p;
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}


/// Relaxes reversal kinks: a non-contact vertex whose boundary turns back on
/// itself by more than 120 degrees is pulled toward the average of its
/// distinct neighbors. Sampled fronts corrugate under shear; without this
/// the corrugation knots into self-intersections.
fn smooth_kinks(vertices: &mut [Vec2], contacts: &[Option<ContactRecord>]) {
    let n = vertices.len();
    let orig: Vec<Vec2> = vertices.to_vec();
    let distinct = |start: usize, step: isize| -> Vec2 {
        let mut k = start as isize;
        for _ in 0..n {
            k = (k + step).rem_euclid(n as isize);
            if orig[k as usize].dist(orig[start]) > 1e-12 {
                return orig[k as usize];
            }
        }
        orig[start]
    };
    for i in 0..n {
        if contacts[i].is_some() {
            continue;
        }
        let cur = orig[i];
        let prev = distinct(i, -1);
        let next = distinct(i, 1);
        let e0 = cur - prev;
        let e1 = next - cur;
        let l0 = e0.norm();
        let l1 = e1.norm();
        if l0 < 1e-12 || l1 < 1e-12 {
            continue;
        }
        if e0.dot(e1) / (l0 * l1) < -0.5 {
            vertices[i] = (prev + cur * 2.0 + next) * 0.25;
        }
    }
}


/// Final adjacency sweep: any contact vertex still farther than half the
/// tolerance from the opponent boundary (with no nearby opponent vertex
/// closing the gap) is projected onto it. A couple of alternating rounds
/// clear the stragglers the weld and repair passes left behind.
fn project_stragglers(att: &mut SideUpdate, def: &mut SideUpdate) {
    fn sweep(vertices: &mut [Vec2], contacts: &[Option<ContactRecord>], opp: &[Vec2]) -> bool {
        let mut moved = false;
        for (i, rec) in contacts.iter().enumerate() {
            if rec.is_none() {
                continue;
            }
            let v = vertices[i];
            if geom::distance_to_boundary(opp, v) > ADJACENCY_TOL * 0.5 {
                vertices[i] = geom::project_to_boundary(opp, v);
                moved = true;
            }
        }
        moved
    }
    for _ in 0..3 {
        let a = sweep(&mut att.vertices, &att.contacts, &def.vertices);
        let d = sweep(&mut def.vertices, &def.contacts, &att.vertices);
        if !a && !d {
            break;
        }
    }
}

/// Advances the game by one simultaneous move pair.
///
/// Every vertex of both territories is updated by the free push or the
/// contact resolution of the configured rule, computed symmetrically against
/// the opponent's pre-step boundary. The border-length policy, adjacency
/// snapping and overlap repair then run as post-processing, and the result
/// is validated: simple boundaries, interior overlap within tolerance.
pub fn step(
    state: &GameState,
    m_a: &ForceDistribution,
    m_d: &ForceDistribution,
    params: &SimParams,
) -> Result<GameState, SimError> {
    step_inner(state, m_a, m_d, params, true)
}

/// As [`step`] but without the final validation sweep; used for cheap
/// lookahead rollouts inside strategies.
pub fn step_unvalidated(
    state: &GameState,
    m_a: &ForceDistribution,
    m_d: &ForceDistribution,
    params: &SimParams,
) -> Result<GameState, SimError> {
    step_inner(state, m_a, m_d, params, false)
}

fn step_inner(
    state: &GameState,
    m_a: &ForceDistribution,
    m_d: &ForceDistribution,
    params: &SimParams,
    validate: bool,
) -> Result<GameState, SimError> {
    if m_a.len() != state.attacker.len() {
        return Err(SimError::ForceLengthMismatch {
            got: m_a.len(),
            expected: state.attacker.len(),
        });
    }
    if m_d.len() != state.defender.len() {
        return Err(SimError::ForceLengthMismatch {
            got: m_d.len(),
            expected: state.defender.len(),
        });
    }

    // a contact solve degenerating to non-finite points stalls the step
    // rather than failing it; the boundaries simply hold
    let (mut att, mut def) = match (
        update_side(&state.attacker, m_a, &state.defender, m_d, params),
        update_side(&state.defender, m_d, &state.attacker, m_a, params),
    ) {
        (Ok(a), Ok(d)) => (a, d),
        _ => {
            log::debug!("step {}: degenerate update, stalling", state.step + 1);
            return Ok(stalled_successor(state, m_a, m_d));
        }
    };

    if params.rule == UpdateRule::Displacement {
        resample_free_arcs(&mut att.vertices, &att.contacts);
        resample_free_arcs(&mut def.vertices, &def.contacts);
    }
    if params.border_policy == BorderPolicy::Renormalize {
        renormalize(&mut att.vertices, &att.contacts, state.attacker_ref_perimeter);
        renormalize(&mut def.vertices, &def.contacts, state.defender_ref_perimeter);
    }

    // bring displaced contact fronts together mid-gap, weld them into
    // shared points, then repair residual penetrations until the overlap
    // measure clears
    pair_contact_fronts(&mut att, &mut def);
    let spacing = state.attacker.perimeter() / state.attacker.len() as f64;
    weld_contacts(&mut att, &mut def, 0.75 * spacing);
    settle_pass(&mut att.vertices, state.attacker.vertices(), &att.contacts, &def.vertices, false);
    settle_pass(&mut def.vertices, state.defender.vertices(), &def.contacts, &att.vertices, false);
    if validate {
        for _ in 0..6 {
            smooth_kinks(&mut att.vertices, &att.contacts);
            smooth_kinks(&mut def.vertices, &def.contacts);
            untangle(&mut att.vertices);
            untangle(&mut def.vertices);
            let clean = geom::intersection_area(&att.vertices, &def.vertices)
                <= OVERLAP_TOL * 0.5
                && geom::is_simple(&att.vertices, 1e-9).is_ok()
                && geom::is_simple(&def.vertices, 1e-9).is_ok();
            if clean {
                break;
            }
            settle_pass(
                &mut att.vertices,
                state.attacker.vertices(),
                &att.contacts,
                &def.vertices,
                false,
            );
            settle_pass(
                &mut def.vertices,
                state.defender.vertices(),
                &def.contacts,
                &att.vertices,
                false,
            );
        }
        project_stragglers(&mut att, &mut def);
    }

    let mut stalled = false;
    if validate {
        let simple_ok = |v: &[Vec2]| {
            geom::signed_area(v) > 0.0 && geom::is_simple(v, 1e-9).is_ok()
        };
        let overlap_ok =
            geom::intersection_area(&att.vertices, &def.vertices) <= OVERLAP_TOL;
        let adjacency_ok = adjacency_residual(
            &att.vertices,
            &att.contacts,
            &def.vertices,
            &def.contacts,
        ) <= ADJACENCY_TOL;
        if !(simple_ok(&att.vertices) && simple_ok(&def.vertices) && overlap_ok && adjacency_ok) {
            // the front could not settle this step; both boundaries hold
            log::debug!("step {}: contact front failed to settle, stalling", state.step + 1);
            stalled = true;
        }
    }
    if stalled {
        return Ok(stalled_successor(state, m_a, m_d));
    }
    let next = GameState {
        attacker: Territory { vertices: att.vertices },
        defender: Territory { vertices: def.vertices },
        step: state.step + 1,
        history: {
            let mut h = state.history.clone();
            h.push((m_a.clone(), m_d.clone()));
            h
        },
        attacker_ref_perimeter: state.attacker_ref_perimeter,
        defender_ref_perimeter: state.defender_ref_perimeter,
        attacker_contacts: att.contacts,
        defender_contacts: def.contacts,
    };
    Ok(next)
}

/// Successor state of a stalled step: both boundaries hold, the move pair
/// still enters the history.
fn stalled_successor(state: &GameState, m_a: &ForceDistribution, m_d: &ForceDistribution) -> GameState {
    GameState {
        attacker: state.attacker.clone(),
        defender: state.defender.clone(),
        step: state.step + 1,
        history: {
            let mut h = state.history.clone();
            h.push((m_a.clone(), m_d.clone()));
            h
        },
        attacker_ref_perimeter: state.attacker_ref_perimeter,
        defender_ref_perimeter: state.defender_ref_perimeter,
        attacker_contacts: vec![None; state.attacker.len()],
        defender_contacts: vec![None; state.defender.len()],
    }
}

/// Recovers the opponent's residual border densities from an observed step,
/// using only one's own move and the publicly known positions: vertices that
/// deviate from their own free push must have been in contact, and the
/// contact formula is inverted at the recomputed locus. The estimate is a
/// partial map over own vertex indices; it is exact under the `none` border
/// policy and approximate when renormalization or snapping displaced the
/// contact points.
pub fn infer_opponent_force(
    prev: &GameState,
    cur: &GameState,
    side: Side,
    params: &SimParams,
) -> BTreeMap<usize, f64> {
    let Some((m_a, m_d)) = cur.history.last() else {
        return BTreeMap::new();
    };
    let own_force = match side {
        Side::Attacker => m_a,
        Side::Defender => m_d,
    };
    let own_prev = prev.territory(side);
    let own_cur = cur.territory(side);
    let opp_prev = prev.territory(side.opponent());
    if own_prev.len() != own_cur.len() || own_force.len() != own_prev.len() {
        return BTreeMap::new();
    }
    let opp_normals = opp_prev.vertex_normals();
    let mut out = BTreeMap::new();
    for i in 0..own_prev.len() {
        let v = own_prev.vertices()[i];
        let actual = own_cur.vertices()[i];
        let d = own_force.density(i);
        match params.rule {
            UpdateRule::Literal => {
                let expected_free = v * ((1.0 + d) / 2.0);
                if actual.dist(expected_free) <= 1e-9 {
                    continue;
                }
                // recompute the locus from public geometry; with the contact
                // established, s depends only on the scale ratio
                let vn = v.norm();
                if vn < 1e-12 {
                    continue;
                }
                let caps = vec![1.0f64; opp_prev.len()];
                let Some(c) = literal_contact(v, d, opp_prev.vertices(), &caps, &opp_normals)
                else {
                    continue;
                };
                let qn = c.point.norm();
                if qn < 1e-12 {
                    continue;
                }
                let w = actual - v * ((1.0 + (d - c.s)) / 2.0);
                if w.dot(c.point) <= 0.0 {
                    continue;
                }
                let residual = 2.0 * w.norm() / qn - 1.0;
                out.insert(i, residual.max(0.0));
            }
            UpdateRule::Displacement => {
                let dir = own_prev.vertex_normal(i);
                let travel = d * params.push_scale;
                let expected_free = v + dir * travel;
                if actual.dist(expected_free) <= 1e-9 {
                    continue;
                }
                // static locus: the touch point when already adjacent, else
                // the first crossing of the (budget + cap) ray
                let (edge, u) = if geom::distance_to_boundary(opp_prev.vertices(), v)
                    <= contact::TOUCH_TOL
                {
                    let (_, e, uu) = geom::project_to_boundary_detailed(opp_prev.vertices(), v);
                    (e, uu)
                } else {
                    let reach = travel + params.push_scale;
                    match geom::ray_polygon_first_hit(v, dir, reach, opp_prev.vertices(), 1e-12)
                    {
                        Some((_, e, uu)) => (e, uu),
                        None => continue,
                    }
                };
                let n_o = contact::lerp_normal(&opp_normals, edge, u);
                // final = v + travel*dir + residual*n_o, independent of the
                // meeting time
                let residual_dist = (actual - v - dir * travel).dot(n_o);
                out.insert(i, (residual_dist / params.push_scale).max(0.0));
            }
        }
    }
    out
}


/// Temporary diagnostic: categorizes settle outcomes of the full pipeline.
#[doc(hidden)]
pub fn step_failure_kind(
    state: &GameState,
    m_a: &ForceDistribution,
    m_d: &ForceDistribution,
    params: &SimParams,
) -> String {
    let mut att = update_side(&state.attacker, m_a, &state.defender, m_d, params).unwrap();
    let mut def = update_side(&state.defender, m_d, &state.attacker, m_a, params).unwrap();
    if params.rule == UpdateRule::Displacement {
        resample_free_arcs(&mut att.vertices, &att.contacts);
        resample_free_arcs(&mut def.vertices, &def.contacts);
    }
    if params.border_policy == BorderPolicy::Renormalize {
        renormalize(&mut att.vertices, &att.contacts, state.attacker_ref_perimeter);
        renormalize(&mut def.vertices, &def.contacts, state.defender_ref_perimeter);
    }
    pair_contact_fronts(&mut att, &mut def);
    let spacing = state.attacker.perimeter() / state.attacker.len() as f64;
    weld_contacts(&mut att, &mut def, 0.75 * spacing);
    settle_pass(&mut att.vertices, state.attacker.vertices(), &att.contacts, &def.vertices, false);
    settle_pass(&mut def.vertices, state.defender.vertices(), &def.contacts, &att.vertices, false);
    for _ in 0..6 {
        smooth_kinks(&mut att.vertices, &att.contacts);
        smooth_kinks(&mut def.vertices, &def.contacts);
        untangle(&mut att.vertices);
        untangle(&mut def.vertices);
        let clean = geom::intersection_area(&att.vertices, &def.vertices) <= OVERLAP_TOL * 0.5
            && geom::is_simple(&att.vertices, 1e-9).is_ok()
            && geom::is_simple(&def.vertices, 1e-9).is_ok();
        if clean {
            break;
        }
        settle_pass(&mut att.vertices, state.attacker.vertices(), &att.contacts, &def.vertices, false);
        settle_pass(&mut def.vertices, state.defender.vertices(), &def.contacts, &att.vertices, false);
    }
    project_stragglers(&mut att, &mut def);
    let mut out = String::new();
    if geom::signed_area(&att.vertices) <= 0.0 { out.push_str("att-cw "); }
    if let Err(e) = geom::is_simple(&att.vertices, 1e-9) { out.push_str(&format!("att-simple({e}) ")); }
    if geom::signed_area(&def.vertices) <= 0.0 { out.push_str("def-cw "); }
    if let Err(e) = geom::is_simple(&def.vertices, 1e-9) { out.push_str(&format!("def-simple({e}) ")); }
    let ov = geom::intersection_area(&att.vertices, &def.vertices);
    if ov > OVERLAP_TOL { out.push_str(&format!("overlap({ov:.2e}) ")); }
    let adj = adjacency_residual(&att.vertices, &att.contacts, &def.vertices, &def.contacts);
    if adj > ADJACENCY_TOL { out.push_str(&format!("adjacency({adj:.2e}) ")); }
    if out.is_empty() { out = "ok".into(); }
    out
}

/// Temporary diagnostic: full pipeline state without validation.
#[doc(hidden)]
pub fn step_pipeline_debug(
    state: &GameState,
    m_a: &ForceDistribution,
    m_d: &ForceDistribution,
    params: &SimParams,
) -> (Vec<Vec2>, Vec<Vec2>, Vec<Option<ContactRecord>>, Vec<Option<ContactRecord>>) {
    let mut att = update_side(&state.attacker, m_a, &state.defender, m_d, params).unwrap();
    let mut def = update_side(&state.defender, m_d, &state.attacker, m_a, params).unwrap();
    if params.rule == UpdateRule::Displacement {
        resample_free_arcs(&mut att.vertices, &att.contacts);
        resample_free_arcs(&mut def.vertices, &def.contacts);
    }
    if params.border_policy == BorderPolicy::Renormalize {
        renormalize(&mut att.vertices, &att.contacts, state.attacker_ref_perimeter);
        renormalize(&mut def.vertices, &def.contacts, state.defender_ref_perimeter);
    }
    pair_contact_fronts(&mut att, &mut def);
    let spacing = state.attacker.perimeter() / state.attacker.len() as f64;
    weld_contacts(&mut att, &mut def, 0.75 * spacing);
    settle_pass(&mut att.vertices, state.attacker.vertices(), &att.contacts, &def.vertices, false);
    settle_pass(&mut def.vertices, state.defender.vertices(), &def.contacts, &att.vertices, false);
    for _ in 0..6 {
        smooth_kinks(&mut att.vertices, &att.contacts);
        smooth_kinks(&mut def.vertices, &def.contacts);
        untangle(&mut att.vertices);
        untangle(&mut def.vertices);
        let clean = geom::intersection_area(&att.vertices, &def.vertices) <= OVERLAP_TOL * 0.5
            && geom::is_simple(&att.vertices, 1e-9).is_ok()
            && geom::is_simple(&def.vertices, 1e-9).is_ok();
        if clean {
            break;
        }
        settle_pass(&mut att.vertices, state.attacker.vertices(), &att.contacts, &def.vertices, false);
        settle_pass(&mut def.vertices, state.defender.vertices(), &def.contacts, &att.vertices, false);
    }
    project_stragglers(&mut att, &mut def);
    (att.vertices, def.vertices, att.contacts, def.contacts)
}

#[cfg(test)]
mod tests;
