//! Contact resolution between a pushing boundary vertex and the opponent's
//! boundary, for both update rules.
//!
//! Under the `literal` rule a vertex at `v` with density budget `d` moves
//! along the scaled family `(1+s)v`, `s in [0, d]`, and contact happens at
//! the smallest `(s, t)` with `(1+s)v = (1+t)q(u)` for a point `q(u)` on an
//! opponent edge with density budget `t <= b(u)`. Eliminating `t` per edge
//! reduces the solve to the ray/edge crossing parameter `u` and a scale
//! ratio, so each edge is handled in closed form.
//!
//! Under the `displacement` rule a vertex travels along its outward normal
//! by `d` (in distance units) while the opponent front at the hit locus
//! advances along its own outward normal by `b(u)`; the two meet when the
//! gap closes, and the remaining budgets compose as vectors.

use crate::geom::{distance_to_boundary, project_to_boundary_detailed, ray_polygon_first_hit, Vec2};

/// Distance below which a vertex counts as already touching the opponent
/// boundary: no free push remains and the full budgets compose.
pub const TOUCH_TOL: f64 = 1e-9;

/// Result of a successful contact solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    /// Opponent edge index (base vertex) of the contact locus.
    pub edge: usize,
    /// Interpolation parameter along that edge.
    pub u: f64,
    /// Opponent boundary point at the locus.
    pub point: Vec2,
    /// Own budget spent reaching the contact (density units).
    pub s: f64,
    /// Opponent budget spent at the locus (density units).
    pub t: f64,
    /// Opponent density budget at the locus.
    pub opp_budget: f64,
    /// Opponent outward normal at the locus (unit).
    pub opp_normal: Vec2,
}

pub(crate) fn lerp_normal(normals: &[Vec2], edge: usize, u: f64) -> Vec2 {
    let n = normals.len();
    let a = normals[edge];
    let b = normals[(edge + 1) % n];
    let mixed = a + (b - a) * u;
    if mixed.norm() < 1e-12 {
        a
    } else {
        mixed.normalized()
    }
}

/// Literal-rule contact solve of one vertex against every opponent edge.
///
/// `opp_density[j]` is the opponent's density budget at vertex `j`; budgets
/// and outward normals interpolate linearly along edges. Returns the
/// candidate minimizing `(s, t, edge)` lexicographically, or `None` when no
/// scaled meeting point exists within the budgets.
pub fn literal_contact(
    v: Vec2,
    budget: f64,
    opp: &[Vec2],
    opp_density: &[f64],
    opp_normals: &[Vec2],
) -> Option<Contact> {
    let vn = v.norm();
    if vn < 1e-12 {
        return None; // a vertex at the plane origin cannot scale anywhere
    }
    let m = opp.len();
    let mut best: Option<Contact> = None;
    for j in 0..m {
        let q0 = opp[j];
        let q1 = opp[(j + 1) % m];
        // q(u) is collinear with v when cross(q(u), v) = 0, linear in u
        let denom = (q0 - q1).cross(v);
        if denom.abs() < 1e-15 {
            continue;
        }
        let u = q0.cross(v) / denom;
        if !(-1e-9..=1.0 + 1e-9).contains(&u) {
            continue;
        }
        let u = u.clamp(0.0, 1.0);
        let q = q0.lerp(q1, u);
        if q.dot(v) <= 0.0 {
            continue; // opposite ray
        }
        let qn = q.norm();
        if qn < 1e-12 {
            continue;
        }
        let rho = qn / vn;
        let b_u = opp_density[j] + (opp_density[(j + 1) % m] - opp_density[j]) * u;
        let (s, t) = if rho >= 1.0 { (rho - 1.0, 0.0) } else { (0.0, 1.0 / rho - 1.0) };
        if s > budget + 1e-12 || t > b_u + 1e-12 {
            continue;
        }
        let cand = Contact {
            edge: j,
            u,
            point: q,
            s,
            t,
            opp_budget: b_u,
            opp_normal: lerp_normal(opp_normals, j, u),
        };
        let better = match &best {
            None => true,
            Some(b) => (s, t, j) < (b.s, b.t, b.edge),
        };
        if better {
            best = Some(cand);
        }
    }
    best
}

/// Literal-rule contact update: the residual pushes of both sides compose as
/// the sum of the two scaled position vectors.
pub fn literal_contact_point(v: Vec2, budget: f64, c: &Contact) -> Vec2 {
    let own_residual = budget - c.s;
    let opp_residual = c.opp_budget - c.t;
    v * ((1.0 + own_residual) / 2.0) + c.point * ((1.0 + opp_residual) / 2.0)
}

/// Displacement-rule contact solve: the vertex travels from `v` along `dir`
/// by up to `travel`; the opponent front at the static hit locus advances
/// toward it by up to its own budget. `travel` and `opp_travel` are distance
/// units (densities already scaled by the push scale).
pub fn displacement_contact(
    v: Vec2,
    dir: Vec2,
    travel: f64,
    opp: &[Vec2],
    opp_travel: &[f64],
    opp_normals: &[Vec2],
) -> Option<Contact> {
    // boundaries already in contact: no free push, full budgets compose
    if distance_to_boundary(opp, v) <= TOUCH_TOL {
        let (_, edge, u) = project_to_boundary_detailed(opp, v);
        let m = opp.len();
        let b_u = opp_travel[edge] + (opp_travel[(edge + 1) % m] - opp_travel[edge]) * u;
        return Some(Contact {
            edge,
            u,
            point: v,
            s: 0.0,
            t: 0.0,
            opp_budget: b_u,
            opp_normal: lerp_normal(opp_normals, edge, u),
        });
    }
    let max_opp: f64 = opp_travel.iter().cloned().fold(0.0, f64::max);
    let reach = travel + max_opp;
    if reach <= 0.0 {
        return None;
    }
    let (gap, edge, u) = ray_polygon_first_hit(v, dir, reach, opp, 1e-12)?;
    let m = opp.len();
    let b_u = opp_travel[edge] + (opp_travel[(edge + 1) % m] - opp_travel[edge]) * u;
    let n_o = lerp_normal(opp_normals, edge, u);
    // closing speed: own advance plus the opponent front's component toward us
    let closing = travel + b_u * (-n_o.dot(dir)).max(0.0);
    if closing < 1e-12 {
        return None;
    }
    let tau = gap / closing;
    if tau > 1.0 + 1e-12 {
        return None;
    }
    let tau = tau.clamp(0.0, 1.0);
    Some(Contact {
        edge,
        u,
        point: v + dir * (tau * travel),
        s: tau * travel,
        t: tau * b_u,
        opp_budget: b_u,
        opp_normal: n_o,
    })
}

/// Displacement-rule contact update: meet at the collision point, then apply
/// the vector sum of the residual pushes.
pub fn displacement_contact_point(v: Vec2, dir: Vec2, travel: f64, c: &Contact) -> Vec2 {
    let meet = v + dir * c.s;
    let own_residual = travel - c.s;
    let opp_residual = c.opp_budget - c.t;
    meet + dir * own_residual + c.opp_normal * opp_residual
}
