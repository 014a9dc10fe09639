//! Plane geometry primitives shared by the simulator: points, polygons,
//! convex hulls, segment clipping and overlap measurement.
//!
//! All polygon functions take vertex slices in counterclockwise order unless
//! stated otherwise. None of them allocate except where they return vectors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("polygon needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("all points are collinear; convex hull is degenerate")]
    DegenerateHull,
    #[error("polygon is self-intersecting near vertex {index}")]
    SelfIntersecting { index: usize },
    #[error("coordinates must be finite")]
    NonFinite,
}

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive when `other` is
    /// counterclockwise of `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n == 0.0 {
            Vec2::ZERO
        } else {
            self * (1.0 / n)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Vec2, t: f64) -> Vec2 {
        self + (other - self) * t
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `a`, `b`, `c`.
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Signed polygon area by the shoelace formula; positive for
/// counterclockwise orientation.
pub fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        twice += a.cross(b);
    }
    twice / 2.0
}

pub fn perimeter(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    (0..n).map(|i| vertices[i].dist(vertices[(i + 1) % n])).sum()
}

/// Area centroid of a simple polygon. Falls back to the vertex mean for
/// (numerically) degenerate polygons.
pub fn centroid(vertices: &[Vec2]) -> Vec2 {
    let a = signed_area(vertices);
    if a.abs() < 1e-12 {
        let n = vertices.len() as f64;
        return vertices.iter().fold(Vec2::ZERO, |acc, &v| acc + v) * (1.0 / n);
    }
    let n = vertices.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        let w = p.cross(q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Vec2::new(cx / (6.0 * a), cy / (6.0 * a))
}

/// Proper + touching intersection test for closed segments `a0a1`, `b0b1`.
/// Returns the parameters `(s, t)` on the two segments when they meet at a
/// single point.
pub fn segment_intersection(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<(f64, f64)> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(s);
    let qp = b0 - a0;
    if denom.abs() < 1e-15 {
        return None; // parallel (collinear overlap handled by callers via endpoints)
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
        Some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
    } else {
        None
    }
}

/// Checks that a closed polygon has no properly crossing edges: two
/// non-adjacent edges must not cut transversally through each other deeper
/// than `tol` on both sides. Touchings (a vertex exactly on another edge,
/// collapsed degenerate edges) are tolerated; they carry no area.
pub fn is_simple(vertices: &[Vec2], tol: f64) -> Result<(), GeomError> {
    let n = vertices.len();
    for i in 0..n {
        let a0 = vertices[i];
        let a1 = vertices[(i + 1) % n];
        let len_a = a0.dist(a1);
        if len_a <= tol {
            continue;
        }
        for j in (i + 1)..n {
            // skip adjacent edges (they share an endpoint by construction)
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let b0 = vertices[j];
            let b1 = vertices[(j + 1) % n];
            let len_b = b0.dist(b1);
            if len_b <= tol {
                continue;
            }
            // cheap bbox reject
            if a0.x.max(a1.x) + tol < b0.x.min(b1.x)
                || b0.x.max(b1.x) + tol < a0.x.min(a1.x)
                || a0.y.max(a1.y) + tol < b0.y.min(b1.y)
                || b0.y.max(b1.y) + tol < a0.y.min(a1.y)
            {
                continue;
            }
            // signed distances of each segment's endpoints from the other's line
            let d1 = orient(b0, b1, a0) / len_b;
            let d2 = orient(b0, b1, a1) / len_b;
            let d3 = orient(a0, a1, b0) / len_a;
            let d4 = orient(a0, a1, b1) / len_a;
            if d1 * d2 < 0.0
                && d3 * d4 < 0.0
                && d1.abs().min(d2.abs()) > tol
                && d3.abs().min(d4.abs()) > tol
            {
                return Err(GeomError::SelfIntersecting { index: i });
            }
        }
    }
    Ok(())
}

/// Convex hull by monotone chain. Output is counterclockwise, starts at the
/// lexicographically smallest point and contains no collinear triples.
pub fn convex_hull(points: &[Vec2]) -> Result<Vec<Vec2>, GeomError> {
    if points.len() < 3 {
        return Err(GeomError::TooFewVertices { min: 3, got: points.len() });
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.dist(*b) < 1e-15);
    if pts.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }

    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() + 1);
    // lower chain
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    // upper chain
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    Ok(hull)
}

/// Point-in-convex-polygon test by half planes; `tol` admits boundary points.
pub fn point_in_convex(hull: &[Vec2], p: Vec2, tol: f64) -> bool {
    let n = hull.len();
    for i in 0..n {
        if orient(hull[i], hull[(i + 1) % n], p) < -tol {
            return false;
        }
    }
    true
}

/// Point-in-simple-polygon by the even-odd ray cast. Boundary points count
/// as inside when within `tol` of an edge.
pub fn point_in_polygon(poly: &[Vec2], p: Vec2, tol: f64) -> bool {
    if tol > 0.0 && distance_to_boundary(poly, p) <= tol {
        return true;
    }
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Distance from `p` to the closest point of the polygon boundary.
pub fn distance_to_boundary(poly: &[Vec2], p: Vec2) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let d = distance_to_segment(p, poly[i], poly[(i + 1) % n]);
        if d < best {
            best = d;
        }
    }
    best
}

pub fn distance_to_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Closest point of the polygon boundary to `p`.
pub fn project_to_boundary(poly: &[Vec2], p: Vec2) -> Vec2 {
    project_to_boundary_detailed(poly, p).0
}

/// Closest boundary point together with its edge index and edge parameter.
pub fn project_to_boundary_detailed(poly: &[Vec2], p: Vec2) -> (Vec2, usize, f64) {
    let n = poly.len();
    let mut best = f64::INFINITY;
    let mut best_pt = poly[0];
    let mut best_edge = 0;
    let mut best_u = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let ab = b - a;
        let len_sq = ab.norm_sq();
        let (q, u) = if len_sq == 0.0 {
            (a, 0.0)
        } else {
            let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
            (a + ab * t, t)
        };
        let d = p.dist(q);
        if d < best {
            best = d;
            best_pt = q;
            best_edge = i;
            best_u = u;
        }
    }
    (best_pt, best_edge, best_u)
}

/// Portion of segment `[a, b]` inside a convex polygon, as a parameter
/// interval. Returns `None` when the segment misses the polygon.
pub fn clip_segment_to_convex(a: Vec2, b: Vec2, hull: &[Vec2]) -> Option<(f64, f64)> {
    let d = b - a;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let n = hull.len();
    for i in 0..n {
        let e0 = hull[i];
        let e1 = hull[(i + 1) % n];
        let edge = e1 - e0;
        // inside is the left half-plane of each CCW edge
        let denom = edge.cross(d);
        let num = edge.cross(a - e0);
        if denom.abs() < 1e-15 {
            if num < 0.0 {
                return None; // parallel and fully outside this half-plane
            }
            continue;
        }
        let t = -num / denom;
        if denom > 0.0 {
            // entering
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

/// First intersection of the ray `origin + t * dir`, `t in (tol, reach]`,
/// with the polygon boundary. Returns `(t, edge_index, edge_param)`.
pub fn ray_polygon_first_hit(
    origin: Vec2,
    dir: Vec2,
    reach: f64,
    poly: &[Vec2],
    tol: f64,
) -> Option<(f64, usize, f64)> {
    let n = poly.len();
    let end = origin + dir * reach;
    let mut best: Option<(f64, usize, f64)> = None;
    for i in 0..n {
        let b0 = poly[i];
        let b1 = poly[(i + 1) % n];
        if let Some((t, u)) = segment_intersection(origin, end, b0, b1) {
            let t_dist = t * reach;
            if t_dist > tol {
                match best {
                    Some((bt, _, _)) if bt <= t_dist => {}
                    _ => best = Some((t_dist, i, u)),
                }
            }
        }
    }
    best
}

/// Area of the intersection of two simple CCW polygons, by Green's theorem:
/// integrate x dy − y dx along the pieces of each boundary that lie inside
/// the other polygon. Exact for transversal crossings; touching boundaries
/// contribute measure zero.
pub fn intersection_area(p: &[Vec2], q: &[Vec2]) -> f64 {
    let mut twice = clipped_boundary_integral(p, q) + clipped_boundary_integral(q, p);
    if twice < 0.0 {
        twice = 0.0;
    }
    twice / 2.0
}

fn clipped_boundary_integral(p: &[Vec2], q: &[Vec2]) -> f64 {
    let n = p.len();
    let mut total = 0.0;
    let mut cuts: Vec<f64> = Vec::with_capacity(8);
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        cuts.clear();
        cuts.push(0.0);
        cuts.push(1.0);
        let m = q.len();
        for j in 0..m {
            if let Some((t, _)) = segment_intersection(a, b, q[j], q[(j + 1) % m]) {
                cuts.push(t);
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for w in cuts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 - t0 < 1e-12 {
                continue;
            }
            let mid = a.lerp(b, (t0 + t1) / 2.0);
            // pieces hugging the other boundary carry no area and their
            // inside test is unstable; skip them
            if point_in_polygon(q, mid, 0.0) && distance_to_boundary(q, mid) > 1e-9 {
                let u = a.lerp(b, t0);
                let v = a.lerp(b, t1);
                total += u.cross(v);
            }
        }
    }
    total
}

/// Regular n-gon sampled counterclockwise starting at angle 0.
pub fn regular_polygon(center: Vec2, radius: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            Vec2::new(center.x + radius * theta.cos(), center.y + radius * theta.sin())
        })
        .collect()
}
