//! Closed point-inclusion predicates; boundary points count as inside.

use super::roots::quadratic_roots;
use super::{ConvexRegion, Edge, ParabolicSegment, ParametricArc, Point};

/// True iff `p` lies in the counter-clockwise triangle `(a, b, c)` or within
/// distance `tol` of it.
pub fn point_in_triangle(p: Point, tri: [Point; 3], tol: f64) -> bool {
    (0..3).all(|i| {
        let s = tri[i];
        let d = tri[(i + 1) % 3] - s;
        let len = d.norm();
        len == 0.0 || d.cross(p - s) >= -tol * len
    })
}

/// True iff `p` lies in the region between the segment's arc and its chord.
pub fn point_in_parabolic_segment(p: Point, seg: &ParabolicSegment, tol: f64) -> bool {
    in_segment(p, &seg.arc, tol)
}

fn dist_to_chord(p: Point, s: Point, e: Point) -> f64 {
    let d = e - s;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return p.dist(s);
    }
    let t = ((p - s).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(s + d * t)
}

pub(crate) fn in_segment(p: Point, arc: &ParametricArc, tol: f64) -> bool {
    if arc.is_straight() {
        return false;
    }
    let (s, e) = (arc.start(), arc.end());
    if dist_to_chord(p, s, e) <= tol {
        return true;
    }
    let chord = e - s;
    let len = chord.norm();
    // Half-plane test against the chord, using the apex side.
    let side = chord.cross(arc.eval(0.5) - s).signum();
    let h = side * chord.cross(p - s) / len;
    if h < -tol {
        return false;
    }
    // Perpendicular through p, parametrized so lambda > 0 points to the chord.
    let n = chord.perp() * (-side / len);
    let roots = quadratic_roots(n.cross(arc.c - p), n.cross(arc.b), n.cross(arc.a));
    let pad = tol / len;
    let lambdas: Vec<f64> = roots
        .into_iter()
        .filter(|&xi| xi >= -pad && xi <= 1.0 + pad)
        .map(|xi| (arc.eval(xi.clamp(0.0, 1.0)) - p).dot(n))
        .collect();
    let proj = (p - s).dot(chord) / (len * len);
    let over_chord = proj >= -pad && proj <= 1.0 + pad;
    match lambdas.as_slice() {
        [] => Edge::Arc(*arc).locate(p, tol).is_some(),
        [l] => {
            if over_chord {
                *l <= tol
            } else {
                l.abs() <= tol
            }
        }
        [l1, l2, ..] => l1 * l2 <= 0.0 || l1.abs().min(l2.abs()) <= tol,
    }
}

/// True iff `p` lies in the closed convex region (within `tol`).
///
/// A convex region is the polygon spanned by its edge endpoints together with
/// the parabolic segments cut off by its (outward-bulging) arcs.
pub fn point_in_region(p: Point, region: &ConvexRegion, tol: f64) -> bool {
    let bb = region.bbox();
    if p.x < bb.min.x - tol || p.x > bb.max.x + tol || p.y < bb.min.y - tol || p.y > bb.max.y + tol
    {
        return false;
    }
    let edges = region.edges();
    let mut vb = super::BBox::empty();
    let mut in_poly = true;
    for e in edges {
        let (s, t) = (e.start(), e.end());
        vb.include(s);
        let d = t - s;
        let len = d.norm();
        if len > 0.0 && d.cross(p - s) < -tol * len {
            in_poly = false;
            break;
        }
    }
    if in_poly
        && p.x >= vb.min.x - tol
        && p.x <= vb.max.x + tol
        && p.y >= vb.min.y - tol
        && p.y <= vb.max.y + tol
    {
        return true;
    }
    edges.iter().any(|e| match e {
        Edge::Arc(a) => in_segment(p, a, tol),
        Edge::Line(_) => false,
    })
}
