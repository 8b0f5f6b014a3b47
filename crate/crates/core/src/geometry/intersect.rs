use super::roots::{quadratic_roots, real_roots};
use super::{Edge, ParametricArc, Point, Segment};
use crate::{Error, Result};

/// An intersection point with its parameter on each input curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub point: Point,
    pub t1: f64,
    pub t2: f64,
}

impl Crossing {
    fn swapped(self) -> Self {
        Crossing {
            point: self.point,
            t1: self.t2,
            t2: self.t1,
        }
    }
}

/// Default absolute tolerance for the public entry points.
fn default_tol(scale: f64) -> f64 {
    1e-10 * scale.max(f64::MIN_POSITIVE)
}

fn in_range(t: f64, pad: f64) -> bool {
    t >= -pad && t <= 1.0 + pad
}

/// Intersection of two segments. Parallel segments (including collinear
/// overlaps) report nothing; overlaps are resolved by the inclusion tests.
pub fn intersect_line_line(l1: &Segment, l2: &Segment) -> Option<Crossing> {
    let tol = default_tol(l1.len().max(l2.len()));
    line_line(l1, l2, tol)
}

fn line_line(l1: &Segment, l2: &Segment, tol: f64) -> Option<Crossing> {
    let d1 = l1.dir();
    let d2 = l2.dir();
    let (n1, n2) = (d1.norm(), d2.norm());
    if n1 == 0.0 || n2 == 0.0 {
        return None;
    }
    let denom = d1.cross(d2);
    if denom.abs() <= 1e-14 * n1 * n2 {
        return None;
    }
    let w = l2.p0 - l1.p0;
    let t = w.cross(d2) / denom;
    let s = w.cross(d1) / denom;
    if !in_range(t, tol / n1) || !in_range(s, tol / n2) {
        return None;
    }
    let t = t.clamp(0.0, 1.0);
    let s = s.clamp(0.0, 1.0);
    Some(Crossing {
        point: l1.eval(t),
        t1: t,
        t2: s,
    })
}

/// Intersections of an arc (parameter `t1`) and a segment (parameter `t2`).
///
/// The segment parameter is eliminated through the cross product with the
/// segment direction, leaving a quadratic in the arc parameter. Tangent
/// contacts are reported once.
pub fn intersect_arc_line(arc: &ParametricArc, line: &Segment) -> Vec<Crossing> {
    let tol = default_tol(arc.chord().norm().max(line.len()));
    arc_line(arc, line, tol)
}

fn arc_line(arc: &ParametricArc, line: &Segment, tol: f64) -> Vec<Crossing> {
    if arc.is_straight() {
        return line_line(&Segment::new(arc.start(), arc.end()), line, tol)
            .map(|c| {
                // Re-express the chord parameter on the arc itself.
                let t1 = Edge::Arc(*arc).locate(c.point, 10.0 * tol).unwrap_or(c.t1);
                vec![Crossing { t1, ..c }]
            })
            .unwrap_or_default();
    }
    let d = line.dir();
    let l2 = d.norm2();
    if l2 == 0.0 {
        return Vec::new();
    }
    let len = l2.sqrt();
    // Normalize by the segment length so the quadratic is O(scale).
    let c2 = d.cross(arc.a) / len;
    let c1 = d.cross(arc.b) / len;
    let c0 = d.cross(arc.c - line.p0) / len;
    let arc_len = arc.chord().norm().max(arc.b.norm());
    let mut out: Vec<Crossing> = Vec::with_capacity(2);
    for xi in quadratic_roots(c0, c1, c2) {
        if !in_range(xi, tol / arc_len) {
            continue;
        }
        let xi = xi.clamp(0.0, 1.0);
        let p = arc.eval(xi);
        let eta = (p - line.p0).dot(d) / l2;
        if !in_range(eta, tol / len) {
            continue;
        }
        let eta = eta.clamp(0.0, 1.0);
        if (line.eval(eta) - p).norm() > 10.0 * tol {
            continue;
        }
        if out.iter().any(|c: &Crossing| c.point.dist(p) <= tol) {
            continue;
        }
        out.push(Crossing {
            point: p,
            t1: xi,
            t2: eta,
        });
    }
    out
}

/// Intersections of two arcs (parameters `t1` on `arc1`, `t2` on `arc2`).
///
/// Eliminates `(xi^2, xi)` through the 2x2 coefficient matrix of `arc1`,
/// giving `xi^2 = A eta^2 + B eta + C`, `xi = a eta^2 + b eta + c` and the
/// quartic `(a eta^2 + b eta + c)^2 = A eta^2 + B eta + C`. When that matrix
/// is close to singular the Sylvester resultant is used instead. Returns an
/// error when the arcs overlap along a stretch (the quartic vanishes).
pub fn intersect_arc_arc(arc1: &ParametricArc, arc2: &ParametricArc) -> Result<Vec<Crossing>> {
    let tol = default_tol(arc1.chord().norm().max(arc2.chord().norm()));
    arc_arc(arc1, arc2, tol)
}

fn conditioning(arc: &ParametricArc) -> f64 {
    let den = arc.a.norm() * arc.b.norm();
    if den == 0.0 {
        0.0
    } else {
        arc.a.cross(arc.b).abs() / den
    }
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    r
}

fn poly_sub(p: &[f64], q: &[f64]) -> Vec<f64> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0))
        .collect()
}

fn arc_arc(arc1: &ParametricArc, arc2: &ParametricArc, tol: f64) -> Result<Vec<Crossing>> {
    if arc1.is_straight() {
        let seg = Segment::new(arc1.start(), arc1.end());
        return Ok(arc_line(arc2, &seg, tol)
            .into_iter()
            .map(|c| {
                let t = Edge::Arc(*arc1).locate(c.point, 10.0 * tol).unwrap_or(c.t2);
                Crossing {
                    point: c.point,
                    t1: t,
                    t2: c.t1,
                }
            })
            .collect());
    }
    if arc2.is_straight() {
        return Ok(arc_arc(arc2, arc1, tol)?
            .into_iter()
            .map(Crossing::swapped)
            .collect());
    }
    // Let the better-conditioned arc play the eliminated role.
    if conditioning(arc2) > conditioning(arc1) {
        return Ok(arc_arc(arc2, arc1, tol)?
            .into_iter()
            .map(Crossing::swapped)
            .collect());
    }

    // Work in coordinates centred on arc1's start and scaled to O(1).
    let scale = arc1.chord().norm().max(arc2.chord().norm()).max(arc1.b.norm());
    let origin = arc1.c;
    let n = |a: &ParametricArc| {
        ParametricArc::new(a.a / scale, a.b / scale, (a.c - origin) / scale)
    };
    let (g1, g2) = (n(arc1), n(arc2));
    let ntol = tol / scale;

    let alpha = [g2.c.x - g1.c.x, g2.b.x, g2.a.x];
    let beta = [g2.c.y - g1.c.y, g2.b.y, g2.a.y];
    let det = g1.a.cross(g1.b);
    let well_conditioned = conditioning(&g1) > 1e-8;

    // xi as a quadratic in eta, when available.
    let mut xi_of_eta: Option<[f64; 3]> = None;
    let quartic = if well_conditioned {
        let sq: Vec<f64> = (0..3)
            .map(|i| (g1.b.y * alpha[i] - g1.b.x * beta[i]) / det)
            .collect();
        let lin: [f64; 3] = std::array::from_fn(|i| (-g1.a.y * alpha[i] + g1.a.x * beta[i]) / det);
        xi_of_eta = Some(lin);
        poly_sub(&poly_mul(&lin, &lin), &sq)
    } else {
        // Res = (a1y alpha - a1x beta)^2 - det (b1y alpha - b1x beta)
        let u: Vec<f64> = (0..3).map(|i| g1.a.y * alpha[i] - g1.a.x * beta[i]).collect();
        let v: Vec<f64> = (0..3)
            .map(|i| det * (g1.b.y * alpha[i] - g1.b.x * beta[i]))
            .collect();
        poly_sub(&poly_mul(&u, &u), &v)
    };

    let qscale = quartic.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let input_scale = 1.0 + g2.a.norm2() + g2.b.norm2() + g2.c.norm2();
    if qscale <= 1e-13 * input_scale {
        return Err(Error::Degenerate("overlapping arcs".into()));
    }

    let mut out: Vec<Crossing> = Vec::with_capacity(4);
    for eta in real_roots(&quartic) {
        if !in_range(eta, 1e-6) {
            continue;
        }
        let target = g2.eval(eta);
        let xi = match xi_of_eta {
            Some(l) => (l[2] * eta + l[1]) * eta + l[0],
            None => best_xi(&g1, target),
        };
        let Some((xi, eta)) = newton_polish(&g1, &g2, xi, eta) else {
            continue;
        };
        let pad1 = ntol / g1.chord().norm().max(1e-300);
        let pad2 = ntol / g2.chord().norm().max(1e-300);
        if !in_range(xi, pad1) || !in_range(eta, pad2) {
            continue;
        }
        let (xi, eta) = (xi.clamp(0.0, 1.0), eta.clamp(0.0, 1.0));
        if g1.eval(xi).dist(g2.eval(eta)) > 10.0 * ntol {
            continue;
        }
        let p = arc1.eval(xi);
        if out.iter().any(|c| c.point.dist(p) <= tol) {
            continue;
        }
        out.push(Crossing {
            point: p,
            t1: xi,
            t2: eta,
        });
    }
    Ok(out)
}

/// Arc parameter whose point best matches `target`, from the roots of the two
/// coordinate quadratics.
fn best_xi(arc: &ParametricArc, target: Point) -> f64 {
    let mut cands = quadratic_roots(arc.c.x - target.x, arc.b.x, arc.a.x);
    cands.extend(quadratic_roots(arc.c.y - target.y, arc.b.y, arc.a.y));
    cands
        .into_iter()
        .min_by(|&a, &b| {
            arc.eval(a)
                .dist(target)
                .total_cmp(&arc.eval(b).dist(target))
        })
        .unwrap_or(0.5)
}

/// Newton iterations on `arc1(xi) - arc2(eta) = 0`.
fn newton_polish(
    arc1: &ParametricArc,
    arc2: &ParametricArc,
    mut xi: f64,
    mut eta: f64,
) -> Option<(f64, f64)> {
    let res = |xi: f64, eta: f64| (arc1.eval(xi) - arc2.eval(eta)).norm();
    for _ in 0..4 {
        let f = arc1.eval(xi) - arc2.eval(eta);
        let j1 = arc1.deriv(xi);
        let j2 = -arc2.deriv(eta);
        let det = j1.cross(j2);
        if det.abs() < 1e-14 * j1.norm() * j2.norm() {
            break;
        }
        // Solve [j1 j2] [dxi deta]^T = -f
        let dxi = -(f.cross(j2)) / det;
        let deta = -(j1.cross(f)) / det;
        let (nx, ne) = (xi + dxi, eta + deta);
        if !(nx.is_finite() && ne.is_finite()) || res(nx, ne) > res(xi, eta) {
            break;
        }
        xi = nx;
        eta = ne;
        if dxi.abs() + deta.abs() < 1e-16 {
            break;
        }
    }
    (xi.is_finite() && eta.is_finite()).then_some((xi, eta))
}

/// Intersections of two boundary edges with an absolute snapping tolerance.
/// Overlapping stretches yield no crossings.
pub fn intersect_edges(e1: &Edge, e2: &Edge, tol: f64) -> Vec<Crossing> {
    match (e1, e2) {
        (Edge::Line(a), Edge::Line(b)) => line_line(a, b, tol).into_iter().collect(),
        (Edge::Arc(a), Edge::Line(b)) => arc_line(a, b, tol),
        (Edge::Line(a), Edge::Arc(b)) => arc_line(b, a, tol)
            .into_iter()
            .map(Crossing::swapped)
            .collect(),
        (Edge::Arc(a), Edge::Arc(b)) => arc_arc(a, b, tol).unwrap_or_default(),
    }
}
