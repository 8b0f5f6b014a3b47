use super::inclusion::point_in_region;
use super::intersect::intersect_edges;
use super::order::{collinear, farthest_pair, order_ccw};
use super::{ConvexRegion, Edge, Point, SignedPiece};
use crate::{Error, Result};

/// Tolerances for [`clip_convex`], relative to the diameter of the inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClipTolerance {
    /// Vertices closer than `snap * scale` are merged.
    pub snap: f64,
    /// Regions with area below `min_area * scale^2` are dropped.
    pub min_area: f64,
}

impl Default for ClipTolerance {
    fn default() -> Self {
        Self {
            snap: 1e-10,
            min_area: 1e-15,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Member {
    owner: u8,
    edge: usize,
    t: f64,
    exact: bool,
}

#[derive(Clone, Debug)]
struct Vertex {
    p: Point,
    corner: bool,
    members: Vec<Member>,
}

impl Vertex {
    fn has(&self, owner: u8, edge: usize) -> bool {
        self.members.iter().any(|m| m.owner == owner && m.edge == edge)
    }

    fn absorb(&mut self, o: Vertex) {
        if o.corner && !self.corner {
            self.p = o.p;
            self.corner = true;
        }
        for m in o.members {
            match self
                .members
                .iter_mut()
                .find(|k| k.owner == m.owner && k.edge == m.edge)
            {
                Some(k) => {
                    if m.exact && !k.exact {
                        *k = m;
                    }
                }
                None => self.members.push(m),
            }
        }
    }
}

/// Intersection of two convex regions bounded by lines and quadratic arcs.
///
/// Vertices are the boundary crossings plus the corners of each region that
/// lie in the other; they are snapped, ordered counter-clockwise about their
/// centroid and joined by the sub-edges of the inputs that run between
/// consecutive vertices. Two-vertex results (lenses bounded by two arcs, or
/// an arc and a line) are kept. Returns `None` for empty or measure-zero
/// intersections.
pub fn clip_convex(
    p: &ConvexRegion,
    q: &ConvexRegion,
    tol: ClipTolerance,
) -> Result<Option<ConvexRegion>> {
    let (bp, bq) = (p.bbox(), q.bbox());
    let scale = bp.diameter().max(bq.diameter());
    if !(scale > 0.0) {
        return Ok(None);
    }
    let snap = tol.snap * scale;
    if !bp.intersects(&bq, snap) {
        return Ok(None);
    }
    let regions = [p, q];
    let mut raw: Vec<Vertex> = Vec::new();

    for (i, ep) in p.edges().iter().enumerate() {
        if !ep.bbox().intersects(&bq, snap) {
            continue;
        }
        for (j, eq) in q.edges().iter().enumerate() {
            if !ep.bbox().intersects(&eq.bbox(), snap) {
                continue;
            }
            for c in intersect_edges(ep, eq, snap) {
                raw.push(Vertex {
                    p: c.point,
                    corner: false,
                    members: vec![
                        Member { owner: 0, edge: i, t: c.t1, exact: false },
                        Member { owner: 1, edge: j, t: c.t2, exact: false },
                    ],
                });
            }
        }
    }
    for (owner, (own, other)) in [(p, q), (q, p)].into_iter().enumerate() {
        let n = own.edges().len();
        for (i, e) in own.edges().iter().enumerate() {
            let c = e.start();
            if point_in_region(c, other, snap) {
                raw.push(Vertex {
                    p: c,
                    corner: true,
                    members: vec![
                        Member { owner: owner as u8, edge: i, t: 0.0, exact: true },
                        Member { owner: owner as u8, edge: (i + n - 1) % n, t: 1.0, exact: true },
                    ],
                });
            }
        }
    }

    let mut verts: Vec<Vertex> = Vec::with_capacity(raw.len());
    for v in raw {
        match verts.iter_mut().find(|w| w.p.dist(v.p) <= snap) {
            Some(w) => w.absorb(v),
            None => verts.push(v),
        }
    }
    if verts.len() < 2 {
        return Ok(None);
    }
    for v in verts.iter_mut() {
        for (owner, r) in regions.iter().enumerate() {
            for (i, e) in r.edges().iter().enumerate() {
                if v.has(owner as u8, i) {
                    continue;
                }
                if let Some(t) = e.locate(v.p, snap) {
                    v.members.push(Member { owner: owner as u8, edge: i, t, exact: false });
                }
            }
        }
    }

    let pts: Vec<Point> = verts.iter().map(|v| v.p).collect();
    let cycles: Vec<Vec<usize>> = if pts.len() == 2 {
        vec![vec![0, 1]]
    } else if collinear(&pts, snap) {
        let (a, b) = farthest_pair(&pts).expect("at least two points");
        let d = b - a;
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        idx.sort_by(|&i, &j| (pts[i] - a).dot(d).total_cmp(&(pts[j] - a).dot(d)));
        let rev: Vec<usize> = idx.iter().rev().copied().collect();
        vec![idx, rev]
    } else {
        vec![order_ccw(&pts)?]
    };

    let min_area = tol.min_area * scale * scale;
    for widen in [10.0, 1e3] {
        for cycle in &cycles {
            if let Some(edges) = reconstruct(&verts, cycle, &regions, widen * snap) {
                let region = ConvexRegion::from_edges_unchecked(edges);
                let area = region.area();
                if area <= min_area && area >= -min_area {
                    return Ok(None);
                }
                if area > 0.0 {
                    return Ok(Some(region));
                }
            }
        }
    }
    // Nothing consistent: a sliver below the snap scale is harmless.
    if verts
        .iter()
        .all(|v| v.p.dist(verts[0].p) <= 1e3 * snap || collinear(&pts, 1e3 * snap))
    {
        return Ok(None);
    }
    Err(Error::Clip(format!(
        "cannot join {} vertices near ({}, {})",
        verts.len(),
        verts[0].p.x,
        verts[0].p.y
    )))
}

fn reconstruct(
    verts: &[Vertex],
    cycle: &[usize],
    regions: &[&ConvexRegion; 2],
    tol: f64,
) -> Option<Vec<Edge>> {
    let n = cycle.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let u = &verts[cycle[k]];
        let v = &verts[cycle[(k + 1) % n]];
        let mut chosen = None;
        'cand: for mu in &u.members {
            for mv in &v.members {
                if mu.owner != mv.owner || mu.edge != mv.edge || !(mv.t > mu.t) {
                    continue;
                }
                let base = &regions[mu.owner as usize].edges()[mu.edge];
                let sub = match base {
                    Edge::Line(_) => Edge::line(u.p, v.p),
                    Edge::Arc(a) => Edge::from_arc(a.sub(mu.t, mv.t)),
                };
                let mid = sub.eval(0.5);
                if point_in_region(mid, regions[0], tol) && point_in_region(mid, regions[1], tol) {
                    chosen = Some(sub);
                    break 'cand;
                }
            }
        }
        out.push(chosen?);
    }
    Some(out)
}

/// Pairwise clips of two signed decompositions, with product signs.
pub fn signed_intersection(
    a: &[SignedPiece],
    b: &[SignedPiece],
    tol: ClipTolerance,
) -> Result<Vec<SignedPiece>> {
    let mut out = Vec::new();
    for pa in a {
        for pb in b {
            if let Some(r) = clip_convex(&pa.region, &pb.region, tol)? {
                out.push(SignedPiece::new(pa.sign.times(pb.sign), r));
            }
        }
    }
    Ok(out)
}
