use super::intersect::intersect_edges;
use super::inclusion::point_in_triangle;
use super::{signed_area, ConvexRegion, Edge, ParabolicSegment, Point, Sign, SignedPiece};
use crate::{Error, Result};

/// The three boundary edges `(v1 v4 v2)`, `(v2 v5 v3)`, `(v3 v6 v1)` of a
/// TRIA6 cell with nodes ordered corners first, then midsides.
pub(crate) fn tria6_edges(n: &[Point; 6]) -> Result<[Edge; 3]> {
    Ok([
        Edge::arc_or_line(n[0], n[3], n[1])?,
        Edge::arc_or_line(n[1], n[4], n[2])?,
        Edge::arc_or_line(n[2], n[5], n[0])?,
    ])
}

fn scale_of(n: &[Point; 6]) -> f64 {
    super::BBox::from_points(n.iter().copied()).diameter()
}

/// Checks that the curved boundary is simple and the corner triangle is
/// counter-clockwise.
pub fn validate_tria6(nodes: &[Point; 6]) -> Result<()> {
    let scale = scale_of(nodes);
    let area = signed_area(nodes[0], nodes[1], nodes[2]);
    if !(area > 1e-14 * scale * scale) {
        return Err(Error::Degenerate(format!(
            "corner triangle not counter-clockwise (area {area:e})"
        )));
    }
    let edges = tria6_edges(nodes)?;
    let corners = [nodes[0], nodes[1], nodes[2]];
    let tol = 1e-10 * scale;
    let at_corner = |q: Point| corners.iter().any(|c| c.dist(q) <= 1e3 * tol);
    let tri = [nodes[0], nodes[1], nodes[2]];
    for (e, mid) in edges.iter().zip(&nodes[3..]) {
        // An inward bulge must stay within the corner triangle.
        if let Edge::Arc(a) = e {
            if a.sagitta() > 0.0 && !point_in_triangle(*mid, tri, tol) {
                return Err(Error::Degenerate(format!(
                    "midside node ({}, {}) folds past the opposite corner",
                    mid.x, mid.y
                )));
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            // Arc against arc (each unordered pair once) and arc against chord.
            let mut others = Vec::with_capacity(2);
            if i < j {
                others.push(edges[j]);
            }
            if edges[i].is_arc() {
                others.push(Edge::line(edges[j].start(), edges[j].end()));
            }
            for o in &others {
                if let Some(c) = intersect_edges(&edges[i], o, tol)
                    .into_iter()
                    .find(|c| !at_corner(c.point))
                {
                    return Err(Error::Degenerate(format!(
                        "curved boundary self-intersects near ({}, {})",
                        c.point.x, c.point.y
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Splits a TRIA6 cell into its corner triangle (`+`) and one parabolic
/// segment per curved edge: `+` when the edge bulges outward, `-` when it
/// bulges into the triangle.
pub fn convex_partition_tria6(nodes: &[Point; 6]) -> Result<Vec<SignedPiece>> {
    validate_tria6(nodes)?;
    let tri = ConvexRegion::triangle(nodes[0], nodes[1], nodes[2])?;
    let mut out = vec![SignedPiece::new(Sign::Plus, tri)];
    for e in tria6_edges(nodes)? {
        if let Edge::Arc(arc) = e {
            // Left of a CCW edge is the triangle interior.
            let sign = if arc.sagitta() > 0.0 {
                Sign::Minus
            } else {
                Sign::Plus
            };
            out.push(SignedPiece::new(sign, ParabolicSegment::new(arc)?.region()));
        }
    }
    Ok(out)
}
