use super::Point;
use crate::{Error, Result};

/// Indices of `pts` sorted counter-clockwise by polar angle about their
/// centroid. Ties are broken by radius, then by input index.
pub fn order_ccw(pts: &[Point]) -> Result<Vec<usize>> {
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!(
            "need 3 vertices to order, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let o = pts.iter().fold(Point::default(), |acc, &q| acc + q) / n;
    let scale = pts.iter().map(|q| q.dist(o)).fold(0.0, f64::max);
    if collinear(pts, 1e-12 * scale) {
        return Err(Error::Degenerate("collinear vertices".into()));
    }
    let key: Vec<(f64, f64)> = pts
        .iter()
        .map(|&q| {
            let d = q - o;
            (d.y.atan2(d.x), d.norm())
        })
        .collect();
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        key[i]
            .0
            .total_cmp(&key[j].0)
            .then(key[i].1.total_cmp(&key[j].1))
            .then(i.cmp(&j))
    });
    Ok(idx)
}

/// All points within `tol` of the line through the two farthest-apart ones.
pub(crate) fn collinear(pts: &[Point], tol: f64) -> bool {
    let Some((a, b)) = farthest_pair(pts) else {
        return true;
    };
    let d = b - a;
    let len = d.norm();
    if len <= tol {
        return true;
    }
    pts.iter().all(|&q| (d.cross(q - a) / len).abs() <= tol)
}

pub(crate) fn farthest_pair(pts: &[Point]) -> Option<(Point, Point)> {
    let mut best: Option<(Point, Point, f64)> = None;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = a.dist(b);
            if best.is_none_or(|(_, _, m)| d > m) {
                best = Some((a, b, d));
            }
        }
    }
    best.map(|(a, b, _)| (a, b))
}
