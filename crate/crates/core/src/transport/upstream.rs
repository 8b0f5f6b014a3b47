use super::{trace_back, TraceConfig, VelocityField};
use crate::geometry::{
    convex_partition_tria6, BBox, ConvexRegion, Edge, Point, Sign, SignedPiece,
};
use crate::mesh::Mesh;
use crate::{Error, Result};

/// How the traced boundary of an upstream element is represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpstreamShape {
    /// Quadratic arcs through the traced corner and midside nodes.
    #[default]
    Curved,
    /// Straight triangle on the traced corners.
    Straight,
}

/// Quadratic TRIA6 shape functions at reference point `(xi, eta)`, corners
/// `(0,0)`, `(1,0)`, `(0,1)` first, then the midsides of edges 12, 23, 31.
pub fn tria6_shape(xi: f64, eta: f64) -> [f64; 6] {
    let l1 = 1.0 - xi - eta;
    let (l2, l3) = (xi, eta);
    [
        l1 * (2.0 * l1 - 1.0),
        l2 * (2.0 * l2 - 1.0),
        l3 * (2.0 * l3 - 1.0),
        4.0 * l1 * l2,
        4.0 * l2 * l3,
        4.0 * l3 * l1,
    ]
}

/// Region at `t^n` that flows onto an Eulerian element at `t^{n+1}`.
#[derive(Clone, Debug)]
pub struct UpstreamElement {
    pub id: usize,
    /// Traced TRIA6 nodes: corners, then midsides of edges 12, 23, 31.
    pub nodes: [Point; 6],
    /// Traced barycenter.
    pub barycenter: Point,
    pub edges: [Edge; 3],
    pub pieces: Vec<SignedPiece>,
    pub bbox: BBox,
    pub shape: UpstreamShape,
}

impl UpstreamElement {
    /// Signed area of the decomposition.
    pub fn area(&self) -> f64 {
        self.pieces.iter().map(SignedPiece::signed_area).sum()
    }

    /// Isoparametric image of a reference point.
    pub fn map(&self, xi: f64, eta: f64) -> Point {
        tria6_shape(xi, eta)
            .iter()
            .zip(&self.nodes)
            .fold(Point::new(0.0, 0.0), |acc, (n, p)| acc + *p * *n)
    }

    /// Traced points used for the adjoint fit: six nodes then the barycenter.
    pub fn fit_points(&self) -> [Point; 7] {
        let n = &self.nodes;
        [n[0], n[1], n[2], n[3], n[4], n[5], self.barycenter]
    }
}

/// Eulerian TRIA6 nodes of a straight element plus its barycenter.
pub(crate) fn eulerian_points(tri: [Point; 3]) -> [Point; 7] {
    [
        tri[0],
        tri[1],
        tri[2],
        tri[0].midpoint(tri[1]),
        tri[1].midpoint(tri[2]),
        tri[2].midpoint(tri[0]),
        (tri[0] + tri[1] + tri[2]) / 3.0,
    ]
}

/// Traces element `j` of `mesh` from `t1` back to `t0` and builds its
/// upstream decomposition.
pub fn build_upstream(
    mesh: &Mesh,
    j: usize,
    velocity: &dyn VelocityField,
    t1: f64,
    t0: f64,
    config: TraceConfig,
    shape: UpstreamShape,
) -> Result<UpstreamElement> {
    let pts = eulerian_points(mesh.triangle(j));
    let mut traced = [Point::new(0.0, 0.0); 7];
    for (dst, p) in traced.iter_mut().zip(pts) {
        *dst = trace_back(p, velocity, t1, t0, config)?;
    }
    let nodes = [traced[0], traced[1], traced[2], traced[3], traced[4], traced[5]];
    let invalid = |e: Error| Error::Upstream {
        element: j,
        reason: e.to_string(),
    };
    let (edges, pieces) = match shape {
        UpstreamShape::Curved => {
            let pieces = convex_partition_tria6(&nodes).map_err(invalid)?;
            let edges = [
                Edge::arc_or_line(nodes[0], nodes[3], nodes[1]).map_err(invalid)?,
                Edge::arc_or_line(nodes[1], nodes[4], nodes[2]).map_err(invalid)?,
                Edge::arc_or_line(nodes[2], nodes[5], nodes[0]).map_err(invalid)?,
            ];
            (edges, pieces)
        }
        UpstreamShape::Straight => {
            let tri = ConvexRegion::triangle(nodes[0], nodes[1], nodes[2]).map_err(invalid)?;
            let edges = [
                Edge::line(nodes[0], nodes[1]),
                Edge::line(nodes[1], nodes[2]),
                Edge::line(nodes[2], nodes[0]),
            ];
            (edges, vec![SignedPiece::new(Sign::Plus, tri)])
        }
    };
    let bbox = edges
        .iter()
        .map(Edge::bbox)
        .fold(BBox::empty(), |a, b| a.union(&b));
    Ok(UpstreamElement {
        id: j,
        nodes,
        barycenter: traced[6],
        edges,
        pieces,
        bbox,
        shape,
    })
}

/// Mean over the three edges of the sampled distance between the fitted
/// upstream arc and the traced image of the Eulerian edge, scaled by the
/// parameter length: `int_0^1 |X(theta) - X_fit(theta)| d theta`.
pub fn upstream_edge_distance(
    mesh: &Mesh,
    j: usize,
    velocity: &dyn VelocityField,
    t1: f64,
    t0: f64,
    config: TraceConfig,
    samples: usize,
) -> Result<f64> {
    let up = build_upstream(mesh, j, velocity, t1, t0, config, UpstreamShape::Curved)?;
    let tri = mesh.triangle(j);
    let n = samples.max(1);
    let mut total = 0.0;
    for (k, e) in up.edges.iter().enumerate() {
        let (a, b) = (tri[k], tri[(k + 1) % 3]);
        let mut s = 0.0;
        for i in 0..n {
            let th = (i as f64 + 0.5) / n as f64;
            let exact = trace_back(a.lerp(b, th), velocity, t1, t0, config)?;
            s += exact.dist(e.eval(th));
        }
        total += s / n as f64;
    }
    Ok(total / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::circle_mesh;
    use crate::transport::Velocity;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    const REF: [(f64, f64); 6] = [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.0, 1.0),
        (0.5, 0.0),
        (0.5, 0.5),
        (0.0, 0.5),
    ];

    #[test]
    fn shape_functions_kronecker() {
        for (i, &(x, y)) in REF.iter().enumerate() {
            let n = tria6_shape(x, y);
            for (k, v) in n.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn shape_functions_partition_of_unity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            let s: f64 = tria6_shape(x, y).iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    fn small_mesh() -> Mesh {
        circle_mesh(3, PI, 0.1, 9)
    }

    #[test]
    fn zero_velocity_reproduces_element() {
        let m = small_mesh();
        let v = Velocity::Constant { a: 0.0, b: 0.0 };
        for j in [0, 10, 40] {
            let up = build_upstream(&m, j, &v, 1.0, 0.0, TraceConfig::default(), UpstreamShape::Curved)
                .unwrap();
            assert!(up.edges.iter().all(|e| !e.is_arc()));
            assert_eq!(up.pieces.len(), 1);
            assert!((up.area() - m.element(j).area).abs() < 1e-14);
            assert_eq!(up.nodes[0], m.triangle(j)[0]);
        }
    }

    #[test]
    fn rotation_keeps_edges_straight() {
        let m = small_mesh();
        for j in 0..m.len() {
            let up = build_upstream(
                &m,
                j,
                &Velocity::RigidRotation,
                0.7,
                0.0,
                TraceConfig::default(),
                UpstreamShape::Curved,
            )
            .unwrap();
            for k in 0..3 {
                let (a, b, c) = (up.nodes[k], up.nodes[(k + 1) % 3], up.nodes[k + 3]);
                let off = (b - a).cross(c - a) / a.dist(b);
                assert!(off.abs() < 1e-9);
            }
            assert!((up.area() - m.element(j).area).abs() < 1e-5 * m.element(j).area);
        }
    }

    #[test]
    fn swirling_edges_curve_and_interpolate() {
        let m = circle_mesh(3, PI, 0.0, 0);
        let v = Velocity::Swirling { period: 1.5 };
        let mut curved = 0;
        for j in 0..m.len() {
            let up = build_upstream(&m, j, &v, 0.2, 0.0, TraceConfig::default(), UpstreamShape::Curved)
                .unwrap();
            for (k, e) in up.edges.iter().enumerate() {
                curved += usize::from(e.is_arc());
                assert!(e.eval(0.0).dist(up.nodes[k]) < 1e-13);
                assert!(e.eval(0.5).dist(up.nodes[k + 3]) < 1e-13);
                assert!(e.eval(1.0).dist(up.nodes[(k + 1) % 3]) < 1e-13);
            }
            assert!(up.area() > 0.0);
            let mid = up.map(1.0 / 3.0, 1.0 / 3.0);
            assert!(mid.is_finite());
        }
        assert!(curved > m.len());
    }

    #[test]
    fn straight_shape_is_corner_triangle() {
        let m = small_mesh();
        let v = Velocity::Swirling { period: 1.5 };
        let up = build_upstream(&m, 5, &v, 0.4, 0.0, TraceConfig::default(), UpstreamShape::Straight)
            .unwrap();
        assert_eq!(up.pieces.len(), 1);
        assert!(up.edges.iter().all(|e| !e.is_arc()));
    }

    #[test]
    fn edge_distance_trivial_fields() {
        let m = small_mesh();
        let zero = Velocity::Constant { a: 0.0, b: 0.0 };
        let cfg = TraceConfig::default();
        assert!(upstream_edge_distance(&m, 3, &zero, 1.0, 0.0, cfg, 16).unwrap() < 1e-15);
        let d = upstream_edge_distance(&m, 3, &Velocity::RigidRotation, 1.0, 0.0, cfg, 16).unwrap();
        assert!(d < 1e-8, "{d}");
    }
}
