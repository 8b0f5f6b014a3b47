//! Gauss rules and Green's-theorem integrals of polynomials over regions
//! bounded by segments and quadratic arcs.
//!
//! With `P = 0` and `Q` the `x`-antiderivative of the integrand `f`,
//! `int_R f dA = oint_{dR} Q dy`. Along a quadratic edge the pulled-back
//! integrand is a univariate polynomial, so a fixed Gauss rule is exact.

mod poly;

use std::sync::OnceLock;

pub use poly::{exponents, mono_count, mono_index, BivariatePoly};

use crate::geometry::{ConvexRegion, Edge, Point};
use crate::{Error, Result};

/// Points per edge for boundary integrals; exact to degree 15.
pub const EDGE_POINTS: usize = 8;

/// Gauss-Legendre rule on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=16).contains(&n) {
            return Err(Error::Parameter(format!("gauss rule order {n} not in 1..=16")));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Initial guess for the i-th root of P_n on [-1, 1].
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = 0.5 * (1.0 - x);
            weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss-Legendre rule on `[0, 1]`.
pub fn gauss_rule(n: usize) -> Result<GaussRule> {
    GaussRule::new(n)
}

fn edge_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(EDGE_POINTS).expect("valid order"))
}

/// Symmetric 12-point rule on triangles, exact to degree 6: barycentric
/// points and weights summing to one.
pub fn triangle_rule() -> &'static [([f64; 3], f64)] {
    static RULE: OnceLock<Vec<([f64; 3], f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut r = Vec::with_capacity(12);
        let orbit3 = |a: f64, b: f64, w: f64, r: &mut Vec<([f64; 3], f64)>| {
            r.push(([a, b, b], w));
            r.push(([b, a, b], w));
            r.push(([b, b, a], w));
        };
        orbit3(0.501426509658179, 0.249286745170910, 0.116786275726379, &mut r);
        orbit3(0.873821971016996, 0.063089014491502, 0.050844906370207, &mut r);
        let (a, b, c, w) = (
            0.053145049844817,
            0.310352451033784,
            0.636502499121399,
            0.082851075618374,
        );
        for l in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            r.push((l, w));
        }
        r
    })
}

/// Physical quadrature points and weights of [`triangle_rule`] on `tri`.
pub fn triangle_points(tri: [Point; 3]) -> impl Iterator<Item = (Point, f64)> {
    let area = crate::geometry::signed_area(tri[0], tri[1], tri[2]).abs();
    triangle_rule().iter().map(move |&(l, w)| {
        (
            tri[0] * l[0] + tri[1] * l[1] + tri[2] * l[2],
            w * area,
        )
    })
}

/// Closed counter-clockwise loop of edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPath {
    edges: Vec<Edge>,
}

impl BoundaryPath {
    /// Validates closure (relative gap `1e-9`) and positive orientation.
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        let path = Self { edges };
        let scale = path
            .edges
            .iter()
            .fold(crate::geometry::BBox::empty(), |b, e| b.union(&e.bbox()))
            .diameter();
        let n = path.edges.len();
        let gap = (0..n)
            .map(|i| path.edges[i].end().dist(path.edges[(i + 1) % n].start()))
            .fold(0.0, f64::max);
        if n == 0 || !(gap <= 1e-9 * scale) {
            return Err(Error::OpenPath { gap });
        }
        let area = path.signed_integral(&BivariatePoly::constant(1.0));
        if !(area > 0.0) {
            return Err(Error::Orientation { area });
        }
        Ok(path)
    }

    pub fn from_region(r: &ConvexRegion) -> Self {
        Self {
            edges: r.edges().to_vec(),
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn signed_integral(&self, f: &BivariatePoly) -> f64 {
        let q = f.antiderivative_x();
        self.edges.iter().map(|e| edge_green(e, &q)).sum()
    }

    /// `int f dA` over the enclosed region.
    pub fn integrate(&self, f: &BivariatePoly) -> f64 {
        self.signed_integral(f)
    }

    pub fn area(&self) -> f64 {
        self.signed_integral(&BivariatePoly::constant(1.0))
    }

    pub fn reversed(&self) -> Self {
        Self {
            edges: self.edges.iter().rev().map(Edge::reversed).collect(),
        }
    }
}

/// `int_e Q dy` with the edge Gauss rule.
fn edge_green(e: &Edge, q: &BivariatePoly) -> f64 {
    let rule = edge_rule();
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let p = e.eval(t);
            w * q.eval(p.x, p.y) * e.deriv(t).y
        })
        .sum()
}

/// `Q` with `dQ/dx - dP/dy = f` for `P = 0`.
pub fn green_antiderivative(f: &BivariatePoly) -> BivariatePoly {
    f.antiderivative_x()
}

pub fn integrate_over_region(path: &BoundaryPath, f: &BivariatePoly) -> f64 {
    path.integrate(f)
}

pub fn region_area(path: &BoundaryPath) -> f64 {
    path.area()
}

/// Scaled moments `int ((x - cx)/h)^p ((y - cy)/h)^q dA` for `p + q <= degree`,
/// accumulated into `out` (degree-lexicographic order) times `weight`.
pub fn accumulate_moments(
    edges: &[Edge],
    degree: usize,
    center: Point,
    h: f64,
    weight: f64,
    out: &mut [f64],
) {
    debug_assert!(out.len() >= mono_count(degree));
    let rule = edge_rule();
    let inv = 1.0 / h;
    // Jacobian of the scaling: dA = h^2 dX dY, dy = h dY.
    let jac = weight * h * h;
    let mut xp = [0.0f64; 8];
    let mut yp = [0.0f64; 8];
    for e in edges {
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let p = e.eval(t);
            let dy = e.deriv(t).y * inv;
            let x = (p.x - center.x) * inv;
            let y = (p.y - center.y) * inv;
            xp[0] = x;
            yp[0] = 1.0;
            for k in 1..=degree {
                xp[k] = xp[k - 1] * x;
                yp[k] = yp[k - 1] * y;
            }
            let f = jac * w * dy;
            let mut idx = 0;
            for d in 0..=degree {
                for qq in 0..=d {
                    let pp = d - qq;
                    out[idx] += f * xp[pp] * yp[qq] / (pp + 1) as f64;
                    idx += 1;
                }
            }
        }
    }
}

/// Scaled moments of a region; see [`accumulate_moments`].
pub fn region_moments(region: &ConvexRegion, degree: usize, center: Point, h: f64) -> Vec<f64> {
    let mut m = vec![0.0; mono_count(degree)];
    accumulate_moments(region.edges(), degree, center, h, 1.0, &mut m);
    m
}
