use super::{BBox, Edge, ParametricArc, Point};
use crate::{Error, Result};

/// Tag of a piece in a signed convex decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn times(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// `0.5 * integral of cross(x, x')` along an edge; the shoelace term.
pub(crate) fn edge_area_term(e: &Edge) -> f64 {
    let (a, b, c) = e.coefficients();
    0.5 * (-a.cross(b) / 3.0 + c.cross(a) + c.cross(b))
}

/// Convex region bounded by a closed counter-clockwise loop of edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRegion {
    edges: Vec<Edge>,
}

impl ConvexRegion {
    /// Validates closure (relative gap `1e-9`) and positive orientation.
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Degenerate("region without edges".into()));
        }
        let r = Self { edges };
        let scale = r.bbox().diameter();
        let gap = r.closure_gap();
        if !(gap <= 1e-9 * scale) {
            return Err(Error::OpenPath { gap });
        }
        let area = r.area();
        if !(area > 0.0) {
            return Err(Error::Orientation { area });
        }
        Ok(r)
    }

    /// No validation; for internal constructions that are closed by design.
    pub(crate) fn from_edges_unchecked(edges: Vec<Edge>) -> Self {
        Self { edges }
    }

    pub fn triangle(a: Point, b: Point, c: Point) -> Result<Self> {
        Self::new(vec![Edge::line(a, b), Edge::line(b, c), Edge::line(c, a)])
    }

    pub fn polygon(pts: &[Point]) -> Result<Self> {
        let n = pts.len();
        Self::new((0..n).map(|i| Edge::line(pts[i], pts[(i + 1) % n])).collect())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge start points, in boundary order.
    pub fn vertices(&self) -> Vec<Point> {
        self.edges.iter().map(Edge::start).collect()
    }

    pub fn closure_gap(&self) -> f64 {
        let n = self.edges.len();
        (0..n)
            .map(|i| self.edges[i].end().dist(self.edges[(i + 1) % n].start()))
            .fold(0.0, f64::max)
    }

    /// Signed area from the boundary, exact for lines and quadratic arcs.
    /// Green's-theorem area about the first vertex, so a small closure gap
    /// is not amplified by the distance to the origin.
    pub fn area(&self) -> f64 {
        let o = self.edges[0].start();
        let shift = Point::new(-o.x, -o.y);
        self.edges
            .iter()
            .map(|e| edge_area_term(&e.translated(shift)))
            .sum()
    }

    pub fn bbox(&self) -> BBox {
        self.edges
            .iter()
            .fold(BBox::empty(), |b, e| b.union(&e.bbox()))
    }

    pub fn is_polygon(&self) -> bool {
        self.edges.iter().all(|e| !e.is_arc())
    }

    pub fn translated(&self, by: Point) -> Self {
        Self {
            edges: self.edges.iter().map(|e| e.translated(by)).collect(),
        }
    }

    pub fn reversed_edges(&self) -> Vec<Edge> {
        self.edges.iter().rev().map(Edge::reversed).collect()
    }
}

/// Region between a non-straight arc and its chord.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParabolicSegment {
    pub arc: ParametricArc,
}

impl ParabolicSegment {
    pub fn new(arc: ParametricArc) -> Result<Self> {
        if arc.is_straight() {
            return Err(Error::Degenerate("straight arc has no segment".into()));
        }
        Ok(Self { arc })
    }

    pub fn apex(&self) -> Point {
        self.arc.eval(0.5)
    }

    /// Unsigned area, `(2/3) |chord| |sagitta|`.
    pub fn area(&self) -> f64 {
        2.0 / 3.0 * self.arc.chord().norm() * self.arc.sagitta().abs()
    }

    /// Counter-clockwise boundary of the segment.
    pub fn region(&self) -> ConvexRegion {
        let arc = Edge::Arc(self.arc);
        let chord = Edge::line(self.arc.end(), self.arc.start());
        if self.arc.sagitta() < 0.0 {
            // bulges to the right of start->end: arc first
            ConvexRegion::from_edges_unchecked(vec![arc, chord])
        } else {
            ConvexRegion::from_edges_unchecked(vec![chord.reversed(), arc.reversed()])
        }
    }
}

/// A convex region carrying its decomposition sign.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedPiece {
    pub sign: Sign,
    pub region: ConvexRegion,
}

impl SignedPiece {
    pub fn new(sign: Sign, region: ConvexRegion) -> Self {
        Self { sign, region }
    }

    pub fn signed_area(&self) -> f64 {
        self.sign.value() * self.region.area()
    }
}
