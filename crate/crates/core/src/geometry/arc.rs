use super::{BBox, Point};
use crate::{Error, Result};

/// Arcs whose sagitta is below this fraction of the chord length are treated
/// as straight.
pub const STRAIGHT_REL_TOL: f64 = 1e-9;

/// Quadratic plane curve `x(t) = a t^2 + b t + c` (componentwise), `t in [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParametricArc {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl ParametricArc {
    pub const fn new(a: Point, b: Point, c: Point) -> Self {
        Self { a, b, c }
    }

    /// Per-coordinate coefficient triples `(a^x, b^x, c^x)`, `(a^y, b^y, c^y)`.
    pub fn from_coefficients(x: [f64; 3], y: [f64; 3]) -> Self {
        Self::new(
            Point::new(x[0], y[0]),
            Point::new(x[1], y[1]),
            Point::new(x[2], y[2]),
        )
    }

    /// The quadratic with `x(0) = start`, `x(1/2) = mid`, `x(1) = end`.
    ///
    /// This is the TRIA6 isoparametric map restricted to one side of the
    /// reference triangle.
    pub fn through(start: Point, mid: Point, end: Point) -> Result<Self> {
        let scale = start.dist(end).max(start.dist(mid)).max(mid.dist(end));
        let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
        if start.dist(end) <= tiny || start.dist(mid) <= tiny || mid.dist(end) <= tiny {
            return Err(Error::Degenerate(format!(
                "coincident arc nodes {start:?} {mid:?} {end:?}"
            )));
        }
        let a = (start + end - mid * 2.0) * 2.0;
        let b = mid * 4.0 - start * 3.0 - end;
        Ok(Self::new(a, b, start))
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Point {
        Point::new(
            (self.a.x * t + self.b.x) * t + self.c.x,
            (self.a.y * t + self.b.y) * t + self.c.y,
        )
    }

    #[inline]
    pub fn deriv(&self, t: f64) -> Point {
        self.a * (2.0 * t) + self.b
    }

    pub fn start(&self) -> Point {
        self.c
    }

    pub fn end(&self) -> Point {
        self.a + self.b + self.c
    }

    pub fn chord(&self) -> Point {
        self.a + self.b
    }

    /// Signed offset of the arc midpoint from the chord, along the chord's
    /// left normal. Positive when the arc bulges to the left of start->end.
    pub fn sagitta(&self) -> f64 {
        let d = self.chord();
        let len = d.norm();
        if len == 0.0 {
            return 0.0;
        }
        // x(t) - chord(t) = -a t (1 - t)
        -d.cross(self.a) / (4.0 * len)
    }

    pub fn is_straight(&self) -> bool {
        let len = self.chord().norm();
        self.sagitta().abs() <= STRAIGHT_REL_TOL * len
    }

    /// Reparametrize the restriction to `[t0, t1]` onto `[0, 1]`.
    pub fn sub(&self, t0: f64, t1: f64) -> Self {
        let dt = t1 - t0;
        // x(t0 + s dt) = a dt^2 s^2 + (2 a t0 + b) dt s + x(t0)
        Self::new(
            self.a * (dt * dt),
            (self.a * (2.0 * t0) + self.b) * dt,
            self.eval(t0),
        )
    }

    pub fn reversed(&self) -> Self {
        self.sub(1.0, 0.0)
    }

    pub fn bbox(&self) -> BBox {
        let mut bb = BBox::from_points([self.start(), self.end()]);
        for (a, b) in [(self.a.x, self.b.x), (self.a.y, self.b.y)] {
            if a != 0.0 {
                let t = -b / (2.0 * a);
                if t > 0.0 && t < 1.0 {
                    bb.include(self.eval(t));
                }
            }
        }
        bb
    }
}

/// Straight segment `p0 + t (p1 - p0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub p0: Point,
    pub p1: Point,
}

impl Segment {
    pub const fn new(p0: Point, p1: Point) -> Self {
        Self { p0, p1 }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Point {
        self.p0 + (self.p1 - self.p0) * t
    }

    pub fn dir(&self) -> Point {
        self.p1 - self.p0
    }

    pub fn len(&self) -> f64 {
        self.dir().norm()
    }
}

/// Boundary edge of a region, oriented along increasing parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Edge {
    Line(Segment),
    Arc(ParametricArc),
}

impl Edge {
    pub fn line(p0: Point, p1: Point) -> Self {
        Edge::Line(Segment::new(p0, p1))
    }

    /// Arc through three points, collapsed to a line when straight.
    pub fn arc_or_line(start: Point, mid: Point, end: Point) -> Result<Self> {
        let arc = ParametricArc::through(start, mid, end)?;
        Ok(Edge::from_arc(arc))
    }

    pub fn from_arc(arc: ParametricArc) -> Self {
        if arc.is_straight() {
            Edge::line(arc.start(), arc.end())
        } else {
            Edge::Arc(arc)
        }
    }

    /// Quadratic coefficients `(a, b, c)`; lines have `a = 0`.
    #[inline]
    pub fn coefficients(&self) -> (Point, Point, Point) {
        match self {
            Edge::Line(s) => (Point::default(), s.p1 - s.p0, s.p0),
            Edge::Arc(a) => (a.a, a.b, a.c),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Point {
        match self {
            Edge::Line(s) => s.eval(t),
            Edge::Arc(a) => a.eval(t),
        }
    }

    #[inline]
    pub fn deriv(&self, t: f64) -> Point {
        match self {
            Edge::Line(s) => s.dir(),
            Edge::Arc(a) => a.deriv(t),
        }
    }

    pub fn start(&self) -> Point {
        match self {
            Edge::Line(s) => s.p0,
            Edge::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Edge::Line(s) => s.p1,
            Edge::Arc(a) => a.end(),
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, Edge::Arc(_))
    }

    pub fn chord_len(&self) -> f64 {
        self.start().dist(self.end())
    }

    pub fn sub(&self, t0: f64, t1: f64) -> Edge {
        match self {
            Edge::Line(s) => Edge::line(s.eval(t0), s.eval(t1)),
            Edge::Arc(a) => Edge::Arc(a.sub(t0, t1)),
        }
    }

    pub fn reversed(&self) -> Edge {
        match self {
            Edge::Line(s) => Edge::line(s.p1, s.p0),
            Edge::Arc(a) => Edge::Arc(a.reversed()),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            Edge::Line(s) => BBox::from_points([s.p0, s.p1]),
            Edge::Arc(a) => a.bbox(),
        }
    }

    pub fn translated(&self, by: Point) -> Edge {
        match self {
            Edge::Line(s) => Edge::line(s.p0 + by, s.p1 + by),
            Edge::Arc(a) => Edge::Arc(ParametricArc::new(a.a, a.b, a.c + by)),
        }
    }

    /// Parameter of the point of this edge nearest `p`, if that point is
    /// within `tol` of `p`.
    pub fn locate(&self, p: Point, tol: f64) -> Option<f64> {
        match self {
            Edge::Line(s) => {
                let d = s.dir();
                let l2 = d.norm2();
                if l2 == 0.0 {
                    return None;
                }
                let t = (p - s.p0).dot(d) / l2;
                let pad = tol / l2.sqrt();
                if t < -pad || t > 1.0 + pad {
                    return None;
                }
                let t = t.clamp(0.0, 1.0);
                (s.eval(t).dist(p) <= tol).then_some(t)
            }
            Edge::Arc(arc) => {
                // Newton on (x(t) - p) . x'(t) = 0 from the chord projection.
                let d = arc.chord();
                let l2 = d.norm2();
                let mut t = ((p - arc.c).dot(d) / l2).clamp(-0.1, 1.1);
                for _ in 0..20 {
                    let r = arc.eval(t) - p;
                    let dx = arc.deriv(t);
                    let g = r.dot(dx);
                    let dg = dx.norm2() + r.dot(arc.a * 2.0);
                    if dg.abs() < 1e-300 {
                        break;
                    }
                    let step = g / dg;
                    t -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                let pad = tol / l2.sqrt();
                if !(t >= -pad && t <= 1.0 + pad) {
                    return None;
                }
                let t = t.clamp(0.0, 1.0);
                (arc.eval(t).dist(p) <= tol).then_some(t)
            }
        }
    }

    /// Polyline with `n + 1` samples, for debug dumps.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..=n).map(|i| self.eval(i as f64 / n as f64)).collect()
    }
}
