use super::roots::quadratic_roots;
use super::Point;

/// Cubic plane curve `x(t) = a t^3 + b t^2 + c t + d`, `t in [0, 1]`.
///
/// Only the inflection predicate is provided; cubic edges are not clipped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicEdge {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
}

impl CubicEdge {
    pub const fn new(a: Point, b: Point, c: Point, d: Point) -> Self {
        Self { a, b, c, d }
    }

    pub fn eval(&self, t: f64) -> Point {
        ((self.a * t + self.b) * t + self.c) * t + self.d
    }

    pub fn deriv(&self, t: f64) -> Point {
        (self.a * (3.0 * t) + self.b * 2.0) * t + self.c
    }

    pub fn second_deriv(&self, t: f64) -> Point {
        self.a * (6.0 * t) + self.b * 2.0
    }

    /// Signed curvature numerator `x' x y''`.
    pub fn curvature_numerator(&self, t: f64) -> f64 {
        self.deriv(t).cross(self.second_deriv(t))
    }
}

/// Parameters in `[0, 1]` where the cubic changes turning direction: the roots
/// of `6(ay bx - ax by) t^2 + 6(ay cx - ax cy) t + 2(by cx - bx cy)`.
pub fn inflection_params_cubic(e: &CubicEdge) -> Vec<f64> {
    let (a, b, c) = (e.a, e.b, e.c);
    let c2 = 6.0 * (a.y * b.x - a.x * b.y);
    let c1 = 6.0 * (a.y * c.x - a.x * c.y);
    let c0 = 2.0 * (b.y * c.x - b.x * c.y);
    let mut out: Vec<f64> = quadratic_roots(c0, c1, c2)
        .into_iter()
        .filter(|t| (-1e-12..=1.0 + 1e-12).contains(t))
        .map(|t| t.clamp(0.0, 1.0))
        .collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn pure_cubic_inflects_at_zero() {
        let e = CubicEdge::new(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0));
        assert_eq!(inflection_params_cubic(&e), vec![0.0]);
    }

    #[test]
    fn quadratic_in_disguise_has_at_most_one() {
        let e = CubicEdge::new(p(0.0, 0.0), p(0.3, -1.0), p(1.0, 0.5), p(0.0, 0.0));
        assert!(inflection_params_cubic(&e).len() <= 1);
    }

    #[test]
    fn reported_params_match_curvature_sign_change() {
        // y = (x - 0.4)^3 over x in [0, 1]
        let e = CubicEdge::new(p(0.0, 1.0), p(0.0, -1.2), p(1.0, 0.48), p(0.0, -0.064));
        let r = inflection_params_cubic(&e);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.4).abs() < 1e-12);
        let k = |t: f64| e.curvature_numerator(t);
        assert!(k(0.39) * k(0.41) < 0.0);
    }
}
