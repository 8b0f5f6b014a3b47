use nalgebra::{DMatrix, DVector};

use super::upstream::{eulerian_points, UpstreamElement};
use crate::dg::ElementBasis;
use crate::geometry::Point;
use crate::quadrature::{exponents, mono_count, BivariatePoly};
use crate::{Error, Result};

/// Quadratic in the local coordinates `((x - cx) / h, (y - cy) / h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointPoly {
    pub center: Point,
    pub h: f64,
    pub poly: BivariatePoly,
}

impl AdjointPoly {
    pub fn eval(&self, p: Point) -> f64 {
        self.poly
            .eval((p.x - self.center.x) / self.h, (p.y - self.center.y) / self.h)
    }

    /// The same function in the frame `((x - c) / s, (y - c) / s)`.
    pub fn in_frame(&self, c: Point, s: f64) -> BivariatePoly {
        let r = s / self.h;
        self.poly.affine(
            r,
            (c.x - self.center.x) / self.h,
            r,
            (c.y - self.center.y) / self.h,
        )
    }
}

/// Least-squares map from values at the seven Eulerian fit points to a
/// quadratic on the upstream element matching them at the traced points.
#[derive(Clone, Debug)]
pub struct AdjointFit {
    center: Point,
    h: f64,
    /// `6 x 7` pseudo-inverse of the collocation matrix.
    pinv: DMatrix<f64>,
    eulerian: [Point; 7],
}

/// Smallest accepted ratio of extreme singular values.
const MIN_SIGMA_RATIO: f64 = 1e-10;

impl AdjointFit {
    /// `tri` is the Eulerian element the upstream element was traced from.
    pub fn new(tri: [Point; 3], up: &UpstreamElement) -> Result<Self> {
        let area = crate::geometry::signed_area(tri[0], tri[1], tri[2]).abs();
        let h = area.sqrt();
        let center = up.barycenter;
        let pts = up.fit_points();
        let n = mono_count(2);
        let a = DMatrix::from_fn(7, n, |q, k| {
            let (p, e) = exponents(2).nth(k).expect("index below count");
            let x = (pts[q].x - center.x) / h;
            let y = (pts[q].y - center.y) / h;
            x.powi(p as i32) * y.powi(e as i32)
        });
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > MIN_SIGMA_RATIO * smax) {
            return Err(Error::Conditioning {
                element: up.id,
                sigma: smin / smax,
            });
        }
        let pinv = svd
            .pseudo_inverse(0.0)
            .map_err(|e| Error::Degenerate(e.to_string()))?;
        Ok(Self {
            center,
            h,
            pinv,
            eulerian: eulerian_points(tri),
        })
    }

    /// Quadratic matching `values[q]` at traced fit point `q`.
    pub fn fit(&self, values: &[f64; 7]) -> AdjointPoly {
        let c = &self.pinv * DVector::from_column_slice(values);
        AdjointPoly {
            center: self.center,
            h: self.h,
            poly: BivariatePoly::from_coeffs(c.iter().copied().collect()),
        }
    }

    /// Fits `f` sampled at the Eulerian points.
    pub fn fit_fn(&self, f: impl Fn(Point) -> f64) -> AdjointPoly {
        self.fit(&self.eulerian.map(f))
    }

    /// One adjoint per basis function of `basis`.
    pub fn adjoints(&self, basis: &ElementBasis) -> Vec<AdjointPoly> {
        let vals: Vec<Vec<f64>> = self.eulerian.iter().map(|&p| basis.eval_all(p)).collect();
        (0..basis.len())
            .map(|m| {
                let mut v = [0.0; 7];
                for (dst, row) in v.iter_mut().zip(&vals) {
                    *dst = row[m];
                }
                self.fit(&v)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::circle_mesh;
    use crate::transport::{build_upstream, TraceConfig, UpstreamShape, Velocity};
    use std::f64::consts::PI;

    fn quad(p: Point) -> f64 {
        0.3 - p.x + 2.0 * p.y + 0.5 * p.x * p.x - 1.5 * p.x * p.y + 0.7 * p.y * p.y
    }

    fn setup(v: &Velocity, dt: f64, j: usize) -> ([Point; 3], UpstreamElement) {
        let m = circle_mesh(3, PI, 0.1, 2);
        let up = build_upstream(&m, j, v, dt, 0.0, TraceConfig::default(), UpstreamShape::Curved)
            .unwrap();
        (m.triangle(j), up)
    }

    #[test]
    fn constant_is_exact() {
        let (tri, up) = setup(&Velocity::Swirling { period: 1.5 }, 0.3, 17);
        let fit = AdjointFit::new(tri, &up).unwrap().fit_fn(|_| 1.0);
        for p in up.fit_points() {
            assert!((fit.eval(p) - 1.0).abs() < 1e-13);
        }
        assert!((fit.poly.coeff(0, 0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn translation_pullback() {
        let (a, b, dt) = (0.4, -0.3, 0.5);
        let (tri, up) = setup(&Velocity::Constant { a, b }, dt, 8);
        let fit = AdjointFit::new(tri, &up).unwrap().fit_fn(quad);
        for p in [Point::new(0.1, 0.2), Point::new(-0.5, 0.9), up.barycenter] {
            let want = quad(p + Point::new(a * dt, b * dt));
            assert!((fit.eval(p) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_pullback() {
        let dt: f64 = 0.9;
        let tri = circle_mesh(3, PI, 0.1, 2).triangle(30);
        let rot = |p: Point| {
            let (s, c) = dt.sin_cos();
            Point::new(c * p.x - s * p.y, s * p.x + c * p.y)
        };
        // Tight tracing makes the pullback exact in P2.
        let exact = TraceConfig { substeps: 200 };
        let m = circle_mesh(3, PI, 0.1, 2);
        let up = build_upstream(&m, 30, &Velocity::RigidRotation, dt, 0.0, exact, UpstreamShape::Curved)
            .unwrap();
        let fit = AdjointFit::new(tri, &up).unwrap().fit_fn(quad);
        for p in [Point::new(0.4, 0.4), up.barycenter] {
            assert!((fit.eval(p) - quad(rot(p))).abs() < 1e-10);
        }
    }

    #[test]
    fn frame_change_preserves_values() {
        let (tri, up) = setup(&Velocity::Swirling { period: 1.5 }, 0.3, 4);
        let fit = AdjointFit::new(tri, &up).unwrap().fit_fn(quad);
        let (c, s) = (Point::new(1.0, -2.0), 0.37);
        let g = fit.in_frame(c, s);
        let p = Point::new(0.2, 0.6);
        assert!((g.eval((p.x - c.x) / s, (p.y - c.y) / s) - fit.eval(p)).abs() < 1e-12);
    }

    #[test]
    fn collapsed_upstream_rejected() {
        let (tri, mut up) = setup(&Velocity::Constant { a: 0.0, b: 0.0 }, 0.1, 0);
        let p = up.nodes[0];
        up.nodes = [p; 6];
        up.barycenter = p;
        assert!(matches!(
            AdjointFit::new(tri, &up),
            Err(Error::Conditioning { .. })
        ));
    }
}
