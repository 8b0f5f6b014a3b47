use crate::geometry::Point;
use crate::quadrature::{exponents, mono_count, triangle_points, BivariatePoly};
use crate::{Error, Result};

/// Orthonormal polynomial basis on one straight triangle.
///
/// `phi_i = sum_k L[i][k] m_k(X, Y)` with `L` lower triangular and `m_k` the
/// degree-lexicographic monomials in the scaled local coordinates
/// `X = (x - cx) / h`, `Y = (y - cy) / h` about the centroid, `h = sqrt|K|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementBasis {
    pub centroid: Point,
    pub h: f64,
    pub area: f64,
    degree: usize,
    l: Vec<Vec<f64>>,
}

/// Number of basis functions of degree `k`.
pub const fn basis_size(k: usize) -> usize {
    mono_count(k)
}

impl ElementBasis {
    pub fn new(tri: [Point; 3], degree: usize) -> Result<Self> {
        if !(1..=2).contains(&degree) {
            return Err(Error::Parameter(format!("degree {degree} not in 1..=2")));
        }
        let area = crate::geometry::signed_area(tri[0], tri[1], tri[2]);
        if !(area > 0.0) {
            return Err(Error::DegenerateElement { id: 0, area });
        }
        let centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
        let h = area.sqrt();
        let n = basis_size(degree);
        let mono = |p: Point| -> Vec<f64> {
            let (x, y) = ((p.x - centroid.x) / h, (p.y - centroid.y) / h);
            exponents(degree)
                .map(|(a, b)| x.powi(a as i32) * y.powi(b as i32))
                .collect()
        };
        let mut g = vec![vec![0.0; n]; n];
        for (q, w) in triangle_points(tri) {
            let m = mono(q);
            for i in 0..n {
                for j in 0..=i {
                    g[i][j] += w * m[i] * m[j];
                }
            }
        }
        // Cholesky G = R R^T, then L = R^{-1}.
        let mut r = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| r[i][k] * r[j][k]).sum();
                if i == j {
                    let d = g[i][i] - s;
                    if !(d > 1e-14 * g[i][i]) {
                        return Err(Error::DegenerateElement { id: 0, area });
                    }
                    r[i][i] = d.sqrt();
                } else {
                    r[i][j] = (g[i][j] - s) / r[j][j];
                }
            }
        }
        let mut l = vec![vec![0.0; n]; n];
        for col in 0..n {
            for i in col..n {
                let s: f64 = (col..i).map(|k| r[i][k] * l[k][col]).sum();
                let rhs = if i == col { 1.0 } else { 0.0 };
                l[i][col] = (rhs - s) / r[i][i];
            }
        }
        Ok(Self {
            centroid,
            h,
            area,
            degree,
            l,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        basis_size(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_local(&self, p: Point) -> (f64, f64) {
        ((p.x - self.centroid.x) / self.h, (p.y - self.centroid.y) / self.h)
    }

    /// Lower-triangular transform from scaled monomials to the basis.
    pub fn transform(&self) -> &[Vec<f64>] {
        &self.l
    }

    /// All basis values at `p`.
    pub fn eval_all(&self, p: Point) -> Vec<f64> {
        let (x, y) = self.to_local(p);
        let m: Vec<f64> = exponents(self.degree)
            .map(|(a, b)| x.powi(a as i32) * y.powi(b as i32))
            .collect();
        self.l
            .iter()
            .map(|row| row.iter().zip(&m).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn eval(&self, i: usize, p: Point) -> f64 {
        self.eval_all(p)[i]
    }

    /// `phi_i` as a polynomial in the scaled local coordinates.
    pub fn poly(&self, i: usize) -> BivariatePoly {
        BivariatePoly::from_coeffs(self.l[i].clone())
    }

    /// `sum_i c_i phi_i` as a polynomial in the scaled local coordinates.
    pub fn combine(&self, c: &[f64]) -> BivariatePoly {
        let n = self.len();
        let mut out = vec![0.0; n];
        for (i, ci) in c.iter().enumerate().take(n) {
            for (o, lk) in out.iter_mut().zip(&self.l[i]) {
                *o += ci * lk;
            }
        }
        BivariatePoly::from_coeffs(out)
    }

    /// Basis coefficients of a polynomial given in scaled local coordinates
    /// (must have degree at most the basis degree).
    pub fn coefficients_of(&self, f: &BivariatePoly, tri: [Point; 3]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        for (q, w) in triangle_points(tri) {
            let (x, y) = self.to_local(q);
            let v = f.eval(x, y);
            for (ci, phi) in c.iter_mut().zip(self.eval_all(q)) {
                *ci += w * v * phi;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn gram(b: &ElementBasis, tri: [Point; 3]) -> Vec<Vec<f64>> {
        let n = b.len();
        let mut g = vec![vec![0.0; n]; n];
        for (q, w) in triangle_points(tri) {
            let v = b.eval_all(q);
            for i in 0..n {
                for j in 0..n {
                    g[i][j] += w * v[i] * v[j];
                }
            }
        }
        g
    }

    #[test]
    fn orthonormal_on_skewed_triangle() {
        let tri = [p(0.1, 0.2), p(3.0, 0.5), p(1.0, 0.9)];
        for k in [1, 2] {
            let b = ElementBasis::new(tri, k).unwrap();
            let g = gram(&b, tri);
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-12, "{i} {j} {v}");
                }
            }
        }
    }

    #[test]
    fn constant_mode_on_unit_triangle() {
        let b = ElementBasis::new([p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)], 2).unwrap();
        assert!((b.eval(0, p(0.2, 0.2)) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn translation_invariant_transform() {
        let tri = [p(0.0, 0.0), p(1.0, 0.2), p(0.3, 0.8)];
        let s = p(5.0, -7.0);
        let a = ElementBasis::new(tri, 2).unwrap();
        let b = ElementBasis::new([tri[0] + s, tri[1] + s, tri[2] + s], 2).unwrap();
        for (ra, rb) in a.transform().iter().zip(b.transform()) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() < 1e-11 * (1.0 + x.abs()));
            }
        }
    }
}
