//! Discontinuous piecewise polynomials on a triangular mesh.

mod basis;

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

pub use basis::{basis_size, ElementBasis};

use crate::geometry::{point_in_triangle, Point};
use crate::mesh::Mesh;
use crate::quadrature::{triangle_points, BivariatePoly};
use crate::{Error, Result};

/// Mesh plus one orthonormal basis per element.
#[derive(Debug)]
pub struct DgSpace {
    mesh: Arc<Mesh>,
    degree: usize,
    bases: Vec<ElementBasis>,
}

impl DgSpace {
    pub fn new(mesh: Arc<Mesh>, degree: usize) -> Result<Arc<Self>> {
        let bases = (0..mesh.len())
            .map(|j| {
                ElementBasis::new(mesh.triangle(j), degree).map_err(|e| match e {
                    Error::DegenerateElement { area, .. } => Error::DegenerateElement { id: j, area },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Self { mesh, degree, bases }))
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Basis functions per element.
    pub fn n_basis(&self) -> usize {
        basis_size(self.degree)
    }

    pub fn basis(&self, j: usize) -> &ElementBasis {
        &self.bases[j]
    }

    pub fn zero(self: &Arc<Self>) -> DgField {
        DgField {
            space: Arc::clone(self),
            coeffs: vec![0.0; self.mesh.len() * self.n_basis()],
        }
    }

    /// L2 projection with the degree-6 triangle rule.
    pub fn project(self: &Arc<Self>, f: impl Fn(f64, f64) -> f64) -> DgField {
        let n = self.n_basis();
        let mut field = self.zero();
        for j in 0..self.mesh.len() {
            let b = &self.bases[j];
            let c = &mut field.coeffs[j * n..(j + 1) * n];
            for (q, w) in triangle_points(self.mesh.triangle(j)) {
                let v = w * f(q.x, q.y);
                for (ci, phi) in c.iter_mut().zip(b.eval_all(q)) {
                    *ci += v * phi;
                }
            }
        }
        field
    }
}

/// Errors of a field against a reference function. `l1` and `l2` are
/// normalised by the mesh area: `int |e| / |D|` and `sqrt(int e^2 / |D|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    /// Per-element integrals `int_K |e|`.
    pub per_element: Vec<f64>,
}

/// Coefficients of a function in a [`DgSpace`], element-major.
#[derive(Clone, Debug)]
pub struct DgField {
    space: Arc<DgSpace>,
    coeffs: Vec<f64>,
}

impl DgField {
    pub fn from_coeffs(space: Arc<DgSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.mesh.len() * space.n_basis() {
            return Err(Error::Parameter(format!(
                "expected {} coefficients, got {}",
                space.mesh.len() * space.n_basis(),
                coeffs.len()
            )));
        }
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn mesh(&self) -> &Mesh {
        &self.space.mesh
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn all_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn all_coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn coeffs(&self, j: usize) -> &[f64] {
        let n = self.space.n_basis();
        &self.coeffs[j * n..(j + 1) * n]
    }

    pub fn coeffs_mut(&mut self, j: usize) -> &mut [f64] {
        let n = self.space.n_basis();
        &mut self.coeffs[j * n..(j + 1) * n]
    }

    /// Value at `p`, which must lie in element `j` (closed, relative
    /// tolerance `1e-10`).
    pub fn evaluate(&self, j: usize, p: Point) -> Result<f64> {
        let tri = self.mesh().triangle(j);
        let tol = 1e-10 * self.mesh().element(j).diameter;
        if !point_in_triangle(p, tri, tol) {
            return Err(Error::Containment {
                element: j,
                x: p.x,
                y: p.y,
            });
        }
        Ok(self.eval_unchecked(j, p))
    }

    /// Value of element `j`'s polynomial at any point.
    pub fn eval_unchecked(&self, j: usize, p: Point) -> f64 {
        self.space.bases[j]
            .eval_all(p)
            .iter()
            .zip(self.coeffs(j))
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Element `j`'s polynomial in its scaled local coordinates.
    pub fn local_poly(&self, j: usize) -> BivariatePoly {
        self.space.bases[j].combine(self.coeffs(j))
    }

    pub fn cell_average(&self, j: usize) -> f64 {
        self.coeffs(j)[0] / self.space.bases[j].area.sqrt()
    }

    pub fn total_mass(&self) -> f64 {
        (0..self.mesh().len())
            .map(|j| self.coeffs(j)[0] * self.space.bases[j].area.sqrt())
            .sum()
    }

    /// `a * self + b * other` on the same space.
    pub fn lin_comb(&self, a: f64, other: &DgField, b: f64) -> DgField {
        assert!(Arc::ptr_eq(&self.space, &other.space), "fields on different spaces");
        DgField {
            space: Arc::clone(&self.space),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// Area-normalised norms of `self - exact`, with the degree-6 rule on each element split
    /// into `subdiv^2` congruent sub-triangles.
    pub fn error_norms(&self, exact: impl Fn(f64, f64) -> f64, subdiv: usize) -> NormReport {
        let s = subdiv.max(1);
        let mut per_element = Vec::with_capacity(self.mesh().len());
        let (mut l2, mut linf) = (0.0f64, 0.0f64);
        for j in 0..self.mesh().len() {
            let t = self.mesh().triangle(j);
            let mut e1 = 0.0;
            for sub in sub_triangles(t, s) {
                for (q, w) in triangle_points(sub) {
                    let d = (self.eval_unchecked(j, q) - exact(q.x, q.y)).abs();
                    e1 += w * d;
                    l2 += w * d * d;
                    linf = linf.max(d);
                }
            }
            per_element.push(e1);
        }
        let area = self.mesh().total_area();
        NormReport {
            l1: per_element.iter().sum::<f64>() / area,
            l2: (l2 / area).sqrt(),
            linf,
            per_element,
        }
    }

    /// Minimum of the cell averages.
    pub fn min_cell_average(&self) -> f64 {
        (0..self.mesh().len())
            .map(|j| self.cell_average(j))
            .fold(f64::INFINITY, f64::min)
    }

    /// Header `degree k ne`, then one `elem_id m coeff` line per coefficient.
    pub fn to_dump(&self) -> String {
        let n = self.space.n_basis();
        let mut s = String::with_capacity(self.coeffs.len() * 32);
        let _ = writeln!(s, "degree {} {}", self.degree(), self.mesh().len());
        for j in 0..self.mesh().len() {
            for m in 0..n {
                let _ = writeln!(s, "{j} {m} {:.17e}", self.coeffs[j * n + m]);
            }
        }
        s
    }

    pub fn write_dump(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_dump())?;
        Ok(())
    }

    pub fn parse_dump(space: Arc<DgSpace>, text: &str) -> Result<DgField> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (ln, head) = lines.next().ok_or_else(|| bad(0, "empty dump"))?;
        let h: Vec<&str> = head.split_whitespace().collect();
        if h.len() != 3 || h[0] != "degree" {
            return Err(bad(ln, "expected 'degree k ne'"));
        }
        let k: usize = h[1].parse().map_err(|_| bad(ln, "bad degree"))?;
        let ne: usize = h[2].parse().map_err(|_| bad(ln, "bad element count"))?;
        if k != space.degree || ne != space.mesh.len() {
            return Err(bad(ln, "dump does not match the space"));
        }
        let mut field = space.zero();
        let n = space.n_basis();
        for (ln, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(ln, "expected 'elem_id m coeff'"));
            }
            let j: usize = f[0].parse().map_err(|_| bad(ln, "bad element id"))?;
            let m: usize = f[1].parse().map_err(|_| bad(ln, "bad mode"))?;
            let c: f64 = f[2].parse().map_err(|_| bad(ln, "bad coefficient"))?;
            if j >= ne || m >= n {
                return Err(bad(ln, "index out of range"));
            }
            field.coeffs[j * n + m] = c;
        }
        Ok(field)
    }
}

/// The `s^2` congruent sub-triangles of `t`.
pub fn sub_triangles(t: [Point; 3], s: usize) -> Vec<[Point; 3]> {
    let node = |i: usize, k: usize| {
        let (a, b) = (i as f64 / s as f64, k as f64 / s as f64);
        t[0] + (t[1] - t[0]) * a + (t[2] - t[0]) * b
    };
    let mut out = Vec::with_capacity(s * s);
    for i in 0..s {
        for k in 0..s - i {
            out.push([node(i, k), node(i + 1, k), node(i, k + 1)]);
            if i + k + 1 < s {
                out.push([node(i + 1, k), node(i + 1, k + 1), node(i, k + 1)]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::circle_mesh;
    use std::f64::consts::PI;

    fn unit() -> Arc<Mesh> {
        Arc::new(Mesh::parse("3 1\n0 0\n1 0\n0 1\n0 1 2\n").unwrap())
    }

    #[test]
    fn projection_reproduces_quadratics() {
        let mesh = Arc::new(circle_mesh(3, 1.0, 0.1, 5));
        let sp = DgSpace::new(mesh.clone(), 2).unwrap();
        let f = |x: f64, y: f64| 1.0 - 2.0 * x + 0.5 * y + 3.0 * x * x - x * y + 0.25 * y * y;
        let u = sp.project(f);
        for j in [0, 7, 20] {
            let c = mesh.element(j).centroid;
            let q = c + Point::new(0.01, -0.02);
            assert!((u.evaluate(j, q).unwrap() - f(q.x, q.y)).abs() < 1e-12);
        }
        assert!(u.error_norms(f, 1).linf < 1e-12);
    }

    #[test]
    fn zero_and_constant_fields() {
        let sp = DgSpace::new(unit(), 1).unwrap();
        assert!(sp.project(|_, _| 0.0).all_coeffs().iter().all(|&c| c == 0.0));
        let one = sp.project(|_, _| 1.0);
        assert!((one.total_mass() - 0.5).abs() < 1e-15);
        assert!((one.evaluate(0, Point::new(0.2, 0.3)).unwrap() - 1.0).abs() < 1e-14);
        assert!(one.evaluate(0, Point::new(2.0, 2.0)).is_err());
    }

    #[test]
    fn norms_of_zero_field_against_one() {
        let sp = DgSpace::new(unit(), 2).unwrap();
        let r = sp.zero().error_norms(|_, _| 1.0, 2);
        assert!((r.l1 - 1.0).abs() < 1e-14);
        assert!((r.l2 - 1.0).abs() < 1e-14);
        assert!((r.per_element[0] - 0.5).abs() < 1e-14);
        assert_eq!(r.linf, 1.0);
    }

    #[test]
    fn dump_round_trip() {
        let mesh = Arc::new(circle_mesh(2, PI, 0.0, 0));
        let sp = DgSpace::new(mesh, 2).unwrap();
        let u = sp.project(|x, y| (x * y).sin());
        let text = u.to_dump();
        assert!(text.starts_with("degree 2 24\n"));
        let v = DgField::parse_dump(sp.clone(), &text).unwrap();
        assert_eq!(u.all_coeffs(), v.all_coeffs());
    }

    #[test]
    fn sub_triangles_tile() {
        let t = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 1.0)];
        let subs = sub_triangles(t, 3);
        assert_eq!(subs.len(), 9);
        let a: f64 = subs
            .iter()
            .map(|s| crate::geometry::signed_area(s[0], s[1], s[2]))
            .sum();
        assert!((a - 1.0).abs() < 1e-15);
    }
}
