use crate::dg::DgField;
use crate::geometry::{point_in_triangle, Point};
use crate::quadrature::{triangle_points, BivariatePoly};

/// Limiter switches and parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimiterConfig {
    pub weno: bool,
    /// TVB constant of the trouble-cell indicator.
    pub weno_tvb: f64,
    /// Linear weight of the cell's own polynomial.
    pub weno_gamma0: f64,
    pub pp: bool,
    pub pp_epsilon: f64,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self {
            weno: false,
            weno_tvb: 10.0,
            weno_gamma0: 0.997,
            pp: false,
            pp_epsilon: 1e-15,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PpStats {
    pub theta_min: f64,
    pub limited: usize,
    pub clamped: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WenoStats {
    pub flagged: usize,
}

/// Minimum of element `j`'s polynomial over the element and where it is
/// attained: vertices, critical points along the edges, and the interior
/// critical point.
pub fn cell_minimum(field: &DgField, j: usize) -> (f64, Point) {
    let b = field.space().basis(j);
    let p = field.local_poly(j);
    let tri = field.mesh().triangle(j);
    let loc = tri.map(|v| {
        let (x, y) = b.to_local(v);
        Point::new(x, y)
    });
    let f = |q: Point| p.eval(q.x, q.y);
    let mut best = (f(loc[0]), loc[0]);
    let mut consider = |q: Point| {
        let v = f(q);
        if v < best.0 {
            best = (v, q);
        }
    };
    for k in 0..3 {
        let (a, c) = (loc[k], loc[(k + 1) % 3]);
        consider(a);
        if p.degree() >= 2 {
            let (f0, fm, f1) = (f(a), f(a.midpoint(c)), f(c));
            let qa = 2.0 * (f0 - 2.0 * fm + f1);
            let qb = 4.0 * fm - 3.0 * f0 - f1;
            if qa > 0.0 {
                let s = -qb / (2.0 * qa);
                if s > 0.0 && s < 1.0 {
                    consider(a.lerp(c, s));
                }
            }
        }
    }
    if p.degree() >= 2 {
        let (c1, c2) = (p.coeff(1, 0), p.coeff(0, 1));
        let (c3, c4, c5) = (p.coeff(2, 0), p.coeff(1, 1), p.coeff(0, 2));
        let det = 4.0 * c3 * c5 - c4 * c4;
        if det.abs() > 1e-14 * (c3.abs() + c4.abs() + c5.abs()).powi(2) {
            let x = (-c1 * 2.0 * c5 + c2 * c4) / det;
            let y = (-2.0 * c3 * c2 + c4 * c1) / det;
            let q = Point::new(x, y);
            if point_in_triangle(q, loc, 0.0) {
                consider(q);
            }
        }
    }
    let (v, q) = best;
    (v, b.centroid + q * b.h)
}

/// Scales each cell's deviation from its average by
/// `theta = min(1, |(avg - eps) / (avg - min)|)`. Cells with average below
/// `eps` become constant. Averages are untouched.
pub fn apply_pp(field: &mut DgField, eps: f64) -> PpStats {
    let mut stats = PpStats {
        theta_min: 1.0,
        limited: 0,
        clamped: 0,
    };
    for j in 0..field.mesh().len() {
        let avg = field.cell_average(j);
        if avg < eps {
            let c = field.coeffs_mut(j);
            if c[1..].iter().any(|&x| x != 0.0) {
                c[1..].iter_mut().for_each(|x| *x = 0.0);
                stats.clamped += 1;
                stats.theta_min = stats.theta_min.min(0.0);
            }
            continue;
        }
        let (v, _) = cell_minimum(field, j);
        if v >= eps {
            continue;
        }
        let theta = ((avg - eps) / (avg - v)).abs().min(1.0);
        if theta < 1.0 {
            field.coeffs_mut(j)[1..].iter_mut().for_each(|x| *x *= theta);
            stats.limited += 1;
            stats.theta_min = stats.theta_min.min(theta);
        }
    }
    stats
}

/// Mean over element `j` of the squared local-coordinate derivatives of
/// `p` (given in `j`'s local frame) of order one up to the degree.
fn smoothness(field: &DgField, j: usize, p: &BivariatePoly) -> f64 {
    let b = field.space().basis(j);
    let mut ders = Vec::new();
    let mut level = vec![p.clone()];
    for _ in 0..p.degree() {
        let mut next = Vec::new();
        for q in &level {
            next.push(q.derivative_x());
            next.push(q.derivative_y());
        }
        ders.extend(next.iter().cloned());
        level = next;
    }
    let mut s = 0.0;
    for (q, w) in triangle_points(field.mesh().triangle(j)) {
        let (x, y) = b.to_local(q);
        s += w * ders.iter().map(|d| d.eval(x, y).powi(2)).sum::<f64>();
    }
    s / b.area
}

/// Trouble cells: some edge midpoint value leaves the range of the
/// neighbouring averages, deviating from the cell average by more than the
/// TVB allowance `M r^2` with `r` the inscribed radius.
fn is_troubled(field: &DgField, j: usize, m_tvb: f64) -> bool {
    let el = field.mesh().element(j);
    let avg = field.cell_average(j);
    let (mut lo, mut hi) = (avg, avg);
    for n in el.neighbors.iter().flatten() {
        let a = field.cell_average(*n);
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let allowance = m_tvb * el.r * el.r;
    let tri = field.mesh().triangle(j);
    (0..3).any(|k| {
        let v = field.eval_unchecked(j, tri[k].midpoint(tri[(k + 1) % 3]));
        (v - avg).abs() > allowance && (v > hi || v < lo)
    })
}

/// In trouble cells, replaces the polynomial by a smoothness-weighted blend
/// of itself and the neighbours' polynomials shifted to the cell's average.
/// Reads only the input field.
pub fn apply_weno(field: &DgField, cfg: &LimiterConfig) -> (DgField, WenoStats) {
    let mut out = field.clone();
    let mut flagged = 0;
    let mesh = field.mesh();
    for j in 0..mesh.len() {
        if !is_troubled(field, j, cfg.weno_tvb) {
            continue;
        }
        flagged += 1;
        let b = field.space().basis(j);
        let tri = mesh.triangle(j);
        let avg = field.cell_average(j);
        let mut polys = vec![field.local_poly(j)];
        for &n in mesh.element(j).neighbors.iter().flatten() {
            let bn = field.space().basis(n);
            let pn = field.local_poly(n).affine(
                b.h / bn.h,
                (b.centroid.x - bn.centroid.x) / bn.h,
                b.h / bn.h,
                (b.centroid.y - bn.centroid.y) / bn.h,
            );
            let mean = triangle_points(tri)
                .map(|(q, w)| {
                    let (x, y) = b.to_local(q);
                    w * pn.eval(x, y)
                })
                .sum::<f64>()
                / b.area;
            polys.push(&pn + &BivariatePoly::constant(avg - mean));
        }
        let nn = polys.len() - 1;
        let gamma: Vec<f64> = (0..polys.len())
            .map(|i| {
                if i == 0 {
                    if nn == 0 {
                        1.0
                    } else {
                        cfg.weno_gamma0
                    }
                } else {
                    (1.0 - cfg.weno_gamma0) / nn as f64
                }
            })
            .collect();
        let scale = avg.abs().max(1e-300);
        let w: Vec<f64> = polys
            .iter()
            .zip(&gamma)
            .map(|(p, g)| g / (1e-6 * scale * scale + smoothness(field, j, p)).powi(2))
            .collect();
        let wsum: f64 = w.iter().sum();
        let mut blend = BivariatePoly::zero(field.degree());
        for (p, wi) in polys.iter().zip(&w) {
            blend = &blend + &p.scaled(wi / wsum);
        }
        let mut c = b.coefficients_of(&blend, tri);
        c[0] = field.coeffs(j)[0];
        out.coeffs_mut(j).copy_from_slice(&c);
    }
    (out, WenoStats { flagged })
}
