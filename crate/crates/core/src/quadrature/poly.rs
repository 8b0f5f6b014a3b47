use std::ops::{Add, Mul};

/// Index of `x^p y^q` in degree-lexicographic order
/// `[1, x, y, x^2, xy, y^2, x^3, ...]`.
#[inline]
pub const fn mono_index(p: usize, q: usize) -> usize {
    let d = p + q;
    d * (d + 1) / 2 + q
}

/// Number of monomials of total degree at most `d`.
#[inline]
pub const fn mono_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Exponents `(p, q)` of the monomials up to degree `d`, in index order.
pub fn exponents(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=d).flat_map(|k| (0..=k).map(move |q| (k - q, q)))
}

/// Dense bivariate polynomial `sum c_pq x^p y^q` of total degree `<= degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly {
    degree: usize,
    coeffs: Vec<f64>,
}

impl BivariatePoly {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; mono_count(degree)],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// Coefficients in degree-lexicographic order; the length fixes the degree.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        let mut degree = 0;
        while mono_count(degree) < coeffs.len() {
            degree += 1;
        }
        let mut coeffs = coeffs;
        coeffs.resize(mono_count(degree), 0.0);
        Self { degree, coeffs }
    }

    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let degree = terms.iter().map(|&(p, q, _)| p + q).max().unwrap_or(0);
        let mut r = Self::zero(degree);
        for &(p, q, c) in terms {
            r.coeffs[mono_index(p, q)] += c;
        }
        r
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize, q: usize) -> f64 {
        if p + q > self.degree {
            0.0
        } else {
            self.coeffs[mono_index(p, q)]
        }
    }

    pub fn coeff_mut(&mut self, p: usize, q: usize) -> &mut f64 {
        assert!(p + q <= self.degree, "monomial beyond degree");
        &mut self.coeffs[mono_index(p, q)]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in x for each y-power, then in y.
        let d = self.degree;
        let mut acc = 0.0;
        for q in (0..=d).rev() {
            let mut row = 0.0;
            for p in (0..=d - q).rev() {
                row = row * x + self.coeffs[mono_index(p, q)];
            }
            acc = acc * y + row;
        }
        acc
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn with_degree(&self, d: usize) -> Self {
        let mut r = Self::zero(d.max(self.degree));
        for (p, q) in exponents(self.degree) {
            r.coeffs[mono_index(p, q)] = self.coeff(p, q);
        }
        r
    }

    /// `Q` with `dQ/dx = self` and `Q(0, y) = 0`.
    pub fn antiderivative_x(&self) -> Self {
        let mut r = Self::zero(self.degree + 1);
        for (p, q) in exponents(self.degree) {
            r.coeffs[mono_index(p + 1, q)] = self.coeff(p, q) / (p + 1) as f64;
        }
        r
    }

    pub fn derivative_x(&self) -> Self {
        let mut r = Self::zero(self.degree.saturating_sub(1));
        for (p, q) in exponents(self.degree) {
            if p > 0 {
                r.coeffs[mono_index(p - 1, q)] = p as f64 * self.coeff(p, q);
            }
        }
        r
    }

    pub fn derivative_y(&self) -> Self {
        let mut r = Self::zero(self.degree.saturating_sub(1));
        for (p, q) in exponents(self.degree) {
            if q > 0 {
                r.coeffs[mono_index(p, q - 1)] = q as f64 * self.coeff(p, q);
            }
        }
        r
    }

    /// `self(ax x + bx, ay y + by)`.
    pub fn affine(&self, ax: f64, bx: f64, ay: f64, by: f64) -> Self {
        let d = self.degree;
        // Powers (ax x + bx)^p as univariate coefficient lists.
        let pow = |a: f64, b: f64| {
            let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
            for k in 1..=d {
                let prev = &out[k - 1];
                let mut next = vec![0.0; k + 1];
                for (i, &c) in prev.iter().enumerate() {
                    next[i] += b * c;
                    next[i + 1] += a * c;
                }
                out.push(next);
            }
            out
        };
        let px = pow(ax, bx);
        let py = pow(ay, by);
        let mut r = Self::zero(d);
        for (p, q) in exponents(d) {
            let c = self.coeff(p, q);
            if c == 0.0 {
                continue;
            }
            for (i, &cx) in px[p].iter().enumerate() {
                for (j, &cy) in py[q].iter().enumerate() {
                    r.coeffs[mono_index(i, j)] += c * cx * cy;
                }
            }
        }
        r
    }

    /// `self(x + dx, y + dy)`.
    pub fn shift(&self, dx: f64, dy: f64) -> Self {
        self.affine(1.0, dx, 1.0, dy)
    }

    /// Sum of `c_pq * m[index(p, q)]`; `m` must cover this degree.
    pub fn dot_moments(&self, m: &[f64]) -> f64 {
        self.coeffs.iter().zip(m).map(|(c, v)| c * v).sum()
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, o: &BivariatePoly) -> BivariatePoly {
        let mut r = self.with_degree(o.degree);
        for (p, q) in exponents(o.degree) {
            r.coeffs[mono_index(p, q)] += o.coeff(p, q);
        }
        r
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, o: &BivariatePoly) -> BivariatePoly {
        let mut r = BivariatePoly::zero(self.degree + o.degree);
        for (p, q) in exponents(self.degree) {
            let a = self.coeff(p, q);
            if a == 0.0 {
                continue;
            }
            for (s, t) in exponents(o.degree) {
                r.coeffs[mono_index(p + s, q + t)] += a * o.coeff(s, t);
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order() {
        let e: Vec<_> = exponents(2).collect();
        assert_eq!(e, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        for (i, (p, q)) in exponents(5).enumerate() {
            assert_eq!(mono_index(p, q), i);
        }
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(
            BivariatePoly::constant(1.0).antiderivative_x(),
            BivariatePoly::from_terms(&[(1, 0, 1.0)])
        );
        let xy = BivariatePoly::from_terms(&[(1, 1, 1.0)]);
        assert_eq!(xy.antiderivative_x().coeff(2, 1), 0.5);
    }

    #[test]
    fn product_and_eval() {
        let a = BivariatePoly::from_terms(&[(0, 0, 1.0), (1, 0, 2.0)]);
        let b = BivariatePoly::from_terms(&[(0, 1, 3.0), (1, 1, -1.0)]);
        let c = &a * &b;
        for (x, y) in [(0.3, -0.7), (1.5, 2.0)] {
            assert!((c.eval(x, y) - a.eval(x, y) * b.eval(x, y)).abs() < 1e-14);
        }
    }

    #[test]
    fn affine_composition() {
        let f = BivariatePoly::from_coeffs(vec![0.5, -1.0, 2.0, 0.3, 0.7, -0.2, 0.1, 0.0, 0.4, 1.1]);
        let g = f.affine(2.0, 0.5, -0.5, 1.5);
        for (x, y) in [(0.2, 0.1), (-1.0, 3.0)] {
            let want = f.eval(2.0 * x + 0.5, -0.5 * y + 1.5);
            assert!((g.eval(x, y) - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }
}
