//! Real roots of low-degree polynomials.
//!
//! Coefficients are in ascending order: `c[0] + c[1] x + c[2] x^2 + ...`.

use nalgebra::{DMatrix, Schur};

/// Imaginary parts below this (relative to `1 + |re|`) count as real before
/// polishing. Spurious candidates are rejected by the caller's residual test.
const IMAG_TOL: f64 = 1e-6;

pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn horner_with_deriv(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &ci in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ci;
    }
    (p, dp)
}

/// Real roots of `c0 + c1 x + c2 x^2`, ascending, double roots reported once.
pub fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let scale = c0.abs().max(c1.abs()).max(c2.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    let (c0, c1, c2) = (c0 / scale, c1 / scale, c2 / scale);
    if c2.abs() <= 1e-14 {
        if c1.abs() <= 1e-14 {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let tiny = 1e-14 * (c1 * c1).max((4.0 * c2 * c0).abs());
    if disc < -tiny {
        return Vec::new();
    }
    if disc <= tiny {
        return vec![-c1 / (2.0 * c2)];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (c1 + c1.signum() * sq);
    let q = if q == 0.0 { -0.5 * sq } else { q };
    let mut r = vec![q / c2, c0 / q];
    r.sort_by(|a, b| a.total_cmp(b));
    if r[0] == r[1] {
        r.pop();
    }
    r
}

/// Real roots of a polynomial of degree up to 4 (or more), via the
/// companion matrix and a Newton polish. Ascending, not deduplicated.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].abs() <= 1e-13 * scale {
        deg -= 1;
    }
    match deg {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        2 => return quadratic_roots(c[0], c[1], c[2]),
        _ => {}
    }
    let poly = &c[..=deg];
    // The Schur iteration can stall on symmetric root patterns; retry on a
    // shifted variable when it does.
    for shift in [0.0, 0.317, -0.577, 1.213] {
        let q = taylor_shift(poly, shift);
        let lead = q[deg];
        let mut comp = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -q[i] / lead;
        }
        let Some(schur) = Schur::try_new(comp, f64::EPSILON, 500) else {
            continue;
        };
        let mut out: Vec<f64> = schur
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= IMAG_TOL * (1.0 + z.re.abs()))
            .map(|z| polish(poly, z.re + shift))
            .collect();
        out.sort_by(|a, b| a.total_cmp(b));
        return out;
    }
    Vec::new()
}

/// Coefficients of `p(x + s)`.
fn taylor_shift(p: &[f64], s: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    if s == 0.0 {
        return q;
    }
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            q[j] += s * q[j + 1];
        }
    }
    q
}

fn polish(c: &[f64], mut x: f64) -> f64 {
    for _ in 0..3 {
        let (p, dp) = horner_with_deriv(c, x);
        if dp == 0.0 || !dp.is_finite() {
            break;
        }
        let step = p / dp;
        let nx = x - step;
        if !nx.is_finite() || horner(c, nx).abs() > p.abs() {
            break;
        }
        x = nx;
    }
    x
}
