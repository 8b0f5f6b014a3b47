//! Oracle suites for the geometry and quadrature kernels, run by the
//! `geom-selftest` command and the acceptance tests.
//!
//! Every oracle here is computed by a method unrelated to the kernel it
//! checks: polygon clipping by Sutherland-Hodgman, curved areas by Monte
//! Carlo with exact ray crossing counts, and region integrals by a ruled
//! (fan) parametrisation instead of Green's theorem.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    clip_convex, convex_partition_tria6, intersect_arc_arc, intersect_arc_line,
    intersect_line_line, validate_tria6, ClipTolerance, ConvexRegion, Edge, ParametricArc, Point,
    Segment,
};
use crate::quadrature::{gauss_rule, BivariatePoly, BoundaryPath};
use crate::{Error, Result};

/// Default seed of the oracle generators.
pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub clip_pairs: usize,
    pub curved_cells: usize,
    /// Monte Carlo samples per curved cell.
    pub mc_samples: usize,
    pub intersection_pairs: usize,
    pub quadrature_regions: usize,
    pub max_degree: usize,
    pub time_limit: Duration,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            clip_pairs: 1000,
            curved_cells: 100,
            mc_samples: 100_000,
            intersection_pairs: 1000,
            quadrature_regions: 100,
            max_degree: 4,
            time_limit: Duration::from_secs(120),
        }
    }
}

impl SelftestConfig {
    /// Defaults with the seed taken from `SLDG_SEED` when set.
    pub fn from_env() -> Result<Self> {
        let mut c = Self::default();
        if let Ok(s) = std::env::var("SLDG_SEED") {
            c.seed = s
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("SLDG_SEED '{s}' is not an integer")))?;
        }
        Ok(c)
    }
}

/// Outcome of one oracle comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
            })
            .collect();
        out.push(format!("elapsed {:.2}s", self.elapsed.as_secs_f64()));
        out
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn rand_point(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.gen(), rng.gen())
}

fn poly_area(p: &[Point]) -> f64 {
    let n = p.len();
    (0..n).map(|i| p[i].cross(p[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Random counter-clockwise triangle in the unit square with a minimum
/// angle bound.
fn rand_triangle(rng: &mut ChaCha8Rng) -> [Point; 3] {
    loop {
        let mut t = [rand_point(rng), rand_point(rng), rand_point(rng)];
        let a = poly_area(&t);
        if a.abs() < 0.01 {
            continue;
        }
        if a < 0.0 {
            t.swap(1, 2);
        }
        return t;
    }
}

/// Sutherland-Hodgman clip of `subject` by the convex counter-clockwise
/// polygon `clip`.
pub fn sutherland_hodgman(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let side = |p: Point| (b - a).cross(p - a);
        let input = std::mem::take(&mut out);
        if input.is_empty() {
            break;
        }
        for k in 0..input.len() {
            let (p, q) = (input[k], input[(k + 1) % input.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push(p.lerp(q, t));
            }
        }
    }
    out
}

/// Straight-triangle clipping against Sutherland-Hodgman.
pub fn clip_suite(cfg: &SelftestConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.clip_pairs {
        let a = rand_triangle(&mut rng);
        let b = rand_triangle(&mut rng);
        let want = poly_area(&sutherland_hodgman(&a, &b)).max(0.0);
        let ra = ConvexRegion::triangle(a[0], a[1], a[2])?;
        let rb = ConvexRegion::triangle(b[0], b[1], b[2])?;
        let got = clip_convex(&ra, &rb, ClipTolerance::default())?
            .map(|r| r.area())
            .unwrap_or(0.0);
        worst = worst.max((got - want).abs());
    }
    Ok(Check {
        name: "clip-vs-sutherland-hodgman",
        passed: worst <= 1e-12,
        detail: format!("{} pairs, max |area diff| {worst:.3e} (tol 1e-12)", cfg.clip_pairs),
    })
}

/// Random valid TRIA6 node set: a triangle with each midside node pushed
/// off its chord by up to a quarter of the chord length.
pub fn random_tria6(rng: &mut ChaCha8Rng) -> [Point; 6] {
    loop {
        let t = rand_triangle(rng);
        let mut n = [t[0], t[1], t[2], t[0], t[0], t[0]];
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let d = b - a;
            let s: f64 = rng.gen_range(-0.25..0.25);
            n[3 + k] = a.midpoint(b) + d.perp() * s;
        }
        if validate_tria6(&n).is_ok() {
            return n;
        }
    }
}

fn tria6_boundary(n: &[Point; 6]) -> Result<[ParametricArc; 3]> {
    Ok([
        ParametricArc::through(n[0], n[3], n[1])?,
        ParametricArc::through(n[1], n[4], n[2])?,
        ParametricArc::through(n[2], n[5], n[0])?,
    ])
}

/// Crossings of the ray `{p + s (1, 0), s > 0}` with the closed quadratic
/// boundary, counted on half-open parameter intervals `[0, 1)`.
fn ray_crossings(p: Point, arcs: &[ParametricArc]) -> usize {
    let mut count = 0;
    for arc in arcs {
        // y(t) = a t^2 + b t + c relative to p.y.
        let (a, b, c) = (arc.a.y, arc.b.y, arc.c.y - p.y);
        let mut roots = [f64::NAN; 2];
        if a.abs() < 1e-300 {
            if b != 0.0 {
                roots[0] = -c / b;
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                roots[0] = q / a;
                roots[1] = if q != 0.0 { c / q } else { f64::NAN };
                if disc == 0.0 {
                    roots[1] = f64::NAN;
                }
            }
        }
        for t in roots {
            if (0.0..1.0).contains(&t) && arc.eval(t).x > p.x {
                count += 1;
            }
        }
    }
    count
}

/// Signed curved-cell areas from the convex partition against Monte Carlo.
pub fn monte_carlo_suite(cfg: &SelftestConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut worst_sigma = 0.0f64;
    let mut failures = 0;
    for _ in 0..cfg.curved_cells {
        let n = random_tria6(&mut rng);
        let pieces = convex_partition_tria6(&n)?;
        let area: f64 = pieces.iter().map(|p| p.signed_area()).sum();
        let arcs = tria6_boundary(&n)?;
        let bbox = arcs
            .iter()
            .map(ParametricArc::bbox)
            .fold(crate::geometry::BBox::empty(), |a, b| a.union(&b));
        let mut hits = 0usize;
        for _ in 0..cfg.mc_samples {
            let p = Point::new(
                rng.gen_range(bbox.min.x..bbox.max.x),
                rng.gen_range(bbox.min.y..bbox.max.y),
            );
            if ray_crossings(p, &arcs) % 2 == 1 {
                hits += 1;
            }
        }
        let frac = hits as f64 / cfg.mc_samples as f64;
        let estimate = bbox.area() * frac;
        let sigma = bbox.area() * (frac * (1.0 - frac) / cfg.mc_samples as f64).sqrt();
        let z = (estimate - area).abs() / sigma.max(1e-300);
        worst_sigma = worst_sigma.max(z);
        if z > 4.0 {
            failures += 1;
        }
    }
    Ok(Check {
        name: "curved-area-vs-monte-carlo",
        passed: failures == 0,
        detail: format!(
            "{} cells x {} samples, worst deviation {worst_sigma:.2} sigma (tol 4)",
            cfg.curved_cells, cfg.mc_samples
        ),
    })
}

fn rand_arc(rng: &mut ChaCha8Rng) -> ParametricArc {
    let s = rand_point(rng);
    let e = rand_point(rng);
    let d = e - s;
    let k: f64 = rng.gen_range(-0.6..0.6);
    ParametricArc::through(s, s.midpoint(e) + d.perp() * k, e).expect("distinct points")
}

/// Residuals `|e1(t1) - e2(t2)|` and `|e(t) - point|` of all computed
/// crossings.
pub fn intersection_suite(cfg: &SelftestConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5c);
    let mut worst = 0.0f64;
    let mut found = 0usize;
    let mut record = |p1: Point, p2: Point, at: Point| {
        worst = worst.max(p1.dist(p2)).max(p1.dist(at));
        found += 1;
    };
    for _ in 0..cfg.intersection_pairs {
        let (a1, a2) = (rand_arc(&mut rng), rand_arc(&mut rng));
        let s1 = Segment::new(rand_point(&mut rng), rand_point(&mut rng));
        let s2 = Segment::new(rand_point(&mut rng), rand_point(&mut rng));
        for c in intersect_arc_arc(&a1, &a2)? {
            record(a1.eval(c.t1), a2.eval(c.t2), c.point);
        }
        for c in intersect_arc_line(&a1, &s1) {
            record(a1.eval(c.t1), s1.eval(c.t2), c.point);
        }
        if let Some(c) = intersect_line_line(&s1, &s2) {
            record(s1.eval(c.t1), s2.eval(c.t2), c.point);
        }
    }
    Ok(Check {
        name: "intersection-residuals",
        passed: worst <= 1e-9 && found > 0,
        detail: format!("{found} crossings, max residual {worst:.3e} (tol 1e-9)"),
    })
}

/// Curved convex regions: partition pieces of random TRIA6 cells clipped
/// by random triangles, kept when an arc survives, shifted into
/// `[0.5, 1.5]^2`.
pub fn random_curved_regions(seed: u64, count: usize) -> Result<Vec<ConvexRegion>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = Point::new(0.5, 0.5);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = random_tria6(&mut rng);
        let t = rand_triangle(&mut rng);
        let tri = ConvexRegion::triangle(t[0], t[1], t[2])?;
        for piece in convex_partition_tria6(&n)? {
            if out.len() == count {
                break;
            }
            if let Some(r) = clip_convex(&piece.region, &tri, ClipTolerance::default())? {
                if r.edges().iter().any(Edge::is_arc) && r.area() > 1e-6 {
                    out.push(r.translated(shift));
                }
            }
        }
    }
    Ok(out)
}

/// `int_R f dA` by the fan map `(s, t) -> c + s (e(t) - c)` over every edge,
/// with Jacobian `s cross(e(t) - c, e'(t))`.
pub fn ruled_integral(region: &ConvexRegion, f: &BivariatePoly) -> Result<f64> {
    let edges = region.edges();
    let c = edges
        .iter()
        .fold(Point::new(0.0, 0.0), |acc, e| acc + e.start())
        / edges.len() as f64;
    let rs = gauss_rule(8)?;
    let rt = gauss_rule(12)?;
    let mut total = 0.0;
    for e in edges {
        total += rt.integrate(|t| {
            let (p, dp) = (e.eval(t), e.deriv(t));
            let jac = (p - c).cross(dp);
            rs.integrate(|s| {
                let q = c + (p - c) * s;
                f.eval(q.x, q.y) * s
            }) * jac
        });
    }
    Ok(total)
}

/// Green's-theorem integrals against the ruled oracle.
pub fn quadrature_suite(cfg: &SelftestConfig) -> Result<Check> {
    let regions = random_curved_regions(cfg.seed ^ 0x9a0, cfg.quadrature_regions)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9a1);
    let mut worst = 0.0f64;
    for r in &regions {
        let path = BoundaryPath::from_region(r);
        for d in 0..=cfg.max_degree {
            let n = crate::quadrature::mono_count(d);
            let f = BivariatePoly::from_coeffs((0..n).map(|_| rng.gen_range(0.0..1.0)).collect());
            let got = path.integrate(&f);
            let want = ruled_integral(r, &f)?;
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    Ok(Check {
        name: "green-vs-ruled-quadrature",
        passed: worst <= 1e-10,
        detail: format!(
            "{} regions, degrees 0..={}, max rel diff {worst:.3e} (tol 1e-10)",
            regions.len(),
            cfg.max_degree
        ),
    })
}

/// Runs every suite and checks the time budget.
pub fn run_all(cfg: &SelftestConfig) -> Result<SelftestReport> {
    let start = Instant::now();
    let mut checks = vec![
        clip_suite(cfg)?,
        monte_carlo_suite(cfg)?,
        intersection_suite(cfg)?,
        quadrature_suite(cfg)?,
    ];
    let elapsed = start.elapsed();
    checks.push(Check {
        name: "runtime",
        passed: elapsed <= cfg.time_limit,
        detail: format!(
            "{:.2}s (limit {:.0}s)",
            elapsed.as_secs_f64(),
            cfg.time_limit.as_secs_f64()
        ),
    });
    Ok(SelftestReport { checks, elapsed })
}
