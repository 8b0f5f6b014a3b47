//! Acceptance criteria AC1-AC9, one PASS/FAIL line each.
//!
//! Failing criteria are reported, not hidden; the exit status is nonzero
//! only when `SLDG_ACCEPTANCE_STRICT=1` is set.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use sldg::dg::sub_triangles;
use sldg::harness::{
    cfl_sweep, compute_dt, converge, edge_distance_study, run, time_steps, ConvergenceRow,
    MeshSource, Problem, ProblemSpec,
};
use sldg::remap::{apply_pp, cell_minimum, remap_field};
use sldg::selftest::{self, SelftestConfig, SelftestReport};
use sldg::{
    AuxGrid, DgField, DgSpace, LimiterConfig, Mesh, StepOptions, TraceConfig, UpstreamShape,
    Velocity,
};

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        pass,
        detail,
    }
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn levels(n: usize) -> Vec<MeshSource> {
    (1..=n).map(MeshSource::Level).collect()
}

fn finest_orders(rows: &[ConvergenceRow]) -> (f64, f64) {
    let last = rows.last().expect("rows");
    (last.order_l1.unwrap_or(f64::NAN), last.order_l2.unwrap_or(f64::NAN))
}

fn table(rows: &[ConvergenceRow]) -> String {
    rows.iter()
        .map(|r| format!("M={} L1={:.3e} L2={:.3e} Linf={:.3e}", r.elements, r.l1, r.l2, r.linf))
        .collect::<Vec<_>>()
        .join("; ")
}

fn ac1(report: &SelftestReport) -> Outcome {
    let names = [
        "clip-vs-sutherland-hodgman",
        "curved-area-vs-monte-carlo",
        "intersection-residuals",
        "runtime",
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for n in names {
        match report.check(n) {
            Some(c) => {
                pass &= c.passed;
                parts.push(format!("{n}: {}", c.detail));
            }
            None => {
                pass = false;
                parts.push(format!("{n}: missing"));
            }
        }
    }
    outcome("AC1", "geometry oracle suite", pass, parts.join("; "))
}

fn ac2(report: &SelftestReport) -> Outcome {
    match report.check("green-vs-ruled-quadrature") {
        Some(c) => outcome("AC2", "Green's-theorem quadrature", c.passed, c.detail.clone()),
        None => outcome("AC2", "Green's-theorem quadrature", false, "check missing".into()),
    }
}

/// Max pointwise deviation from `exact` over elements whose vertices all
/// satisfy `keep`, sampled on a sub-triangulation.
fn interior_deviation(
    u: &DgField,
    exact: impl Fn(f64, f64) -> f64,
    keep: impl Fn(&Mesh, usize) -> bool,
) -> (f64, usize) {
    let mesh = u.mesh();
    let mut worst = 0.0f64;
    let mut count = 0;
    for j in 0..mesh.len() {
        if !keep(mesh, j) {
            continue;
        }
        count += 1;
        for t in sub_triangles(mesh.triangle(j), 3) {
            for p in t {
                worst = worst.max((u.eval_unchecked(j, p) - exact(p.x, p.y)).abs());
            }
        }
    }
    (worst, count)
}

fn ac3() -> Res<Outcome> {
    let mesh = Arc::new(MeshSource::Level(2).load()?);
    let grid = AuxGrid::with_default_bins(&mesh);
    let space = DgSpace::new(mesh.clone(), 2)?;
    let p = |x: f64, y: f64| 0.7 - 0.3 * x + 0.2 * y + 0.05 * x * x - 0.08 * x * y + 0.03 * y * y;
    let u = space.project(p);
    // Radius of the circle inscribed in the polygonal boundary.
    let n_boundary = mesh.boundary_edges().len() as f64;
    let r_in = PI * (PI / n_boundary).cos();
    let opts = StepOptions::default();

    let zero = Velocity::Constant { a: 0.0, b: 0.0 };
    let (w0, _) = remap_field(&u, &zero, 0.0, 0.5, &opts, &grid)?;
    let identity = u
        .all_coeffs()
        .iter()
        .zip(w0.all_coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let (a, b, dt) = (0.4f64, -0.25, 0.5);
    let shift = a.hypot(b) * dt;
    let (wt, _) = remap_field(&u, &Velocity::Constant { a, b }, 0.0, dt, &opts, &grid)?;
    let inside = |r: f64| {
        move |m: &Mesh, j: usize| m.triangle(j).iter().all(|q| q.norm() + r < r_in - 1e-9)
    };
    let (trans, n_trans) = interior_deviation(&wt, |x, y| p(x - a * dt, y - b * dt), inside(shift));

    // Rigid rotation: traced accurately so the check isolates the remap.
    let rot_opts = StepOptions {
        trace: TraceConfig { substeps: 64 },
        ..StepOptions::default()
    };
    let th = 0.5;
    let (wr, _) = remap_field(&u, &Velocity::RigidRotation, 0.0, th, &rot_opts, &grid)?;
    let (c, s) = (th.cos(), th.sin());
    let (rot, n_rot) = interior_deviation(&wr, |x, y| p(c * x + s * y, -s * x + c * y), inside(0.0));

    let pass = identity <= 1e-13 && trans <= 1e-10 && rot <= 1e-10 && n_trans > 0 && n_rot > 0;
    Ok(outcome(
        "AC3",
        "identity and polynomial exactness",
        pass,
        format!(
            "V=0 max coeff diff {identity:.1e}; translation max err {trans:.1e} on {n_trans} interior elements; \
             rotation max err {rot:.1e} on {n_rot} interior elements"
        ),
    ))
}

struct Ac4 {
    outcome: Outcome,
    p2_rows: Vec<ConvergenceRow>,
}

fn ac4() -> Res<Ac4> {
    let meshes = levels(3);
    let p1 = converge(&ProblemSpec::new(Problem::Rotation, MeshSource::Level(1), 1, 10.0), &meshes)?;
    let p2 = converge(&ProblemSpec::new(Problem::Rotation, MeshSource::Level(1), 2, 10.0), &meshes)?;
    let (o1l1, o1l2) = finest_orders(&p1);
    let (o2l1, o2l2) = finest_orders(&p2);
    let in_range = |o: f64, lo: f64, hi: f64| (lo..=hi).contains(&o);
    let reference = 1.52e-5;
    let ratio = p2.last().map(|r| r.l1 / reference).unwrap_or(f64::NAN);
    let pass = in_range(o1l1, 1.6, 2.4)
        && in_range(o1l2, 1.6, 2.4)
        && in_range(o2l1, 2.5, 3.5)
        && in_range(o2l2, 2.5, 3.5)
        && in_range(ratio, 0.2, 5.0);
    let detail = format!(
        "P1 finest orders L1 {o1l1:.2} L2 {o1l2:.2} [{}]; P2 finest orders L1 {o2l1:.2} L2 {o2l2:.2} [{}]; \
         P2 finest L1 / 1.52e-5 = {ratio:.2}",
        table(&p1),
        table(&p2)
    );
    Ok(Ac4 {
        outcome: outcome("AC4", "rotation convergence", pass, detail),
        p2_rows: p2,
    })
}

fn ac5() -> Res<Outcome> {
    let mut worst_step = 0.0f64;
    let mut worst_total = 0.0f64;
    let mut parts = Vec::new();
    for limiters in [false, true] {
        let mut spec = ProblemSpec::new(Problem::Rotation, MeshSource::Level(3), 2, 10.0);
        spec.limiters = LimiterConfig {
            weno: limiters,
            pp: limiters,
            ..LimiterConfig::default()
        };
        let out = run(&spec)?;
        let m0 = out.initial.total_mass();
        let step = out
            .reports
            .iter()
            .map(|r| (r.mass_after - r.mass_before).abs() / m0.abs())
            .fold(0.0, f64::max);
        let total = (out.field.total_mass() - m0).abs() / m0.abs();
        worst_step = worst_step.max(step);
        worst_total = worst_total.max(total);
        parts.push(format!(
            "limiters {}: max step {step:.1e}, cumulative {total:.1e} over {} steps",
            if limiters { "on" } else { "off" },
            out.steps()
        ));
    }
    Ok(outcome(
        "AC5",
        "mass conservation",
        worst_step <= 1e-12 && worst_total <= 1e-11,
        parts.join("; "),
    ))
}

fn ac6() -> Res<Outcome> {
    let mut l1 = Vec::new();
    for shape in [UpstreamShape::Curved, UpstreamShape::Straight] {
        let mut spec = ProblemSpec::new(Problem::Swirling, MeshSource::Level(3), 2, 10.5);
        spec.t_final = 1.5;
        spec.shape = shape;
        let out = run(&spec)?;
        l1.push(out.errors.ok_or("no exact solution")?.l1);
    }
    let ratio = l1[1] / l1[0];
    Ok(outcome(
        "AC6",
        "curvilinear vs straight upstream",
        ratio > 3.0,
        format!(
            "swirling P2 M=1944 CFL 10.5: curved L1 {:.3e}, straight L1 {:.3e}, ratio {ratio:.2}",
            l1[0], l1[1]
        ),
    ))
}

fn ac7() -> Res<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in [1, 2] {
        let mut spec = ProblemSpec::new(Problem::Swirling, MeshSource::Level(1), degree, 1.0);
        spec.t_final = 1.0;
        let u0_max = {
            let mesh = Arc::new(spec.mesh.load()?);
            let u0 = DgSpace::new(mesh, degree)?.project(|x, y| spec.problem.initial().eval(x, y));
            sldg::harness::field_max_abs(&u0)
        };
        let rows = cfl_sweep(&spec, &[1.0, 10.0, 100.0])?;
        let base = rows[0].l1;
        let growth = rows.iter().map(|r| r.l1 / base).fold(0.0, f64::max);
        let bounded = rows.iter().all(|r| r.max_abs.is_finite() && r.max_abs <= 2.0 * u0_max);
        pass &= bounded && growth <= 2.0;
        let cells: Vec<String> = rows
            .iter()
            .map(|r| format!("CFL {}: {} steps L1 {:.3e} max|u| {:.3}", r.cfl, r.steps, r.l1, r.max_abs))
            .collect();
        parts.push(format!(
            "P{degree} [{}] max L1 growth {growth:.2}x, bounded {bounded}",
            cells.join(", ")
        ));
    }
    Ok(outcome("AC7", "large time step stability", pass, parts.join("; ")))
}

/// Slotted-disk rotation with the positivity limiter applied after every
/// remap; records how far the limiter moves cell averages.
fn ac8_pp() -> Res<(bool, String)> {
    let spec = ProblemSpec::new(Problem::SlottedDisk, MeshSource::Level(2), 2, 10.0);
    let mesh = Arc::new(spec.mesh.load()?);
    let grid = AuxGrid::with_default_bins(&mesh);
    let space = DgSpace::new(mesh.clone(), 2)?;
    let vel = spec.velocity();
    let dt = compute_dt(&mesh, &vel, spec.cfl, 0.0);
    let opts = StepOptions::default();
    let mut limited = space.project(|x, y| spec.problem.initial().eval(x, y));
    let mut raw = limited.clone();
    apply_pp(&mut limited, 1e-15);
    let mut avg_shift = 0.0f64;
    let mut min_value = f64::INFINITY;
    let mut raw_negative = 0usize;
    let mut t = 0.0;
    for h in time_steps(spec.t_final, dt) {
        let (mut next, _) = remap_field(&limited, &vel, t, h, &opts, &grid)?;
        let before: Vec<f64> = (0..mesh.len()).map(|j| next.cell_average(j)).collect();
        apply_pp(&mut next, 1e-15);
        for (j, b) in before.iter().enumerate() {
            avg_shift = avg_shift.max((next.cell_average(j) - b).abs());
            min_value = min_value.min(cell_minimum(&next, j).0);
            for tri in sub_triangles(mesh.triangle(j), 4) {
                for p in tri {
                    min_value = min_value.min(next.eval_unchecked(j, p));
                }
            }
        }
        limited = next;
        let (r, _) = remap_field(&raw, &vel, t, h, &opts, &grid)?;
        raw = r;
        t += h;
    }
    for j in 0..mesh.len() {
        if cell_minimum(&raw, j).0 < -1e-14 {
            raw_negative += 1;
        }
    }
    let pass = min_value >= -1e-14 && avg_shift <= 1e-14;
    Ok((
        pass,
        format!(
            "PP on: min value {min_value:.1e}, max average change {avg_shift:.1e}; \
             PP off: {raw_negative} cells with negative values"
        ),
    ))
}

fn ac8(p2_plain: &[ConvergenceRow]) -> Res<Outcome> {
    let (pp_pass, pp_detail) = ac8_pp()?;
    let mut spec = ProblemSpec::new(Problem::Rotation, MeshSource::Level(1), 2, 10.0);
    spec.limiters.weno = true;
    let weno = converge(&spec, &levels(p2_plain.len()))?;
    let three = |v: f64| format!("{v:.2e}");
    let same = p2_plain.iter().zip(&weno).all(|(a, b)| {
        three(a.l1) == three(b.l1) && three(a.l2) == three(b.l2) && three(a.linf) == three(b.linf)
    });
    Ok(outcome(
        "AC8",
        "limiters",
        pp_pass && same,
        format!(
            "{pp_detail}; WENO on smooth rotation table {} [{}]",
            if same { "unchanged to 3 digits" } else { "changed" },
            table(&weno)
        ),
    ))
}

fn ac9() -> Res<Outcome> {
    let vel = Velocity::Swirling { period: 1.5 };
    let rows = edge_distance_study(&levels(3), &vel, 0.3, 0.1, TraceConfig::default(), 16)?;
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.order).collect();
    let min = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let dists: Vec<String> = rows
        .iter()
        .map(|r| format!("M={} d={:.3e}", r.elements, r.distance))
        .collect();
    Ok(outcome(
        "AC9",
        "upstream edge distance order",
        min >= 2.6,
        format!(
            "swirling dt=0.1 [{}] orders {:?}",
            dists.join(", "),
            orders.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>()
        ),
    ))
}

fn fail(id: &'static str, title: &'static str, e: Box<dyn std::error::Error>) -> Outcome {
    outcome(id, title, false, format!("error: {e}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = Vec::new();

    match SelftestConfig::from_env()
        .map_err(Into::into)
        .and_then(|cfg| selftest::run_all(&cfg).map_err(Box::<dyn std::error::Error>::from))
    {
        Ok(report) => {
            results.push(ac1(&report));
            results.push(ac2(&report));
        }
        Err(e) => {
            results.push(outcome("AC1", "geometry oracle suite", false, format!("error: {e}")));
            results.push(outcome("AC2", "Green's-theorem quadrature", false, format!("error: {e}")));
        }
    }
    results.push(ac3().unwrap_or_else(|e| fail("AC3", "identity and polynomial exactness", e)));
    let p2_rows = match ac4() {
        Ok(a) => {
            results.push(a.outcome);
            a.p2_rows
        }
        Err(e) => {
            results.push(fail("AC4", "rotation convergence", e));
            Vec::new()
        }
    };
    results.push(ac5().unwrap_or_else(|e| fail("AC5", "mass conservation", e)));
    results.push(ac6().unwrap_or_else(|e| fail("AC6", "curvilinear vs straight upstream", e)));
    results.push(ac7().unwrap_or_else(|e| fail("AC7", "large time step stability", e)));
    results.push(if p2_rows.is_empty() {
        outcome("AC8", "limiters", false, "no reference rotation table".into())
    } else {
        ac8(&p2_rows).unwrap_or_else(|e| fail("AC8", "limiters", e))
    });
    results.push(ac9().unwrap_or_else(|e| fail("AC9", "upstream edge distance order", e)));

    for r in &results {
        println!(
            "{} {} {}: {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.title,
            r.detail
        );
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    println!(
        "acceptance: {}/{} passed in {:.1} s{}",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {}", failed.join(", "))
        }
    );
    let strict = std::env::var("SLDG_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && !failed.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
