//! Benchmark fixtures.

use std::sync::Arc;

use sldg::harness::{compute_dt, MeshSource, Problem, ProblemSpec};
use sldg::remap::StepOptions;
use sldg::transport::build_upstream;
use sldg::{AuxGrid, ConvexRegion, DgField, DgSpace, Result, SignedPiece, Velocity};

/// Everything one remap step needs.
pub struct StepFixture {
    pub field: DgField,
    pub velocity: Velocity,
    pub opts: StepOptions,
    pub grid: AuxGrid,
    pub dt: f64,
}

impl StepFixture {
    pub fn new(problem: Problem, level: usize, degree: usize, cfl: f64) -> Result<Self> {
        let spec = ProblemSpec::new(problem, MeshSource::Level(level), degree, cfl);
        let mesh = Arc::new(spec.mesh.load()?);
        let space = DgSpace::new(mesh.clone(), degree)?;
        let ic = problem.initial();
        let velocity = spec.velocity();
        Ok(Self {
            field: space.project(|x, y| ic.eval(x, y)),
            dt: compute_dt(&mesh, &velocity, cfl, 0.0),
            grid: AuxGrid::with_default_bins(&mesh),
            opts: spec.step_options(),
            velocity,
        })
    }
}

/// Curved upstream pieces of element `j` and the background triangles they
/// are clipped against.
pub fn clip_pairs(fx: &StepFixture, j: usize) -> Result<(Vec<SignedPiece>, Vec<ConvexRegion>)> {
    let mesh = fx.field.mesh();
    let up = build_upstream(mesh, j, &fx.velocity, fx.dt, 0.0, fx.opts.trace, fx.opts.shape)?;
    let bg = fx
        .grid
        .candidates_for_box(&up.bbox)
        .into_iter()
        .map(|l| {
            let t = mesh.triangle(l);
            ConvexRegion::triangle(t[0], t[1], t[2])
        })
        .collect::<Result<_>>()?;
    Ok((up.pieces, bg))
}
