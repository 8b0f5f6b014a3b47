use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sldg::geometry::{clip_convex, ClipTolerance};
use sldg::harness::Problem;
use sldg::remap::sldg_step;
use sldg_bench::{clip_pairs, StepFixture};

fn step(c: &mut Criterion) {
    let mut g = c.benchmark_group("sldg_step");
    g.sample_size(10);
    for (level, degree) in [(1, 1), (1, 2), (2, 2)] {
        let fx = StepFixture::new(Problem::Rotation, level, degree, 10.0).unwrap();
        g.bench_function(format!("rotation_L{level}_P{degree}"), |b| {
            b.iter(|| sldg_step(&fx.field, &fx.velocity, 0.0, fx.dt, &fx.opts, &fx.grid).unwrap())
        });
    }
    g.finish();
}

fn clip(c: &mut Criterion) {
    let fx = StepFixture::new(Problem::Swirling, 2, 2, 10.0).unwrap();
    let (pieces, bg) = clip_pairs(&fx, 100).unwrap();
    let tol = ClipTolerance::default();
    c.bench_function("clip_convex_curved_upstream", |b| {
        b.iter(|| {
            let mut n = 0;
            for p in &pieces {
                for q in &bg {
                    n += clip_convex(black_box(&p.region), q, tol).unwrap().is_some() as usize;
                }
            }
            n
        })
    });
}

criterion_group!(benches, step, clip);
criterion_main!(benches);
