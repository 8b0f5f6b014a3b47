use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Mesh;
use crate::geometry::Point;

/// Ring counts of the benchmark disk meshes, levels 1 to 4
/// (150, 486, 1944 and 7350 elements).
pub const CIRCLE_LEVELS: [usize; 4] = [5, 9, 18, 35];

/// Benchmark disk mesh of radius `pi` at `level` (1-based, see
/// [`CIRCLE_LEVELS`]); levels beyond the table double the ring count.
pub fn circle_level(level: usize) -> Mesh {
    let rings = match level {
        0 => CIRCLE_LEVELS[0],
        l if l <= CIRCLE_LEVELS.len() => CIRCLE_LEVELS[l - 1],
        l => CIRCLE_LEVELS[3] << (l - CIRCLE_LEVELS.len()),
    };
    circle_mesh(rings, PI, 0.1, 20240607 + rings as u64)
}

/// Disk of concentric rings: ring `i` holds `6 i` nodes at radius
/// `radius * i / rings`, giving `6 rings^2` triangles. Interior nodes are
/// displaced by up to `jitter` ring spacings with a seeded generator;
/// boundary nodes stay on the circle.
pub fn circle_mesh(rings: usize, radius: f64, jitter: f64, seed: u64) -> Mesh {
    assert!(rings >= 1, "need at least one ring");
    let h = radius / rings as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts = vec![Point::new(0.0, 0.0)];
    let mut start = vec![0usize];
    for i in 1..=rings {
        start.push(verts.len());
        let n = 6 * i;
        // Alternate ring phase so neighbouring spokes do not line up.
        let phase = if i % 2 == 0 { 0.5 * 2.0 * PI / n as f64 } else { 0.0 };
        for k in 0..n {
            let th = phase + 2.0 * PI * k as f64 / n as f64;
            let mut p = Point::new(th.cos(), th.sin()) * (h * i as f64);
            if i < rings {
                let dr = jitter * h * rng.gen_range(-1.0..1.0);
                let dt = jitter * h * rng.gen_range(-1.0..1.0);
                let u = Point::new(th.cos(), th.sin());
                p = p + u * dr + u.perp() * dt;
            }
            verts.push(p);
        }
    }
    let node = |i: usize, k: usize| -> usize {
        if i == 0 {
            0
        } else {
            start[i] + k % (6 * i)
        }
    };
    let mut tris = Vec::with_capacity(6 * rings * rings);
    for i in 1..=rings {
        // Walk both rings in angular order, always advancing the one whose
        // next node comes first.
        let (no, ni) = (6 * i, 6 * (i - 1));
        if ni == 0 {
            for k in 0..no {
                tris.push([0, node(i, k), node(i, k + 1)]);
            }
            continue;
        }
        let ang = |r: usize, k: usize| {
            let p = verts[node(r, k)];
            p.y.atan2(p.x)
        };
        // Start both rings at their node closest to angle zero and unwrap
        // the angles so they increase monotonically around the ring.
        let sweep = |r: usize, n: usize| -> (usize, Vec<f64>) {
            let k0 = (0..n)
                .min_by(|&a, &b| ang(r, a).abs().total_cmp(&ang(r, b).abs()))
                .expect("non-empty ring");
            let mut a = vec![ang(r, k0)];
            for j in 1..=n {
                let d = (ang(r, k0 + j) - ang(r, k0 + j - 1)).rem_euclid(2.0 * PI);
                a.push(a[j - 1] + d);
            }
            (k0, a)
        };
        let (o0, ao) = sweep(i, no);
        let (i0, ai) = sweep(i - 1, ni);
        let (mut jo, mut ji) = (0usize, 0usize);
        while jo < no || ji < ni {
            let next_o = if jo < no { ao[jo + 1] } else { f64::INFINITY };
            let next_i = if ji < ni { ai[ji + 1] } else { f64::INFINITY };
            if next_o <= next_i {
                tris.push([node(i, o0 + jo), node(i, o0 + jo + 1), node(i - 1, i0 + ji)]);
                jo += 1;
            } else {
                tris.push([node(i - 1, i0 + ji), node(i, o0 + jo), node(i - 1, i0 + ji + 1)]);
                ji += 1;
            }
        }
    }
    Mesh::new(verts, tris).expect("ring mesh is valid")
}
