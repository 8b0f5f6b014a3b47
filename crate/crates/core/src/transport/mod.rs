//! Velocity fields, backward characteristic tracing, curvilinear upstream
//! elements and the least-squares adjoint test functions.

mod adjoint;
mod upstream;
mod velocity;

pub use adjoint::{AdjointFit, AdjointPoly};
pub use upstream::{
    build_upstream, tria6_shape, upstream_edge_distance, UpstreamElement, UpstreamShape,
};
pub use velocity::{Velocity, VelocityField};

use crate::geometry::Point;
use crate::{Error, Result};

/// Characteristic integration settings. The integrator is classical RK4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    /// RK4 substeps per traced interval.
    pub substeps: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { substeps: 4 }
    }
}

/// Solves `x' = V(x, t)` backward from `x(t_end) = p` to `t_start`.
pub fn trace_back(
    p: Point,
    velocity: &dyn VelocityField,
    t_end: f64,
    t_start: f64,
    config: TraceConfig,
) -> Result<Point> {
    if config.substeps == 0 {
        return Err(Error::Parameter("trace substeps must be positive".into()));
    }
    if !(t_start <= t_end) {
        return Err(Error::Parameter(format!(
            "trace interval [{t_start}, {t_end}] is reversed"
        )));
    }
    let n = config.substeps;
    let dt = -(t_end - t_start) / n as f64;
    let f = |q: Point, t: f64| {
        let (a, b) = velocity.eval(q.x, q.y, t);
        Point::new(a, b)
    };
    let mut x = p;
    for i in 0..n {
        let t = t_end + i as f64 * dt;
        let k1 = f(x, t);
        let k2 = f(x + k1 * (0.5 * dt), t + 0.5 * dt);
        let k3 = f(x + k2 * (0.5 * dt), t + 0.5 * dt);
        let k4 = f(x + k3 * dt, t + dt);
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    if !x.is_finite() {
        return Err(Error::Trace {
            x: p.x,
            y: p.y,
            reason: "non-finite position".into(),
        });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quarter_rotation() {
        let trace = |n| {
            trace_back(
                Point::new(1.0, 0.0),
                &Velocity::RigidRotation,
                PI / 2.0,
                0.0,
                TraceConfig { substeps: n },
            )
            .unwrap()
            .dist(Point::new(0.0, -1.0))
        };
        assert!(trace(4) < 5e-4);
        assert!(trace(20) < 1e-6);
    }

    #[test]
    fn zero_velocity_is_fixed() {
        let p = Point::new(0.3, -1.2);
        let v = Velocity::Constant { a: 0.0, b: 0.0 };
        assert_eq!(trace_back(p, &v, 1.0, 0.0, TraceConfig::default()).unwrap(), p);
    }

    #[test]
    fn fourth_order_in_substeps() {
        let v = Velocity::Swirling { period: 1.5 };
        let p = Point::new(0.7, 0.4);
        let reference = trace_back(p, &v, 1.0, 0.0, TraceConfig { substeps: 512 }).unwrap();
        let err = |n| {
            trace_back(p, &v, 1.0, 0.0, TraceConfig { substeps: n })
                .unwrap()
                .dist(reference)
        };
        let ratio = err(8) / err(16);
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn rejects_bad_config() {
        let v = Velocity::RigidRotation;
        let p = Point::new(1.0, 0.0);
        assert!(trace_back(p, &v, 1.0, 0.0, TraceConfig { substeps: 0 }).is_err());
        assert!(trace_back(p, &v, 0.0, 1.0, TraceConfig::default()).is_err());
    }
}
