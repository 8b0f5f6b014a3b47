use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Time-dependent velocity `(a, b)(x, y, t)`.
pub trait VelocityField: Send + Sync {
    fn eval(&self, x: f64, y: f64, t: f64) -> (f64, f64);
}

impl<F> VelocityField for F
where
    F: Fn(f64, f64, f64) -> (f64, f64) + Send + Sync,
{
    fn eval(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        self(x, y, t)
    }
}

/// Built-in divergence-free fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Velocity {
    /// `(-y, x)`: one counter-clockwise turn per `2 pi`.
    RigidRotation,
    /// Swirling deformation that reverses at `t = period / 2`.
    Swirling { period: f64 },
    Constant { a: f64, b: f64 },
}

impl Velocity {
    pub fn is_zero(&self) -> bool {
        matches!(self, Velocity::Constant { a, b } if *a == 0.0 && *b == 0.0)
    }
}

impl VelocityField for Velocity {
    fn eval(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        match *self {
            Velocity::RigidRotation => (-y, x),
            Velocity::Swirling { period } => {
                let g = (PI * t / period).cos() * PI;
                let cx = (0.5 * x).cos();
                let cy = (0.5 * y).cos();
                (-cx * cx * y.sin() * g, x.sin() * cy * cy * g)
            }
            Velocity::Constant { a, b } => (a, b),
        }
    }
}

impl fmt::Display for Velocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Velocity::RigidRotation => write!(f, "rigid-rotation"),
            Velocity::Swirling { period } => write!(f, "swirling:T={period}"),
            Velocity::Constant { a, b } => write!(f, "constant:a={a},b={b}"),
        }
    }
}

impl FromStr for Velocity {
    type Err = Error;

    /// `rigid-rotation`, `swirling:T=<real>` or `constant:a=<real>,b=<real>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |m: &str| Error::Parameter(format!("velocity '{s}': {m}"));
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for part in args.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("bad number"))?;
            if !v.is_finite() {
                return Err(bad("non-finite value"));
            }
            kv.push((k.trim().to_string(), v));
        }
        let get = |k: &str| kv.iter().find(|(n, _)| n == k).map(|&(_, v)| v);
        let expect_keys = |keys: &[&str]| {
            if kv.iter().all(|(n, _)| keys.contains(&n.as_str())) {
                Ok(())
            } else {
                Err(bad("unknown key"))
            }
        };
        match name.trim() {
            "rigid-rotation" => {
                expect_keys(&[])?;
                Ok(Velocity::RigidRotation)
            }
            "swirling" => {
                expect_keys(&["T"])?;
                let period = get("T").ok_or_else(|| bad("missing T"))?;
                if period <= 0.0 {
                    return Err(bad("T must be positive"));
                }
                Ok(Velocity::Swirling { period })
            }
            "constant" => {
                expect_keys(&["a", "b"])?;
                Ok(Velocity::Constant {
                    a: get("a").unwrap_or(0.0),
                    b: get("b").unwrap_or(0.0),
                })
            }
            _ => Err(bad("unknown field")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divergence(v: &Velocity, x: f64, y: f64, t: f64) -> f64 {
        let h = 1e-5;
        let (ax1, _) = v.eval(x + h, y, t);
        let (ax0, _) = v.eval(x - h, y, t);
        let (_, by1) = v.eval(x, y + h, t);
        let (_, by0) = v.eval(x, y - h, t);
        (ax1 - ax0 + by1 - by0) / (2.0 * h)
    }

    #[test]
    fn parse_round_trip() {
        for s in ["rigid-rotation", "swirling:T=1.5", "constant:a=1,b=-0.5"] {
            let v: Velocity = s.parse().unwrap();
            assert_eq!(v.to_string().parse::<Velocity>().unwrap(), v);
        }
        assert_eq!(
            "swirling:T=1.5".parse::<Velocity>().unwrap(),
            Velocity::Swirling { period: 1.5 }
        );
    }

    #[test]
    fn parse_errors() {
        for s in ["", "spin", "swirling", "swirling:T=0", "swirling:T=x", "constant:c=1"] {
            assert!(s.parse::<Velocity>().is_err(), "{s}");
        }
    }

    #[test]
    fn builtins_are_divergence_free() {
        for v in [Velocity::RigidRotation, Velocity::Swirling { period: 1.5 }] {
            for (x, y) in [(0.3, 0.2), (-1.1, 2.0), (2.5, -0.7)] {
                assert!(divergence(&v, x, y, 0.4).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn swirling_reverses_at_half_period() {
        let v = Velocity::Swirling { period: 2.0 };
        let (a0, b0) = v.eval(0.5, 0.7, 0.2);
        let (a1, b1) = v.eval(0.5, 0.7, 1.8);
        assert!((a0 + a1).abs() < 1e-14 && (b0 + b1).abs() < 1e-14);
        let (a, b) = v.eval(0.5, 0.7, 1.0);
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
    }

    #[test]
    fn closures_are_fields() {
        let f = |x: f64, _y: f64, t: f64| (x * t, 1.0);
        assert_eq!(VelocityField::eval(&f, 2.0, 0.0, 3.0), (6.0, 1.0));
    }
}
