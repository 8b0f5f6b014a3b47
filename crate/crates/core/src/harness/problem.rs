use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::mesh::{circle_level, Mesh};
use crate::transport::Velocity;
use crate::{Error, Result};

/// Named initial conditions on the disk of radius `pi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialCondition {
    /// `exp(-3 (x^2 + y^2))`.
    Gaussian,
    /// `r0 cos^6(pi r / (2 r0))` about `(0.45 pi, 0)` with `r0 = 0.45 pi`.
    CosineBell,
    SlottedDisk,
    /// Slotted disk, cone and smooth hump.
    DiskConeHump,
}

/// Unit-square coordinates of the classic solid-body layout.
fn unit_square(x: f64, y: f64) -> (f64, f64) {
    (x / (2.0 * PI) + 0.5, y / (2.0 * PI) + 0.5)
}

fn slotted_disk(xi: f64, eta: f64) -> f64 {
    let r = ((xi - 0.5).powi(2) + (eta - 0.75).powi(2)).sqrt();
    let slot = (xi - 0.5).abs() < 0.025 && eta < 0.85;
    if r <= 0.15 && !slot {
        1.0
    } else {
        0.0
    }
}

fn cone(xi: f64, eta: f64) -> f64 {
    let r = ((xi - 0.5).powi(2) + (eta - 0.25).powi(2)).sqrt() / 0.15;
    (1.0 - r).max(0.0)
}

fn hump(xi: f64, eta: f64) -> f64 {
    let r = ((xi - 0.25).powi(2) + (eta - 0.5).powi(2)).sqrt() / 0.15;
    if r <= 1.0 {
        0.25 * (1.0 + (PI * r).cos())
    } else {
        0.0
    }
}

impl InitialCondition {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            InitialCondition::Gaussian => (-3.0 * (x * x + y * y)).exp(),
            InitialCondition::CosineBell => {
                let r0 = 0.45 * PI;
                let r = ((x - 0.45 * PI).powi(2) + y * y).sqrt();
                if r < r0 {
                    r0 * (r * PI / (2.0 * r0)).cos().powi(6)
                } else {
                    0.0
                }
            }
            InitialCondition::SlottedDisk => {
                let (xi, eta) = unit_square(x, y);
                slotted_disk(xi, eta)
            }
            InitialCondition::DiskConeHump => {
                let (xi, eta) = unit_square(x, y);
                slotted_disk(xi, eta) + cone(xi, eta) + hump(xi, eta)
            }
        }
    }
}

/// Benchmark problems: a velocity field with an initial condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Gaussian under rigid rotation.
    Rotation,
    /// Cosine bell under swirling deformation with period `t_final`.
    Swirling,
    /// Slotted disk under rigid rotation.
    SlottedDisk,
    /// Slotted disk, cone and hump under rigid rotation.
    DiskConeHump,
    /// Slotted disk under swirling deformation.
    SwirlingDisk,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Rotation,
        Problem::Swirling,
        Problem::SlottedDisk,
        Problem::DiskConeHump,
        Problem::SwirlingDisk,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Problem::Rotation => "rotation",
            Problem::Swirling => "swirling",
            Problem::SlottedDisk => "slotted-disk",
            Problem::DiskConeHump => "disk-cone-hump",
            Problem::SwirlingDisk => "swirling-disk",
        }
    }

    pub fn initial(&self) -> InitialCondition {
        match self {
            Problem::Rotation => InitialCondition::Gaussian,
            Problem::Swirling => InitialCondition::CosineBell,
            Problem::SlottedDisk | Problem::SwirlingDisk => InitialCondition::SlottedDisk,
            Problem::DiskConeHump => InitialCondition::DiskConeHump,
        }
    }

    /// Velocity for a run ending at `t_final`; swirling flows use it as the
    /// period so the data return to their initial state.
    pub fn velocity(&self, t_final: f64) -> Velocity {
        match self {
            Problem::Swirling | Problem::SwirlingDisk => Velocity::Swirling { period: t_final },
            _ => Velocity::RigidRotation,
        }
    }

    pub fn default_t_final(&self) -> f64 {
        match self {
            Problem::Swirling => 1.5,
            _ => 2.0 * PI,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Problem::ALL.iter().map(Problem::name).collect();
                Error::Parameter(format!("unknown problem '{s}' (one of {})", names.join(", ")))
            })
    }
}

/// The committed benchmark meshes `meshes/circle_L1.txt` .. `circle_L4.txt`.
const SHIPPED_LEVELS: [&str; 4] = [
    include_str!("../../../../meshes/circle_L1.txt"),
    include_str!("../../../../meshes/circle_L2.txt"),
    include_str!("../../../../meshes/circle_L3.txt"),
    include_str!("../../../../meshes/circle_L4.txt"),
];

/// Where a mesh comes from: a benchmark level or a mesh file. Levels 1-4
/// are the shipped files; higher levels fall back to the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeshSource {
    Level(usize),
    Path(PathBuf),
}

impl MeshSource {
    pub fn load(&self) -> Result<Mesh> {
        match self {
            MeshSource::Level(l) => match SHIPPED_LEVELS.get(l.wrapping_sub(1)) {
                Some(text) => Mesh::parse(text),
                None => Ok(circle_level(*l)),
            },
            MeshSource::Path(p) => Mesh::load(p),
        }
    }
}

impl fmt::Display for MeshSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSource::Level(l) => write!(f, "level:{l}"),
            MeshSource::Path(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for MeshSource {
    type Err = Error;

    /// `level:N` (N >= 1) or a path.
    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("level:") {
            Some(n) => match n.parse::<usize>() {
                Ok(l) if l >= 1 => Ok(MeshSource::Level(l)),
                _ => Err(Error::Parameter(format!("bad mesh level '{n}'"))),
            },
            None if s.is_empty() => Err(Error::Parameter("empty mesh path".into())),
            None => Ok(MeshSource::Path(PathBuf::from(s))),
        }
    }
}
