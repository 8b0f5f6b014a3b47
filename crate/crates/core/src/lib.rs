//! Third-order conservative semi-Lagrangian discontinuous Galerkin transport
//! on unstructured triangular meshes.
//!
//! Each time step traces the six quadratic nodes of every Eulerian triangle
//! backward along the characteristics, fits a quadratic-curvilinear upstream
//! cell, splits it into signed convex pieces and clips those pieces against
//! the background mesh. The overlap integrals of the old solution against
//! the pulled-back test functions are evaluated exactly as boundary line
//! integrals, so the update is conservative by construction.
//!
//! Module map:
//! - [`mesh`]: triangular meshes, refinement, the auxiliary lookup grid
//! - [`dg`]: orthonormal modal bases, projection, norms, mass
//! - [`geometry`]: parametric arcs, intersections, inclusion, convex clipping
//! - [`quadrature`]: Gauss rules, bivariate polynomials, Green's-theorem integrals
//! - [`transport`]: velocity fields, characteristic tracing, upstream cells
//! - [`remap`]: overlap search, the SLDG update and the limiters
//! - [`harness`]: benchmark problems, time loop, convergence studies
//! - [`selftest`]: independent oracles for the geometry/quadrature layer

// Negated float comparisons are deliberate: they reject NaN. Index loops
// mirror the triangular solves.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dg;
mod error;
pub mod geometry;
pub mod harness;
pub mod mesh;
pub mod quadrature;
pub mod remap;
pub mod selftest;
pub mod transport;

pub use dg::{DgField, DgSpace, ElementBasis, NormReport};
pub use error::{Error, Result};
pub use geometry::{ConvexRegion, Edge, ParametricArc, Point, Segment, Sign, SignedPiece};
pub use mesh::{AuxGrid, Element, Mesh};
pub use quadrature::{BivariatePoly, BoundaryPath, GaussRule};
pub use remap::{LimiterConfig, StepOptions, StepReport};
pub use transport::{TraceConfig, UpstreamElement, UpstreamShape, Velocity, VelocityField};
