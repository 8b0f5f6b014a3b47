//! Unstructured triangular meshes, refinement, and the bin grid used to find
//! candidate overlaps.

mod aux;
mod generate;
mod io;

use std::collections::HashMap;

pub use aux::AuxGrid;
pub use generate::{circle_mesh, circle_level, CIRCLE_LEVELS};

use crate::geometry::{signed_area, BBox, Point};
use crate::{Error, Result};

/// Straight triangle with cached metrics. Local edge `k` joins corners `k`
/// and `k + 1`; `neighbors[k]` is the element across it.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub id: usize,
    pub corners: [usize; 3],
    pub neighbors: [Option<usize>; 3],
    pub area: f64,
    pub perimeter: f64,
    /// `2 |K| / |dK|`, the inscribed-circle radius.
    pub r: f64,
    pub centroid: Point,
    pub diameter: f64,
}

/// Area, perimeter and `r = 2 area / perimeter` of a triangle.
pub fn element_metrics(a: Point, b: Point, c: Point) -> Result<(f64, f64, f64)> {
    let area = signed_area(a, b, c).abs();
    let perimeter = a.dist(b) + b.dist(c) + c.dist(a);
    if !(area > 1e-14 * perimeter * perimeter) {
        return Err(Error::DegenerateElement { id: 0, area });
    }
    Ok((area, perimeter, 2.0 * area / perimeter))
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Point>,
    elements: Vec<Element>,
    boundary_edges: Vec<(usize, usize)>,
    boundary_vertex: Vec<bool>,
    r_max: f64,
    r_min: f64,
}

impl Mesh {
    /// Builds adjacency and metrics; clockwise triangles are reoriented.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Topology("mesh has no elements".into()));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::Topology(format!("vertex {i} is not finite")));
        }
        let nv = vertices.len();
        let mut elements = Vec::with_capacity(triangles.len());
        for (id, t) in triangles.into_iter().enumerate() {
            if t.iter().any(|&i| i >= nv) {
                return Err(Error::Topology(format!("element {id} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Topology(format!("element {id} repeats a vertex")));
            }
            let mut c = t;
            let (a, b, d) = (vertices[c[0]], vertices[c[1]], vertices[c[2]]);
            if signed_area(a, b, d) < 0.0 {
                c.swap(1, 2);
            }
            let p = [vertices[c[0]], vertices[c[1]], vertices[c[2]]];
            let (area, perimeter, r) = element_metrics(p[0], p[1], p[2])
                .map_err(|_| Error::DegenerateElement {
                    id,
                    area: signed_area(p[0], p[1], p[2]),
                })?;
            let diameter = p[0].dist(p[1]).max(p[1].dist(p[2])).max(p[2].dist(p[0]));
            elements.push(Element {
                id,
                corners: c,
                neighbors: [None; 3],
                area,
                perimeter,
                r,
                centroid: (p[0] + p[1] + p[2]) / 3.0,
                diameter,
            });
        }

        let mut by_edge: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for e in &elements {
            for k in 0..3 {
                let (a, b) = (e.corners[k], e.corners[(k + 1) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push((e.id, k));
            }
        }
        let mut boundary_edges = Vec::new();
        let mut keys: Vec<_> = by_edge.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let owners = &by_edge[&key];
            match owners.as_slice() {
                [(e, k)] => boundary_edges.push((*e, *k)),
                [(e1, k1), (e2, k2)] => {
                    elements[*e1].neighbors[*k1] = Some(*e2);
                    elements[*e2].neighbors[*k2] = Some(*e1);
                }
                _ => {
                    return Err(Error::Topology(format!(
                        "edge ({}, {}) shared by {} elements",
                        key.0,
                        key.1,
                        owners.len()
                    )))
                }
            }
        }
        boundary_edges.sort_unstable();
        let mut boundary_vertex = vec![false; nv];
        for &(e, k) in &boundary_edges {
            let c = elements[e].corners;
            boundary_vertex[c[k]] = true;
            boundary_vertex[c[(k + 1) % 3]] = true;
        }
        let r_max = elements.iter().map(|e| e.r).fold(0.0, f64::max);
        let r_min = elements.iter().map(|e| e.r).fold(f64::INFINITY, f64::min);
        Ok(Self {
            vertices,
            elements,
            boundary_edges,
            boundary_vertex,
            r_max,
            r_min,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, j: usize) -> &Element {
        &self.elements[j]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `(element, local edge)` pairs without a neighbor.
    pub fn boundary_edges(&self) -> &[(usize, usize)] {
        &self.boundary_edges
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn has_boundary_edge(&self, j: usize) -> bool {
        self.elements[j].neighbors.iter().any(Option::is_none)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn triangle(&self, j: usize) -> [Point; 3] {
        let c = self.elements[j].corners;
        [self.vertices[c[0]], self.vertices[c[1]], self.vertices[c[2]]]
    }

    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(|e| e.area).sum()
    }

    pub fn bbox(&self) -> BBox {
        BBox::from_points(self.vertices.iter().copied())
    }

    pub fn element_bbox(&self, j: usize) -> BBox {
        BBox::from_points(self.triangle(j))
    }

    pub fn mean_diameter(&self) -> f64 {
        self.elements.iter().map(|e| e.diameter).sum::<f64>() / self.len() as f64
    }

    /// Triangles as vertex index triples.
    pub fn connectivity(&self) -> Vec<[usize; 3]> {
        self.elements.iter().map(|e| e.corners).collect()
    }

    /// Splits every triangle into four through its edge midpoints.
    pub fn refine_midpoint(&self) -> Mesh {
        self.refine_with(|m, _| m)
    }

    /// Like [`Mesh::refine_midpoint`], but midpoints of boundary edges are
    /// projected onto the circle of the given radius about the origin.
    pub fn refine_midpoint_snapped(&self, radius: f64) -> Mesh {
        self.refine_with(|m, boundary| {
            if boundary && m.norm() > 0.0 {
                m * (radius / m.norm())
            } else {
                m
            }
        })
    }

    fn refine_with(&self, place: impl Fn(Point, bool) -> Point) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tris = Vec::with_capacity(4 * self.len());
        for e in &self.elements {
            let c = e.corners;
            let mut m = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (c[k], c[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let boundary = e.neighbors[k].is_none();
                m[k] = *mid.entry(key).or_insert_with(|| {
                    vertices.push(place(self.vertices[a].midpoint(self.vertices[b]), boundary));
                    vertices.len() - 1
                });
            }
            tris.push([c[0], m[0], m[2]]);
            tris.push([m[0], c[1], m[1]]);
            tris.push([m[2], m[1], c[2]]);
            tris.push([m[0], m[1], m[2]]);
        }
        Mesh::new(vertices, tris).expect("refinement of a valid mesh is valid")
    }
}
