use super::Mesh;
use crate::geometry::{point_in_triangle, BBox, Point};
use crate::{Error, Result};

/// Uniform bin grid over the mesh bounding box. Every element is registered
/// in each bin its bounding box touches.
#[derive(Clone, Debug)]
pub struct AuxGrid {
    origin: Point,
    dx: f64,
    dy: f64,
    nx: usize,
    ny: usize,
    bins: Vec<Vec<usize>>,
    extent: BBox,
}

impl AuxGrid {
    pub fn new(mesh: &Mesh, bin_size: f64) -> Result<Self> {
        if !(bin_size > 0.0 && bin_size.is_finite()) {
            return Err(Error::Parameter(format!("bin size {bin_size} must be positive")));
        }
        let extent = mesh.bbox();
        let nx = ((extent.width() / bin_size).ceil() as usize).max(1);
        let ny = ((extent.height() / bin_size).ceil() as usize).max(1);
        let dx = (extent.width() / nx as f64).max(f64::MIN_POSITIVE);
        let dy = (extent.height() / ny as f64).max(f64::MIN_POSITIVE);
        let mut grid = Self {
            origin: extent.min,
            dx,
            dy,
            nx,
            ny,
            bins: vec![Vec::new(); nx * ny],
            extent,
        };
        for j in 0..mesh.len() {
            if let Some((i0, i1, k0, k1)) = grid.range(&mesh.element_bbox(j)) {
                for k in k0..=k1 {
                    for i in i0..=i1 {
                        grid.bins[k * nx + i].push(j);
                    }
                }
            }
        }
        Ok(grid)
    }

    /// Bins of size twice the mean element diameter.
    pub fn with_default_bins(mesh: &Mesh) -> Self {
        Self::new(mesh, 2.0 * mesh.mean_diameter()).expect("positive diameter")
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn bin(&self, i: usize, k: usize) -> &[usize] {
        &self.bins[k * self.nx + i]
    }

    fn range(&self, b: &BBox) -> Option<(usize, usize, usize, usize)> {
        if !self.extent.intersects(b, 0.0) {
            return None;
        }
        let cell = |v: f64, o: f64, d: f64, n: usize| {
            (((v - o) / d).floor().max(0.0) as usize).min(n - 1)
        };
        Some((
            cell(b.min.x, self.origin.x, self.dx, self.nx),
            cell(b.max.x, self.origin.x, self.dx, self.nx),
            cell(b.min.y, self.origin.y, self.dy, self.ny),
            cell(b.max.y, self.origin.y, self.dy, self.ny),
        ))
    }

    /// Sorted ids of all elements registered in bins touched by `b`; a
    /// superset of the elements whose bounding boxes meet `b`.
    pub fn candidates_for_box(&self, b: &BBox) -> Vec<usize> {
        let Some((i0, i1, k0, k1)) = self.range(b) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for k in k0..=k1 {
            for i in i0..=i1 {
                out.extend_from_slice(&self.bins[k * self.nx + i]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Element containing `p` (closed, with tolerance `tol`), if any.
    pub fn locate(&self, mesh: &Mesh, p: Point, tol: f64) -> Option<usize> {
        let b = BBox::from_points([p]);
        self.candidates_for_box(&b)
            .into_iter()
            .find(|&j| point_in_triangle(p, mesh.triangle(j), tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::circle_mesh;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_element_single_bin() {
        let m = Mesh::parse("3 1\n0 0\n1 0\n0 1\n0 1 2\n").unwrap();
        let g = AuxGrid::new(&m, 10.0).unwrap();
        assert_eq!(g.dims(), (1, 1));
        assert_eq!(g.bin(0, 0), &[0]);
        assert!(AuxGrid::new(&m, 0.0).is_err());
    }

    #[test]
    fn straddling_element_in_four_bins() {
        let m = Mesh::parse("4 2\n0 0\n2 0\n2 2\n0 2\n0 1 2\n0 2 3\n").unwrap();
        let g = AuxGrid::new(&m, 1.0).unwrap();
        for (i, k) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert!(g.bin(i, k).contains(&0));
        }
    }

    #[test]
    fn boxes_outside_and_covering() {
        let m = circle_mesh(4, std::f64::consts::PI, 0.1, 1);
        let g = AuxGrid::with_default_bins(&m);
        let far = BBox::from_points([Point::new(100.0, 100.0), Point::new(101.0, 101.0)]);
        assert!(g.candidates_for_box(&far).is_empty());
        assert_eq!(g.candidates_for_box(&m.bbox()).len(), m.len());
    }

    #[test]
    fn random_points_find_their_element() {
        let m = circle_mesh(6, std::f64::consts::PI, 0.1, 3);
        let g = AuxGrid::with_default_bins(&m);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut hits = 0;
        while hits < 1000 {
            let p = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let brute = (0..m.len()).find(|&j| point_in_triangle(p, m.triangle(j), 0.0));
            let Some(want) = brute else { continue };
            let cands = g.candidates_for_box(&BBox::from_points([p]));
            assert!(cands.contains(&want));
            hits += 1;
        }
    }
}
