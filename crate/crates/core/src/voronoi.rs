//! Bounded Voronoi diagrams on convex domains.
//!
//! Each cell is the domain clipped by the perpendicular bisectors to every
//! other generator, `O(n²)` half-plane clips in total. Cells are built
//! independently so the construction parallelizes per generator.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom2d::{ConvexPolygon, HalfPlane, Point2, EPS_GEOM};

/// A generator together with its clipped region and cached metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCell {
    pub generator: Point2,
    pub polygon: ConvexPolygon,
    pub centroid: Point2,
    pub area: f64,
    pub diameter: f64,
}

impl VoronoiCell {
    pub fn new(generator: Point2, polygon: ConvexPolygon) -> Self {
        Self {
            generator,
            centroid: polygon.centroid(),
            area: polygon.area(),
            diameter: polygon.diameter(),
            polygon,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tessellation {
    pub domain: ConvexPolygon,
    pub cells: Vec<VoronoiCell>,
}

impl Tessellation {
    pub fn generators(&self) -> Vec<Point2> {
        self.cells.iter().map(|c| c.generator).collect()
    }

    pub fn centroids(&self) -> Vec<Point2> {
        self.cells.iter().map(|c| c.centroid).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the nearest generator; ties go to the lowest index.
    pub fn nearest_generator(&self, p: Point2) -> Result<usize> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        Ok(nearest_index(self.cells.iter().map(|c| c.generator), p))
    }
}

/// Index of the point closest to `p`, lowest index on ties. Panics on an empty iterator.
pub fn nearest_index(points: impl IntoIterator<Item = Point2>, p: Point2) -> usize {
    let mut best = None::<(usize, f64)>;
    for (i, g) in points.into_iter().enumerate() {
        let d = g.distance_sq(p);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.expect("nearest_index called with no points").0
}

/// Checks the generator preconditions shared by the Voronoi and Lloyd entry points.
pub fn validate_generators(generators: &[Point2], domain: &ConvexPolygon) -> Result<()> {
    if generators.is_empty() {
        return Err(Error::InvalidConfig("at least one generator is required".into()));
    }
    for g in generators {
        if !g.is_finite() || !domain.contains(*g) {
            return Err(Error::OutOfDomain { x: g.x, y: g.y });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if generators[i].distance(generators[j]) <= EPS_GEOM {
                return Err(Error::DuplicateGenerator { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn build_cell(i: usize, generators: &[Point2], domain: &ConvexPolygon) -> Result<VoronoiCell> {
    let owner = generators[i];
    let mut poly = domain.clone();
    for (j, &other) in generators.iter().enumerate() {
        if j == i {
            continue;
        }
        let hp = HalfPlane::bisector(owner, other)?;
        poly = poly.clip(&hp).ok_or_else(|| {
            Error::DegenerateGeometry(format!(
                "Voronoi cell of generator {i} at ({}, {}) vanished",
                owner.x, owner.y
            ))
        })?;
    }
    Ok(VoronoiCell::new(owner, poly))
}

/// Voronoi diagram of `generators` restricted to `domain`.
pub fn bounded_voronoi(generators: &[Point2], domain: &ConvexPolygon) -> Result<Tessellation> {
    validate_generators(generators, domain)?;
    let cells = (0..generators.len())
        .into_par_iter()
        .map(|i| build_cell(i, generators, domain))
        .collect::<Result<Vec<_>>>()?;
    Ok(Tessellation {
        domain: domain.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvt::sample_initial_generators;
    use crate::rng::{stream, Purpose};
    use rand::Rng;

    fn two_generator_square() -> Tessellation {
        bounded_voronoi(
            &[Point2::new(0.25, 0.5), Point2::new(0.75, 0.5)],
            &ConvexPolygon::unit_square(),
        )
        .unwrap()
    }

    #[test]
    fn single_generator_owns_domain() {
        let sq = ConvexPolygon::unit_square();
        let t = bounded_voronoi(&[Point2::new(0.2, 0.9)], &sq).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.cells[0].polygon, sq);
    }

    #[test]
    fn two_generators_split_at_half() {
        let t = two_generator_square();
        for (cell, x0) in t.cells.iter().zip([0.0, 0.5]) {
            assert!((cell.area - 0.5).abs() < 1e-15);
            let bb = cell.polygon.bounding_box();
            assert!((bb.min.x - x0).abs() < 1e-15 && (bb.max.x - x0 - 0.5).abs() < 1e-15);
            assert_eq!((bb.min.y, bb.max.y), (0.0, 1.0));
        }
    }

    #[test]
    fn random_generators_partition_and_match_nearest() {
        let sq = ConvexPolygon::unit_square();
        let gens = sample_initial_generators(&sq, 5, 2024);
        let t = bounded_voronoi(&gens, &sq).unwrap();
        let total: f64 = t.cells.iter().map(|c| c.area).sum();
        assert!((total - 1.0).abs() < 1e-9);

        let mut rng = stream(77, Purpose::Oracle);
        for _ in 0..10_000 {
            let p = Point2::new(rng.random(), rng.random());
            // exhaustive nearest-generator oracle
            let mut owner = 0;
            for (i, g) in gens.iter().enumerate() {
                if g.distance_sq(p) < gens[owner].distance_sq(p) {
                    owner = i;
                }
            }
            assert!(t.cells[owner].polygon.contains(p));
            assert_eq!(t.nearest_generator(p).unwrap(), owner);
        }
    }

    #[test]
    fn nearest_generator_tie_breaks_low() {
        let t = two_generator_square();
        assert_eq!(t.nearest_generator(Point2::new(0.1, 0.5)).unwrap(), 0);
        assert_eq!(t.nearest_generator(Point2::new(0.5, 0.5)).unwrap(), 0);
        assert!(matches!(
            t.nearest_generator(Point2::new(1.5, 0.5)),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn rejects_bad_generators() {
        let sq = ConvexPolygon::unit_square();
        let dup = [Point2::new(0.3, 0.3), Point2::new(0.3, 0.3 + 1e-12)];
        assert!(matches!(
            bounded_voronoi(&dup, &sq),
            Err(Error::DuplicateGenerator { first: 0, second: 1 })
        ));
        assert!(matches!(
            bounded_voronoi(&[Point2::new(1.5, 0.5)], &sq),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(bounded_voronoi(&[], &sq).is_err());
    }

    #[test]
    fn generator_on_boundary_is_allowed() {
        let sq = ConvexPolygon::unit_square();
        let t = bounded_voronoi(&[Point2::new(0.0, 0.5), Point2::new(1.0, 0.5)], &sq).unwrap();
        assert!(t.cells.iter().all(|c| c.polygon.contains(c.generator)));
    }
}
