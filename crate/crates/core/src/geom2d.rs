//! Planar geometry kernel.
//!
//! Everything here works on unit-scale coordinates with a single absolute
//! tolerance, [`EPS_GEOM`], used for orientation, convexity and
//! on-boundary decisions. Inputs far from the unit box should be rescaled
//! first.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute geometric tolerance for unit-scale coordinates.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn distance_sq(self, other: Point2) -> f64 {
        (self - other).norm_sq()
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn new(min: Point2, max: Point2) -> Self {
        Self { min, max }
    }

    pub fn unit() -> Self {
        Self::new(Point2::ORIGIN, Point2::new(1.0, 1.0))
    }

    /// Bounding box of a non-empty point set.
    pub fn from_points(points: &[Point2]) -> Self {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    /// Closest point of the box to `p`.
    pub fn clamp(&self, p: Point2) -> Point2 {
        Point2::new(p.x.clamp(self.min.x, self.max.x), p.y.clamp(self.min.y, self.max.y))
    }

    /// Smallest and largest distance from `p` to a point of the box.
    pub fn distance_range(&self, p: Point2) -> (f64, f64) {
        let near = self.clamp(p).distance(p);
        let far = self
            .corners()
            .iter()
            .map(|c| c.distance(p))
            .fold(0.0, f64::max);
        (near, far)
    }
}

/// The closed half-plane `{p : normal · p <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    normal: Point2,
    offset: f64,
}

impl HalfPlane {
    /// Builds a half-plane, normalizing `normal` to unit length.
    pub fn new(normal: Point2, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len.is_finite() && offset.is_finite()) || len <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateGeometry(format!(
                "half-plane normal ({}, {}) cannot be normalized",
                normal.x, normal.y
            )));
        }
        Ok(Self {
            normal: normal * (1.0 / len),
            offset: offset / len,
        })
    }

    /// Points at least as close to `owner` as to `other`.
    pub fn bisector(owner: Point2, other: Point2) -> Result<Self> {
        let normal = other - owner;
        let offset = 0.5 * (other.norm_sq() - owner.norm_sq());
        Self::new(normal, offset)
    }

    pub fn normal(&self) -> Point2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Positive outside, negative inside.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn complement(&self) -> Self {
        Self {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

pub type Triangle = [Point2; 3];

pub fn triangle_area(t: &Triangle) -> f64 {
    0.5 * (t[1] - t[0]).cross(t[2] - t[0])
}

fn shoelace(vertices: &[Point2]) -> f64 {
    let origin = vertices[0];
    let mut twice = 0.0;
    for i in 1..vertices.len() - 1 {
        twice += (vertices[i] - origin).cross(vertices[i + 1] - origin);
    }
    0.5 * twice
}

/// Merge consecutive vertices (cyclically) that are closer than `EPS_GEOM`.
fn merge_close_vertices(vertices: &mut Vec<Point2>) {
    vertices.dedup_by(|b, a| a.distance(*b) <= EPS_GEOM);
    while vertices.len() > 1 && vertices[0].distance(vertices[vertices.len() - 1]) <= EPS_GEOM {
        vertices.pop();
    }
}

/// A convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Validates and cleans a vertex ring. Clockwise input is reversed.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::DegenerateGeometry(format!(
                "non-finite vertex ({}, {})",
                p.x, p.y
            )));
        }
        let mut vertices = vertices;
        merge_close_vertices(&mut vertices);
        if vertices.len() < 3 {
            return Err(Error::DegenerateGeometry(format!(
                "polygon needs at least 3 distinct vertices, got {}",
                vertices.len()
            )));
        }
        let signed = shoelace(&vertices);
        if signed.abs() <= EPS_GEOM * EPS_GEOM {
            return Err(Error::DegenerateGeometry(format!(
                "polygon area {signed:e} is below tolerance"
            )));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = (b - a).cross(c - b);
            if turn < -EPS_GEOM {
                return Err(Error::NotConvex(format!(
                    "reflex turn {turn:e} at vertex ({}, {})",
                    b.x, b.y
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Point2::new(x0, y0),
            Point2::new(x1, y0),
            Point2::new(x1, y1),
            Point2::new(x0, y1),
        ])
    }

    pub fn unit_square() -> Self {
        Self::rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square is valid")
    }

    /// Regular polygon inscribed in a circle, first vertex at angle `phase`.
    pub fn regular(n: usize, center: Point2, radius: f64, phase: f64) -> Result<Self> {
        let vertices = (0..n)
            .map(|i| {
                let t = phase + std::f64::consts::TAU * i as f64 / n as f64;
                center + Point2::new(t.cos(), t.sin()) * radius
            })
            .collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    /// Area-weighted centroid.
    pub fn centroid(&self) -> Point2 {
        let origin = self.vertices[0];
        let mut twice_area = 0.0;
        let mut acc = Point2::ORIGIN;
        for i in 1..self.vertices.len() - 1 {
            let a = self.vertices[i] - origin;
            let b = self.vertices[i + 1] - origin;
            let w = a.cross(b);
            twice_area += w;
            acc += (a + b) * w;
        }
        origin + acc * (1.0 / (3.0 * twice_area))
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(a.distance(*b));
            }
        }
        best
    }

    pub fn bounding_box(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    /// Inside or within `EPS_GEOM` of the boundary.
    pub fn contains(&self, p: Point2) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -EPS_GEOM * e.norm()
        })
    }

    /// Intersection with a half-plane; `None` when nothing of positive area is left.
    pub fn clip(&self, hp: &HalfPlane) -> Option<ConvexPolygon> {
        let dist: Vec<f64> = self.vertices.iter().map(|&p| hp.signed_distance(p)).collect();
        if dist.iter().all(|&d| d <= 0.0) {
            return Some(self.clone());
        }
        // snap vertices lying within tolerance of the cut line onto it
        let snapped: Vec<(Point2, f64)> = self
            .vertices
            .iter()
            .zip(&dist)
            .map(|(&p, &d)| {
                if d.abs() <= EPS_GEOM {
                    (p - hp.normal() * d, 0.0)
                } else {
                    (p, d)
                }
            })
            .collect();
        let n = snapped.len();
        let mut out = Vec::with_capacity(n + 2);
        for i in 0..n {
            let (a, da) = snapped[i];
            let (b, db) = snapped[(i + 1) % n];
            if da <= 0.0 {
                out.push(a);
            }
            if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
                out.push(a.lerp(b, da / (da - db)));
            }
        }
        merge_close_vertices(&mut out);
        if out.len() < 3 || shoelace(&out) <= EPS_GEOM * EPS_GEOM {
            return None;
        }
        Some(ConvexPolygon { vertices: out })
    }

    /// Fan triangulation from the centroid; one triangle per edge.
    pub fn triangulate_fan(&self) -> Vec<Triangle> {
        let c = self.centroid();
        self.edges().map(|(a, b)| [c, a, b]).collect()
    }

    /// Nearest point of the closed polygon to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        if self.contains(p) {
            return p;
        }
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            let t = ((p - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
            let q = a + e * t;
            let d = q.distance_sq(p);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }

    /// Applies an orientation-preserving map to every vertex.
    pub fn map_vertices(&self, f: impl Fn(Point2) -> Point2) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }
}

/// A simple (possibly non-convex) counter-clockwise polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point2>,
}

impl SimplePolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateGeometry("non-finite vertex".into()));
        }
        let mut vertices = vertices;
        merge_close_vertices(&mut vertices);
        if vertices.len() < 3 {
            return Err(Error::DegenerateGeometry(format!(
                "polygon needs at least 3 distinct vertices, got {}",
                vertices.len()
            )));
        }
        let signed = shoelace(&vertices);
        if signed.abs() <= EPS_GEOM * EPS_GEOM {
            return Err(Error::DegenerateGeometry("polygon has zero area".into()));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                // adjacent edges share a vertex
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::DegenerateGeometry(format!(
                        "edges {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Ray casting, with points within `EPS_GEOM` of an edge counted as inside.
    pub fn contains(&self, p: Point2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if point_segment_distance(p, a, b) <= EPS_GEOM {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn bounding_box(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    pub fn convex_hull(&self) -> Result<ConvexPolygon> {
        convex_hull(&self.vertices)
    }
}

impl From<&ConvexPolygon> for SimplePolygon {
    fn from(poly: &ConvexPolygon) -> Self {
        SimplePolygon {
            vertices: poly.vertices.clone(),
        }
    }
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let len_sq = e.norm_sq();
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len_sq).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

fn orientation(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    point_segment_distance(c, a, b) <= EPS_GEOM
        || point_segment_distance(d, a, b) <= EPS_GEOM
        || point_segment_distance(a, c, d) <= EPS_GEOM
        || point_segment_distance(b, c, d) <= EPS_GEOM
}

/// Andrew's monotone chain. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point2]) -> Result<ConvexPolygon> {
    let mut pts: Vec<Point2> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|b, a| a.distance(*b) <= EPS_GEOM);
    if pts.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "convex hull needs 3 distinct points, got {}",
            pts.len()
        )));
    }
    let turns_left = |h: &[Point2], p: Point2| orientation(h[h.len() - 2], h[h.len() - 1], p) > EPS_GEOM;
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && !turns_left(&hull, p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !turns_left(&hull, p) {
            hull.pop();
        }
        hull.push(p);
    }
    // closing point repeats the first
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry("points are collinear".into()));
    }
    ConvexPolygon::new(hull)
}

/// Rigid rotation of every point about `center`.
pub fn rotate_about(points: &[Point2], center: Point2, angle: f64) -> Vec<Point2> {
    if angle == 0.0 {
        return points.to_vec();
    }
    let (s, c) = angle.sin_cos();
    points
        .iter()
        .map(|&p| {
            let d = p - center;
            center + Point2::new(c * d.x - s * d.y, s * d.x + c * d.y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn tri(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ConvexPolygon {
        ConvexPolygon::new(vec![a.into(), b.into(), c.into()]).unwrap()
    }

    fn l_shape() -> SimplePolygon {
        SimplePolygon::new(
            [[0., 0.], [2., 0.], [2., 1.], [1., 1.], [1., 2.], [0., 2.]]
                .into_iter()
                .map(Point2::from)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(ConvexPolygon::unit_square().area(), 1.0);
        assert_eq!(tri([0., 0.], [1., 0.], [0., 1.]).area(), 0.5);
        assert_eq!(ConvexPolygon::rectangle(0., 0., 2., 2.).unwrap().area(), 4.0);
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(ConvexPolygon::unit_square().centroid(), Point2::new(0.5, 0.5));
        let c = tri([0., 0.], [3., 0.], [0., 3.]).centroid();
        assert!(approx(c.x, 1.0, 1e-15) && approx(c.y, 1.0, 1e-15));
        let r = ConvexPolygon::rectangle(0., 0., 0.5, 1.).unwrap().centroid();
        assert!(approx(r.x, 0.25, 1e-15) && approx(r.y, 0.5, 1e-15));
    }

    #[test]
    fn diameter_examples() {
        assert!(approx(ConvexPolygon::unit_square().diameter(), 2f64.sqrt(), 1e-15));
        let r = ConvexPolygon::rectangle(0., 0., 0.5, 1.).unwrap();
        assert!(approx(r.diameter(), 1.25f64.sqrt(), 1e-15));
        let eq = tri([0., 0.], [1., 0.], [0.5, 3f64.sqrt() / 2.]);
        assert!(approx(eq.diameter(), 1.0, 1e-15));
    }

    #[test]
    fn clip_examples() {
        let sq = ConvexPolygon::unit_square();
        let left = sq.clip(&HalfPlane::new(Point2::new(1., 0.), 0.5).unwrap()).unwrap();
        assert!(approx(left.area(), 0.5, 1e-15));
        let expected = ConvexPolygon::rectangle(0., 0., 0.5, 1.).unwrap();
        for v in expected.vertices() {
            assert!(left.vertices().iter().any(|w| w.distance(*v) < 1e-15));
        }
        assert_eq!(left.len(), 4);

        let same = sq.clip(&HalfPlane::new(Point2::new(1., 0.), 2.).unwrap()).unwrap();
        assert_eq!(same, sq);

        assert!(sq.clip(&HalfPlane::new(Point2::new(1., 0.), -1.).unwrap()).is_none());
    }

    #[test]
    fn clip_snaps_near_boundary_vertices() {
        let sq = ConvexPolygon::unit_square();
        // the cut passes within 1e-10 of the corner (1, 1)
        let hp = HalfPlane::new(Point2::new(1., 1.), 2.0 - 1e-10).unwrap();
        let out = sq.clip(&hp).unwrap();
        assert_eq!(out.len(), 4);
        assert!(approx(out.area(), 1.0, 1e-9));
    }

    #[test]
    fn half_plane_rejects_zero_normal() {
        assert!(HalfPlane::new(Point2::ORIGIN, 1.0).is_err());
        let hp = HalfPlane::new(Point2::new(3., 4.), 5.).unwrap();
        assert!(approx(hp.normal().norm(), 1.0, 1e-15));
        assert!(approx(hp.offset(), 1.0, 1e-15));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            ConvexPolygon::new(vec![Point2::ORIGIN, Point2::new(1., 0.)]),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(matches!(
            ConvexPolygon::new(vec![Point2::ORIGIN, Point2::new(1., 0.), Point2::new(2., 0.)]),
            Err(Error::DegenerateGeometry(_))
        ));
        let l: Vec<Point2> = l_shape().vertices().to_vec();
        assert!(matches!(ConvexPolygon::new(l), Err(Error::NotConvex(_))));
        let cw = ConvexPolygon::new(vec![
            Point2::ORIGIN,
            Point2::new(0., 1.),
            Point2::new(1., 1.),
            Point2::new(1., 0.),
        ])
        .unwrap();
        assert_eq!(cw.area(), 1.0);
    }

    #[test]
    fn hull_examples() {
        let mut pts: Vec<Point2> = ConvexPolygon::unit_square().vertices().to_vec();
        pts.push(Point2::new(0.5, 0.5));
        pts.push(Point2::new(0.5, 0.0));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.area(), 1.0);

        let t = tri([0., 0.], [2., 0.], [1., 1.]);
        assert_eq!(convex_hull(t.vertices()).unwrap().area(), t.area());

        // the notch corner (1, 1) drops out; (2, 2) is not an input point
        let l = l_shape();
        let h = l.convex_hull().unwrap();
        assert_eq!(h.len(), 5);
        assert!(approx(h.area(), 3.5, 1e-15));
        // brute-force check: every input point is inside the hull, and every
        // hull vertex is an input point
        assert!(l.vertices().iter().all(|&p| h.contains(p)));
        assert!(h.vertices().iter().all(|v| l.vertices().contains(v)));

        assert!(convex_hull(&[Point2::ORIGIN, Point2::new(1., 1.), Point2::new(2., 2.)]).is_err());
    }

    #[test]
    fn contains_examples() {
        let sq = ConvexPolygon::unit_square();
        assert!(sq.contains(Point2::new(0.5, 0.5)));
        assert!(!sq.contains(Point2::new(2., 2.)));
        assert!(sq.contains(Point2::new(1.0 + 1e-10, 0.5)));
        let l = l_shape();
        assert!(!l.contains(Point2::new(1.5, 1.5)));
        assert!(l.contains(Point2::new(0.5, 1.5)));
        assert!(l.contains(Point2::new(1.0, 1.5)));
        assert!(SimplePolygon::from(&sq).contains(Point2::new(0.25, 0.75)));
    }

    #[test]
    fn simple_polygon_rejects_bowtie() {
        let bowtie = vec![
            Point2::ORIGIN,
            Point2::new(1., 1.),
            Point2::new(1., 0.),
            Point2::new(0., 1.),
        ];
        assert!(SimplePolygon::new(bowtie).is_err());
    }

    #[test]
    fn rotation_examples() {
        let pts = vec![Point2::new(0.3, 0.7), Point2::new(-1.0, 2.0)];
        assert_eq!(rotate_about(&pts, Point2::new(0.1, 0.2), 0.0), pts);
        let r = rotate_about(&[Point2::new(1., 0.)], Point2::ORIGIN, FRAC_PI_2)[0];
        assert!(approx(r.x, 0.0, 1e-15) && approx(r.y, 1.0, 1e-15));
        let back = rotate_about(&rotate_about(&pts, Point2::new(0.5, 0.5), 0.3), Point2::new(0.5, 0.5), -0.3);
        for (a, b) in back.iter().zip(&pts) {
            assert!(a.distance(*b) < 1e-12);
        }
        let h = rotate_about(&[Point2::new(2., 1.)], Point2::new(1., 1.), PI)[0];
        assert!(h.distance(Point2::new(0., 1.)) < 1e-15);
    }

    #[test]
    fn fan_examples() {
        let t = tri([0., 0.], [1., 0.], [0., 1.]);
        let fan = t.triangulate_fan();
        assert_eq!(fan.len(), 3);
        assert!(approx(fan.iter().map(triangle_area).sum::<f64>(), 0.5, 1e-15));

        let fan = ConvexPolygon::unit_square().triangulate_fan();
        assert_eq!(fan.len(), 4);
        assert!(fan.iter().all(|t| approx(triangle_area(t), 0.25, 1e-15)));

        let hex = ConvexPolygon::regular(6, Point2::ORIGIN, 1.0, 0.0).unwrap();
        let areas: Vec<f64> = hex.triangulate_fan().iter().map(triangle_area).collect();
        assert_eq!(areas.len(), 6);
        let expected = 3f64.sqrt() / 4.0;
        assert!(areas.iter().all(|a| approx(*a, expected, 1e-14)));
    }

    #[test]
    fn closest_point_projects_to_boundary() {
        let sq = ConvexPolygon::unit_square();
        assert_eq!(sq.closest_point(Point2::new(2., 0.5)), Point2::new(1., 0.5));
        assert_eq!(sq.closest_point(Point2::new(-1., -1.)), Point2::ORIGIN);
        assert_eq!(sq.closest_point(Point2::new(0.3, 0.3)), Point2::new(0.3, 0.3));
    }

    #[test]
    fn aabb_distance_range() {
        let b = Aabb::unit();
        let (near, far) = b.distance_range(Point2::new(0.5, 0.5));
        assert_eq!(near, 0.0);
        assert!(approx(far, 0.5f64.sqrt(), 1e-15));
        let (near, _) = b.distance_range(Point2::new(2.0, 0.5));
        assert_eq!(near, 1.0);
    }
}
