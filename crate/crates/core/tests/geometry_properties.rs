use grt_core::geom2d::triangle_area;
use grt_core::{bounded_voronoi, convex_hull, rotate_about, ConvexPolygon, HalfPlane, Point2, EPS_GEOM};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point2> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

/// Hull of a random cloud; rejected when the cloud is too thin.
fn convex_polygon() -> impl Strategy<Value = ConvexPolygon> {
    prop::collection::vec(point(), 3..16)
        .prop_filter_map("degenerate cloud", |pts| convex_hull(&pts).ok().filter(|p| p.area() > 1e-3))
}

fn half_plane() -> impl Strategy<Value = HalfPlane> {
    (0.0..std::f64::consts::TAU, -1.5..1.5f64)
        .prop_map(|(t, offset)| HalfPlane::new(Point2::new(t.cos(), t.sin()), offset).unwrap())
}

fn area_of(poly: Option<ConvexPolygon>) -> f64 {
    poly.map_or(0.0, |p| p.area())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn clipping_never_grows_area(poly in convex_polygon(), hp in half_plane()) {
        let clipped = area_of(poly.clip(&hp));
        prop_assert!(clipped <= poly.area() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn complementary_clips_partition_the_polygon(poly in convex_polygon(), hp in half_plane()) {
        let total = area_of(poly.clip(&hp)) + area_of(poly.clip(&hp.complement()));
        // a sliver thinner than EPS_GEOM may be discarded on either side
        let slack = 1e-9 + 4.0 * EPS_GEOM * poly.diameter();
        prop_assert!((total - poly.area()).abs() <= slack, "{} vs {}", total, poly.area());
    }

    #[test]
    fn clipped_polygon_stays_in_both_regions(poly in convex_polygon(), hp in half_plane()) {
        if let Some(c) = poly.clip(&hp) {
            for &v in c.vertices() {
                prop_assert!(hp.signed_distance(v) <= 1e-9);
                prop_assert!(poly.contains(v));
            }
        }
    }

    #[test]
    fn fan_triangles_sum_to_area(poly in convex_polygon()) {
        let fan = poly.triangulate_fan();
        prop_assert_eq!(fan.len(), poly.len());
        let sum: f64 = fan.iter().map(triangle_area).sum();
        prop_assert!((sum - poly.area()).abs() <= 1e-12 * (1.0 + poly.area()));
        prop_assert!(fan.iter().all(|t| triangle_area(t) >= 0.0));
    }

    #[test]
    fn centroid_is_inside(poly in convex_polygon()) {
        prop_assert!(poly.contains(poly.centroid()));
    }

    #[test]
    fn centroid_matches_vertex_average_of_fan(poly in convex_polygon()) {
        // area-weighted average of triangle centroids
        let fan = poly.triangulate_fan();
        let mut acc = Point2::new(0.0, 0.0);
        for t in &fan {
            acc += (t[0] + t[1] + t[2]) * (triangle_area(t) / 3.0);
        }
        let c = acc * (1.0 / poly.area());
        prop_assert!(c.distance(poly.centroid()) <= 1e-10);
    }

    #[test]
    fn diameter_is_rotation_invariant(poly in convex_polygon(), angle in -3.2..3.2f64, pivot in point()) {
        let rotated = ConvexPolygon::new(rotate_about(poly.vertices(), pivot, angle)).unwrap();
        prop_assert!((rotated.diameter() - poly.diameter()).abs() <= 1e-12 * (1.0 + poly.diameter()));
        prop_assert!((rotated.area() - poly.area()).abs() <= 1e-12 * (1.0 + poly.area()));
    }

    #[test]
    fn diameter_dominates_vertex_distances(poly in convex_polygon()) {
        let d = poly.diameter();
        for &a in poly.vertices() {
            for &b in poly.vertices() {
                prop_assert!(a.distance(b) <= d);
            }
        }
    }

    #[test]
    fn hull_is_idempotent(pts in prop::collection::vec(point(), 3..24)) {
        if let Ok(hull) = convex_hull(&pts) {
            let again = convex_hull(hull.vertices()).unwrap();
            prop_assert_eq!(again.vertices(), hull.vertices());
            for &p in &pts {
                prop_assert!(hull.contains(p));
            }
        }
    }

    #[test]
    fn voronoi_commutes_with_translation(
        gens in prop::collection::vec((0.02..0.98f64, 0.02..0.98f64), 1..12),
        shift in point(),
    ) {
        let gens: Vec<Point2> = gens.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        prop_assume!(gens.iter().enumerate().all(|(i, a)| gens[..i].iter().all(|b| a.distance(*b) > 1e-3)));
        let square = ConvexPolygon::unit_square();
        let moved_square = square.map_vertices(|p| p + shift).unwrap();
        let moved: Vec<Point2> = gens.iter().map(|&p| p + shift).collect();
        let a = bounded_voronoi(&gens, &square).unwrap();
        let b = bounded_voronoi(&moved, &moved_square).unwrap();
        let total: f64 = a.cells.iter().map(|c| c.area).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        for (ca, cb) in a.cells.iter().zip(&b.cells) {
            prop_assert!((ca.area - cb.area).abs() <= 1e-9);
            prop_assert!((ca.diameter - cb.diameter).abs() <= 1e-9);
            prop_assert!((ca.centroid + shift).distance(cb.centroid) <= 1e-9);
        }
    }
}
