use grt_core::analysis::{mean_value_check, theorem_bound_sum, verify_bounds_at_levels, BOUND_REL_SLACK};
use grt_core::cvt::{centroid_energy, lloyd, quantization_energy, sample_initial_generators};
use grt_core::funcs::integrate;
use grt_core::grt::build_refinement;
use grt_core::{bounded_voronoi, catalog, convex_hull, Aabb, ConvexPolygon, GrtConfig, LloydConfig, Point2, TestFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

/// Four-point Gauss–Legendre on [0, 1]; exact for polynomials of degree ≤ 7.
const GAUSS_4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// `∫_P x^a y^b dA` by Green's theorem: `∮ x^(a+1) y^b / (a+1) dy`.
fn moment(poly: &ConvexPolygon, a: i32, b: i32) -> f64 {
    let vs = poly.vertices();
    let n = vs.len();
    let mut total = 0.0;
    for i in 0..n {
        let (p, q) = (vs[i], vs[(i + 1) % n]);
        let d = q - p;
        for (t, w) in GAUSS_4 {
            let x = p.x + t * d.x;
            let y = p.y + t * d.y;
            total += w * x.powi(a + 1) * y.powi(b) / f64::from(a + 1) * d.y;
        }
    }
    total
}

fn convex_polygon(max_vertices: usize) -> impl Strategy<Value = ConvexPolygon> {
    prop::collection::vec((-1.5..1.5f64, -1.5..1.5f64), 3..20).prop_filter_map("thin or too many vertices", move |pts| {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        convex_hull(&pts)
            .ok()
            .filter(|p| p.area() > 1e-2 && p.len() <= max_vertices)
    })
}

fn aabb() -> impl Strategy<Value = Aabb> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.05..2.0f64, 0.05..2.0f64)
        .prop_map(|(x, y, w, h)| Aabb::from_points(&[Point2::new(x, y), Point2::new(x + w, y + h)]))
}

fn function() -> impl Strategy<Value = TestFunction> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(|c| TestFunction::Constant { c }),
        (-3.0..3.0f64, -3.0..3.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| TestFunction::Linear { a, b, c }),
        (-8.0..8.0f64, -8.0..8.0f64).prop_map(|(omega1, omega2)| TestFunction::Sinusoid { omega1, omega2 }),
        (0.05..1.0f64, -1.0..2.0f64, -1.0..2.0f64)
            .prop_map(|(sigma, x, y)| TestFunction::GaussianBump { sigma, center: Point2::new(x, y) }),
        Just(TestFunction::RadialSmooth),
    ]
}

fn sample_in(b: &Aabb, rng: &mut impl Rng) -> Point2 {
    Point2::new(
        rng.random_range(b.min.x..=b.max.x),
        rng.random_range(b.min.y..=b.max.y),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quadrature_is_exact_up_to_degree_five(poly in convex_polygon(8)) {
        for a in 0..=5 {
            for b in 0..=(5 - a) {
                let exact = moment(&poly, a, b);
                let got = integrate(|p| p.x.powi(a) * p.y.powi(b), &poly);
                prop_assert!((got - exact).abs() <= 1e-12 * (1.0 + exact.abs()), "x^{} y^{}: {} vs {}", a, b, got, exact);
            }
        }
    }

    #[test]
    fn green_oracle_agrees_on_area_and_centroid(poly in convex_polygon(12)) {
        let area = moment(&poly, 0, 0);
        prop_assert!((area - poly.area()).abs() <= 1e-12);
        let c = poly.centroid();
        prop_assert!((moment(&poly, 1, 0) / area - c.x).abs() <= 1e-11);
        prop_assert!((moment(&poly, 0, 1) / area - c.y).abs() <= 1e-11);
    }

    #[test]
    fn lipschitz_constants_certify_sampled_pairs(f in function(), bbox in aabb(), seed in any::<u64>()) {
        let l1 = f.lipschitz(&bbox);
        let l2 = f.gradient_lipschitz(&bbox);
        let mut rng = Pcg64::seed_from_u64(seed);
        for _ in 0..10_000 {
            let (x, y) = (sample_in(&bbox, &mut rng), sample_in(&bbox, &mut rng));
            let r = x.distance(y);
            prop_assert!((f.eval(x) - f.eval(y)).abs() <= l1 * r * (1.0 + 1e-9) + 1e-14);
            prop_assert!(f.grad(x).distance(f.grad(y)) <= l2 * r * (1.0 + 1e-9) + 1e-14);
        }
        // the gradient norm at sampled points must also respect L
        for _ in 0..1_000 {
            let p = sample_in(&bbox, &mut rng);
            prop_assert!(f.grad(p).norm() <= l1 * (1.0 + 1e-9) + 1e-14);
        }
    }

    #[test]
    fn gradients_match_finite_differences(f in function(), p in (-1.0..2.0f64, -1.0..2.0f64)) {
        let p = Point2::new(p.0, p.1);
        let h = 1e-6;
        let dx = (f.eval(p + Point2::new(h, 0.0)) - f.eval(p - Point2::new(h, 0.0))) / (2.0 * h);
        let dy = (f.eval(p + Point2::new(0.0, h)) - f.eval(p - Point2::new(0.0, h))) / (2.0 * h);
        let g = f.grad(p);
        let scale = 1.0 + g.norm();
        prop_assert!((g.x - dx).abs() <= 1e-6 * scale, "d/dx {} vs {}", g.x, dx);
        prop_assert!((g.y - dy).abs() <= 1e-6 * scale, "d/dy {} vs {}", g.y, dy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energies_scale_and_translate(seed in any::<u64>(), k in 1usize..10, s in 0.2..5.0f64, shift in (-3.0..3.0f64, -3.0..3.0f64)) {
        let square = ConvexPolygon::unit_square();
        let gens = sample_initial_generators(&square, k, seed);
        let shift = Point2::new(shift.0, shift.1);
        let map = |p: Point2| p * s + shift;
        let base = bounded_voronoi(&gens, &square).unwrap();
        let moved_gens: Vec<Point2> = gens.iter().map(|&p| map(p)).collect();
        let moved = bounded_voronoi(&moved_gens, &square.map_vertices(map).unwrap()).unwrap();
        let (ce, ce_m) = (centroid_energy(&base), centroid_energy(&moved));
        let (qe, qe_m) = (quantization_energy(&base), quantization_energy(&moved));
        prop_assert!((ce_m - s * s * ce).abs() <= 1e-9 * (1.0 + s * s * ce));
        prop_assert!((qe_m - s.powi(4) * qe).abs() <= 1e-9 * (1.0 + s.powi(4) * qe));
    }

    #[test]
    fn lloyd_is_deterministic_and_monotone(seed in any::<u64>(), k in 1usize..12) {
        let square = ConvexPolygon::unit_square();
        let gens = sample_initial_generators(&square, k, seed);
        let cfg = LloydConfig::new(200, 1e-8, seed).unwrap();
        let (t1, tr1) = lloyd(&gens, &square, &cfg).unwrap();
        let (t2, tr2) = lloyd(&gens, &square, &cfg).unwrap();
        prop_assert_eq!(&t1, &t2);
        prop_assert_eq!(&tr1, &tr2);
        for w in tr1.records.windows(2) {
            let (prev, next) = (w[0].quantization_energy, w[1].quantization_energy);
            prop_assert!(next <= prev * (1.0 + 1e-9), "{} -> {}", prev, next);
        }
    }
}

fn trees(seed: u64) -> Vec<(TestFunction, grt_core::RefinementTree)> {
    let square = ConvexPolygon::unit_square();
    catalog()
        .into_iter()
        .map(|f| {
            let tree = build_refinement(&f, &square, &GrtConfig::simple(3, 2, seed).unwrap()).unwrap();
            (f, tree)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn tree_invariants_hold_for_every_catalog_function(seed in any::<u64>()) {
        for (f, tree) in trees(seed) {
            let levels: Vec<usize> = (0..=tree.depth()).collect();
            let report = verify_bounds_at_levels(&f, &tree, &levels, 200, seed);
            prop_assert!(report.passed, "{}: ratio {}", f.name(), report.max_violation_ratio);
            let lipschitz = f.lipschitz(&tree.domain.bounding_box());
            let mut previous = f64::INFINITY;
            for &m in &levels {
                prop_assert!(mean_value_check(&f, &tree, m, 200, seed).passed);
                let err = tree.l2_error_sq(&f, m).unwrap();
                let bound = theorem_bound_sum(&tree, lipschitz, m);
                prop_assert!(err <= bound * (1.0 + BOUND_REL_SLACK) + 1e-15, "{} level {}: {} > {}", f.name(), m, err, bound);
                // nested partitions: refining never increases the projection error
                prop_assert!(err <= previous * (1.0 + 1e-9) + 1e-15, "{} level {}: {} > {}", f.name(), m, err, previous);
                previous = err;
            }
            for d in tree.partition_defects() {
                prop_assert!(d <= 1e-9);
            }
        }
    }

    #[test]
    fn theorem_sum_strictly_decreases_for_sinusoid(seed in any::<u64>()) {
        let f = TestFunction::Sinusoid { omega1: std::f64::consts::PI, omega2: std::f64::consts::PI };
        let tree = build_refinement(&f, &ConvexPolygon::unit_square(), &GrtConfig::simple(4, 3, seed).unwrap()).unwrap();
        let l = f.lipschitz(&tree.domain.bounding_box());
        let sums: Vec<f64> = (0..=3).map(|m| theorem_bound_sum(&tree, l, m)).collect();
        for w in sums.windows(2) {
            prop_assert!(w[1] < w[0], "{:?}", sums);
        }
    }
}
