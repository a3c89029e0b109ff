//! Shared fixtures for the criterion benches.

use grt_core::cvt::sample_initial_generators;
use grt_core::{ConvexPolygon, Point2, TestFunction};

pub fn unit_square() -> ConvexPolygon {
    ConvexPolygon::unit_square()
}

pub fn seeded_generators(k: usize, seed: u64) -> Vec<Point2> {
    sample_initial_generators(&unit_square(), k, seed)
}

pub fn gaussian() -> TestFunction {
    TestFunction::GaussianBump {
        sigma: 0.2,
        center: Point2::new(0.5, 0.5),
    }
}
