//! Analytic test fields and the shared integration rules.
//!
//! Every field carries a closed-form gradient together with closed-form
//! Lipschitz constants for the field (`L`) and for its gradient (`L₂`)
//! over an axis-aligned box. The box-restricted constants are exact
//! suprema of `‖∇f‖` and of the Hessian spectral norm.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{triangle_area, Aabb, ConvexPolygon, Point2, SimplePolygon, Triangle};
use crate::rng::{stream, Purpose};

/// `{name, params}` reference to a catalog function, as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl FunctionSpec {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// `c`
    Constant { c: f64 },
    /// `a·x + b·y + c`
    Linear { a: f64, b: f64, c: f64 },
    /// `sin(ω₁x + ω₂y)`
    Sinusoid { omega1: f64, omega2: f64 },
    /// `exp(−‖p − center‖² / 2σ²)`
    GaussianBump { sigma: f64, center: Point2 },
    /// `√(‖p‖² + 1)`
    RadialSmooth,
}

pub const CATALOG_NAMES: [&str; 5] = ["constant", "linear", "sinusoid", "gaussian_bump", "radial_smooth"];

/// One instance of every catalog function with default parameters.
pub fn catalog() -> Vec<TestFunction> {
    CATALOG_NAMES
        .iter()
        .map(|name| TestFunction::lookup(&FunctionSpec::new(name, &[])).expect("catalog defaults are valid"))
        .collect()
}

impl TestFunction {
    /// Resolves a spec against the catalog. Missing params take defaults;
    /// unknown params are rejected.
    pub fn lookup(spec: &FunctionSpec) -> Result<Self> {
        let allowed: &[(&str, f64)] = match spec.name.as_str() {
            "constant" => &[("c", 1.0)],
            "linear" => &[("a", 1.0), ("b", 0.0), ("c", 0.0)],
            "sinusoid" => &[("omega1", PI), ("omega2", 0.0)],
            "gaussian_bump" => &[("sigma", 0.2), ("cx", 0.5), ("cy", 0.5)],
            "radial_smooth" => &[],
            other => return Err(Error::UnknownFunction(other.to_string())),
        };
        let bad = |message: String| Error::InvalidParameter {
            function: spec.name.clone(),
            message,
        };
        for (key, value) in &spec.params {
            if !allowed.iter().any(|(k, _)| k == key) {
                return Err(bad(format!("unknown parameter `{key}`")));
            }
            if !value.is_finite() {
                return Err(bad(format!("parameter `{key}` must be finite")));
            }
        }
        let get = |key: &str| {
            spec.params
                .get(key)
                .copied()
                .unwrap_or_else(|| allowed.iter().find(|(k, _)| *k == key).unwrap().1)
        };
        Ok(match spec.name.as_str() {
            "constant" => Self::Constant { c: get("c") },
            "linear" => Self::Linear {
                a: get("a"),
                b: get("b"),
                c: get("c"),
            },
            "sinusoid" => Self::Sinusoid {
                omega1: get("omega1"),
                omega2: get("omega2"),
            },
            "gaussian_bump" => {
                let sigma = get("sigma");
                if sigma <= 0.0 {
                    return Err(bad("sigma must be positive".into()));
                }
                Self::GaussianBump {
                    sigma,
                    center: Point2::new(get("cx"), get("cy")),
                }
            }
            _ => Self::RadialSmooth,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
            Self::Sinusoid { .. } => "sinusoid",
            Self::GaussianBump { .. } => "gaussian_bump",
            Self::RadialSmooth => "radial_smooth",
        }
    }

    pub fn spec(&self) -> FunctionSpec {
        match *self {
            Self::Constant { c } => FunctionSpec::new("constant", &[("c", c)]),
            Self::Linear { a, b, c } => FunctionSpec::new("linear", &[("a", a), ("b", b), ("c", c)]),
            Self::Sinusoid { omega1, omega2 } => {
                FunctionSpec::new("sinusoid", &[("omega1", omega1), ("omega2", omega2)])
            }
            Self::GaussianBump { sigma, center } => FunctionSpec::new(
                "gaussian_bump",
                &[("sigma", sigma), ("cx", center.x), ("cy", center.y)],
            ),
            Self::RadialSmooth => FunctionSpec::new("radial_smooth", &[]),
        }
    }

    pub fn eval(&self, p: Point2) -> f64 {
        match *self {
            Self::Constant { c } => c,
            Self::Linear { a, b, c } => a * p.x + b * p.y + c,
            Self::Sinusoid { omega1, omega2 } => (omega1 * p.x + omega2 * p.y).sin(),
            Self::GaussianBump { sigma, center } => {
                (-(p - center).norm_sq() / (2.0 * sigma * sigma)).exp()
            }
            Self::RadialSmooth => (p.norm_sq() + 1.0).sqrt(),
        }
    }

    pub fn grad(&self, p: Point2) -> Point2 {
        match *self {
            Self::Constant { .. } => Point2::ORIGIN,
            Self::Linear { a, b, .. } => Point2::new(a, b),
            Self::Sinusoid { omega1, omega2 } => {
                Point2::new(omega1, omega2) * (omega1 * p.x + omega2 * p.y).cos()
            }
            Self::GaussianBump { sigma, center } => {
                (p - center) * (-self.eval(p) / (sigma * sigma))
            }
            Self::RadialSmooth => p * (1.0 / self.eval(p)),
        }
    }

    /// `sup ‖∇f‖` over the box.
    pub fn lipschitz(&self, bbox: &Aabb) -> f64 {
        match *self {
            Self::Constant { .. } => 0.0,
            Self::Linear { a, b, .. } => a.hypot(b),
            Self::Sinusoid { omega1, omega2 } => {
                // ∇f = ω cos(ω·p); the phase ω·p sweeps an interval over the box
                let (lo, hi) = phase_range(omega1, omega2, bbox);
                omega1.hypot(omega2) * sup_abs_cos(lo, hi)
            }
            Self::GaussianBump { sigma, center } => {
                // ‖∇f‖ = (r/σ²) e^{−r²/2σ²}, unimodal in r with its peak at r = σ
                let (r_min, r_max) = bbox.distance_range(center);
                let r = sigma.clamp(r_min, r_max);
                r / (sigma * sigma) * (-r * r / (2.0 * sigma * sigma)).exp()
            }
            Self::RadialSmooth => {
                // ‖∇f‖ = r/√(r²+1), increasing in r
                let (_, r_max) = bbox.distance_range(Point2::ORIGIN);
                r_max / (r_max * r_max + 1.0).sqrt()
            }
        }
    }

    /// `sup ‖∇²f‖₂` over the box, i.e. the Lipschitz constant of `∇f`.
    pub fn gradient_lipschitz(&self, bbox: &Aabb) -> f64 {
        match *self {
            Self::Constant { .. } | Self::Linear { .. } => 0.0,
            Self::Sinusoid { omega1, omega2 } => {
                // ∇²f = −ωωᵀ sin(ω·p), spectral norm ‖ω‖² |sin(ω·p)|
                let (lo, hi) = phase_range(omega1, omega2, bbox);
                (omega1 * omega1 + omega2 * omega2) * sup_abs_sin(lo, hi)
            }
            Self::GaussianBump { sigma, center } => {
                // eigenvalues f/σ²·(s − 1) radially and −f/σ² tangentially, s = r²/σ²,
                // so ‖∇²f‖ = φ(s)/σ² with φ(s) = max(|s − 1|, 1)·e^{−s/2}.
                // φ falls on [0, 2], rises on [2, 3], falls after 3.
                let (r_min, r_max) = bbox.distance_range(center);
                let s2 = sigma * sigma;
                let (s_min, s_max) = (r_min * r_min / s2, r_max * r_max / s2);
                let phi = |s: f64| (s - 1.0).abs().max(1.0) * (-0.5 * s).exp();
                phi(s_min).max(phi(s_max)).max(phi(3.0_f64.clamp(s_min, s_max))) / s2
            }
            Self::RadialSmooth => {
                // eigenvalues 1/f (tangential) and 1/f³ (radial); largest where r is smallest
                let (r_min, _) = bbox.distance_range(Point2::ORIGIN);
                1.0 / (r_min * r_min + 1.0).sqrt()
            }
        }
    }
}

fn phase_range(omega1: f64, omega2: f64, bbox: &Aabb) -> (f64, f64) {
    bbox.corners()
        .iter()
        .map(|c| omega1 * c.x + omega2 * c.y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)))
}

/// Whether `[lo, hi]` contains `shift + kπ` for some integer `k`.
fn hits_lattice(lo: f64, hi: f64, shift: f64) -> bool {
    ((lo - shift) / PI).ceil() <= ((hi - shift) / PI).floor()
}

fn sup_abs_cos(lo: f64, hi: f64) -> f64 {
    if hits_lattice(lo, hi, 0.0) {
        1.0
    } else {
        lo.cos().abs().max(hi.cos().abs())
    }
}

fn sup_abs_sin(lo: f64, hi: f64) -> f64 {
    if hits_lattice(lo, hi, FRAC_PI_2) {
        1.0
    } else {
        lo.sin().abs().max(hi.sin().abs())
    }
}

// 7-point degree-5 rule on the triangle (Radon), barycentric coordinates.
const SQRT15: f64 = 3.872_983_346_207_417;
const W_CENTER: f64 = 9.0 / 40.0;
const A_INNER: f64 = (6.0 - SQRT15) / 21.0;
const W_INNER: f64 = (155.0 - SQRT15) / 1200.0;
const A_OUTER: f64 = (6.0 + SQRT15) / 21.0;
const W_OUTER: f64 = (155.0 + SQRT15) / 1200.0;

/// `(barycentric (λ₀, λ₁, λ₂), weight)`; weights sum to 1.
pub fn triangle_rule() -> [([f64; 3], f64); 7] {
    let bi = 1.0 - 2.0 * A_INNER;
    let bo = 1.0 - 2.0 * A_OUTER;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], W_CENTER),
        ([A_INNER, A_INNER, bi], W_INNER),
        ([A_INNER, bi, A_INNER], W_INNER),
        ([bi, A_INNER, A_INNER], W_INNER),
        ([A_OUTER, A_OUTER, bo], W_OUTER),
        ([A_OUTER, bo, A_OUTER], W_OUTER),
        ([bo, A_OUTER, A_OUTER], W_OUTER),
    ]
}

pub fn integrate_triangle(f: &impl Fn(Point2) -> f64, t: &Triangle) -> f64 {
    let area = triangle_area(t);
    let sum: f64 = triangle_rule()
        .iter()
        .map(|([l0, l1, l2], w)| {
            let p = Point2::new(
                l0 * t[0].x + l1 * t[1].x + l2 * t[2].x,
                l0 * t[0].y + l1 * t[1].y + l2 * t[2].y,
            );
            w * f(p)
        })
        .sum();
    area * sum
}

/// `∫_poly f` by the degree-5 rule on each triangle of the centroid fan.
pub fn integrate(f: impl Fn(Point2) -> f64, poly: &ConvexPolygon) -> f64 {
    poly.triangulate_fan()
        .iter()
        .map(|t| integrate_triangle(&f, t))
        .sum()
}

/// Uniform point in a convex polygon by bounding-box rejection.
pub fn uniform_point_in(poly: &ConvexPolygon, rng: &mut impl Rng) -> Point2 {
    let bb = poly.bounding_box();
    loop {
        let p = Point2::new(
            bb.min.x + bb.width() * rng.random::<f64>(),
            bb.min.y + bb.height() * rng.random::<f64>(),
        );
        if poly.contains(p) {
            return p;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskedIntegral {
    /// Estimate of `∫_{poly ∩ mask} f`.
    pub value: f64,
    /// Fraction of samples that landed inside the mask.
    pub covered_fraction: f64,
    /// Standard error of `value`.
    pub std_error: f64,
    /// Standard error of `covered_fraction`.
    pub fraction_std_error: f64,
}

impl MaskedIntegral {
    /// Estimated `|poly ∩ mask|`.
    pub fn covered_area(&self, poly: &ConvexPolygon) -> f64 {
        self.covered_fraction * poly.area()
    }
}

/// Monte Carlo estimate of `∫_{poly ∩ mask} f` from `n_samples` uniform draws in `poly`.
pub fn integrate_masked(
    f: impl Fn(Point2) -> f64,
    poly: &ConvexPolygon,
    mask: &SimplePolygon,
    n_samples: usize,
    rng_seed: u64,
) -> Result<MaskedIntegral> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
    }
    let mut rng = stream(rng_seed, Purpose::MaskSamples);
    let (mut hits, mut sum, mut sum_sq) = (0usize, 0.0, 0.0);
    for _ in 0..n_samples {
        let p = uniform_point_in(poly, &mut rng);
        if mask.contains(p) {
            let v = f(p);
            hits += 1;
            sum += v;
            sum_sq += v * v;
        }
    }
    if hits == 0 {
        return Ok(MaskedIntegral {
            value: 0.0,
            covered_fraction: 0.0,
            std_error: 0.0,
            fraction_std_error: 0.0,
        });
    }
    let n = n_samples as f64;
    let area = poly.area();
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    let frac = hits as f64 / n;
    Ok(MaskedIntegral {
        value: area * mean,
        covered_fraction: frac,
        std_error: area * (var / n).sqrt(),
        fraction_std_error: (frac * (1.0 - frac) / n).sqrt(),
    })
}
