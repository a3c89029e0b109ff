//! Lloyd iteration towards centroidal Voronoi tessellations.
//!
//! Two energies are tracked. The discrete centroid energy
//! `Σ‖Pᵢ − Cᵢ‖²` vanishes at every fixed point and is what gets reported.
//! The quantization energy `Σᵢ ∫_{Vᵢ} ‖x − Pᵢ‖² dx` is non-increasing
//! under Lloyd steps and therefore ranks distinct fixed points; the
//! rotational-perturbation search selects on it.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcs::{integrate, uniform_point_in};
use crate::geom2d::{rotate_about, ConvexPolygon, Point2, EPS_GEOM};
use crate::rng::{stream, Purpose};
use crate::voronoi::{bounded_voronoi, validate_generators, Tessellation};

pub const DEFAULT_MAX_ITERATIONS: usize = 500;
pub const DEFAULT_TOL_MOVE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydConfig {
    max_iterations: usize,
    tol_move: f64,
    rng_seed: u64,
}

impl LloydConfig {
    pub fn new(max_iterations: usize, tol_move: f64, rng_seed: u64) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(tol_move > 0.0 && tol_move.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol_move must be positive, got {tol_move}")));
        }
        Ok(Self {
            max_iterations,
            tol_move,
            rng_seed,
        })
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn tol_move(&self) -> f64 {
        self.tol_move
    }

    /// Seed of the perturbation-angle stream.
    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        Self { rng_seed, ..self }
    }
}

impl Default for LloydConfig {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tol_move: DEFAULT_TOL_MOVE,
            rng_seed: 0,
        }
    }
}

/// Sampled set of rotations; angle 0 is always one of the `n_angles` candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbConfig {
    n_angles: usize,
    eps_max: f64,
}

impl PerturbConfig {
    pub fn new(n_angles: usize, eps_max: f64) -> Result<Self> {
        if n_angles == 0 {
            return Err(Error::InvalidConfig("n_angles must be at least 1".into()));
        }
        if !(eps_max > 0.0 && eps_max <= std::f64::consts::PI) {
            return Err(Error::InvalidConfig(format!("eps_max must lie in (0, π], got {eps_max}")));
        }
        Ok(Self { n_angles, eps_max })
    }

    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub centroid_energy: f64,
    pub quantization_energy: f64,
    pub max_move: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LloydTrace {
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

impl LloydTrace {
    pub fn iterations_used(&self) -> usize {
        self.records.len()
    }

    /// Largest relative increase of the quantization energy between consecutive records.
    pub fn worst_energy_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| (w[1].quantization_energy - w[0].quantization_energy) / w[0].quantization_energy.max(f64::MIN_POSITIVE))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `Σᵢ ‖Pᵢ − Cᵢ‖²`.
pub fn centroid_energy(tess: &Tessellation) -> f64 {
    tess.cells
        .iter()
        .map(|c| c.generator.distance_sq(c.centroid))
        .sum()
}

/// `Σᵢ ∫_{Vᵢ} ‖x − Pᵢ‖² dx` by quadrature.
pub fn quantization_energy(tess: &Tessellation) -> f64 {
    tess.cells
        .iter()
        .map(|c| integrate(|x| x.distance_sq(c.generator), &c.polygon))
        .sum()
}

/// One Lloyd update: the centroids of the current cells, plus the tessellation they came from.
pub fn lloyd_step(generators: &[Point2], domain: &ConvexPolygon) -> Result<(Vec<Point2>, Tessellation)> {
    let tess = bounded_voronoi(generators, domain)?;
    Ok((tess.centroids(), tess))
}

fn max_move(old: &[Point2], new: &[Point2]) -> f64 {
    old.iter()
        .zip(new)
        .map(|(a, b)| a.distance(*b))
        .fold(0.0, f64::max)
}

/// Iterates [`lloyd_step`] until the largest generator move drops below
/// `tol_move` or the iteration budget runs out. Running out is not an error.
pub fn lloyd(generators: &[Point2], domain: &ConvexPolygon, cfg: &LloydConfig) -> Result<(Tessellation, LloydTrace)> {
    let mut current = generators.to_vec();
    let mut trace = LloydTrace::default();
    for _ in 0..cfg.max_iterations {
        let (next, tess) = lloyd_step(&current, domain)?;
        let moved = max_move(&current, &next);
        trace.records.push(IterationRecord {
            centroid_energy: centroid_energy(&tess),
            quantization_energy: quantization_energy(&tess),
            max_move: moved,
        });
        current = next;
        if moved < cfg.tol_move {
            trace.converged = true;
            break;
        }
    }
    let tess = bounded_voronoi(&current, domain)?;
    Ok((tess, trace))
}

/// `k` seeded uniform points in `domain`, pairwise farther apart than `EPS_GEOM`.
pub fn sample_initial_generators(domain: &ConvexPolygon, k: usize, rng_seed: u64) -> Vec<Point2> {
    let mut rng = stream(rng_seed, Purpose::Initialization);
    let mut out: Vec<Point2> = Vec::with_capacity(k);
    while out.len() < k {
        let p = uniform_point_in(domain, &mut rng);
        if out.iter().all(|q| q.distance(p) > EPS_GEOM) {
            out.push(p);
        }
    }
    out
}

/// Moves points that left the domain to just inside its boundary.
fn project_inside(points: &mut [Point2], domain: &ConvexPolygon) {
    let center = domain.centroid();
    for p in points.iter_mut() {
        if domain.contains(*p) {
            continue;
        }
        let q = domain.closest_point(*p);
        let to_center = center - q;
        let len = to_center.norm();
        *p = q + to_center * (2.0 * EPS_GEOM / len).min(1.0);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbCandidate {
    pub angle: f64,
    /// `None` when the rotated configuration could not be tessellated.
    pub quantization_energy: Option<f64>,
    pub centroid_energy: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedOutcome {
    pub tessellation: Tessellation,
    pub trace: LloydTrace,
    pub chosen_angle: f64,
    pub quantization_energy: f64,
    pub centroid_energy: f64,
    /// Every evaluated rotation, identity first.
    pub candidates: Vec<PerturbCandidate>,
}

/// Lloyd followed by restarts from rotated copies of the converged
/// configuration; keeps the lowest quantization energy. Rotation is about
/// the domain centroid and ties go to the smallest `|angle|`.
pub fn perturbed_lloyd(
    generators: &[Point2],
    domain: &ConvexPolygon,
    cfg: &LloydConfig,
    pcfg: &PerturbConfig,
) -> Result<PerturbedOutcome> {
    let (base_tess, base_trace) = lloyd(generators, domain, cfg)?;
    let converged = base_tess.generators();
    let center = domain.centroid();

    let mut rng = stream(cfg.rng_seed, Purpose::Angles);
    let angles: Vec<f64> = (1..pcfg.n_angles)
        .map(|_| rng.random_range(-pcfg.eps_max..=pcfg.eps_max))
        .collect();

    let restarts: Vec<Option<(Tessellation, LloydTrace)>> = angles
        .par_iter()
        .map(|&angle| {
            let mut rotated = rotate_about(&converged, center, angle);
            project_inside(&mut rotated, domain);
            validate_generators(&rotated, domain).ok()?;
            lloyd(&rotated, domain, cfg).ok()
        })
        .collect();

    let base_q = quantization_energy(&base_tess);
    let base_c = centroid_energy(&base_tess);
    let mut candidates = vec![PerturbCandidate {
        angle: 0.0,
        quantization_energy: Some(base_q),
        centroid_energy: Some(base_c),
        converged: base_trace.converged,
    }];
    let mut best: (usize, f64) = (0, base_q);
    let mut runs = vec![None];
    for (i, (angle, restart)) in angles.into_iter().zip(restarts).enumerate() {
        let slot = i + 1;
        match &restart {
            Some((tess, trace)) => {
                let q = quantization_energy(tess);
                candidates.push(PerturbCandidate {
                    angle,
                    quantization_energy: Some(q),
                    centroid_energy: Some(centroid_energy(tess)),
                    converged: trace.converged,
                });
                let best_angle = candidates[best.0].angle.abs();
                if q < best.1 || (q == best.1 && angle.abs() < best_angle) {
                    best = (slot, q);
                }
            }
            None => candidates.push(PerturbCandidate {
                angle,
                quantization_energy: None,
                centroid_energy: None,
                converged: false,
            }),
        }
        runs.push(restart);
    }

    let (tessellation, trace) = match runs.swap_remove(best.0) {
        Some(run) => run,
        None => (base_tess, base_trace),
    };
    Ok(PerturbedOutcome {
        chosen_angle: candidates[best.0].angle,
        quantization_energy: best.1,
        centroid_energy: candidates[best.0].centroid_energy.unwrap_or(base_c),
        tessellation,
        trace,
        candidates,
    })
}
