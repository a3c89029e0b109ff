//! Reconstruction-error bounds and the CVT-versus-arbitrary comparison.
//!
//! With `L = sup‖∇f‖` and `L₂` the Lipschitz constant of `∇f`, every
//! cell `V` of a refinement level satisfies
//!
//! * `|f(x) − f̄_V| ≤ L·diam(V)`,
//! * `|f(x) − f̄_V − ∇f(x₀)·(x − x₀)| ≤ (L₂/2)·diam(V)²` for `x₀` the centroid,
//! * `∫_V |f − f̄_V|² ≤ L²·diam(V)²·|V|`.
//!
//! The functions here sample both sides of the first two and evaluate both
//! sides of the third.

use rayon::prelude::*;

use crate::error::Result;
use crate::funcs::{uniform_point_in, TestFunction};
use crate::geom2d::ConvexPolygon;
use crate::grt::{build_arbitrary_refinement, build_refinement, GrtConfig, RefinementTree};
use crate::rng::{derive_seed, stream, Pcg32, Purpose};
use crate::voronoi::VoronoiCell;

/// Relative slack on every bound comparison.
pub const BOUND_REL_SLACK: f64 = 1e-9;
/// Squared-error integrals at or below this are treated as zero when comparing trials.
pub const ERROR_NOISE_FLOOR: f64 = 1e-15;
/// Absolute slack for zero bounds (constant and linear fields), covering quadrature rounding.
pub const BOUND_ABS_SLACK: f64 = 1e-12;

pub fn first_order_bound(lipschitz: f64, cell: &VoronoiCell) -> f64 {
    lipschitz * cell.diameter
}

pub fn second_order_bound(gradient_lipschitz: f64, cell: &VoronoiCell) -> f64 {
    0.5 * gradient_lipschitz * cell.diameter * cell.diameter
}

fn within(observed: f64, bound: f64) -> bool {
    observed <= bound * (1.0 + BOUND_REL_SLACK) + BOUND_ABS_SLACK
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellBoundRecord {
    pub node_id: usize,
    pub level: usize,
    pub diameter: f64,
    pub first_order_bound: f64,
    pub first_order_observed: f64,
    pub second_order_bound: f64,
    pub second_order_observed: f64,
}

impl CellBoundRecord {
    pub fn passed(&self) -> bool {
        within(self.first_order_observed, self.first_order_bound)
            && within(self.second_order_observed, self.second_order_bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub function: String,
    pub levels: Vec<usize>,
    pub cells: Vec<CellBoundRecord>,
    /// Largest observed/bound over non-zero bounds.
    pub max_violation_ratio: f64,
    pub passed: bool,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &CellBoundRecord> {
        self.cells.iter().filter(|c| !c.passed())
    }
}

fn cell_rng(seed: u64, node_id: usize) -> Pcg32 {
    stream(derive_seed(seed, node_id as u64), Purpose::CellSamples)
}

fn check_cell(
    f: &TestFunction,
    tree: &RefinementTree,
    node_id: usize,
    (l1, l2): (f64, f64),
    n_samples: usize,
    seed: u64,
) -> CellBoundRecord {
    let node = &tree.nodes[node_id];
    let x0 = node.cell.centroid;
    let g0 = f.grad(x0);
    let mut rng = cell_rng(seed, node_id);
    let (mut obs1, mut obs2) = (0.0_f64, 0.0_f64);
    for _ in 0..n_samples {
        let p = uniform_point_in(&node.cell.polygon, &mut rng);
        let r = f.eval(p) - node.average;
        obs1 = obs1.max(r.abs());
        obs2 = obs2.max((r - g0.dot(p - x0)).abs());
    }
    CellBoundRecord {
        node_id,
        level: node.level,
        diameter: node.cell.diameter,
        first_order_bound: first_order_bound(l1, &node.cell),
        first_order_observed: obs1,
        second_order_bound: second_order_bound(l2, &node.cell),
        second_order_observed: obs2,
    }
}

/// Samples both pointwise bounds on the cells of the given levels. The
/// constants are taken over the domain's bounding box.
pub fn verify_bounds_at_levels(
    f: &TestFunction,
    tree: &RefinementTree,
    levels: &[usize],
    n_samples_per_cell: usize,
    rng_seed: u64,
) -> BoundReport {
    let bbox = tree.domain.bounding_box();
    let constants = (f.lipschitz(&bbox), f.gradient_lipschitz(&bbox));
    let ids: Vec<usize> = levels
        .iter()
        .filter_map(|&m| tree.levels.get(m))
        .flatten()
        .copied()
        .collect();
    let cells: Vec<CellBoundRecord> = ids
        .par_iter()
        .map(|&id| check_cell(f, tree, id, constants, n_samples_per_cell, rng_seed))
        .collect();
    let max_violation_ratio = cells
        .iter()
        .flat_map(|c| {
            [
                (c.first_order_observed, c.first_order_bound),
                (c.second_order_observed, c.second_order_bound),
            ]
        })
        .filter(|(_, b)| *b > 0.0)
        .map(|(o, b)| o / b)
        .fold(0.0, f64::max);
    let passed = cells.iter().all(CellBoundRecord::passed);
    BoundReport {
        function: f.name().to_string(),
        levels: levels.to_vec(),
        cells,
        max_violation_ratio,
        passed,
    }
}

/// Leaf-level bound check.
pub fn verify_bounds(f: &TestFunction, tree: &RefinementTree, n_samples_per_cell: usize, rng_seed: u64) -> BoundReport {
    verify_bounds_at_levels(f, tree, &[tree.depth()], n_samples_per_cell, rng_seed)
}

/// `Σ L²·diam²·|V|` over the cells of `level`.
pub fn theorem_bound_sum(tree: &RefinementTree, lipschitz: f64, level: usize) -> f64 {
    tree.level(level)
        .map(|n| lipschitz * lipschitz * n.cell.diameter * n.cell.diameter * n.cell.area)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSummary {
    pub level: usize,
    pub n_cells: usize,
    pub max_diameter: f64,
    pub bound_sum: f64,
    pub l2_error_sq: f64,
}

/// Per-level cell count, largest diameter, theorem bound sum and integrated error.
pub fn level_summaries(f: &TestFunction, tree: &RefinementTree) -> Result<Vec<LevelSummary>> {
    let lipschitz = f.lipschitz(&tree.domain.bounding_box());
    (0..=tree.depth())
        .map(|level| {
            Ok(LevelSummary {
                level,
                n_cells: tree.levels[level].len(),
                max_diameter: tree.level(level).map(|n| n.cell.diameter).fold(0.0, f64::max),
                bound_sum: theorem_bound_sum(tree, lipschitz, level),
                l2_error_sq: tree.l2_error_sq(f, level)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub cvt_l2sq: f64,
    pub arbitrary_l2sq: f64,
    pub cvt_bound_sum: f64,
    pub arbitrary_bound_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedTrial {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub function: String,
    pub trials: Vec<TrialRecord>,
    pub failed: Vec<FailedTrial>,
    /// Fraction of trials with `cvt_l2sq ≤ arbitrary_l2sq`; ties, including
    /// values under [`ERROR_NOISE_FLOOR`], count.
    pub fraction_error_le: f64,
    /// Fraction of trials with `cvt_bound_sum ≤ arbitrary_bound_sum`.
    pub fraction_bound_le: f64,
    pub mean_cvt_l2sq: f64,
    pub mean_arbitrary_l2sq: f64,
    pub mean_cvt_bound_sum: f64,
    pub mean_arbitrary_bound_sum: f64,
}

/// `a ≤ b`, with both sides clamped to zero below the noise floor.
fn le_with_floor(a: f64, b: f64) -> bool {
    let clamp = |v: f64| if v.abs() <= ERROR_NOISE_FLOOR { 0.0 } else { v };
    clamp(a) <= clamp(b)
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (n, s) = values.fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Paired trials: for each, a CVT tree and an arbitrary tree from the same
/// per-node initial samples, compared at full depth.
pub fn compare_cvt_vs_arbitrary(
    f: &TestFunction,
    domain: &ConvexPolygon,
    cfg: &GrtConfig,
    n_trials: usize,
    rng_seed: u64,
) -> ComparisonReport {
    let lipschitz = f.lipschitz(&domain.bounding_box());
    let level = cfg.depth();
    let outcomes: Vec<std::result::Result<TrialRecord, FailedTrial>> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(rng_seed, trial as u64);
            let trial_cfg = cfg.with_seed(seed);
            let run = || -> Result<TrialRecord> {
                let cvt = build_refinement(f, domain, &trial_cfg)?;
                let arb = build_arbitrary_refinement(f, domain, &trial_cfg)?;
                Ok(TrialRecord {
                    trial,
                    seed,
                    cvt_l2sq: cvt.l2_error_sq(f, level)?,
                    arbitrary_l2sq: arb.l2_error_sq(f, level)?,
                    cvt_bound_sum: theorem_bound_sum(&cvt, lipschitz, level),
                    arbitrary_bound_sum: theorem_bound_sum(&arb, lipschitz, level),
                })
            };
            run().map_err(|e| FailedTrial {
                trial,
                seed,
                message: e.to_string(),
            })
        })
        .collect();

    let mut trials = Vec::new();
    let mut failed = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(t) => trials.push(t),
            Err(e) => failed.push(e),
        }
    }
    let n = trials.len().max(1) as f64;
    ComparisonReport {
        function: f.name().to_string(),
        fraction_error_le: trials.iter().filter(|t| le_with_floor(t.cvt_l2sq, t.arbitrary_l2sq)).count() as f64 / n,
        fraction_bound_le: trials.iter().filter(|t| le_with_floor(t.cvt_bound_sum, t.arbitrary_bound_sum)).count() as f64 / n,
        mean_cvt_l2sq: mean(trials.iter().map(|t| t.cvt_l2sq)),
        mean_arbitrary_l2sq: mean(trials.iter().map(|t| t.arbitrary_l2sq)),
        mean_cvt_bound_sum: mean(trials.iter().map(|t| t.cvt_bound_sum)),
        mean_arbitrary_bound_sum: mean(trials.iter().map(|t| t.arbitrary_bound_sum)),
        trials,
        failed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueBracket {
    pub node_id: usize,
    pub min: f64,
    pub average: f64,
    pub max: f64,
}

impl MeanValueBracket {
    pub fn holds(&self) -> bool {
        self.min - BOUND_ABS_SLACK <= self.average && self.average <= self.max + BOUND_ABS_SLACK
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueReport {
    pub passed: bool,
    pub brackets: Vec<MeanValueBracket>,
    pub offending: Vec<usize>,
}

/// Checks `min f ≤ f̄_V ≤ max f` over uniform samples of every cell at `level`.
pub fn mean_value_check(
    f: &TestFunction,
    tree: &RefinementTree,
    level: usize,
    n_samples: usize,
    rng_seed: u64,
) -> MeanValueReport {
    let brackets: Vec<MeanValueBracket> = tree
        .level(level)
        .map(|node| {
            let mut rng = cell_rng(rng_seed, node.id);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for _ in 0..n_samples {
                let v = f.eval(uniform_point_in(&node.cell.polygon, &mut rng));
                lo = lo.min(v);
                hi = hi.max(v);
            }
            MeanValueBracket {
                node_id: node.id,
                min: lo,
                average: node.average,
                max: hi,
            }
        })
        .collect();
    let offending: Vec<usize> = brackets.iter().filter(|b| !b.holds()).map(|b| b.node_id).collect();
    MeanValueReport {
        passed: offending.is_empty(),
        brackets,
        offending,
    }
}
