use std::path::Path;

use anyhow::{bail, Context};
use grt_core::analysis::{compare_cvt_vs_arbitrary, level_summaries, mean_value_check, verify_bounds_at_levels};
use grt_core::cvt::{lloyd, perturbed_lloyd, sample_initial_generators};
use grt_core::document::TessellationDocument;
use grt_core::funcs::integrate_masked;
use grt_core::grt::build_refinement;
use grt_core::rng::derive_seed;
use grt_core::{convex_hull, ConvexPolygon, Error, RefinementTree, SimplePolygon, TestFunction};
use serde::Serialize;

use crate::config::RunConfig;
use crate::svg::{render_document, RenderOptions};
use crate::table::{trace_rows, write_csv, BoundRow, CompareRow, LevelRow};

/// Relative tolerance on `Σ area(piece) = area(Ω)`.
pub const PARTITION_AREA_TOL: f64 = 1e-6;

/// Whether a command's checks held. Maps to exit codes 0 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Hull,
    Partition,
}

fn prepare(out: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn report_warnings(tree: &RefinementTree) {
    for w in &tree.warnings {
        eprintln!("warning: {w}");
    }
}

/// One Lloyd run (rotational restarts when `perturb` is set):
/// `tessellation.json` and `trace.csv`.
pub fn cmd_cvt(cfg: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let run = cfg.validate()?;
    let domain = cfg.convex_domain()?;
    let generators = sample_initial_generators(&domain, cfg.cvt_generators(), run.seed);
    let (tess, trace, angle) = match run.grt.perturb {
        Some(p) => {
            let outcome = perturbed_lloyd(&generators, &domain, &run.grt.lloyd, &p)?;
            (outcome.tessellation, outcome.trace, Some(outcome.chosen_angle))
        }
        None => {
            let (tess, trace) = lloyd(&generators, &domain, &run.grt.lloyd)?;
            (tess, trace, None)
        }
    };
    if !trace.converged {
        eprintln!("warning: Lloyd did not converge within {} iterations", run.grt.lloyd.max_iterations());
    }
    prepare(out)?;
    let mut json = TessellationDocument::from_tessellation(&tess, &trace, angle).to_json();
    json.push('\n');
    write_text(&out.join("tessellation.json"), &json)?;
    write_csv(&out.join("trace.csv"), trace_rows(&trace))?;
    Ok(Outcome::Pass)
}

fn build(cfg: &RunConfig) -> anyhow::Result<(TestFunction, RefinementTree)> {
    let run = cfg.validate()?;
    let domain = cfg.convex_domain()?;
    let tree = build_refinement(&run.function, &domain, &run.grt)?;
    report_warnings(&tree);
    Ok((run.function, tree))
}

/// `tree.json` and `levels.csv`.
pub fn cmd_refine(cfg: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let (f, tree) = build(cfg)?;
    prepare(out)?;
    let mut json = tree.to_json();
    json.push('\n');
    write_text(&out.join("tree.json"), &json)?;
    let rows: Vec<LevelRow> = level_summaries(&f, &tree)?.iter().map(LevelRow::from).collect();
    write_csv(&out.join("levels.csv"), rows)?;
    Ok(Outcome::Pass)
}

/// Pointwise bounds and the mean-value bracket on every level of a
/// freshly built tree, or of `tree_path` when given.
pub fn cmd_verify(cfg: &RunConfig, tree_path: Option<&Path>, out: &Path) -> anyhow::Result<Outcome> {
    let run = cfg.validate()?;
    let (f, tree) = match tree_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let tree = RefinementTree::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
            (TestFunction::lookup(&tree.function)?, tree)
        }
        None => build(cfg)?,
    };
    let levels: Vec<usize> = (0..=tree.depth()).collect();
    let report = verify_bounds_at_levels(&f, &tree, &levels, run.n_samples_per_cell, run.seed);
    let brackets: Vec<_> = levels
        .iter()
        .map(|&m| mean_value_check(&f, &tree, m, run.n_samples_per_cell, run.seed))
        .collect();

    prepare(out)?;
    write_csv(&out.join("bounds.csv"), report.cells.iter().map(BoundRow::from))?;

    let bound_failures: Vec<usize> = report.violations().map(|c| c.node_id).collect();
    let bracket_failures: Vec<usize> = brackets.iter().flat_map(|b| b.offending.iter().copied()).collect();
    if bound_failures.is_empty() && bracket_failures.is_empty() {
        println!(
            "PASS: {} cells, max violation ratio {:.6}",
            report.cells.len(),
            report.max_violation_ratio
        );
        Ok(Outcome::Pass)
    } else {
        println!(
            "FAIL: bound violations in cells {bound_failures:?}; mean-value bracket failures in cells {bracket_failures:?}; max violation ratio {:.6}",
            report.max_violation_ratio
        );
        Ok(Outcome::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    pub function: String,
    pub n_trials: usize,
    pub n_failed: usize,
    pub fraction_error_le: f64,
    pub fraction_bound_le: f64,
    pub mean_cvt_err: f64,
    pub mean_arb_err: f64,
    pub mean_cvt_bound: f64,
    pub mean_arb_bound: f64,
    pub failed_trials: Vec<FailedTrialSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedTrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

/// Paired CVT / arbitrary trials: `compare.csv` and `summary.json`.
pub fn cmd_compare(cfg: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let run = cfg.validate()?;
    let domain = cfg.convex_domain()?;
    let report = compare_cvt_vs_arbitrary(&run.function, &domain, &run.grt, run.n_trials, run.seed);
    for failed in &report.failed {
        eprintln!("warning: trial {} (seed {}) failed: {}", failed.trial, failed.seed, failed.message);
    }
    prepare(out)?;
    write_csv(&out.join("compare.csv"), report.trials.iter().map(CompareRow::from))?;
    let summary = CompareSummary {
        function: report.function.clone(),
        n_trials: run.n_trials,
        n_failed: report.failed.len(),
        fraction_error_le: report.fraction_error_le,
        fraction_bound_le: report.fraction_bound_le,
        mean_cvt_err: report.mean_cvt_l2sq,
        mean_arb_err: report.mean_arbitrary_l2sq,
        mean_cvt_bound: report.mean_cvt_bound_sum,
        mean_arb_bound: report.mean_arbitrary_bound_sum,
        failed_trials: report
            .failed
            .iter()
            .map(|t| FailedTrialSummary {
                trial: t.trial,
                seed: t.seed,
                message: t.message.clone(),
            })
            .collect(),
    };
    write_json(&out.join("summary.json"), &summary)?;
    println!(
        "{}: cvt ≤ arbitrary in {:.3} of trials (bound sums {:.3}); mean error {:.6e} vs {:.6e}",
        summary.function, summary.fraction_error_le, summary.fraction_bound_le, summary.mean_cvt_err, summary.mean_arb_err
    );
    Ok(Outcome::Pass)
}

/// Writes `render.svg` for a tree or tessellation document.
pub fn cmd_render(input: &Path, opts: RenderOptions, out: &Path) -> anyhow::Result<Outcome> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let svg = render_document(&text, opts).with_context(|| format!("rendering {}", input.display()))?;
    prepare(out)?;
    write_text(&out.join("render.svg"), &svg)?;
    Ok(Outcome::Pass)
}

/// Checks that `pieces` are convex, lie in `domain` and have total area
/// `area(domain)` within [`PARTITION_AREA_TOL`] relative.
pub fn validate_partition(domain: &SimplePolygon, pieces: &[ConvexPolygon]) -> grt_core::Result<()> {
    if pieces.is_empty() {
        return Err(Error::InvalidPartition("no pieces supplied".into()));
    }
    for (i, piece) in pieces.iter().enumerate() {
        if let Some(v) = piece.vertices().iter().find(|&&v| !domain.contains(v)) {
            return Err(Error::InvalidPartition(format!(
                "piece {i} has vertex ({}, {}) outside the domain",
                v.x, v.y
            )));
        }
    }
    let total: f64 = pieces.iter().map(ConvexPolygon::area).sum();
    let target = domain.area();
    if (total - target).abs() > PARTITION_AREA_TOL * target {
        return Err(Error::InvalidPartition(format!(
            "piece areas sum to {total} but the domain has area {target}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PieceLevelRow {
    pub piece: usize,
    pub level: usize,
    pub n_cells: usize,
    pub area: f64,
    pub max_diam: f64,
    pub bound_sum: f64,
    pub l2_error_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaskedCellRow {
    pub cell_id: usize,
    pub level: usize,
    pub area: f64,
    pub covered_fraction: f64,
    pub covered_fraction_se: f64,
    /// Average over `cell ∩ Ω`; empty when the cell misses Ω.
    pub masked_average: Option<f64>,
    pub hull_average: f64,
    pub masked_l2_error_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaskedLevelRow {
    pub level: usize,
    pub n_cells: usize,
    pub max_diam: f64,
    pub bound_sum: f64,
    pub l2_error_sq: f64,
    pub l2_error_se: f64,
}

/// Masked statistics of one hull cell against Ω.
pub fn masked_cell(
    f: &TestFunction,
    tree: &RefinementTree,
    node_id: usize,
    omega: &SimplePolygon,
    n_samples: usize,
    seed: u64,
) -> grt_core::Result<(MaskedCellRow, f64)> {
    let node = &tree.nodes[node_id];
    let poly = &node.cell.polygon;
    let cell_seed = derive_seed(seed, node_id as u64);
    let integral = integrate_masked(|p| f.eval(p), poly, omega, n_samples, cell_seed)?;
    let covered = integral.covered_area(poly);
    let masked_average = (covered > 0.0).then(|| integral.value / covered);
    let (l2, l2_se) = match masked_average {
        Some(a) => {
            let e = integrate_masked(|p| (f.eval(p) - a).powi(2), poly, omega, n_samples, cell_seed)?;
            (e.value, e.std_error)
        }
        None => (0.0, 0.0),
    };
    let row = MaskedCellRow {
        cell_id: node_id,
        level: node.level,
        area: node.cell.area,
        covered_fraction: integral.covered_fraction,
        covered_fraction_se: integral.fraction_std_error,
        masked_average,
        hull_average: node.average,
        masked_l2_error_sq: l2,
    };
    Ok((row, l2_se))
}

/// Hull strategy: the pipeline runs on `convex_hull(Ω)` and every cell
/// average and error is re-estimated over `cell ∩ Ω` by masked sampling.
pub fn nonconvex_hull(cfg: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let run = cfg.validate()?;
    let omega = cfg.simple_domain()?;
    let hull = convex_hull(omega.vertices())?;
    let tree = build_refinement(&run.function, &hull, &run.grt)?;
    report_warnings(&tree);
    let summaries = level_summaries(&run.function, &tree)?;

    let mut cells = Vec::with_capacity(tree.nodes.len());
    let mut levels = Vec::with_capacity(summaries.len());
    for summary in &summaries {
        let (mut l2, mut var) = (0.0, 0.0);
        for &id in &tree.levels[summary.level] {
            let (row, se) = masked_cell(&run.function, &tree, id, &omega, run.n_samples_per_cell, run.seed)?;
            l2 += row.masked_l2_error_sq;
            var += se * se;
            cells.push(row);
        }
        levels.push(MaskedLevelRow {
            level: summary.level,
            n_cells: summary.n_cells,
            max_diam: summary.max_diameter,
            bound_sum: summary.bound_sum,
            l2_error_sq: l2,
            l2_error_se: var.sqrt(),
        });
    }

    prepare(out)?;
    let mut json = tree.to_json();
    json.push('\n');
    write_text(&out.join("tree.json"), &json)?;
    write_csv(&out.join("cells.csv"), cells)?;
    write_csv(&out.join("levels.csv"), levels)?;
    Ok(Outcome::Pass)
}

/// Per-piece level summaries and their merge, for the partition strategy.
pub fn partition_levels(cfg: &RunConfig) -> anyhow::Result<(Vec<RefinementTree>, Vec<PieceLevelRow>, Vec<LevelRow>)> {
    let run = cfg.validate()?;
    let omega = cfg.simple_domain()?;
    if cfg.partition.is_empty() {
        bail!(Error::InvalidPartition("the partition strategy needs a `partition` list of convex pieces".into()));
    }
    let pieces = cfg
        .partition
        .iter()
        .enumerate()
        .map(|(i, vs)| ConvexPolygon::new(vs.clone()).with_context(|| format!("partition piece {i}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    validate_partition(&omega, &pieces)?;

    let mut trees = Vec::with_capacity(pieces.len());
    let mut piece_rows = Vec::new();
    let mut merged: Vec<LevelRow> = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let tree = build_refinement(&run.function, piece, &run.grt.with_seed(derive_seed(run.seed, i as u64)))?;
        report_warnings(&tree);
        for s in level_summaries(&run.function, &tree)? {
            piece_rows.push(PieceLevelRow {
                piece: i,
                level: s.level,
                n_cells: s.n_cells,
                area: piece.area(),
                max_diam: s.max_diameter,
                bound_sum: s.bound_sum,
                l2_error_sq: s.l2_error_sq,
            });
            match merged.get_mut(s.level) {
                Some(row) => {
                    row.n_cells += s.n_cells;
                    row.max_diam = row.max_diam.max(s.max_diameter);
                    row.bound_sum += s.bound_sum;
                    row.l2_error_sq += s.l2_error_sq;
                }
                None => merged.push(LevelRow::from(&s)),
            }
        }
        trees.push(tree);
    }
    Ok((trees, piece_rows, merged))
}

/// Partition strategy: independent pipelines on the supplied convex pieces.
pub fn nonconvex_partition(cfg: &RunConfig, out: &Path) -> anyhow::Result<Outcome> {
    let (trees, piece_rows, merged) = partition_levels(cfg)?;
    prepare(out)?;
    for (i, tree) in trees.iter().enumerate() {
        let mut json = tree.to_json();
        json.push('\n');
        write_text(&out.join(format!("tree_piece_{i}.json")), &json)?;
    }
    write_csv(&out.join("pieces.csv"), piece_rows)?;
    write_csv(&out.join("levels.csv"), merged)?;
    Ok(Outcome::Pass)
}

pub fn cmd_nonconvex(cfg: &RunConfig, strategy: Strategy, out: &Path) -> anyhow::Result<Outcome> {
    match strategy {
        Strategy::Hull => nonconvex_hull(cfg, out),
        Strategy::Partition => nonconvex_partition(cfg, out),
    }
}
