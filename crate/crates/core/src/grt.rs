//! Hierarchical refinement by recursive per-cell CVT subdivision.
//!
//! Level 0 is the whole domain. Every node at level `m < depth` is split
//! into `multiplicity` children by running Lloyd inside the node's own
//! polygon. Each node stores the cell average of the field and a detail
//! coefficient (its average minus the parent's; the root's detail is its
//! average), so summing details along a root-to-node path reproduces the
//! node's average bit for bit.

use rayon::prelude::*;

use crate::cvt::{lloyd, perturbed_lloyd, sample_initial_generators, LloydConfig, PerturbConfig};
use crate::error::{Error, Result};
use crate::funcs::{integrate, FunctionSpec, TestFunction};
use crate::geom2d::{ConvexPolygon, Point2};
use crate::rng::derive_seed;
use crate::voronoi::{bounded_voronoi, nearest_index, Tessellation, VoronoiCell};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrtConfig {
    multiplicity: usize,
    depth: usize,
    pub lloyd: LloydConfig,
    pub perturb: Option<PerturbConfig>,
    pub rng_seed: u64,
}

impl GrtConfig {
    pub fn new(
        multiplicity: usize,
        depth: usize,
        lloyd: LloydConfig,
        perturb: Option<PerturbConfig>,
        rng_seed: u64,
    ) -> Result<Self> {
        if multiplicity < 2 {
            return Err(Error::InvalidConfig(format!(
                "multiplicity must be at least 2, got {multiplicity}"
            )));
        }
        Ok(Self {
            multiplicity,
            depth,
            lloyd: lloyd.with_seed(rng_seed),
            perturb,
            rng_seed,
        })
    }

    /// Default Lloyd settings, no perturbation.
    pub fn simple(multiplicity: usize, depth: usize, rng_seed: u64) -> Result<Self> {
        Self::new(multiplicity, depth, LloydConfig::default(), None, rng_seed)
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        Self {
            rng_seed,
            lloyd: self.lloyd.with_seed(rng_seed),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub level: usize,
    pub cell: VoronoiCell,
    pub average: f64,
    pub detail: f64,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTree {
    pub domain: ConvexPolygon,
    pub config: GrtConfig,
    pub function: FunctionSpec,
    /// Indexed by node id; ids are assigned level by level.
    pub nodes: Vec<RefinementNode>,
    pub levels: Vec<Vec<usize>>,
    /// Non-fatal notes, e.g. Lloyd runs that hit the iteration cap.
    pub warnings: Vec<String>,
}

/// `∫_poly f / |poly|`.
pub fn cell_average(f: &TestFunction, poly: &ConvexPolygon) -> f64 {
    integrate(|p| f.eval(p), poly) / poly.area()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Subdivision {
    Cvt,
    Arbitrary,
}

struct Split {
    tessellation: Tessellation,
    warning: Option<String>,
}

fn split_node(node: &RefinementNode, cfg: &GrtConfig, mode: Subdivision) -> Result<Split> {
    let seed = derive_seed(cfg.rng_seed, node.id as u64);
    let polygon = &node.cell.polygon;
    let initial = sample_initial_generators(polygon, cfg.multiplicity, seed);
    if mode == Subdivision::Arbitrary {
        return Ok(Split {
            tessellation: bounded_voronoi(&initial, polygon)?,
            warning: None,
        });
    }
    let lloyd_cfg = cfg.lloyd.with_seed(seed);
    let (tessellation, trace) = match &cfg.perturb {
        Some(pcfg) => {
            let out = perturbed_lloyd(&initial, polygon, &lloyd_cfg, pcfg)?;
            (out.tessellation, out.trace)
        }
        None => lloyd(&initial, polygon, &lloyd_cfg)?,
    };
    let warning = (!trace.converged).then(|| {
        format!(
            "node {}: Lloyd stopped after {} iterations without reaching tol_move",
            node.id,
            trace.iterations_used()
        )
    });
    Ok(Split { tessellation, warning })
}

fn build(f: &TestFunction, domain: &ConvexPolygon, cfg: &GrtConfig, mode: Subdivision) -> Result<RefinementTree> {
    let root_average = cell_average(f, domain);
    let mut nodes = vec![RefinementNode {
        id: 0,
        parent: None,
        level: 0,
        cell: VoronoiCell::new(domain.centroid(), domain.clone()),
        average: 0.0 + root_average,
        detail: root_average,
        children: Vec::new(),
    }];
    let mut levels = vec![vec![0]];
    let mut warnings = Vec::new();

    for level in 0..cfg.depth {
        let parents = levels[level].clone();
        let splits = parents
            .par_iter()
            .map(|&id| split_node(&nodes[id], cfg, mode))
            .collect::<Result<Vec<_>>>()?;
        let mut next = Vec::with_capacity(parents.len() * cfg.multiplicity);
        for (&parent_id, split) in parents.iter().zip(splits) {
            warnings.extend(split.warning);
            let parent_average = nodes[parent_id].average;
            for cell in split.tessellation.cells {
                let id = nodes.len();
                let detail = cell_average(f, &cell.polygon) - parent_average;
                nodes.push(RefinementNode {
                    id,
                    parent: Some(parent_id),
                    level: level + 1,
                    cell,
                    // stored as the telescoped value so the path sum is exact
                    average: parent_average + detail,
                    detail,
                    children: Vec::new(),
                });
                nodes[parent_id].children.push(id);
                next.push(id);
            }
        }
        levels.push(next);
    }

    Ok(RefinementTree {
        domain: domain.clone(),
        config: *cfg,
        function: f.spec(),
        nodes,
        levels,
        warnings,
    })
}

/// CVT hierarchy: every split is a Lloyd (or perturbed Lloyd) result inside the parent cell.
pub fn build_refinement(f: &TestFunction, domain: &ConvexPolygon, cfg: &GrtConfig) -> Result<RefinementTree> {
    build(f, domain, cfg, Subdivision::Cvt)
}

/// Same seeds and structure as [`build_refinement`], but children are the
/// Voronoi cells of the raw initial samples.
pub fn build_arbitrary_refinement(f: &TestFunction, domain: &ConvexPolygon, cfg: &GrtConfig) -> Result<RefinementTree> {
    build(f, domain, cfg, Subdivision::Arbitrary)
}

/// Dispatches on `skip_lloyd`.
pub fn build_tree(f: &TestFunction, domain: &ConvexPolygon, cfg: &GrtConfig, skip_lloyd: bool) -> Result<RefinementTree> {
    if skip_lloyd {
        build_arbitrary_refinement(f, domain, cfg)
    } else {
        build_refinement(f, domain, cfg)
    }
}

impl RefinementTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn root(&self) -> &RefinementNode {
        &self.nodes[0]
    }

    pub fn level(&self, level: usize) -> impl Iterator<Item = &RefinementNode> + '_ {
        self.levels
            .get(level)
            .into_iter()
            .flatten()
            .map(move |&id| &self.nodes[id])
    }

    pub fn leaves(&self) -> impl Iterator<Item = &RefinementNode> + '_ {
        self.level(self.depth())
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            return Err(Error::InvalidConfig(format!(
                "level {level} exceeds tree depth {}",
                self.depth()
            )));
        }
        Ok(())
    }

    /// Node ids from the root down to `id`.
    pub fn path(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(parent) = self.nodes[cur].parent {
            path.push(parent);
            cur = parent;
        }
        path.reverse();
        path
    }

    /// Sum of details from the root to `id`.
    pub fn telescoped_average(&self, id: usize) -> f64 {
        self.path(id)
            .into_iter()
            .fold(0.0, |acc, n| acc + self.nodes[n].detail)
    }

    /// Greedy descent: at each level, the child whose generator is nearest to `p`.
    pub fn locate(&self, p: Point2, level: usize) -> Result<usize> {
        self.check_level(level)?;
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let mut id = 0;
        for _ in 0..level {
            let children = &self.nodes[id].children;
            let k = nearest_index(children.iter().map(|&c| self.nodes[c].cell.generator), p);
            id = children[k];
        }
        Ok(id)
    }

    /// Piecewise-constant reconstruction at `level`.
    pub fn reconstruct(&self, p: Point2, level: usize) -> Result<f64> {
        Ok(self.telescoped_average(self.locate(p, level)?))
    }

    /// Cell average plus the linear correction `∇f(x₀)·(p − x₀)` about the cell centroid `x₀`.
    pub fn reconstruct_gradient_augmented(&self, f: &TestFunction, p: Point2, level: usize) -> Result<f64> {
        let node = &self.nodes[self.locate(p, level)?];
        let x0 = node.cell.centroid;
        Ok(self.telescoped_average(node.id) + f.grad(x0).dot(p - x0))
    }

    /// `∫_Ω |f − f_m|²` where `f_m` is the level-`m` piecewise-constant reconstruction.
    pub fn l2_error_sq(&self, f: &TestFunction, level: usize) -> Result<f64> {
        self.check_level(level)?;
        Ok(self
            .level(level)
            .map(|n| {
                let avg = n.average;
                integrate(|p| (f.eval(p) - avg).powi(2), &n.cell.polygon)
            })
            .sum())
    }

    /// Relative deviation of each level's total area from the domain area.
    pub fn partition_defects(&self) -> Vec<f64> {
        let total = self.domain.area();
        (0..=self.depth())
            .map(|m| {
                let s: f64 = self.level(m).map(|n| n.cell.area).sum();
                (s - total).abs() / total
            })
            .collect()
    }
}

/// Free-function form of [`RefinementTree::l2_error_sq`].
pub fn l2_error_sq(f: &TestFunction, tree: &RefinementTree, level: usize) -> Result<f64> {
    tree.l2_error_sq(f, level)
}

pub fn reconstruct(tree: &RefinementTree, p: Point2, level: usize) -> Result<f64> {
    tree.reconstruct(p, level)
}

pub fn reconstruct_gradient_augmented(tree: &RefinementTree, f: &TestFunction, p: Point2, level: usize) -> Result<f64> {
    tree.reconstruct_gradient_augmented(f, p, level)
}

pub fn locate(tree: &RefinementTree, p: Point2, level: usize) -> Result<usize> {
    tree.locate(p, level)
}
