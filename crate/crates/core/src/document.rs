//! On-disk JSON shapes shared by the library and the command-line tool.
//!
//! `tree.json` stores every node with its geometry, average and detail;
//! floats are written in shortest round-trip form, so a reloaded tree
//! answers every reconstruction query identically.

use serde::{Deserialize, Serialize};

use crate::cvt::{
    centroid_energy, quantization_energy, LloydConfig, LloydTrace, PerturbConfig, DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOL_MOVE,
};
use crate::error::{Error, Result};
use crate::funcs::FunctionSpec;
use crate::geom2d::{ConvexPolygon, Point2, SimplePolygon};
use crate::grt::{GrtConfig, RefinementNode, RefinementTree};
use crate::voronoi::{Tessellation, VoronoiCell};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub vertices: Vec<Point2>,
    #[serde(default = "default_true")]
    pub convex: bool,
}

fn default_true() -> bool {
    true
}

impl DomainSpec {
    pub fn from_convex(poly: &ConvexPolygon) -> Self {
        Self {
            vertices: poly.vertices().to_vec(),
            convex: true,
        }
    }

    pub fn to_convex(&self) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.clone())
    }

    pub fn to_simple(&self) -> Result<SimplePolygon> {
        SimplePolygon::new(self.vertices.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LloydSpec {
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_tol_move")]
    pub tol_move: f64,
}

fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}

fn default_tol_move() -> f64 {
    DEFAULT_TOL_MOVE
}

impl Default for LloydSpec {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tol_move: DEFAULT_TOL_MOVE,
        }
    }
}

impl LloydSpec {
    pub fn to_config(&self, rng_seed: u64) -> Result<LloydConfig> {
        LloydConfig::new(self.max_iterations, self.tol_move, rng_seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSpec {
    pub n_angles: usize,
    pub eps_max: f64,
}

impl PerturbSpec {
    pub fn to_config(&self) -> Result<PerturbConfig> {
        PerturbConfig::new(self.n_angles, self.eps_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrtConfigSpec {
    pub multiplicity: usize,
    pub depth: usize,
    #[serde(default)]
    pub lloyd: LloydSpec,
    #[serde(default)]
    pub perturb: Option<PerturbSpec>,
    #[serde(default)]
    pub rng_seed: u64,
}

impl GrtConfigSpec {
    pub fn from_config(cfg: &GrtConfig) -> Self {
        Self {
            multiplicity: cfg.multiplicity(),
            depth: cfg.depth(),
            lloyd: LloydSpec {
                max_iterations: cfg.lloyd.max_iterations(),
                tol_move: cfg.lloyd.tol_move(),
            },
            perturb: cfg.perturb.map(|p| PerturbSpec {
                n_angles: p.n_angles(),
                eps_max: p.eps_max(),
            }),
            rng_seed: cfg.rng_seed,
        }
    }

    pub fn to_config(&self) -> Result<GrtConfig> {
        GrtConfig::new(
            self.multiplicity,
            self.depth,
            self.lloyd.to_config(self.rng_seed)?,
            self.perturb.as_ref().map(PerturbSpec::to_config).transpose()?,
            self.rng_seed,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub id: usize,
    pub parent: Option<usize>,
    pub level: usize,
    pub generator: Point2,
    pub vertices: Vec<Point2>,
    pub centroid: Point2,
    pub area: f64,
    pub diameter: f64,
    pub average: f64,
    pub detail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub domain: DomainSpec,
    pub config: GrtConfigSpec,
    pub function: FunctionSpec,
    pub nodes: Vec<NodeDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TreeDocument {
    pub fn from_tree(tree: &RefinementTree) -> Self {
        Self {
            domain: DomainSpec::from_convex(&tree.domain),
            config: GrtConfigSpec::from_config(&tree.config),
            function: tree.function.clone(),
            nodes: tree
                .nodes
                .iter()
                .map(|n| NodeDocument {
                    id: n.id,
                    parent: n.parent,
                    level: n.level,
                    generator: n.cell.generator,
                    vertices: n.cell.polygon.vertices().to_vec(),
                    centroid: n.cell.centroid,
                    area: n.cell.area,
                    diameter: n.cell.diameter,
                    average: n.average,
                    detail: n.detail,
                })
                .collect(),
            warnings: tree.warnings.clone(),
        }
    }

    /// Rebuilds the tree. Structure (ids, parents, levels) is validated;
    /// stored values are taken as they are.
    pub fn into_tree(self) -> Result<RefinementTree> {
        let malformed = |msg: String| Error::MalformedTree(msg);
        let domain = self.domain.to_convex()?;
        let config = self.config.to_config()?;
        if self.nodes.is_empty() {
            return Err(malformed("tree has no nodes".into()));
        }
        let mut nodes: Vec<RefinementNode> = Vec::with_capacity(self.nodes.len());
        let mut levels: Vec<Vec<usize>> = Vec::new();
        for (index, doc) in self.nodes.into_iter().enumerate() {
            if doc.id != index {
                return Err(malformed(format!("node at position {index} has id {}", doc.id)));
            }
            match (doc.parent, doc.level) {
                (None, 0) if index == 0 => {}
                (Some(p), level) if p < index && level >= 1 && nodes[p].level + 1 == level => {}
                _ => {
                    return Err(malformed(format!(
                        "node {index} has inconsistent parent {:?} / level {}",
                        doc.parent, doc.level
                    )))
                }
            }
            let polygon = ConvexPolygon::new(doc.vertices)?;
            let cell = VoronoiCell {
                generator: doc.generator,
                polygon,
                centroid: doc.centroid,
                area: doc.area,
                diameter: doc.diameter,
            };
            if let Some(p) = doc.parent {
                nodes[p].children.push(index);
            }
            if levels.len() <= doc.level {
                if levels.len() != doc.level {
                    return Err(malformed(format!("level {} appears out of order", doc.level)));
                }
                levels.push(Vec::new());
            }
            levels[doc.level].push(index);
            nodes.push(RefinementNode {
                id: index,
                parent: doc.parent,
                level: doc.level,
                cell,
                average: doc.average,
                detail: doc.detail,
                children: Vec::new(),
            });
        }
        Ok(RefinementTree {
            domain,
            config,
            function: self.function,
            nodes,
            levels,
            warnings: self.warnings,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedTree(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDocument {
    pub generator: Point2,
    pub vertices: Vec<Point2>,
    pub centroid: Point2,
    pub area: f64,
    pub diameter: f64,
}

/// Result of a single Lloyd run (`tessellation.json`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TessellationDocument {
    pub domain: DomainSpec,
    pub converged: bool,
    pub iterations: usize,
    pub centroid_energy: f64,
    pub quantization_energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen_angle: Option<f64>,
    pub cells: Vec<CellDocument>,
}

impl TessellationDocument {
    pub fn from_tessellation(tess: &Tessellation, trace: &LloydTrace, chosen_angle: Option<f64>) -> Self {
        Self {
            domain: DomainSpec::from_convex(&tess.domain),
            converged: trace.converged,
            iterations: trace.iterations_used(),
            centroid_energy: centroid_energy(tess),
            quantization_energy: quantization_energy(tess),
            chosen_angle,
            cells: tess
                .cells
                .iter()
                .map(|c| CellDocument {
                    generator: c.generator,
                    vertices: c.polygon.vertices().to_vec(),
                    centroid: c.centroid,
                    area: c.area,
                    diameter: c.diameter,
                })
                .collect(),
        }
    }

    pub fn to_tessellation(&self) -> Result<Tessellation> {
        if self.cells.is_empty() {
            return Err(Error::MalformedTessellation("no cells".into()));
        }
        let cells = self
            .cells
            .iter()
            .map(|c| {
                Ok(VoronoiCell {
                    generator: c.generator,
                    polygon: ConvexPolygon::new(c.vertices.clone())?,
                    centroid: c.centroid,
                    area: c.area,
                    diameter: c.diameter,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tessellation {
            domain: self.domain.to_convex()?,
            cells,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tessellation document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedTessellation(e.to_string()))
    }
}

impl RefinementTree {
    pub fn to_json(&self) -> String {
        TreeDocument::from_tree(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        TreeDocument::from_json(text)?.into_tree()
    }
}
