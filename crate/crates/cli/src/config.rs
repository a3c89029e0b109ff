use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use grt_core::document::{DomainSpec, LloydSpec, PerturbSpec};
use grt_core::{ConvexPolygon, FunctionSpec, GrtConfig, Point2, SimplePolygon, TestFunction};
use serde::{Deserialize, Serialize};

/// Contents of the `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainSpec,
    pub function: FunctionSpec,
    pub grt: GrtSection,
    #[serde(default)]
    pub perturb: Option<PerturbSpec>,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Generator count for `grt cvt`; defaults to `grt.multiplicity`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cvt: Option<CvtSection>,
    /// Convex pieces for `grt nonconvex --strategy partition`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partition: Vec<Vec<Point2>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrtSection {
    pub multiplicity: usize,
    pub depth: usize,
    #[serde(default)]
    pub lloyd: LloydSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_samples")]
    pub n_samples_per_cell: usize,
    #[serde(default = "default_trials")]
    pub n_trials: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            n_samples_per_cell: default_samples(),
            n_trials: default_trials(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvtSection {
    pub k: usize,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_samples() -> usize {
    500
}

fn default_trials() -> usize {
    20
}

/// Everything a command needs once the config has been checked.
#[derive(Debug, Clone)]
pub struct Run {
    pub function: TestFunction,
    pub grt: GrtConfig,
    pub n_samples_per_cell: usize,
    pub n_trials: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("config does not match the expected schema")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Semantic checks that the schema alone cannot express.
    pub fn validate(&self) -> anyhow::Result<Run> {
        if self.domain.convex {
            self.domain.to_convex().context("domain")?;
        } else {
            self.domain.to_simple().context("domain")?;
        }
        let function = TestFunction::lookup(&self.function)?;
        let lloyd = self.grt.lloyd.to_config(self.seed)?;
        let perturb = self.perturb.as_ref().map(PerturbSpec::to_config).transpose()?;
        let grt = GrtConfig::new(self.grt.multiplicity, self.grt.depth, lloyd, perturb, self.seed)?;
        if self.analysis.n_samples_per_cell == 0 {
            bail!("analysis.n_samples_per_cell must be at least 1");
        }
        if self.analysis.n_trials == 0 {
            bail!("analysis.n_trials must be at least 1");
        }
        if matches!(self.cvt, Some(CvtSection { k: 0 })) {
            bail!("cvt.k must be at least 1");
        }
        Ok(Run {
            function,
            grt,
            n_samples_per_cell: self.analysis.n_samples_per_cell,
            n_trials: self.analysis.n_trials,
            seed: self.seed,
        })
    }

    pub fn convex_domain(&self) -> anyhow::Result<ConvexPolygon> {
        if !self.domain.convex {
            bail!("this command needs a convex domain; use `grt nonconvex` for non-convex ones");
        }
        Ok(self.domain.to_convex()?)
    }

    pub fn simple_domain(&self) -> anyhow::Result<SimplePolygon> {
        Ok(self.domain.to_simple()?)
    }

    pub fn cvt_generators(&self) -> usize {
        self.cvt.map_or(self.grt.multiplicity, |c| c.k)
    }
}
