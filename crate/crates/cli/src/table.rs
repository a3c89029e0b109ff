//! CSV reports: header row, RFC-4180 quoting, `\n` line endings.

use std::path::Path;

use anyhow::Context;
use grt_core::analysis::{CellBoundRecord, LevelSummary, TrialRecord};
use grt_core::cvt::LloydTrace;
use serde::Serialize;

pub fn to_csv_string<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

pub fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> anyhow::Result<()> {
    let text = to_csv_string(rows)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub centroid_energy: f64,
    pub quantization_energy: f64,
    pub max_move: f64,
}

pub fn trace_rows(trace: &LloydTrace) -> Vec<TraceRow> {
    trace
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| TraceRow {
            iteration: i + 1,
            centroid_energy: r.centroid_energy,
            quantization_energy: r.quantization_energy,
            max_move: r.max_move,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub level: usize,
    pub n_cells: usize,
    pub max_diam: f64,
    pub bound_sum: f64,
    pub l2_error_sq: f64,
}

impl From<&LevelSummary> for LevelRow {
    fn from(s: &LevelSummary) -> Self {
        Self {
            level: s.level,
            n_cells: s.n_cells,
            max_diam: s.max_diameter,
            bound_sum: s.bound_sum,
            l2_error_sq: s.l2_error_sq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub cell_id: usize,
    pub level: usize,
    pub diam: f64,
    pub bound1: f64,
    pub observed1: f64,
    pub bound2: f64,
    pub observed2: f64,
}

impl From<&CellBoundRecord> for BoundRow {
    fn from(c: &CellBoundRecord) -> Self {
        Self {
            cell_id: c.node_id,
            level: c.level,
            diam: c.diameter,
            bound1: c.first_order_bound,
            observed1: c.first_order_observed,
            bound2: c.second_order_bound,
            observed2: c.second_order_observed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub trial: usize,
    pub seed: u64,
    pub cvt_err: f64,
    pub arb_err: f64,
    pub cvt_bound: f64,
    pub arb_bound: f64,
}

impl From<&TrialRecord> for CompareRow {
    fn from(t: &TrialRecord) -> Self {
        Self {
            trial: t.trial,
            seed: t.seed,
            cvt_err: t.cvt_l2sq,
            arb_err: t.arbitrary_l2sq,
            cvt_bound: t.cvt_bound_sum,
            arb_bound: t.arbitrary_bound_sum,
        }
    }
}
