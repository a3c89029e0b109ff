//! SVG figures of tessellations and refinement trees.
//!
//! Cells are stroked polygons and generators are dots, one `<g>` per
//! level. With `fill`, each cell is coloured by its average on a linear
//! ramp from blue (`rgb(0,0,255)`, smallest drawn average) to red
//! (`rgb(255,0,0)`, largest); when every drawn average is equal the
//! midpoint colour is used.

use std::fmt::Write;

use anyhow::{bail, Context};
use grt_core::document::{TessellationDocument, TreeDocument};
use grt_core::{Aabb, Point2, RefinementTree, Tessellation};

const CANVAS: f64 = 512.0;
const MARGIN: f64 = 16.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Draw only this level; all levels when `None`.
    pub level: Option<usize>,
    pub fill: bool,
}

struct Layer<'a> {
    id: String,
    cells: Vec<(&'a [Point2], Point2, Option<f64>)>,
}

/// Renders `tree.json` or `tessellation.json` contents.
pub fn render_document(json: &str, opts: RenderOptions) -> anyhow::Result<String> {
    let value: serde_json::Value = serde_json::from_str(json).context("input is not JSON")?;
    if value.get("nodes").is_some() {
        let tree = TreeDocument::from_json(json)?.into_tree()?;
        render_tree(&tree, opts)
    } else if value.get("cells").is_some() {
        let tess = TessellationDocument::from_json(json)?.to_tessellation()?;
        render_tessellation(&tess, opts)
    } else {
        bail!("input is neither a tree nor a tessellation document")
    }
}

pub fn render_tree(tree: &RefinementTree, opts: RenderOptions) -> anyhow::Result<String> {
    let levels: Vec<usize> = match opts.level {
        Some(m) if m > tree.depth() => bail!("level {m} requested but the tree has depth {}", tree.depth()),
        Some(m) => vec![m],
        None => (0..=tree.depth()).collect(),
    };
    let layers = levels
        .into_iter()
        .map(|m| Layer {
            id: format!("level-{m}"),
            cells: tree
                .level(m)
                .map(|n| (n.cell.polygon.vertices(), n.cell.generator, Some(n.average)))
                .collect(),
        })
        .collect::<Vec<_>>();
    Ok(draw(&tree.domain.bounding_box(), &layers, opts.fill))
}

pub fn render_tessellation(tess: &Tessellation, opts: RenderOptions) -> anyhow::Result<String> {
    if let Some(m) = opts.level.filter(|&m| m > 0) {
        bail!("level {m} requested but a tessellation has only level 0");
    }
    let layer = Layer {
        id: "level-0".into(),
        cells: tess
            .cells
            .iter()
            .map(|c| (c.polygon.vertices(), c.generator, None))
            .collect(),
    };
    Ok(draw(&tess.domain.bounding_box(), &[layer], false))
}

fn ramp(t: f64) -> String {
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("rgb({r},0,{b})")
}

fn draw(bbox: &Aabb, layers: &[Layer], fill: bool) -> String {
    let extent = (bbox.max.x - bbox.min.x).max(bbox.max.y - bbox.min.y);
    let scale = (CANVAS - 2.0 * MARGIN) / extent;
    let width = 2.0 * MARGIN + (bbox.max.x - bbox.min.x) * scale;
    let height = 2.0 * MARGIN + (bbox.max.y - bbox.min.y) * scale;
    // y grows downwards in SVG
    let map = |p: Point2| (MARGIN + (p.x - bbox.min.x) * scale, MARGIN + (bbox.max.y - p.y) * scale);

    let averages = layers.iter().flat_map(|l| l.cells.iter().filter_map(|c| c.2));
    let (lo, hi) = averages.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| (lo.min(a), hi.max(a)));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    for layer in layers {
        let _ = writeln!(svg, r#"  <g id="{}">"#, layer.id);
        for (vertices, _, average) in &layer.cells {
            let points: Vec<String> = vertices
                .iter()
                .map(|&v| {
                    let (x, y) = map(v);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let colour = match average {
                Some(a) if fill => ramp(if hi > lo { (a - lo) / (hi - lo) } else { 0.5 }),
                _ => "none".to_string(),
            };
            let _ = writeln!(
                svg,
                r#"    <polygon points="{}" fill="{colour}" stroke="black" stroke-width="1"/>"#,
                points.join(" ")
            );
        }
        for (_, generator, _) in &layer.cells {
            let (x, y) = map(*generator);
            let _ = writeln!(svg, r#"    <circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#);
        }
        let _ = writeln!(svg, "  </g>");
    }
    svg.push_str("</svg>\n");
    svg
}
