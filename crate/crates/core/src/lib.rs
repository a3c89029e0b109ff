//! Centroidal Voronoi tessellations on convex planar domains and the
//! hierarchical cell-average transform built from them.
//!
//! * [`geom2d`]: convex polygons, clipping, hulls, rotations.
//! * [`voronoi`]: bounded Voronoi diagrams by bisector clipping.
//! * [`cvt`]: Lloyd iteration, energies, rotational restarts.
//! * [`funcs`]: analytic test fields with Lipschitz constants; quadrature.
//! * [`grt`]: the refinement tree, reconstruction and integrated error.
//! * [`analysis`]: bound verification and CVT-versus-arbitrary comparison.
//! * [`document`]: JSON shapes for trees and configs.

pub mod analysis;
pub mod cvt;
pub mod document;
pub mod error;
pub mod funcs;
pub mod geom2d;
pub mod grt;
pub mod rng;
pub mod voronoi;

pub use error::{Error, Result};
pub use funcs::{catalog, FunctionSpec, TestFunction};
pub use geom2d::{convex_hull, rotate_about, Aabb, ConvexPolygon, HalfPlane, Point2, SimplePolygon, EPS_GEOM};
pub use grt::{GrtConfig, RefinementNode, RefinementTree};
pub use cvt::{LloydConfig, LloydTrace, PerturbConfig};
pub use voronoi::{bounded_voronoi, Tessellation, VoronoiCell};
