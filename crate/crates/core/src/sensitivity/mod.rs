//! How the LP optimum moves when a cut `alpha · x <= beta` is added.
//!
//! A separating cut's new optimum is the point where the cut hyperplane meets
//! an edge of the polytope, given by Cramer's rule over the edge's tight
//! constraints. Which edge wins is decided by linear boundaries (where the cut
//! meets the edge at all) and quadratic indifference surfaces (where two edge
//! vertices tie in objective). This module builds those surfaces exactly and
//! checks the closed form against the simplex solver.

mod arrangement;
mod edges;
mod gmi;
mod multi;
mod poly;
mod verify;

pub use arrangement::{build_arrangement, Surface, SurfaceKind, SurfaceStore, ARRANGEMENT_MAX_M, ARRANGEMENT_MAX_N};
pub use edges::{
    closed_form, constraint_set, edge_hit_halfspaces, edge_surfaces, indifference_poly, lp_edges, EdgeId, EdgeSurfaces, MRow,
};
pub use gmi::{gmi_arrangement, gmi_floor_signature, GmiArrangement, GMI_HYPERPLANE_BUDGET};
pub use multi::{faces_through, multi_closed_form, FaceId, MAX_MULTI_CUTS};
pub use poly::Poly;
pub use verify::{has_unique_optimum, random_lp, verify_closed_form, ClosedFormOracle, Regime, RegionWitness};
