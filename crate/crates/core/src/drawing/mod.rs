//! Exact drawings: rational coordinates, cluster regions, validation and
//! SVG output, plus the embedding certificate for the SEFE reduction.

mod certificate;
pub mod geometry;
mod layout;
mod regions;
mod svg;

pub use certificate::build_sefe_certificate;
pub use layout::{
    degeneracies, draw_from_betweenness_solution, draw_from_ordering, independent_crossings,
    LevelDrawing, Segment,
};
pub use svg::{emit_svg, fmt6};
pub use regions::{build_cluster_regions, region_epsilon, validate_cl_drawing, DrawingViolation};
