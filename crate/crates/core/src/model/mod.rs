//! Domain types shared by every other module: level graphs, constraint
//! trees, cluster hierarchies, SEFE instances, plus validation and the
//! subdivision used to make long edges proper.

mod graph;
mod instances;
mod tree;

use std::fmt;

pub use graph::{is_proper, subdivide_to_proper, LevelGraph, SubdivisionMap, VertexIdx};
pub use instances::{
    is_level_connected, normalize_hierarchy, normalize_tlevel, Cluster, ClInstance,
    ClusterHierarchy, LevelGaps, SefeEdge, SefeInstance, TLevelInstance,
};
pub use tree::TreeNode;

/// One broken invariant, as reported by [`validate_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub detail: String,
}

impl Violation {
    pub fn new(code: &'static str, detail: impl Into<String>) -> Self {
        Violation {
            code,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

/// Anything whose invariants can be re-checked after construction.
pub trait Validate {
    fn violations(&self) -> Vec<Violation>;
}

/// Returns every violated invariant of `instance`; an empty list means valid.
pub fn validate_instance<T: Validate + ?Sized>(instance: &T) -> Vec<Violation> {
    instance.violations()
}
