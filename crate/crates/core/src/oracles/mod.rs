//! Exhaustive deciders used as ground truth for every reduction, and the
//! independent predicates their witnesses are re-checked with.

mod betweenness;
mod checks;
mod decode;
mod faces;
pub mod naive;
mod search;
mod sefe;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::model::{LevelGraph, VertexIdx};
use crate::error::{Error, Result};

pub use betweenness::{solve_betweenness, BetweennessInstance};
pub use checks::{
    cluster_consecutive, ordering_is_crossing_free, ordering_is_tree_compatible, CompatMode,
};
pub use decode::decode_sefe_to_orderings;
pub use faces::{is_planar_rotation, trace_faces, Faces, RotationSystem};
pub use search::{check_cl_necessary, solve_cl_levelconnected, solve_tlp_exhaustive};
pub use sefe::{
    common_rotation, extend_common_embedding, naive_rotation_product, rotation_product, solve_sefe_exhaustive,
    solve_sefe_naive, witness_is_valid, SefeWitness,
};

/// Resource limits for the exponential searches. Exceeding one is an
/// error, never a silent answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Placement attempts allowed in an ordering search.
    pub max_search_nodes: u64,
    /// Cap on the number of rotation systems an embedding enumeration may visit.
    pub max_rotation_product: u64,
    /// Largest Betweenness ground set the permutation oracle accepts.
    pub max_betweenness_elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_search_nodes: 100_000_000,
            max_rotation_product: 10_000_000,
            max_betweenness_elements: 9,
        }
    }
}

impl Budget {
    /// Applies `key=value` overrides separated by commas. Keys: `perm`
    /// (search nodes), `rotation`, `elements`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Budget> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget override {part:?} is not key=value")))?;
            let n: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("budget value {v:?} is not a non-negative integer")))?;
            match k.trim() {
                "perm" => self.max_search_nodes = n,
                "rotation" => self.max_rotation_product = n,
                "elements" => self.max_betweenness_elements = n as usize,
                other => return Err(Error::Parse(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }
}

/// One total order per level, listing vertex ids left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelOrdering {
    pub orderings: Vec<Vec<String>>,
}

impl LevelOrdering {
    pub fn new(orderings: Vec<Vec<String>>) -> Self {
        LevelOrdering { orderings }
    }

    pub fn from_indices(g: &LevelGraph, levels: &[Vec<VertexIdx>]) -> Self {
        LevelOrdering {
            orderings: levels
                .iter()
                .map(|l| l.iter().map(|&v| g.id(v).to_string()).collect())
                .collect(),
        }
    }

    /// True iff level `i` lists exactly the vertices of level `i` of `g`.
    pub fn is_permutation_of(&self, g: &LevelGraph) -> bool {
        let sets = g.level_sets();
        if sets.len() != self.orderings.len() {
            return false;
        }
        sets.iter().zip(&self.orderings).all(|(set, ord)| {
            let mut a: Vec<&str> = set.iter().map(|&v| g.id(v)).collect();
            let mut b: Vec<&str> = ord.iter().map(String::as_str).collect();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }

    /// Position of every vertex id within its level.
    pub fn positions(&self) -> HashMap<&str, usize> {
        self.orderings
            .iter()
            .flat_map(|l| l.iter().enumerate().map(|(i, v)| (v.as_str(), i)))
            .collect()
    }

    /// Every level reversed (mirror image).
    pub fn reflected(&self) -> Self {
        LevelOrdering {
            orderings: self
                .orderings
                .iter()
                .map(|l| l.iter().rev().cloned().collect())
                .collect(),
        }
    }

    /// Keeps only the ids accepted by `keep`.
    pub fn projected(&self, keep: impl Fn(&str) -> bool) -> Self {
        LevelOrdering {
            orderings: self
                .orderings
                .iter()
                .map(|l| l.iter().filter(|v| keep(v)).cloned().collect())
                .collect(),
        }
    }

    /// Equal to `other` or to its mirror image.
    pub fn equivalent_up_to_reflection(&self, other: &LevelOrdering) -> bool {
        self == other || *self == other.reflected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_overrides() {
        let b = Budget::default().with_overrides("perm=5, rotation=7").unwrap();
        assert_eq!((b.max_search_nodes, b.max_rotation_product), (5, 7));
        assert_eq!(b.max_betweenness_elements, Budget::default().max_betweenness_elements);
        assert!(Budget::default().with_overrides("speed=1").is_err());
        assert!(Budget::default().with_overrides("perm").is_err());
        assert_eq!(Budget::default().with_overrides("").unwrap(), Budget::default());
    }
}
