//! The five constructions, their structural checks, and the two decision
//! pipelines built on top of them.

mod betweenness;
mod level_connected;
mod pipeline;
pub(crate) mod sefe;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use betweenness::{build_cl_hierarchy, reduce_betweenness_to_tlevel};
pub use level_connected::{clusters_to_trees, connector_additions, make_level_connected};
pub use pipeline::{decide_proper_cl, decide_proper_tlp, Backend, Decision, BACKEND_CAVEAT};
pub use sefe::{check_sefe_reduction, reduce_tlp_to_sefe, SefeReductionReport};

/// What a produced vertex (or cluster) stands for. Only the keys that apply
/// are present.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub element: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triple: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cluster: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub node: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Role {
    pub role: String,
    pub source: Source,
}

/// Role of every vertex and cluster a reduction produced, keyed by id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionProvenance {
    pub roles: BTreeMap<String, Role>,
}

impl ReductionProvenance {
    pub(crate) fn add(&mut self, id: impl Into<String>, role: &str, source: Source) {
        let id = id.into();
        let prev = self.roles.insert(
            id.clone(),
            Role {
                role: role.to_string(),
                source,
            },
        );
        debug_assert!(prev.is_none(), "two roles for {id}");
    }

    pub fn role(&self, id: &str) -> Option<&Role> {
        self.roles.get(id)
    }

    /// Ids with the given role, in id order.
    pub fn with_role<'a>(&'a self, role: &'a str) -> impl Iterator<Item = (&'a str, &'a Role)> + 'a {
        self.roles
            .iter()
            .filter(move |(_, r)| r.role == role)
            .map(|(id, r)| (id.as_str(), r))
    }
}
