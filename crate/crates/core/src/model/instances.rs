use std::collections::{BTreeMap, HashMap, HashSet};

use super::graph::{LevelGraph, VertexIdx};
use super::tree::TreeNode;
use super::{Validate, Violation};
use crate::error::{Error, Result};

/// A level graph plus one constraint tree per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLevelInstance {
    graph: LevelGraph,
    trees: Vec<TreeNode>,
}

impl TLevelInstance {
    /// `trees` are keyed by the level numbers the graph was built with
    /// (before compaction). Trees are normalized on the way in.
    pub fn new(
        graph: LevelGraph,
        trees: impl IntoIterator<Item = (i64, TreeNode)>,
    ) -> Result<Self> {
        let position: HashMap<i64, usize> = graph
            .original_levels()
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        let mut slots: Vec<Option<TreeNode>> = vec![None; graph.level_count()];
        let mut violations = Vec::new();
        for (level, tree) in trees {
            match position.get(&level) {
                None => violations.push(Violation::new(
                    "tree-level",
                    format!("tree for level {level}, which holds no vertex"),
                )),
                Some(&l) if slots[l].is_some() => {
                    violations.push(Violation::new("tree-level", format!("two trees for level {level}")))
                }
                Some(&l) => slots[l] = tree.normalized().or(Some(tree)),
            }
        }
        for (l, s) in slots.iter().enumerate() {
            if s.is_none() {
                violations.push(Violation::new(
                    "missing-tree",
                    format!("level {}", graph.original_levels()[l]),
                ));
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let inst = TLevelInstance {
            graph,
            trees: slots.into_iter().map(Option::unwrap).collect(),
        };
        let v = inst.violations();
        if v.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Trees indexed by normalized level; normalized here, not checked.
    pub(crate) fn from_parts(graph: LevelGraph, trees: Vec<TreeNode>) -> Self {
        let trees = trees
            .into_iter()
            .map(|t| t.normalized().unwrap_or(t))
            .collect();
        TLevelInstance { graph, trees }
    }

    pub fn graph(&self) -> &LevelGraph {
        &self.graph
    }

    pub fn trees(&self) -> &[TreeNode] {
        &self.trees
    }

    pub fn tree(&self, level: usize) -> &TreeNode {
        &self.trees[level]
    }

    /// Total number of tree nodes over all levels.
    pub fn tree_node_count(&self) -> usize {
        self.trees.iter().map(TreeNode::node_count).sum()
    }
}

impl Validate for TLevelInstance {
    fn violations(&self) -> Vec<Violation> {
        let mut out = self.graph.violations();
        if self.trees.len() != self.graph.level_count() {
            out.push(Violation::new(
                "missing-tree",
                format!("{} trees for {} levels", self.trees.len(), self.graph.level_count()),
            ));
        }
        let sets = self.graph.level_sets();
        for (l, tree) in self.trees.iter().enumerate() {
            let mut leaves: Vec<&str> = tree.leaves();
            leaves.sort_unstable();
            let mut expected: Vec<&str> = sets
                .get(l)
                .map(|s| s.iter().map(|&v| self.graph.id(v)).collect())
                .unwrap_or_default();
            expected.sort_unstable();
            if leaves != expected {
                out.push(Violation::new(
                    "tree-leaves",
                    format!("tree of level {l} has leaves {leaves:?}, level holds {expected:?}"),
                ));
            }
            check_internal_nodes(tree, &format!("tree of level {l}"), &mut out);
        }
        out
    }
}

fn check_internal_nodes(tree: &TreeNode, what: &str, out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    tree.walk(&mut |n, _| {
        if let TreeNode::Node { id, children } = n {
            if !seen.insert(id.as_str()) {
                out.push(Violation::new("duplicate-node", format!("{what}: {id}")));
            }
            if children.len() < 2 {
                out.push(Violation::new(
                    "unary-node",
                    format!("{what}: {id} has {} children", children.len()),
                ));
            }
        }
    });
}

/// Contracts unary internal nodes of every tree.
pub fn normalize_tlevel(t: &TLevelInstance) -> TLevelInstance {
    TLevelInstance::from_parts(t.graph.clone(), t.trees.clone())
}

/// Contracts unary clusters of a hierarchy.
pub fn normalize_hierarchy(h: &ClusterHierarchy) -> ClusterHierarchy {
    ClusterHierarchy {
        root: h.root.normalized().unwrap_or_else(|| h.root.clone()),
    }
}

/// Rooted tree over the vertex set; every internal node is a cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterHierarchy {
    pub root: TreeNode,
}

/// A cluster with its derived vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: String,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Member vertices, ascending by index.
    pub members: Vec<VertexIdx>,
}

/// A level graph equipped with a cluster hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClInstance {
    graph: LevelGraph,
    hierarchy: ClusterHierarchy,
    clusters: Vec<Cluster>,
}

impl ClInstance {
    /// Normalizes the hierarchy (unary clusters contracted) and checks that
    /// its leaves are exactly the graph's vertices.
    pub fn new(graph: LevelGraph, root: TreeNode) -> Result<Self> {
        let inst = Self::from_parts(graph, root);
        let v = inst.violations();
        if v.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Invalid(v))
        }
    }

    pub(crate) fn from_parts(graph: LevelGraph, root: TreeNode) -> Self {
        let root = root.normalized().unwrap_or(root);
        let clusters = compute_clusters(&graph, &root);
        ClInstance {
            graph,
            hierarchy: ClusterHierarchy { root },
            clusters,
        }
    }

    pub fn graph(&self) -> &LevelGraph {
        &self.graph
    }

    pub fn hierarchy(&self) -> &ClusterHierarchy {
        &self.hierarchy
    }

    /// Clusters in pre-order; index 0 is the root when the root is internal.
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// `(γ_min, γ_max)` of a cluster.
    pub fn level_range(&self, c: usize) -> Option<(usize, usize)> {
        let ls = self.clusters[c].members.iter().map(|&v| self.graph.level(v));
        let min = ls.clone().min()?;
        Some((min, ls.max()?))
    }

    pub fn max_depth(&self) -> usize {
        self.clusters.iter().map(|c| c.depth).max().unwrap_or(0)
    }
}

fn compute_clusters(graph: &LevelGraph, root: &TreeNode) -> Vec<Cluster> {
    fn go(
        n: &TreeNode,
        parent: Option<usize>,
        depth: usize,
        graph: &LevelGraph,
        out: &mut Vec<Cluster>,
    ) -> Vec<VertexIdx> {
        match n {
            TreeNode::Leaf(id) => graph.index_of(id).into_iter().collect(),
            TreeNode::Node { id, children } => {
                let me = out.len();
                out.push(Cluster {
                    id: id.clone(),
                    parent,
                    depth,
                    members: Vec::new(),
                });
                let mut members = Vec::new();
                for c in children {
                    members.extend(go(c, Some(me), depth + 1, graph, out));
                }
                members.sort_unstable();
                out[me].members = members.clone();
                members
            }
        }
    }
    let mut out = Vec::new();
    go(root, None, 0, graph, &mut out);
    out
}

impl Validate for ClInstance {
    fn violations(&self) -> Vec<Violation> {
        let mut out = self.graph.violations();
        let mut count: HashMap<&str, usize> = HashMap::new();
        for leaf in self.hierarchy.root.leaves() {
            *count.entry(leaf).or_default() += 1;
        }
        for (leaf, n) in &count {
            if self.graph.index_of(leaf).is_none() {
                out.push(Violation::new("unknown-vertex", format!("hierarchy leaf {leaf}")));
            } else if *n > 1 {
                out.push(Violation::new("duplicate-leaf", format!("{leaf} appears {n} times")));
            }
        }
        for id in self.graph.ids() {
            if !count.contains_key(id.as_str()) {
                out.push(Violation::new("missing-leaf", format!("{id} is not in the hierarchy")));
            }
        }
        for c in &self.clusters {
            if self.graph.index_of(&c.id).is_some() {
                out.push(Violation::new(
                    "cluster-id-collision",
                    format!("cluster id {} is also a vertex id", c.id),
                ));
            }
        }
        check_internal_nodes(&self.hierarchy.root, "hierarchy", &mut out);
        out
    }
}

/// Per-cluster gaps of a proper cl-instance: `(cluster id, i)` means no edge
/// inside the cluster joins levels `i` and `i + 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelGaps {
    pub gaps: Vec<(String, usize)>,
}

impl LevelGaps {
    pub fn is_connected(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// Reports every `(cluster, level)` gap; empty report means level-connected.
pub fn is_level_connected(c: &ClInstance) -> Result<LevelGaps> {
    let g = c.graph();
    if let Some(&e) = g.edges().iter().find(|&&(u, v)| g.level(v) != g.level(u) + 1) {
        return Err(Error::NotProper(g.edge_label(e)));
    }
    let mut gaps = Vec::new();
    for (ci, cluster) in c.clusters().iter().enumerate() {
        let Some((lo, hi)) = c.level_range(ci) else { continue };
        let inside: HashSet<VertexIdx> = cluster.members.iter().copied().collect();
        let mut covered = vec![false; hi.saturating_sub(lo)];
        for &(u, v) in g.edges() {
            if inside.contains(&u) && inside.contains(&v) {
                covered[g.level(u) - lo] = true;
            }
        }
        for (i, ok) in covered.iter().enumerate() {
            if !ok {
                gaps.push((cluster.id.clone(), lo + i));
            }
        }
    }
    Ok(LevelGaps { gaps })
}

/// One edge of a SEFE instance and the graphs it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SefeEdge {
    pub u: usize,
    pub v: usize,
    pub in1: bool,
    pub in2: bool,
}

impl SefeEdge {
    pub fn common(&self) -> bool {
        self.in1 && self.in2
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Two edge multisets over one vertex set. Parallel edges are allowed.
///
/// Edge `i` is addressed as `"e<i>"`: first every edge of `E₁` in input
/// order (common ones flagged), then the edges only in `E₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SefeInstance {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<SefeEdge>,
}

impl SefeInstance {
    pub fn new<S: Into<String>, T: AsRef<str>>(
        vertices: impl IntoIterator<Item = S>,
        e1: impl IntoIterator<Item = (T, T)>,
        e2: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        let mut ids = Vec::new();
        let mut index = HashMap::new();
        for v in vertices {
            let v: String = v.into();
            if index.contains_key(&v) {
                violations.push(Violation::new("duplicate-vertex", v));
                continue;
            }
            index.insert(v.clone(), ids.len());
            ids.push(v);
        }
        let mut resolve = |a: &str, b: &str, which: &str| -> Option<(usize, usize)> {
            match (index.get(a), index.get(b)) {
                (Some(&u), Some(&v)) if u != v => Some((u, v)),
                (Some(_), Some(_)) => {
                    violations.push(Violation::new("self-loop", format!("{which}: {a}")));
                    None
                }
                _ => {
                    violations.push(Violation::new(
                        "unknown-vertex",
                        format!("{which} edge ({a}, {b})"),
                    ));
                    None
                }
            }
        };
        let mut edges: Vec<SefeEdge> = Vec::new();
        for (a, b) in e1 {
            if let Some((u, v)) = resolve(a.as_ref(), b.as_ref(), "e1") {
                edges.push(SefeEdge { u, v, in1: true, in2: false });
            }
        }
        let mut only2 = Vec::new();
        for (a, b) in e2 {
            if let Some((u, v)) = resolve(a.as_ref(), b.as_ref(), "e2") {
                let key = (u.min(v), u.max(v));
                match edges
                    .iter_mut()
                    .find(|e| !e.in2 && (e.u.min(e.v), e.u.max(e.v)) == key)
                {
                    Some(e) => e.in2 = true,
                    None => only2.push(SefeEdge { u, v, in1: false, in2: true }),
                }
            }
        }
        edges.extend(only2);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(SefeInstance {
            vertices: ids,
            index,
            edges,
        })
    }

    pub(crate) fn from_parts(vertices: Vec<String>, edges: Vec<SefeEdge>) -> Self {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        SefeInstance {
            vertices,
            index,
            edges,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[SefeEdge] {
        &self.edges
    }

    pub fn edge_id(i: usize) -> String {
        format!("e{i}")
    }

    /// Indices of the edges of `G₁` (`which == 1`) or `G₂` (`which == 2`).
    pub fn graph_edges(&self, which: u8) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| if which == 1 { e.in1 } else { e.in2 })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn common_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.common())
            .map(|(i, _)| i)
            .collect()
    }

    /// `E₁` and `E₂` as id pairs, in edge order.
    pub fn edge_lists(&self) -> (Vec<(String, String)>, Vec<(String, String)>) {
        let name = |e: &SefeEdge| (self.vertices[e.u].clone(), self.vertices[e.v].clone());
        let e1 = self.edges.iter().filter(|e| e.in1).map(name).collect();
        let e2 = self.edges.iter().filter(|e| e.in2).map(name).collect();
        (e1, e2)
    }

    /// Multiplicity of each unordered vertex pair among common edges.
    pub fn common_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for e in self.edges.iter().filter(|e| e.common()) {
            *m.entry((e.u.min(e.v), e.u.max(e.v))).or_default() += 1;
        }
        m
    }
}

impl Validate for SefeInstance {
    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.index.len() != self.vertices.len() {
            out.push(Violation::new("duplicate-vertex", "vertex ids are not unique"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.vertices.len() || e.v >= self.vertices.len() {
                out.push(Violation::new("unknown-vertex", format!("edge e{i}")));
            } else if e.u == e.v {
                out.push(Violation::new("self-loop", format!("edge e{i}")));
            }
            if !e.in1 && !e.in2 {
                out.push(Violation::new("orphan-edge", format!("edge e{i} is in neither graph")));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[(&str, i64)], es: &[(&str, &str)]) -> LevelGraph {
        LevelGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn tree_missing_a_level_vertex_is_reported() {
        let graph = g(&[("a", 0), ("b", 0), ("c", 1)], &[("a", "c")]);
        let err = TLevelInstance::new(
            graph,
            [
                (0, TreeNode::node("r", vec![TreeNode::leaf("a")])),
                (1, TreeNode::leaf("c")),
            ],
        )
        .unwrap_err();
        let Error::Invalid(v) = err else { panic!() };
        assert!(v.iter().any(|x| x.code == "tree-leaves"));
    }

    #[test]
    fn gaps_of_a_cluster_without_internal_edges() {
        let graph = g(&[("a", 0), ("m", 1), ("b", 2)], &[("a", "m"), ("m", "b")]);
        let root = TreeNode::node(
            "root",
            vec![
                TreeNode::node("mu", vec![TreeNode::leaf("a"), TreeNode::leaf("b")]),
                TreeNode::leaf("m"),
            ],
        );
        let c = ClInstance::new(graph, root).unwrap();
        let gaps = is_level_connected(&c).unwrap();
        assert_eq!(
            gaps.gaps,
            vec![("mu".to_string(), 0), ("mu".to_string(), 1)]
        );
    }

    #[test]
    fn root_only_hierarchy_over_connected_two_levels() {
        let graph = g(&[("a", 0), ("b", 1), ("c", 1)], &[("a", "b"), ("a", "c")]);
        let root = TreeNode::node(
            "root",
            vec![TreeNode::leaf("a"), TreeNode::leaf("b"), TreeNode::leaf("c")],
        );
        let c = ClInstance::new(graph, root).unwrap();
        assert!(is_level_connected(&c).unwrap().is_connected());
    }

    #[test]
    fn level_connectivity_rejects_long_edges() {
        let graph = g(&[("a", 0), ("m", 1), ("b", 2)], &[("a", "b")]);
        let root = TreeNode::node(
            "root",
            vec![TreeNode::leaf("a"), TreeNode::leaf("m"), TreeNode::leaf("b")],
        );
        let c = ClInstance::new(graph, root).unwrap();
        assert!(matches!(is_level_connected(&c), Err(Error::NotProper(_))));
    }

    #[test]
    fn unary_clusters_are_contracted_on_ingestion() {
        let graph = g(&[("a", 0), ("b", 1)], &[("a", "b")]);
        let root = TreeNode::node(
            "root",
            vec![
                TreeNode::node("solo", vec![TreeNode::leaf("a")]),
                TreeNode::leaf("b"),
            ],
        );
        let c = ClInstance::new(graph, root).unwrap();
        assert_eq!(c.clusters().len(), 1);
        assert_eq!(c.clusters()[0].members, vec![0, 1]);
    }

    #[test]
    fn sefe_common_edges_are_multiset_intersection() {
        let s = SefeInstance::new(
            ["a", "b", "c"],
            [("a", "b"), ("a", "b"), ("b", "c")],
            [("b", "a"), ("a", "c")],
        )
        .unwrap();
        assert_eq!(s.common_edges(), vec![0]);
        assert_eq!(s.graph_edges(1), vec![0, 1, 2]);
        assert_eq!(s.graph_edges(2), vec![0, 3]);
    }
}
