use std::collections::HashMap;

use super::{ReductionProvenance, Source};
use crate::error::{Error, Result};
use crate::model::{SefeEdge, SefeInstance, TLevelInstance, TreeNode};

pub(crate) fn copy_id(level: usize, n: &TreeNode) -> String {
    match n {
        TreeNode::Leaf(u) => format!("T{level}:{u}"),
        TreeNode::Node { id, .. } => format!("T{level}/{id}"),
    }
}

pub(crate) fn p_id(level: usize) -> String {
    format!("p{level}")
}

pub(crate) fn q_id(level: usize) -> String {
    format!("q{level}")
}

pub(crate) fn p_leaf(level: usize, u: &str) -> String {
    format!("P{level}:{u}")
}

pub(crate) fn q_leaf(level: usize, u: &str) -> String {
    format!("Q{level}:{u}")
}

/// Which side a tree-copy leaf is tied to in a given graph at a given level.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// Tree leaves to `P` (or `p`).
    P,
    /// Tree leaves to `Q` (or `q`), plus the arcs from `P_l` down to `Q_{l-1}`.
    Q,
}

/// `G₁` ties level `l` to `P` when `l` is even; `G₂` does the opposite.
pub(crate) fn side(graph: u8, level: usize) -> Side {
    match (graph == 1, level % 2 == 0) {
        (true, true) | (false, false) => Side::P,
        _ => Side::Q,
    }
}

struct Builder {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<SefeEdge>,
    prov: ReductionProvenance,
}

impl Builder {
    fn vertex(&mut self, id: String, role: &str, source: Source) {
        self.index.insert(id.clone(), self.vertices.len());
        self.vertices.push(id.clone());
        self.prov.add(id, role, source);
    }

    fn edge(&mut self, a: &str, b: &str, in1: bool, in2: bool) {
        let (u, v) = (self.index[a], self.index[b]);
        self.edges.push(SefeEdge { u, v, in1, in2 });
    }
}

/// Builds the SEFE instance whose two graphs admit a simultaneous embedding
/// iff `t` is T-level planar.
pub fn reduce_tlp_to_sefe(t: &TLevelInstance) -> Result<(SefeInstance, ReductionProvenance)> {
    let g = t.graph();
    if let Some(&e) = g.edges().iter().find(|&&(u, v)| g.level(v) != g.level(u) + 1) {
        return Err(Error::NotProper(g.edge_label(e)));
    }
    let k = g.level_count();
    let mut has_down = vec![false; g.vertex_count()];
    let mut has_up = vec![false; g.vertex_count()];
    for &(u, v) in g.edges() {
        has_up[u] = true;
        has_down[v] = true;
    }
    let levels = g.level_sets();
    let mut b = Builder {
        vertices: Vec::new(),
        index: HashMap::new(),
        edges: Vec::new(),
        prov: ReductionProvenance::default(),
    };
    let lv = |l: usize| Source {
        level: Some(l),
        ..Source::default()
    };

    for (l, tree) in t.trees().iter().enumerate() {
        tree.walk(&mut |n, depth| {
            let (role, source) = match n {
                TreeNode::Leaf(u) => (
                    if depth == 0 { "tree_root" } else { "tree_leaf" },
                    Source {
                        vertex: Some(u.clone()),
                        ..lv(l)
                    },
                ),
                TreeNode::Node { id, .. } => (
                    if depth == 0 { "tree_root" } else { "tree_node" },
                    Source {
                        node: Some(id.clone()),
                        ..lv(l)
                    },
                ),
            };
            b.vertex(copy_id(l, n), role, source);
        });
        b.vertex(p_id(l), "cycle_p", lv(l));
        b.vertex(q_id(l), "cycle_q", lv(l));
        for &u in &levels[l] {
            let id = g.id(u);
            let vs = Source {
                vertex: Some(id.to_string()),
                ..lv(l)
            };
            if has_down[u] {
                b.vertex(p_leaf(l, id), "star_p_leaf", vs.clone());
            }
            if has_up[u] {
                b.vertex(q_leaf(l, id), "star_q_leaf", vs);
            }
        }
    }

    // common graph: the cycle
    let root = |l: usize| copy_id(l, t.tree(l));
    for l in 0..k.saturating_sub(1) {
        b.edge(&root(l), &root(l + 1), true, true);
    }
    b.edge(&root(k - 1), &q_id(k - 1), true, true);
    for l in (0..k).rev() {
        b.edge(&q_id(l), &p_id(l), true, true);
        let west = if l == 0 { root(0) } else { q_id(l - 1) };
        b.edge(&p_id(l), &west, true, true);
    }
    // tree copies and stars
    for (l, tree) in t.trees().iter().enumerate() {
        let mut tree_edges = Vec::new();
        collect_tree_edges(l, tree, &mut tree_edges);
        for (a, c) in tree_edges {
            b.edge(&a, &c, true, true);
        }
        for &u in &levels[l] {
            let id = g.id(u);
            if has_down[u] {
                b.edge(&p_id(l), &p_leaf(l, id), true, true);
            }
            if has_up[u] {
                b.edge(&q_id(l), &q_leaf(l, id), true, true);
            }
        }
    }
    // private edges
    for graph in [1u8, 2] {
        let (in1, in2) = (graph == 1, graph == 2);
        for l in 0..k {
            for &u in &levels[l] {
                let id = g.id(u);
                let leaf = copy_id(l, &TreeNode::leaf(id));
                let leaf = if b.index.contains_key(&leaf) { leaf } else { root(l) };
                let target = match side(graph, l) {
                    Side::P if has_down[u] => p_leaf(l, id),
                    Side::P => p_id(l),
                    Side::Q if has_up[u] => q_leaf(l, id),
                    Side::Q => q_id(l),
                };
                b.edge(&leaf, &target, in1, in2);
            }
            if side(graph, l) == Side::Q && l > 0 {
                for &(x, y) in g.edges() {
                    if g.level(y) == l {
                        b.edge(&p_leaf(l, g.id(y)), &q_leaf(l - 1, g.id(x)), in1, in2);
                    }
                }
            }
        }
    }
    Ok((SefeInstance::from_parts(b.vertices, b.edges), b.prov))
}

fn collect_tree_edges(l: usize, n: &TreeNode, out: &mut Vec<(String, String)>) {
    for c in n.children() {
        out.push((copy_id(l, n), copy_id(l, c)));
        collect_tree_edges(l, c, out);
    }
}

/// Structural postconditions of the SEFE reduction, with the size bounds
/// stated alongside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SefeReductionReport {
    pub g1_biconnected: bool,
    pub g2_biconnected: bool,
    pub common_connected: bool,
    pub vertices: usize,
    /// `3·n_T`, with `n_T` the total number of tree nodes.
    pub vertex_bound: usize,
    pub edges_g1: usize,
    pub edges_g2: usize,
    /// `|E| + 2·n_T`.
    pub edge_bound: usize,
}

impl SefeReductionReport {
    pub fn connectivity_ok(&self) -> bool {
        self.g1_biconnected && self.g2_biconnected && self.common_connected
    }

    pub fn vertex_bound_ok(&self) -> bool {
        self.vertices <= self.vertex_bound
    }

    pub fn edge_bound_ok(&self) -> bool {
        self.edges_g1 <= self.edge_bound && self.edges_g2 <= self.edge_bound
    }

    pub fn all_ok(&self) -> bool {
        self.connectivity_ok() && self.vertex_bound_ok() && self.edge_bound_ok()
    }
}

pub fn check_sefe_reduction(t: &TLevelInstance, s: &SefeInstance) -> SefeReductionReport {
    let n = s.vertex_count();
    let pick = |f: &dyn Fn(&SefeEdge) -> bool| -> Vec<(usize, usize)> {
        s.edges().iter().filter(|e| f(e)).map(|e| (e.u, e.v)).collect()
    };
    let e1 = pick(&|e| e.in1);
    let e2 = pick(&|e| e.in2);
    let ec = pick(&|e| e.common());
    let n_t = t.tree_node_count();
    SefeReductionReport {
        g1_biconnected: biconnected(n, &e1),
        g2_biconnected: biconnected(n, &e2),
        common_connected: connected_without(n, &ec, None),
        vertices: n,
        vertex_bound: 3 * n_t,
        edges_g1: e1.len(),
        edges_g2: e2.len(),
        edge_bound: t.graph().edges().len() + 2 * n_t,
    }
}

fn connected_without(n: usize, edges: &[(usize, usize)], removed: Option<usize>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if Some(u) != removed && Some(v) != removed {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
        return true;
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n - removed.map_or(0, |_| 1)
}

/// No single vertex removal disconnects the graph (brute force).
fn biconnected(n: usize, edges: &[(usize, usize)]) -> bool {
    n >= 3
        && connected_without(n, edges, None)
        && (0..n).all(|x| connected_without(n, edges, Some(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LevelGraph;

    fn star(id: &str, leaves: &[&str]) -> TreeNode {
        TreeNode::node(id, leaves.iter().map(|l| TreeNode::leaf(*l)).collect())
    }

    pub(crate) fn two_by_two() -> TLevelInstance {
        let g = LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            [("a1", "b1"), ("a2", "b2")],
        )
        .unwrap();
        TLevelInstance::new(g, [(0, star("r0", &["a1", "a2"])), (1, star("r1", &["b1", "b2"]))])
            .unwrap()
    }

    #[test]
    fn two_by_two_has_fourteen_vertices() {
        let t = two_by_two();
        let (s, prov) = reduce_tlp_to_sefe(&t).unwrap();
        assert_eq!(s.vertex_count(), 14);
        assert_eq!(prov.roles.len(), 14);
        let r = check_sefe_reduction(&t, &s);
        assert!(r.connectivity_ok());
        assert!(r.vertex_bound_ok());
        assert_eq!(s.common_edges().len(), 14);
    }

    #[test]
    fn stated_edge_bound_fails_on_two_by_two() {
        // 14 common edges; G1 adds 6 private ones, G2 adds 4; |E| + 2 n_T = 14
        let t = two_by_two();
        let (s, _) = reduce_tlp_to_sefe(&t).unwrap();
        let r = check_sefe_reduction(&t, &s);
        assert_eq!((r.edges_g1, r.edges_g2, r.edge_bound), (20, 18, 14));
        assert!(!r.edge_bound_ok());
    }

    #[test]
    fn single_leaf_levels_create_parallel_edges() {
        let g = LevelGraph::new([("a", 0), ("b", 1)], [("a", "b")]).unwrap();
        let t = TLevelInstance::new(g, [(0, TreeNode::leaf("a")), (1, TreeNode::leaf("b"))])
            .unwrap();
        let (s, _) = reduce_tlp_to_sefe(&t).unwrap();
        let r = check_sefe_reduction(&t, &s);
        assert!(r.connectivity_ok());
        let m = s.common_multiplicities();
        assert!(m.values().all(|&c| c == 1));
        // the private edge T0:a - p0 doubles the cycle edge p0 - T0:a
        let (ta, p0) = (s.index_of("T0:a").unwrap(), s.index_of("p0").unwrap());
        let parallel = s
            .edges()
            .iter()
            .filter(|e| (e.u.min(e.v), e.u.max(e.v)) == (ta.min(p0), ta.max(p0)))
            .count();
        assert_eq!(parallel, 2);
    }

    #[test]
    fn non_proper_input_is_rejected() {
        let g = LevelGraph::new([("a", 0), ("b", 1), ("c", 2)], [("a", "c"), ("a", "b")]).unwrap();
        let t = TLevelInstance::new(
            g,
            [(0, TreeNode::leaf("a")), (1, TreeNode::leaf("b")), (2, TreeNode::leaf("c"))],
        )
        .unwrap();
        assert!(matches!(reduce_tlp_to_sefe(&t), Err(Error::NotProper(_))));
    }

    #[test]
    fn is_proper_guard_matches_model() {
        use crate::model::is_proper;
        assert!(is_proper(two_by_two().graph()));
    }
}
