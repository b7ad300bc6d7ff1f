use std::collections::HashMap;

use super::LevelOrdering;
use crate::model::{LevelGraph, TreeNode};

/// Which vertices take part in a consecutiveness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompatMode {
    /// Every listed vertex counts, so a foreign vertex breaks a run.
    AllVertices,
    /// Vertices that are not leaves of the tree are skipped first.
    RealSubsequence,
}

/// True iff no two independent edges between consecutive levels swap
/// order. Edges sharing an endpoint never cross. `g` must be proper and
/// `o` a permutation of each level.
pub fn ordering_is_crossing_free(g: &LevelGraph, o: &LevelOrdering) -> bool {
    let pos = o.positions();
    let at = |v: usize| pos.get(g.id(v)).copied();
    let mut by_level: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.level_count()];
    for &(u, v) in g.edges() {
        let (Some(pu), Some(pv)) = (at(u), at(v)) else {
            return false;
        };
        by_level[g.level(u)].push((pu, pv));
    }
    by_level.iter().all(|edges| {
        edges.iter().enumerate().all(|(i, &(a1, b1))| {
            edges[i + 1..]
                .iter()
                .all(|&(a2, b2)| a1 == a2 || b1 == b2 || (a1 < a2) == (b1 < b2))
        })
    })
}

/// True iff the leaves below every internal node of `tree` are consecutive
/// in `order` (after projection, in [`CompatMode::RealSubsequence`]).
pub fn ordering_is_tree_compatible(tree: &TreeNode, order: &[String], mode: CompatMode) -> bool {
    let leaves = tree.leaves();
    let seq: Vec<&str> = match mode {
        CompatMode::AllVertices => order.iter().map(String::as_str).collect(),
        CompatMode::RealSubsequence => order
            .iter()
            .map(String::as_str)
            .filter(|v| leaves.contains(v))
            .collect(),
    };
    let pos: HashMap<&str, usize> = seq.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    tree.internal_leaf_sets()
        .iter()
        .all(|(_, set)| is_consecutive(set, &pos))
}

/// True iff `members` occupy a contiguous block of the `order` restricted
/// to vertices accepted by `real`.
pub fn cluster_consecutive(members: &[&str], order: &[String], real: impl Fn(&str) -> bool) -> bool {
    let pos: HashMap<&str, usize> = order
        .iter()
        .map(String::as_str)
        .filter(|v| real(v))
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    is_consecutive(members, &pos)
}

fn is_consecutive(set: &[&str], pos: &HashMap<&str, usize>) -> bool {
    if set.is_empty() {
        return true;
    }
    let mut lo = usize::MAX;
    let mut hi = 0;
    for v in set {
        let Some(&p) = pos.get(v) else { return false };
        lo = lo.min(p);
        hi = hi.max(p);
    }
    hi - lo + 1 == set.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn matching() -> LevelGraph {
        LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            [("a1", "b1"), ("a2", "b2")],
        )
        .unwrap()
    }

    #[test]
    fn aligned_matching_is_crossing_free() {
        let o = LevelOrdering::new(vec![ids(&["a1", "a2"]), ids(&["b1", "b2"])]);
        assert!(ordering_is_crossing_free(&matching(), &o));
    }

    #[test]
    fn one_reversed_level_crosses() {
        let o = LevelOrdering::new(vec![ids(&["a1", "a2"]), ids(&["b2", "b1"])]);
        assert!(!ordering_is_crossing_free(&matching(), &o));
    }

    #[test]
    fn k22_crosses_under_every_order_pair() {
        let g = LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")],
        )
        .unwrap();
        let mut free = 0;
        for top in [["a1", "a2"], ["a2", "a1"]] {
            for bottom in [["b1", "b2"], ["b2", "b1"]] {
                let o = LevelOrdering::new(vec![ids(&top), ids(&bottom)]);
                free += ordering_is_crossing_free(&g, &o) as usize;
            }
        }
        assert_eq!(free, 0);
    }

    #[test]
    fn shared_endpoints_do_not_cross() {
        let g = LevelGraph::new(
            [("a", 0), ("b1", 1), ("b2", 1)],
            [("a", "b1"), ("a", "b2")],
        )
        .unwrap();
        let o = LevelOrdering::new(vec![ids(&["a"]), ids(&["b2", "b1"])]);
        assert!(ordering_is_crossing_free(&g, &o));
    }

    fn small_tree() -> TreeNode {
        TreeNode::node(
            "r",
            vec![
                TreeNode::node("x", vec![TreeNode::leaf("a1"), TreeNode::leaf("a2")]),
                TreeNode::leaf("a3"),
            ],
        )
    }

    #[test]
    fn star_accepts_every_order() {
        let star = TreeNode::node(
            "r",
            vec![TreeNode::leaf("a"), TreeNode::leaf("b"), TreeNode::leaf("c")],
        );
        for o in [["a", "b", "c"], ["c", "a", "b"], ["b", "c", "a"]] {
            assert!(ordering_is_tree_compatible(&star, &ids(&o), CompatMode::AllVertices));
        }
    }

    #[test]
    fn split_pair_is_incompatible() {
        assert!(!ordering_is_tree_compatible(
            &small_tree(),
            &ids(&["a1", "a3", "a2"]),
            CompatMode::AllVertices
        ));
    }

    #[test]
    fn dummies_are_skipped_in_real_mode() {
        let order = ids(&["a1", "d", "a2", "a3"]);
        assert!(ordering_is_tree_compatible(&small_tree(), &order, CompatMode::RealSubsequence));
        assert!(!ordering_is_tree_compatible(&small_tree(), &order, CompatMode::AllVertices));
    }
}
