//! Unpruned product enumeration, kept separate from the search engine so
//! the two can be compared. Orderings are visited in the same
//! lexicographic order, so both return the same first witness.

use std::collections::HashSet;

use super::betweenness::next_permutation;
use super::{
    cluster_consecutive, ordering_is_crossing_free, ordering_is_tree_compatible, Budget,
    CompatMode, LevelOrdering,
};
use crate::error::{Error, Result};
use crate::model::{subdivide_to_proper, ClInstance, LevelGraph, TLevelInstance};

fn enumerate(
    h: &LevelGraph,
    cap: u64,
    mut accept: impl FnMut(&LevelOrdering) -> bool,
) -> Result<Option<LevelOrdering>> {
    let mut levels = h.level_sets();
    let mut product: u64 = 1;
    for l in &levels {
        let f = (1..=l.len() as u64).try_fold(1u64, |a, x| a.checked_mul(x));
        product = f.and_then(|f| product.checked_mul(f)).unwrap_or(u64::MAX);
    }
    if product > cap {
        return Err(Error::Budget {
            what: "naive permutation product",
            cap,
        });
    }
    loop {
        let o = LevelOrdering::from_indices(h, &levels);
        if accept(&o) {
            return Ok(Some(o));
        }
        // odometer: last level varies fastest
        let mut l = levels.len();
        loop {
            if l == 0 {
                return Ok(None);
            }
            l -= 1;
            if next_permutation(&mut levels[l]) {
                break;
            }
            levels[l].sort_unstable();
        }
    }
}

/// T-level planarity by testing every ordering of the subdivided graph.
pub fn solve_tlp_naive(t: &TLevelInstance, budget: &Budget) -> Result<Option<LevelOrdering>> {
    let (h, _) = subdivide_to_proper(t.graph());
    enumerate(&h, budget.max_search_nodes, |o| {
        ordering_is_crossing_free(&h, o)
            && t.trees()
                .iter()
                .zip(&o.orderings)
                .all(|(tree, ord)| ordering_is_tree_compatible(tree, ord, CompatMode::RealSubsequence))
    })
}

/// Crossing-free orderings with every cluster consecutive per level, by
/// testing every ordering.
pub fn check_cl_naive(c: &ClInstance, budget: &Budget) -> Result<Option<LevelOrdering>> {
    let g = c.graph();
    let (h, map) = subdivide_to_proper(g);
    let real: HashSet<&str> = (0..h.vertex_count())
        .filter(|&v| !map.is_dummy(v))
        .map(|v| h.id(v))
        .collect();
    let per_level: Vec<Vec<Vec<&str>>> = c
        .clusters()
        .iter()
        .map(|cl| {
            let mut by = vec![Vec::new(); g.level_count()];
            for &v in &cl.members {
                by[g.level(v)].push(g.id(v));
            }
            by
        })
        .collect();
    enumerate(&h, budget.max_search_nodes, |o| {
        ordering_is_crossing_free(&h, o)
            && per_level.iter().all(|by| {
                by.iter()
                    .zip(&o.orderings)
                    .all(|(m, ord)| cluster_consecutive(m, ord, |v| real.contains(v)))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TreeNode;

    #[test]
    fn odometer_visits_every_combination() {
        let g = LevelGraph::new(
            [("a", 0), ("b", 0), ("c", 1), ("d", 1), ("e", 1)],
            std::iter::empty::<(&str, &str)>(),
        )
        .unwrap();
        let mut seen = 0;
        let r = enumerate(&g, 100, |_| {
            seen += 1;
            false
        })
        .unwrap();
        assert_eq!(r, None);
        assert_eq!(seen, 12);
    }

    #[test]
    fn product_over_cap_is_rejected() {
        let g = LevelGraph::new(
            [("a", 0), ("b", 0), ("c", 0), ("d", 0)],
            std::iter::empty::<(&str, &str)>(),
        )
        .unwrap();
        assert!(enumerate(&g, 23, |_| true).is_err());
    }

    #[test]
    fn naive_finds_the_ordered_matching() {
        let g = LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            [("a1", "b2"), ("a2", "b1")],
        )
        .unwrap();
        let star = |id: &str, a: &str, b: &str| {
            TreeNode::node(id, vec![TreeNode::leaf(a), TreeNode::leaf(b)])
        };
        let t = TLevelInstance::new(g, [(0, star("r0", "a1", "a2")), (1, star("r1", "b1", "b2"))])
            .unwrap();
        let o = solve_tlp_naive(&t, &Budget::default()).unwrap().unwrap();
        assert_eq!(o.orderings, vec![vec!["a1", "a2"], vec!["b2", "b1"]]);
    }
}
