//! The exhaustive deciders on hand-sized inputs, next to the naive ones
//! they are tested against.
//!
//! ```bash
//! cargo run --example oracles_tour
//! ```

use levelplan::model::{ClInstance, LevelGraph, SefeInstance, TLevelInstance, TreeNode};
use levelplan::oracles::naive::{check_cl_naive, solve_tlp_naive};
use levelplan::oracles::{
    check_cl_necessary, solve_betweenness, solve_cl_levelconnected, solve_sefe_exhaustive, solve_tlp_exhaustive,
    trace_faces, BetweennessInstance, Budget, RotationSystem,
};

fn leaves(id: &str, ls: &[&str]) -> TreeNode {
    TreeNode::node(id, ls.iter().map(|l| TreeNode::leaf(*l)).collect())
}

fn main() -> levelplan::Result<()> {
    let budget = Budget::default();

    // Betweenness: 2 between 1 and 3, 3 between 2 and 4
    let b = BetweennessInstance::new(4, vec![[1, 2, 3], [2, 3, 4]])?;
    println!("betweenness: {:?}", solve_betweenness(&b, 9)?);

    // K4 drawn two ways: triangle with a centre is planar, a rotation that
    // wraps an edge around is not
    let ends = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for rot in [
        vec![vec![0, 1, 2], vec![0, 4, 3], vec![1, 3, 5], vec![2, 5, 4]],
        vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 5, 4]],
    ] {
        let f = trace_faces(&RotationSystem::new(rot), &ends)?;
        println!(
            "K4 rotation: V={} E={} F={} planar={}",
            f.vertices,
            f.edges,
            f.faces.len(),
            f.is_planar()
        );
    }

    // T-level: a second tree on level 0 keeps a and c together, which
    // pushes b to the outside
    let g = LevelGraph::new(
        [("a", 0), ("b", 0), ("c", 0), ("x", 1), ("y", 1), ("z", 1)],
        [("a", "x"), ("b", "y"), ("c", "z"), ("b", "x")],
    )?;
    let level1 = leaves("r1", &["x", "y", "z"]);
    for tree in [
        leaves("r0", &["a", "b", "c"]),
        TreeNode::node("r0", vec![leaves("n", &["a", "c"]), TreeNode::leaf("b")]),
    ] {
        let t = TLevelInstance::new(g.clone(), [(0, tree), (1, level1.clone())])?;
        let fast = solve_tlp_exhaustive(&t, &budget)?;
        let slow = solve_tlp_naive(&t, &budget)?;
        assert_eq!(fast.is_some(), slow.is_some());
        println!("T-level: {:?}", fast.map(|o| o.orderings));
    }

    // cl: cluster {a, z} spans both levels with an internal edge
    let g = LevelGraph::new(
        [("a", 0), ("b", 0), ("y", 1), ("z", 1)],
        [("a", "z"), ("b", "y"), ("a", "y")],
    )?;
    let root = TreeNode::node("root", vec![leaves("c1", &["a", "z"]), TreeNode::leaf("b"), TreeNode::leaf("y")]);
    let c = ClInstance::new(g, root)?;
    let exact = solve_cl_levelconnected(&c, &budget)?;
    let necessary = check_cl_necessary(&c, &budget)?;
    let naive = check_cl_naive(&c, &budget)?;
    println!(
        "cl: exact {}, necessary {}, naive {}",
        exact.is_some(),
        necessary.is_some(),
        naive.is_some()
    );

    // SEFE: a 4-cycle in common; each graph adds one chord, and the two
    // chords go on opposite sides of the cycle
    let cycle = [("p", "q"), ("q", "r"), ("r", "s"), ("s", "p")];
    let mut e1 = cycle.to_vec();
    e1.push(("p", "r"));
    let mut e2 = cycle.to_vec();
    e2.push(("q", "s"));
    let s = SefeInstance::new(["p", "q", "r", "s"], e1, e2)?;
    let w = solve_sefe_exhaustive(&s, &budget)?;
    println!("SEFE with one chord per graph: {}", if w.is_some() { "yes" } else { "no" });
    Ok(())
}
