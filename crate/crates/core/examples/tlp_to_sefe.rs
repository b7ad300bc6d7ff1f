//! Reduce T-level planarity to simultaneous embedding, decide it by
//! enumerating rotation systems, and move witnesses in both directions.
//!
//! ```bash
//! cargo run --example tlp_to_sefe
//! ```

use levelplan::drawing::build_sefe_certificate;
use levelplan::model::{LevelGraph, TLevelInstance, TreeNode};
use levelplan::oracles::{
    decode_sefe_to_orderings, rotation_product, solve_sefe_exhaustive, solve_tlp_exhaustive, witness_is_valid,
    Budget,
};
use levelplan::reductions::{check_sefe_reduction, reduce_tlp_to_sefe};

fn instance(edges: &[(&str, &str)]) -> levelplan::Result<TLevelInstance> {
    let g = LevelGraph::new(
        [("a1", 0), ("a2", 0), ("a3", 0), ("b1", 1), ("b2", 1)],
        edges.iter().copied(),
    )?;
    let t0 = TreeNode::node(
        "r0",
        vec![TreeNode::node("n0", vec![TreeNode::leaf("a1"), TreeNode::leaf("a3")]), TreeNode::leaf("a2")],
    );
    let t1 = TreeNode::node("r1", vec![TreeNode::leaf("b1"), TreeNode::leaf("b2")]);
    TLevelInstance::new(g, [(0, t0), (1, t1)])
}

fn main() -> levelplan::Result<()> {
    let budget = Budget::default();
    let cases = [
        ("fan", instance(&[("a1", "b1"), ("a2", "b1"), ("a3", "b2")])?),
        // a2 must sit outside the a1/a3 block, but both of its neighbours are
        // pinned by the block
        ("blocked", instance(&[("a1", "b1"), ("a3", "b2"), ("a2", "b1"), ("a2", "b2")])?),
    ];

    for (name, t) in &cases {
        let (s, prov) = reduce_tlp_to_sefe(t)?;
        let r = check_sefe_reduction(t, &s);
        println!(
            "{name}: {} vertices, {} + {} edges, rotation product {}, 2-connected {}/{}, common connected {}",
            r.vertices,
            r.edges_g1,
            r.edges_g2,
            rotation_product(&s),
            r.g1_biconnected,
            r.g2_biconnected,
            r.common_connected
        );

        let direct = solve_tlp_exhaustive(t, &budget)?;
        let embedded = solve_sefe_exhaustive(&s, &budget)?;
        println!("  T-level planar: {}, embeddable: {}", direct.is_some(), embedded.is_some());

        if let Some(o) = &direct {
            // ordering -> rotation systems -> ordering
            let w = build_sefe_certificate(t, &s, o)?;
            assert!(witness_is_valid(&s, &w));
            let back = decode_sefe_to_orderings(&s, &prov, &w)?;
            println!("  certificate decodes to {:?}", back.orderings);
            assert_eq!(&back, o);
        }
        if let Some(w) = &embedded {
            let o = decode_sefe_to_orderings(&s, &prov, w)?;
            println!("  oracle witness decodes to {:?}", o.orderings);
        }
    }
    Ok(())
}
