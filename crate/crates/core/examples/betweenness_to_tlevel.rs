//! Build the T-level gadget for a small Betweenness instance and decide it
//! both ways.
//!
//! ```bash
//! cargo run --example betweenness_to_tlevel
//! ```

use levelplan::oracles::{solve_betweenness, solve_tlp_exhaustive, BetweennessInstance, Budget};
use levelplan::reductions::reduce_betweenness_to_tlevel;

fn main() -> levelplan::Result<()> {
    let budget = Budget::default();
    let cases = [
        ("chain", BetweennessInstance::new(4, vec![[1, 2, 3], [2, 3, 4]])?),
        ("contradiction", BetweennessInstance::new(3, vec![[1, 2, 3], [2, 1, 3]])?),
    ];

    for (name, b) in &cases {
        let order = solve_betweenness(b, budget.max_betweenness_elements)?;
        println!("{name}: {} elements, {} triples", b.elements, b.triples.len());
        match &order {
            Some(o) => println!("  betweenness order: {o:?}"),
            None => println!("  no betweenness order"),
        }

        for drop in [false, true] {
            let (t, prov) = reduce_betweenness_to_tlevel(b, drop)?;
            let g = t.graph();
            let witness = solve_tlp_exhaustive(&t, &budget)?;
            println!(
                "  gadget{}: {} levels, {} vertices, {} edges, {} tree nodes -> {}",
                if drop { " (outer levels dropped)" } else { "" },
                g.level_count(),
                g.vertex_count(),
                g.edges().len(),
                t.tree_node_count(),
                if witness.is_some() { "T-level planar" } else { "not T-level planar" }
            );
            assert_eq!(witness.is_some(), order.is_some());

            if let Some(w) = witness {
                let elements: Vec<(&str, usize)> = prov
                    .with_role("v_j")
                    .filter_map(|(id, r)| Some((id, r.source.element?)))
                    .collect();
                if let Some(row) = w.orderings.get(1).filter(|_| !elements.is_empty()) {
                    let order: Vec<usize> = row
                        .iter()
                        .filter_map(|v| elements.iter().find(|(id, _)| id == v).map(|&(_, j)| j))
                        .collect();
                    println!("  element order read off level 1: {order:?}");
                }
            }
        }
    }
    Ok(())
}
