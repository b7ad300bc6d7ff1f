//! Turn a Betweenness solution into a cl-planar drawing with exact
//! coordinates and convex cluster regions, check it, and write the SVG.
//!
//! ```bash
//! cargo run --example cl_hardness_drawing -- /tmp/gadget.svg
//! ```

use std::env;
use std::fs;

use levelplan::drawing::{build_cluster_regions, draw_from_betweenness_solution, emit_svg, validate_cl_drawing};
use levelplan::io::drawing_to_sidecar;
use levelplan::oracles::{check_cl_necessary, solve_betweenness, BetweennessInstance, Budget};
use levelplan::reductions::build_cl_hierarchy;

fn main() -> levelplan::Result<()> {
    let out = env::args()
        .nth(1)
        .unwrap_or_else(|| env::temp_dir().join("gadget.svg").display().to_string());
    let b = BetweennessInstance::new(4, vec![[1, 2, 3], [4, 1, 3]])?;

    let order = solve_betweenness(&b, 9)?.expect("this instance is satisfiable");
    println!("order: {order:?}");

    let (c, _) = build_cl_hierarchy(&b)?;
    println!(
        "hierarchy: {} vertices on {} levels, {} clusters, depth {}",
        c.graph().vertex_count(),
        c.graph().level_count(),
        c.clusters().len(),
        c.max_depth()
    );
    // the combinatorial side agrees before any geometry is built
    assert!(check_cl_necessary(&c, &Budget::default())?.is_some());

    let d = build_cluster_regions(&draw_from_betweenness_solution(&b, &order)?, &c)?;
    let report = validate_cl_drawing(&d, &c);
    if report.is_empty() {
        println!("drawing passes every condition");
    }
    for v in &report {
        println!("violation: {v}");
    }

    fs::write(&out, emit_svg(&d))?;
    let sidecar = format!("{out}.json");
    fs::write(&sidecar, drawing_to_sidecar(&d)?)?;
    println!("wrote {out} and {sidecar}");
    Ok(())
}
