//! Decide cl-planarity of generated proper instances: level connection,
//! clusters to trees, then either backend.
//!
//! ```bash
//! cargo run --example proper_cl_pipeline
//! ```

use levelplan::gen::{generate, GeneratorConfig, Generated, Kind};
use levelplan::io::Instance;
use levelplan::model::is_level_connected;
use levelplan::oracles::{check_cl_necessary, Budget};
use levelplan::reductions::{connector_additions, decide_proper_cl, make_level_connected, Backend};

fn main() -> levelplan::Result<()> {
    let budget = Budget::default();
    for seed in 0..6 {
        let cfg = GeneratorConfig {
            seed,
            kind: Kind::ProperCl,
            k: 2,
            width: 3,
            depth: 2,
            edge_prob: 0.5,
            ..GeneratorConfig::default()
        };
        let Generated::Instance(Instance::Cl(c)) = generate(&cfg)? else {
            unreachable!()
        };
        let gaps = is_level_connected(&c)?;
        let (lc, prov) = make_level_connected(&c)?;
        let most = connector_additions(&prov).values().copied().max().unwrap_or(0);

        let necessary = check_cl_necessary(&c, &budget)?.is_some();
        let direct = decide_proper_cl(&c, Backend::Direct, &budget)?;
        let sefe = decide_proper_cl(&c, Backend::Sefe, &budget);

        println!(
            "seed {seed}: {} clusters, level-connected {}, {} -> {} levels, at most {most} connectors per cluster and level",
            c.clusters().len(),
            gaps.is_connected(),
            c.graph().level_count(),
            lc.graph().level_count(),
        );
        println!(
            "  necessary check {}, direct {}, sefe {}",
            necessary,
            direct.planar,
            match &sefe {
                Ok(d) => d.planar.to_string(),
                Err(e) => format!("skipped ({e})"),
            }
        );
        if let Some(o) = &direct.certificate {
            println!("  certificate: {:?}", o.orderings);
        }
        // no ordering at all means no drawing either
        assert!(necessary || !direct.planar);
    }
    Ok(())
}
