//! Run every agreement suite for a few trials and replay a bundle.
//!
//! ```bash
//! cargo run --example crosscheck -- 25
//! ```

use std::env;

use levelplan::crosscheck::{replay, run_crosscheck, trial_instance, write_bundle, CrosscheckConfig, Suite};
use levelplan::oracles::Budget;

fn main() -> levelplan::Result<()> {
    let trials = env::args().nth(1).and_then(|n| n.parse().ok()).unwrap_or(10);
    let bundles = std::env::temp_dir().join("levelplan-bundles");

    for suite in Suite::ALL {
        let cfg = CrosscheckConfig {
            suite,
            trials,
            seed: 1,
            budget: Budget::default(),
            timing: true,
            bundle_dir: Some(bundles.clone()),
        };
        let r = run_crosscheck(&cfg)?;
        let ms: u64 = r.results.iter().filter_map(|t| t.millis).sum();
        println!(
            "{suite:>8}: {} agree, {} disagree, {} over budget, {ms} ms",
            r.summary.agree, r.summary.disagree, r.summary.budget
        );
        for name in &r.summary.bundles {
            println!("          bundle {}", bundles.join(name).display());
        }
    }

    // A bundle with doctored verdicts: the replay recomputes them.
    let cfg = CrosscheckConfig {
        suite: Suite::Thm1,
        trials: 1,
        seed: 5,
        budget: Budget::default(),
        timing: false,
        bundle_dir: None,
    };
    let mut trial = run_crosscheck(&cfg)?.results.remove(0);
    let p = trial_instance(Suite::Thm1, trial.seed)?;
    trial.verdicts.insert("tlevel".into(), "no".into());
    let dir = bundles.join("doctored");
    write_bundle(&dir, Suite::Thm1, &trial, &p)?;
    let back = replay(&dir, &Budget::default())?;
    println!("replay of {}: recorded {:?}", dir.display(), back.recorded);
    println!("                replayed {:?} (reproduced: {})", back.replayed, back.reproduced());
    Ok(())
}
