//! Randomized agreement checks between the exhaustive oracles and the
//! reductions, with replayable counterexample bundles.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::drawing::{build_cluster_regions, draw_from_betweenness_solution, validate_cl_drawing};
use crate::error::{Error, Result};
use crate::gen::{generate, Bias, GeneratorConfig, Generated, Kind};
use crate::io::{canonical_json, parse_betweenness, parse_document, serialize_betweenness, serialize_document, Document, Instance};
use crate::oracles::{
    check_cl_necessary, solve_betweenness, solve_cl_levelconnected, solve_sefe_exhaustive, solve_tlp_exhaustive,
    Budget,
};
use crate::reductions::{
    build_cl_hierarchy, clusters_to_trees, decide_proper_cl, make_level_connected, reduce_betweenness_to_tlevel,
    reduce_tlp_to_sefe, Backend,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Thm1,
    Thm2,
    Lemma1,
    Lemma34,
    Pipeline,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Thm1, Suite::Thm2, Suite::Lemma1, Suite::Lemma34, Suite::Pipeline];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma34 => "lemma34",
            Suite::Pipeline => "pipeline",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct CrosscheckConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub budget: Budget,
    /// Record wall-clock time per trial (makes reports differ run to run).
    pub timing: bool,
    /// Where counterexample bundles go.
    pub bundle_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub digest: String,
    pub verdicts: BTreeMap<String, String>,
    pub agree: bool,
    pub budget_exceeded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub agree: usize,
    pub disagree: usize,
    pub budget: usize,
    pub bundles: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub suite: Suite,
    pub seed: u64,
    pub results: Vec<TrialResult>,
    pub summary: Summary,
}

impl CrosscheckReport {
    pub fn to_json(&self) -> Result<String> {
        canonical_json(self)
    }
}

fn payload_text(p: &Generated) -> Result<String> {
    match p {
        Generated::Betweenness(b) => serialize_betweenness(b),
        Generated::Instance(i) => serialize_document(&Document::new(i.clone())),
    }
}

/// First 16 hex digits of the SHA-256 of the canonical file text.
pub fn digest(p: &Generated) -> Result<String> {
    let h = Sha256::digest(payload_text(p)?.as_bytes());
    Ok(hex::encode(h)[..16].to_string())
}

fn trial_config(suite: Suite, seed: u64) -> GeneratorConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let base = GeneratorConfig {
        seed,
        ..GeneratorConfig::default()
    };
    match suite {
        Suite::Thm1 | Suite::Thm2 => GeneratorConfig {
            kind: Kind::Betweenness,
            n: rng.gen_range(3..=4),
            m: rng.gen_range(1..=2),
            bias: Bias::None,
            ..base
        },
        Suite::Lemma1 => GeneratorConfig {
            kind: Kind::ProperTLevel,
            k: 2,
            width: 3,
            edge_prob: 0.5,
            ..base
        },
        Suite::Lemma34 | Suite::Pipeline => GeneratorConfig {
            kind: Kind::LevelConnectedCl,
            k: rng.gen_range(2..=3),
            width: 3,
            depth: 2,
            edge_prob: 0.35,
            ..base
        },
    }
}

fn verdict<T>(r: Result<Option<T>>) -> String {
    match r {
        Ok(Some(_)) => "yes".into(),
        Ok(None) => "no".into(),
        Err(Error::Budget { .. }) => "budget".into(),
        Err(e) => format!("error: {e}"),
    }
}

fn yes_no(r: Result<bool>) -> String {
    verdict(r.map(|b| b.then_some(())))
}

/// Runs one suite's checks on one instance. Verdicts are `yes`, `no`,
/// `budget` or `error: …`; the trial agrees when every decision verdict is
/// the same and every extra check passed.
pub fn check_instance(suite: Suite, p: &Generated, budget: &Budget) -> Result<BTreeMap<String, String>> {
    let mut v = BTreeMap::new();
    match (suite, p) {
        (Suite::Thm1, Generated::Betweenness(b)) => {
            v.insert("betweenness".into(), verdict(solve_betweenness(b, budget.max_betweenness_elements)));
            for (name, drop) in [("tlevel", false), ("tlevel_drop_outer", true)] {
                let r = reduce_betweenness_to_tlevel(b, drop).and_then(|(t, _)| solve_tlp_exhaustive(&t, budget));
                v.insert(name.into(), verdict(r));
            }
        }
        (Suite::Thm2, Generated::Betweenness(b)) => {
            let sol = solve_betweenness(b, budget.max_betweenness_elements);
            let (c, _) = build_cl_hierarchy(b)?;
            v.insert("cl_necessary".into(), verdict(check_cl_necessary(&c, budget)));
            if let Ok(Some(order)) = &sol {
                let clean = draw_from_betweenness_solution(b, order)
                    .and_then(|d| build_cluster_regions(&d, &c))
                    .map(|d| validate_cl_drawing(&d, &c).is_empty());
                v.insert("check:drawing".into(), match clean {
                    Ok(true) => "pass".into(),
                    Ok(false) => "fail".into(),
                    Err(e) => format!("error: {e}"),
                });
            }
            v.insert("betweenness".into(), verdict(sol));
        }
        (Suite::Lemma1, Generated::Instance(Instance::TLevel(t))) => {
            v.insert("tlevel".into(), verdict(solve_tlp_exhaustive(t, budget)));
            let r = reduce_tlp_to_sefe(t).and_then(|(s, _)| solve_sefe_exhaustive(&s, budget));
            v.insert("sefe".into(), verdict(r));
        }
        (Suite::Lemma34, Generated::Instance(Instance::Cl(c))) => {
            v.insert("cl".into(), verdict(solve_cl_levelconnected(c, budget)));
            let r = make_level_connected(c)
                .and_then(|(lc, _)| clusters_to_trees(&lc))
                .and_then(|t| solve_tlp_exhaustive(&t, budget));
            v.insert("tlevel".into(), verdict(r));
        }
        (Suite::Pipeline, Generated::Instance(Instance::Cl(c))) => {
            v.insert("cl".into(), verdict(solve_cl_levelconnected(c, budget)));
            v.insert("pipeline".into(), yes_no(decide_proper_cl(c, Backend::Direct, budget).map(|d| d.planar)));
        }
        _ => return Err(Error::Parse(format!("suite {suite} does not take this kind of instance"))),
    }
    Ok(v)
}

fn assess(v: &BTreeMap<String, String>) -> (bool, bool) {
    let budget = v.values().any(|x| x == "budget");
    let decisions: Vec<&String> = v.iter().filter(|(k, _)| !k.starts_with("check:")).map(|(_, x)| x).collect();
    let same = decisions.windows(2).all(|w| w[0] == w[1]) && decisions.iter().all(|x| *x == "yes" || *x == "no");
    let checks = v.iter().filter(|(k, _)| k.starts_with("check:")).all(|(_, x)| x == "pass");
    (same && checks, budget)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleMeta {
    suite: Suite,
    trial: usize,
    seed: u64,
    digest: String,
    verdicts: BTreeMap<String, String>,
}

const BUNDLE_META: &str = "bundle.json";
const BUNDLE_INSTANCE: &str = "instance.json";

/// Writes `instance.json` and `bundle.json` (suite, seed, recorded
/// verdicts) into `dir`.
pub fn write_bundle(dir: &Path, suite: Suite, r: &TrialResult, p: &Generated) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(BUNDLE_INSTANCE), payload_text(p)?)?;
    let meta = BundleMeta {
        suite,
        trial: r.trial,
        seed: r.seed,
        digest: r.digest.clone(),
        verdicts: r.verdicts.clone(),
    };
    fs::write(dir.join(BUNDLE_META), canonical_json(&meta)?)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub suite: Suite,
    pub recorded: BTreeMap<String, String>,
    pub replayed: BTreeMap<String, String>,
}

impl Replay {
    /// The recorded verdicts came back unchanged.
    pub fn reproduced(&self) -> bool {
        self.recorded == self.replayed
    }

    pub fn agree(&self) -> bool {
        assess(&self.replayed).0
    }
}

pub fn replay(dir: &Path, budget: &Budget) -> Result<Replay> {
    let meta: BundleMeta = serde_json::from_str(&fs::read_to_string(dir.join(BUNDLE_META))?)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let text = fs::read_to_string(dir.join(BUNDLE_INSTANCE))?;
    let p = match meta.suite {
        Suite::Thm1 | Suite::Thm2 => Generated::Betweenness(parse_betweenness(&text)?),
        _ => Generated::Instance(parse_document(&text)?.instance),
    };
    Ok(Replay {
        suite: meta.suite,
        recorded: meta.verdicts,
        replayed: check_instance(meta.suite, &p, budget)?,
    })
}

/// The instance a suite generates for a trial seed.
pub fn trial_instance(suite: Suite, seed: u64) -> Result<Generated> {
    generate(&trial_config(suite, seed))
}

fn run_trial(cfg: &CrosscheckConfig, trial: usize) -> Result<(TrialResult, Generated)> {
    let seed = cfg.seed.wrapping_add(trial as u64);
    let start = Instant::now();
    let p = trial_instance(cfg.suite, seed)?;
    let verdicts = check_instance(cfg.suite, &p, &cfg.budget)?;
    let (agree, budget_exceeded) = assess(&verdicts);
    let r = TrialResult {
        trial,
        seed,
        digest: digest(&p)?,
        verdicts,
        agree,
        budget_exceeded,
        millis: cfg.timing.then(|| start.elapsed().as_millis() as u64),
    };
    Ok((r, p))
}

/// Runs `trials` seeded trials on a small worker pool. Trial `i` uses seed
/// `seed + i`; results come back in trial order whatever the scheduling.
pub fn run_crosscheck(cfg: &CrosscheckConfig) -> Result<CrosscheckReport> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cfg.trials.max(1));
    let mut done: Vec<(usize, Result<(TrialResult, Generated)>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..cfg.trials)
                        .step_by(workers)
                        .map(|t| (t, run_trial(cfg, t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("crosscheck worker panicked")).collect()
    });
    done.sort_by_key(|(t, _)| *t);

    let mut results = Vec::with_capacity(cfg.trials);
    let mut summary = Summary {
        trials: cfg.trials,
        ..Summary::default()
    };
    for (trial, r) in done {
        let (r, p) = r?;
        if r.budget_exceeded {
            summary.budget += 1;
        } else if r.agree {
            summary.agree += 1;
        } else {
            summary.disagree += 1;
            if let Some(root) = &cfg.bundle_dir {
                let name = format!("{}-{trial}", cfg.suite);
                write_bundle(&root.join(&name), cfg.suite, &r, &p)?;
                summary.bundles.push(name);
            }
        }
        results.push(r);
    }
    Ok(CrosscheckReport {
        suite: cfg.suite,
        seed: cfg.seed,
        results,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: Suite, trials: usize) -> CrosscheckConfig {
        CrosscheckConfig {
            suite,
            trials,
            seed: 11,
            budget: Budget::default(),
            timing: false,
            bundle_dir: None,
        }
    }

    #[test]
    fn small_suites_agree() {
        for suite in [Suite::Thm1, Suite::Thm2, Suite::Lemma34, Suite::Pipeline] {
            let r = run_crosscheck(&cfg(suite, 12)).unwrap();
            assert_eq!(r.summary.disagree, 0, "{suite}: {:?}", r.results);
            assert_eq!(r.summary.agree + r.summary.budget, 12);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_crosscheck(&cfg(Suite::Thm1, 5)).unwrap().to_json().unwrap();
        let b = run_crosscheck(&cfg(Suite::Thm1, 5)).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("millis"));
    }

    #[test]
    fn bundles_replay() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_crosscheck(&cfg(Suite::Thm1, 1)).unwrap();
        let p = generate(&trial_config(Suite::Thm1, 11)).unwrap();
        let mut forged = r.results[0].clone();
        forged.verdicts.insert("tlevel".into(), "forged".into());
        write_bundle(dir.path(), Suite::Thm1, &forged, &p).unwrap();
        let back = replay(dir.path(), &Budget::default()).unwrap();
        assert!(!back.reproduced());
        assert!(back.agree());
        write_bundle(dir.path(), Suite::Thm1, &r.results[0], &p).unwrap();
        assert!(replay(dir.path(), &Budget::default()).unwrap().reproduced());
    }
}
