//! Seeded random instances. The same config always yields the same
//! instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::Instance;
use crate::model::{is_level_connected, ClInstance, LevelGraph, TLevelInstance, TreeNode};
use crate::oracles::BetweennessInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Betweenness,
    ProperTLevel,
    ProperCl,
    LevelConnectedCl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bias {
    None,
    ForceSat,
    ForceUnsat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub kind: Kind,
    /// Betweenness: elements and triples.
    pub n: usize,
    pub m: usize,
    /// Level instances: level count and the largest level size.
    pub k: usize,
    pub width: usize,
    /// Chance of each possible edge between consecutive levels.
    pub edge_prob: f64,
    /// Cluster instances: cap on hierarchy depth below the root.
    pub depth: usize,
    pub bias: Bias,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            kind: Kind::ProperTLevel,
            n: 3,
            m: 1,
            k: 3,
            width: 3,
            edge_prob: 0.4,
            depth: 2,
            bias: Bias::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Betweenness(BetweennessInstance),
    Instance(Instance),
}

pub fn generate(cfg: &GeneratorConfig) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.kind {
        Kind::Betweenness => betweenness(cfg, &mut rng).map(Generated::Betweenness),
        Kind::ProperTLevel => tlevel(cfg, &mut rng).map(|t| Generated::Instance(Instance::TLevel(t))),
        Kind::ProperCl => cl(cfg, &mut rng, false).map(|c| Generated::Instance(Instance::Cl(c))),
        Kind::LevelConnectedCl => cl(cfg, &mut rng, true).map(|c| Generated::Instance(Instance::Cl(c))),
    }
}

fn betweenness(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<BetweennessInstance> {
    let n = cfg.n;
    if n < 3 && cfg.m > 0 {
        return Err(Error::TooLarge(format!("{} triples need at least 3 elements, got {n}", cfg.m)));
    }
    let mut triples = Vec::with_capacity(cfg.m);
    match cfg.bias {
        Bias::None => {
            let elems: Vec<usize> = (1..=n).collect();
            for _ in 0..cfg.m {
                let t: Vec<usize> = elems.choose_multiple(rng, 3).copied().collect();
                triples.push([t[0], t[1], t[2]]);
            }
        }
        Bias::ForceSat => {
            // triples read off a hidden order
            let mut order: Vec<usize> = (1..=n).collect();
            order.shuffle(rng);
            for _ in 0..cfg.m {
                let mut pos: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, 3).copied().collect();
                pos.sort_unstable();
                if rng.gen_bool(0.5) {
                    pos.reverse();
                }
                triples.push([order[pos[0]], order[pos[1]], order[pos[2]]]);
            }
        }
        Bias::ForceUnsat => {
            if cfg.m < 2 {
                return Err(Error::TooLarge("an unsatisfiable instance needs at least 2 triples".into()));
            }
            let elems: Vec<usize> = (1..=n).collect();
            let t: Vec<usize> = elems.choose_multiple(rng, 3).copied().collect();
            // b between a and c, and a between b and c: no order does both
            triples.push([t[0], t[1], t[2]]);
            triples.push([t[1], t[0], t[2]]);
            for _ in 2..cfg.m {
                let t: Vec<usize> = elems.choose_multiple(rng, 3).copied().collect();
                triples.push([t[0], t[1], t[2]]);
            }
            triples.shuffle(rng);
        }
    }
    BetweennessInstance::new(n, triples)
}

fn vid(l: usize, i: usize) -> String {
    format!("v{l}_{i}")
}

/// Level sizes and the hidden left-to-right order of every level.
fn levels(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<String>>> {
    if cfg.k == 0 || cfg.width == 0 {
        return Err(Error::TooLarge("k and width must be positive".into()));
    }
    Ok((0..cfg.k)
        .map(|l| {
            let w = rng.gen_range(1..=cfg.width);
            let mut row: Vec<String> = (0..w).map(|i| vid(l, i)).collect();
            row.shuffle(rng);
            row
        })
        .collect())
}

/// Random edges between consecutive levels; with `planar`, only edges that
/// do not cross under the hidden orders.
fn edges(cfg: &GeneratorConfig, rows: &[Vec<String>], planar: bool, rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for l in 0..rows.len().saturating_sub(1) {
        let mut here: Vec<(usize, usize)> = Vec::new();
        for i in 0..rows[l].len() {
            for j in 0..rows[l + 1].len() {
                if !rng.gen_bool(cfg.edge_prob) {
                    continue;
                }
                if planar && here.iter().any(|&(a, b)| a != i && b != j && (a < i) != (b < j)) {
                    continue;
                }
                here.push((i, j));
            }
        }
        out.extend(here.into_iter().map(|(i, j)| (rows[l][i].clone(), rows[l + 1][j].clone())));
    }
    out
}

/// A random tree over `leaves`; internal nodes cover contiguous runs of
/// the slice, so the slice order is always compatible.
fn tree(leaves: &[String], prefix: &str, counter: &mut usize, rng: &mut ChaCha8Rng) -> TreeNode {
    if leaves.len() == 1 {
        return TreeNode::leaf(leaves[0].clone());
    }
    let id = format!("{prefix}{}", *counter);
    *counter += 1;
    let parts = rng.gen_range(2..=leaves.len());
    let mut cuts: Vec<usize> = (1..leaves.len()).collect::<Vec<_>>().choose_multiple(rng, parts - 1).copied().collect();
    cuts.sort_unstable();
    let mut kids = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain([leaves.len()]) {
        kids.push(tree(&leaves[start..c], prefix, counter, rng));
        start = c;
    }
    TreeNode::node(id, kids)
}

fn tlevel(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<TLevelInstance> {
    if cfg.bias == Bias::ForceUnsat {
        return Err(Error::TooLarge("force-unsat is only available for betweenness".into()));
    }
    let planar = cfg.bias == Bias::ForceSat;
    let rows = levels(cfg, rng)?;
    let es = edges(cfg, &rows, planar, rng);
    let mut trees = Vec::new();
    for (l, row) in rows.iter().enumerate() {
        let mut order = row.clone();
        if !planar {
            order.shuffle(rng);
        }
        let mut counter = 0;
        trees.push((l as i64, tree(&order, &format!("t{l}_"), &mut counter, rng)));
    }
    let vertices = rows.iter().enumerate().flat_map(|(l, r)| r.iter().map(move |v| (v.clone(), l as i64)));
    let g = LevelGraph::new(vertices, es)?;
    TLevelInstance::new(g, trees)
}

/// A cluster over `rows`, one entry per level of its range. Each child
/// takes a run of levels and part of every row in that run.
fn cluster(rows: &[Vec<String>], depth: usize, counter: &mut usize, rng: &mut ChaCha8Rng) -> TreeNode {
    let id = format!("c{}", *counter);
    *counter += 1;
    let mut free: Vec<Vec<String>> = rows.to_vec();
    let mut kids = Vec::new();
    let tries = if depth == 0 { 0 } else { rng.gen_range(0..=2) };
    for _ in 0..tries {
        let avail: Vec<usize> = (0..free.len()).filter(|&i| !free[i].is_empty()).collect();
        let Some(&a) = avail.choose(rng) else { break };
        let mut b = a;
        while b + 1 < free.len() && !free[b + 1].is_empty() && rng.gen_bool(0.5) {
            b += 1;
        }
        let mut sub = Vec::new();
        for row in &mut free[a..=b] {
            let len = rng.gen_range(1..=row.len());
            let start = rng.gen_range(0..=row.len() - len);
            sub.push(row.drain(start..start + len).collect::<Vec<_>>());
        }
        let size: usize = sub.iter().map(Vec::len).sum();
        let total: usize = rows.iter().map(Vec::len).sum();
        if size < 2 || size == total {
            // would be contracted away; give the vertices back as leaves
            kids.extend(sub.into_iter().flatten().map(TreeNode::leaf));
            continue;
        }
        kids.push(cluster(&sub, depth - 1, counter, rng));
    }
    kids.extend(free.into_iter().flatten().map(TreeNode::leaf));
    TreeNode::node(id, kids)
}

fn cl(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng, connect: bool) -> Result<ClInstance> {
    if cfg.bias != Bias::None {
        return Err(Error::TooLarge("bias is only available for betweenness and proper-tlevel".into()));
    }
    let rows = levels(cfg, rng)?;
    let mut es = edges(cfg, &rows, false, rng);
    let mut counter = 0;
    let root = cluster(&rows, cfg.depth, &mut counter, rng);
    let vertices: Vec<(String, i64)> =
        rows.iter().enumerate().flat_map(|(l, r)| r.iter().map(move |v| (v.clone(), l as i64))).collect();
    let mut c = ClInstance::new(LevelGraph::new(vertices.clone(), es.clone())?, root.clone())?;
    if connect {
        // one extra edge per gap; a cluster built from contiguous level runs
        // has members on every level of its range
        let g = c.graph().clone();
        for cl in c.clusters() {
            let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); g.level_count()];
            for &v in &cl.members {
                by_level[g.level(v)].push(v);
            }
            for l in 0..g.level_count().saturating_sub(1) {
                let (lower, upper) = (&by_level[l], &by_level[l + 1]);
                if lower.is_empty() || upper.is_empty() {
                    continue;
                }
                let joined = es.iter().any(|(a, b)| {
                    lower.iter().any(|&x| g.id(x) == a) && upper.iter().any(|&y| g.id(y) == b)
                });
                if !joined {
                    let a = g.id(*lower.choose(rng).expect("nonempty")).to_string();
                    let b = g.id(*upper.choose(rng).expect("nonempty")).to_string();
                    es.push((a, b));
                }
            }
        }
        c = ClInstance::new(LevelGraph::new(vertices, es)?, root)?;
        if !is_level_connected(&c)?.is_connected() {
            return Err(Error::TooLarge("generated hierarchy has a level hole".into()));
        }
    }
    Ok(c)
}
