use std::collections::HashMap;

use super::{LevelOrdering, SefeWitness};
use crate::error::{Error, Result};
use crate::model::SefeInstance;
use crate::reductions::ReductionProvenance;

/// Reads level orderings off a simultaneous embedding of a SEFE instance
/// built from a T-level instance: the leaves of each tree copy in pre-order
/// around the common embedding, reversed on odd levels.
pub fn decode_sefe_to_orderings(
    s: &SefeInstance,
    prov: &ReductionProvenance,
    w: &SefeWitness,
) -> Result<LevelOrdering> {
    let mut roots: Vec<(usize, &str)> = prov
        .with_role("tree_root")
        .map(|(id, r)| (r.source.level.unwrap_or(usize::MAX), id))
        .collect();
    if roots.is_empty() {
        return Err(Error::MissingProvenance("no tree_root roles".into()));
    }
    roots.sort_unstable();
    let k = roots.len();
    if roots.iter().enumerate().any(|(i, &(l, _))| i != l) {
        return Err(Error::MissingProvenance("tree roots do not cover levels 0..k".into()));
    }
    let idx = |id: &str| {
        s.index_of(id)
            .ok_or_else(|| Error::MissingProvenance(format!("vertex {id} not in instance")))
    };
    let rot = &w.g1.rotations;
    if rot.len() != s.vertex_count() {
        return Err(Error::BadWitness("rotation count differs from vertex count".into()));
    }
    let common: Vec<Vec<usize>> = rot
        .iter()
        .map(|r| r.iter().copied().filter(|&e| s.edges().get(e).is_some_and(|x| x.common())).collect())
        .collect();
    let leaf_vertex: HashMap<usize, String> = prov
        .roles
        .iter()
        .filter(|(_, r)| matches!(r.role.as_str(), "tree_leaf" | "tree_root"))
        .filter_map(|(id, r)| Some((s.index_of(id)?, r.source.vertex.clone()?)))
        .collect();

    let mut orderings = Vec::with_capacity(k);
    for (l, &(_, root_id)) in roots.iter().enumerate() {
        let t = idx(root_id)?;
        if let Some(u) = leaf_vertex.get(&t) {
            orderings.push(vec![u.clone()]);
            continue;
        }
        let prev = if l == 0 { idx("p0")? } else { idx(roots[l - 1].1)? };
        let next = if l + 1 == k {
            idx(&format!("q{}", k - 1))?
        } else {
            idx(roots[l + 1].1)?
        };
        let edge_to = |v: usize, x: usize| {
            common[v]
                .iter()
                .position(|&e| s.edges()[e].other(v) == x)
                .ok_or_else(|| Error::BadWitness(format!("no common edge between {v} and {x}")))
        };
        let mut theta = Vec::new();
        let start = edge_to(t, prev)?;
        let r = &common[t];
        for i in 1..r.len() {
            let e = r[(start + i) % r.len()];
            let c = s.edges()[e].other(t);
            if c != next {
                preorder(s, &common, &leaf_vertex, c, e, &mut theta)?;
            }
        }
        if l % 2 == 1 {
            theta.reverse();
        }
        orderings.push(theta);
    }
    Ok(LevelOrdering::new(orderings))
}

fn preorder(
    s: &SefeInstance,
    common: &[Vec<usize>],
    leaf_vertex: &HashMap<usize, String>,
    v: usize,
    parent_edge: usize,
    out: &mut Vec<String>,
) -> Result<()> {
    if let Some(u) = leaf_vertex.get(&v) {
        out.push(u.clone());
        return Ok(());
    }
    let r = &common[v];
    let start = r
        .iter()
        .position(|&e| e == parent_edge)
        .ok_or_else(|| Error::BadWitness(format!("parent edge missing at vertex {v}")))?;
    for i in 1..r.len() {
        let e = r[(start + i) % r.len()];
        preorder(s, common, leaf_vertex, s.edges()[e].other(v), e, out)?;
    }
    Ok(())
}
