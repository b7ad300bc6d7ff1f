use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{SefeInstance, TLevelInstance, TreeNode};
use crate::oracles::{
    extend_common_embedding, ordering_is_crossing_free, ordering_is_tree_compatible, Budget,
    CompatMode, LevelOrdering, RotationSystem, SefeWitness,
};
use crate::reductions::sefe::{copy_id, p_id, p_leaf, q_id, q_leaf};

/// Simultaneous embedding of the SEFE instance built from `t`, read off a
/// planar ordering `o` of `t`.
/// Built from the lexicographically smaller of `o` and its mirror image,
/// so the reflected ordering gets exactly the reflected embedding.
pub fn build_sefe_certificate(t: &TLevelInstance, s: &SefeInstance, o: &LevelOrdering) -> Result<SefeWitness> {
    let mirror = o.reflected();
    if mirror.orderings < o.orderings {
        let w = build(t, s, &mirror)?;
        return Ok(SefeWitness {
            g1: w.g1.reversed(),
            g2: w.g2.reversed(),
        });
    }
    build(t, s, o)
}

fn build(t: &TLevelInstance, s: &SefeInstance, o: &LevelOrdering) -> Result<SefeWitness> {
    let g = t.graph();
    if !o.is_permutation_of(g)
        || !ordering_is_crossing_free(g, o)
        || !t.trees()
            .iter()
            .zip(&o.orderings)
            .all(|(tree, ord)| ordering_is_tree_compatible(tree, ord, CompatMode::AllVertices))
    {
        return Err(Error::BadWitness("ordering is not a T-level planar embedding".into()));
    }
    let k = g.level_count();
    let idx = |id: &str| {
        s.index_of(id)
            .ok_or_else(|| Error::MissingProvenance(format!("vertex {id} not in instance")))
    };
    // common edge between two vertices, keyed by unordered pair
    let mut common: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, x) in s.edges().iter().enumerate() {
        if x.common() {
            common.insert((x.u.min(x.v), x.u.max(x.v)), e);
        }
    }
    let edge = |a: usize, b: usize| {
        common
            .get(&(a.min(b), a.max(b)))
            .copied()
            .ok_or_else(|| Error::BadWitness(format!("no common edge {a}-{b}")))
    };
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); s.vertex_count()];

    for l in 0..k {
        // X_l: the ordering as read around the root
        let mut x: Vec<&str> = o.orderings[l].iter().map(String::as_str).collect();
        if l % 2 == 1 {
            x.reverse();
        }
        let xpos: HashMap<&str, usize> = x.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let tree = t.tree(l);
        let root = idx(&copy_id(l, tree))?;
        let prev = if l == 0 { idx(&p_id(0))? } else { idx(&copy_id(l - 1, t.tree(l - 1)))? };
        let next = if l + 1 == k { idx(&q_id(k - 1))? } else { idx(&copy_id(l + 1, t.tree(l + 1)))? };
        let kids = ordered_children(tree, &xpos);
        let mut kid_edges = Vec::new();
        for c in &kids {
            kid_edges.push(edge(root, idx(&copy_id(l, c))?)?);
        }
        let (ep, en) = (edge(root, prev)?, edge(root, next)?);
        rot[root] = [vec![ep], kid_edges, vec![en]].concat();
        embed_subtree(l, tree, &xpos, &idx, &edge, &mut rot)?;

        // stars fan out against X_l, on the same side of the cycle as the trees
        let (p, qv) = (idx(&p_id(l))?, idx(&q_id(l))?);
        let west = if l == 0 { root } else { idx(&q_id(l - 1))? };
        let east = if l + 1 == k { root } else { idx(&p_id(l + 1))? };
        let mut pf = Vec::new();
        let mut qf = Vec::new();
        for u in &x {
            if let Some(v) = s.index_of(&p_leaf(l, u)) {
                let e = edge(p, v)?;
                rot[v] = vec![e];
                pf.push(e);
            }
            if let Some(v) = s.index_of(&q_leaf(l, u)) {
                let e = edge(qv, v)?;
                rot[v] = vec![e];
                qf.push(e);
            }
        }
        pf.reverse();
        qf.reverse();
        let (pq, pw) = (edge(p, qv)?, edge(p, west)?);
        rot[p] = [vec![pq], pf, vec![pw]].concat();
        let (qe, qp) = (edge(qv, east)?, edge(qv, p)?);
        rot[qv] = [vec![qe], qf, vec![qp]].concat();
    }
    let common_rot = RotationSystem::new(rot);
    extend_common_embedding(s, &common_rot, &Budget::default())?
        .ok_or_else(|| Error::BadWitness("ordering did not extend to a simultaneous embedding".into()))
}

fn ordered_children<'a>(n: &'a TreeNode, xpos: &HashMap<&str, usize>) -> Vec<&'a TreeNode> {
    let mut kids: Vec<&TreeNode> = n.children().iter().collect();
    kids.sort_by_key(|c| c.leaves().iter().map(|v| xpos[v]).min());
    kids
}

fn embed_subtree(
    l: usize,
    n: &TreeNode,
    xpos: &HashMap<&str, usize>,
    idx: &dyn Fn(&str) -> Result<usize>,
    edge: &dyn Fn(usize, usize) -> Result<usize>,
    rot: &mut [Vec<usize>],
) -> Result<()> {
    let me = idx(&copy_id(l, n))?;
    for c in ordered_children(n, xpos) {
        let v = idx(&copy_id(l, c))?;
        let e = edge(me, v)?;
        let mut r = vec![e];
        for cc in ordered_children(c, xpos) {
            r.push(edge(v, idx(&copy_id(l, cc))?)?);
        }
        rot[v] = r;
        embed_subtree(l, c, xpos, idx, edge, rot)?;
    }
    Ok(())
}
