use std::collections::{BTreeMap, HashMap, HashSet};

use super::{ReductionProvenance, Source};
use crate::error::{Error, Result};
use crate::model::{is_level_connected, ClInstance, LevelGraph, TLevelInstance, TreeNode};

struct Arena {
    /// Cluster id, child clusters, leaf vertices.
    clusters: Vec<(String, Vec<usize>, Vec<usize>)>,
}

impl Arena {
    fn from_tree(root: &TreeNode, vindex: &HashMap<String, usize>) -> (Arena, HashMap<usize, usize>) {
        let mut a = Arena {
            clusters: Vec::new(),
        };
        let mut parent = HashMap::new();
        fn go(
            n: &TreeNode,
            a: &mut Arena,
            parent: &mut HashMap<usize, usize>,
            vindex: &HashMap<String, usize>,
        ) -> usize {
            let me = a.clusters.len();
            a.clusters.push((n.label().to_string(), Vec::new(), Vec::new()));
            for c in n.children() {
                match c {
                    TreeNode::Leaf(id) => {
                        let v = vindex[id];
                        a.clusters[me].2.push(v);
                        parent.insert(v, me);
                    }
                    TreeNode::Node { .. } => {
                        let ci = go(c, a, parent, vindex);
                        a.clusters[me].1.push(ci);
                    }
                }
            }
            me
        }
        go(root, &mut a, &mut parent, vindex);
        (a, parent)
    }

    fn members(&self, c: usize, out: &mut Vec<usize>) {
        out.extend(&self.clusters[c].2);
        for &k in &self.clusters[c].1 {
            self.members(k, out);
        }
    }

    /// Post-order, children in lexicographic id order.
    fn bottom_up(&self, c: usize, out: &mut Vec<usize>) {
        let mut kids = self.clusters[c].1.clone();
        kids.sort_by(|&x, &y| self.clusters[x].0.cmp(&self.clusters[y].0));
        for k in kids {
            self.bottom_up(k, out);
        }
        out.push(c);
    }

    fn to_tree(&self, c: usize, ids: &[String]) -> TreeNode {
        let (id, kids, leaves) = &self.clusters[c];
        let mut children: Vec<TreeNode> =
            leaves.iter().map(|&v| TreeNode::leaf(ids[v].clone())).collect();
        children.extend(kids.iter().map(|&k| self.to_tree(k, ids)));
        TreeNode::node(id.clone(), children)
    }
}

/// An equivalent level-connected instance on `3k − 2` levels: level `l`
/// moves to `3l`, every edge becomes a three-edge path through two dummies,
/// and each cluster gap left over gets a connector edge inside the cluster.
pub fn make_level_connected(c: &ClInstance) -> Result<(ClInstance, ReductionProvenance)> {
    let g = c.graph();
    if let Some(&e) = g.edges().iter().find(|&&(u, v)| g.level(v) != g.level(u) + 1) {
        return Err(Error::NotProper(g.edge_label(e)));
    }
    let mut prov = ReductionProvenance::default();
    let mut ids: Vec<String> = Vec::new();
    let mut level: Vec<usize> = Vec::new();
    for v in 0..g.vertex_count() {
        ids.push(g.id(v).to_string());
        level.push(3 * g.level(v));
        prov.add(g.id(v), "original", Source {
            level: Some(g.level(v)),
            vertex: Some(g.id(v).to_string()),
            ..Source::default()
        });
    }
    let vindex: HashMap<String, usize> = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let root = match &c.hierarchy().root {
        TreeNode::Leaf(id) => TreeNode::node("root", vec![TreeNode::leaf(id.clone())]),
        r => r.clone(),
    };
    let (mut arena, parent) = Arena::from_tree(&root, &vindex);
    for (ci, cl) in c.clusters().iter().enumerate() {
        prov.add(&cl.id, "cluster", Source {
            cluster: Some(cl.id.clone()),
            ..Source::default()
        });
        debug_assert_eq!(arena.clusters[ci].0, cl.id);
    }

    // step 1: subdivide every edge twice
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in g.edges() {
        let label = format!("{}-{}", g.id(u), g.id(v));
        let lu = 3 * g.level(u);
        let mut add = |suffix: usize, role: &str, end: usize, ids: &mut Vec<String>, level: &mut Vec<usize>| {
            let id = format!("{label}#{}", lu + suffix);
            prov.add(&id, role, Source {
                level: Some(lu + suffix),
                vertex: Some(g.id(end).to_string()),
                edge: Some(label.clone()),
                ..Source::default()
            });
            ids.push(id);
            level.push(lu + suffix);
            ids.len() - 1
        };
        let du = add(1, "dummy_u", u, &mut ids, &mut level);
        let dv = add(2, "dummy_v", v, &mut ids, &mut level);
        arena.clusters[parent[&u]].2.push(du);
        arena.clusters[parent[&v]].2.push(dv);
        edges.extend([(u, du), (du, dv), (dv, v)]);
    }

    // step 2: bottom-up, one connector pair per remaining gap
    let mut order = Vec::new();
    arena.bottom_up(0, &mut order);
    for ci in order {
        let mut members = Vec::new();
        arena.members(ci, &mut members);
        let inside: HashSet<usize> = members.iter().copied().collect();
        let Some(lo) = members.iter().map(|&v| level[v]).min() else { continue };
        let hi = members.iter().map(|&v| level[v]).max().unwrap_or(lo);
        let mut covered = vec![false; hi - lo];
        for &(a, b) in &edges {
            if inside.contains(&a) && inside.contains(&b) {
                let l = level[a].min(level[b]);
                covered[l - lo] = true;
            }
        }
        let name = arena.clusters[ci].0.clone();
        for (off, ok) in covered.into_iter().enumerate() {
            if ok {
                continue;
            }
            let i = lo + off;
            let mut ends = [0usize; 2];
            for (k, (tag, role)) in [("u", "connector_u"), ("v", "connector_v")].iter().enumerate() {
                let id = format!("conn:{name}:{i}:{tag}");
                prov.add(&id, role, Source {
                    level: Some(i + k),
                    cluster: Some(name.clone()),
                    ..Source::default()
                });
                ids.push(id);
                level.push(i + k);
                ends[k] = ids.len() - 1;
                arena.clusters[ci].2.push(ends[k]);
            }
            edges.push((ends[0], ends[1]));
        }
    }

    let graph = LevelGraph::new(
        ids.iter().zip(&level).map(|(s, &l)| (s.clone(), l as i64)),
        edges.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone())),
    )?;
    let out = ClInstance::new(graph, arena.to_tree(0, &ids))?;
    Ok((out, prov))
}

/// Number of connector vertices added per `(cluster, level)`.
pub fn connector_additions(prov: &ReductionProvenance) -> BTreeMap<(String, usize), usize> {
    let mut m = BTreeMap::new();
    for r in prov.roles.values() {
        if r.role.starts_with("connector") {
            let key = (r.source.cluster.clone().unwrap_or_default(), r.source.level.unwrap_or(0));
            *m.entry(key).or_default() += 1;
        }
    }
    m
}

/// One constraint tree per level: the hierarchy restricted to that level's
/// vertices, unary nodes contracted. Requires a proper, level-connected
/// instance.
pub fn clusters_to_trees(c: &ClInstance) -> Result<TLevelInstance> {
    let gaps = is_level_connected(c)?;
    if !gaps.is_connected() {
        return Err(Error::NotLevelConnected(gaps.gaps.len()));
    }
    let g = c.graph();
    let trees = g
        .level_sets()
        .iter()
        .map(|vs| {
            let on: HashSet<&str> = vs.iter().map(|&v| g.id(v)).collect();
            c.hierarchy()
                .root
                .restricted(&|id| on.contains(id))
                .and_then(|t| t.normalized())
                .expect("every level holds a vertex")
        })
        .collect();
    Ok(TLevelInstance::from_parts(g.clone(), trees))
}
