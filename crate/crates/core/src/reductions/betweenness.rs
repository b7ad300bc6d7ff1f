use super::{ReductionProvenance, Source};
use crate::error::{Error, Result};
use crate::model::{ClInstance, LevelGraph, TLevelInstance, TreeNode};
use crate::oracles::BetweennessInstance;

const SLOTS: [&str; 3] = ["alpha", "beta", "delta"];

pub(crate) fn u_id(i: usize, j: usize) -> String {
    format!("u{i}_{j}")
}

pub(crate) fn u_prime_id(i: usize, j: usize) -> String {
    format!("u'{i}_{j}")
}

struct Built {
    vertices: Vec<(String, i64)>,
    edges: Vec<(String, String)>,
    trees: Vec<(i64, TreeNode)>,
    prov: ReductionProvenance,
}

fn src() -> Source {
    Source::default()
}

fn star(id: String, leaves: Vec<String>) -> TreeNode {
    if leaves.len() == 1 {
        TreeNode::leaf(leaves[0].clone())
    } else {
        TreeNode::node(id, leaves.into_iter().map(TreeNode::leaf).collect())
    }
}

fn build(b: &BetweennessInstance, drop_outer: bool) -> Built {
    let n = b.elements;
    let m = b.triples.len();
    let mut out = Built {
        vertices: Vec::new(),
        edges: Vec::new(),
        trees: Vec::new(),
        prov: ReductionProvenance::default(),
    };
    // level offsets: with the outer levels dropped, everything after v
    // moves up by one and w by two
    let shift: i64 = if drop_outer { 1 } else { 0 };
    let w_level = 2 * m as i64 + 3 - 2 * shift;

    out.vertices.push(("v".into(), 0));
    out.prov.add("v", "v", Source { level: Some(0), ..src() });
    out.trees.push((0, TreeNode::leaf("v")));

    let mut last: Vec<String> = vec![String::new(); n + 1];
    if drop_outer {
        for l in last.iter_mut() {
            *l = "v".into();
        }
    } else {
        let mut leaves = Vec::new();
        for j in 1..=n {
            let id = format!("v{j}");
            out.vertices.push((id.clone(), 1));
            out.edges.push(("v".into(), id.clone()));
            out.prov.add(&id, "v_j", Source { level: Some(1), element: Some(j), ..src() });
            leaves.push(id.clone());
            last[j] = id;
        }
        if n > 0 {
            out.trees.push((1, star("r1".into(), leaves)));
        }
    }

    for (t, triple) in b.triples.iter().enumerate() {
        let i = t + 1;
        let (lu, lp) = (2 * i as i64 - shift, 2 * i as i64 + 1 - shift);
        for (slot, &j) in SLOTS.iter().zip(triple) {
            let (u, up) = (u_id(i, j), u_prime_id(i, j));
            out.vertices.push((u.clone(), lu));
            out.vertices.push((up.clone(), lp));
            out.edges.push((last[j].clone(), u.clone()));
            out.edges.push((u.clone(), up.clone()));
            let s = |level| Source {
                level: Some(level as usize),
                element: Some(j),
                triple: Some(i),
                ..src()
            };
            out.prov.add(&u, &format!("u_{slot}"), s(lu));
            out.prov.add(&up, &format!("u'_{slot}"), s(lp));
            last[j] = up;
        }
        let [a, be, d] = *triple;
        out.trees.push((
            lu,
            TreeNode::node(
                format!("r{lu}"),
                vec![
                    TreeNode::node(
                        format!("x{lu}"),
                        vec![TreeNode::leaf(u_id(i, be)), TreeNode::leaf(u_id(i, d))],
                    ),
                    TreeNode::leaf(u_id(i, a)),
                ],
            ),
        ));
        out.trees.push((
            lp,
            TreeNode::node(
                format!("r{lp}"),
                vec![
                    TreeNode::node(
                        format!("x{lp}"),
                        vec![TreeNode::leaf(u_prime_id(i, a)), TreeNode::leaf(u_prime_id(i, be))],
                    ),
                    TreeNode::leaf(u_prime_id(i, d)),
                ],
            ),
        ));
    }

    if drop_outer {
        // one v..w path per element that occurs in some triple
        for j in 1..=n {
            if last[j] != "v" {
                out.edges.push((last[j].clone(), "w".into()));
            }
        }
    } else {
        let wl = 2 * m as i64 + 2;
        let mut leaves = Vec::new();
        for j in 1..=n {
            let id = format!("w{j}");
            out.vertices.push((id.clone(), wl));
            out.edges.push((last[j].clone(), id.clone()));
            out.edges.push((id.clone(), "w".into()));
            out.prov.add(&id, "w_j", Source { level: Some(wl as usize), element: Some(j), ..src() });
            leaves.push(id);
        }
        if n > 0 {
            out.trees.push((wl, star(format!("r{wl}"), leaves)));
        }
    }
    out.vertices.push(("w".into(), w_level));
    out.prov.add("w", "w", Source { level: Some(w_level as usize), ..src() });
    out.trees.push((w_level, TreeNode::leaf("w")));
    out
}

/// The hardness gadget: a T-level instance that is T-level planar iff `b`
/// is satisfiable. With `drop_outer_levels`, the `v_j` and `w_j` levels are
/// left out and every tree is binary.
pub fn reduce_betweenness_to_tlevel(
    b: &BetweennessInstance,
    drop_outer_levels: bool,
) -> Result<(TLevelInstance, ReductionProvenance)> {
    let v = b.violations();
    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }
    let built = build(b, drop_outer_levels);
    let g = LevelGraph::new(built.vertices, built.edges)?;
    let t = TLevelInstance::new(g, built.trees)?;
    Ok((t, built.prov))
}

/// The same graph with a nested cluster chain in place of the trees:
/// cl-planar iff `b` is satisfiable.
pub fn build_cl_hierarchy(b: &BetweennessInstance) -> Result<(ClInstance, ReductionProvenance)> {
    let (t, mut prov) = reduce_betweenness_to_tlevel(b, false)?;
    let n = b.elements;
    let m = b.triples.len();
    let mut cluster = |id: String, k: usize| {
        prov.add(&id, if id.starts_with("mu") { "mu" } else { "nu" }, Source {
            level: Some(k),
            ..src()
        });
        id
    };
    let mut kids: Vec<TreeNode> = vec![TreeNode::leaf("v")];
    kids.extend((1..=n).map(|j| TreeNode::leaf(format!("v{j}"))));
    let mut inner = TreeNode::node(cluster("mu1".into(), 1), kids);
    for (t_idx, &[a, be, d]) in b.triples.iter().enumerate() {
        let i = t_idx + 1;
        let nu2 = TreeNode::node(
            cluster(format!("nu{}", 2 * i), 2 * i),
            vec![TreeNode::leaf(u_id(i, be)), TreeNode::leaf(u_id(i, d)), inner],
        );
        let mu2 = TreeNode::node(cluster(format!("mu{}", 2 * i), 2 * i), vec![TreeNode::leaf(u_id(i, a)), nu2]);
        let nu3 = TreeNode::node(
            cluster(format!("nu{}", 2 * i + 1), 2 * i + 1),
            vec![TreeNode::leaf(u_prime_id(i, a)), TreeNode::leaf(u_prime_id(i, be)), mu2],
        );
        inner = TreeNode::node(
            cluster(format!("mu{}", 2 * i + 1), 2 * i + 1),
            vec![TreeNode::leaf(u_prime_id(i, d)), nu3],
        );
    }
    debug_assert_eq!(inner.label(), format!("mu{}", 2 * m + 1));
    let mut top = vec![TreeNode::leaf("w")];
    top.extend((1..=n).map(|j| TreeNode::leaf(format!("w{j}"))));
    top.push(inner);
    prov.add("rho", "rho", src());
    let root = TreeNode::node("rho", top);
    let c = ClInstance::new(t.graph().clone(), root)?;
    Ok((c, prov))
}
