use super::{clusters_to_trees, make_level_connected, reduce_tlp_to_sefe};
use crate::error::{Error, Result};
use crate::model::{ClInstance, TLevelInstance};
use crate::oracles::{
    decode_sefe_to_orderings, ordering_is_crossing_free, ordering_is_tree_compatible,
    solve_sefe_exhaustive, solve_tlp_exhaustive, Budget, CompatMode, LevelOrdering,
};

/// Attached to every pipeline result.
pub const BACKEND_CAVEAT: &str = "decision exact; runtime exponential, not the known polynomial bound";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Reduce to SEFE and run the embedding oracle.
    Sefe,
    /// Search orderings of the T-level instance directly.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub planar: bool,
    pub certificate: Option<LevelOrdering>,
    pub backend: Backend,
    pub note: &'static str,
}

fn witness_ok(t: &TLevelInstance, o: &LevelOrdering) -> bool {
    o.is_permutation_of(t.graph())
        && ordering_is_crossing_free(t.graph(), o)
        && t.trees()
            .iter()
            .zip(&o.orderings)
            .all(|(tree, ord)| ordering_is_tree_compatible(tree, ord, CompatMode::AllVertices))
}

/// T-level planarity of a proper instance, through either backend. The
/// certificate is re-checked before it is returned.
pub fn decide_proper_tlp(t: &TLevelInstance, backend: Backend, budget: &Budget) -> Result<Decision> {
    let g = t.graph();
    if let Some(&e) = g.edges().iter().find(|&&(u, v)| g.level(v) != g.level(u) + 1) {
        return Err(Error::NotProper(g.edge_label(e)));
    }
    let certificate = match backend {
        Backend::Direct => solve_tlp_exhaustive(t, budget)?,
        Backend::Sefe => {
            let (s, prov) = reduce_tlp_to_sefe(t)?;
            match solve_sefe_exhaustive(&s, budget)? {
                Some(w) => Some(decode_sefe_to_orderings(&s, &prov, &w)?),
                None => None,
            }
        }
    };
    if let Some(o) = &certificate {
        if !witness_ok(t, o) {
            return Err(Error::BadWitness("pipeline certificate failed re-check".into()));
        }
    }
    Ok(Decision {
        planar: certificate.is_some(),
        certificate,
        backend,
        note: BACKEND_CAVEAT,
    })
}

/// cl-planarity of a proper instance: made level-connected, turned into
/// trees, decided as T-level planarity. The certificate orders the input's
/// own vertices.
pub fn decide_proper_cl(c: &ClInstance, backend: Backend, budget: &Budget) -> Result<Decision> {
    let (lc, prov) = make_level_connected(c)?;
    let t = clusters_to_trees(&lc)?;
    let d = decide_proper_tlp(&t, backend, budget)?;
    let certificate = d.certificate.map(|o| {
        let keep = |id: &str| prov.role(id).is_some_and(|r| r.role == "original");
        LevelOrdering::new(
            (0..c.graph().level_count())
                .map(|l| o.orderings[3 * l].iter().filter(|v| keep(v)).cloned().collect())
                .collect(),
        )
    });
    Ok(Decision {
        planar: d.planar,
        certificate,
        backend,
        note: BACKEND_CAVEAT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LevelGraph, TreeNode};

    fn star(id: &str, leaves: &[&str]) -> TreeNode {
        TreeNode::node(id, leaves.iter().map(|l| TreeNode::leaf(*l)).collect())
    }

    fn two_level(edges: &[(&str, &str)]) -> TLevelInstance {
        let g = LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            edges.iter().copied(),
        )
        .unwrap();
        TLevelInstance::new(g, [(0, star("r0", &["a1", "a2"])), (1, star("r1", &["b1", "b2"]))])
            .unwrap()
    }

    #[test]
    fn backends_agree_on_matching_and_k22() {
        let b = Budget::default();
        let yes = two_level(&[("a1", "b1"), ("a2", "b2")]);
        let no = two_level(&[("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")]);
        for backend in [Backend::Direct, Backend::Sefe] {
            let d = decide_proper_tlp(&yes, backend, &b).unwrap();
            assert!(d.planar && d.certificate.is_some());
            assert_eq!(d.note, BACKEND_CAVEAT);
            assert!(!decide_proper_tlp(&no, backend, &b).unwrap().planar);
        }
    }

    #[test]
    fn root_only_hierarchy_matches_level_planarity() {
        let g = LevelGraph::new(
            [("a1", 0), ("a2", 0), ("b1", 1), ("b2", 1)],
            [("a1", "b1"), ("a2", "b2")],
        )
        .unwrap();
        let c = ClInstance::new(g, star("root", &["a1", "a2", "b1", "b2"])).unwrap();
        let d = decide_proper_cl(&c, Backend::Direct, &Budget::default()).unwrap();
        assert!(d.planar);
        let o = d.certificate.unwrap();
        assert!(o.is_permutation_of(c.graph()));
        assert!(ordering_is_crossing_free(c.graph(), &o));
    }
}
