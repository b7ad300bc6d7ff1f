use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{Validate, Violation};
use crate::error::{Error, Result};

/// Dense vertex index into a [`LevelGraph`].
pub type VertexIdx = usize;

/// A graph whose vertices carry a level; no edge stays inside a level.
///
/// Levels are stored 0-based and contiguous. Ingestion through
/// [`LevelGraph::new`] compacts empty levels and remembers the level numbers
/// the caller originally used in [`LevelGraph::original_levels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph {
    level_count: usize,
    ids: Vec<String>,
    levels: Vec<usize>,
    edges: Vec<(VertexIdx, VertexIdx)>,
    index: HashMap<String, VertexIdx>,
    original_levels: Vec<i64>,
}

impl LevelGraph {
    /// Builds a graph from `(id, level)` pairs and id-pairs for edges.
    ///
    /// Levels may be arbitrary integers; they are compacted to `0..k`.
    pub fn new<S, T>(
        vertices: impl IntoIterator<Item = (S, i64)>,
        edges: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Self>
    where
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut violations = Vec::new();
        let mut ids = Vec::new();
        let mut raw_levels = Vec::new();
        let mut index = HashMap::new();
        for (id, level) in vertices {
            let id: String = id.into();
            if index.contains_key(&id) {
                violations.push(Violation::new("duplicate-vertex", id.clone()));
                continue;
            }
            index.insert(id.clone(), ids.len());
            ids.push(id);
            raw_levels.push(level);
        }

        let distinct: BTreeSet<i64> = raw_levels.iter().copied().collect();
        let original_levels: Vec<i64> = distinct.into_iter().collect();
        let compact: HashMap<i64, usize> = original_levels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        let levels: Vec<usize> = raw_levels.iter().map(|l| compact[l]).collect();

        let mut out_edges = Vec::new();
        let mut seen = HashSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (Some(&u), Some(&v)) = (index.get(a), index.get(b)) else {
                violations.push(Violation::new(
                    "unknown-vertex",
                    format!("edge ({a}, {b}) references an unknown vertex"),
                ));
                continue;
            };
            if u == v {
                violations.push(Violation::new("self-loop", a.to_string()));
                continue;
            }
            if levels[u] == levels[v] {
                violations.push(Violation::new(
                    "intra-level edge",
                    format!("({a}, {b}) on level {}", levels[u]),
                ));
                continue;
            }
            let (u, v) = if levels[u] < levels[v] { (u, v) } else { (v, u) };
            if !seen.insert((u, v)) {
                violations.push(Violation::new("duplicate-edge", format!("({a}, {b})")));
                continue;
            }
            out_edges.push((u, v));
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(LevelGraph {
            level_count: original_levels.len(),
            ids,
            levels,
            edges: out_edges,
            index,
            original_levels,
        })
    }

    /// Assembles a graph from already-normalized parts without checking
    /// invariants; callers re-check through [`Validate`].
    pub(crate) fn from_parts(
        level_count: usize,
        ids: Vec<String>,
        levels: Vec<usize>,
        edges: Vec<(VertexIdx, VertexIdx)>,
    ) -> Self {
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let edges = edges
            .into_iter()
            .map(|(u, v)| if levels[u] <= levels[v] { (u, v) } else { (v, u) })
            .collect();
        LevelGraph {
            level_count,
            ids,
            levels,
            edges,
            index,
            original_levels: (0..level_count as i64).collect(),
        }
    }

    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: VertexIdx) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn level(&self, v: VertexIdx) -> usize {
        self.levels[v]
    }

    pub fn index_of(&self, id: &str) -> Option<VertexIdx> {
        self.index.get(id).copied()
    }

    /// Edges as index pairs, lower level first.
    pub fn edges(&self) -> &[(VertexIdx, VertexIdx)] {
        &self.edges
    }

    pub fn original_levels(&self) -> &[i64] {
        &self.original_levels
    }

    /// Vertices of each level, ascending by index.
    pub fn level_sets(&self) -> Vec<Vec<VertexIdx>> {
        let mut sets = vec![Vec::new(); self.level_count];
        for (v, &l) in self.levels.iter().enumerate() {
            if l < self.level_count {
                sets[l].push(v);
            }
        }
        sets
    }

    pub fn adjacency(&self) -> Vec<Vec<VertexIdx>> {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn edge_label(&self, e: (VertexIdx, VertexIdx)) -> String {
        format!("{}-{}", self.ids[e.0], self.ids[e.1])
    }
}

impl Validate for LevelGraph {
    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut occupied = vec![false; self.level_count];
        for (v, &l) in self.levels.iter().enumerate() {
            if l >= self.level_count {
                out.push(Violation::new(
                    "level-out-of-range",
                    format!("{} on level {l} of {}", self.ids[v], self.level_count),
                ));
            } else {
                occupied[l] = true;
            }
        }
        for (l, occ) in occupied.iter().enumerate() {
            if !occ {
                out.push(Violation::new("empty-level", format!("level {l}")));
            }
        }
        if self.index.len() != self.ids.len() {
            out.push(Violation::new("duplicate-vertex", "vertex ids are not unique"));
        }
        let mut seen = HashSet::new();
        for &(u, v) in &self.edges {
            if u >= self.ids.len() || v >= self.ids.len() {
                out.push(Violation::new("unknown-vertex", format!("edge ({u}, {v})")));
                continue;
            }
            if u == v {
                out.push(Violation::new("self-loop", self.ids[u].clone()));
            } else if self.levels[u] == self.levels[v] {
                out.push(Violation::new(
                    "intra-level edge",
                    format!("({}, {})", self.ids[u], self.ids[v]),
                ));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                out.push(Violation::new(
                    "duplicate-edge",
                    format!("({}, {})", self.ids[u], self.ids[v]),
                ));
            }
        }
        out
    }
}

/// True iff every edge joins consecutive levels.
pub fn is_proper(g: &LevelGraph) -> bool {
    g.edges.iter().all(|&(u, v)| g.levels[v] == g.levels[u] + 1)
}

/// Long edges of the original graph and the dummies that replaced them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubdivisionMap {
    /// Original edge (by endpoint ids, lower level first) to its dummy ids,
    /// ordered by level.
    pub chains: BTreeMap<(String, String), Vec<String>>,
    /// Per vertex of the subdivided graph: true for dummies.
    pub dummy: Vec<bool>,
}

impl SubdivisionMap {
    pub fn is_dummy(&self, v: VertexIdx) -> bool {
        self.dummy.get(v).copied().unwrap_or(false)
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy.iter().filter(|d| **d).count()
    }
}

/// Replaces every edge spanning more than one level by a path through one
/// dummy per skipped level. Dummy ids are `"<u>-<v>#<level>"`. Original
/// vertices keep their indices; dummies are appended.
pub fn subdivide_to_proper(g: &LevelGraph) -> (LevelGraph, SubdivisionMap) {
    let mut ids = g.ids.clone();
    let mut levels = g.levels.clone();
    let mut edges = Vec::with_capacity(g.edges.len());
    let mut map = SubdivisionMap::default();
    for &(u, v) in &g.edges {
        let (lu, lv) = (g.levels[u], g.levels[v]);
        if lv == lu + 1 {
            edges.push((u, v));
            continue;
        }
        let label = g.edge_label((u, v));
        let mut prev = u;
        let mut chain = Vec::new();
        for l in lu + 1..lv {
            let d = ids.len();
            let id = format!("{label}#{l}");
            chain.push(id.clone());
            ids.push(id);
            levels.push(l);
            edges.push((prev, d));
            prev = d;
        }
        edges.push((prev, v));
        map.chains
            .insert((g.ids[u].clone(), g.ids[v].clone()), chain);
    }
    map.dummy = (0..ids.len()).map(|i| i >= g.ids.len()).collect();
    let mut out = LevelGraph::from_parts(g.level_count, ids, levels, edges);
    out.original_levels = g.original_levels.clone();
    (out, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[(&str, i64)], es: &[(&str, &str)]) -> LevelGraph {
        LevelGraph::new(vs.iter().map(|&(a, l)| (a, l)), es.iter().copied()).unwrap()
    }

    #[test]
    fn single_vertex_is_valid() {
        let g = graph(&[("a", 0)], &[]);
        assert!(g.violations().is_empty());
        assert_eq!(g.level_count(), 1);
    }

    #[test]
    fn intra_level_edge_is_rejected() {
        let err = LevelGraph::new([("a", 0), ("b", 0)], [("a", "b")]).unwrap_err();
        match err {
            Error::Invalid(v) => assert_eq!(v[0].code, "intra-level edge"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_edges_and_loops_are_rejected() {
        let err = LevelGraph::new([("a", 0), ("b", 1)], [("a", "b"), ("b", "a"), ("a", "a")])
            .unwrap_err();
        let Error::Invalid(v) = err else { panic!() };
        let codes: Vec<_> = v.iter().map(|x| x.code).collect();
        assert_eq!(codes, vec!["duplicate-edge", "self-loop"]);
    }

    #[test]
    fn empty_levels_are_compacted() {
        let g = graph(&[("a", 2), ("b", 7), ("c", 5)], &[("a", "c")]);
        assert_eq!(g.level_count(), 3);
        assert_eq!(g.original_levels(), &[2, 5, 7]);
        assert_eq!(g.level(g.index_of("b").unwrap()), 2);
        assert!(is_proper(&g));
    }

    #[test]
    fn properness() {
        assert!(is_proper(&graph(
            &[("a", 0), ("b", 1), ("c", 2)],
            &[("a", "b"), ("b", "c")]
        )));
        assert!(!is_proper(&graph(&[("a", 0), ("m", 1), ("b", 2)], &[("a", "b")])));
        assert!(is_proper(&graph(&[("a", 0), ("b", 1)], &[])));
    }

    #[test]
    fn subdivision_of_proper_graph_is_identity() {
        let g = graph(&[("a", 0), ("b", 1)], &[("a", "b")]);
        let (h, map) = subdivide_to_proper(&g);
        assert_eq!(h, g);
        assert!(map.chains.is_empty());
    }

    #[test]
    fn long_edge_gets_one_dummy_per_skipped_level() {
        let g = graph(
            &[("a", 0), ("x", 1), ("y", 2), ("b", 3)],
            &[("a", "b")],
        );
        let (h, map) = subdivide_to_proper(&g);
        assert!(is_proper(&h));
        let chain = &map.chains[&("a".to_string(), "b".to_string())];
        assert_eq!(chain, &vec!["a-b#1".to_string(), "a-b#2".to_string()]);
        assert_eq!(h.level(h.index_of("a-b#1").unwrap()), 1);
        assert_eq!(h.level(h.index_of("a-b#2").unwrap()), 2);
        assert_eq!(h.edges().len(), 3);
        assert_eq!(map.dummy_count(), 2);
    }
}
