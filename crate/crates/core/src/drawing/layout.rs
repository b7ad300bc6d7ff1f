use std::collections::{BTreeMap, BTreeSet};

use super::geometry::{on_segment, q, ratio, segments_intersect, Point, Q};
use crate::error::{Error, Result};
use crate::model::{subdivide_to_proper, LevelGraph};
use crate::oracles::{BetweennessInstance, LevelOrdering};
use crate::reductions::reduce_betweenness_to_tlevel;

/// A level drawing with exact coordinates. Every edge is a y-monotone
/// polyline whose inner points are bends (one per skipped level).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelDrawing {
    pub points: BTreeMap<String, Point>,
    /// Ids in `points` that are bends rather than vertices.
    pub bends: BTreeSet<String>,
    /// Point ids along each edge, lower endpoint first.
    pub edges: Vec<Vec<String>>,
    /// Convex region per cluster, counter-clockwise.
    pub regions: BTreeMap<String, Vec<Point>>,
}

/// A straight piece of some edge, as the ids of its two points.
pub type Segment = (String, String);

impl LevelDrawing {
    pub fn point(&self, id: &str) -> Option<&Point> {
        self.points.get(id)
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.edges
            .iter()
            .flat_map(|e| e.windows(2).map(|w| (w[0].clone(), w[1].clone())))
            .collect()
    }
}

fn with_edges(g: &LevelGraph, x: impl Fn(usize) -> Q, bend_x: impl Fn(&str, usize, &str) -> Q) -> LevelDrawing {
    let (sub, map) = subdivide_to_proper(g);
    let mut d = LevelDrawing::default();
    for v in 0..g.vertex_count() {
        d.points.insert(g.id(v).to_string(), Point::new(x(v), q(g.level(v) as i64)));
    }
    for &(u, v) in g.edges() {
        let (a, b) = (g.id(u).to_string(), g.id(v).to_string());
        let mut line = vec![a.clone()];
        if let Some(chain) = map.chains.get(&(a.clone(), b.clone())) {
            for id in chain {
                let l = sub.level(sub.index_of(id).expect("dummy in subdivision"));
                d.points.insert(id.clone(), Point::new(bend_x(id, l, &a), q(l as i64)));
                d.bends.insert(id.clone());
                line.push(id.clone());
            }
        }
        line.push(b);
        d.edges.push(line);
    }
    d
}

/// Places vertex `v` at `(rank, level)`, rank 1-based within its level.
/// `o` orders the subdivided graph, so long edges bend at their dummies.
pub fn draw_from_ordering(g: &LevelGraph, o: &LevelOrdering) -> Result<LevelDrawing> {
    let (sub, _) = subdivide_to_proper(g);
    if !o.is_permutation_of(&sub) {
        return Err(Error::BadWitness("ordering does not list every level of the subdivided graph".into()));
    }
    let pos = o.positions();
    let rank = |id: &str| q(pos[id] as i64 + 1);
    Ok(with_edges(g, |v| rank(g.id(v)), |id, _, _| rank(id)))
}

/// The drawing of the hardness gadget given a satisfying order of the
/// Betweenness instance: every vertex of element `j` sits at `x = rank(j)`,
/// the two poles in the middle. Long edges are vertical.
pub fn draw_from_betweenness_solution(b: &BetweennessInstance, order: &[usize]) -> Result<LevelDrawing> {
    if !b.is_satisfied_by(order) {
        return Err(Error::BadWitness("order does not satisfy every triple".into()));
    }
    let (t, prov) = reduce_betweenness_to_tlevel(b, false)?;
    let g = t.graph();
    let mut rank = vec![0i64; b.elements + 1];
    for (i, &e) in order.iter().enumerate() {
        rank[e] = i as i64 + 1;
    }
    let middle = ratio(b.elements as i64 + 1, 2);
    let x = |v: usize| match prov.role(g.id(v)).and_then(|r| r.source.element) {
        Some(j) => q(rank[j]),
        None => middle.clone(),
    };
    let xs: BTreeMap<String, Q> = (0..g.vertex_count()).map(|v| (g.id(v).to_string(), x(v))).collect();
    Ok(with_edges(g, x, |_, _, lower| xs[lower].clone()))
}

/// Pairs of segments without a common endpoint that share a point.
pub fn independent_crossings(d: &LevelDrawing) -> Vec<(Segment, Segment)> {
    let segs = d.segments();
    let mut out = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        for t in &segs[i + 1..] {
            if s.0 == t.0 || s.0 == t.1 || s.1 == t.0 || s.1 == t.1 {
                continue;
            }
            let (a, b, c, e) = (&d.points[&s.0], &d.points[&s.1], &d.points[&t.0], &d.points[&t.1]);
            if segments_intersect(a, b, c, e) {
                out.push((s.clone(), t.clone()));
            }
        }
    }
    out
}

/// Segments that pass through a point other than their endpoints.
pub fn degeneracies(d: &LevelDrawing) -> Vec<(Segment, String)> {
    let mut out = Vec::new();
    for s in d.segments() {
        let (a, b) = (&d.points[&s.0], &d.points[&s.1]);
        for (id, p) in &d.points {
            if *id != s.0 && *id != s.1 && on_segment(p, a, b) {
                out.push((s.clone(), id.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_ranks_become_coordinates() {
        let g = LevelGraph::new([("a", 0), ("b", 0), ("c", 1), ("d", 2)], [("a", "c"), ("b", "d")]).unwrap();
        let o = LevelOrdering::new(vec![
            vec!["a".into(), "b".into()],
            vec!["c".into(), "b-d#1".into()],
            vec!["d".into()],
        ]);
        let d = draw_from_ordering(&g, &o).unwrap();
        assert_eq!(d.points["b"], Point::int(2, 0));
        assert_eq!(d.points["b-d#1"], Point::int(2, 1));
        assert!(d.bends.contains("b-d#1"));
        assert_eq!(d.edges[1], vec!["b", "b-d#1", "d"]);
        assert!(independent_crossings(&d).is_empty());
        assert!(degeneracies(&d).is_empty());
    }

    #[test]
    fn swapped_endpoints_cross() {
        let g = LevelGraph::new([("a", 0), ("b", 0), ("c", 1), ("d", 1)], [("a", "c"), ("b", "d")]).unwrap();
        let o = LevelOrdering::new(vec![vec!["a".into(), "b".into()], vec!["d".into(), "c".into()]]);
        assert_eq!(independent_crossings(&draw_from_ordering(&g, &o).unwrap()).len(), 1);
    }

    #[test]
    fn gadget_drawing_puts_elements_in_columns() {
        let b = BetweennessInstance::new(4, vec![[1, 2, 3]]).unwrap();
        let d = draw_from_betweenness_solution(&b, &[1, 2, 3, 4]).unwrap();
        assert_eq!(d.points["v"].x, ratio(5, 2));
        assert_eq!(d.points["u'1_3"], Point::int(3, 3));
        // element 4 is in no triple: its edge runs straight up through bends
        let long = d.edges.iter().find(|e| e[0] == "v4").unwrap();
        assert_eq!(long.len(), 4);
        assert!(long.iter().all(|id| d.points[id].x == q(4)));
        assert!(independent_crossings(&d).is_empty());
        assert!(draw_from_betweenness_solution(&b, &[2, 1, 3, 4]).is_err());
    }
}
