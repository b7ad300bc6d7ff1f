use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use super::geometry::{
    clip_segment, convex_hull, cross, dist2, horizontal_section, is_strictly_convex, locate,
    point_polygon_dist2, point_segment_dist2, polygon_edges, polygon_polygon_dist2, q, ratio,
    segment_polygon_dist2, segments_intersect, Point, Where, Q,
};
use super::layout::{degeneracies, independent_crossings, LevelDrawing};
use crate::error::{Error, Result};
use crate::model::ClInstance;

/// One failed drawing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawingViolation {
    pub condition: &'static str,
    pub detail: String,
}

impl fmt::Display for DrawingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.condition, self.detail)
    }
}

fn violation(condition: &'static str, detail: impl Into<String>) -> DrawingViolation {
    DrawingViolation {
        condition,
        detail: detail.into(),
    }
}

/// Region growth per hierarchy level: `ε = 2^-p` for the least `p ≥ 1`
/// with `√2 (D + 1) ε < d_min / 4`, where `d_min` is the smallest positive
/// clearance between the drawn objects.
pub fn region_epsilon(d_min2: &Q, max_depth: usize) -> Q {
    let k = q(max_depth as i64 + 1);
    let mut eps = ratio(1, 2);
    // 2 ((D+1) ε)^2 < d^2 / 16
    while q(32) * &k * &k * &eps * &eps >= *d_min2 {
        eps /= q(2);
    }
    eps
}

fn members(c: &ClInstance, i: usize) -> BTreeSet<String> {
    let g = c.graph();
    c.clusters()[i].members.iter().map(|&v| g.id(v).to_string()).collect()
}

/// Squared smallest positive clearance: point to point, point to a segment
/// not ending there, a non-member point or foreign segment to a cluster
/// hull, and hulls of unrelated clusters to each other.
fn clearance2(d: &LevelDrawing, c: &ClInstance, hulls: &[Vec<Point>]) -> Q {
    let mut best: Option<Q> = None;
    let mut take = |x: Q| {
        if x > Q::zero() && best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    };
    let pts: Vec<(&String, &Point)> = d.points.iter().collect();
    for (i, (_, a)) in pts.iter().enumerate() {
        for (_, b) in &pts[i + 1..] {
            take(dist2(a, b));
        }
    }
    let segs = d.segments();
    for (id, p) in &pts {
        for s in &segs {
            if s.0 != **id && s.1 != **id {
                take(point_segment_dist2(p, &d.points[&s.0], &d.points[&s.1]));
            }
        }
    }
    let sets: Vec<BTreeSet<String>> = (0..c.clusters().len()).map(|i| members(c, i)).collect();
    for (i, h) in hulls.iter().enumerate() {
        for (id, p) in &pts {
            if !sets[i].contains(*id) {
                take(point_polygon_dist2(p, h));
            }
        }
        for s in &segs {
            if !sets[i].contains(&s.0) && !sets[i].contains(&s.1) {
                take(segment_polygon_dist2(&d.points[&s.0], &d.points[&s.1], h));
            }
        }
        for (j, h2) in hulls.iter().enumerate().skip(i + 1) {
            if sets[i].is_disjoint(&sets[j]) {
                take(polygon_polygon_dist2(h, h2));
            }
        }
    }
    best.unwrap_or_else(Q::one)
}

/// Adds a convex region for every cluster: the hull of its members grown
/// by a square of half-side `ε (D − depth + 1)`. Fails if some cluster is
/// split on a level.
pub fn build_cluster_regions(d: &LevelDrawing, c: &ClInstance) -> Result<LevelDrawing> {
    let g = c.graph();
    for (i, cl) in c.clusters().iter().enumerate() {
        let set = members(c, i);
        for l in 0..g.level_count() {
            let mut row: Vec<(&Q, bool)> = g.level_sets()[l]
                .iter()
                .map(|&v| {
                    let p = d.point(g.id(v)).ok_or_else(|| Error::BadWitness(format!("no point for {}", g.id(v))));
                    p.map(|p| (&p.x, set.contains(g.id(v))))
                })
                .collect::<Result<_>>()?;
            row.sort();
            let inside: Vec<usize> = row.iter().enumerate().filter(|(_, r)| r.1).map(|(k, _)| k).collect();
            if let (Some(a), Some(b)) = (inside.first(), inside.last()) {
                if b - a + 1 != inside.len() {
                    return Err(Error::NotConsecutive {
                        cluster: cl.id.clone(),
                        level: l,
                    });
                }
            }
        }
    }
    let hulls: Vec<Vec<Point>> = (0..c.clusters().len())
        .map(|i| convex_hull(&members(c, i).iter().map(|id| d.points[id].clone()).collect::<Vec<_>>()))
        .collect();
    let eps = region_epsilon(&clearance2(d, c, &hulls), c.max_depth());
    let mut out = d.clone();
    out.regions.clear();
    for (cl, h) in c.clusters().iter().zip(&hulls) {
        let r = &eps * q((c.max_depth() - cl.depth + 1) as i64);
        let grown: Vec<Point> = h
            .iter()
            .flat_map(|p| {
                [(-1, -1), (1, -1), (1, 1), (-1, 1)]
                    .map(|(sx, sy)| Point::new(&p.x + &r * q(sx), &p.y + &r * q(sy)))
            })
            .collect();
        out.regions.insert(cl.id.clone(), convex_hull(&grown));
    }
    Ok(out)
}

/// Number of times polyline `line` crosses the boundary of `region`.
/// Collinear runs along the boundary come back as `None`.
fn boundary_crossings(line: &[Point], region: &[Point]) -> Option<usize> {
    for w in line.windows(2) {
        for (a, b) in polygon_edges(region) {
            let overlap = cross(&a, &b, &w[0]).is_zero()
                && cross(&a, &b, &w[1]).is_zero()
                && segments_intersect(&a, &b, &w[0], &w[1])
                && w[0] != w[1];
            if overlap {
                let shared: Vec<&Point> = [&w[0], &w[1], &a, &b]
                    .into_iter()
                    .filter(|p| super::geometry::on_segment(p, &w[0], &w[1]) && super::geometry::on_segment(p, &a, &b))
                    .collect();
                if shared.iter().any(|p| *p != shared[0]) {
                    return None;
                }
            }
        }
    }
    // inside intervals in global parameter s = segment index + t
    let mut parts: Vec<(Q, Q)> = Vec::new();
    for (i, w) in line.windows(2).enumerate() {
        if let Some((lo, hi)) = clip_segment(&w[0], &w[1], region) {
            let base = q(i as i64);
            let (lo, hi) = (&base + lo, &base + hi);
            match parts.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => parts.push((lo, hi)),
            }
        }
    }
    let end = q(line.len() as i64 - 1);
    Some(
        parts
            .iter()
            .map(|(lo, hi)| {
                if lo == hi {
                    1
                } else {
                    usize::from(!lo.is_zero()) + usize::from(*hi != end)
                }
            })
            .sum(),
    )
}

/// Checks a drawing of a cl-instance: level placement, planarity, and for
/// every cluster a strictly convex region that (1) holds exactly its
/// members, (2) is crossed at most once by each edge, (3) has a boundary
/// disjoint from every other region's, and (4) meets each level line in an
/// interval holding exactly its members on that level.
pub fn validate_cl_drawing(d: &LevelDrawing, c: &ClInstance) -> Vec<DrawingViolation> {
    let g = c.graph();
    let mut out = Vec::new();

    // (0) placement and shape of the edges
    for v in 0..g.vertex_count() {
        match d.point(g.id(v)) {
            None => out.push(violation("placement", format!("{} has no point", g.id(v)))),
            Some(p) if p.y != q(g.level(v) as i64) => {
                out.push(violation("placement", format!("{} is off level {}", g.id(v), g.level(v))))
            }
            _ => {}
        }
    }
    for id in d.points.keys() {
        if g.index_of(id).is_none() && !d.bends.contains(id) {
            out.push(violation("placement", format!("{id} is neither a vertex nor a bend")));
        }
    }
    let expected: BTreeSet<(String, String)> =
        g.edges().iter().map(|&(u, v)| (g.id(u).to_string(), g.id(v).to_string())).collect();
    let mut drawn = BTreeSet::new();
    for line in &d.edges {
        let (Some(a), Some(b)) = (line.first(), line.last()) else {
            out.push(violation("placement", "empty edge"));
            continue;
        };
        drawn.insert((a.clone(), b.clone()));
        if line.iter().any(|id| !d.points.contains_key(id)) {
            out.push(violation("placement", format!("edge {a}-{b} uses a missing point")));
            continue;
        }
        if line[1..line.len() - 1].iter().any(|id| !d.bends.contains(id)) {
            out.push(violation("placement", format!("edge {a}-{b} bends at a vertex")));
        }
        if line.windows(2).any(|w| d.points[&w[1]].y.clone() - d.points[&w[0]].y.clone() != Q::one()) {
            out.push(violation("placement", format!("edge {a}-{b} is not level-monotone")));
        }
    }
    if drawn != expected {
        out.push(violation("placement", "drawn edges differ from the graph's edges"));
    }
    if !out.is_empty() {
        return out;
    }
    for (s, t) in independent_crossings(d) {
        out.push(violation("crossing", format!("{}-{} crosses {}-{}", s.0, s.1, t.0, t.1)));
    }
    for (s, id) in degeneracies(d) {
        out.push(violation("degeneracy", format!("{}-{} passes through {id}", s.0, s.1)));
    }

    let clusters = c.clusters();
    for (i, cl) in clusters.iter().enumerate() {
        let Some(r) = d.regions.get(&cl.id) else {
            out.push(violation("region", format!("cluster {} has no region", cl.id)));
            continue;
        };
        if !is_strictly_convex(r) {
            out.push(violation("convexity", format!("region of {} is not strictly convex", cl.id)));
            continue;
        }
        let set = members(c, i);
        // (1)
        for v in 0..g.vertex_count() {
            let id = g.id(v);
            let at = locate(&d.points[id], r);
            if set.contains(id) && at != Where::Inside {
                out.push(violation("containment", format!("{id} not strictly inside {}", cl.id)));
            }
            if !set.contains(id) && at != Where::Outside {
                out.push(violation("containment", format!("{id} lies in {}", cl.id)));
            }
        }
        // (2)
        for line in &d.edges {
            let pts: Vec<Point> = line.iter().map(|id| d.points[id].clone()).collect();
            match boundary_crossings(&pts, r) {
                None => out.push(violation(
                    "edge-boundary",
                    format!("edge {}-{} runs along the boundary of {}", line[0], line[line.len() - 1], cl.id),
                )),
                Some(n) if n > 1 => out.push(violation(
                    "edge-boundary",
                    format!("edge {}-{} crosses the boundary of {} {n} times", line[0], line[line.len() - 1], cl.id),
                )),
                _ => {}
            }
        }
        // (4)
        for l in 0..g.level_count() {
            let y = q(l as i64);
            let here: BTreeSet<String> = g.level_sets()[l]
                .iter()
                .map(|&v| g.id(v).to_string())
                .filter(|id| set.contains(id))
                .collect();
            let seen: BTreeSet<String> = match horizontal_section(r, &y) {
                None => BTreeSet::new(),
                Some((lo, hi)) => g.level_sets()[l]
                    .iter()
                    .map(|&v| g.id(v).to_string())
                    .filter(|id| {
                        let x = &d.points[id].x;
                        lo <= *x && *x <= hi
                    })
                    .collect(),
            };
            if seen != here {
                out.push(violation(
                    "line-section",
                    format!("level {l} meets {} in {:?}, expected {:?}", cl.id, seen, here),
                ));
            }
        }
    }
    // (3)
    let named: Vec<(&String, &Vec<Point>)> = d.regions.iter().collect();
    for (i, (a, ra)) in named.iter().enumerate() {
        for (b, rb) in &named[i + 1..] {
            let touch = polygon_edges(ra)
                .iter()
                .any(|(p, r)| polygon_edges(rb).iter().any(|(s, t)| segments_intersect(p, r, s, t)));
            if touch {
                out.push(violation("boundary-intersection", format!("regions {a} and {b} meet")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::layout::{draw_from_betweenness_solution, draw_from_ordering};
    use crate::model::{LevelGraph, TreeNode};
    use crate::oracles::{BetweennessInstance, LevelOrdering};
    use crate::reductions::build_cl_hierarchy;

    fn small() -> ClInstance {
        let g = LevelGraph::new(
            [("a", 0), ("b", 0), ("c", 1), ("d", 1)],
            [("a", "c"), ("b", "d")],
        )
        .unwrap();
        let root = TreeNode::node(
            "root",
            vec![
                TreeNode::node("left", vec![TreeNode::leaf("a"), TreeNode::leaf("c")]),
                TreeNode::leaf("b"),
                TreeNode::leaf("d"),
            ],
        );
        ClInstance::new(g, root).unwrap()
    }

    fn ord(levels: &[&[&str]]) -> LevelOrdering {
        LevelOrdering::new(levels.iter().map(|l| l.iter().map(|s| s.to_string()).collect()).collect())
    }

    #[test]
    fn epsilon_halves_until_it_fits() {
        assert_eq!(region_epsilon(&q(1), 0), ratio(1, 8));
        assert!(region_epsilon(&q(1), 3) < ratio(1, 16));
    }

    #[test]
    fn small_drawing_validates() {
        let c = small();
        let d = draw_from_ordering(c.graph(), &ord(&[&["a", "b"], &["c", "d"]])).unwrap();
        let d = build_cluster_regions(&d, &c).unwrap();
        assert_eq!(d.regions.len(), 2);
        assert_eq!(validate_cl_drawing(&d, &c), vec![]);
    }

    #[test]
    fn moved_vertex_is_reported() {
        let c = small();
        let d = draw_from_ordering(c.graph(), &ord(&[&["a", "b"], &["c", "d"]])).unwrap();
        let mut d = build_cluster_regions(&d, &c).unwrap();
        d.points.get_mut("d").unwrap().x = q(1);
        let v = validate_cl_drawing(&d, &c);
        assert!(v.iter().any(|x| x.condition == "containment"));
    }

    #[test]
    fn split_cluster_is_refused() {
        let g = LevelGraph::new([("a", 0), ("b", 0), ("c", 0)], Vec::<(&str, &str)>::new()).unwrap();
        let root = TreeNode::node(
            "root",
            vec![TreeNode::node("ac", vec![TreeNode::leaf("a"), TreeNode::leaf("c")]), TreeNode::leaf("b")],
        );
        let c = ClInstance::new(g, root).unwrap();
        let d = draw_from_ordering(c.graph(), &ord(&[&["a", "b", "c"]])).unwrap();
        assert!(matches!(build_cluster_regions(&d, &c), Err(Error::NotConsecutive { .. })));
    }

    #[test]
    fn gadget_drawing_is_cl_planar() {
        for (n, triples, order) in [
            (3, vec![[1, 2, 3]], vec![1, 2, 3]),
            (4, vec![[1, 2, 3], [2, 3, 4]], vec![4, 3, 2, 1]),
            (5, vec![[1, 2, 3], [5, 1, 3]], vec![5, 1, 2, 3, 4]),
        ] {
            let b = BetweennessInstance::new(n, triples).unwrap();
            let (c, _) = build_cl_hierarchy(&b).unwrap();
            let d = draw_from_betweenness_solution(&b, &order).unwrap();
            let d = build_cluster_regions(&d, &c).unwrap();
            assert_eq!(validate_cl_drawing(&d, &c), vec![]);
        }
    }
}
