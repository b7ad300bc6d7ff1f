use crate::error::{Error, Result};

/// Cyclic counter-clockwise order of incident edge ids around every vertex.
/// Edge ids index an external endpoint table; an edge absent from every
/// list is not part of the embedded graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RotationSystem {
    pub rotations: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn new(rotations: Vec<Vec<usize>>) -> Self {
        RotationSystem { rotations }
    }

    /// Every cyclic order reversed: the mirror embedding.
    pub fn reversed(&self) -> Self {
        RotationSystem {
            rotations: self
                .rotations
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Restriction to the edges accepted by `keep`, cyclic order preserved.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        RotationSystem {
            rotations: self
                .rotations
                .iter()
                .map(|r| r.iter().copied().filter(|&e| keep(e)).collect())
                .collect(),
        }
    }

    /// Same cyclic sequence, up to rotation of the starting point.
    pub fn cyclically_equal(a: &[usize], b: &[usize]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..b.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]))
    }
}

/// A dart is an edge traversed away from `from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: usize,
    pub from: usize,
}

/// Facial walks of a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Faces {
    /// Each face as its cyclic dart sequence; dart `i` leaves the vertex of
    /// corner `i`, whose incoming edge is the edge of dart `i - 1`.
    pub faces: Vec<Vec<Dart>>,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub isolated: usize,
}

impl Faces {
    /// Euler's formula per component; a lone vertex is one face on its own.
    pub fn is_planar(&self) -> bool {
        self.vertices as i64 - self.edges as i64 + (self.faces.len() + self.isolated) as i64
            == 2 * self.components as i64
    }
}

/// Traces the faces: after arriving at `v` along `e`, leave along the
/// successor of `e` in the rotation of `v`.
pub fn trace_faces(rot: &RotationSystem, ends: &[(usize, usize)]) -> Result<Faces> {
    let n = rot.rotations.len();
    let mut slot: Vec<[Option<(usize, usize)>; 2]> = vec![[None, None]; ends.len()];
    let mut active = Vec::new();
    for (v, r) in rot.rotations.iter().enumerate() {
        for (i, &e) in r.iter().enumerate() {
            let Some(&(a, b)) = ends.get(e) else {
                return Err(Error::BadWitness(format!("unknown edge {e} at vertex {v}")));
            };
            let side = if v == a {
                0
            } else if v == b {
                1
            } else {
                return Err(Error::BadWitness(format!("edge {e} listed at non-endpoint {v}")));
            };
            if slot[e][side].is_some() || a == b {
                return Err(Error::BadWitness(format!("edge {e} listed twice at {v}")));
            }
            slot[e][side] = Some((v, i));
        }
    }
    for (e, s) in slot.iter().enumerate() {
        match s {
            [Some(_), Some(_)] => active.push(e),
            [None, None] => {}
            _ => return Err(Error::BadWitness(format!("edge {e} listed at one endpoint only"))),
        }
    }
    let head = |d: Dart| {
        let (a, b) = ends[d.edge];
        if d.from == a {
            b
        } else {
            a
        }
    };
    let index_at = |e: usize, v: usize| {
        let (a, _) = ends[e];
        slot[e][if v == a { 0 } else { 1 }].expect("active edge").1
    };
    let mut seen = vec![[false; 2]; ends.len()];
    let mut faces = Vec::new();
    for &e in &active {
        for side in 0..2 {
            if seen[e][side] {
                continue;
            }
            let from = if side == 0 { ends[e].0 } else { ends[e].1 };
            let start = Dart { edge: e, from };
            let mut face = Vec::new();
            let mut d = start;
            loop {
                let s = if d.from == ends[d.edge].0 { 0 } else { 1 };
                seen[d.edge][s] = true;
                face.push(d);
                let v = head(d);
                let r = &rot.rotations[v];
                let next = r[(index_at(d.edge, v) + 1) % r.len()];
                d = Dart { edge: next, from: v };
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
    }

    // components over vertices, via active edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in &active {
        let (a, b) = ends[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
    let isolated = rot.rotations.iter().filter(|r| r.is_empty()).count();
    Ok(Faces {
        faces,
        vertices: n,
        edges: active.len(),
        components,
        isolated,
    })
}

/// Convenience: the rotation system is consistent and satisfies Euler.
pub fn is_planar_rotation(rot: &RotationSystem, ends: &[(usize, usize)]) -> bool {
    trace_faces(rot, ends).is_ok_and(|f| f.is_planar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::betweenness::next_permutation;

    fn k4() -> Vec<(usize, usize)> {
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    }

    fn incident(ends: &[(usize, usize)], v: usize) -> Vec<usize> {
        (0..ends.len())
            .filter(|&e| ends[e].0 == v || ends[e].1 == v)
            .collect()
    }

    #[test]
    fn triangle_has_two_faces() {
        let ends = vec![(0, 1), (1, 2), (0, 2)];
        let rot = RotationSystem::new(vec![vec![0, 2], vec![0, 1], vec![1, 2]]);
        let f = trace_faces(&rot, &ends).unwrap();
        assert_eq!(f.faces.len(), 2);
        assert!(f.is_planar());
    }

    #[test]
    fn k4_has_exactly_two_planar_rotation_systems() {
        let ends = k4();
        // fix the first edge at each vertex; permute the other two
        let mut planar = 0;
        let mut total = 0;
        let bases: Vec<Vec<usize>> = (0..4).map(|v| incident(&ends, v)).collect();
        for mask in 0..16u32 {
            let rotations = bases
                .iter()
                .enumerate()
                .map(|(v, b)| {
                    let mut r = b.clone();
                    if mask >> v & 1 == 1 {
                        r.swap(1, 2);
                    }
                    r
                })
                .collect();
            let f = trace_faces(&RotationSystem::new(rotations), &ends).unwrap();
            total += 1;
            if f.is_planar() {
                assert_eq!(f.faces.len(), 4);
                planar += 1;
            } else {
                assert_eq!(f.faces.len(), 2);
            }
        }
        assert_eq!((planar, total), (2, 16));
    }

    #[test]
    fn k33_is_never_planar() {
        let mut ends = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                ends.push((a, b));
            }
        }
        let bases: Vec<Vec<usize>> = (0..6).map(|v| incident(&ends, v)).collect();
        for mask in 0..64u32 {
            let rotations = bases
                .iter()
                .enumerate()
                .map(|(v, b)| {
                    let mut r = b.clone();
                    if mask >> v & 1 == 1 {
                        r.swap(1, 2);
                    }
                    r
                })
                .collect();
            assert!(!is_planar_rotation(&RotationSystem::new(rotations), &ends));
        }
    }

    #[test]
    fn isolated_vertex_and_forest_are_planar() {
        let ends = vec![(0, 1)];
        let rot = RotationSystem::new(vec![vec![0], vec![0], vec![]]);
        assert!(is_planar_rotation(&rot, &ends));
    }

    #[test]
    fn mirror_keeps_planarity() {
        let ends = k4();
        let mut bases: Vec<Vec<usize>> = (0..4).map(|v| incident(&ends, v)).collect();
        loop {
            let rot = RotationSystem::new(bases.clone());
            assert_eq!(
                is_planar_rotation(&rot, &ends),
                is_planar_rotation(&rot.reversed(), &ends)
            );
            if !next_permutation(&mut bases[0]) {
                break;
            }
        }
    }

    #[test]
    fn inconsistent_rotation_is_rejected() {
        let ends = vec![(0, 1)];
        let rot = RotationSystem::new(vec![vec![0], vec![]]);
        assert!(trace_faces(&rot, &ends).is_err());
    }
}
