//! Simultaneous embedding with fixed edges for tiny instances whose common
//! graph is connected.
//!
//! The main oracle enumerates rotation systems of the common graph only and
//! asks, for each planar one, whether the private edges of each graph fit
//! into its faces as pairwise non-interleaving chords. Because the common
//! graph is connected and spanning, every private edge is a chord of one
//! face, so this is exact. The literal variant enumerates rotation systems
//! of both graphs and compares their common restrictions.

use std::collections::HashMap;

use super::betweenness::next_permutation;
use super::faces::{trace_faces, Faces, RotationSystem};
use super::Budget;
use crate::error::{Error, Result};
use crate::model::SefeInstance;

/// Rotation systems of `G₁` and `G₂`, over the instance's vertex and edge
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SefeWitness {
    pub g1: RotationSystem,
    pub g2: RotationSystem,
}

fn ends(s: &SefeInstance) -> Vec<(usize, usize)> {
    s.edges().iter().map(|e| (e.u, e.v)).collect()
}

fn incident(s: &SefeInstance, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); s.vertex_count()];
    for (i, e) in s.edges().iter().enumerate() {
        if keep(i) {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
    }
    inc
}

fn product_of(inc: &[Vec<usize>]) -> u64 {
    inc.iter().fold(1u64, |acc, l| {
        let f = (1..l.len().max(1) as u64).try_fold(1u64, |a, x| a.checked_mul(x));
        f.and_then(|f| acc.checked_mul(f)).unwrap_or(u64::MAX)
    })
}

/// `∏ (deg(v) − 1)!` over the common graph: the number of rotation systems
/// the main oracle visits.
pub fn rotation_product(s: &SefeInstance) -> u64 {
    product_of(&incident(s, |e| s.edges()[e].common()))
}

/// The larger of `∏ (deg(v) − 1)!` over `G₁` and over `G₂`: the work of the
/// literal enumeration.
pub fn naive_rotation_product(s: &SefeInstance) -> u64 {
    let p1 = product_of(&incident(s, |e| s.edges()[e].in1));
    let p2 = product_of(&incident(s, |e| s.edges()[e].in2));
    p1.max(p2)
}

/// The common embedding of a witness: `G₁`'s rotations restricted to the
/// common edges.
pub fn common_rotation(s: &SefeInstance, w: &SefeWitness) -> RotationSystem {
    w.g1.restricted(|e| s.edges()[e].common())
}

fn common_is_connected(s: &SefeInstance) -> bool {
    let n = s.vertex_count();
    if n == 0 {
        return true;
    }
    let inc = incident(s, |e| s.edges()[e].common());
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &e in &inc[v] {
            let w = s.edges()[e].other(v);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Iterates rotation systems: the first edge at each vertex stays fixed,
/// the rest run through all permutations.
struct Rotations {
    current: Vec<Vec<usize>>,
    done: bool,
}

impl Rotations {
    fn new(inc: Vec<Vec<usize>>) -> Self {
        Rotations {
            current: inc,
            done: false,
        }
    }

    fn advance(&mut self) {
        for r in self.current.iter_mut().rev() {
            if r.len() > 2 && next_permutation(&mut r[1..]) {
                return;
            }
            if r.len() > 2 {
                r[1..].sort_unstable();
            }
        }
        self.done = true;
    }
}

impl Iterator for Rotations {
    type Item = RotationSystem;

    fn next(&mut self) -> Option<RotationSystem> {
        if self.done {
            return None;
        }
        let out = RotationSystem::new(self.current.clone());
        self.advance();
        Some(out)
    }
}

/// Decides SEFE; on yes returns rotation systems of both graphs that are
/// planar and agree on the common graph.
pub fn solve_sefe_exhaustive(s: &SefeInstance, budget: &Budget) -> Result<Option<SefeWitness>> {
    if !common_is_connected(s) {
        return Err(Error::DisconnectedCommonGraph);
    }
    let cap = budget.max_rotation_product;
    if rotation_product(s) > cap {
        return Err(Error::Budget {
            what: "common-graph rotation product",
            cap,
        });
    }
    let ends = ends(s);
    let private1: Vec<usize> = (0..ends.len())
        .filter(|&e| s.edges()[e].in1 && !s.edges()[e].in2)
        .collect();
    let private2: Vec<usize> = (0..ends.len())
        .filter(|&e| s.edges()[e].in2 && !s.edges()[e].in1)
        .collect();
    let mut nodes = 0u64;
    for rot in Rotations::new(incident(s, |e| s.edges()[e].common())) {
        let faces = trace_faces(&rot, &ends)?;
        if !faces.is_planar() {
            continue;
        }
        let Some(g1) = extend(&rot, &faces, &private1, &ends, &mut nodes, budget)? else {
            continue;
        };
        let Some(g2) = extend(&rot, &faces, &private2, &ends, &mut nodes, budget)? else {
            continue;
        };
        return Ok(Some(SefeWitness { g1, g2 }));
    }
    Ok(None)
}

/// Completes a fixed common embedding with both graphs' private edges, if
/// possible.
pub fn extend_common_embedding(
    s: &SefeInstance,
    common: &RotationSystem,
    budget: &Budget,
) -> Result<Option<SefeWitness>> {
    let ends = ends(s);
    let faces = trace_faces(common, &ends)?;
    if !faces.is_planar() {
        return Ok(None);
    }
    let mut nodes = 0u64;
    let private = |one: bool| -> Vec<usize> {
        (0..ends.len())
            .filter(|&e| {
                let x = &s.edges()[e];
                !x.common() && if one { x.in1 } else { x.in2 }
            })
            .collect()
    };
    let Some(g1) = extend(common, &faces, &private(true), &ends, &mut nodes, budget)? else {
        return Ok(None);
    };
    let Some(g2) = extend(common, &faces, &private(false), &ends, &mut nodes, budget)? else {
        return Ok(None);
    };
    Ok(Some(SefeWitness { g1, g2 }))
}

#[derive(Clone, Copy)]
struct Chord {
    face: usize,
    a: usize,
    b: usize,
    edge: usize,
}

fn interleave(len: usize, x: (usize, usize), y: (usize, usize)) -> bool {
    let _ = len;
    if x.0 == y.0 || x.0 == y.1 || x.1 == y.0 || x.1 == y.1 {
        return false;
    }
    let (lo, hi) = (x.0.min(x.1), x.0.max(x.1));
    let inside = |p: usize| lo < p && p < hi;
    inside(y.0) != inside(y.1)
}

/// Places every private edge as a chord of some face of the common
/// embedding; `None` if no crossing-free placement exists.
fn extend(
    common: &RotationSystem,
    faces: &Faces,
    private: &[usize],
    ends: &[(usize, usize)],
    nodes: &mut u64,
    budget: &Budget,
) -> Result<Option<RotationSystem>> {
    let mut occ: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (f, face) in faces.faces.iter().enumerate() {
        for (i, d) in face.iter().enumerate() {
            occ.entry(d.from).or_default().push((f, i));
        }
    }
    let mut placed: Vec<Chord> = Vec::new();
    if !place(0, private, ends, faces, &occ, &mut placed, nodes, budget.max_search_nodes)? {
        return Ok(None);
    }
    let rot = insert_chords(common, faces, &placed);
    let f = trace_faces(&rot, ends)?;
    if !f.is_planar() {
        return Err(Error::BadWitness("chord insertion broke planarity".into()));
    }
    Ok(Some(rot))
}

#[allow(clippy::too_many_arguments)]
fn place(
    k: usize,
    private: &[usize],
    ends: &[(usize, usize)],
    faces: &Faces,
    occ: &HashMap<usize, Vec<(usize, usize)>>,
    placed: &mut Vec<Chord>,
    nodes: &mut u64,
    cap: u64,
) -> Result<bool> {
    let Some(&e) = private.get(k) else {
        return Ok(true);
    };
    let (u, v) = ends[e];
    let none = Vec::new();
    let (ou, ov) = (occ.get(&u).unwrap_or(&none), occ.get(&v).unwrap_or(&none));
    for &(f, a) in ou {
        for &(f2, b) in ov {
            if f != f2 {
                continue;
            }
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::Budget {
                    what: "chord placement nodes",
                    cap,
                });
            }
            let len = faces.faces[f].len();
            if placed
                .iter()
                .any(|c| c.face == f && interleave(len, (c.a, c.b), (a, b)))
            {
                continue;
            }
            placed.push(Chord { face: f, a, b, edge: e });
            if place(k + 1, private, ends, faces, occ, placed, nodes, cap)? {
                return Ok(true);
            }
            placed.pop();
        }
    }
    Ok(false)
}

fn insert_chords(common: &RotationSystem, faces: &Faces, chords: &[Chord]) -> RotationSystem {
    // (face, position) -> [(offset, tie, edge)]
    let mut at: HashMap<(usize, usize), Vec<(usize, i64, usize)>> = HashMap::new();
    for c in chords {
        let len = faces.faces[c.face].len();
        let tie = |p: usize, q: usize| if p < q { c.edge as i64 } else { -(c.edge as i64) };
        at.entry((c.face, c.a))
            .or_default()
            .push(((c.b + len - c.a) % len, tie(c.a, c.b), c.edge));
        at.entry((c.face, c.b))
            .or_default()
            .push(((c.a + len - c.b) % len, tie(c.b, c.a), c.edge));
    }
    let mut rot = common.clone();
    let mut keys: Vec<_> = at.keys().copied().collect();
    keys.sort_unstable();
    for (f, p) in keys {
        let mut list = at.remove(&(f, p)).unwrap_or_default();
        list.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let face = &faces.faces[f];
        let v = face[p].from;
        let e_in = face[(p + face.len() - 1) % face.len()].edge;
        let r = &mut rot.rotations[v];
        let at_in = r.iter().position(|&e| e == e_in).expect("corner edge in rotation");
        for (k, (_, _, e)) in list.into_iter().enumerate() {
            r.insert(at_in + 1 + k, e);
        }
    }
    rot
}

/// The literal oracle: every rotation system of `G₁` against every one of
/// `G₂`. Only usable on the smallest instances.
pub fn solve_sefe_naive(s: &SefeInstance, budget: &Budget) -> Result<Option<SefeWitness>> {
    if !common_is_connected(s) {
        return Err(Error::DisconnectedCommonGraph);
    }
    let cap = budget.max_rotation_product;
    if naive_rotation_product(s) > cap {
        return Err(Error::Budget {
            what: "rotation product",
            cap,
        });
    }
    let ends = ends(s);
    let common = |e: usize| s.edges()[e].common();
    let canonical = |r: &RotationSystem| -> Vec<Vec<usize>> {
        r.restricted(common)
            .rotations
            .into_iter()
            .map(|mut l| {
                if let Some(m) = (0..l.len()).min_by_key(|&i| l[i]) {
                    l.rotate_left(m);
                }
                l
            })
            .collect()
    };
    let mut first: HashMap<Vec<Vec<usize>>, RotationSystem> = HashMap::new();
    for r in Rotations::new(incident(s, |e| s.edges()[e].in1)) {
        if trace_faces(&r, &ends)?.is_planar() {
            first.entry(canonical(&r)).or_insert(r);
        }
    }
    for r in Rotations::new(incident(s, |e| s.edges()[e].in2)) {
        if !trace_faces(&r, &ends)?.is_planar() {
            continue;
        }
        if let Some(g1) = first.get(&canonical(&r)) {
            return Ok(Some(SefeWitness {
                g1: g1.clone(),
                g2: r,
            }));
        }
    }
    Ok(None)
}

/// Re-checks a witness: both rotation systems consistent, planar, covering
/// their graph's edges, and equal on the common graph.
pub fn witness_is_valid(s: &SefeInstance, w: &SefeWitness) -> bool {
    let ends = ends(s);
    let covers = |r: &RotationSystem, which: u8| {
        let want = incident(s, |e| {
            let x = s.edges()[e];
            if which == 1 {
                x.in1
            } else {
                x.in2
            }
        });
        r.rotations.len() == want.len()
            && r.rotations.iter().zip(&want).all(|(a, b)| {
                let mut a = a.clone();
                a.sort_unstable();
                a == *b
            })
    };
    let planar = |r: &RotationSystem| trace_faces(r, &ends).is_ok_and(|f| f.is_planar());
    let c1 = w.g1.restricted(|e| s.edges()[e].common());
    let c2 = w.g2.restricted(|e| s.edges()[e].common());
    covers(&w.g1, 1)
        && covers(&w.g2, 2)
        && planar(&w.g1)
        && planar(&w.g2)
        && c1
            .rotations
            .iter()
            .zip(&c2.rotations)
            .all(|(a, b)| RotationSystem::cyclically_equal(a, b))
}
