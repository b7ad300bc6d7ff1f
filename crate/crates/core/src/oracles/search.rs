//! Level-by-level backtracking over per-level permutations. Each level is
//! filled left to right, smallest index first, so the first witness found
//! is the lexicographically first valid ordering.

use std::collections::BTreeSet;

use super::{Budget, LevelOrdering};
use crate::error::{Error, Result};
use crate::model::{
    is_level_connected, is_proper, subdivide_to_proper, ClInstance, LevelGraph, TLevelInstance,
    VertexIdx,
};

/// A proper level graph plus, per level, sets of real vertices that must be
/// consecutive among the real vertices of that level.
pub(crate) struct OrderingProblem<'a> {
    graph: &'a LevelGraph,
    real: Vec<bool>,
    sets: Vec<Vec<Vec<VertexIdx>>>,
}

impl<'a> OrderingProblem<'a> {
    pub(crate) fn new(graph: &'a LevelGraph, real: Vec<bool>) -> Self {
        OrderingProblem {
            graph,
            real,
            sets: vec![Vec::new(); graph.level_count()],
        }
    }

    /// Adds a consecutiveness constraint; trivial sets are skipped.
    pub(crate) fn require_consecutive(&mut self, level: usize, set: Vec<VertexIdx>) {
        let level_real = self
            .graph
            .level_sets()
            .get(level)
            .map_or(0, |l| l.iter().filter(|&&v| self.real[v]).count());
        let mut set = set;
        set.sort_unstable();
        set.dedup();
        if set.len() >= 2 && set.len() < level_real && !self.sets[level].contains(&set) {
            self.sets[level].push(set);
        }
    }
}

struct SetState {
    size: usize,
    count: usize,
    last: usize,
}

struct Search<'p, 'a> {
    p: &'p OrderingProblem<'a>,
    levels: Vec<Vec<VertexIdx>>,
    down: Vec<Vec<VertexIdx>>,
    member_of: Vec<Vec<usize>>,
    pos: Vec<usize>,
    used: Vec<bool>,
    order: Vec<Vec<VertexIdx>>,
    nodes: u64,
    cap: u64,
}

impl<'p, 'a> Search<'p, 'a> {
    fn new(p: &'p OrderingProblem<'a>) -> Self {
        let g = p.graph;
        let n = g.vertex_count();
        let mut down = vec![Vec::new(); n];
        for &(u, v) in g.edges() {
            down[v].push(u);
        }
        let mut member_of = vec![Vec::new(); n];
        for sets in &p.sets {
            for (si, set) in sets.iter().enumerate() {
                for &v in set {
                    member_of[v].push(si);
                }
            }
        }
        Search {
            p,
            levels: g.level_sets(),
            down,
            member_of,
            pos: vec![usize::MAX; n],
            used: vec![false; n],
            order: vec![Vec::new(); g.level_count()],
            nodes: 0,
            cap: u64::MAX,
        }
    }

    fn level(&mut self, l: usize) -> Result<bool> {
        if l == self.levels.len() {
            return Ok(true);
        }
        let states: Vec<SetState> = self.p.sets[l]
            .iter()
            .map(|s| SetState {
                size: s.len(),
                count: 0,
                last: 0,
            })
            .collect();
        let mut st = LevelState {
            sets: states,
            real_placed: 0,
            max_down: 0,
        };
        self.slot(l, &mut st)
    }

    fn slot(&mut self, l: usize, st: &mut LevelState) -> Result<bool> {
        if self.order[l].len() == self.levels[l].len() {
            return self.level(l + 1);
        }
        for i in 0..self.levels[l].len() {
            let v = self.levels[l][i];
            if self.used[v] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::Budget {
                    what: "search nodes",
                    cap: self.cap,
                });
            }
            let min_down = self.down[v].iter().map(|&u| self.pos[u]).min();
            if min_down.is_some_and(|m| m < st.max_down) {
                continue;
            }
            let real = self.p.real[v];
            if real && !self.sets_accept(v, st) {
                continue;
            }
            let saved_max = st.max_down;
            let mut touched = Vec::new();
            if let Some(mx) = self.down[v].iter().map(|&u| self.pos[u]).max() {
                st.max_down = st.max_down.max(mx);
            }
            if real {
                for &si in &self.member_of[v] {
                    touched.push((si, st.sets[si].count, st.sets[si].last));
                    st.sets[si].count += 1;
                    st.sets[si].last = st.real_placed;
                }
                st.real_placed += 1;
            }
            self.used[v] = true;
            self.pos[v] = self.order[l].len();
            self.order[l].push(v);
            if self.slot(l, st)? {
                return Ok(true);
            }
            self.order[l].pop();
            self.pos[v] = usize::MAX;
            self.used[v] = false;
            if real {
                st.real_placed -= 1;
                for (si, c, last) in touched {
                    st.sets[si].count = c;
                    st.sets[si].last = last;
                }
            }
            st.max_down = saved_max;
        }
        Ok(false)
    }

    /// Placing real `v` next must not split a started set that `v` belongs
    /// to, nor close an unfinished set that `v` does not belong to.
    fn sets_accept(&self, v: VertexIdx, st: &LevelState) -> bool {
        let r = st.real_placed;
        let mine = &self.member_of[v];
        for (si, s) in st.sets.iter().enumerate() {
            let member = mine.contains(&si);
            if member {
                if s.count > 0 && s.last + 1 != r {
                    return false;
                }
            } else if s.count > 0 && s.count < s.size && s.last + 1 == r {
                return false;
            }
        }
        true
    }
}

struct LevelState {
    sets: Vec<SetState>,
    real_placed: usize,
    max_down: usize,
}

fn run(p: &OrderingProblem, budget: &Budget) -> Result<Option<LevelOrdering>> {
    let mut s = Search::new(p);
    s.cap = budget.max_search_nodes;
    if s.level(0)? {
        Ok(Some(LevelOrdering::from_indices(p.graph, &s.order)))
    } else {
        Ok(None)
    }
}

/// Exact T-level planarity by exhaustive search. Long edges are subdivided
/// first; the witness orders the subdivided graph, dummies included.
pub fn solve_tlp_exhaustive(t: &TLevelInstance, budget: &Budget) -> Result<Option<LevelOrdering>> {
    let (h, map) = subdivide_to_proper(t.graph());
    let real = (0..h.vertex_count()).map(|v| !map.is_dummy(v)).collect();
    let mut p = OrderingProblem::new(&h, real);
    for (l, tree) in t.trees().iter().enumerate() {
        for (_, leaves) in tree.internal_leaf_sets() {
            let set = leaves.iter().filter_map(|id| h.index_of(id)).collect();
            p.require_consecutive(l, set);
        }
    }
    run(&p, budget)
}

/// Exact cl-planarity for proper, level-connected instances.
pub fn solve_cl_levelconnected(c: &ClInstance, budget: &Budget) -> Result<Option<LevelOrdering>> {
    let gaps = is_level_connected(c)?;
    if !gaps.is_connected() {
        return Err(Error::NotLevelConnected(gaps.gaps.len()));
    }
    cluster_search(c, c.graph(), &vec![true; c.graph().vertex_count()], budget)
}

/// Searches for an ordering that is crossing-free and keeps every cluster
/// consecutive on every level. Necessary for cl-planarity on any instance,
/// exact on level-connected ones.
pub fn check_cl_necessary(c: &ClInstance, budget: &Budget) -> Result<Option<LevelOrdering>> {
    if is_proper(c.graph()) {
        return cluster_search(c, c.graph(), &vec![true; c.graph().vertex_count()], budget);
    }
    let (h, map) = subdivide_to_proper(c.graph());
    let real: Vec<bool> = (0..h.vertex_count()).map(|v| !map.is_dummy(v)).collect();
    cluster_search(c, &h, &real, budget)
}

fn cluster_search(
    c: &ClInstance,
    h: &LevelGraph,
    real: &[bool],
    budget: &Budget,
) -> Result<Option<LevelOrdering>> {
    let g = c.graph();
    let mut p = OrderingProblem::new(h, real.to_vec());
    for cluster in c.clusters() {
        let mut per_level: Vec<BTreeSet<VertexIdx>> = vec![BTreeSet::new(); h.level_count()];
        for &v in &cluster.members {
            let hv = h.index_of(g.id(v)).expect("subdivision keeps original ids");
            per_level[h.level(hv)].insert(hv);
        }
        for (l, set) in per_level.into_iter().enumerate() {
            p.require_consecutive(l, set.into_iter().collect());
        }
    }
    run(&p, budget)
}
