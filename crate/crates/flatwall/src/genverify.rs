//! Instance generators and an exhaustive clique-minor oracle.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{chain_from_strip, Chain, ChainError};
use crate::classify::core_wall;
use crate::graph::{Graph, MinorModel};
use crate::planar::is_planar;
use crate::wall::{identity_wall, WallError};

#[derive(Error, Debug)]
pub enum GenError {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("contradictory plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Wall(#[from] WallError),
}

/// Grid with crossing diagonals in a sparse set of cells.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowerBound {
    pub graph: Graph,
    /// Vertices per grid side; `v(i, j)` has id `i * side + j`.
    pub side: usize,
    pub wp: usize,
    pub tp: usize,
    /// Top-left corners of the cells that received both diagonals.
    pub cells: Vec<(usize, usize)>,
}

/// Grid of side `wp * tp - 1` with both diagonals added in the cell whose top
/// left corner is `v(i wp, j wp)` for `0 <= i, j < tp`.
pub fn gen_lowerbound(wp: usize, tp: usize) -> Result<LowerBound, GenError> {
    if tp == 0 {
        return Err(GenError::Param("need at least one cell per side".into()));
    }
    if wp * tp < 3 {
        return Err(GenError::Param(format!("grid side {} is below 2", (wp * tp).saturating_sub(1))));
    }
    let side = wp * tp - 1;
    let mut graph = Graph::grid(side, side);
    let mut cells = Vec::new();
    for i in 0..tp {
        for j in 0..tp {
            let (r, c) = (i * wp, j * wp);
            if r + 1 >= side || c + 1 >= side {
                return Err(GenError::Param(format!("cell ({r},{c}) does not fit a grid of side {side}")));
            }
            if wp < 3 && (i > 0 || j > 0) {
                return Err(GenError::Param(format!("cell ({r},{c}) touches its neighbour for spacing {wp}")));
            }
            let v = |a: usize, b: usize| a * side + b;
            graph.add_edge(v(r, c), v(r + 1, c + 1));
            graph.add_edge(v(r + 1, c), v(r, c + 1));
            cells.push((r, c));
        }
    }
    Ok(LowerBound { graph, side, wp, tp, cells })
}

/// Lower-bound instance for target wall size `w` and clique size `t`:
/// `w` is rounded down to a multiple of 4, then `wp = w/4 - 8`, `tp = t/30`.
pub fn gen_lowerbound_for(w: usize, t: usize) -> Result<LowerBound, GenError> {
    let wp = (w / 4)
        .checked_sub(8)
        .filter(|&x| x >= 3)
        .ok_or_else(|| GenError::Param(format!("w = {w} gives cell spacing below 3")))?;
    let tp = t / 30;
    if tp == 0 {
        return Err(GenError::Param(format!("t = {t} gives no cells")));
    }
    gen_lowerbound(wp, tp)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorSearch {
    Found(MinorModel),
    /// Exhaustive: no model exists.
    Absent,
    BudgetExceeded {
        nodes: usize,
    },
}

struct Work {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    sets: Vec<Vec<usize>>,
}

impl Work {
    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.alive[v])
    }

    fn m(&self) -> usize {
        self.live().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    fn remove(&mut self, v: usize) {
        for u in std::mem::take(&mut self.adj[v]) {
            self.adj[u].remove(&v);
        }
        self.alive[v] = false;
    }

    /// Contracts `v` into `u`.
    fn contract(&mut self, u: usize, v: usize) {
        let nb = std::mem::take(&mut self.adj[v]);
        for w in nb {
            self.adj[w].remove(&v);
            if w != u {
                self.adj[w].insert(u);
                self.adj[u].insert(w);
            }
        }
        self.alive[v] = false;
        let moved = std::mem::take(&mut self.sets[v]);
        self.sets[u].extend(moved);
    }

    /// Deletes vertices of degree at most 1 (`t >= 3`) and suppresses degree 2
    /// vertices (`t >= 4`); neither changes whether `K_t` is a minor.
    fn reduce(&mut self, t: usize) {
        loop {
            let pick = self.live().find(|&v| (t >= 3 && self.adj[v].len() <= 1) || (t >= 4 && self.adj[v].len() == 2));
            match pick {
                None => return,
                Some(v) if self.adj[v].len() <= 1 => self.remove(v),
                Some(v) => {
                    let a = *self.adj[v].iter().next().unwrap();
                    self.contract(a, v);
                }
            }
        }
    }

    fn key(&self) -> Vec<usize> {
        let mut k = Vec::new();
        for v in self.live() {
            k.push(usize::MAX - v);
            k.extend(self.adj[v].iter().filter(|&&w| w > v));
        }
        k
    }

    fn compact(&self) -> Graph {
        let ids: Vec<usize> = self.live().collect();
        let mut g = Graph::new(ids.len());
        for (a, &v) in ids.iter().enumerate() {
            for w in &self.adj[v] {
                if let Ok(b) = ids.binary_search(w) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    fn clique(&self, t: usize) -> Option<Vec<usize>> {
        fn grow(w: &Work, t: usize, cur: &mut Vec<usize>, cand: Vec<usize>) -> bool {
            if cur.len() == t {
                return true;
            }
            for (i, &v) in cand.iter().enumerate() {
                if cur.len() + cand.len() - i < t {
                    return false;
                }
                let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|u| w.adj[v].contains(u)).collect();
                cur.push(v);
                if grow(w, t, cur, next) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        let cand: Vec<usize> = self.live().filter(|&v| self.adj[v].len() + 1 >= t).collect();
        let mut cur = Vec::new();
        grow(self, t, &mut cur, cand).then_some(cur)
    }

    fn clone_state(&self) -> Work {
        Work { adj: self.adj.clone(), alive: self.alive.clone(), sets: self.sets.clone() }
    }
}

struct Exceeded;

fn search(
    w: &mut Work,
    t: usize,
    seen: &mut HashSet<Vec<usize>>,
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Vec<Vec<usize>>>, Exceeded> {
    w.reduce(t);
    let n = w.live().count();
    if n < t || w.m() < t * (t - 1) / 2 {
        return Ok(None);
    }
    if let Some(c) = w.clique(t) {
        return Ok(Some(c.into_iter().map(|v| w.sets[v].clone()).collect()));
    }
    if n == t || (t >= 5 && is_planar(&w.compact())) {
        return Ok(None);
    }
    if !seen.insert(w.key()) {
        return Ok(None);
    }
    *nodes += 1;
    if *nodes > budget {
        return Err(Exceeded);
    }
    let deg = |v: usize| w.adj[v].len();
    let u = w.live().filter(|&v| deg(v) > 0).min_by_key(|&v| deg(v)).expect("edges remain");
    let v = *w.adj[u].iter().min_by_key(|&&x| deg(x)).unwrap();
    let mut c = w.clone_state();
    c.contract(u.min(v), u.max(v));
    if let Some(found) = search(&mut c, t, seen, nodes, budget)? {
        return Ok(Some(found));
    }
    w.adj[u].remove(&v);
    w.adj[v].remove(&u);
    search(w, t, seen, nodes, budget)
}

/// Exhaustive `K_t` minor search by edge deletion/contraction with memoised
/// states. `budget` caps the number of branching nodes.
pub fn brute_force_minor(g: &Graph, t: usize, budget: usize) -> MinorSearch {
    let done = |sets: Vec<Vec<usize>>| {
        let mut m = MinorModel { pattern: Graph::complete(t), branch_sets: sets, edge_witness: Vec::new() };
        m.branch_sets.iter_mut().for_each(|s| s.sort_unstable());
        m.fill_witnesses(g);
        MinorSearch::Found(m)
    };
    if t == 0 {
        return done(Vec::new());
    }
    if t <= 2 {
        return match (t, g.edges().next()) {
            (1, _) if g.n() > 0 => done(vec![vec![0]]),
            (2, Some((u, v))) => done(vec![vec![u], vec![v]]),
            _ => MinorSearch::Absent,
        };
    }
    let mut w = Work {
        adj: (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect(),
        alive: vec![true; g.n()],
        sets: (0..g.n()).map(|v| vec![v]).collect(),
    };
    let mut nodes = 0;
    match search(&mut w, t, &mut HashSet::new(), &mut nodes, budget) {
        Ok(Some(sets)) => done(sets),
        Ok(None) => MinorSearch::Absent,
        Err(Exceeded) => MinorSearch::BudgetExceeded { nodes },
    }
}

/// Wall types for the interior walls of a planted chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantPlan {
    pub z: usize,
    pub tau: usize,
    /// Type (1..=4) of walls `1..=types.len()`; the chain has two more walls.
    pub types: Vec<u8>,
}

impl PlantPlan {
    pub fn walls(&self) -> usize {
        self.types.len() + 2
    }
}

/// Random plan over `n` interior walls; walls of height `z` with core depth
/// `tau`. Type 2 is left out when the chain is too short to hold it.
pub fn random_plan(seed: u64, n: usize, z: usize, tau: usize) -> PlantPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: &[u8] = if n >= 2 { &[1, 2, 3, 4] } else { &[1, 3, 4] };
    let types = (0..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    PlantPlan { z, tau, types }
}

/// Chain of identity basic walls realising `plan`: type 1 gets a chord from
/// its core interior to the top row of the next wall, type 2 to the top row
/// of a wall two steps away, type 3 a chord across its core, type 4 nothing.
pub fn gen_planted_chain(plan: &PlantPlan) -> Result<(Graph, Chain), GenError> {
    let (z, tau) = (plan.z, plan.tau);
    if plan.types.is_empty() {
        return Err(GenError::Plan("no interior walls".into()));
    }
    if tau == 0 || 2 * tau + 1 > z {
        return Err(GenError::Plan(format!("core depth {tau} leaves no interior in height {z}")));
    }
    let n = plan.walls();
    let (mut g, w) = identity_wall(z, z * n)?;
    let chain = chain_from_strip(&g, &w, n, z, 0)?;
    let mut used = vec![0usize; n];
    let ring = |k: usize, used: &mut Vec<usize>| -> Result<usize, GenError> {
        let b = &chain.walls[k];
        let v = (2..2 * b.r())
            .filter_map(|j| b.at(1, j))
            .nth(used[k])
            .ok_or_else(|| GenError::Plan(format!("top row of wall {k} is full")))?;
        used[k] += 1;
        Ok(v)
    };
    for (q, &ty) in plan.types.iter().enumerate() {
        let k = q + 1;
        let b = &chain.walls[k];
        let cols = 2 * b.r();
        let mid = z.div_ceil(2);
        match ty {
            4 => {}
            3 => {
                if z < 2 * tau + 2 {
                    return Err(GenError::Plan(format!("wall {k}: one interior row cannot hold a cross")));
                }
                let u = (4..cols).find_map(|j| b.at(tau + 1, j)).ok_or_else(|| GenError::Plan(format!("wall {k} too narrow")))?;
                let v = (4..cols - 3)
                    .rev()
                    .find_map(|j| b.at(z - tau, j))
                    .ok_or_else(|| GenError::Plan(format!("wall {k} too narrow")))?;
                if g.has_edge(u, v) || u == v {
                    return Err(GenError::Plan(format!("wall {k} too narrow for a cross")));
                }
                g.add_edge(u, v);
            }
            1 | 2 => {
                let target = if ty == 1 {
                    k + 1
                } else if k + 2 < n {
                    k + 2
                } else if k >= 2 {
                    k - 2
                } else {
                    return Err(GenError::Plan(format!("wall {k}: no wall two steps away")));
                };
                let core = core_wall(&chain, k, tau).map_err(|e| GenError::Plan(e.to_string()))?;
                let interior = core.interior_mask(g.n());
                let u = (3..cols)
                    .filter_map(|j| b.at(mid, j))
                    .find(|&v| interior[v])
                    .ok_or_else(|| GenError::Plan(format!("wall {k} has no core interior")))?;
                let v = ring(target, &mut used)?;
                g.add_edge(u, v);
            }
            other => return Err(GenError::Plan(format!("wall {k}: unknown type {other}"))),
        }
    }
    Ok((g, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::graph::validate_minor_model;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn lowerbound_degrees() {
        let lb = gen_lowerbound(3, 2).unwrap();
        assert_eq!(lb.side, 5);
        assert_eq!(lb.cells, vec![(0, 0), (0, 3), (3, 0), (3, 3)]);
        assert_eq!(lb.graph.max_degree(), 5);
        assert_eq!(lb.graph.m(), 2 * 5 * 4 + 8);

        let one = gen_lowerbound(4, 1).unwrap();
        assert_eq!(one.side, 3);
        assert_eq!(one.graph.m(), Graph::grid(3, 3).m() + 2);
        let corners = [0, 2, 6, 8];
        assert!(corners.iter().all(|&v| one.graph.degree(v) <= 5));
        assert_eq!(one.graph.degree(4), 5);
    }

    #[test]
    fn side_two_grid_is_a_single_k4() {
        let lb = gen_lowerbound(3, 1).unwrap();
        assert_eq!(lb.graph, Graph::complete(4));
        assert_eq!(lb.graph.max_degree(), 3);
    }

    #[test]
    fn lowerbound_parameters() {
        assert!(matches!(gen_lowerbound(3, 0), Err(GenError::Param(_))));
        assert!(matches!(gen_lowerbound(2, 2), Err(GenError::Param(_))));
        assert!(matches!(gen_lowerbound(1, 1), Err(GenError::Param(_))));
        let lb = gen_lowerbound_for(47, 61).unwrap();
        assert_eq!((lb.wp, lb.tp), (3, 2));
        assert!(gen_lowerbound_for(43, 60).is_err());
        assert!(gen_lowerbound_for(48, 29).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        let k4 = Graph::complete(4);
        match brute_force_minor(&k4, 4, 100) {
            MinorSearch::Found(m) => {
                assert!(validate_minor_model(&k4, &m).unwrap().is_pass());
                assert!(m.branch_sets.iter().all(|s| s.len() == 1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(brute_force_minor(&Graph::cycle(5), 4, 100), MinorSearch::Absent);
        assert!(matches!(brute_force_minor(&Graph::cycle(5), 3, 100), MinorSearch::Found(_)));
        assert_eq!(brute_force_minor(&Graph::path(4), 3, 100), MinorSearch::Absent);
        let p = petersen();
        match brute_force_minor(&p, 5, 10_000) {
            MinorSearch::Found(m) => assert!(validate_minor_model(&p, &m).unwrap().is_pass()),
            other => panic!("{other:?}"),
        }
        assert_eq!(brute_force_minor(&p, 6, 100_000), MinorSearch::Absent);
    }

    #[test]
    fn oracle_reports_budget() {
        let p = petersen();
        assert!(matches!(brute_force_minor(&p, 5, 0), MinorSearch::BudgetExceeded { .. }));
    }

    #[test]
    fn planted_round_trip() {
        let plan = PlantPlan { z: 10, tau: 4, types: vec![1, 2, 3, 4, 2, 1] };
        let (g, c) = gen_planted_chain(&plan).unwrap();
        for (q, &ty) in plan.types.iter().enumerate() {
            assert_eq!(classify(&g, &c, q + 1, plan.tau).unwrap().number(), ty, "wall {}", q + 1);
        }
    }

    #[test]
    fn contradictory_plans() {
        let bad = |z, tau, types: Vec<u8>| matches!(gen_planted_chain(&PlantPlan { z, tau, types }), Err(GenError::Plan(_)));
        assert!(bad(10, 4, vec![]));
        assert!(bad(10, 4, vec![5]));
        assert!(bad(10, 5, vec![4]));
        assert!(bad(9, 4, vec![3]));
        assert!(bad(10, 4, vec![2]));
    }
}
