//! Two disjoint paths, C-crosses, reductions along separations of order at
//! most three, and C-flat decompositions with a checked plane supergraph.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Separation, SeparationError};
use crate::planar::{embed, same_cycle, Embedding};

/// Search nodes allowed to the backtracking stage unless a caller says otherwise.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Order-3 reductions are attempted while at most this many vertices remain.
pub const ORDER3_LIMIT: usize = 300;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TdpError {
    #[error("terminals must be four distinct vertices")]
    Terminals,
    #[error("vertex {0} out of range")]
    Vertex(usize),
    #[error("not a cycle: {0}")]
    NotCycle(String),
    #[error("search budget of {0} nodes exhausted")]
    Budget(u64),
    #[error("neither a cross nor a flat certificate was found")]
    Undecided,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("separation is invalid: {0}")]
    Separation(#[from] SeparationError),
    #[error("separation has order {0}, at most 3 allowed")]
    Order(usize),
    #[error("protected vertex {0} is not on side y")]
    Protected(usize),
    #[error("separator vertices are not connected inside side x")]
    NotConnected,
}

pub type PathPair = (Vec<usize>, Vec<usize>);

/// Whether `p1` (s1..t1) and `p2` (s2..t2) are vertex-disjoint paths of `g`.
pub fn check_two_paths(g: &Graph, p1: &[usize], p2: &[usize], terms: [usize; 4]) -> bool {
    let [s1, t1, s2, t2] = terms;
    if !g.is_path(p1) || !g.is_path(p2) {
        return false;
    }
    if p1[0] != s1 || *p1.last().unwrap() != t1 || p2[0] != s2 || *p2.last().unwrap() != t2 {
        return false;
    }
    let a: HashSet<_> = p1.iter().collect();
    p2.iter().all(|v| !a.contains(v))
}

fn check_terms(g: &Graph, terms: [usize; 4]) -> Result<(), TdpError> {
    if let Some(&v) = terms.iter().find(|&&v| v >= g.n()) {
        return Err(TdpError::Vertex(v));
    }
    let s: HashSet<_> = terms.iter().collect();
    if s.len() != 4 {
        return Err(TdpError::Terminals);
    }
    Ok(())
}

/// Reference solver: every simple s1-t1 path, each followed by a BFS for s2-t2.
/// Exponential; meant for graphs of a dozen or so vertices.
pub fn exhaustive_two_disjoint_paths(
    g: &Graph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
) -> Result<Option<PathPair>, TdpError> {
    check_terms(g, [s1, t1, s2, t2])?;
    fn rec(g: &Graph, path: &mut Vec<usize>, on: &mut Vec<bool>, t1: usize, s2: usize, t2: usize) -> Option<PathPair> {
        let v = *path.last().unwrap();
        if v == t1 {
            let allowed: Vec<bool> = on.iter().map(|&b| !b).collect();
            let mut to = vec![false; g.n()];
            to[t2] = true;
            return g.bfs_path(&[s2], &to, &allowed).map(|p2| (path.clone(), p2));
        }
        for &w in g.neighbors(v) {
            if on[w] || w == s2 || w == t2 {
                continue;
            }
            on[w] = true;
            path.push(w);
            if let Some(r) = rec(g, path, on, t1, s2, t2) {
                return Some(r);
            }
            path.pop();
            on[w] = false;
        }
        None
    }
    let mut on = vec![false; g.n()];
    on[s1] = true;
    Ok(rec(g, &mut vec![s1], &mut on, t1, s2, t2))
}

/// Two vertex-disjoint paths s1-t1 and s2-t2, or `None` when none exist.
pub fn two_disjoint_paths(g: &Graph, s1: usize, t1: usize, s2: usize, t2: usize) -> Result<Option<PathPair>, TdpError> {
    two_disjoint_paths_budget(g, s1, t1, s2, t2, DEFAULT_BUDGET)
}

/// As [`two_disjoint_paths`] with an explicit node budget for the final
/// backtracking stage. `None` is only returned when it is certified: by a
/// disconnected pair, by a planar reduced graph with the terminals on one face
/// in interleaved order, or by an exhausted search.
pub fn two_disjoint_paths_budget(
    g: &Graph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
    budget: u64,
) -> Result<Option<PathPair>, TdpError> {
    let terms = [s1, t1, s2, t2];
    check_terms(g, terms)?;
    let n = g.n();
    let mut to = vec![false; n];
    let mut allowed = vec![true; n];
    allowed[s2] = false;
    allowed[t2] = false;
    to[t1] = true;
    if g.bfs_path(&[s1], &to, &allowed).is_none() {
        return Ok(None);
    }
    let mut allowed = vec![true; n];
    allowed[s1] = false;
    allowed[t1] = false;
    let mut to = vec![false; n];
    to[t2] = true;
    if g.bfs_path(&[s2], &to, &allowed).is_none() {
        return Ok(None);
    }
    if let Some(r) = heuristic_pair(g, terms) {
        return Ok(Some(r));
    }
    let mut protected = vec![false; n];
    terms.iter().for_each(|&v| protected[v] = true);
    if frame_planar(g, &[s1, s2, t1, t2]) {
        return Ok(None);
    }
    let mut red = Reducer::new(g, &protected);
    red.run();
    let (h, ids) = red.compact();
    let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let lt = [local[&s1], local[&t1], local[&s2], local[&t2]];
    if frame_planar(&h, &[lt[0], lt[2], lt[1], lt[3]]) {
        return Ok(None);
    }
    if let Some((a, b)) = heuristic_pair(&h, lt) {
        let to_host = |p: &[usize]| p.iter().map(|&x| ids[x]).collect::<Vec<_>>();
        return Ok(Some((red.lift(&to_host(&a)), red.lift(&to_host(&b)))));
    }
    match backtrack_pair(&h, lt, budget) {
        Ok(Some((a, b))) => {
            let to_host = |p: &[usize]| p.iter().map(|&x| ids[x]).collect::<Vec<_>>();
            Ok(Some((red.lift(&to_host(&a)), red.lift(&to_host(&b)))))
        }
        Ok(None) => Ok(None),
        Err(()) => Err(TdpError::Budget(budget)),
    }
}

/// Whether `g` plus the cycle through `frame` embeds with that cycle as a face.
fn frame_planar(g: &Graph, frame: &[usize]) -> bool {
    let mut h = g.clone();
    for k in 0..frame.len() {
        h.add_edge(frame[k], frame[(k + 1) % frame.len()]);
    }
    embed(&h, Some(frame)).is_some()
}

/// BFS parent tree from `root` inside `allowed`.
fn bfs_tree(g: &Graph, root: usize, allowed: &[bool]) -> Vec<usize> {
    let mut prev = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut q = std::collections::VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                prev[w] = u;
                q.push_back(w);
            }
        }
    }
    prev[root] = root;
    prev
}

fn tree_path(prev: &[usize], v: usize) -> Option<Vec<usize>> {
    if prev[v] == usize::MAX {
        return None;
    }
    let mut p = vec![v];
    let mut x = v;
    while prev[x] != x {
        x = prev[x];
        p.push(x);
    }
    p.reverse();
    Some(p)
}

/// Tries shortest paths and one-edge detours of them for one pair, then a BFS
/// for the other pair around it; both roles are tried.
fn heuristic_pair(g: &Graph, terms: [usize; 4]) -> Option<PathPair> {
    let n = g.n();
    for swap in [false, true] {
        let [a, b, c, d] = if swap { [terms[2], terms[3], terms[0], terms[1]] } else { terms };
        let mut allowed = vec![true; n];
        allowed[c] = false;
        allowed[d] = false;
        let pa = bfs_tree(g, a, &allowed);
        let pb = bfs_tree(g, b, &allowed);
        let mut tried: HashSet<Vec<usize>> = HashSet::new();
        let mut cands: Vec<Vec<usize>> = Vec::new();
        if let Some(p) = tree_path(&pa, b) {
            cands.push(p);
        }
        for (x, y) in g.edges() {
            for (u, v) in [(x, y), (y, x)] {
                let (Some(p), Some(q)) = (tree_path(&pa, u), tree_path(&pb, v)) else { continue };
                let mut p = p;
                p.extend(q.into_iter().rev());
                cands.push(p);
            }
        }
        let mut mark = vec![false; n];
        let mut to = vec![false; n];
        to[d] = true;
        for p in cands {
            if !tried.insert(p.clone()) {
                continue;
            }
            let mut simple = true;
            for &v in &p {
                if mark[v] {
                    simple = false;
                }
                mark[v] = true;
            }
            let free: Vec<bool> = mark.iter().map(|&m| !m).collect();
            let found = if simple { g.bfs_path(&[c], &to, &free) } else { None };
            p.iter().for_each(|&v| mark[v] = false);
            if let Some(q) = found {
                return Some(if swap { (q, p) } else { (p, q) });
            }
        }
    }
    None
}

/// Depth-first enumeration of s1-t1 paths with reachability pruning. `Err`
/// means the budget ran out.
fn backtrack_pair(g: &Graph, terms: [usize; 4], budget: u64) -> Result<Option<PathPair>, ()> {
    let [s1, t1, _, t2] = terms;
    let n = g.n();
    let mut left = budget;
    let mut on = vec![false; n];
    on[s1] = true;
    let mut path = vec![s1];
    let mut to_t2 = vec![false; n];
    to_t2[t2] = true;
    let mut to_t1 = vec![false; n];
    to_t1[t1] = true;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &Graph,
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        terms: [usize; 4],
        to_t1: &[bool],
        to_t2: &[bool],
        left: &mut u64,
    ) -> Result<Option<PathPair>, ()> {
        let [_, t1, s2, t2] = terms;
        if *left == 0 {
            return Err(());
        }
        *left -= 1;
        let free: Vec<bool> = on.iter().map(|&b| !b).collect();
        let p2 = g.bfs_path(&[s2], to_t2, &free);
        let Some(p2) = p2 else { return Ok(None) };
        let v = *path.last().unwrap();
        if v == t1 {
            return Ok(Some((path.clone(), p2)));
        }
        let mut reach = free.clone();
        reach[s2] = false;
        reach[t2] = false;
        let starts: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| reach[w]).collect();
        if g.bfs_path(&starts, to_t1, &reach).is_none() {
            return Ok(None);
        }
        for w in starts {
            on[w] = true;
            path.push(w);
            let r = rec(g, path, on, terms, to_t1, to_t2, left)?;
            if r.is_some() {
                return Ok(r);
            }
            path.pop();
            on[w] = false;
        }
        Ok(None)
    }
    rec(g, &mut path, &mut on, terms, &to_t1, &to_t2, &mut left)
}

/// Iterative lowpoint DFS over `mask`; for every tree edge (z, w) whose subtree
/// hangs off `z` alone, and for every whole component, reports the vertex set
/// when it has no protected vertex. Roots are protected vertices when possible.
fn separable_sets(g: &Graph, mask: &[bool], protected: &[bool]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut size = vec![1usize; n];
    let mut pcount = vec![0usize; n];
    let mut order: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    let roots = (0..n).filter(|&v| mask[v] && protected[v]).chain((0..n).filter(|&v| mask[v] && !protected[v]));
    for root in roots.collect::<Vec<_>>() {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = order.len();
        low[root] = disc[root];
        order.push(root);
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, p) = (top.0, top.1);
            if top.2 < g.neighbors(v).len() {
                let w = g.neighbors(v)[top.2];
                top.2 += 1;
                if !mask[w] || w == p {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = order.len();
                    low[w] = disc[w];
                    order.push(w);
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                pcount[v] += usize::from(protected[v]);
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    size[u] += size[v];
                    pcount[u] += pcount[v];
                    if low[v] >= disc[u] && pcount[v] == 0 {
                        out.push(order[disc[v]..disc[v] + size[v]].to_vec());
                    }
                }
            }
        }
        if pcount[root] == 0 {
            out.push(order[disc[root]..disc[root] + size[root]].to_vec());
        }
    }
    out.sort_by_key(|s| std::cmp::Reverse(s.len()));
    out
}

#[derive(Clone, Debug)]
struct RawPiece {
    interior: Vec<usize>,
    attachments: Vec<usize>,
    absorbed_into: Option<usize>,
}

/// Repeated elementary reductions on a working copy of the graph. Vertex ids
/// are kept; removed vertices are marked dead.
struct Reducer<'a> {
    g: &'a Graph,
    h: Graph,
    alive: Vec<bool>,
    protected: Vec<bool>,
    pieces: Vec<RawPiece>,
    virt: HashMap<(usize, usize), Vec<usize>>,
}

impl<'a> Reducer<'a> {
    fn new(g: &'a Graph, protected: &[bool]) -> Self {
        Reducer {
            g,
            h: g.clone(),
            alive: vec![true; g.n()],
            protected: protected.to_vec(),
            pieces: Vec::new(),
            virt: HashMap::new(),
        }
    }

    fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    fn top(&self, mut p: usize) -> usize {
        while let Some(q) = self.pieces[p].absorbed_into {
            p = q;
        }
        p
    }

    fn try_reduce(&mut self, k: &[usize]) -> bool {
        if k.iter().any(|&v| !self.alive[v] || self.protected[v]) {
            return false;
        }
        let inside: HashSet<usize> = k.iter().copied().collect();
        let mut att = BTreeSet::new();
        for &v in k {
            for &w in self.h.neighbors(v) {
                if !inside.contains(&w) {
                    att.insert(w);
                }
            }
        }
        if att.len() > 3 {
            return false;
        }
        let id = self.pieces.len();
        let mut interior = k.to_vec();
        for p in 0..self.pieces.len() {
            if self.pieces[p].absorbed_into.is_none() && self.pieces[p].attachments.iter().any(|a| inside.contains(a)) {
                self.pieces[p].absorbed_into = Some(id);
                interior.extend(self.pieces[p].interior.iter().copied());
            }
        }
        interior.sort_unstable();
        for &v in k {
            for w in self.h.neighbors(v).to_vec() {
                self.h.remove_edge(v, w);
            }
            self.alive[v] = false;
        }
        let att: Vec<usize> = att.into_iter().collect();
        for i in 0..att.len() {
            for j in i + 1..att.len() {
                self.h.add_edge(att[i], att[j]);
                self.virt.entry((att[i], att[j])).or_default().push(id);
            }
        }
        self.pieces.push(RawPiece { interior, attachments: att, absorbed_into: None });
        true
    }

    fn scan(&mut self, excl: &[usize]) -> bool {
        if excl.iter().any(|&v| !self.alive[v]) {
            return false;
        }
        let mut mask = self.alive.clone();
        excl.iter().for_each(|&v| mask[v] = false);
        let mut changed = false;
        for k in separable_sets(&self.h, &mask, &self.protected) {
            changed |= self.try_reduce(&k);
        }
        changed
    }

    /// Reduces to a fixed point: orders 0-2 always, order 3 while small enough.
    fn run(&mut self) {
        loop {
            let mut changed = self.scan(&[]);
            for x in 0..self.g.n() {
                if self.alive[x] {
                    changed |= self.scan(&[x]);
                }
            }
            if self.alive_count() <= ORDER3_LIMIT {
                let live: Vec<usize> = (0..self.g.n()).filter(|&v| self.alive[v]).collect();
                for (i, &x) in live.iter().enumerate() {
                    for &y in &live[i + 1..] {
                        if self.alive[x] && self.alive[y] {
                            changed |= self.scan(&[x, y]);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Reduced graph on the surviving vertices, with the host id of each.
    fn compact(&self) -> (Graph, Vec<usize>) {
        let ids: Vec<usize> = (0..self.g.n()).filter(|&v| self.alive[v]).collect();
        self.h.induced(&ids)
    }

    fn top_pieces(&self) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&p| self.pieces[p].absorbed_into.is_none()).collect()
    }

    /// Replaces virtual edges of a reduced-graph path by routes through the
    /// pieces they stand for. Consecutive edges of one piece are merged.
    fn lift(&self, path: &[usize]) -> Vec<usize> {
        let src = |a: usize, b: usize| -> Option<usize> {
            if self.g.has_edge(a, b) {
                return None;
            }
            let key = (a.min(b), a.max(b));
            self.virt[&key].iter().map(|&p| self.top(p)).find(|&p| {
                let at = &self.pieces[p].attachments;
                at.contains(&a) && at.contains(&b)
            })
        };
        let mut out = vec![path[0]];
        let mut i = 0;
        while i + 1 < path.len() {
            match src(path[i], path[i + 1]) {
                None => {
                    out.push(path[i + 1]);
                    i += 1;
                }
                Some(p) => {
                    let mut j = i + 1;
                    while j + 1 < path.len() && src(path[j], path[j + 1]) == Some(p) {
                        j += 1;
                    }
                    let mut allowed = vec![false; self.g.n()];
                    self.pieces[p].interior.iter().for_each(|&v| allowed[v] = true);
                    allowed[path[i]] = true;
                    allowed[path[j]] = true;
                    let route =
                        route_through(self.g, &allowed, path[i], path[j]).expect("piece interior connects its attachments");
                    out.extend(route.into_iter().skip(1));
                    i = j;
                }
            }
        }
        out
    }
}

/// Path from `a` to `b` whose inner vertices all lie in `allowed` and which
/// does not use the edge `ab` itself.
fn route_through(g: &Graph, allowed: &[bool], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut inner = allowed.to_vec();
    inner[a] = false;
    inner[b] = false;
    let starts: Vec<usize> = g.neighbors(a).iter().copied().filter(|&w| inner[w]).collect();
    let mut to = vec![false; g.n()];
    for &w in g.neighbors(b) {
        if inner[w] {
            to[w] = true;
        }
    }
    let mut p = g.bfs_path(&starts, &to, &inner)?;
    p.insert(0, a);
    p.push(b);
    Some(p)
}

/// One elementary reduction: side y plus a clique on the separator. Returns the
/// reduced graph and the host id of each of its vertices.
pub fn elementary_reduction(g: &Graph, protected: &[usize], sep: &Separation) -> Result<(Graph, Vec<usize>), ReductionError> {
    sep.validate(g)?;
    let s = sep.separator();
    if s.len() > 3 {
        return Err(ReductionError::Order(s.len()));
    }
    let ys: HashSet<usize> = sep.side_y.vertices.iter().copied().collect();
    if let Some(&v) = protected.iter().find(|v| !ys.contains(v)) {
        return Err(ReductionError::Protected(v));
    }
    if s.len() > 1 {
        let sx = Graph::from_edges(g.n(), &sep.side_x.edges).expect("validated edges");
        let mut mask = vec![false; g.n()];
        sep.side_x.vertices.iter().for_each(|&v| mask[v] = true);
        let comps = sx.components_masked(&mask);
        if !comps.iter().any(|c| s.iter().all(|v| c.binary_search(v).is_ok())) {
            return Err(ReductionError::NotConnected);
        }
    }
    let ids = sep.side_y.vertices.clone();
    let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Graph::new(ids.len());
    for &(u, v) in &sep.side_y.edges {
        out.add_edge(local[&u], local[&v]);
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            out.add_edge(local[&s[i]], local[&s[j]]);
        }
    }
    Ok((out, ids))
}

/// Everything reachable by repeated reductions protecting `protected`, in one
/// call. Returns the reduced graph and host ids of its vertices.
pub fn reduce_fully(g: &Graph, protected: &[usize]) -> (Graph, Vec<usize>) {
    let mut mask = vec![false; g.n()];
    protected.iter().for_each(|&v| mask[v] = true);
    let mut red = Reducer::new(g, &mask);
    red.run();
    red.compact()
}

/// A reduced-away part of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Certificate that a graph is flat around a cycle: the residual part `g0`,
/// the pieces, and a plane supergraph of `g0` given by a rotation system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatDecomposition {
    pub g0_vertices: Vec<usize>,
    pub g0_edges: Vec<(usize, usize)>,
    pub pieces: Vec<Piece>,
    /// `(v, cyclic neighbor order)` for each vertex of `g0`, in host ids.
    pub rotation: Vec<(usize, Vec<usize>)>,
    pub outer: Vec<usize>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FlatError {
    #[error("edge ({0},{1}) is covered {2} times")]
    Cover(usize, usize, usize),
    #[error("part edge ({0},{1}) is not a graph edge or leaves its part")]
    ForeignEdge(usize, usize),
    #[error("vertex {0} lies in no part")]
    Uncovered(usize),
    #[error("the cycle is not contained in g0")]
    CycleOutside,
    #[error("piece {0} meets g0 in {1} vertices")]
    Attachments(usize, usize),
    #[error("piece {0}: its two attachments are not adjacent in the plane graph")]
    TwoNotAdjacent(usize),
    #[error("piece {0}: no inner face is incident with exactly its three attachments")]
    ThreeNoFace(usize),
    #[error("pieces {0} and {1} share vertex {2} outside g0")]
    Overlap(usize, usize, usize),
    #[error("plane graph: {0}")]
    Plane(String),
}

impl FlatDecomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Checks every condition of flatness with respect to cycle `c` of `g`.
    pub fn verify(&self, g: &Graph, c: &[usize]) -> Result<(), FlatError> {
        let n = g.n();
        let mut in0 = vec![false; n];
        for &v in &self.g0_vertices {
            if v >= n {
                return Err(FlatError::Uncovered(v));
            }
            in0[v] = true;
        }
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        let mut covered = in0.clone();
        let parts =
            std::iter::once((&self.g0_vertices, &self.g0_edges)).chain(self.pieces.iter().map(|p| (&p.vertices, &p.edges)));
        for (vs, es) in parts {
            let set: HashSet<usize> = vs.iter().copied().collect();
            for &v in vs {
                if v < n {
                    covered[v] = true;
                }
            }
            for &(a, b) in es {
                let (u, v) = (a.min(b), a.max(b));
                if u >= n || v >= n || !g.has_edge(u, v) || !set.contains(&u) || !set.contains(&v) {
                    return Err(FlatError::ForeignEdge(u, v));
                }
                *count.entry((u, v)).or_default() += 1;
            }
        }
        for e in g.edges() {
            let k = count.get(&e).copied().unwrap_or(0);
            if k != 1 {
                return Err(FlatError::Cover(e.0, e.1, k));
            }
        }
        if let Some(v) = (0..n).find(|&v| !covered[v]) {
            return Err(FlatError::Uncovered(v));
        }
        let g0e: HashSet<(usize, usize)> = self.g0_edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let on_c = (0..c.len()).all(|k| {
            let (a, b) = (c[k], c[(k + 1) % c.len()]);
            a < n && in0[a] && g0e.contains(&(a.min(b), a.max(b)))
        });
        if c.len() < 3 || !on_c {
            return Err(FlatError::CycleOutside);
        }
        // Plane graph on V(g0).
        let local: HashMap<usize, usize> = self.g0_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if self.rotation.len() != self.g0_vertices.len() {
            return Err(FlatError::Plane("rotation does not cover g0".into()));
        }
        let mut rot = vec![Vec::new(); local.len()];
        let mut plane = Graph::new(local.len());
        for (v, l) in &self.rotation {
            let Some(&lv) = local.get(v) else {
                return Err(FlatError::Plane(format!("vertex {v} is not in g0")));
            };
            for w in l {
                let Some(&lw) = local.get(w) else {
                    return Err(FlatError::Plane(format!("vertex {w} is not in g0")));
                };
                if lw == lv {
                    return Err(FlatError::Plane("loop".into()));
                }
                plane.add_edge(lv, lw);
                rot[lv].push(lw);
            }
        }
        for &(a, b) in &g0e {
            if !plane.has_edge(local[&a], local[&b]) {
                return Err(FlatError::Plane(format!("g0 edge ({a},{b}) missing")));
            }
        }
        let emb = Embedding { rot };
        let lc: Vec<usize> = c.iter().map(|v| local[v]).collect();
        emb.verify(&plane, Some(&lc)).map_err(FlatError::Plane)?;
        let mut faces = emb.faces();
        if let Some(k) = faces.iter().position(|f| same_cycle(f, &lc)) {
            faces.remove(k);
        }
        let face_sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        for (i, p) in self.pieces.iter().enumerate() {
            let att: Vec<usize> = p.vertices.iter().copied().filter(|&v| v < n && in0[v]).collect();
            match att.len() {
                0 | 1 => {}
                2 => {
                    if !plane.has_edge(local[&att[0]], local[&att[1]]) {
                        return Err(FlatError::TwoNotAdjacent(i));
                    }
                }
                3 => {
                    let want: BTreeSet<usize> = att.iter().map(|v| local[v]).collect();
                    if !face_sets.contains(&want) {
                        return Err(FlatError::ThreeNoFace(i));
                    }
                }
                k => return Err(FlatError::Attachments(i, k)),
            }
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (i, p) in self.pieces.iter().enumerate() {
            for &v in &p.vertices {
                if v < n && in0[v] {
                    continue;
                }
                if let Some(&j) = owner.get(&v) {
                    return Err(FlatError::Overlap(j, i, v));
                }
                owner.insert(v, i);
            }
        }
        Ok(())
    }
}

/// Result of [`c_cross_or_flat`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossOrFlat {
    /// `p1` runs s1..t1 and `p2` runs s2..t2 with s1, s2, t1, t2 in cycle order.
    Cross {
        p1: Vec<usize>,
        p2: Vec<usize>,
    },
    Flat(FlatDecomposition),
}

fn check_cycle(g: &Graph, c: &[usize]) -> Result<Vec<Option<usize>>, TdpError> {
    if c.len() < 3 {
        return Err(TdpError::NotCycle("fewer than three vertices".into()));
    }
    let mut pos = vec![None; g.n()];
    for (k, &v) in c.iter().enumerate() {
        if v >= g.n() {
            return Err(TdpError::Vertex(v));
        }
        if pos[v].is_some() {
            return Err(TdpError::NotCycle(format!("vertex {v} repeats")));
        }
        pos[v] = Some(k);
    }
    for k in 0..c.len() {
        let (a, b) = (c[k], c[(k + 1) % c.len()]);
        if !g.has_edge(a, b) {
            return Err(TdpError::NotCycle(format!("({a},{b}) is not an edge")));
        }
    }
    Ok(pos)
}

/// Whether `(p1, p2)` is a cross on cycle `c`: disjoint paths with ends
/// s1, s2, t1, t2 in this cyclic order and no inner vertex on `c`.
pub fn is_c_cross(g: &Graph, c: &[usize], p1: &[usize], p2: &[usize]) -> bool {
    let Ok(pos) = check_cycle(g, c) else { return false };
    if p1.len() < 2 || p2.len() < 2 {
        return false;
    }
    let ends = [p1[0], p2[0], *p1.last().unwrap(), *p2.last().unwrap()];
    if !check_two_paths(g, p1, p2, [ends[0], ends[2], ends[1], ends[3]]) {
        return false;
    }
    let inner_ok = |p: &[usize]| p[1..p.len() - 1].iter().all(|&v| pos[v].is_none());
    if !inner_ok(p1) || !inner_ok(p2) {
        return false;
    }
    let Some(ps) = ends.iter().map(|&v| pos[v]).collect::<Option<Vec<usize>>>() else { return false };
    // Cyclic order: rotate so s1 is first, then positions must increase.
    let rel: Vec<usize> = ps.iter().map(|&p| (p + c.len() - ps[0]) % c.len()).collect();
    rel[1] < rel[2] && rel[2] < rel[3]
}

/// Reference cross search over all interleaved terminal quadruples.
pub fn exhaustive_c_cross(g: &Graph, c: &[usize]) -> Result<Option<PathPair>, TdpError> {
    check_cycle(g, c)?;
    let m = c.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let keep = [c[i], c[j], c[k], c[l]];
                    let mut h = g.clone();
                    for &v in c {
                        if !keep.contains(&v) {
                            for w in g.neighbors(v).to_vec() {
                                h.remove_edge(v, w);
                            }
                        }
                    }
                    for x in 0..m {
                        h.remove_edge(c[x], c[(x + 1) % m]);
                    }
                    if let Some(r) = exhaustive_two_disjoint_paths(&h, c[i], c[k], c[j], c[l])? {
                        return Ok(Some(r));
                    }
                }
            }
        }
    }
    Ok(None)
}

struct CBridge {
    interior: Vec<usize>,
    /// Sorted, distinct cycle positions of the attachments.
    att: Vec<usize>,
}

fn c_bridges(g: &Graph, c: &[usize], pos: &[Option<usize>]) -> Vec<CBridge> {
    let m = c.len();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (pos[u], pos[v]) {
            let consecutive = (a + 1) % m == b || (b + 1) % m == a;
            if !consecutive {
                out.push(CBridge { interior: Vec::new(), att: vec![a.min(b), a.max(b)] });
            }
        }
    }
    let mask: Vec<bool> = pos.iter().map(|p| p.is_none()).collect();
    for comp in g.components_masked(&mask) {
        let mut att = BTreeSet::new();
        for &v in &comp {
            for &w in g.neighbors(v) {
                if let Some(p) = pos[w] {
                    att.insert(p);
                }
            }
        }
        out.push(CBridge { interior: comp, att: att.into_iter().collect() });
    }
    out
}

fn bridge_path(g: &Graph, c: &[usize], b: &CBridge, x: usize, y: usize) -> Vec<usize> {
    if b.interior.is_empty() {
        return vec![c[x], c[y]];
    }
    let mut allowed = vec![false; g.n()];
    b.interior.iter().for_each(|&v| allowed[v] = true);
    route_through(g, &allowed, c[x], c[y]).expect("bridge interior is connected")
}

/// Two distinct bridges with interleaved attachments.
fn cross_between_bridges(g: &Graph, c: &[usize], bridges: &[CBridge]) -> Option<PathPair> {
    let m = c.len();
    for (i1, b1) in bridges.iter().enumerate() {
        let mut pre = vec![0usize; m + 1];
        let mut has = vec![false; m];
        b1.att.iter().for_each(|&p| has[p] = true);
        for k in 0..m {
            pre[k + 1] = pre[k] + usize::from(has[k]);
        }
        let total = pre[m];
        for (i2, b2) in bridges.iter().enumerate() {
            if i1 == i2 {
                continue;
            }
            for (a, &u) in b2.att.iter().enumerate() {
                for &w in &b2.att[a + 1..] {
                    let inside = pre[w] - pre[u + 1];
                    let outside = total - pre[w + 1] + pre[u];
                    if inside == 0 || outside == 0 {
                        continue;
                    }
                    let x = (u + 1..w).find(|&k| has[k]).unwrap();
                    let y = (w + 1..m).chain(0..u).find(|&k| has[k]).unwrap();
                    let p1 = bridge_path(g, c, b2, u, w);
                    let p2 = bridge_path(g, c, b1, x, y);
                    return Some((p1, p2));
                }
            }
        }
    }
    None
}

/// A cross inside a single bridge: for each pair of attachments as (s1, t1),
/// the attachments strictly between them on either side are merged into the
/// second pair of terminals.
fn cross_in_bridge(g: &Graph, c: &[usize], b: &CBridge, budget: u64) -> Result<Option<PathPair>, TdpError> {
    if b.att.len() < 4 || b.interior.is_empty() {
        return Ok(None);
    }
    let k = b.interior.len();
    let local: HashMap<usize, usize> = b.interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut base = Graph::new(k + 4);
    for &v in &b.interior {
        for &w in g.neighbors(v) {
            if let Some(&lw) = local.get(&w) {
                base.add_edge(local[&v], lw);
            }
        }
    }
    let (s1, t1, s2, t2) = (k, k + 1, k + 2, k + 3);
    let at = &b.att;
    for i in 0..at.len() {
        for j in i + 1..at.len() {
            let (pi, pj) = (at[i], at[j]);
            let arc1: Vec<usize> = at.iter().copied().filter(|&p| pi < p && p < pj).collect();
            let arc2: Vec<usize> = at.iter().copied().filter(|&p| p > pj || p < pi).collect();
            if arc1.is_empty() || arc2.is_empty() {
                continue;
            }
            let mut h = base.clone();
            let hook = |term: usize, ps: &[usize], h: &mut Graph| {
                for &p in ps {
                    for &w in g.neighbors(c[p]) {
                        if let Some(&lw) = local.get(&w) {
                            h.add_edge(term, lw);
                        }
                    }
                }
            };
            hook(s1, &[pi], &mut h);
            hook(t1, &[pj], &mut h);
            hook(s2, &arc1, &mut h);
            hook(t2, &arc2, &mut h);
            if let Some((q1, q2)) = two_disjoint_paths_budget(&h, s1, t1, s2, t2, budget)? {
                let inner = |q: &[usize]| q[1..q.len() - 1].iter().map(|&x| b.interior[x]).collect::<Vec<_>>();
                let pick = |ps: &[usize], nb: usize| {
                    c[*ps.iter().find(|&&p| g.has_edge(c[p], nb)).expect("terminal hooked by an attachment")]
                };
                let mut p1 = vec![c[pi]];
                p1.extend(inner(&q1));
                p1.push(c[pj]);
                let i2 = inner(&q2);
                let mut p2 = vec![pick(&arc1, i2[0])];
                p2.extend(i2.iter().copied());
                p2.push(pick(&arc2, *i2.last().unwrap()));
                return Ok(Some((p1, p2)));
            }
        }
    }
    Ok(None)
}

/// Flat decomposition from a finished reducer, if the residual embeds with `c`
/// as a face and the result verifies.
fn flat_from_reducer(g: &Graph, c: &[usize], red: &Reducer) -> Option<FlatDecomposition> {
    let (h, ids) = red.compact();
    let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let lc: Vec<usize> = c.iter().map(|v| local[v]).collect();
    let emb = embed(&h, Some(&lc))?;
    let mut in0 = vec![false; g.n()];
    ids.iter().for_each(|&v| in0[v] = true);
    let g0_edges: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| in0[u] && in0[v]).collect();
    let pieces = red
        .top_pieces()
        .into_iter()
        .map(|p| {
            let rp = &red.pieces[p];
            let mut vertices = rp.interior.clone();
            vertices.extend(rp.attachments.iter().copied());
            vertices.sort_unstable();
            let mut inner = vec![false; g.n()];
            rp.interior.iter().for_each(|&v| inner[v] = true);
            let edges = g.edges().filter(|&(u, v)| inner[u] || inner[v]).collect();
            Piece { vertices, edges }
        })
        .collect();
    let rotation = ids.iter().enumerate().map(|(i, &v)| (v, emb.rot[i].iter().map(|&w| ids[w]).collect())).collect();
    let fd = FlatDecomposition { g0_vertices: ids, g0_edges, pieces, rotation, outer: c.to_vec() };
    fd.verify(g, c).ok().map(|_| fd)
}

/// A cross on cycle `c`, or a flat decomposition certifying there is none.
pub fn c_cross_or_flat(g: &Graph, c: &[usize]) -> Result<CrossOrFlat, TdpError> {
    c_cross_or_flat_budget(g, c, DEFAULT_BUDGET)
}

pub fn c_cross_or_flat_budget(g: &Graph, c: &[usize], budget: u64) -> Result<CrossOrFlat, TdpError> {
    let pos = check_cycle(g, c)?;
    let mut protected = vec![false; g.n()];
    c.iter().for_each(|&v| protected[v] = true);
    let plain = Reducer::new(g, &protected);
    if let Some(fd) = flat_from_reducer(g, c, &plain) {
        return Ok(CrossOrFlat::Flat(fd));
    }
    let bridges = c_bridges(g, c, &pos);
    if let Some((p1, p2)) = cross_between_bridges(g, c, &bridges) {
        return Ok(CrossOrFlat::Cross { p1, p2 });
    }
    let mut red = Reducer::new(g, &protected);
    red.run();
    if let Some(fd) = flat_from_reducer(g, c, &red) {
        return Ok(CrossOrFlat::Flat(fd));
    }
    for b in &bridges {
        if let Some((p1, p2)) = cross_in_bridge(g, c, b, budget)? {
            return Ok(CrossOrFlat::Cross { p1, p2 });
        }
    }
    Err(TdpError::Undecided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn interleaved_square() {
        let g = Graph::cycle(4);
        // cycle 0-1-2-3: s1=0, s2=1, t1=2, t2=3
        assert_eq!(two_disjoint_paths(&g, 0, 2, 1, 3).unwrap(), None);
        // A chord s1-t1 leaves s2 with no free neighbour.
        let mut g2 = g.clone();
        g2.add_edge(0, 2);
        assert_eq!(two_disjoint_paths(&g2, 0, 2, 1, 3).unwrap(), None);
        assert_eq!(exhaustive_two_disjoint_paths(&g2, 0, 2, 1, 3).unwrap(), None);
        // Non-interleaved terminals on the same square.
        let (p1, p2) = two_disjoint_paths(&g, 0, 1, 3, 2).unwrap().unwrap();
        assert!(check_two_paths(&g, &p1, &p2, [0, 1, 3, 2]));
    }

    #[test]
    fn terminals_must_differ() {
        let g = Graph::cycle(5);
        assert_eq!(two_disjoint_paths(&g, 0, 2, 0, 3), Err(TdpError::Terminals));
    }

    #[test]
    fn grid_against_reference() {
        let g = Graph::grid(5, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let mut t = [0usize; 4];
            loop {
                for x in t.iter_mut() {
                    *x = rng.gen_range(0..25);
                }
                if t.iter().collect::<HashSet<_>>().len() == 4 {
                    break;
                }
            }
            let got = two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
            let want = exhaustive_two_disjoint_paths(&g, t[0], t[1], t[2], t[3]).unwrap();
            assert_eq!(got.is_some(), want.is_some(), "terminals {t:?}");
            if let Some((a, b)) = got {
                assert!(check_two_paths(&g, &a, &b, t));
            }
        }
    }

    #[test]
    fn random_small_against_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(5..11);
            let g = random_graph(&mut rng, n, 0.35);
            let got = two_disjoint_paths(&g, 0, 1, 2, 3).unwrap();
            let want = exhaustive_two_disjoint_paths(&g, 0, 1, 2, 3).unwrap();
            assert_eq!(got.is_some(), want.is_some(), "{}", g.to_text());
            if let Some((a, b)) = got {
                assert!(check_two_paths(&g, &a, &b, [0, 1, 2, 3]));
            }
        }
    }

    #[test]
    fn reduced_search_lifts_paths() {
        // Interleaved square plus a K4 hung between 0 and 2 and a detour 1-8-3.
        // Both cross paths run through reduced-away pieces.
        let mut g = Graph::cycle(4);
        for _ in 4..9 {
            g.add_vertex();
        }
        for (a, b) in [(4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (0, 4), (2, 5), (1, 8), (3, 8)] {
            g.add_edge(a, b);
        }
        let mut protected = vec![false; 9];
        (0..4).for_each(|v| protected[v] = true);
        let mut red = Reducer::new(&g, &protected);
        red.run();
        let (h, ids) = red.compact();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        assert!(h.has_edge(0, 2) && h.has_edge(1, 3));
        let (p1, p2) = (red.lift(&[0, 2]), red.lift(&[1, 3]));
        assert!(check_two_paths(&g, &p1, &p2, [0, 2, 1, 3]));
        let (q1, q2) = two_disjoint_paths(&g, 0, 2, 1, 3).unwrap().unwrap();
        assert!(check_two_paths(&g, &q1, &q2, [0, 2, 1, 3]));
    }

    #[test]
    fn bare_cycle_is_flat() {
        let g = Graph::cycle(6);
        let c: Vec<usize> = (0..6).collect();
        match c_cross_or_flat(&g, &c).unwrap() {
            CrossOrFlat::Flat(fd) => {
                assert!(fd.pieces.is_empty());
                fd.verify(&g, &c).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn crossing_chords() {
        let mut g = Graph::cycle(6);
        g.add_edge(0, 3);
        g.add_edge(1, 4);
        let c: Vec<usize> = (0..6).collect();
        match c_cross_or_flat(&g, &c).unwrap() {
            CrossOrFlat::Cross { p1, p2 } => assert!(is_c_cross(&g, &c, &p1, &p2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_a_cycle() {
        let g = Graph::path(4);
        assert!(matches!(c_cross_or_flat(&g, &[0, 1, 2, 3]), Err(TdpError::NotCycle(_))));
    }

    #[test]
    fn gadget_piece_is_reduced() {
        // Square grid border as the cycle; a K5 glued onto three inner vertices
        // stays flat after reduction.
        let mut g = Graph::grid(4, 4);
        let c = vec![0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let base = g.n();
        for _ in 0..2 {
            g.add_vertex();
        }
        let k5 = [5, 6, 9, base, base + 1];
        for i in 0..5 {
            for j in i + 1..5 {
                g.add_edge(k5[i], k5[j]);
            }
        }
        match c_cross_or_flat(&g, &c).unwrap() {
            CrossOrFlat::Flat(fd) => {
                fd.verify(&g, &c).unwrap();
                assert!(!fd.pieces.is_empty());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(exhaustive_c_cross(&g, &c).unwrap(), None);
    }

    #[test]
    fn random_small_cross_or_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..80 {
            let n = rng.gen_range(6..11);
            let mut g = random_graph(&mut rng, n, 0.3);
            let k = rng.gen_range(4..=n.min(6));
            let c: Vec<usize> = (0..k).collect();
            for i in 0..k {
                g.add_edge(c[i], c[(i + 1) % k]);
            }
            let want = exhaustive_c_cross(&g, &c).unwrap();
            match c_cross_or_flat(&g, &c).unwrap() {
                CrossOrFlat::Cross { p1, p2 } => {
                    assert!(is_c_cross(&g, &c, &p1, &p2));
                    assert!(want.is_some());
                }
                CrossOrFlat::Flat(fd) => {
                    fd.verify(&g, &c).unwrap();
                    assert!(want.is_none(), "{}", g.to_text());
                }
            }
        }
    }

    #[test]
    fn elementary_reduction_cases() {
        // Pendant path 3-4 hanging off vertex 2 of a triangle.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let sep = Separation::from_vertex_sets(&g, &[2, 3, 4], &[0, 1, 2]);
        let (h, ids) = elementary_reduction(&g, &[0, 1], &sep).unwrap();
        assert_eq!(ids, vec![0, 1, 2]);
        assert_eq!(h.m(), 3);
        // Degree-3 vertex replaced by a triangle.
        let g = Graph::from_edges(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let sep = Separation::from_vertex_sets(&g, &[0, 1, 2, 3], &[0, 1, 2]);
        let (h, _) = elementary_reduction(&g, &[0], &sep).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(elementary_reduction(&g, &[3], &sep), Err(ReductionError::Protected(3)));
    }
}
