//! Vertex-disjoint routing by unit-capacity max-flow on the split graph.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub paths: Vec<Vec<usize>>,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkageOutcome {
    Paths(Linkage),
    /// Fewer than `k` vertices whose removal separates sources from targets.
    Cut(Vec<usize>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LinkageError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("vertex {0} out of range")]
    Vertex(usize),
    #[error("x_sub is not a subset of x")]
    NotSubset,
    #[error("x_sub has {0} vertices, need at least {1}")]
    SubsetTooSmall(usize, usize),
    #[error("full linkage is invalid: {0}")]
    BadFull(String),
    #[error("no linkage exists although one was promised")]
    Unroutable,
}

impl Linkage {
    /// Checks disjointness and endpoint membership.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let mut used = vec![false; g.n()];
        let src: std::collections::HashSet<_> = self.sources.iter().collect();
        let tgt: std::collections::HashSet<_> = self.targets.iter().collect();
        for p in &self.paths {
            if !g.is_path(p) {
                return Err(format!("not a path: {p:?}"));
            }
            if !src.contains(&p[0]) || !tgt.contains(p.last().unwrap()) {
                return Err(format!("bad endpoints: {p:?}"));
            }
            for &v in p {
                if used[v] {
                    return Err(format!("vertex {v} shared"));
                }
                used[v] = true;
            }
        }
        Ok(())
    }
}

struct Flow {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i32>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow { head: vec![NIL; nodes], to: Vec::new(), cap: Vec::new(), next: Vec::new() }
    }

    fn add(&mut self, a: usize, b: usize, c: i32) {
        for (x, y, cc) in [(a, b, c), (b, a, 0)] {
            self.to.push(y);
            self.cap.push(cc);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let n = self.head.len();
        let mut pre = vec![NIL; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if u == t {
                break;
            }
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    pre[v] = e;
                    q.push_back(v);
                }
                e = self.next[e];
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = pre[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.to[e ^ 1];
        }
        true
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                e = self.next[e];
            }
        }
        seen
    }
}

/// `k` vertex-disjoint paths from `sources` to `targets` inside the vertices
/// allowed by `allowed` (all if `None`), or a cut of fewer than `k` vertices.
pub fn vertex_disjoint_linkage_in(
    g: &Graph,
    allowed: Option<&[bool]>,
    sources: &[usize],
    targets: &[usize],
    k: usize,
) -> Result<LinkageOutcome, LinkageError> {
    if k == 0 {
        return Err(LinkageError::ZeroK);
    }
    let n = g.n();
    if let Some(&v) = sources.iter().chain(targets).find(|&&v| v >= n) {
        return Err(LinkageError::Vertex(v));
    }
    let ok = |v: usize| allowed.is_none_or(|a| a[v]);
    let (s, t) = (2 * n, 2 * n + 1);
    let mut f = Flow::new(2 * n + 2);
    // Add edges in reverse so that adjacency iteration visits small ids first.
    let mut is_t = vec![false; n];
    for &v in targets {
        is_t[v] = true;
    }
    let mut ts: Vec<usize> = targets.iter().copied().filter(|&v| ok(v)).collect();
    ts.sort_unstable();
    ts.dedup();
    for &v in ts.iter().rev() {
        f.add(2 * v + 1, t, 1);
    }
    for u in (0..n).rev() {
        if !ok(u) {
            continue;
        }
        for &v in g.neighbors(u).iter().rev() {
            if ok(v) {
                f.add(2 * u + 1, 2 * v, 1);
            }
        }
        f.add(2 * u, 2 * u + 1, 1);
    }
    let mut ss: Vec<usize> = sources.iter().copied().filter(|&v| ok(v)).collect();
    ss.sort_unstable();
    ss.dedup();
    for &v in ss.iter().rev() {
        f.add(s, 2 * v, 1);
    }
    let mut flow = 0;
    while flow < k && f.augment(s, t) {
        flow += 1;
    }
    if flow < k {
        let r = f.reachable(s);
        let cut: Vec<usize> = (0..n).filter(|&v| ok(v) && r[2 * v] && !r[2 * v + 1]).collect();
        return Ok(LinkageOutcome::Cut(cut));
    }
    // Decompose the flow into paths.
    let mut paths = Vec::with_capacity(k);
    let mut e = f.head[s];
    while e != NIL {
        if e.is_multiple_of(2) && f.cap[e] == 0 {
            let mut path = Vec::new();
            let mut node = f.to[e];
            loop {
                let v = node / 2;
                path.push(v);
                // node is v_in; move to v_out then along a saturated edge.
                let vout = 2 * v + 1;
                let mut e2 = f.head[vout];
                let mut nxt = NIL;
                while e2 != NIL {
                    if e2.is_multiple_of(2) && f.cap[e2] == 0 {
                        nxt = e2;
                        break;
                    }
                    e2 = f.next[e2];
                }
                let nxt = nxt;
                let dest = f.to[nxt];
                // consume so that cycles in the flow are not revisited
                f.cap[nxt] = -1;
                if dest == t {
                    break;
                }
                node = dest;
            }
            paths.push(path);
        }
        e = f.next[e];
    }
    let paths = paths.into_iter().map(shortcut_simple).collect();
    Ok(LinkageOutcome::Paths(Linkage { paths, sources: ss, targets: ts }))
}

/// Removes repeated vertices from a walk by cutting out loops.
fn shortcut_simple(walk: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    let mut pos = std::collections::HashMap::new();
    for v in walk {
        if let Some(&i) = pos.get(&v) {
            for w in out.drain(i + 1..) {
                pos.remove(&w);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

pub fn vertex_disjoint_linkage(
    g: &Graph,
    sources: &[usize],
    targets: &[usize],
    k: usize,
) -> Result<LinkageOutcome, LinkageError> {
    vertex_disjoint_linkage_in(g, None, sources, targets, k)
}

/// Re-routing claim: given `k` disjoint `x -> y` paths and `k - 1` disjoint
/// `x_sub -> y` paths, find `k` disjoint `x -> y` paths internally disjoint from
/// `x ∪ y` with at least `k - 1` of them starting in `x_sub`. The vertices of
/// `x \ x_sub` are unified into one super-source.
pub fn reroute_linkage(
    h: &Graph,
    x: &[usize],
    y: &[usize],
    x_sub: &[usize],
    full: &Linkage,
    k: usize,
) -> Result<Linkage, LinkageError> {
    if k == 0 {
        return Err(LinkageError::ZeroK);
    }
    let xs: std::collections::HashSet<usize> = x.iter().copied().collect();
    if x_sub.iter().any(|v| !xs.contains(v)) {
        return Err(LinkageError::NotSubset);
    }
    if x_sub.len() + 1 < k {
        return Err(LinkageError::SubsetTooSmall(x_sub.len(), k - 1));
    }
    if full.paths.len() < k {
        return Err(LinkageError::BadFull(format!("{} paths, need {k}", full.paths.len())));
    }
    full.check(h).map_err(LinkageError::BadFull)?;
    let n = h.n();
    let sub: std::collections::HashSet<usize> = x_sub.iter().copied().collect();
    let rest: Vec<usize> = x.iter().copied().filter(|v| !sub.contains(v)).collect();
    let ys: std::collections::HashSet<usize> = y.iter().copied().collect();
    // Auxiliary graph: vertices of x and y may not be used as inner vertices,
    // which we enforce by letting them only touch the path ends: build a graph
    // where edges between two x/y vertices that are not useful are dropped.
    let star = n;
    let mut aux = Graph::new(n + 1);
    for (u, v) in h.edges() {
        aux.add_edge(u, v);
    }
    for &r in &rest {
        for &w in h.neighbors(r) {
            if w != star {
                aux.add_edge(star, w);
            }
        }
    }
    let mut allowed = vec![true; n + 1];
    for &r in &rest {
        allowed[r] = false;
    }
    let mut sources: Vec<usize> = x_sub.to_vec();
    if !rest.is_empty() {
        sources.push(star);
    }
    // Inner vertices must avoid x ∪ y: route in a graph where x/y vertices
    // can only be endpoints. We split: sources may only leave, targets only enter.
    let mut g2 = Graph::new(n + 1);
    for (u, v) in aux.edges() {
        let ux = xs.contains(&u) || u == star;
        let vx = xs.contains(&v) || v == star;
        let uy = ys.contains(&u);
        let vy = ys.contains(&v);
        // Drop edges between two terminals of the same side.
        if (ux && vx) || (uy && vy) {
            continue;
        }
        g2.add_edge(u, v);
    }
    let outcome = vertex_disjoint_linkage_in(&g2, Some(&allowed), &sources, y, k)?;
    let LinkageOutcome::Paths(mut l) = outcome else {
        return Err(LinkageError::Unroutable);
    };
    // Paths may still pass through an x or y vertex in the middle; a path is
    // truncated at its last x vertex and its first y vertex after that.
    for p in &mut l.paths {
        if p[0] == star {
            // Re-attach to a vertex of `rest` adjacent to the second vertex.
            let second = p[1];
            let r = *rest.iter().find(|&&r| h.has_edge(r, second)).expect("star neighbor");
            p[0] = r;
        }
        let last_x = p.iter().rposition(|v| xs.contains(v)).unwrap_or(0);
        let tail: Vec<usize> = p[last_x..].to_vec();
        let first_y = tail.iter().position(|v| ys.contains(v)).expect("ends in y");
        *p = tail[..=first_y].to_vec();
    }
    l.sources = x.to_vec();
    l.targets = y.to_vec();
    l.check(h).map_err(LinkageError::BadFull)?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_id(r: usize, i: usize, j: usize) -> usize {
        i * r + j
    }

    #[test]
    fn grid_rows() {
        let (h, r) = (4, 6);
        let g = Graph::grid(h, r);
        let src: Vec<_> = (0..h).map(|i| grid_id(r, i, 0)).collect();
        let tgt: Vec<_> = (0..h).map(|i| grid_id(r, i, r - 1)).collect();
        let LinkageOutcome::Paths(l) = vertex_disjoint_linkage(&g, &src, &tgt, h).unwrap() else { panic!() };
        assert_eq!(l.paths.len(), h);
        l.check(&g).unwrap();
        for (i, p) in l.paths.iter().enumerate() {
            assert_eq!(p.len(), r, "row {i} should be straight");
        }
    }

    #[test]
    fn star_cut() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let out = vertex_disjoint_linkage(&g, &[1, 2], &[3, 4], 2).unwrap();
        assert_eq!(out, LinkageOutcome::Cut(vec![0]));
    }

    #[test]
    fn small_grid_two_paths() {
        let g = Graph::grid(3, 3);
        let out = vertex_disjoint_linkage(&g, &[0, 6], &[2, 5], 2).unwrap();
        let LinkageOutcome::Paths(l) = out else { panic!() };
        l.check(&g).unwrap();
    }

    #[test]
    fn overlap_gives_trivial_path() {
        let g = Graph::path(3);
        let LinkageOutcome::Paths(l) = vertex_disjoint_linkage(&g, &[1], &[1], 1).unwrap() else { panic!() };
        assert_eq!(l.paths, vec![vec![1]]);
    }

    #[test]
    fn reroute_grid() {
        let g = Graph::grid(4, 4);
        let x: Vec<_> = (0..4).map(|i| grid_id(4, i, 0)).collect();
        let y: Vec<_> = (0..4).map(|i| grid_id(4, i, 3)).collect();
        let LinkageOutcome::Paths(full) = vertex_disjoint_linkage(&g, &x, &y, 4).unwrap() else { panic!() };
        let l = reroute_linkage(&g, &x, &y, &x[..3], &full, 4).unwrap();
        assert_eq!(l.paths.len(), 4);
        let from_sub = l.paths.iter().filter(|p| x[..3].contains(&p[0])).count();
        assert!(from_sub >= 3);
    }

    #[test]
    fn reroute_k1_empty_sub() {
        let g = Graph::path(4);
        let full = Linkage { paths: vec![vec![0, 1, 2, 3]], sources: vec![0], targets: vec![3] };
        let l = reroute_linkage(&g, &[0], &[3], &[], &full, 1).unwrap();
        assert_eq!(l.paths, vec![vec![0, 1, 2, 3]]);
    }
}
