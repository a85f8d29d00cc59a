//! Grid gadgets whose presence as a minor forces a clique minor, and the
//! routines that turn a model of such a gadget into a `K_t` model.
//!
//! Grids use 1-based cells `(row, col)`; cell `(i, j)` of an `h x r` grid has
//! vertex id `(i - 1) * r + (j - 1)`, matching [`Graph::grid`].

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{compose_models, validate_minor_model, Graph, MinorModel, ModelReport};
use crate::linkage::{vertex_disjoint_linkage, LinkageOutcome};
use crate::wall::{identity_wall, Wall};

pub type Cell = (usize, usize);

/// Number of unordered pairs of `t` elements.
pub fn pair_count(t: usize) -> usize {
    t * t.saturating_sub(1) / 2
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error("t must be at least 2, got {0}")]
    SmallT(usize),
    #[error("infeasible sizing: {0}")]
    Sizing(String),
    #[error("instance fails its family constraints: {0}")]
    InvalidInstance(String),
    #[error("expected a {expected:?} instance, got {found:?}")]
    FamilyMismatch { expected: Family, found: Family },
    #[error("input model: {0}")]
    Model(String),
    #[error("routing failed: {0}")]
    Route(String),
    #[error("branch set {0} meets fewer than t rows and fewer than t columns of the wall")]
    NotGrasped(usize),
    #[error(transparent)]
    Selection(#[from] SelectionError),
}

// ---------------------------------------------------------------------------
// Swap sequences

/// Permutations `perms[0..=T]` of `1..=t`; consecutive ones differ by one
/// adjacent transposition and every pair is adjacent somewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSequence {
    pub t: usize,
    pub perms: Vec<Vec<usize>>,
}

pub fn swap_sequence(t: usize) -> Result<SwapSequence, ForgeError> {
    if t < 2 {
        return Err(ForgeError::SmallT(t));
    }
    let mut cur: Vec<usize> = (1..=t).collect();
    let mut perms = vec![cur.clone()];
    // Block k walks element k to the end through positions 1..=t-k.
    for k in 1..t {
        for i in 1..=t - k {
            cur.swap(i - 1, i);
            perms.push(cur.clone());
        }
    }
    Ok(SwapSequence { t, perms })
}

impl SwapSequence {
    /// For step `i` (from `perms[i]` to `perms[i + 1]`), the 1-based position
    /// `j` with positions `j, j + 1` exchanged.
    pub fn swap_positions(&self) -> Vec<usize> {
        self.perms.windows(2).map(|w| w[0].iter().zip(&w[1]).position(|(a, b)| a != b).map_or(0, |p| p + 1)).collect()
    }

    pub fn check(&self) -> Result<(), String> {
        let t = self.t;
        if self.perms.len() != pair_count(t) + 1 {
            return Err(format!("{} permutations, expected {}", self.perms.len(), pair_count(t) + 1));
        }
        let id: Vec<usize> = (1..=t).collect();
        if self.perms[0] != id {
            return Err("first permutation is not the identity".into());
        }
        let mut second = id.clone();
        second.swap(0, 1);
        if self.perms[1] != second {
            return Err("second permutation is not (2,1,3,..)".into());
        }
        for p in &self.perms {
            let mut s = p.clone();
            s.sort_unstable();
            if s != id {
                return Err(format!("{p:?} is not a permutation"));
            }
        }
        for (i, w) in self.perms.windows(2).enumerate() {
            let diff: Vec<usize> = (0..t).filter(|&k| w[0][k] != w[1][k]).collect();
            let ok =
                diff.len() == 2 && diff[1] == diff[0] + 1 && w[0][diff[0]] == w[1][diff[1]] && w[0][diff[1]] == w[1][diff[0]];
            if !ok {
                return Err(format!("step {i} is not an adjacent swap"));
            }
        }
        let mut seen = BTreeSet::new();
        for p in &self.perms {
            for w in p.windows(2) {
                seen.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        if seen.len() != pair_count(t) {
            return Err(format!("{} of {} pairs explored", seen.len(), pair_count(t)));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Family instances

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "HSTAR")]
    HStar,
    H1,
    H2,
    H3,
}

/// Extra edge of an instance. For H2 and H3 `x` and `y` carry their roles;
/// for H* and H1 the orientation is irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEdge {
    pub x: Cell,
    pub y: Cell,
}

/// An `h x r` grid plus extra edges `E'`, tagged with its family and `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub t: usize,
    pub h: usize,
    pub r: usize,
    pub edges: Vec<FamilyEdge>,
}

/// Optional overrides for canonical instances: grid height and the column
/// spacing between consecutive x-endpoints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sizing {
    pub h: Option<usize>,
    pub spacing: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyReport {
    pub failures: Vec<String>,
}

impl FamilyReport {
    pub fn is_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FamilyInstance {
    pub fn id(&self, c: Cell) -> usize {
        (c.0 - 1) * self.r + (c.1 - 1)
    }

    pub fn cell(&self, v: usize) -> Cell {
        (v / self.r + 1, v % self.r + 1)
    }

    fn in_grid(&self, c: Cell) -> bool {
        (1..=self.h).contains(&c.0) && (1..=self.r).contains(&c.1)
    }

    /// The grid plus `E'`.
    pub fn graph(&self) -> Result<Graph, ForgeError> {
        let mut g = Graph::grid(self.h, self.r);
        for e in &self.edges {
            if !self.in_grid(e.x) || !self.in_grid(e.y) || e.x == e.y {
                return Err(ForgeError::InvalidInstance(format!("bad extra edge {e:?}")));
            }
            g.add_edge(self.id(e.x), self.id(e.y));
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn hstar_cross_edges(t: usize) -> Vec<FamilyEdge> {
    (1..=pair_count(t))
        .flat_map(|i| [FamilyEdge { x: (t, t * i), y: (t + 1, t * i + 1) }, FamilyEdge { x: (t + 1, t * i), y: (t, t * i + 1) }])
        .collect()
}

/// Deterministic smallest member of a family (up to the sizing overrides):
/// endpoints sit on the middle row of the band that must hold `X`, at the
/// minimal legal column spacing.
pub fn build_family_instance(family: Family, t: usize, sizing: Sizing) -> Result<FamilyInstance, ForgeError> {
    if t < 2 {
        return Err(ForgeError::SmallT(t));
    }
    let tt = pair_count(t);
    let pick = |what: &str, given: Option<usize>, min: usize| -> Result<usize, ForgeError> {
        match given {
            Some(v) if v < min => Err(ForgeError::Sizing(format!("{what} {v} below the minimum {min}"))),
            Some(v) => Ok(v),
            None => Ok(min),
        }
    };
    let inst = match family {
        Family::HStar => {
            if sizing.h.is_some_and(|h| h != 2 * t) {
                return Err(ForgeError::Sizing(format!("H* has exactly {} rows", 2 * t)));
            }
            FamilyInstance { family, t, h: 2 * t, r: tt * t + 1, edges: hstar_cross_edges(t) }
        }
        Family::H1 => {
            let h = pick("height", sizing.h, 2 * t + 1)?;
            let s = pick("spacing", sizing.spacing, t + 3)?;
            let mid = (t + 1 + h - t) / 2;
            let col = |q: usize| 2 + q * s;
            let edges = (0..tt).map(|k| FamilyEdge { x: (mid, col(2 * k)), y: (mid, col(2 * k + 1)) }).collect();
            FamilyInstance { family, t, h, r: col(2 * tt - 1) + 1, edges }
        }
        Family::H2 => {
            let h = pick("height", sizing.h, 4 * t + 1)?;
            let s = pick("spacing", sizing.spacing, t + 3)?;
            let mid = (2 * t + 1 + h - 2 * t) / 2;
            let k = 2 * tt + 2;
            let col = |q: usize| 2 + q * s;
            let edges = (0..k).map(|q| FamilyEdge { x: (mid, col(q)), y: (1, col(q)) }).collect();
            FamilyInstance { family, t, h, r: col(k - 1) + 1, edges }
        }
        Family::H3 => {
            let h = pick("height", sizing.h, 4 * t + 1)?;
            let s = pick("spacing", sizing.spacing, 2 * t + 3)?;
            let mid = (2 * t + 1 + h - 2 * t) / 2;
            let k = 10 * tt + 6;
            let col = |q: usize| 2 * t + 1 + q * s;
            let edges = (0..k).map(|q| FamilyEdge { x: (mid, col(q)), y: (mid, col(q) + t + 2) }).collect();
            FamilyInstance { family, t, h, r: col(k - 1) + t + 3, edges }
        }
    };
    let rep = validate_family(&inst);
    if !rep.is_pass() {
        return Err(ForgeError::Sizing(rep.failures.join("; ")));
    }
    Ok(inst)
}

/// Checks every constraint of the instance's family.
pub fn validate_family(inst: &FamilyInstance) -> FamilyReport {
    let mut f = Vec::new();
    let t = inst.t;
    if t < 2 {
        f.push(format!("t = {t} < 2"));
        return FamilyReport { failures: f };
    }
    let tt = pair_count(t);
    let (h, r) = (inst.h, inst.r);
    for e in &inst.edges {
        if !inst.in_grid(e.x) || !inst.in_grid(e.y) {
            f.push(format!("endpoint of {e:?} outside the {h}x{r} grid"));
        }
    }
    if !f.is_empty() {
        return FamilyReport { failures: f };
    }
    let xs: Vec<Cell> = inst.edges.iter().map(|e| e.x).collect();
    let ys: Vec<Cell> = inst.edges.iter().map(|e| e.y).collect();
    let distinct = |f: &mut Vec<String>| {
        let all: BTreeSet<Cell> = xs.iter().chain(&ys).copied().collect();
        if all.len() != 2 * inst.edges.len() {
            f.push(format!("{} distinct endpoints, expected {}", all.len(), 2 * inst.edges.len()));
        }
    };
    let separated = |f: &mut Vec<String>, pts: &[Cell], gap: usize, what: &str| {
        let mut cols: Vec<usize> = pts.iter().map(|c| c.1).collect();
        cols.sort_unstable();
        if let Some(w) = cols.windows(2).find(|w| w[1] - w[0] <= gap) {
            f.push(format!("{what} in columns {} and {} are not separated by {gap} columns", w[0], w[1]));
        }
    };
    let count = |f: &mut Vec<String>, want: usize| {
        if inst.edges.len() != want {
            f.push(format!("{} extra edges, expected {want}", inst.edges.len()));
        }
    };
    match inst.family {
        Family::HStar => {
            if h != 2 * t || r != tt * t + 1 {
                f.push(format!("grid is {h}x{r}, expected {}x{}", 2 * t, tt * t + 1));
            }
            let norm = |e: &FamilyEdge| if e.x <= e.y { (e.x, e.y) } else { (e.y, e.x) };
            let have: BTreeSet<(Cell, Cell)> = inst.edges.iter().map(norm).collect();
            let want: BTreeSet<(Cell, Cell)> = hstar_cross_edges(t).iter().map(norm).collect();
            if have != want || inst.edges.len() != want.len() {
                f.push("extra edges are not the cross edges".into());
            }
        }
        Family::H1 => {
            if h <= 2 * t {
                f.push(format!("height {h} <= 2t"));
            }
            count(&mut f, tt);
            distinct(&mut f);
            let ends: Vec<Cell> = xs.iter().chain(&ys).copied().collect();
            if ends.iter().any(|c| c.0 <= t || c.0 > h.saturating_sub(t)) {
                f.push("an endpoint lies outside the middle band".into());
            }
            if ends.iter().any(|c| c.1 == 1) {
                f.push("an endpoint lies in the first column".into());
            }
            separated(&mut f, &ends, t + 2, "endpoints");
        }
        Family::H2 | Family::H3 => {
            let h3 = inst.family == Family::H3;
            if h <= 4 * t {
                f.push(format!("height {h} <= 4t"));
            }
            count(&mut f, if h3 { 10 * tt + 6 } else { 2 * tt + 2 });
            distinct(&mut f);
            if xs.iter().any(|c| c.0 <= 2 * t || c.0 > h.saturating_sub(2 * t)) {
                f.push("an x-endpoint lies outside the middle band".into());
            }
            separated(&mut f, &xs, if h3 { 2 * t + 2 } else { t + 2 }, "x-endpoints");
            if h3 {
                if inst.edges.iter().any(|e| e.x.1.abs_diff(e.y.1) <= t + 1) {
                    f.push("an edge has endpoints within t+1 columns".into());
                }
                if xs.iter().chain(&ys).any(|c| c.1 <= t || c.1 == r) {
                    f.push("an endpoint lies in the first t columns or the last column".into());
                }
            } else if ys.iter().any(|c| c.0 > t && c.0 <= h.saturating_sub(t)) {
                f.push("a y-endpoint lies outside the top and bottom t rows".into());
            }
        }
    }
    FamilyReport { failures: f }
}

// ---------------------------------------------------------------------------
// Unconflicted edge selection

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SelectionError {
    #[error("edge {0} has both endpoints in one block")]
    SameBlock(usize),
    #[error("block {block} holds the x-endpoints of edges {a} and {b}")]
    SharedTail { block: usize, a: usize, b: usize },
    #[error("block digraph has a cycle through blocks {0:?}")]
    Cycle(Vec<usize>),
}

/// Edges given as `(x_block, y_block)` with blocks numbered left to right.
/// Returns indices of a subset of at least a quarter of the edges such that no
/// block holds both a selected x-endpoint and a selected y-endpoint.
pub fn select_unconflicted_edges(edges: &[(usize, usize)]) -> Result<Vec<usize>, SelectionError> {
    let mut tail_of: HashMap<usize, usize> = HashMap::new();
    for (i, &(x, y)) in edges.iter().enumerate() {
        if x == y {
            return Err(SelectionError::SameBlock(i));
        }
        if let Some(&a) = tail_of.get(&x) {
            return Err(SelectionError::SharedTail { block: x, a, b: i });
        }
        tail_of.insert(x, i);
    }
    let right: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].0 < edges[i].1).collect();
    let left: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].0 > edges[i].1).collect();
    let pick = if right.len() >= left.len() { right } else { left };
    let arcs: Vec<(usize, usize)> = pick.iter().map(|&i| edges[i]).collect();
    Ok(level_split(&arcs)?.into_iter().map(|k| pick[k]).collect())
}

/// Arcs `(tail, head)` with at most one arc leaving each node.
/// Each weak component is an in-arborescence; per component the larger of the
/// odd-level and even-level arc classes is kept (level = arcs from the tail to
/// the root). A directed cycle is reported with its nodes.
pub fn level_split(arcs: &[(usize, usize)]) -> Result<Vec<usize>, SelectionError> {
    let mut out: HashMap<usize, usize> = HashMap::new();
    for (i, &(u, _)) in arcs.iter().enumerate() {
        if let Some(&a) = out.get(&u) {
            return Err(SelectionError::SharedTail { block: u, a, b: i });
        }
        out.insert(u, i);
    }
    // depth[u] = (arcs from u to its root, root)
    let mut depth: HashMap<usize, (usize, usize)> = HashMap::new();
    for &(start, _) in arcs {
        let mut trail = Vec::new();
        let mut on_trail = BTreeSet::new();
        let mut u = start;
        let (mut d, root) = loop {
            if let Some(&known) = depth.get(&u) {
                break known;
            }
            match out.get(&u) {
                None => break (0, u),
                Some(&a) => {
                    if !on_trail.insert(u) {
                        let at = trail.iter().position(|&w| w == u).unwrap_or(0);
                        return Err(SelectionError::Cycle(trail[at..].to_vec()));
                    }
                    trail.push(u);
                    u = arcs[a].1;
                }
            }
        };
        for &w in trail.iter().rev() {
            d += 1;
            depth.insert(w, (d, root));
        }
    }
    let mut classes: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for (i, &(u, _)) in arcs.iter().enumerate() {
        let (d, root) = depth[&u];
        let c = classes.entry(root).or_default();
        if d % 2 == 1 {
            c.0.push(i);
        } else {
            c.1.push(i);
        }
    }
    let mut chosen: Vec<usize> =
        classes.into_values().flat_map(|(odd, even)| if odd.len() >= even.len() { odd } else { even }).collect();
    chosen.sort_unstable();
    Ok(chosen)
}

// ---------------------------------------------------------------------------
// Routing helpers (cells)

fn row_seg(i: usize, from: usize, to: usize) -> Vec<Cell> {
    if from <= to {
        (from..=to).map(|j| (i, j)).collect()
    } else {
        (to..=from).rev().map(|j| (i, j)).collect()
    }
}

/// Disjoint paths inside the grid box `rows x cols` joining `src[k]` to
/// `dst[k]`; fails unless the max-flow linkage keeps the given pairing.
fn box_linkage(rows: (usize, usize), cols: (usize, usize), src: &[Cell], dst: &[Cell]) -> Result<Vec<Vec<Cell>>, ForgeError> {
    let bw = cols.1 + 1 - cols.0;
    let bh = rows.1 + 1 - rows.0;
    let inside = |c: &Cell| (rows.0..=rows.1).contains(&c.0) && (cols.0..=cols.1).contains(&c.1);
    if !src.iter().chain(dst).all(inside) {
        return Err(ForgeError::Route(format!("terminal outside box {rows:?} x {cols:?}")));
    }
    let g = Graph::grid(bh, bw);
    let local = |c: &Cell| (c.0 - rows.0) * bw + (c.1 - cols.0);
    let s: Vec<usize> = src.iter().map(local).collect();
    let d: Vec<usize> = dst.iter().map(local).collect();
    match vertex_disjoint_linkage(&g, &s, &d, s.len()).map_err(|e| ForgeError::Route(e.to_string()))? {
        LinkageOutcome::Paths(l) => {
            let mut out = vec![Vec::new(); s.len()];
            for p in l.paths {
                let k = s.iter().position(|&v| v == p[0]).expect("linkage path starts at a source");
                if *p.last().unwrap() != d[k] {
                    return Err(ForgeError::Route("box linkage does not keep the order".into()));
                }
                out[k] = p.iter().map(|&v| (v / bw + rows.0, v % bw + cols.0)).collect();
            }
            Ok(out)
        }
        LinkageOutcome::Cut(c) => Err(ForgeError::Route(format!("box linkage blocked by a cut of size {}", c.len()))),
    }
}

/// Path `a ... b` attaching the clique pair `labels` (1-based, `a` on the path
/// of `labels.0`). `interior` joins the branch set of `labels.0`.
#[derive(Clone, Debug)]
struct Conn {
    a: Cell,
    interior: Vec<Cell>,
    b: Cell,
    labels: (usize, usize),
}

/// Pairs enumerated lexicographically over connectors sorted by their leftmost
/// endpoint; the endpoint further left gets the smaller label.
fn assign_labels(t: usize, conns: &mut [Conn]) -> Result<(), ForgeError> {
    if conns.len() != pair_count(t) {
        return Err(ForgeError::Route(format!("{} connectors for {} pairs", conns.len(), pair_count(t))));
    }
    for c in conns.iter_mut() {
        if c.b.1 < c.a.1 {
            std::mem::swap(&mut c.a, &mut c.b);
            c.interior.reverse();
        }
    }
    conns.sort_by_key(|c| c.a.1.min(c.b.1));
    let pairs = (1..=t).flat_map(|p| (p + 1..=t).map(move |q| (p, q)));
    for (c, pq) in conns.iter_mut().zip(pairs) {
        c.labels = pq;
    }
    Ok(())
}

/// `t` disjoint left-to-right paths in rows `top..=bottom` such that each
/// labelled point lies on the path of its label (paths indexed top to bottom).
/// Consecutive points must be more than `t + 2` columns apart.
fn route_labelled(t: usize, r: usize, top: usize, bottom: usize, pts: &[(Cell, usize)]) -> Result<Vec<Vec<Cell>>, ForgeError> {
    let mut pts = pts.to_vec();
    pts.sort_by_key(|p| p.0 .1);
    let mut paths: Vec<Vec<Cell>> = vec![Vec::new(); t];
    let mut prev: Option<(usize, usize)> = None;
    for &((i, j), l) in &pts {
        if i + 1 < l + top || i + t - l > bottom {
            return Err(ForgeError::Route(format!("row window for ({i},{j}) leaves rows {top}..={bottom}")));
        }
        let w0 = i + 1 - l;
        let sc = j.saturating_sub(1).max(1);
        let tc = (j + 1).min(r);
        match prev {
            None => {
                for (k, p) in paths.iter_mut().enumerate() {
                    p.extend(row_seg(w0 + k, 1, sc));
                }
            }
            Some((ptc, pw0)) => {
                if sc <= ptc {
                    return Err(ForgeError::Route(format!("points too close around column {j}")));
                }
                let src: Vec<Cell> = (0..t).map(|k| (pw0 + k, ptc)).collect();
                let dst: Vec<Cell> = (0..t).map(|k| (w0 + k, sc)).collect();
                let links = box_linkage((top, bottom), (ptc, sc), &src, &dst)?;
                for (p, l) in paths.iter_mut().zip(links) {
                    p.extend_from_slice(&l[1..]);
                }
            }
        }
        if tc > sc {
            for (k, p) in paths.iter_mut().enumerate() {
                p.extend(row_seg(w0 + k, sc + 1, tc));
            }
        }
        prev = Some((tc, w0));
    }
    Ok(paths)
}

fn conn_points(conns: &[Conn]) -> Vec<(Cell, usize)> {
    conns.iter().flat_map(|c| [(c.a, c.labels.0), (c.b, c.labels.1)]).collect()
}

fn boustrophedon(rows: impl Iterator<Item = usize>, r: usize) -> Vec<Cell> {
    rows.enumerate().flat_map(|(k, i)| if k % 2 == 0 { row_seg(i, 1, r) } else { row_seg(i, r, 1) }).collect()
}

/// Pairs consecutive hits of `ys` along `walk` into segments, each becoming a
/// connector between the x-endpoints of the two edges.
fn segments_to_conns(walk: &[Cell], edges: &[FamilyEdge], out: &mut Vec<Conn>) {
    let ymap: HashMap<Cell, usize> = edges.iter().enumerate().map(|(i, e)| (e.y, i)).collect();
    let hits: Vec<usize> = (0..walk.len()).filter(|&p| ymap.contains_key(&walk[p])).collect();
    for w in hits.chunks_exact(2) {
        let (ea, eb) = (ymap[&walk[w[0]]], ymap[&walk[w[1]]]);
        out.push(Conn { a: edges[ea].x, interior: walk[w[0]..=w[1]].to_vec(), b: edges[eb].x, labels: (0, 0) });
    }
}

fn route_hstar(inst: &FamilyInstance) -> Result<Vec<Vec<Cell>>, ForgeError> {
    let t = inst.t;
    let seq = swap_sequence(t)?;
    let swaps = seq.swap_positions();
    let mut paths: Vec<Vec<Cell>> = (1..=t).map(|k| vec![(k, 1)]).collect();
    let mut rows: Vec<usize> = (1..=t).collect();
    let mut who: Vec<usize> = (0..t).collect();
    for (step, &j) in swaps.iter().enumerate() {
        let i = step + 1;
        let (c0, c1) = (t * (i - 1) + 1, t * i);
        let ys: Vec<usize> = (t + 1 - j..=2 * t - j).collect();
        let src: Vec<Cell> = rows.iter().map(|&x| (x, c0)).collect();
        let dst: Vec<Cell> = ys.iter().map(|&y| (y, c1)).collect();
        let links = box_linkage((1, 2 * t), (c0, c1), &src, &dst)?;
        for (pos, l) in links.into_iter().enumerate() {
            let p = &mut paths[who[pos]];
            p.extend_from_slice(&l[1..]);
            let y = ys[pos];
            let next = if y == t {
                t + 1
            } else if y == t + 1 {
                t
            } else {
                y
            };
            p.push((next, c1 + 1));
        }
        who.swap(j - 1, j);
        rows = ys;
        if who.iter().zip(&seq.perms[i]).any(|(&w, &s)| w + 1 != s) {
            return Err(ForgeError::Route(format!("order after block {i} differs from the swap sequence")));
        }
    }
    Ok(paths)
}

fn route_h2(t: usize, h: usize, r: usize, edges: &[FamilyEdge]) -> Result<(Vec<Vec<Cell>>, Vec<Conn>), ForgeError> {
    let mut conns = Vec::new();
    segments_to_conns(&boustrophedon(1..=t, r), edges, &mut conns);
    segments_to_conns(&boustrophedon(h + 1 - t..=h, r), edges, &mut conns);
    if conns.len() < pair_count(t) {
        return Err(ForgeError::Route(format!("only {} snake segments", conns.len())));
    }
    conns.truncate(pair_count(t));
    assign_labels(t, &mut conns)?;
    let paths = route_labelled(t, r, t + 1, h - t, &conn_points(&conns))?;
    Ok((paths, conns))
}

fn route_h3(inst: &FamilyInstance) -> Result<(Vec<Vec<Cell>>, Vec<Conn>), ForgeError> {
    let (t, h, r) = (inst.t, inst.h, inst.r);
    let tt = pair_count(t);
    let banded = |c: Cell| c.0 <= t || c.0 > h - t;
    let e1: Vec<FamilyEdge> = inst.edges.iter().filter(|e| banded(e.y)).copied().collect();
    if e1.len() >= 2 * tt + 2 {
        return route_h2(t, h, r, &e1);
    }
    let h_eff = if (h - t) % 2 == 0 { h - 1 } else { h };
    // Edges whose x-block fits between the special block and the right border.
    let mut kept: Vec<FamilyEdge> =
        inst.edges.iter().filter(|e| !banded(e.y) && e.x.1 > 2 * t && e.x.1 + t <= r).copied().collect();
    kept.sort_by_key(|e| e.x.1);
    let mut blocks: Vec<(usize, usize)> = vec![(1, t)];
    for e in &kept {
        let (mut a, b) = (e.x.1 - t, e.x.1 + t);
        let pe = blocks.last().unwrap().1;
        if a <= pe {
            return Err(ForgeError::Route(format!("block around column {} overlaps its left neighbour", e.x.1)));
        }
        if a == pe + 2 {
            if blocks.len() == 1 {
                a -= 1;
            } else {
                blocks.last_mut().unwrap().1 += 1;
            }
        } else if a > pe + 2 {
            blocks.push((pe + 1, a - 1));
        }
        blocks.push((a, b));
    }
    let last = blocks.last().unwrap().1;
    if last < r {
        blocks.push((last + 1, r));
    }
    let mut col_block = vec![0; r + 1];
    for (bi, &(a, b)) in blocks.iter().enumerate() {
        for c in &mut col_block[a..=b] {
            *c = bi;
        }
    }
    let arcs: Vec<(usize, usize)> = kept.iter().map(|e| (col_block[e.x.1], col_block[e.y.1])).collect();
    let sel = select_unconflicted_edges(&arcs)?;
    if sel.len() < 2 * tt {
        return Err(ForgeError::Route(format!("{} unconflicted edges, need {}", sel.len(), 2 * tt)));
    }
    let estar: Vec<FamilyEdge> = sel.iter().map(|&i| kept[i]).collect();
    let mut xblock: Vec<Option<Cell>> = vec![None; blocks.len()];
    for e in &estar {
        xblock[col_block[e.x.1]] = Some(e.x);
    }
    // Walk through the lower part: bottom rows of x-blocks, everything below
    // the top t rows of the other blocks.
    let mut walk: Vec<Cell> = Vec::new();
    for (bi, &(c1, c2)) in blocks.iter().enumerate().skip(1) {
        if xblock[bi].is_some() {
            walk.extend(row_seg(h_eff, c1, c2));
            continue;
        }
        walk.extend((t + 1..=h_eff).rev().map(|i| (i, c1)));
        if c2 > c1 {
            for (k, i) in (t + 1..=h_eff).enumerate() {
                walk.extend(if k % 2 == 0 { row_seg(i, c1 + 1, c2) } else { row_seg(i, c2, c1 + 1) });
            }
        } else if bi + 1 != blocks.len() {
            return Err(ForgeError::Route(format!("one-column block at column {c1} is not the last")));
        }
    }
    let mut conns = Vec::new();
    segments_to_conns(&walk, &estar, &mut conns);
    if conns.len() < tt {
        return Err(ForgeError::Route(format!("only {} lower segments", conns.len())));
    }
    conns.truncate(tt);
    assign_labels(t, &mut conns)?;
    let label_of: HashMap<Cell, usize> = conn_points(&conns).into_iter().collect();
    let mut paths: Vec<Vec<Cell>> = (1..=t).map(|k| row_seg(k, 1, blocks[0].1)).collect();
    for (bi, &(c1, c2)) in blocks.iter().enumerate().skip(1) {
        let x = xblock[bi].filter(|x| label_of.contains_key(x));
        match x {
            None => {
                for (k, p) in paths.iter_mut().enumerate() {
                    p.extend(row_seg(k + 1, c1, c2));
                }
            }
            Some((i, xc)) => {
                let w0 = i + 1 - label_of[&(i, xc)];
                let src: Vec<Cell> = (1..=t).map(|k| (k, c1)).collect();
                let mid: Vec<Cell> = (0..t).map(|k| (w0 + k, xc - 1)).collect();
                let first = box_linkage((1, h_eff - 1), (c1, xc - 1), &src, &mid)?;
                let mid2: Vec<Cell> = (0..t).map(|k| (w0 + k, xc + 1)).collect();
                let dst: Vec<Cell> = (1..=t).map(|k| (k, c2)).collect();
                let second = box_linkage((1, h_eff - 1), (xc + 1, c2), &mid2, &dst)?;
                for (k, ((p, a), b)) in paths.iter_mut().zip(first).zip(second).enumerate() {
                    p.extend(a);
                    p.push((w0 + k, xc));
                    p.extend(b);
                }
            }
        }
    }
    Ok((paths, conns))
}

// ---------------------------------------------------------------------------
// Extraction

/// A `K_t` model inside the instance graph: the `t` disjoint label paths and
/// one connector per pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub paths: Vec<Vec<usize>>,
    /// `(p, q, path)`: 0-based labels and a path from path `p` to path `q`
    /// whose interior is disjoint from all label paths.
    pub connectors: Vec<(usize, usize, Vec<usize>)>,
    pub model: MinorModel,
}

fn assemble(inst: &FamilyInstance, hg: &Graph, paths: Vec<Vec<Cell>>, conns: Vec<Conn>) -> Result<Extraction, ForgeError> {
    let t = inst.t;
    let ids: Vec<Vec<usize>> = paths.iter().map(|p| p.iter().map(|&c| inst.id(c)).collect()).collect();
    for (k, p) in ids.iter().enumerate() {
        if !hg.is_path(p) {
            return Err(ForgeError::Route(format!("label path {k} is not a path")));
        }
    }
    let mut branch = ids.clone();
    let mut connectors = Vec::new();
    for c in &conns {
        let (p, q) = (c.labels.0 - 1, c.labels.1 - 1);
        if !paths[p].contains(&c.a) || !paths[q].contains(&c.b) {
            return Err(ForgeError::Route(format!("connector {:?} misses its label paths", c.labels)));
        }
        let inner: Vec<usize> = c.interior.iter().map(|&v| inst.id(v)).collect();
        branch[p].extend_from_slice(&inner);
        let mut full = vec![inst.id(c.a)];
        full.extend_from_slice(&inner);
        full.push(inst.id(c.b));
        connectors.push((p, q, full));
    }
    for b in &mut branch {
        b.sort_unstable();
    }
    let mut model = MinorModel { pattern: Graph::complete(t), branch_sets: branch, edge_witness: Vec::new() };
    model.fill_witnesses(hg);
    match validate_minor_model(hg, &model).map_err(|e| ForgeError::Route(e.to_string()))? {
        ModelReport::Pass => {}
        ModelReport::Fail(v) => return Err(ForgeError::Route(format!("assembled model: {v}"))),
    }
    if connectors.is_empty() {
        connectors = model.edge_witness.iter().map(|w| (w[0], w[1], vec![w[2], w[3]])).collect();
    }
    Ok(Extraction { paths: ids, connectors, model })
}

/// `K_t` model inside the instance graph itself.
pub fn extract_clique(inst: &FamilyInstance) -> Result<Extraction, ForgeError> {
    let rep = validate_family(inst);
    if !rep.is_pass() {
        return Err(ForgeError::InvalidInstance(rep.failures.join("; ")));
    }
    let hg = inst.graph()?;
    let (paths, conns) = match inst.family {
        Family::HStar => (route_hstar(inst)?, Vec::new()),
        Family::H1 => {
            let mut conns: Vec<Conn> =
                inst.edges.iter().map(|e| Conn { a: e.x, interior: Vec::new(), b: e.y, labels: (0, 0) }).collect();
            assign_labels(inst.t, &mut conns)?;
            (route_labelled(inst.t, inst.r, 1, inst.h, &conn_points(&conns))?, conns)
        }
        Family::H2 => route_h2(inst.t, inst.h, inst.r, &inst.edges)?,
        Family::H3 => route_h3(inst)?,
    };
    assemble(inst, &hg, paths, conns)
}

/// Each branch set meets at least `t` host rows or at least `t` host columns
/// of `wall`; returns the first offending branch set.
pub fn check_grasp(model: &MinorModel, wall: &Wall, t: usize) -> Result<(), usize> {
    let mut row_of: HashMap<usize, usize> = HashMap::new();
    let mut col_of: HashMap<usize, usize> = HashMap::new();
    for (i, r) in wall.host_rows().iter().enumerate() {
        row_of.extend(r.iter().map(|&v| (v, i)));
    }
    for (j, c) in wall.host_columns().iter().enumerate() {
        col_of.extend(c.iter().map(|&v| (v, j)));
    }
    for (k, bs) in model.branch_sets.iter().enumerate() {
        let rows: BTreeSet<usize> = bs.iter().filter_map(|v| row_of.get(v).copied()).collect();
        let cols: BTreeSet<usize> = bs.iter().filter_map(|v| col_of.get(v).copied()).collect();
        if rows.len() < t && cols.len() < t {
            return Err(k);
        }
    }
    Ok(())
}

fn clique_from(
    expected: Family,
    g: &Graph,
    inst: &FamilyInstance,
    m: &MinorModel,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ForgeError> {
    if inst.family != expected {
        return Err(ForgeError::FamilyMismatch { expected, found: inst.family });
    }
    let ex = extract_clique(inst)?;
    if m.pattern != inst.graph()? {
        return Err(ForgeError::Model("pattern is not the instance graph".into()));
    }
    match validate_minor_model(g, m).map_err(|e| ForgeError::Model(e.to_string()))? {
        ModelReport::Pass => {}
        ModelReport::Fail(v) => return Err(ForgeError::Model(v.to_string())),
    }
    let out = compose_models(g, m, &ex.model).map_err(|e| ForgeError::Model(e.to_string()))?;
    if let Some(w) = grasp_wall {
        check_grasp(&out, w, inst.t).map_err(ForgeError::NotGrasped)?;
    }
    Ok(out)
}

/// `K_t` model in `g` from a model `m` of the H* instance `inst`.
pub fn clique_from_hstar(
    g: &Graph,
    inst: &FamilyInstance,
    m: &MinorModel,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ForgeError> {
    clique_from(Family::HStar, g, inst, m, grasp_wall)
}

pub fn clique_from_h1(
    g: &Graph,
    inst: &FamilyInstance,
    m: &MinorModel,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ForgeError> {
    clique_from(Family::H1, g, inst, m, grasp_wall)
}

pub fn clique_from_h2(
    g: &Graph,
    inst: &FamilyInstance,
    m: &MinorModel,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ForgeError> {
    clique_from(Family::H2, g, inst, m, grasp_wall)
}

pub fn clique_from_h3(
    g: &Graph,
    inst: &FamilyInstance,
    m: &MinorModel,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ForgeError> {
    clique_from(Family::H3, g, inst, m, grasp_wall)
}

/// Host in which the instance is a wall minor: an `h x r` identity wall whose
/// grid contraction is the instance grid, plus one host edge per extra edge.
/// Returns the host, the wall and the model of the instance graph.
pub fn wall_host(inst: &FamilyInstance) -> Result<(Graph, Wall, MinorModel), ForgeError> {
    let (mut g, w) = identity_wall(inst.h, inst.r).map_err(|e| ForgeError::Sizing(e.to_string()))?;
    let (_, mut model) = w.contract_to_grid(&g);
    for e in &inst.edges {
        let a = model.branch_sets[inst.id(e.x)][0];
        let b = model.branch_sets[inst.id(e.y)][0];
        g.add_edge(a, b);
    }
    model.pattern = inst.graph()?;
    model.fill_witnesses(&g);
    Ok((g, w, model))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_sequence_examples() {
        let s = swap_sequence(3).unwrap();
        assert_eq!(s.perms, vec![vec![1, 2, 3], vec![2, 1, 3], vec![2, 3, 1], vec![3, 2, 1]]);
        assert_eq!(swap_sequence(2).unwrap().perms, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(swap_sequence(1), Err(ForgeError::SmallT(1)));
        for t in 2..=8 {
            swap_sequence(t).unwrap().check().unwrap();
        }
    }

    #[test]
    fn canonical_instances_validate() {
        for fam in [Family::HStar, Family::H1, Family::H2, Family::H3] {
            for t in 2..=5 {
                let inst = build_family_instance(fam, t, Sizing::default()).unwrap();
                assert!(validate_family(&inst).is_pass(), "{fam:?} t={t}");
                let back = FamilyInstance::from_json(&inst.to_json()).unwrap();
                assert_eq!(back, inst);
            }
        }
        let hs = build_family_instance(Family::HStar, 3, Sizing::default()).unwrap();
        assert_eq!((hs.h, hs.r, hs.edges.len()), (6, 10, 6));
        assert_eq!(build_family_instance(Family::H1, 3, Sizing::default()).unwrap().edges.len(), 3);
        assert_eq!(build_family_instance(Family::H3, 3, Sizing::default()).unwrap().edges.len(), 36);
    }

    #[test]
    fn broken_instances_fail() {
        let mut h1 = build_family_instance(Family::H1, 3, Sizing::default()).unwrap();
        h1.edges[1].x.1 = h1.edges[0].x.1;
        h1.edges[1].x.0 -= 1;
        assert!(!validate_family(&h1).is_pass());
        let mut h3 = build_family_instance(Family::H3, 3, Sizing::default()).unwrap();
        h3.edges.pop();
        assert!(!validate_family(&h3).is_pass());
        assert!(matches!(build_family_instance(Family::H1, 3, Sizing { h: Some(6), spacing: None }), Err(ForgeError::Sizing(_))));
    }

    #[test]
    fn extraction_from_canonical_instances() {
        for fam in [Family::HStar, Family::H1, Family::H2, Family::H3] {
            for t in 2..=4 {
                let inst = build_family_instance(fam, t, Sizing::default()).unwrap();
                let ex = extract_clique(&inst).unwrap();
                let hg = inst.graph().unwrap();
                assert!(validate_minor_model(&hg, &ex.model).unwrap().is_pass(), "{fam:?} t={t}");
                let pairs: BTreeSet<(usize, usize)> = ex.connectors.iter().map(|c| (c.0.min(c.1), c.0.max(c.1))).collect();
                assert_eq!(pairs.len(), pair_count(t));
                assert_eq!(ex.connectors.len(), pair_count(t));
            }
        }
    }

    #[test]
    fn h3_with_banded_y_takes_the_snake_route() {
        let t = 3;
        let mut inst = build_family_instance(Family::H3, t, Sizing::default()).unwrap();
        for e in inst.edges.iter_mut().take(2 * pair_count(t) + 2) {
            e.y.0 = 1;
        }
        assert!(validate_family(&inst).is_pass());
        let ex = extract_clique(&inst).unwrap();
        assert!(ex.connectors.iter().all(|c| c.2.len() > 2));
    }

    #[test]
    fn selection_examples() {
        // Each edge into its own fresh block: forest of single arcs.
        let star_free = [(0, 1), (2, 3), (4, 5), (6, 7)];
        assert_eq!(select_unconflicted_edges(&star_free).unwrap().len(), 4);
        // Directed path 0 -> 1 -> 2 -> 3 -> 4: alternate levels.
        let path = [(0, 1), (1, 2), (2, 3), (3, 4)];
        let s = select_unconflicted_edges(&path).unwrap();
        assert_eq!(s, vec![1, 3]);
        assert!(matches!(select_unconflicted_edges(&[(1, 1)]), Err(SelectionError::SameBlock(0))));
        assert!(matches!(level_split(&[(0, 1), (1, 2), (2, 0)]), Err(SelectionError::Cycle(_))));
    }
}
