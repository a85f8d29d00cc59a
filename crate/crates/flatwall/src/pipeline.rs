//! Top-level flows: the bounded-degree pipeline (no apex set) and the general
//! pipeline with an apex set, including apex extraction and its three cases.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{cut_wall_to_chain, Chain, ChainError};
use crate::classify::{
    bridges_of, classify, core_wall, flat_from_type4, kt_from_type1, kt_from_type3, push_down, verify_flat_certificate, without,
    BridgeKind, ClassifyError, FlatWallCertificate, Type1Route, WallType,
};
use crate::forge::{check_grasp, clique_from_h3, pair_count, validate_family, Family, FamilyEdge, FamilyInstance, ForgeError};
use crate::graph::{validate_minor_model, Graph, MinorModel, ModelError};
use crate::linkage::{vertex_disjoint_linkage, LinkageError, LinkageOutcome};
use crate::mesh::{join, LinePos, Mesh, MeshError};
use crate::wall::Wall;

#[derive(Error, Debug)]
pub enum PipelineError {
    #[error("maximum degree {got} exceeds the bound {bound}")]
    Degree { got: usize, bound: usize },
    #[error("bad parameters: {0}")]
    Param(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("apex partition infeasible: {0}")]
    Partition(String),
    #[error("need {need} routed paths, found {got}")]
    TooFew { need: usize, got: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Linkage(#[from] LinkageError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Bounded degree, no apex set.
    Weak,
    /// Any degree, apex set of at most `t - 5` vertices.
    Strong,
}

/// Sizes derived from `(t, w)` and, in weak mode, the degree bound `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub mode: Mode,
    pub t: usize,
    pub w: usize,
    /// `t(t-1)/2`.
    pub tt: usize,
    pub d: Option<usize>,
    /// Core depth of the basic walls.
    pub tau: usize,
    /// Height (and width) of a basic wall.
    pub z: usize,
    /// Number of basic walls.
    pub n: usize,
    /// Side of the input wall.
    pub r: usize,
    /// Values set by hand; the size guarantees no longer apply when non-empty.
    pub overrides: Vec<String>,
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

impl Params {
    pub fn weak(t: usize, w: usize, d: usize) -> Result<Params> {
        if t < 2 || w < 1 || d < 1 {
            return Err(PipelineError::Param(format!("t = {t}, w = {w}, D = {d}")));
        }
        let tt = pair_count(t);
        let n = 8 * d * d * (10 * tt + 6) + 14 * tt + 8;
        Ok(Params::with(Mode::Weak, t, w, Some(d), n))
    }

    pub fn strong(t: usize, w: usize) -> Result<Params> {
        if t < 2 || w < 1 {
            return Err(PipelineError::Param(format!("t = {t}, w = {w}")));
        }
        let n = 500 * pair_count(t) + 200;
        Ok(Params::with(Mode::Strong, t, w, None, n))
    }

    fn with(mode: Mode, t: usize, w: usize, d: Option<usize>, n: usize) -> Params {
        let z = w + 4 * t;
        Params { mode, t, w, tt: pair_count(t), d, tau: 2 * t, z, n, r: z * (2 + ceil_sqrt(n)), overrides: Vec::new() }
    }

    /// Fewest strips `s >= 3` with `s(s-2) >= n`.
    pub fn strips(&self) -> usize {
        (3..).find(|s| s * (s - 2) >= self.n).unwrap()
    }

    fn refit(&mut self, what: String) {
        self.overrides.push(what);
        self.r = self.z * self.strips();
    }

    pub fn override_n(mut self, n: usize) -> Params {
        self.n = n;
        self.refit(format!("N = {n}"));
        self
    }

    pub fn override_z(mut self, z: usize) -> Params {
        self.z = z;
        self.refit(format!("z = {z}"));
        self
    }

    pub fn override_tau(mut self, tau: usize) -> Params {
        self.tau = tau;
        self.refit(format!("tau = {tau}"));
        self
    }
}

/// Which construction produced a clique minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Type3,
    Type1H2,
    Type1Crosses,
    Type2Matching,
    ApexPaths,
    ManyApexes,
    ApexClusters,
    ResidualType1,
    ResidualCrosses,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    CliqueMinor {
        model: MinorModel,
        route: Route,
        /// Every branch set meets `t` rows or `t` columns of the input wall.
        grasped: bool,
    },
    Flat {
        apex: Vec<usize>,
        cert: FlatWallCertificate,
    },
    /// No branch applied; only reachable with overridden sizes.
    Inconclusive {
        reason: String,
    },
}

impl Outcome {
    fn clique(model: MinorModel, route: Route, wall: &Wall, t: usize) -> Outcome {
        let grasped = check_grasp(&model, wall, t).is_ok();
        Outcome::CliqueMinor { model, route, grasped }
    }
}

/// Basic walls of height `p.z`, cut from the top-left square of `wall`, first
/// `p.n` kept.
pub fn build_chain(g: &Graph, wall: &Wall, p: &Params) -> Result<Chain> {
    if p.n < 3 {
        return Err(PipelineError::Param(format!("N = {} < 3", p.n)));
    }
    let s = p.strips();
    let side = s * p.z;
    if wall.h() < side || wall.r() < side {
        return Err(PipelineError::Param(format!("wall {}x{} is smaller than {side}x{side}", wall.h(), wall.r())));
    }
    Ok(cut_wall_to_chain(g, wall, s, p.z)?.truncate(p.n))
}

fn flat_outcome(g: &Graph, chain: &Chain, i: usize, tau: usize, apex: &[usize]) -> Result<Outcome> {
    let cert = flat_from_type4(g, chain, i, tau, apex)?;
    let rep = verify_flat_certificate(g, &cert);
    if !rep.is_pass() {
        return Err(PipelineError::Construction(format!("certificate of wall {i} fails: {}", rep.failures.join("; "))));
    }
    Ok(Outcome::Flat { apex: apex.to_vec(), cert })
}

fn type1_route(r: Type1Route) -> Route {
    match r {
        Type1Route::H2 => Route::Type1H2,
        Type1Route::Crosses => Route::Type1Crosses,
    }
}

/// Bounded-degree flow: classify the interior basic walls and act on the
/// first type-4 wall, else on many type-3, type-1 or type-2 walls.
pub fn flat_wall_weak(g: &Graph, wall: &Wall, p: &Params) -> Result<Outcome> {
    let d = p.d.ok_or_else(|| PipelineError::Param("weak mode needs a degree bound".into()))?;
    if g.max_degree() > d {
        return Err(PipelineError::Degree { got: g.max_degree(), bound: d });
    }
    wall.check(g).map_err(|e| PipelineError::Param(format!("wall: {e}")))?;
    let chain = build_chain(g, wall, p)?;
    let (t, tt, tau) = (p.t, p.tt, p.tau);
    let mut crosses = Vec::new();
    let mut type1 = Vec::new();
    let mut type2 = Vec::new();
    for i in 1..chain.len() - 1 {
        match classify(g, &chain, i, tau)? {
            WallType::Type4 { .. } => return flat_outcome(g, &chain, i, tau, &[]),
            WallType::Type3(x) => crosses.push((i, x)),
            WallType::Type1(b) => {
                let nb = chain.neighborhood(i, g.n());
                let path = b.iter().filter(|b| b.neighborhood).find_map(|b| b.path(g, |y| nb[y]));
                type1.push((i, path.ok_or_else(|| PipelineError::Construction(format!("wall {i}: no bridge path")))?));
            }
            WallType::Type2(_) => type2.push(i),
        }
    }
    if crosses.len() >= 2 * tt {
        let m = kt_from_type3(g, &chain, &crosses, tau, t, None)?;
        return Ok(Outcome::clique(m, Route::Type3, wall, t));
    }
    if type1.len() >= 12 * tt + 6 {
        let k = kt_from_type1(g, &chain, &type1, tau, t, None)?;
        return Ok(Outcome::clique(k.model, type1_route(k.route), wall, t));
    }
    let need = 10 * tt + 6;
    let sel: Vec<usize> = type2.iter().step_by(2).take(4 * d * d * need).copied().collect();
    let paths = gather_bridge_matching(g, &chain, &sel, tau)?;
    if paths.len() < need {
        return Ok(Outcome::Inconclusive {
            reason: format!(
                "{} type-3, {} type-1, {} type-2 walls; {} matched bridge paths of {need}",
                crosses.len(),
                type1.len(),
                type2.len(),
                paths.len()
            ),
        });
    }
    let (inst, model) = h3_from_paths(g, &chain, &paths, t)?;
    let m = clique_from_h3(g, &inst, &model, None)?;
    Ok(Outcome::clique(m, Route::Type2Matching, wall, t))
}

/// A path from the core interior of basic wall `wall` (first vertex) to the
/// chain far from that wall (last vertex), internally off the chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedPath {
    pub wall: usize,
    pub path: Vec<usize>,
}

impl RoutedPath {
    pub fn x(&self) -> usize {
        self.path[0]
    }

    pub fn y(&self) -> usize {
        *self.path.last().unwrap()
    }
}

/// Paths between distinct selected type-2 walls or from a selected wall to the
/// chain outside its neighbourhood, pairwise disjoint, one per wall at most.
///
/// Each wall tags one bridge. A bridge tagged once yields a direct path; a
/// component tagged several times pairs its tags through a spanning tree.
pub fn gather_bridge_matching(g: &Graph, chain: &Chain, selected: &[usize], tau: usize) -> Result<Vec<RoutedPath>> {
    let n = g.n();
    #[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
    enum Key {
        Edge(usize, usize),
        Comp(usize),
    }
    struct Tag {
        wall: usize,
        x: usize,
        u: usize,
        bridge: crate::classify::Bridge,
    }
    let mut groups: BTreeMap<Key, Vec<Tag>> = BTreeMap::new();
    for &i in selected {
        let bridges = bridges_of(g, chain, i, tau)?;
        if bridges.iter().any(|b| b.neighborhood) || bridges.is_empty() {
            return Err(PipelineError::Construction(format!("wall {i} is not type 2")));
        }
        let b = bridges.into_iter().next().unwrap();
        match &b.kind {
            BridgeKind::Edge(x, y) => {
                let key = Key::Edge((*x).min(*y), (*x).max(*y));
                groups.entry(key).or_default().push(Tag { wall: i, x: *x, u: *y, bridge: b.clone() });
            }
            BridgeKind::Component(c) => {
                let x = b.inner[0];
                let u = *g.neighbors(x).iter().find(|w| c.contains(w)).unwrap();
                let key = Key::Comp(*c.iter().min().unwrap());
                groups.entry(key).or_default().push(Tag { wall: i, x, u, bridge: b.clone() });
            }
        }
    }
    let mut raw: Vec<RoutedPath> = Vec::new();
    for (key, tags) in &groups {
        match key {
            Key::Edge(..) => {
                let tag = &tags[0];
                let path = if tags.len() > 1 { vec![tag.x, tags[1].x] } else { vec![tag.x, tag.u] };
                raw.push(RoutedPath { wall: tag.wall, path });
            }
            Key::Comp(_) if tags.len() == 1 => {
                let tag = &tags[0];
                let nb = chain.neighborhood(tag.wall, n);
                if let Some(path) = tag.bridge.path(g, |y| !nb[y]) {
                    raw.push(RoutedPath { wall: tag.wall, path });
                }
            }
            Key::Comp(_) => {
                let BridgeKind::Component(c) = &tags[0].bridge.kind else { unreachable!() };
                let ends: Vec<(usize, usize)> = tags.iter().map(|t| (t.x, t.u)).collect();
                let wall_of: HashMap<usize, usize> = tags.iter().map(|t| (t.x, t.wall)).collect();
                for path in tree_pairs(g, c, &ends) {
                    raw.push(RoutedPath { wall: wall_of[&path[0]], path });
                }
            }
        }
    }
    raw.sort_by_key(|p| p.wall);
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for p in raw {
        if p.path.iter().any(|&v| used[v]) {
            continue;
        }
        p.path.iter().for_each(|&v| used[v] = true);
        out.push(p);
    }
    Ok(out)
}

/// Disjoint paths pairing the terminals `x` (each hanging off `u` in the
/// component `comp`): repeatedly take the deepest tree vertex with two live
/// terminals below it, join two of them through it, retire its subtree.
fn tree_pairs(g: &Graph, comp: &[usize], ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let inside: std::collections::HashSet<usize> = comp.iter().copied().collect();
    let root = ends[0].1;
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut depth: HashMap<usize, usize> = HashMap::from([(root, 0)]);
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if inside.contains(&w) && !depth.contains_key(&w) {
                depth.insert(w, depth[&v] + 1);
                parent.insert(w, v);
                q.push_back(w);
            }
        }
    }
    for &(x, u) in ends {
        parent.insert(x, u);
        depth.insert(x, depth[&u] + 1);
    }
    let up = |mut v: usize, stop: usize| {
        let mut p = vec![v];
        while v != stop {
            v = parent[&v];
            p.push(v);
        }
        p
    };
    let ancestors = |mut v: usize| {
        let mut a = vec![v];
        while let Some(&p) = parent.get(&v) {
            v = p;
            a.push(v);
        }
        a
    };
    let mut live: Vec<usize> = ends.iter().map(|e| e.0).collect();
    let mut out = Vec::new();
    while live.len() >= 2 {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &x in &live {
            for a in ancestors(x).into_iter().skip(1) {
                *count.entry(a).or_default() += 1;
            }
        }
        let Some(v) = count.iter().filter(|&(_, &c)| c >= 2).map(|(&v, _)| v).max_by_key(|&v| (depth[&v], usize::MAX - v)) else {
            break;
        };
        let below: Vec<usize> = live.iter().copied().filter(|&x| ancestors(x).contains(&v)).collect();
        let (a, b) = (below[0], below[1]);
        let mut p = up(a, v);
        let mut back = up(b, v);
        back.pop();
        back.reverse();
        p.extend(back);
        out.push(p);
        live.retain(|x| !below.contains(x));
    }
    out
}

/// Contracts the chain union plus the paths into a member of family H3: the
/// full row/column grid of the chain, each path folded into the cell of its
/// first vertex. Paths whose ends break the family conditions are skipped.
pub fn h3_from_paths(g: &Graph, chain: &Chain, paths: &[RoutedPath], t: usize) -> Result<(FamilyInstance, MinorModel)> {
    let need = 10 * pair_count(t) + 6;
    let mesh = chain.mesh()?;
    let z = chain.z;
    let b = mesh.r();
    let rows: Vec<usize> = (0..z).collect();
    let cols: Vec<usize> = (0..b).collect();
    let mut model = mesh.grid_model(g, &rows, &cols);
    let own = model.owner_map(g.n());
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut xcols: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    for p in paths {
        if edges.len() == need {
            break;
        }
        let (x, y) = (p.x(), p.y());
        let (Some(mut cx), Some(cy)) = (own[x], own[y]) else { continue };
        let lift = cx / b + 1 == 2 * t && mesh.on_row(x).is_none();
        if lift {
            cx += b;
        }
        let (rx, jx, jy) = (cx / b, cx % b, cy % b);
        let ok = rx >= 2 * t
            && rx + 2 * t < z
            && jx >= t
            && jy >= t
            && jx + 1 < b
            && jy + 1 < b
            && jx.abs_diff(jy) > t + 1
            && xcols.iter().all(|&c| c.abs_diff(jx) > 2 * t + 2)
            && !used.contains(&cx)
            && !used.contains(&cy)
            && cx != cy;
        if !ok {
            continue;
        }
        if lift {
            push_down(&mut model, &mesh, x, cx - b, b)?;
        }
        model.branch_sets[cx].extend_from_slice(&p.path[1..p.path.len() - 1]);
        used.insert(cx);
        used.insert(cy);
        xcols.push(jx);
        edges.push(FamilyEdge { x: (rx + 1, jx + 1), y: (cy / b + 1, jy + 1) });
    }
    if edges.len() < need {
        return Err(PipelineError::TooFew { need, got: edges.len() });
    }
    for s in &mut model.branch_sets {
        s.sort_unstable();
        s.dedup();
    }
    let inst = FamilyInstance { family: Family::H3, t, h: z, r: b, edges };
    let rep = validate_family(&inst);
    if !rep.is_pass() {
        return Err(PipelineError::Construction(rep.failures.join("; ")));
    }
    model.pattern = inst.graph()?;
    model.fill_witnesses(g);
    Ok((inst, model))
}

// ---------------------------------------------------------------------------
// Apex search

/// A path from the core interior of `wall` to an interior vertex of routed
/// path `on` (its last vertex, the anchor).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredPath {
    pub wall: usize,
    pub path: Vec<usize>,
    pub on: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexSearchState {
    pub paths: Vec<RoutedPath>,
    pub aux: Vec<AnchoredPath>,
}

impl ApexSearchState {
    /// Endpoints of all routed and anchored paths, sorted.
    pub fn endpoints(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.paths.iter().flat_map(|p| [p.x(), p.y()]).collect();
        a.extend(self.aux.iter().flat_map(|q| [q.path[0], *q.path.last().unwrap()]));
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Checks the loop invariants: routed paths go from the right core
    /// interior to the chain off the wall's neighbourhood, internally off the
    /// chain, pairwise disjoint, walls more than one apart; anchored paths end
    /// inside the path they name, avoid the chain and the other paths
    /// internally, at most one per routed path, pairwise disjoint.
    pub fn check(&self, g: &Graph, chain: &Chain, tau: usize) -> std::result::Result<(), String> {
        let n = g.n();
        let wm = chain.union_mask(n);
        let mut owner = vec![usize::MAX; n];
        for (k, p) in self.paths.iter().enumerate() {
            if p.path.len() < 2 || !g.is_path(&p.path) {
                return Err(format!("routed path {k} is not a path"));
            }
            let core = core_wall(chain, p.wall, tau).map_err(|e| e.to_string())?;
            if !core.interior_mask(n)[p.x()] {
                return Err(format!("routed path {k} does not start in its core"));
            }
            let nb = chain.neighborhood(p.wall, n);
            if !wm[p.y()] || nb[p.y()] {
                return Err(format!("routed path {k} ends near its wall or off the chain"));
            }
            if p.path[1..p.path.len() - 1].iter().any(|&v| wm[v]) {
                return Err(format!("routed path {k} runs through the chain"));
            }
            for &v in &p.path {
                if owner[v] != usize::MAX {
                    return Err(format!("routed paths {} and {k} meet", owner[v]));
                }
                owner[v] = k;
            }
        }
        for a in 0..self.paths.len() {
            for b in a + 1..self.paths.len() {
                if self.paths[a].wall.abs_diff(self.paths[b].wall) <= 1 {
                    return Err(format!("routed paths {a} and {b} start in adjacent walls"));
                }
            }
        }
        let mut anchored = BTreeSet::new();
        let mut seen = vec![false; n];
        for (k, q) in self.aux.iter().enumerate() {
            if !g.is_path(&q.path) || q.on >= self.paths.len() || !anchored.insert(q.on) {
                return Err(format!("anchored path {k} is malformed"));
            }
            let a = *q.path.last().unwrap();
            let host = &self.paths[q.on].path;
            if !host[1..host.len() - 1].contains(&a) {
                return Err(format!("anchored path {k} does not end inside its routed path"));
            }
            let core = core_wall(chain, q.wall, tau).map_err(|e| e.to_string())?;
            if !core.interior_mask(n)[q.path[0]] {
                return Err(format!("anchored path {k} does not start in its core"));
            }
            for &v in &q.path[1..q.path.len() - 1] {
                if wm[v] || owner[v] != usize::MAX || seen[v] {
                    return Err(format!("anchored path {k} meets the chain or another path at {v}"));
                }
                seen[v] = true;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApexSearch {
    /// `10T + 6` routed paths.
    Paths(Vec<RoutedPath>),
    /// A vertex set `apex` after whose removal no wall of `walls` can be
    /// routed off its neighbourhood.
    Apex { apex: Vec<usize>, walls: Vec<usize> },
}

/// Shortest path from a vertex of `sources` to one accepted by `ys` through
/// vertices accepted by `free`; the direct edge wins if there is one.
fn route(g: &Graph, sources: &[usize], ys: impl Fn(usize) -> bool, free: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let n = g.n();
    for &x in sources {
        if let Some(&y) = g.neighbors(x).iter().find(|&&y| ys(y)) {
            return Some(vec![x, y]);
        }
    }
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    for &x in sources {
        seen[x] = true;
    }
    for &x in sources {
        for &w in g.neighbors(x) {
            if free(w) && !seen[w] {
                seen[w] = true;
                prev[w] = x;
                q.push_back(w);
            }
        }
    }
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if ys(w) {
                let mut p = vec![w, v];
                let mut c = v;
                while prev[c] != usize::MAX {
                    c = prev[c];
                    p.push(c);
                }
                p.reverse();
                return Some(p);
            }
            if free(w) && !seen[w] {
                seen[w] = true;
                prev[w] = v;
                q.push_back(w);
            }
        }
    }
    None
}

struct WallMasks {
    union: Vec<bool>,
    /// Core interior vertices, listed.
    inner: Vec<Vec<usize>>,
    core: Vec<Vec<bool>>,
    near: Vec<Vec<bool>>,
}

impl WallMasks {
    fn new(g: &Graph, chain: &Chain, tau: usize) -> Result<WallMasks> {
        let n = g.n();
        let mut inner = vec![Vec::new(); chain.len()];
        let mut core = vec![Vec::new(); chain.len()];
        for i in 1..chain.len() - 1 {
            let c = core_wall(chain, i, tau)?;
            let m = c.interior_mask(n);
            inner[i] = (0..n).filter(|&v| m[v]).collect();
            core[i] = c.mask(n);
        }
        let near = (0..chain.len()).map(|i| chain.neighborhood(i, n)).collect();
        Ok(WallMasks { union: chain.union_mask(n), inner, core, near })
    }
}

/// Maintains routed paths and anchored auxiliary paths, adding one path per
/// round, until `10T + 6` routed paths exist or no wall can be routed once the
/// current endpoints are deleted.
pub fn find_apex_vertices(g: &Graph, chain: &Chain, tau: usize, t: usize) -> Result<ApexSearch> {
    find_apex_vertices_traced(g, chain, tau, t, |_| {})
}

/// As [`find_apex_vertices`], calling `step` with the state after each round.
pub fn find_apex_vertices_traced(
    g: &Graph,
    chain: &Chain,
    tau: usize,
    t: usize,
    mut step: impl FnMut(&ApexSearchState),
) -> Result<ApexSearch> {
    let n = g.n();
    let need = 10 * pair_count(t) + 6;
    let masks = WallMasks::new(g, chain, tau)?;
    let mut st = ApexSearchState::default();
    let limit = 4 * (need + 1) * (need + 1) * chain.len().max(1);
    for _ in 0..limit {
        if st.paths.len() >= need {
            st.paths.truncate(need);
            return Ok(ApexSearch::Paths(st.paths));
        }
        let ends = st.endpoints();
        let mut blocked = vec![false; n];
        ends.iter().for_each(|&a| blocked[a] = true);
        let walls: Vec<usize> = (1..chain.len() - 1).filter(|&i| !ends.iter().any(|&a| masks.near[i][a])).collect();
        let free = |v: usize| !masks.union[v] && !blocked[v];
        let mut found = None;
        for &i in &walls {
            let xs: Vec<usize> = masks.inner[i].iter().copied().filter(|&v| !blocked[v]).collect();
            let ys = |v: usize| masks.union[v] && !masks.near[i][v] && !blocked[v];
            if let Some(p) = route(g, &xs, ys, free) {
                found = Some((i, p));
                break;
            }
        }
        let Some((i, z)) = found else {
            return Ok(ApexSearch::Apex { apex: ends, walls });
        };
        splice(&mut st, i, z);
        step(&st);
    }
    Err(PipelineError::Construction("apex search did not settle".into()))
}

/// Adds the new routed path `z` from wall `i`, splicing at its first vertex on
/// an existing path.
fn splice(st: &mut ApexSearchState, i: usize, z: Vec<usize>) {
    let mut on: HashMap<usize, (bool, usize, usize)> = HashMap::new();
    for (k, p) in st.paths.iter().enumerate() {
        for (pos, &v) in p.path.iter().enumerate() {
            on.insert(v, (true, k, pos));
        }
    }
    for (k, q) in st.aux.iter().enumerate() {
        for (pos, &v) in q.path.iter().enumerate() {
            on.entry(v).or_insert((false, k, pos));
        }
    }
    let hit = z.iter().enumerate().skip(1).find_map(|(iz, v)| on.get(v).map(|&h| (iz, h)));
    match hit {
        None => {
            st.paths.push(RoutedPath { wall: i, path: z });
            st.aux.clear();
        }
        Some((iz, (false, k, pos))) => {
            let q = &st.aux[k];
            let mut path = z[..=iz].to_vec();
            path.extend(q.path[..pos].iter().rev());
            st.paths.push(RoutedPath { wall: i, path });
            st.aux.clear();
        }
        Some((iz, (true, k, pv))) => match st.aux.iter().position(|q| q.on == k) {
            None => st.aux.push(AnchoredPath { wall: i, path: z[..=iz].to_vec(), on: k }),
            Some(qi) => {
                let q = st.aux[qi].clone();
                let host = st.paths[k].path.clone();
                let pa = host.iter().position(|&v| v == *q.path.last().unwrap()).unwrap();
                let mut p1 = z[..=iz].to_vec();
                let mut p2 = q.path.clone();
                if pv < pa {
                    p1.extend(host[..pv].iter().rev());
                    p2.extend(&host[pa + 1..]);
                } else {
                    p1.extend(&host[pv + 1..]);
                    p2.extend(host[..pa].iter().rev());
                }
                st.paths.remove(k);
                st.paths.push(RoutedPath { wall: i, path: p1 });
                st.paths.push(RoutedPath { wall: q.wall, path: p2 });
                st.aux.clear();
            }
        },
    }
}

/// Paths from the core interiors of `walls` (one per wall at most) to the
/// vertices of `apex`, internally off the chain and `apex` and pairwise
/// internally disjoint; an apex stops collecting at `cap` paths.
pub fn grow_apex_paths(
    g: &Graph,
    chain: &Chain,
    tau: usize,
    apex: &[usize],
    walls: &[usize],
    cap: usize,
) -> Result<Vec<Vec<RoutedPath>>> {
    let n = g.n();
    let masks = WallMasks::new(g, chain, tau)?;
    let mut blocked = vec![false; n];
    apex.iter().for_each(|&a| blocked[a] = true);
    let index: HashMap<usize, usize> = apex.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let mut sets: Vec<Vec<RoutedPath>> = vec![Vec::new(); apex.len()];
    let mut used = vec![false; n];
    for &i in walls {
        let mut ys = vec![false; n];
        for (k, &a) in apex.iter().enumerate() {
            ys[a] = sets[k].len() < cap;
        }
        if !ys.iter().any(|&b| b) {
            break;
        }
        let xs: Vec<usize> = masks.inner[i].iter().copied().filter(|&v| !blocked[v]).collect();
        let free = |v: usize| !masks.union[v] && !blocked[v] && !used[v];
        if let Some(p) = route(g, &xs, |v| ys[v], free) {
            p[1..p.len() - 1].iter().for_each(|&v| used[v] = true);
            let k = index[p.last().unwrap()];
            sets[k].push(RoutedPath { wall: i, path: p });
        }
    }
    Ok(sets)
}

/// General flow: apex search, then either the routed paths give a clique, or
/// apex paths are collected from every third remaining wall and one of the
/// three cases applies. For `t <= 5` the apex set is empty by the size bound
/// and the search result only fixes the walls.
pub fn flat_wall_strong(g: &Graph, wall: &Wall, p: &Params) -> Result<Outcome> {
    wall.check(g).map_err(|e| PipelineError::Param(format!("wall: {e}")))?;
    let chain = build_chain(g, wall, p)?;
    let (t, tt, tau) = (p.t, p.tt, p.tau);
    let nw = chain.len();
    let (apex, walls) = match find_apex_vertices(g, &chain, tau, t)? {
        ApexSearch::Paths(ps) => {
            let (inst, model) = h3_from_paths(g, &chain, &ps, t)?;
            let m = clique_from_h3(g, &inst, &model, None)?;
            return Ok(Outcome::clique(m, Route::ApexPaths, wall, t));
        }
        ApexSearch::Apex { apex, walls } => (apex, walls),
    };
    let spaced: Vec<usize> = walls.iter().step_by(3).copied().filter(|&i| i + 3 >= t && i + t < nw + 3).collect();
    if t <= 5 {
        return case3_resolve(g, &chain, wall, p, &[], &spaced);
    }
    let sets = grow_apex_paths(g, &chain, tau, &apex, &spaced, 2 * t)?;
    let starred: Vec<usize> = (0..apex.len()).filter(|&k| sets[k].len() >= 2 * t).collect();
    let served: BTreeSet<usize> = sets.iter().flatten().map(|q| q.wall).collect();
    let active: Vec<usize> = spaced.iter().copied().filter(|i| !served.contains(i)).collect();
    if starred.len() + 4 >= t {
        let chosen: Vec<(usize, Vec<RoutedPath>)> = starred.iter().take(t - 4).map(|&k| (apex[k], sets[k].clone())).collect();
        let m = case1_clique(g, &chain, &chosen, t)?;
        return Ok(Outcome::clique(m, Route::ManyApexes, wall, t));
    }
    if served.len() >= 80 * tt + 40 + 6 * t * t {
        let m = case2_clique(g, &chain, &apex, &sets, t)?;
        return Ok(Outcome::clique(m, Route::ApexClusters, wall, t));
    }
    let astar: Vec<usize> = starred.iter().map(|&k| apex[k]).collect();
    case3_resolve(g, &chain, wall, p, &astar, &active)
}

/// Last case: at most `t - 5` apexes `astar` and walls three apart. Walls
/// with a path to their neighbourhood avoiding `astar` feed the type-1
/// construction; otherwise a wall whose core side has no cross in `G - astar`
/// gives the flat wall, and crossed walls feed the type-3 construction.
pub fn case3_resolve(g: &Graph, chain: &Chain, wall: &Wall, p: &Params, astar: &[usize], walls: &[usize]) -> Result<Outcome> {
    let n = g.n();
    let (t, tt, tau) = (p.t, p.tt, p.tau);
    let masks = WallMasks::new(g, chain, tau)?;
    let mut blocked = vec![false; n];
    astar.iter().for_each(|&a| blocked[a] = true);
    let free = |v: usize| !masks.union[v] && !blocked[v];
    let mut type1 = Vec::new();
    let mut rest = Vec::new();
    for &i in walls {
        let xs: Vec<usize> = masks.inner[i].iter().copied().filter(|&v| !blocked[v]).collect();
        let ys = |v: usize| masks.near[i][v] && masks.union[v] && !masks.core[i][v] && !blocked[v];
        match route(g, &xs, ys, free) {
            Some(path) => type1.push((i, path)),
            None => rest.push(i),
        }
    }
    if type1.len() >= 12 * tt + 6 {
        let k = kt_from_type1(g, chain, &type1, tau, t, None)?;
        return Ok(Outcome::clique(k.model, Route::ResidualType1, wall, t));
    }
    let gs = without(g, astar);
    let mut crosses = Vec::new();
    for &i in &rest {
        match classify(&gs, chain, i, tau)? {
            WallType::Type4 { .. } => return flat_outcome(g, chain, i, tau, astar),
            WallType::Type3(x) => crosses.push((i, x)),
            _ => {}
        }
    }
    if crosses.len() >= 2 * tt {
        let m = kt_from_type3(g, chain, &crosses, tau, t, None)?;
        return Ok(Outcome::clique(m, Route::ResidualCrosses, wall, t));
    }
    Ok(Outcome::Inconclusive {
        reason: format!("{} walls routed to their neighbourhood, {} crossed, none flat", type1.len(), crosses.len()),
    })
}

// ---------------------------------------------------------------------------
// Label paths for the apex cases

fn wall_graph(n: usize, w: &Wall) -> Graph {
    let mut h = Graph::new(n);
    for p in &w.paths {
        for e in p.windows(2) {
            h.add_edge(e[0], e[1]);
        }
    }
    h
}

/// Disjoint paths inside wall `w` joining `src[k]` to `dst[k]` for every `k`.
fn ordered_linkage(n: usize, w: &Wall, src: &[usize], dst: &[usize]) -> Result<Vec<Vec<usize>>> {
    let h = wall_graph(n, w);
    let LinkageOutcome::Paths(l) = vertex_disjoint_linkage(&h, src, dst, src.len())? else {
        return Err(PipelineError::Construction(format!("no {}-linkage through a basic wall", src.len())));
    };
    src.iter()
        .zip(dst)
        .map(|(&s, &d)| {
            let p = l
                .paths
                .iter()
                .find(|p| p[0] == s)
                .ok_or_else(|| PipelineError::Construction("linkage misses a source".into()))?;
            if *p.last().unwrap() != d {
                return Err(PipelineError::Construction("linkage does not keep the row order".into()));
            }
            Ok(p.clone())
        })
        .collect()
}

fn row_idx(mesh: &Mesh, v: usize) -> usize {
    mesh.on_row(v).unwrap().1
}

/// One path per row of `rows` (top to bottom): through each basic wall `i`
/// of `items` (`(i, x, label)`, walls increasing and at least three apart) the
/// path with index `label` is rerouted through `x` inside walls `i-1..=i+1`;
/// between those stretches the paths follow their rows.
fn label_paths(n: usize, chain: &Chain, mesh: &Mesh, rows: &[usize], items: &[(usize, usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let k = rows.len();
    let z = chain.z;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    if items.windows(2).any(|p| p[1].0 < p[0].0 + 3) {
        return Err(PipelineError::Construction("labelled walls closer than three apart".into()));
    }
    let mut prev: Option<Vec<usize>> = None;
    for &(i, x, q) in items {
        if i == 0 || i + 1 >= chain.len() || q >= k {
            return Err(PipelineError::Construction(format!("label {q} at wall {i}")));
        }
        let (left, right) = (chain.walls[i - 1].host_rows(), chain.walls[i + 1].host_rows());
        let (s, rung) = match mesh.row_pos(x) {
            Some(LinePos::On(s)) => (s, None),
            Some(LinePos::Between(s)) => (s, Some(mesh.on_col(x).unwrap().0)),
            None => return Err(PipelineError::Construction(format!("vertex {x} is off the chain"))),
        };
        let bottom = z.checked_sub(k - 1 - q).filter(|&b| b > s + rung.is_some() as usize);
        let Some(bottom) = bottom.filter(|_| s >= q) else {
            return Err(PipelineError::Construction(format!("row {s} of wall {i} cannot carry label {q}")));
        };
        let r1: Vec<usize> = (0..q).chain([s]).chain(bottom..z).collect();
        let r2: Vec<usize> = (0..q).chain([s + rung.is_some() as usize]).chain(bottom..z).collect();
        let s1: Vec<usize> = rows.iter().map(|&r| left[r][0]).collect();
        let t1: Vec<usize> = r1.iter().map(|&r| *left[r].last().unwrap()).collect();
        let t2: Vec<usize> = r2.iter().map(|&r| right[r][0]).collect();
        let s2: Vec<usize> = rows.iter().map(|&r| *right[r].last().unwrap()).collect();
        let l1 = ordered_linkage(n, &chain.walls[i - 1], &s1, &t1)?;
        let l3 = ordered_linkage(n, &chain.walls[i + 1], &t2, &s2)?;
        for m in 0..k {
            let mut p = l1[m].clone();
            match rung {
                Some(j) if m == q => {
                    let u = mesh.cols[j][mesh.col_span(j, s).1];
                    let u2 = mesh.cols[j][mesh.col_span(j, s + 1).0];
                    join(&mut p, mesh.row_walk(s, row_idx(mesh, t1[m]), row_idx(mesh, u)));
                    let (a, b) = (mesh.on_col(u).unwrap().1, mesh.on_col(u2).unwrap().1);
                    join(&mut p, mesh.col_walk(j, a, b));
                    join(&mut p, mesh.row_walk(s + 1, row_idx(mesh, u2), row_idx(mesh, t2[m])));
                }
                _ => join(&mut p, mesh.row_walk(r1[m], row_idx(mesh, t1[m]), row_idx(mesh, t2[m]))),
            }
            join(&mut p, l3[m].clone());
            if let Some(pr) = &prev {
                join(&mut out[m], mesh.row_walk(rows[m], row_idx(mesh, pr[m]), row_idx(mesh, s1[m])));
            }
            join(&mut out[m], p);
        }
        if !out[q].contains(&x) {
            return Err(PipelineError::Construction(format!("label path {q} misses {x}")));
        }
        prev = Some(s2);
    }
    Ok(out)
}

/// Interior of a column between the meetings with rows `ra < rb`.
fn column_between(mesh: &Mesh, c: usize, ra: usize, rb: usize) -> Vec<usize> {
    let s = mesh.col_span(c, ra).1 + 1;
    let e = mesh.col_span(c, rb).0;
    mesh.cols[c][s..e].to_vec()
}

fn finish(g: &Graph, branch_sets: Vec<Vec<usize>>, t: usize) -> Result<MinorModel> {
    let mut sets = branch_sets;
    for s in &mut sets {
        s.sort_unstable();
        s.dedup();
    }
    let mut m = MinorModel { pattern: Graph::complete(t), branch_sets: sets, edge_witness: Vec::new() };
    m.fill_witnesses(g);
    match validate_minor_model(g, &m)? {
        crate::graph::ModelReport::Pass => Ok(m),
        crate::graph::ModelReport::Fail(v) => Err(PipelineError::Construction(format!("clique model: {v}"))),
    }
}

fn bad_walls(chain: &Chain, n: usize, apex: &[usize]) -> Vec<bool> {
    (0..chain.len())
        .map(|i| {
            let nb = chain.neighborhood(i, n);
            apex.iter().any(|&a| nb[a])
        })
        .collect()
}

/// `t - 4` apexes, each with `2t` paths: label paths `L_1..L_t` through the
/// path ends, apexes joined to every label path, and six column segments near
/// both ends of the chain joining `L_1..L_4` pairwise. Apex `k` and label path
/// `k + 4` form one branch set.
pub fn case1_clique(g: &Graph, chain: &Chain, chosen: &[(usize, Vec<RoutedPath>)], t: usize) -> Result<MinorModel> {
    let n = g.n();
    let nw = chain.len();
    if t < 5 || chosen.len() != t - 4 {
        return Err(PipelineError::Param(format!("{} apexes for t = {t}", chosen.len())));
    }
    let apex: Vec<usize> = chosen.iter().map(|c| c.0).collect();
    let bad = bad_walls(chain, n, &apex);
    let mut kept: Vec<Vec<RoutedPath>> = Vec::new();
    for (a, qs) in chosen {
        let good: Vec<RoutedPath> = qs.iter().filter(|q| !bad[q.wall]).take(t).cloned().collect();
        if good.len() < t {
            return Err(PipelineError::TooFew { need: t, got: good.len() });
        }
        debug_assert!(good.iter().all(|q| q.y() == *a));
        kept.push(good);
    }
    let mut items: Vec<(usize, usize, usize)> =
        kept.iter().flat_map(|qs| qs.iter().enumerate().map(|(l, q)| (q.wall, q.x(), l))).collect();
    items.sort_unstable();
    let mesh = chain.mesh()?;
    let z = chain.z;
    let rows: Vec<usize> = (0..z).filter(|&r| !apex.iter().any(|a| mesh.rows[r].contains(a))).take(t).collect();
    if rows.len() < t {
        return Err(PipelineError::Construction("too few rows avoid the apexes".into()));
    }
    let clean = |k: usize| {
        let vs = chain.walls[k].vertices();
        !apex.iter().any(|a| vs.binary_search(a).is_ok())
    };
    let (first, last) = (items[0].0, items.last().unwrap().0);
    let lo = (0..(t - 3).min(nw)).find(|&k| clean(k)).filter(|&k| k + 1 < first);
    let hi = ((nw + 3).saturating_sub(t)..nw).find(|&k| clean(k)).filter(|&k| k > last + 1);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(PipelineError::Construction("no apex-free end walls for the column segments".into()));
    };
    let mut paths = label_paths(n, chain, &mesh, &rows, &items)?;
    let off = chain.column_offsets();
    let start = |r: usize, c: usize| mesh.row_span(r, c).0;
    let c = [off[lo], off[lo] + 1, off[lo] + 2, off[hi]];
    // Left and right extensions: rows 1 and 4 reach the first column, row 2
    // the third, row 3 the second; rows 2 and 4 reach the far column.
    let reach_left = [c[0], c[2], c[1], c[0]];
    for q in 0..4 {
        let r = rows[q];
        let head = row_idx(&mesh, paths[q][0]);
        let mut ext = mesh.row_walk(r, start(r, reach_left[q]), head);
        join(&mut ext, std::mem::take(&mut paths[q]));
        paths[q] = ext;
        if q == 1 || q == 3 {
            let tail = row_idx(&mesh, *paths[q].last().unwrap());
            join(&mut paths[q], mesh.row_walk(r, tail, mesh.row_span(r, c[3]).1));
        }
    }
    let mut sets = paths;
    sets[0].extend(column_between(&mesh, c[2], rows[0], rows[1]));
    sets[1].extend(column_between(&mesh, c[2], rows[1], rows[2]));
    sets[2].extend(column_between(&mesh, c[2], rows[2], rows[3]));
    sets[0].extend(column_between(&mesh, c[1], rows[0], rows[2]));
    sets[0].extend(column_between(&mesh, c[0], rows[0], rows[3]));
    sets[1].extend(column_between(&mesh, c[3], rows[1], rows[3]));
    for (j, qs) in kept.iter().enumerate() {
        sets[j + 4].push(apex[j]);
        for q in qs {
            sets[j + 4].extend_from_slice(&q.path[1..q.path.len() - 1]);
        }
    }
    finish(g, sets, t)
}

/// Many walls reach apexes: drop apexes near used walls and those with one
/// path, keep the apexes on one side of the chain, split them greedily into
/// `t` groups carrying exactly `t` spare paths each, and build a `K_{t,t}`
/// from `2t` label paths in the rows on the other side; branch set `r` joins
/// group `r` with label paths `r` and `t + r`.
pub fn case2_clique(g: &Graph, chain: &Chain, apex: &[usize], sets: &[Vec<RoutedPath>], t: usize) -> Result<MinorModel> {
    let n = g.n();
    let z = chain.z;
    if z < 4 * t {
        return Err(PipelineError::Param(format!("height {z} below 4t")));
    }
    let bad = bad_walls(chain, n, apex);
    let mesh = chain.mesh()?;
    let mut live: Vec<(usize, Vec<RoutedPath>)> = apex
        .iter()
        .zip(sets)
        .map(|(&a, qs)| (a, qs.iter().filter(|q| !bad[q.wall]).cloned().collect::<Vec<_>>()))
        .filter(|(_, qs)| qs.len() >= 2)
        .collect();
    let row_of = |a: usize| mesh.on_row(a).map(|r| r.0);
    let spare = |v: &[(usize, Vec<RoutedPath>)], top: bool| -> usize {
        v.iter()
            .filter(|(a, _)| row_of(*a).is_some_and(|r| if top { r < 2 * t } else { r + 2 * t >= z }))
            .map(|(_, qs)| qs.len() - 1)
            .sum()
    };
    let keep_top = spare(&live, false) <= spare(&live, true);
    let rows: Vec<usize> = if keep_top { (z - 2 * t..z).collect() } else { (0..2 * t).collect() };
    live.retain(|(a, _)| !row_of(*a).is_some_and(|r| rows.contains(&r)));
    let mut groups: Vec<Vec<(usize, Vec<RoutedPath>)>> = Vec::new();
    let mut cur = Vec::new();
    let mut acc = 0;
    for (a, mut qs) in live {
        acc += qs.len() - 1;
        if acc >= t {
            qs.truncate(qs.len() - (acc - t));
            cur.push((a, qs));
            groups.push(std::mem::take(&mut cur));
            acc = 0;
            if groups.len() == t {
                break;
            }
        } else {
            cur.push((a, qs));
        }
    }
    if groups.len() < t {
        return Err(PipelineError::Partition(format!("{} of {t} groups", groups.len())));
    }
    let mut items = Vec::new();
    for (r, grp) in groups.iter().enumerate() {
        let mut label = 0;
        for (_, qs) in grp {
            items.push((qs[0].wall, qs[0].x(), t + r));
            for q in &qs[1..] {
                items.push((q.wall, q.x(), label));
                label += 1;
            }
        }
        debug_assert_eq!(label, t);
    }
    items.sort_unstable();
    let paths = label_paths(n, chain, &mesh, &rows, &items)?;
    let mut branch: Vec<Vec<usize>> = (0..t).map(|r| [paths[r].clone(), paths[t + r].clone()].concat()).collect();
    for (r, grp) in groups.iter().enumerate() {
        for (a, qs) in grp {
            branch[r].push(*a);
            for q in qs {
                branch[r].extend_from_slice(&q.path[1..q.path.len() - 1]);
            }
        }
    }
    finish(g, branch, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wall::identity_wall;

    #[test]
    fn derived_sizes() {
        let p = Params::weak(2, 4, 3).unwrap();
        assert_eq!((p.n, p.z, p.tau, p.r), (1174, 12, 4, 444));
        let p = Params::strong(3, 4).unwrap();
        assert_eq!((p.n, p.z, p.r), (1700, 16, 704));
        assert!(p.overrides.is_empty());
        let q = p.override_n(5).override_z(16);
        assert_eq!((q.strips(), q.r), (4, 64));
        assert_eq!(q.overrides.len(), 2);
        assert_eq!(ceil_sqrt(1700), 42);
        assert_eq!(ceil_sqrt(1764), 42);
    }

    #[test]
    fn tree_sweep_pairs_terminals_disjointly() {
        // Star of three paths from a centre; one terminal at each leaf and one
        // hanging off the centre.
        let mut g = Graph::new(12);
        for (a, b) in [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6), (2, 7), (4, 8), (6, 9), (0, 10)] {
            g.add_edge(a, b);
        }
        let comp = vec![0, 1, 2, 3, 4, 5, 6];
        let ends = [(7, 2), (8, 4), (9, 6), (10, 0)];
        let pairs = tree_pairs(&g, &comp, &ends);
        assert!(!pairs.is_empty());
        let mut seen = BTreeSet::new();
        for p in &pairs {
            assert!(g.is_path(p));
            assert!([7, 8, 9, 10].contains(&p[0]) && [7, 8, 9, 10].contains(p.last().unwrap()));
            for &v in p {
                assert!(seen.insert(v));
            }
        }
    }

    #[test]
    fn bare_chain_has_no_routable_wall() {
        let (g, w) = identity_wall(40, 40).unwrap();
        let p = Params::strong(2, 2).unwrap().override_n(7).override_z(10).override_tau(3);
        let c = build_chain(&g, &w, &p).unwrap();
        match find_apex_vertices(&g, &c, 3, 2).unwrap() {
            ApexSearch::Apex { apex, walls } => {
                assert!(apex.is_empty());
                assert_eq!(walls, (1..6).collect::<Vec<_>>());
            }
            ApexSearch::Paths(_) => panic!("bare chain routed a path"),
        }
    }

    #[test]
    fn route_prefers_direct_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let free = |v: usize| v == 1;
        assert_eq!(route(&g, &[0], |v| v >= 2, free), Some(vec![0, 3]));
        assert_eq!(route(&g, &[0], |v| v == 2, free), Some(vec![0, 1, 2]));
    }
}
