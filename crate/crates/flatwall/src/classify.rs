//! Core walls of a chain, bridges between them, the four wall types, and the
//! handlers: flat wall certificates for type-4 walls, clique minors from many
//! type-3 walls or many type-1 walls.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::Chain;
use crate::forge::{
    build_family_instance, clique_from_h2, clique_from_hstar, pair_count, validate_family, Family, FamilyEdge, FamilyInstance,
    ForgeError, Sizing,
};
use crate::graph::{Graph, MinorModel};
use crate::mesh::{join, CrossError, Mesh, MeshError};
use crate::tdp::{c_cross_or_flat, two_disjoint_paths, CrossOrFlat, FlatDecomposition, TdpError};
use crate::wall::{Wall, WallError};

#[derive(Error, Debug)]
pub enum ClassifyError {
    #[error("index {0} is not an interior wall of a chain of {1} walls")]
    Index(usize, usize),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("wall {0} is type {1}, expected type 4")]
    NotType4(usize, u8),
    #[error("need at least {need} walls, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("bad witness: {0}")]
    Witness(String),
    #[error("flat wall construction failed: {0}")]
    Flat(String),
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Cross(#[from] CrossError),
    #[error(transparent)]
    Tdp(#[from] TdpError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
}

/// Sub-wall of basic wall `parent` spanned by rows `tau..=z-tau+1`.
#[derive(Clone, Debug)]
pub struct CoreWall {
    pub parent: usize,
    pub tau: usize,
    pub wall: Wall,
    pub boundary: Vec<usize>,
    /// `[a, b, c, d]` clockwise from the top-left.
    pub corners: [usize; 4],
}

impl CoreWall {
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        self.wall.vertices().into_iter().for_each(|v| m[v] = true);
        m
    }

    /// Core vertices off the boundary cycle.
    pub fn interior_mask(&self, n: usize) -> Vec<bool> {
        let mut m = self.mask(n);
        self.boundary.iter().for_each(|&v| m[v] = false);
        m
    }
}

pub fn core_wall(chain: &Chain, i: usize, tau: usize) -> Result<CoreWall, ClassifyError> {
    let n = chain.len();
    if n < 3 || i == 0 || i + 1 >= n {
        return Err(ClassifyError::Index(i, n));
    }
    if tau == 0 || 2 * tau >= chain.z {
        return Err(ClassifyError::Param(format!("core depth {tau} for walls of height {}", chain.z)));
    }
    let b = &chain.walls[i];
    let wall = b.subwall(tau, chain.z - tau + 1, 1, b.r())?;
    Ok(CoreWall { parent: i, tau, boundary: wall.boundary_cycle(), corners: wall.corners(), wall })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BridgeKind {
    /// A non-chain edge, core-interior end first.
    Edge(usize, usize),
    /// A component of the graph minus the chain union.
    Component(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub kind: BridgeKind,
    /// Chain vertices the bridge touches.
    pub attachments: Vec<usize>,
    pub core: usize,
    /// All attachments lie in the neighbourhood of the basic wall.
    pub neighborhood: bool,
    /// Attachments in the core interior.
    pub inner: Vec<usize>,
    /// Attachments in the chain off the core.
    pub outer: Vec<usize>,
}

impl Bridge {
    /// Path from a core-interior attachment through the bridge to an outer
    /// attachment accepted by `target`. The interior avoids the chain.
    pub fn path(&self, g: &Graph, target: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        match &self.kind {
            BridgeKind::Edge(u, v) => target(*v).then(|| vec![*u, *v]),
            BridgeKind::Component(c) => {
                let n = g.n();
                let mut allowed = vec![false; n];
                c.iter().for_each(|&v| allowed[v] = true);
                let ys: Vec<usize> = self.outer.iter().copied().filter(|&y| target(y)).collect();
                let mut to = vec![false; n];
                for &y in &ys {
                    g.neighbors(y).iter().filter(|&&w| allowed[w]).for_each(|&w| to[w] = true);
                }
                for &x in &self.inner {
                    let from: Vec<usize> = g.neighbors(x).iter().copied().filter(|&w| allowed[w]).collect();
                    if let Some(p) = g.bfs_path(&from, &to, &allowed) {
                        let end = *p.last().unwrap();
                        let y = *ys.iter().find(|&&y| g.has_edge(y, end)).unwrap();
                        let mut out = vec![x];
                        out.extend(p);
                        out.push(y);
                        return Some(out);
                    }
                }
                None
            }
        }
    }
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Every bridge incident on the core of interior wall `i`.
pub fn bridges_of(g: &Graph, chain: &Chain, i: usize, tau: usize) -> Result<Vec<Bridge>, ClassifyError> {
    let core = core_wall(chain, i, tau)?;
    let n = g.n();
    let on_core = core.mask(n);
    let interior = core.interior_mask(n);
    let union = chain.union_mask(n);
    let union_edges: HashSet<(usize, usize)> = chain.union_edges().into_iter().collect();
    let nb = chain.neighborhood(i, n);
    let mut out = Vec::new();
    for u in (0..n).filter(|&u| interior[u]) {
        for &v in g.neighbors(u) {
            if union[v] && !on_core[v] && !union_edges.contains(&edge_key(u, v)) {
                out.push(Bridge {
                    kind: BridgeKind::Edge(u, v),
                    attachments: vec![u.min(v), u.max(v)],
                    core: i,
                    neighborhood: nb[v],
                    inner: vec![u],
                    outer: vec![v],
                });
            }
        }
    }
    let off: Vec<bool> = union.iter().map(|&b| !b).collect();
    for comp in g.components_masked(&off) {
        let att: BTreeSet<usize> = comp.iter().flat_map(|&v| g.neighbors(v).iter().copied()).filter(|&w| union[w]).collect();
        let inner: Vec<usize> = att.iter().copied().filter(|&w| interior[w]).collect();
        let outer: Vec<usize> = att.iter().copied().filter(|&w| !on_core[w]).collect();
        if inner.is_empty() || outer.is_empty() {
            continue;
        }
        out.push(Bridge {
            neighborhood: att.iter().all(|&w| nb[w]),
            kind: BridgeKind::Component(comp),
            attachments: att.into_iter().collect(),
            core: i,
            inner,
            outer,
        });
    }
    Ok(out)
}

/// Disjoint paths `a -> c` and `b -> d` between opposite corners of a core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCross {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallType {
    /// Some bridge stays within the neighbourhood (those bridges listed).
    Type1(Vec<Bridge>),
    /// Bridges exist, none within the neighbourhood.
    Type2(Vec<Bridge>),
    /// No bridge; the core side holds a cross.
    Type3(WallCross),
    /// No bridge and no cross; the core side `X` of the separation.
    Type4 { side_x: Vec<usize> },
}

impl WallType {
    pub fn number(&self) -> u8 {
        match self {
            WallType::Type1(_) => 1,
            WallType::Type2(_) => 2,
            WallType::Type3(_) => 3,
            WallType::Type4 { .. } => 4,
        }
    }
}

/// The boundary of the core plus every component of the rest that touches it
/// and meets no other basic wall.
pub fn core_side(g: &Graph, chain: &Chain, core: &CoreWall) -> Vec<usize> {
    let n = g.n();
    let mut on_gamma = vec![false; n];
    core.boundary.iter().for_each(|&v| on_gamma[v] = true);
    let mut other = vec![false; n];
    for (k, w) in chain.walls.iter().enumerate() {
        if k != core.parent {
            w.vertices().into_iter().for_each(|v| other[v] = true);
        }
    }
    let rest: Vec<bool> = on_gamma.iter().map(|&b| !b).collect();
    let mut side: Vec<usize> = core.boundary.clone();
    for comp in g.components_masked(&rest) {
        let touches = comp.iter().any(|&v| g.neighbors(v).iter().any(|&w| on_gamma[w]));
        if touches && !comp.iter().any(|&v| other[v]) {
            side.extend(comp);
        }
    }
    side.sort_unstable();
    side
}

pub fn classify(g: &Graph, chain: &Chain, i: usize, tau: usize) -> Result<WallType, ClassifyError> {
    let bridges = bridges_of(g, chain, i, tau)?;
    if bridges.iter().any(|b| b.neighborhood) {
        return Ok(WallType::Type1(bridges.into_iter().filter(|b| b.neighborhood).collect()));
    }
    if !bridges.is_empty() {
        return Ok(WallType::Type2(bridges));
    }
    let core = core_wall(chain, i, tau)?;
    let side = core_side(g, chain, &core);
    let (xg, ids) = g.induced(&side);
    let local = |v: usize| ids.binary_search(&v).expect("corner on the core side");
    let [a, b, c, d] = core.corners;
    match two_disjoint_paths(&xg, local(a), local(c), local(b), local(d))? {
        Some((p1, p2)) => {
            let lift = |p: Vec<usize>| p.into_iter().map(|v| ids[v]).collect();
            Ok(WallType::Type3(WallCross { p1: lift(p1), p2: lift(p2) }))
        }
        None => Ok(WallType::Type4 { side_x: side }),
    }
}

/// Copy of `g` with every edge at an apex vertex removed (ids unchanged).
pub fn without(g: &Graph, apex: &[usize]) -> Graph {
    let mut h = g.clone();
    for &a in apex {
        for w in g.neighbors(a).to_vec() {
            h.remove_edge(a, w);
        }
    }
    h
}

/// A flat wall with apex set, separation and disc drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatWallCertificate {
    pub wall: Wall,
    pub apex: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub pegs: Vec<usize>,
    /// The separator, in the cyclic order of the wall boundary.
    pub boundary: Vec<usize>,
    /// Flat decomposition of `G[side_b]` plus the cycle through `boundary`,
    /// in positions of the sorted `side_b`.
    pub drawing: FlatDecomposition,
}

impl FlatWallCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `G[side_b]` (local ids of the sorted side) plus the cycle through the
/// boundary, and that cycle in local ids.
fn disc_graph(g: &Graph, side_b: &[usize], boundary: &[usize]) -> Option<(Graph, Vec<usize>)> {
    let (mut aux, ids) = g.induced(side_b);
    let cyc: Vec<usize> = boundary.iter().map(|v| ids.binary_search(v).ok()).collect::<Option<_>>()?;
    for k in 0..cyc.len() {
        aux.add_edge(cyc[k], cyc[(k + 1) % cyc.len()]);
    }
    Some((aux, cyc))
}

/// Flat wall inside the core of a type-4 wall `i` of `g - apex`: the middle
/// `(z - 2 tau) x (w - 2 tau)` sub-wall of the core, cut off along the
/// boundary vertices that see the rest of the graph.
pub fn flat_from_type4(
    g: &Graph,
    chain: &Chain,
    i: usize,
    tau: usize,
    apex: &[usize],
) -> Result<FlatWallCertificate, ClassifyError> {
    let n = g.n();
    let ga = without(g, apex);
    let ty = classify(&ga, chain, i, tau)?;
    if ty.number() != 4 {
        return Err(ClassifyError::NotType4(i, ty.number()));
    }
    let core = core_wall(chain, i, tau)?;
    let (hc, rc) = (core.wall.h(), core.wall.r());
    if rc < 2 * tau + 2 {
        return Err(ClassifyError::Param(format!("core of width {rc} has no middle for depth {tau}")));
    }
    let inner = core.wall.subwall(2, hc - 1, tau + 1, rc - tau)?;
    let gamma = inner.boundary_cycle();
    let mut alive = vec![true; n];
    apex.iter().for_each(|&a| alive[a] = false);
    let mut on_gamma = vec![false; n];
    gamma.iter().for_each(|&v| on_gamma[v] = true);
    let mut other = vec![false; n];
    for (k, w) in chain.walls.iter().enumerate() {
        if k != i {
            w.vertices().into_iter().for_each(|v| other[v] = true);
        }
    }
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !on_gamma[v]).collect();
    let mut in_a = vec![false; n];
    let mut in_b = on_gamma.clone();
    let mut outside = vec![false; n];
    for comp in ga.components_masked(&rest) {
        let touches = comp.iter().any(|&v| ga.neighbors(v).iter().any(|&w| on_gamma[w]));
        let far = comp.iter().any(|&v| other[v]);
        for &v in &comp {
            if touches && !far {
                in_b[v] = true;
            } else {
                in_a[v] = true;
                outside[v] = far;
            }
        }
    }
    let boundary: Vec<usize> = gamma.iter().copied().filter(|&v| ga.neighbors(v).iter().any(|&w| outside[w])).collect();
    if boundary.len() < 3 {
        return Err(ClassifyError::Flat(format!("only {} boundary vertices see the outside", boundary.len())));
    }
    boundary.iter().for_each(|&v| in_a[v] = true);
    let side_a: Vec<usize> = (0..n).filter(|&v| in_a[v]).collect();
    let side_b: Vec<usize> = (0..n).filter(|&v| in_b[v]).collect();
    let (aux, cyc) = disc_graph(&ga, &side_b, &boundary).expect("boundary lies in side b");
    let drawing = match c_cross_or_flat(&aux, &cyc)? {
        CrossOrFlat::Flat(d) => d,
        CrossOrFlat::Cross { .. } => return Err(ClassifyError::Flat("the inner side holds a cross".into())),
    };
    let pegs = inner_pegs(&core.wall, &inner, tau);
    let mut apex = apex.to_vec();
    apex.sort_unstable();
    apex.dedup();
    Ok(FlatWallCertificate { wall: inner, apex, side_a, side_b, pegs, boundary, drawing })
}

/// Branch vertices of degree 2 in `inner` and 3 in `core`, where `inner` is
/// the core sub-wall on rows `2..` and columns `tau+1..`.
fn inner_pegs(core: &Wall, inner: &Wall, tau: usize) -> Vec<usize> {
    let (ti, tc) = (inner.template.graph(), core.template.graph());
    let mut out: Vec<usize> = (0..ti.n())
        .filter(|&v| {
            let (i, j) = inner.template.coord(v);
            let pv = core.template.id(i + 1, j + 2 * tau).expect("inner coordinates lie in the core");
            ti.degree(v) == 2 && tc.degree(pv) == 3
        })
        .map(|v| inner.branch[v])
        .collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlatReport {
    pub failures: Vec<String>,
}

impl FlatReport {
    pub fn is_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every clause of the flat wall definition against `g`.
pub fn verify_flat_certificate(g: &Graph, cert: &FlatWallCertificate) -> FlatReport {
    let mut f = Vec::new();
    let n = g.n();
    let ids = cert.apex.iter().chain(&cert.side_a).chain(&cert.side_b).chain(&cert.pegs).chain(&cert.boundary);
    if let Some(v) = ids.clone().find(|&&v| v >= n) {
        f.push(format!("vertex {v} out of range"));
        return FlatReport { failures: f };
    }
    let mut apex = vec![false; n];
    let (mut in_a, mut in_b) = (vec![false; n], vec![false; n]);
    cert.apex.iter().for_each(|&v| apex[v] = true);
    cert.side_a.iter().for_each(|&v| in_a[v] = true);
    cert.side_b.iter().for_each(|&v| in_b[v] = true);
    if !cert.side_b.windows(2).all(|w| w[0] < w[1]) {
        f.push("side b is not sorted and duplicate-free".into());
    }
    for v in 0..n {
        if apex[v] && (in_a[v] || in_b[v]) {
            f.push(format!("apex vertex {v} lies in a side"));
        } else if !apex[v] && !in_a[v] && !in_b[v] {
            f.push(format!("vertex {v} lies in neither side"));
        }
    }
    for (u, v) in g.edges() {
        if apex[u] || apex[v] {
            continue;
        }
        let a_only = |x: usize| in_a[x] && !in_b[x];
        let b_only = |x: usize| in_b[x] && !in_a[x];
        if (a_only(u) && b_only(v)) || (a_only(v) && b_only(u)) {
            f.push(format!("edge ({u},{v}) crosses the separation"));
        }
    }
    if let Err(e) = cert.wall.check(g) {
        f.push(format!("wall: {e}"));
    }
    if let Some(v) = cert.wall.vertices().into_iter().find(|&v| v >= n || !in_b[v] || apex[v]) {
        f.push(format!("wall vertex {v} is not in side b"));
    }
    let sep: BTreeSet<usize> = (0..n).filter(|&v| in_a[v] && in_b[v]).collect();
    let bset: BTreeSet<usize> = cert.boundary.iter().copied().collect();
    if bset.len() != cert.boundary.len() {
        f.push("boundary repeats a vertex".into());
    }
    if sep != bset {
        f.push(format!("separator has {} vertices, boundary lists {}", sep.len(), bset.len()));
    }
    let cycle = cert.wall.boundary_cycle();
    let pos: Vec<Option<usize>> = cert.boundary.iter().map(|v| cycle.iter().position(|w| w == v)).collect();
    if pos.iter().any(|p| p.is_none()) {
        f.push("boundary leaves the wall's outer cycle".into());
    } else {
        let p: Vec<usize> = pos.into_iter().flatten().collect();
        let descents = (0..p.len()).filter(|&k| p[(k + 1) % p.len()] <= p[k]).count();
        if p.len() > 1 && descents != 1 {
            f.push("boundary is not in the cyclic order of the wall's outer cycle".into());
        }
    }
    if let Some(v) = cert.pegs.iter().find(|v| !bset.contains(v)) {
        f.push(format!("peg {v} is not on the separator"));
    }
    if cert.boundary.len() < 3 {
        f.push("fewer than three boundary vertices".into());
    } else if f.is_empty() {
        match disc_graph(g, &cert.side_b, &cert.boundary) {
            None => f.push("boundary is not inside side b".into()),
            Some((aux, cyc)) => {
                if let Err(e) = cert.drawing.verify(&aux, &cyc) {
                    f.push(format!("drawing: {e}"));
                }
            }
        }
    }
    FlatReport { failures: f }
}

/// A basic wall of a chain viewed through the union mesh: its column range,
/// its core's corners and a cross between them.
struct Site<'a> {
    lo: usize,
    hi: usize,
    corners: [usize; 4],
    cross: &'a WallCross,
}

fn col_index(mesh: &Mesh, j: usize, v: usize) -> Result<usize, ClassifyError> {
    match mesh.on_col(v) {
        Some((c, p)) if c == j => Ok(p),
        _ => Err(ClassifyError::Witness(format!("vertex {v} is not on column {j}"))),
    }
}

/// `top` down column `j1` to the start of `p`, then `p`, then down column
/// `j2` from the end of `p` to `bottom`.
fn extend_cross(mesh: &Mesh, j1: usize, top: usize, p: &[usize], j2: usize, bottom: usize) -> Result<Vec<usize>, ClassifyError> {
    let mut out = mesh.col_walk(j1, col_index(mesh, j1, top)?, col_index(mesh, j1, p[0])?);
    join(&mut out, p.to_vec());
    let last = *p.last().unwrap();
    join(&mut out, mesh.col_walk(j2, col_index(mesh, j2, last)?, col_index(mesh, j2, bottom)?));
    Ok(out)
}

/// Model of H* in `g`: rows are the top and bottom `t` mesh rows, columns are
/// the first `t` columns from `first` and after each site, plus one column
/// after the last site; each site's cross, extended to the `t`-core corners,
/// realizes the two diagonals between its neighbouring columns.
fn hstar_from_sites(
    g: &Graph,
    mesh: &Mesh,
    first: usize,
    sites: &[Site],
    t: usize,
) -> Result<(FamilyInstance, MinorModel), ClassifyError> {
    let z = mesh.h();
    if sites.len() != pair_count(t) || z < 2 * t + 2 {
        return Err(ClassifyError::Param(format!("{} sites on {z} rows for t = {t}", sites.len())));
    }
    let mut col_sel = Vec::new();
    let mut start = first;
    for s in sites {
        if start + t > s.lo {
            return Err(ClassifyError::Param(format!("no room for {t} columns before column {}", s.lo)));
        }
        col_sel.extend(start..start + t);
        start = s.hi + 1;
    }
    if start >= mesh.r() {
        return Err(ClassifyError::Param("no column after the last selected wall".into()));
    }
    col_sel.push(start);
    let row_sel: Vec<usize> = (0..t).chain(z - t..z).collect();
    let b = col_sel.len();
    let mut model = mesh.grid_model(g, &row_sel, &col_sel);
    let (rt, rb) = (t - 1, z - t);
    for (k, s) in sites.iter().enumerate() {
        let (yl, yr) = (t * (k + 1) - 1, t * (k + 1));
        for (x, ri) in [(t - 1, rt), (t, rb)] {
            let from = mesh.row_span(ri, s.hi).0;
            let to = mesh.row_span(ri, col_sel[yr]).0;
            let moving: HashSet<usize> = mesh.rows[ri][from..to].iter().copied().collect();
            model.branch_sets[x * b + yl].retain(|v| !moving.contains(v));
            model.branch_sets[x * b + yr].extend(moving);
        }
        let (j1, jl) = (s.lo, s.hi);
        let a2 = mesh.cols[j1][mesh.col_span(j1, rt).1];
        let b2 = mesh.cols[jl][mesh.col_span(jl, rt).1];
        let c2 = mesh.cols[jl][mesh.col_span(jl, rb).0];
        let d2 = mesh.cols[j1][mesh.col_span(j1, rb).0];
        let [a1, b1, c1, d1] = s.corners;
        let (p1, p2) = (&s.cross.p1, &s.cross.p2);
        if p1.first() != Some(&a1) || p1.last() != Some(&c1) || p2.first() != Some(&b1) || p2.last() != Some(&d1) {
            return Err(ClassifyError::Witness(format!("cross at columns {j1}..{jl} does not join opposite corners")));
        }
        let q1 = extend_cross(mesh, j1, a2, p1, jl, c2)?;
        let q2 = extend_cross(mesh, jl, b2, p2, j1, d2)?;
        model.branch_sets[(t - 1) * b + yl].extend_from_slice(&q1[1..q1.len() - 1]);
        model.branch_sets[t * b + yl].extend_from_slice(&q2[1..q2.len() - 1]);
    }
    for s in &mut model.branch_sets {
        s.sort_unstable();
        s.dedup();
    }
    let inst = build_family_instance(Family::HStar, t, Sizing::default())?;
    model.pattern = inst.graph()?;
    model.fill_witnesses(g);
    Ok((inst, model))
}

/// `K_t` model from at least `2T` type-3 walls (`T` = pairs of `t`) whose
/// `tau`-cores carry the given crosses.
pub fn kt_from_type3(
    g: &Graph,
    chain: &Chain,
    crosses: &[(usize, WallCross)],
    tau: usize,
    t: usize,
    grasp_wall: Option<&Wall>,
) -> Result<MinorModel, ClassifyError> {
    let tt = pair_count(t);
    if t < 2 || tau <= t || 2 * tau >= chain.z {
        return Err(ClassifyError::Param(format!("t = {t}, core depth {tau}, height {}", chain.z)));
    }
    let mut list: Vec<&(usize, WallCross)> = crosses.iter().collect();
    list.sort_by_key(|c| c.0);
    list.dedup_by_key(|c| c.0);
    if list.len() < 2 * tt {
        return Err(ClassifyError::TooFew { need: 2 * tt, got: list.len() });
    }
    let picked = spaced_type3(&list.iter().map(|c| c.0).collect::<Vec<_>>(), tt);
    let mesh = chain.mesh()?;
    let off = chain.column_offsets();
    let mut cores = Vec::new();
    for &k in &picked {
        cores.push(core_wall(chain, list[k].0, tau)?);
    }
    let sites: Vec<Site> = picked
        .iter()
        .zip(&cores)
        .map(|(&k, core)| {
            let i = list[k].0;
            Site { lo: off[i], hi: off[i + 1] - 1, corners: core.corners, cross: &list[k].1 }
        })
        .collect();
    let (inst, model) = hstar_from_sites(g, &mesh, 0, &sites, t)?;
    Ok(clique_from_hstar(g, &inst, &model, grasp_wall)?)
}

/// Positions (into sorted distinct wall indices) of `count` walls with
/// consecutive indices at least two apart: every second one.
pub fn spaced_type3(indices: &[usize], count: usize) -> Vec<usize> {
    (0..indices.len()).step_by(2).take(count).collect()
}

/// Which construction produced a clique from type-1 walls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Type1Route {
    /// Bridges ending in the top or bottom rows: grid plus edges, family H2.
    H2,
    /// Bridges ending inside the enlarged walls: crosses, then H*.
    Crosses,
}

#[derive(Clone, Debug)]
pub struct Type1Clique {
    pub model: MinorModel,
    pub route: Type1Route,
    /// Wall indices used.
    pub walls: Vec<usize>,
}

/// Moves the part of a column piece from `v` down to the next row from grid
/// cell `cell` to the cell below.
pub(crate) fn push_down(model: &mut MinorModel, mesh: &Mesh, v: usize, cell: usize, b: usize) -> Result<(), ClassifyError> {
    let (j, p) = mesh
        .on_col(v)
        .filter(|_| mesh.on_row(v).is_none())
        .ok_or_else(|| ClassifyError::Witness(format!("vertex {v} is not strictly between two rows")))?;
    let k = cell / b;
    let e = mesh.col_span(j, k + 1).0;
    let moving: HashSet<usize> = mesh.cols[j][p..e].iter().copied().collect();
    model.branch_sets[cell].retain(|x| !moving.contains(x));
    model.branch_sets[cell + b].extend(moving);
    Ok(())
}

/// `K_t` model from at least `12T + 6` type-1 walls, each with a bridge path
/// from its core interior to its neighbourhood off the core.
pub fn kt_from_type1(
    g: &Graph,
    chain: &Chain,
    paths: &[(usize, Vec<usize>)],
    tau: usize,
    t: usize,
    grasp_wall: Option<&Wall>,
) -> Result<Type1Clique, ClassifyError> {
    let tt = pair_count(t);
    let z = chain.z;
    if t < 2 || tau < 2 * t || 2 * tau >= z {
        return Err(ClassifyError::Param(format!("t = {t}, core depth {tau}, height {z}")));
    }
    let mut list: Vec<&(usize, Vec<usize>)> = paths.iter().collect();
    list.sort_by_key(|p| p.0);
    list.dedup_by_key(|p| p.0);
    for p in &list {
        if p.0 == 0 || p.0 + 1 >= chain.len() {
            return Err(ClassifyError::Index(p.0, chain.len()));
        }
        if p.1.len() < 2 {
            return Err(ClassifyError::Witness(format!("bridge path of wall {} is too short", p.0)));
        }
    }
    let eligible: Vec<&(usize, Vec<usize>)> = list.into_iter().filter(|p| p.0 >= 2).collect();
    let sel: Vec<&(usize, Vec<usize>)> = eligible.iter().step_by(3).take(4 * tt + 2).copied().collect();
    if sel.len() < 4 * tt + 2 {
        return Err(ClassifyError::TooFew { need: 12 * tt + 6, got: paths.len() });
    }
    let mesh = chain.mesh()?;
    let inside = |v: usize| match mesh.row_pos(v) {
        Some(crate::mesh::LinePos::On(k)) => t <= k && k < z - t,
        Some(crate::mesh::LinePos::Between(k)) => t <= k && k + 1 < z - t,
        None => false,
    };
    let (s2, s1): (Vec<_>, Vec<_>) = sel.iter().copied().partition(|p| inside(*p.1.last().unwrap()));
    if s1.len() >= 2 * tt + 2 {
        let s1 = &s1[..2 * tt + 2];
        let rows: Vec<usize> = (0..z).collect();
        let cols: Vec<usize> = (0..mesh.r()).collect();
        let b = cols.len();
        let mut model = mesh.grid_model(g, &rows, &cols);
        let own = model.owner_map(g.n());
        let mut edges = Vec::new();
        for (_, p) in s1 {
            let (x, y) = (p[0], *p.last().unwrap());
            let missing = |v: usize| ClassifyError::Witness(format!("bridge end {v} is not on the chain"));
            let mut cx = own[x].ok_or_else(|| missing(x))?;
            let mut cy = own[y].ok_or_else(|| missing(y))?;
            if cx / b < 2 * t {
                push_down(&mut model, &mesh, x, cx, b)?;
                cx += b;
            }
            if cy / b == z - t - 1 {
                push_down(&mut model, &mesh, y, cy, b)?;
                cy += b;
            }
            model.branch_sets[cx].extend_from_slice(&p[1..p.len() - 1]);
            edges.push(FamilyEdge { x: (cx / b + 1, cx % b + 1), y: (cy / b + 1, cy % b + 1) });
        }
        for s in &mut model.branch_sets {
            s.sort_unstable();
            s.dedup();
        }
        let inst = FamilyInstance { family: Family::H2, t, h: z, r: b, edges };
        let rep = validate_family(&inst);
        if !rep.is_pass() {
            return Err(ClassifyError::Witness(rep.failures.join("; ")));
        }
        model.pattern = inst.graph()?;
        model.fill_witnesses(g);
        let out = clique_from_h2(g, &inst, &model, grasp_wall)?;
        return Ok(Type1Clique { model: out, route: Type1Route::H2, walls: s1.iter().map(|p| p.0).collect() });
    }
    // Enlarged walls: the columns of walls i-1..=i+1, after the first t
    // columns of the chain.
    let off = chain.column_offsets();
    let mut ranges = vec![(0, t - 1)];
    ranges.extend(s2.iter().map(|p| (off[p.0 - 1], off[p.0 + 2] - 1)));
    let mut crosses = Vec::new();
    let mut used = Vec::new();
    for k in (1..ranges.len() - 1).step_by(2).take(tt) {
        let (lo, hi) = ranges[k];
        let core = mesh.sub(t, z - t - 1, lo, hi)?;
        let (p1, p2) = core.cross_from_chord(&s2[k - 1].1)?;
        crosses.push((lo, hi, core.corners(), WallCross { p1, p2 }));
        used.push(s2[k - 1].0);
    }
    if crosses.len() < tt {
        return Err(ClassifyError::TooFew { need: 2 * tt + 1, got: s2.len() });
    }
    let sites: Vec<Site> = crosses.iter().map(|(lo, hi, c, x)| Site { lo: *lo, hi: *hi, corners: *c, cross: x }).collect();
    let (inst, model) = hstar_from_sites(g, &mesh, 0, &sites, t)?;
    let out = clique_from_hstar(g, &inst, &model, grasp_wall)?;
    Ok(Type1Clique { model: out, route: Type1Route::Crosses, walls: used })
}
