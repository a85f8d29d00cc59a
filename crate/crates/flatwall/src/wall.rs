//! Elementary walls, wall subdivisions with a fixed good mapping, sub-walls,
//! grid contraction and linkedness routing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, MinorModel};
use crate::linkage::{vertex_disjoint_linkage, Linkage, LinkageOutcome};
use crate::mesh::{CrossError, Mesh};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("wall needs height and width at least 2, got {0}x{1}")]
    TooSmall(usize, usize),
    #[error("bad range: rows {0}..={1}, cols {2}..={3} in a {4}x{5} wall")]
    Range(usize, usize, usize, usize, usize, usize),
    #[error("invalid wall mapping: {0}")]
    Mapping(String),
    #[error("linkage input: {0}")]
    LinkageInput(String),
    #[error("linkage unexpectedly failed, cut of size {0}")]
    NoLinkage(usize),
    #[error(transparent)]
    Cross(#[from] CrossError),
}

/// Elementary wall of height `h` and width `r`, built from an `h x 2r` grid.
/// Vertical edges of the grid survive between rows `i, i+1` at grid column `j`
/// iff `i + j` is even (1-based), or odd when `flipped`. Degree-1 vertices are
/// then deleted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "WallDims", into = "WallDims")]
pub struct ElementaryWall {
    pub h: usize,
    pub r: usize,
    pub flipped: bool,
    graph: Graph,
    coords: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

#[derive(Serialize, Deserialize)]
struct WallDims {
    h: usize,
    r: usize,
    flipped: bool,
}

impl From<WallDims> for ElementaryWall {
    fn from(d: WallDims) -> Self {
        ElementaryWall::with_parity(d.h.max(2), d.r.max(2), d.flipped).expect("dims clamped")
    }
}

impl From<ElementaryWall> for WallDims {
    fn from(w: ElementaryWall) -> Self {
        WallDims { h: w.h, r: w.r, flipped: w.flipped }
    }
}

pub fn build_elementary_wall(h: usize, r: usize) -> Result<ElementaryWall, WallError> {
    ElementaryWall::with_parity(h, r, false)
}

impl ElementaryWall {
    pub fn with_parity(h: usize, r: usize, flipped: bool) -> Result<Self, WallError> {
        if h < 2 || r < 2 {
            return Err(WallError::TooSmall(h, r));
        }
        let w2 = 2 * r;
        let rung = |i: usize, j: usize| (i + j).is_multiple_of(2) != flipped;
        let mut alive = vec![vec![true; w2 + 1]; h + 1];
        let deg = |alive: &Vec<Vec<bool>>, i: usize, j: usize| {
            let mut d = 0;
            if j > 1 && alive[i][j - 1] {
                d += 1;
            }
            if j < w2 && alive[i][j + 1] {
                d += 1;
            }
            if i > 1 && rung(i - 1, j) && alive[i - 1][j] {
                d += 1;
            }
            if i < h && rung(i, j) && alive[i + 1][j] {
                d += 1;
            }
            d
        };
        loop {
            let mut changed = false;
            for i in 1..=h {
                for j in 1..=w2 {
                    if alive[i][j] && deg(&alive, i, j) <= 1 {
                        alive[i][j] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut coords = Vec::new();
        let mut index = HashMap::new();
        for i in 1..=h {
            for j in 1..=w2 {
                if alive[i][j] {
                    index.insert((i, j), coords.len());
                    coords.push((i, j));
                }
            }
        }
        let mut graph = Graph::new(coords.len());
        for (id, &(i, j)) in coords.iter().enumerate() {
            if let Some(&k) = index.get(&(i, j + 1)) {
                graph.add_edge(id, k);
            }
            if rung(i, j) {
                if let Some(&k) = index.get(&(i + 1, j)) {
                    graph.add_edge(id, k);
                }
            }
        }
        Ok(ElementaryWall { h, r, flipped, graph, coords, index })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn id(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    pub fn coord(&self, v: usize) -> (usize, usize) {
        self.coords[v]
    }

    fn rung(&self, i: usize, j: usize) -> bool {
        (i + j).is_multiple_of(2) != self.flipped
    }

    /// Grid column of column `k`'s vertical edge leaving row `i` downwards.
    fn col_out(&self, i: usize, k: usize) -> usize {
        if self.rung(i, 2 * k - 1) {
            2 * k - 1
        } else {
            2 * k
        }
    }

    /// Row `i` (1-based) as a path of template vertices, left to right.
    pub fn row(&self, i: usize) -> Vec<usize> {
        (1..=2 * self.r).filter_map(|j| self.id(i, j)).collect()
    }

    /// Column `k` (1-based) as a path from row 1 down to row `h`.
    pub fn column(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 1..=self.h {
            let cin = if i > 1 { Some(self.col_out(i - 1, k)) } else { None };
            let cout = if i < self.h { Some(self.col_out(i, k)) } else { None };
            match (cin, cout) {
                (None, Some(o)) => out.push(self.id(i, o).expect("column start")),
                (Some(c), None) => out.push(self.id(i, c).expect("column end")),
                (Some(c), Some(o)) => {
                    out.push(self.id(i, c).expect("column entry"));
                    if o != c {
                        out.push(self.id(i, o).expect("column exit"));
                    }
                }
                (None, None) => unreachable!("h >= 2"),
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (1..=self.h).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (1..=self.r).map(|k| self.column(k)).collect()
    }

    /// Corners `[a, b, c, d]`, clockwise from top-left.
    pub fn corners(&self) -> [usize; 4] {
        let c1 = self.column(1);
        let cr = self.column(self.r);
        [c1[0], cr[0], *cr.last().unwrap(), *c1.last().unwrap()]
    }

    /// Outer boundary as a closed walk starting at corner `a` (first vertex not repeated).
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let mut cyc = self.row(1);
        let cr = self.column(self.r);
        cyc.extend_from_slice(&cr[1..]);
        let mut rh = self.row(self.h);
        rh.reverse();
        cyc.extend_from_slice(&rh[1..]);
        let mut c1 = self.column(1);
        c1.reverse();
        cyc.extend_from_slice(&c1[1..c1.len() - 1]);
        cyc
    }

    /// Degree-2 vertices of the boundary.
    pub fn pegs(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.boundary_cycle().into_iter().filter(|&v| self.graph.degree(v) == 2).collect();
        p.sort_unstable();
        p
    }
}

/// A subdivision of an elementary wall in a host graph, with a fixed mapping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub template: ElementaryWall,
    /// Host vertex for each template vertex.
    pub branch: Vec<usize>,
    /// Host path for each template edge, in `template.graph().edges()` order,
    /// oriented from the smaller template endpoint.
    pub paths: Vec<Vec<usize>>,
}

impl Wall {
    fn edge_index(&self) -> HashMap<(usize, usize), usize> {
        self.template.graph().edges().enumerate().map(|(i, e)| (e, i)).collect()
    }

    /// Host path along template vertices `seq` (consecutive ones adjacent).
    pub fn template_walk(&self, seq: &[usize]) -> Vec<usize> {
        self.host_walk(seq, &self.edge_index())
    }

    fn host_walk(&self, seq: &[usize], idx: &HashMap<(usize, usize), usize>) -> Vec<usize> {
        let mut out = vec![self.branch[seq[0]]];
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            let e = idx[&(a.min(b), a.max(b))];
            let p = &self.paths[e];
            if a < b {
                out.extend_from_slice(&p[1..]);
            } else {
                out.extend(p.iter().rev().skip(1));
            }
        }
        out
    }

    pub fn host_rows(&self) -> Vec<Vec<usize>> {
        let idx = self.edge_index();
        self.template.rows().iter().map(|r| self.host_walk(r, &idx)).collect()
    }

    pub fn host_columns(&self) -> Vec<Vec<usize>> {
        let idx = self.edge_index();
        self.template.columns().iter().map(|c| self.host_walk(c, &idx)).collect()
    }

    pub fn mesh(&self) -> Mesh {
        Mesh::new(self.host_rows(), self.host_columns()).expect("walls give valid meshes")
    }

    pub fn corners(&self) -> [usize; 4] {
        self.template.corners().map(|v| self.branch[v])
    }

    /// Host cycle along the outer boundary, starting at corner `a`.
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let mut seq = self.template.boundary_cycle();
        seq.push(seq[0]);
        let mut walk = self.host_walk(&seq, &self.edge_index());
        walk.pop();
        walk
    }

    pub fn pegs(&self) -> Vec<usize> {
        self.template.pegs().iter().map(|&v| self.branch[v]).collect()
    }

    pub fn h(&self) -> usize {
        self.template.h
    }

    pub fn r(&self) -> usize {
        self.template.r
    }

    /// All host vertices of the wall, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.paths.iter().flatten().copied().chain(self.branch.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Host vertex of template coordinate `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> Option<usize> {
        self.template.id(i, j).map(|t| self.branch[t])
    }

    /// Checks the good-mapping invariants against `host`.
    pub fn check(&self, host: &Graph) -> Result<(), WallError> {
        let t = self.template.graph();
        let bad = |m: String| Err(WallError::Mapping(m));
        if self.branch.len() != t.n() {
            return bad(format!("{} branch vertices for {} template vertices", self.branch.len(), t.n()));
        }
        if self.paths.len() != t.m() {
            return bad(format!("{} paths for {} template edges", self.paths.len(), t.m()));
        }
        let mut owner = vec![usize::MAX; host.n()];
        for (tv, &hv) in self.branch.iter().enumerate() {
            if hv >= host.n() {
                return bad(format!("branch vertex {hv} out of range"));
            }
            if owner[hv] != usize::MAX {
                return bad(format!("branch map not injective at {hv}"));
            }
            owner[hv] = tv;
        }
        let mut inner = vec![false; host.n()];
        for ((a, b), p) in t.edges().zip(&self.paths) {
            if !host.is_path(p) || p.len() < 2 {
                return bad(format!("edge ({a},{b}) is not a host path"));
            }
            if p[0] != self.branch[a] || *p.last().unwrap() != self.branch[b] {
                return bad(format!("edge ({a},{b}) path has wrong ends"));
            }
            for &x in &p[1..p.len() - 1] {
                if owner[x] != usize::MAX || inner[x] {
                    return bad(format!("edge ({a},{b}) path interior clashes at {x}"));
                }
                inner[x] = true;
            }
        }
        Ok(())
    }

    /// Sub-wall spanned by rows `i1..=i2` and columns `j1..=j2` (1-based).
    pub fn subwall(&self, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Wall, WallError> {
        let (h, r) = (self.h(), self.r());
        if !(1 <= i1 && i1 < i2 && i2 <= h && 1 <= j1 && j1 < j2 && j2 <= r) {
            return Err(WallError::Range(i1, i2, j1, j2, h, r));
        }
        let flipped = self.template.flipped ^ i1.is_multiple_of(2);
        let tpl = ElementaryWall::with_parity(i2 - i1 + 1, j2 - j1 + 1, flipped)?;
        let map = |(i, j): (usize, usize)| (i + i1 - 1, j + 2 * j1 - 2);
        self.transport(tpl, map)
    }

    /// The same wall viewed after a half-turn: row `i` becomes row `h+1-i` and
    /// columns are reversed.
    pub fn rotate180(&self) -> Wall {
        let (h, r) = (self.h(), self.r());
        let flipped = self.template.flipped ^ (h % 2 == 0);
        let tpl = ElementaryWall::with_parity(h, r, flipped).expect("same dims");
        self.transport(tpl, |(i, j)| (h + 1 - i, 2 * r + 1 - j)).expect("rotation is an isomorphism")
    }

    /// Builds a wall over template `tpl` whose coordinates map into this wall's
    /// template by `map`, inheriting branch vertices and edge paths.
    fn transport(&self, tpl: ElementaryWall, map: impl Fn((usize, usize)) -> (usize, usize)) -> Result<Wall, WallError> {
        let idx = self.edge_index();
        let mut branch = Vec::with_capacity(tpl.graph().n());
        let mut parent_of = Vec::with_capacity(tpl.graph().n());
        for v in 0..tpl.graph().n() {
            let (pi, pj) = map(tpl.coord(v));
            let pv = self
                .template
                .id(pi, pj)
                .ok_or_else(|| WallError::Mapping(format!("coordinate ({pi},{pj}) missing in parent")))?;
            parent_of.push(pv);
            branch.push(self.branch[pv]);
        }
        let mut paths = Vec::with_capacity(tpl.graph().m());
        for (a, b) in tpl.graph().edges() {
            let (pa, pb) = (parent_of[a], parent_of[b]);
            let e = *idx
                .get(&(pa.min(pb), pa.max(pb)))
                .ok_or_else(|| WallError::Mapping(format!("edge ({pa},{pb}) missing in parent")))?;
            let p = &self.paths[e];
            paths.push(if pa < pb { p.clone() } else { p.iter().rev().copied().collect() });
        }
        Ok(Wall { template: tpl, branch, paths })
    }

    /// Contraction to an `h x r` grid, with the model of the grid in the host.
    /// Grid vertex `(i, j)` (0-based) has id `i * r + j`.
    pub fn contract_to_grid(&self, host: &Graph) -> (Graph, MinorModel) {
        let mesh = self.mesh();
        let rows: Vec<usize> = (0..self.h()).collect();
        let cols: Vec<usize> = (0..self.r()).collect();
        let model = mesh.grid_model(host, &rows, &cols);
        (Graph::grid(self.h(), self.r()), model)
    }

    /// Wall-cross `(a -> c, b -> d)` in the wall plus the chord path from `u` to `v`.
    pub fn cross_from_chord(&self, chord: &[usize]) -> Result<(Vec<usize>, Vec<usize>), WallError> {
        if self.h() < 5 || self.r() < 5 {
            return Err(WallError::TooSmall(self.h(), self.r()));
        }
        Ok(self.mesh().cross_from_chord(chord)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("wall serializes")
    }
}

impl ElementaryWall {
    /// This template as a wall of its own graph.
    pub fn as_wall(&self) -> Wall {
        let g = self.graph();
        Wall { template: self.clone(), branch: (0..g.n()).collect(), paths: g.edges().map(|(a, b)| vec![a, b]).collect() }
    }
}

/// Identity wall: the host is the elementary wall itself.
pub fn identity_wall(h: usize, r: usize) -> Result<(Graph, Wall), WallError> {
    let tpl = build_elementary_wall(h, r)?;
    let g = tpl.graph().clone();
    let branch = (0..g.n()).collect();
    let paths = g.edges().map(|(a, b)| vec![a, b]).collect();
    Ok((g, Wall { template: tpl, branch, paths }))
}

/// Identity wall with every edge subdivided `k` times; template vertices keep
/// their ids, subdivision vertices follow.
pub fn subdivided_wall(h: usize, r: usize, k: usize) -> Result<(Graph, Wall), WallError> {
    let tpl = build_elementary_wall(h, r)?;
    let base = tpl.graph().n();
    let mut g = Graph::new(base + k * tpl.graph().m());
    let mut next = base;
    let mut paths = Vec::new();
    for (a, b) in tpl.graph().edges() {
        let mut p = vec![a];
        for _ in 0..k {
            p.push(next);
            next += 1;
        }
        p.push(b);
        for w in p.windows(2) {
            g.add_edge(w[0], w[1]);
        }
        paths.push(p);
    }
    Ok((g, Wall { template: tpl, branch: (0..base).collect(), paths }))
}

/// Grid linkage between first-column rows `x_rows` and last-column rows
/// `y_rows` of an `h x r` grid (0-based rows); grid ids are `i * r + j`.
pub fn grid_linkage(h: usize, r: usize, x_rows: &[usize], y_rows: &[usize]) -> Result<Linkage, WallError> {
    if x_rows.len() != y_rows.len() || x_rows.len() > h.min(r) || x_rows.is_empty() {
        return Err(WallError::LinkageInput(format!("sizes {} and {} in a {h}x{r} grid", x_rows.len(), y_rows.len())));
    }
    if x_rows.iter().chain(y_rows).any(|&i| i >= h) {
        return Err(WallError::LinkageInput("row out of range".into()));
    }
    let g = Graph::grid(h, r);
    let xs: Vec<usize> = x_rows.iter().map(|&i| i * r).collect();
    let ys: Vec<usize> = y_rows.iter().map(|&i| i * r + r - 1).collect();
    match vertex_disjoint_linkage(&g, &xs, &ys, xs.len()).map_err(|e| WallError::LinkageInput(e.to_string()))? {
        LinkageOutcome::Paths(l) => Ok(l),
        LinkageOutcome::Cut(c) => Err(WallError::NoLinkage(c.len())),
    }
}

/// Linkage in an elementary wall between vertex sets with at most one vertex
/// per row each.
pub fn wall_linkage(w: &ElementaryWall, x_sub: &[usize], y_sub: &[usize]) -> Result<Linkage, WallError> {
    let per_row_ok = |s: &[usize]| {
        let mut rows: Vec<usize> = s.iter().map(|&v| w.coord(v).0).collect();
        rows.sort_unstable();
        rows.windows(2).all(|p| p[0] != p[1])
    };
    if x_sub.len() != y_sub.len() || x_sub.is_empty() || !per_row_ok(x_sub) || !per_row_ok(y_sub) {
        return Err(WallError::LinkageInput("need equal sizes and at most one vertex per row".into()));
    }
    match vertex_disjoint_linkage(w.graph(), x_sub, y_sub, x_sub.len()).map_err(|e| WallError::LinkageInput(e.to_string()))? {
        LinkageOutcome::Paths(l) => Ok(l),
        LinkageOutcome::Cut(c) => Err(WallError::NoLinkage(c.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_minor_model;

    fn is_simple_cycle(g: &Graph, cyc: &[usize]) -> bool {
        let mut s = cyc.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() == cyc.len() && cyc.len() >= 3 && (0..cyc.len()).all(|i| g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]))
    }

    #[test]
    fn wall_3_3_counts() {
        let w = build_elementary_wall(3, 3).unwrap();
        assert_eq!(w.graph().n(), 16);
        assert_eq!(w.graph().m(), 19);
        assert!(w.id(3, 1).is_none());
        assert!(w.id(1, 6).is_none());
    }

    #[test]
    fn wall_5_4_shape() {
        let w = build_elementary_wall(5, 4).unwrap();
        assert_eq!(w.rows().len(), 5);
        assert_eq!(w.columns().len(), 4);
        let [a, b, c, d] = w.corners();
        assert_eq!(w.coord(a), (1, 1));
        assert_eq!(w.coord(b), (1, 7));
        assert_eq!(w.coord(c), (5, 8));
        assert_eq!(w.coord(d), (5, 2));
    }

    #[test]
    fn wall_2_2_all_boundary() {
        let w = build_elementary_wall(2, 2).unwrap();
        assert_eq!(w.boundary_cycle().len(), w.graph().n());
        assert!(is_simple_cycle(w.graph(), &w.boundary_cycle()));
    }

    #[test]
    fn degrees_and_boundaries() {
        for flipped in [false, true] {
            for h in 2..=9 {
                for r in 2..=9 {
                    let w = ElementaryWall::with_parity(h, r, flipped).unwrap();
                    let g = w.graph();
                    assert!((0..g.n()).all(|v| (2..=3).contains(&g.degree(v))), "{h}x{r}");
                    assert!(is_simple_cycle(g, &w.boundary_cycle()), "{h}x{r} {flipped}");
                    for c in w.columns() {
                        assert!(g.is_path(&c));
                    }
                    for row in w.rows() {
                        assert!(g.is_path(&row));
                    }
                    assert!(w.pegs().len() >= 4);
                }
            }
        }
    }

    #[test]
    fn rows_and_columns_cover_edges() {
        let w = build_elementary_wall(6, 5).unwrap();
        let mut seen = std::collections::HashSet::new();
        for p in w.rows().into_iter().chain(w.columns()) {
            for e in p.windows(2) {
                seen.insert((e[0].min(e[1]), e[0].max(e[1])));
            }
        }
        assert_eq!(seen.len(), w.graph().m());
    }

    #[test]
    fn identity_wall_valid() {
        let (g, w) = identity_wall(5, 4).unwrap();
        assert_eq!(w.paths.len(), g.m());
        w.check(&g).unwrap();
        let (g, w) = identity_wall(2, 2).unwrap();
        w.check(&g).unwrap();
    }

    #[test]
    fn subwall_full_range_is_same() {
        let (g, w) = identity_wall(6, 5).unwrap();
        let s = w.subwall(1, 6, 1, 5).unwrap();
        assert_eq!(s, w);
        s.check(&g).unwrap();
    }

    #[test]
    fn subwalls_check() {
        let (g, w) = subdivided_wall(7, 7, 1).unwrap();
        for (i1, i2, j1, j2) in [(2, 4, 2, 4), (3, 5, 3, 5), (2, 7, 1, 3), (1, 2, 6, 7), (4, 6, 2, 6)] {
            let s = w.subwall(i1, i2, j1, j2).unwrap();
            s.check(&g).unwrap();
            let rows = w.host_rows();
            for (k, row) in s.host_rows().iter().enumerate() {
                let parent = &rows[i1 - 1 + k];
                let pos = parent.iter().position(|&x| x == row[0]).unwrap();
                assert_eq!(&parent[pos..pos + row.len()], &row[..]);
            }
        }
        assert!(w.subwall(3, 3, 1, 4).is_err());
    }

    #[test]
    fn rotation_round_trip() {
        for h in [4, 5] {
            let (g, w) = subdivided_wall(h, 4, 1).unwrap();
            let rot = w.rotate180();
            rot.check(&g).unwrap();
            assert_eq!(rot.corners(), {
                let [a, b, c, d] = w.corners();
                [c, d, a, b]
            });
            assert_eq!(rot.rotate180(), w);
        }
    }

    #[test]
    fn grid_contraction_identity() {
        let (g, w) = identity_wall(5, 6).unwrap();
        let (grid, model) = w.contract_to_grid(&g);
        assert_eq!(grid.n(), 30);
        assert!(validate_minor_model(&g, &model).unwrap().is_pass());
        // every branch set meets host row i and no other row
        let rows = w.host_rows();
        for (id, bs) in model.branch_sets.iter().enumerate() {
            let i = id / 6;
            for (k, row) in rows.iter().enumerate() {
                let meets = bs.iter().any(|v| row.contains(v));
                assert_eq!(meets, k == i, "cell {id} row {k}");
            }
        }
    }

    #[test]
    fn grid_linkage_rows() {
        let l = grid_linkage(4, 7, &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert_eq!(l.paths.len(), 4);
        let l = grid_linkage(4, 7, &[2], &[2]).unwrap();
        assert_eq!(l.paths[0].len(), 7);
        assert!(grid_linkage(4, 7, &[0, 1], &[0]).is_err());
    }

    #[test]
    fn wall_linkage_rows() {
        let w = build_elementary_wall(5, 5).unwrap();
        let x: Vec<usize> = (1..=5).map(|i| w.row(i)[0]).collect();
        let y: Vec<usize> = (1..=5).map(|i| *w.row(i).last().unwrap()).collect();
        let l = wall_linkage(&w, &x, &y).unwrap();
        assert_eq!(l.paths.len(), 5);
    }
}
