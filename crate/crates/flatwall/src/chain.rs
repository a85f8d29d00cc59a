//! Chains of basic walls: a long wall of height `z` made of square pieces
//! joined row-to-row by connector paths, and the cut of a square wall into
//! such a chain through horizontal strips joined snake-wise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::linkage::{vertex_disjoint_linkage, LinkageOutcome};
use crate::mesh::{join, Mesh, MeshError};
use crate::wall::{Wall, WallError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("parameter error: {0}")]
    Param(String),
    #[error("basic wall {0}: {1}")]
    Wall(usize, WallError),
    #[error("basic wall {0} has height {1}, expected {2}")]
    Height(usize, usize, usize),
    #[error("basic wall {0} has width {1} < height {2}")]
    Narrow(usize, usize, usize),
    #[error("basic walls {0} and {1} share vertex {2}")]
    WallsOverlap(usize, usize, usize),
    #[error("expected {0} connector families, got {1}")]
    FamilyCount(usize, usize),
    #[error("connector family {0} has {1} paths, expected {2}")]
    FamilySize(usize, usize, usize),
    #[error("connector {0}/{1} is not a host path")]
    NotPath(usize, usize),
    #[error("connector {0}/{1} does not join row {1} of wall {0} to row {1} of the next wall")]
    Ends(usize, usize),
    #[error("connector {0}/{1} passes through basic-wall vertex {2}")]
    ThroughWall(usize, usize, usize),
    #[error("connectors share vertex {0}")]
    ConnectorsOverlap(usize),
    #[error("strip gadget {0}: {1}")]
    Gadget(usize, String),
    #[error("union is not a mesh: {0}")]
    Mesh(#[from] MeshError),
}

/// Basic walls `walls[0..M]` of common height `z`, and for each consecutive
/// pair a family of `z` connectors, `connectors[j][i]` running from the end
/// of row `i` of wall `j` to the start of row `i` of wall `j + 1` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub z: usize,
    pub walls: Vec<Wall>,
    pub connectors: Vec<Vec<Vec<usize>>>,
}

fn row_ends(w: &Wall) -> Vec<(usize, usize)> {
    w.host_rows().iter().map(|r| (r[0], *r.last().unwrap())).collect()
}

/// Validates the chain conditions against `host` and wraps the parts.
pub fn assemble_chain(host: &Graph, walls: Vec<Wall>, connectors: Vec<Vec<Vec<usize>>>) -> Result<Chain, ChainError> {
    if walls.is_empty() {
        return Err(ChainError::Param("no basic walls".into()));
    }
    let z = walls[0].h();
    let mut owner = vec![usize::MAX; host.n()];
    for (k, w) in walls.iter().enumerate() {
        w.check(host).map_err(|e| ChainError::Wall(k, e))?;
        if w.h() != z {
            return Err(ChainError::Height(k, w.h(), z));
        }
        if w.r() < z {
            return Err(ChainError::Narrow(k, w.r(), z));
        }
        for v in w.vertices() {
            if owner[v] != usize::MAX {
                return Err(ChainError::WallsOverlap(owner[v], k, v));
            }
            owner[v] = k;
        }
    }
    if connectors.len() + 1 != walls.len() {
        return Err(ChainError::FamilyCount(walls.len() - 1, connectors.len()));
    }
    let mut used = vec![false; host.n()];
    for (j, fam) in connectors.iter().enumerate() {
        if fam.len() != z {
            return Err(ChainError::FamilySize(j, fam.len(), z));
        }
        let (a, b) = (row_ends(&walls[j]), row_ends(&walls[j + 1]));
        for (i, p) in fam.iter().enumerate() {
            if p.len() < 2 || !host.is_path(p) {
                return Err(ChainError::NotPath(j, i));
            }
            if p[0] != a[i].1 || *p.last().unwrap() != b[i].0 {
                return Err(ChainError::Ends(j, i));
            }
            for &v in &p[1..p.len() - 1] {
                if owner[v] != usize::MAX {
                    return Err(ChainError::ThroughWall(j, i, v));
                }
            }
            for &v in p {
                if used[v] {
                    return Err(ChainError::ConnectorsOverlap(v));
                }
                used[v] = true;
            }
        }
    }
    let chain = Chain { z, walls, connectors };
    chain.mesh()?;
    Ok(chain)
}

impl Chain {
    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    /// The union as a mesh: `z` rows running through every basic wall and
    /// connector, and the columns of all basic walls in order.
    pub fn mesh(&self) -> Result<Mesh, MeshError> {
        let wall_rows: Vec<Vec<Vec<usize>>> = self.walls.iter().map(|w| w.host_rows()).collect();
        let mut rows = Vec::with_capacity(self.z);
        for i in 0..self.z {
            let mut row = wall_rows[0][i].clone();
            for j in 1..self.walls.len() {
                join(&mut row, self.connectors[j - 1][i].clone());
                join(&mut row, wall_rows[j][i].clone());
            }
            rows.push(row);
        }
        let cols = self.walls.iter().flat_map(|w| w.host_columns()).collect();
        Mesh::new(rows, cols)
    }

    /// Index of the first mesh column of each basic wall, plus the total.
    pub fn column_offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for w in &self.walls {
            off.push(off.last().unwrap() + w.r());
        }
        off
    }

    /// Host vertices of the union.
    pub fn union_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for w in &self.walls {
            w.vertices().into_iter().for_each(|v| m[v] = true);
        }
        self.connectors.iter().flatten().flatten().for_each(|&v| m[v] = true);
        m
    }

    /// Host edges of the union.
    pub fn union_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .walls
            .iter()
            .flat_map(|w| w.paths.iter())
            .chain(self.connectors.iter().flatten())
            .flat_map(|p| p.windows(2).map(|x| (x[0].min(x[1]), x[0].max(x[1]))).collect::<Vec<_>>())
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Vertices of walls `i-1, i, i+1` and the connectors between them
    /// (0-based `i`; missing neighbours are skipped).
    pub fn neighborhood(&self, i: usize, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(self.walls.len() - 1);
        for k in lo..=hi {
            self.walls[k].vertices().into_iter().for_each(|v| m[v] = true);
        }
        for k in lo..hi {
            self.connectors[k].iter().flatten().for_each(|&v| m[v] = true);
        }
        m
    }

    /// The first `m` basic walls with their connectors.
    pub fn truncate(&self, m: usize) -> Chain {
        let m = m.min(self.walls.len());
        Chain { z: self.z, walls: self.walls[..m].to_vec(), connectors: self.connectors[..m.saturating_sub(1)].to_vec() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chain serializes")
    }
}

/// Host path between two vertices of the same mesh row.
fn row_segment(mesh: &Mesh, a: usize, b: usize) -> Option<Vec<usize>> {
    let (ra, pa) = mesh.on_row(a)?;
    let (rb, pb) = mesh.on_row(b)?;
    if ra != rb {
        return None;
    }
    let row = &mesh.rows[ra];
    Some(if pa <= pb { row[pa..=pb].to_vec() } else { row[pb..=pa].iter().rev().copied().collect() })
}

/// Chain of `m` basic walls of width `width` cut from a wall of height `z`,
/// with `gap` wall columns skipped between consecutive pieces. Connectors are
/// the row segments between pieces.
pub fn chain_from_strip(host: &Graph, w: &Wall, m: usize, width: usize, gap: usize) -> Result<Chain, ChainError> {
    if m == 0 || width < 2 {
        return Err(ChainError::Param(format!("{m} pieces of width {width}")));
    }
    let need = m * width + (m - 1) * gap;
    if need > w.r() {
        return Err(ChainError::Param(format!("strip of width {} is narrower than {need}", w.r())));
    }
    let mesh = w.mesh();
    let mut walls = Vec::with_capacity(m);
    for k in 0..m {
        let j1 = k * (width + gap) + 1;
        walls.push(w.subwall(1, w.h(), j1, j1 + width - 1).map_err(|e| ChainError::Wall(k, e))?);
    }
    let mut connectors = Vec::new();
    for k in 0..m - 1 {
        let (a, b) = (row_ends(&walls[k]), row_ends(&walls[k + 1]));
        let fam = (0..w.h())
            .map(|i| row_segment(&mesh, a[i].1, b[i].0).ok_or_else(|| ChainError::Gadget(k, "rows do not line up".into())))
            .collect::<Result<Vec<_>, _>>()?;
        connectors.push(fam);
    }
    assemble_chain(host, walls, connectors)
}

/// Cuts an `nz x nz` wall (the top-left one of `w` if larger) into `n`
/// horizontal strips, drops the first and last basic wall of every strip, and
/// chains the remaining `n(n-2)` basic walls snake-wise: odd strips run left
/// to right, even strips right to left (half-turned), and consecutive strips
/// are joined through the dropped end walls.
pub fn cut_wall_to_chain(host: &Graph, w: &Wall, n: usize, z: usize) -> Result<Chain, ChainError> {
    if n < 3 {
        return Err(ChainError::Param(format!("need at least 3 strips, got {n}")));
    }
    if z < 2 {
        return Err(ChainError::Param(format!("height {z} below 2")));
    }
    let side = n * z;
    if w.h() < side || w.r() < side {
        return Err(ChainError::Param(format!("wall {}x{} is smaller than {side}x{side}", w.h(), w.r())));
    }
    let w =
        if w.h() > side || w.r() > side { w.subwall(1, side, 1, side).map_err(|e| ChainError::Wall(0, e))? } else { w.clone() };
    let tw = w.template.as_wall();
    let block = |tw: &Wall, s: usize, b: usize| tw.subwall((s - 1) * z + 1, s * z, (b - 1) * z + 1, b * z);
    let mesh = w.mesh();

    let mut walls = Vec::new();
    let mut connectors: Vec<Vec<Vec<usize>>> = Vec::new();
    for s in 1..=n {
        let order: Vec<usize> = if s % 2 == 1 { (2..n).collect() } else { (2..n).rev().collect() };
        for (k, &b) in order.iter().enumerate() {
            let bw = block(&w, s, b).map_err(|e| ChainError::Wall(walls.len(), e))?;
            let bw = if s % 2 == 1 { bw } else { bw.rotate180() };
            if k == 0 && s > 1 {
                connectors.push(strip_gadget(&w, &tw, s - 1, n, z, walls.last().unwrap(), &bw)?);
            } else if k > 0 {
                let (a, c) = (row_ends(walls.last().unwrap()), row_ends(&bw));
                let fam = (0..z)
                    .map(|i| {
                        row_segment(&mesh, a[i].1, c[i].0).ok_or_else(|| ChainError::Gadget(s, "rows do not line up".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                connectors.push(fam);
            }
            walls.push(bw);
        }
    }
    assemble_chain(host, walls, connectors)
}

/// Connectors from strip `s` to strip `s + 1` routed through their end
/// blocks: the last blocks for odd `s`, the first blocks for even `s`.
fn strip_gadget(
    w: &Wall,
    tw: &Wall,
    s: usize,
    n: usize,
    z: usize,
    from: &Wall,
    to: &Wall,
) -> Result<Vec<Vec<usize>>, ChainError> {
    let tg = w.template.graph();
    let (end, inner) = if s % 2 == 1 { (n, n - 1) } else { (1, 2) };
    let tblock = |s: usize, b: usize| tw.subwall((s - 1) * z + 1, s * z, (b - 1) * z + 1, b * z);
    let err = |e: WallError| ChainError::Gadget(s, e.to_string());
    // The two end blocks as a coordinate box of the template, so the rungs
    // between the strips at the block's far corner stay in.
    let (r1, r2) = ((s - 1) * z + 1, (s + 1) * z);
    let (c1, c2) = (2 * (end - 1) * z + 1, 2 * end * z);
    let in_blocks: Vec<bool> = (0..tg.n())
        .map(|v| {
            let (i, j) = w.template.coord(v);
            (r1..=r2).contains(&i) && (c1..=c2).contains(&j)
        })
        .collect();
    // Attachment side: the row end of each inner-block row facing the end
    // block, joined to that block by the row segment in between.
    let tmesh = tw.mesh();
    let mut gadget = Graph::new(tg.n());
    for (a, b) in tg.edges() {
        if in_blocks[a] && in_blocks[b] {
            gadget.add_edge(a, b);
        }
    }
    let mut attach = |ss: usize| -> Result<Vec<usize>, ChainError> {
        let rows = tblock(ss, inner).map_err(err)?.host_rows();
        let ends = tblock(ss, end).map_err(err)?.host_rows();
        let mut out = Vec::with_capacity(z);
        for (r, e) in rows.iter().zip(&ends) {
            let (x, y) = if s % 2 == 1 { (*r.last().unwrap(), e[0]) } else { (r[0], *e.last().unwrap()) };
            let seg = row_segment(&tmesh, x, y).ok_or_else(|| ChainError::Gadget(s, "rows do not line up".into()))?;
            for p in seg.windows(2) {
                gadget.add_edge(p[0], p[1]);
            }
            out.push(x);
        }
        Ok(out)
    };
    let (xs, ys) = (attach(s)?, attach(s + 1)?);
    let link = match vertex_disjoint_linkage(&gadget, &xs, &ys, z).map_err(|e| ChainError::Gadget(s, e.to_string()))? {
        LinkageOutcome::Paths(l) => l,
        LinkageOutcome::Cut(c) => return Err(ChainError::Gadget(s, format!("no linkage, cut of size {}", c.len()))),
    };
    // Row i of the strip above pairs with row z-1-i of the strip below.
    let (fe, te) = (row_ends(from), row_ends(to));
    let mut fam = vec![Vec::new(); z];
    for p in &link.paths {
        let host_path = w.template_walk(p);
        let i = fe.iter().position(|e| e.1 == host_path[0]);
        let Some(i) = i else { return Err(ChainError::Gadget(s, "linkage starts off the row ends".into())) };
        if te[i].0 != *host_path.last().unwrap() {
            return Err(ChainError::Gadget(s, format!("linkage pairs row {i} with the wrong row")));
        }
        fam[i] = host_path;
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wall::identity_wall;

    #[test]
    fn three_strips_give_three_walls() {
        let (g, w) = identity_wall(12, 12).unwrap();
        let ch = cut_wall_to_chain(&g, &w, 3, 4).unwrap();
        assert_eq!(ch.len(), 3);
        let mesh = ch.mesh().unwrap();
        assert_eq!(mesh.h(), 4);
        assert_eq!(mesh.r(), 12);
    }

    #[test]
    fn four_strips_of_height_three() {
        let (g, w) = identity_wall(12, 12).unwrap();
        let ch = cut_wall_to_chain(&g, &w, 4, 3).unwrap();
        assert_eq!(ch.len(), 8);
    }

    #[test]
    fn strip_chain_and_rejections() {
        let (g, w) = identity_wall(4, 20).unwrap();
        let ch = chain_from_strip(&g, &w, 3, 5, 1).unwrap();
        assert_eq!(ch.len(), 3);
        assert_eq!(ch.column_offsets(), vec![0, 5, 10, 15]);
        // Same parts reassembled are accepted.
        let again = assemble_chain(&g, ch.walls.clone(), ch.connectors.clone()).unwrap();
        assert_eq!(again, ch);
        // A connector swapped for a route through the next wall is rejected.
        let mut bad = ch.connectors.clone();
        let detour = ch.walls[1].host_rows()[0].clone();
        let mut p = bad[0][0].clone();
        p.extend(detour[1..].iter().copied());
        bad[0][0] = p;
        assert!(assemble_chain(&g, ch.walls.clone(), bad).is_err());
        assert!(matches!(cut_wall_to_chain(&g, &w, 2, 2), Err(ChainError::Param(_))));
    }
}
