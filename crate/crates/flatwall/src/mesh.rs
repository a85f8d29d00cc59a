//! Wall-like structures given by host row and column paths.
//!
//! A mesh has disjoint row paths and disjoint column paths; each row meets each
//! column in a non-empty subpath. Walls, chain unions and unions of consecutive
//! basic walls all present themselves as meshes, which is what routing and
//! contraction code works with.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, MinorModel};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MeshError {
    #[error("row {row} meets column {col} in a non-contiguous or empty set")]
    Span { row: usize, col: usize },
    #[error("vertex {0} lies on two rows or two columns")]
    Shared(usize),
    #[error("degenerate mesh: {0}")]
    Degenerate(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CrossError {
    #[error("chord must be a path with at least two vertices")]
    BadChord,
    #[error("chord endpoint {0} is not on the wall")]
    OffWall(usize),
    #[error("chord interior vertex {0} lies on the wall")]
    InteriorOnWall(usize),
    #[error("case (1) failed: endpoints are interior but not separated by a row or column")]
    NotSeparated,
    #[error("case (2) failed: boundary endpoint's partner is not deep inside the wall")]
    NotDeep,
    #[error("neither endpoint placement matches a case")]
    NoCase,
    #[error("constructed paths failed verification: {0}")]
    Verify(String),
}

/// Position of a vertex relative to rows (or columns): on line `k`, or strictly
/// between lines `k` and `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinePos {
    On(usize),
    Between(usize),
}

impl LinePos {
    fn lo(self) -> usize {
        match self {
            LinePos::On(k) | LinePos::Between(k) => k,
        }
    }
    fn hi(self) -> usize {
        match self {
            LinePos::On(k) => k,
            LinePos::Between(k) => k + 1,
        }
    }
    /// Strictly before line `k` (not on it).
    fn before(self, k: usize) -> bool {
        match self {
            LinePos::On(x) => x < k,
            LinePos::Between(x) => x < k,
        }
    }
    /// Strictly after line `k`.
    fn after(self, k: usize) -> bool {
        match self {
            LinePos::On(x) => x > k,
            LinePos::Between(x) => x >= k,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    row_of: HashMap<usize, (usize, usize)>,
    col_of: HashMap<usize, (usize, usize)>,
    /// `row_span[i][j]`: index range (inclusive) in row `i` of vertices on column `j`.
    row_span: Vec<Vec<(usize, usize)>>,
    /// `col_span[j][i]`: index range (inclusive) in column `j` of vertices on row `i`.
    col_span: Vec<Vec<(usize, usize)>>,
}

impl Mesh {
    pub fn new(rows: Vec<Vec<usize>>, cols: Vec<Vec<usize>>) -> Result<Mesh, MeshError> {
        if rows.len() < 2 || cols.len() < 2 {
            return Err(MeshError::Degenerate(format!("{}x{}", rows.len(), cols.len())));
        }
        let mut row_of = HashMap::new();
        for (i, r) in rows.iter().enumerate() {
            for (p, &v) in r.iter().enumerate() {
                if row_of.insert(v, (i, p)).is_some() {
                    return Err(MeshError::Shared(v));
                }
            }
        }
        let mut col_of = HashMap::new();
        for (j, c) in cols.iter().enumerate() {
            for (p, &v) in c.iter().enumerate() {
                if col_of.insert(v, (j, p)).is_some() {
                    return Err(MeshError::Shared(v));
                }
            }
        }
        let span_of = |line: &Vec<usize>, other: &HashMap<usize, (usize, usize)>, count: usize, me: usize, is_row: bool| {
            let mut sp: Vec<Option<(usize, usize)>> = vec![None; count];
            for (p, v) in line.iter().enumerate() {
                if let Some(&(k, _)) = other.get(v) {
                    match &mut sp[k] {
                        None => sp[k] = Some((p, p)),
                        Some((_, e)) => {
                            if *e + 1 != p {
                                return Err(if is_row {
                                    MeshError::Span { row: me, col: k }
                                } else {
                                    MeshError::Span { row: k, col: me }
                                });
                            }
                            *e = p;
                        }
                    }
                }
            }
            sp.into_iter()
                .enumerate()
                .map(|(k, s)| {
                    s.ok_or(if is_row { MeshError::Span { row: me, col: k } } else { MeshError::Span { row: k, col: me } })
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let mut row_span = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            row_span.push(span_of(r, &col_of, cols.len(), i, true)?);
        }
        let mut col_span = Vec::with_capacity(cols.len());
        for (j, c) in cols.iter().enumerate() {
            col_span.push(span_of(c, &row_of, rows.len(), j, false)?);
        }
        Ok(Mesh { rows, cols, row_of, col_of, row_span, col_span })
    }

    pub fn h(&self) -> usize {
        self.rows.len()
    }

    pub fn r(&self) -> usize {
        self.cols.len()
    }

    pub fn row_span(&self, i: usize, j: usize) -> (usize, usize) {
        self.row_span[i][j]
    }

    pub fn col_span(&self, j: usize, i: usize) -> (usize, usize) {
        self.col_span[j][i]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.row_of.contains_key(&v) || self.col_of.contains_key(&v)
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows.iter().chain(&self.cols).flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn on_row(&self, v: usize) -> Option<(usize, usize)> {
        self.row_of.get(&v).copied()
    }

    pub fn on_col(&self, v: usize) -> Option<(usize, usize)> {
        self.col_of.get(&v).copied()
    }

    /// Corners `[a, b, c, d]` clockwise from the top-left.
    pub fn corners(&self) -> [usize; 4] {
        let c1 = &self.cols[0];
        let cr = self.cols.last().unwrap();
        [c1[0], cr[0], *cr.last().unwrap(), *c1.last().unwrap()]
    }

    pub fn row_pos(&self, v: usize) -> Option<LinePos> {
        if let Some(&(i, _)) = self.row_of.get(&v) {
            return Some(LinePos::On(i));
        }
        let &(j, p) = self.col_of.get(&v)?;
        let spans = &self.col_span[j];
        let k = spans.iter().rposition(|&(_, e)| e < p)?;
        Some(LinePos::Between(k))
    }

    pub fn col_pos(&self, v: usize) -> Option<LinePos> {
        if let Some(&(j, _)) = self.col_of.get(&v) {
            return Some(LinePos::On(j));
        }
        let &(i, p) = self.row_of.get(&v)?;
        let spans = &self.row_span[i];
        let k = spans.iter().rposition(|&(_, e)| e < p)?;
        Some(LinePos::Between(k))
    }

    /// Walk along row `i` between positions (inclusive, either direction).
    pub fn row_walk(&self, i: usize, from: usize, to: usize) -> Vec<usize> {
        walk(&self.rows[i], from, to)
    }

    pub fn col_walk(&self, j: usize, from: usize, to: usize) -> Vec<usize> {
        walk(&self.cols[j], from, to)
    }

    /// Index in row `i` of vertex `v` (which must lie on it).
    fn rix(&self, v: usize) -> usize {
        self.row_of[&v].1
    }

    fn cix(&self, v: usize) -> usize {
        self.col_of[&v].1
    }

    /// Sub-mesh spanned by rows `i1..=i2` and columns `j1..=j2` (0-based),
    /// with row ends trimmed to the restricted columns.
    pub fn sub(&self, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Mesh, MeshError> {
        if !(i1 < i2 && i2 < self.h() && j1 < j2 && j2 < self.r()) {
            return Err(MeshError::Degenerate(format!("sub range {i1}..{i2} x {j1}..{j2}")));
        }
        let cols: Vec<Vec<usize>> = (j1..=j2)
            .map(|j| {
                let s = self.col_span[j][i1].1;
                let e = self.col_span[j][i2].0;
                self.cols[j][s..=e].to_vec()
            })
            .collect();
        let on_col: std::collections::HashSet<usize> = cols.iter().flatten().copied().collect();
        let rows: Vec<Vec<usize>> = (i1..=i2)
            .map(|i| {
                let mut s = self.row_span[i][j1].0;
                let mut e = self.row_span[i][j2].1;
                while s < e && !on_col.contains(&self.rows[i][s]) {
                    s += 1;
                }
                while e > s && !on_col.contains(&self.rows[i][e]) {
                    e -= 1;
                }
                self.rows[i][s..=e].to_vec()
            })
            .collect();
        Mesh::new(rows, cols)
    }

    /// Mesh keeping only the listed columns (rows unchanged).
    pub fn select_cols(&self, keep: &[usize]) -> Result<Mesh, MeshError> {
        Mesh::new(self.rows.clone(), keep.iter().map(|&j| self.cols[j].clone()).collect())
    }

    /// Model of the `|row_sel| x |col_sel|` grid (ids `x * |col_sel| + y`).
    ///
    /// Cell `(x, y)` gets row `row_sel[x]` from its meeting with column
    /// `col_sel[y]` up to just before the next selected column, plus column
    /// `col_sel[y]` strictly between the selected row and the next one.
    pub fn grid_model(&self, host: &Graph, row_sel: &[usize], col_sel: &[usize]) -> MinorModel {
        let (a, b) = (row_sel.len(), col_sel.len());
        let mut branch = vec![Vec::new(); a * b];
        for (x, &ri) in row_sel.iter().enumerate() {
            for (y, &cj) in col_sel.iter().enumerate() {
                let start = self.row_span[ri][cj].0;
                let end = if y + 1 < b { self.row_span[ri][col_sel[y + 1]].0 - 1 } else { self.row_span[ri][cj].1 };
                let set = &mut branch[x * b + y];
                set.extend_from_slice(&self.rows[ri][start..=end]);
                if x + 1 < a {
                    let s = self.col_span[cj][ri].1 + 1;
                    let e = self.col_span[cj][row_sel[x + 1]].0;
                    if s < e {
                        set.extend_from_slice(&self.cols[cj][s..e]);
                    }
                }
                set.sort_unstable();
            }
        }
        let mut m = MinorModel { pattern: Graph::grid(a, b), branch_sets: branch, edge_witness: Vec::new() };
        m.fill_witnesses(host);
        m
    }

    /// Wall-cross for this mesh in the mesh plus a chord path (interior outside
    /// the mesh). Returns `(P1: a -> c, P2: b -> d)`.
    pub fn cross_from_chord(&self, chord: &[usize]) -> Result<(Vec<usize>, Vec<usize>), CrossError> {
        if chord.len() < 2 {
            return Err(CrossError::BadChord);
        }
        let (u, v) = (chord[0], *chord.last().unwrap());
        for &x in [u, v].iter() {
            if !self.contains(x) {
                return Err(CrossError::OffWall(x));
            }
        }
        if let Some(&x) = chord[1..chord.len() - 1].iter().find(|&&x| self.contains(x)) {
            return Err(CrossError::InteriorOnWall(x));
        }
        let (h, r) = (self.h(), self.r());
        let on_boundary = |x: usize| {
            let rp = self.row_pos(x).unwrap();
            let cp = self.col_pos(x).unwrap();
            rp == LinePos::On(0) || rp == LinePos::On(h - 1) || cp == LinePos::On(0) || cp == LinePos::On(r - 1)
        };
        let deep = |x: usize| {
            let rp = self.row_pos(x).unwrap();
            let cp = self.col_pos(x).unwrap();
            rp.lo() >= 2 && rp.hi() + 3 <= h && cp.lo() >= 2 && cp.hi() + 3 <= r
        };
        let rev: Vec<usize> = chord.iter().rev().copied().collect();
        let (p1, p2) = match (on_boundary(u), on_boundary(v)) {
            (false, false) => self.cross_case1(chord)?,
            (true, false) if deep(v) => self.cross_case2(chord),
            (false, true) if deep(u) => self.cross_case2(&rev),
            (true, false) | (false, true) => return Err(CrossError::NotDeep),
            (true, true) => return Err(CrossError::NoCase),
        };
        self.verify_cross(&p1, &p2, chord)?;
        Ok((p1, p2))
    }

    fn verify_cross(&self, p1: &[usize], p2: &[usize], chord: &[usize]) -> Result<(), CrossError> {
        let [a, b, c, d] = self.corners();
        let err = |m: &str| Err(CrossError::Verify(m.to_string()));
        if p1.first() != Some(&a) || p1.last() != Some(&c) {
            return err("P1 does not join a to c");
        }
        if p2.first() != Some(&b) || p2.last() != Some(&d) {
            return err("P2 does not join b to d");
        }
        let mut seen = std::collections::HashSet::new();
        for &x in p1.iter().chain(p2) {
            if !seen.insert(x) {
                return err("paths are not disjoint or not simple");
            }
        }
        let chord_set: std::collections::HashSet<usize> = chord.iter().copied().collect();
        if p1.iter().chain(p2).any(|x| !self.contains(*x) && !chord_set.contains(x)) {
            return err("path leaves the wall");
        }
        Ok(())
    }

    /// From `v`, walk along its column (or first to the nearest column on the
    /// left, if `v` sits on a row between columns) down to the last row.
    fn descend(&self, v: usize) -> Vec<usize> {
        let (j, start) = self.onto_column(v, false);
        let mut path = start;
        let from = self.cix(*path.last().unwrap());
        join(&mut path, self.col_walk(j, from, self.cols[j].len() - 1));
        path
    }

    fn ascend(&self, v: usize) -> Vec<usize> {
        let (j, start) = self.onto_column(v, false);
        let mut path = start;
        let from = self.cix(*path.last().unwrap());
        join(&mut path, self.col_walk(j, from, 0));
        path
    }

    /// Path from `v` to a column vertex: trivial if `v` is on a column, else
    /// along its row to the column on the left (or right if `rightward`).
    fn onto_column(&self, v: usize, rightward: bool) -> (usize, Vec<usize>) {
        if let Some(&(j, _)) = self.col_of.get(&v) {
            return (j, vec![v]);
        }
        let (i, p) = self.row_of[&v];
        let LinePos::Between(k) = self.col_pos(v).unwrap() else { unreachable!() };
        if rightward {
            let s = self.row_span[i][k + 1].0;
            (k + 1, self.row_walk(i, p, s))
        } else {
            let e = self.row_span[i][k].1;
            (k, self.row_walk(i, p, e))
        }
    }

    /// Path from `v` to a row vertex: trivial if on a row, else along its column
    /// down (or up) to the next row.
    fn onto_row(&self, v: usize, down: bool) -> (usize, Vec<usize>) {
        if let Some(&(i, _)) = self.row_of.get(&v) {
            return (i, vec![v]);
        }
        let (j, p) = self.col_of[&v];
        let LinePos::Between(k) = self.row_pos(v).unwrap() else { unreachable!() };
        if down {
            let s = self.col_span[j][k + 1].0;
            (k + 1, self.col_walk(j, p, s))
        } else {
            let e = self.col_span[j][k].1;
            (k, self.col_walk(j, p, e))
        }
    }

    /// Row `i` from vertex `x` on it to the first column's meeting (leftmost
    /// vertex of that span reached from the right), then down/up column 0.
    fn row_to_col_then(&self, i: usize, x: usize, j: usize, down: bool) -> Vec<usize> {
        let (s, e) = self.row_span[i][j];
        let px = self.rix(x);
        let target = if px > e {
            e
        } else if px < s {
            s
        } else {
            px
        };
        let mut path = self.row_walk(i, px, target);
        let cpos = self.cix(*path.last().unwrap());
        let end = if down { self.cols[j].len() - 1 } else { 0 };
        join(&mut path, self.col_walk(j, cpos, end));
        path
    }

    fn cross_case1(&self, chord: &[usize]) -> Result<(Vec<usize>, Vec<usize>), CrossError> {
        let (h, r) = (self.h(), self.r());
        let (u, v) = (chord[0], *chord.last().unwrap());
        let [a, b, c, d] = self.corners();
        let (ru, rv) = (self.row_pos(u).unwrap(), self.row_pos(v).unwrap());
        let (cu, cv) = (self.col_pos(u).unwrap(), self.col_pos(v).unwrap());
        // Separating row.
        for i in 1..h - 1 {
            let (top, bot, ch): (usize, usize, Vec<usize>) = if ru.before(i) && rv.after(i) {
                (u, v, chord.to_vec())
            } else if rv.before(i) && ru.after(i) {
                (v, u, chord.iter().rev().copied().collect())
            } else {
                continue;
            };
            // P1: a down C_1 to R_i, along R_i, down C_r to c.
            let mut p1 = self.col_walk(0, 0, self.col_span[0][i].0);
            let x = *p1.last().unwrap();
            let cr_entry = self.row_span[i][r - 1].0;
            join(&mut p1, self.row_walk(i, self.rix(x), cr_entry));
            let y = *p1.last().unwrap();
            join(&mut p1, self.col_walk(r - 1, self.cix(y), self.cols[r - 1].len() - 1));
            debug_assert_eq!(*p1.last().unwrap(), c);
            let _ = a;
            // P2: b down C_r to the row at/above `top`, along it to `top`.
            let (k, to_top) = self.onto_row(top, false);
            let mut p2 = self.col_walk(r - 1, 0, self.col_span[r - 1][k].0);
            let z = *p2.last().unwrap();
            join(&mut p2, self.row_walk(k, self.rix(z), self.rix(*to_top.last().unwrap())));
            let rev_top: Vec<usize> = to_top.iter().rev().copied().collect();
            join(&mut p2, rev_top);
            join(&mut p2, ch);
            let (k2, down_bot) = self.onto_row(bot, true);
            join(&mut p2, down_bot);
            let w = *p2.last().unwrap();
            join(&mut p2, self.row_to_col_then(k2, w, 0, true));
            debug_assert_eq!(*p2.last().unwrap(), d);
            let _ = b;
            return Ok((p1, p2));
        }
        // Separating column.
        for j in 1..r - 1 {
            let (left, right, ch): (usize, usize, Vec<usize>) = if cu.before(j) && cv.after(j) {
                (u, v, chord.to_vec())
            } else if cv.before(j) && cu.after(j) {
                (v, u, chord.iter().rev().copied().collect())
            } else {
                continue;
            };
            // P1: a along R_1 to C_j, down C_j to R_h, along R_h to c.
            let mut p1 = self.row_walk(0, 0, self.row_span[0][j].0);
            let x = *p1.last().unwrap();
            join(&mut p1, self.col_walk(j, self.cix(x), self.cols[j].len() - 1));
            let y = *p1.last().unwrap();
            join(&mut p1, self.row_walk(h - 1, self.rix(y), self.rows[h - 1].len() - 1));
            // P2: b to `right`, chord to `left`, then to d.
            let mut p2;
            if self.col_of.contains_key(&right) {
                let (jr, pr) = self.col_of[&right];
                p2 = self.row_walk(0, self.rows[0].len() - 1, self.row_span[0][jr].1);
                let z = *p2.last().unwrap();
                join(&mut p2, self.col_walk(jr, self.cix(z), pr));
            } else {
                let (ir, pr) = self.row_of[&right];
                p2 = self.col_walk(r - 1, 0, self.col_span[r - 1][ir].0);
                let z = *p2.last().unwrap();
                join(&mut p2, self.row_walk(ir, self.rix(z), pr));
            }
            let ch_rev: Vec<usize> = ch.iter().rev().copied().collect();
            join(&mut p2, ch_rev);
            if self.col_of.contains_key(&left) {
                let (jl, pl) = self.col_of[&left];
                join(&mut p2, self.col_walk(jl, pl, self.cols[jl].len() - 1));
                let z = *p2.last().unwrap();
                join(&mut p2, self.row_walk(h - 1, self.rix(z), 0));
            } else {
                let (il, _) = self.row_of[&left];
                join(&mut p2, self.row_to_col_then(il, left, 0, true));
            }
            return Ok((p1, p2));
        }
        Err(CrossError::NotSeparated)
    }

    /// Case (2): `u = chord[0]` on the boundary, `v` deep inside.
    fn cross_case2(&self, chord: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let (h, r) = (self.h(), self.r());
        let (u, v) = (chord[0], *chord.last().unwrap());
        let [a, b, c, d] = self.corners();
        let rev = |p: &[usize]| -> Vec<usize> { p.iter().rev().copied().collect() };
        let ru = self.row_pos(u).unwrap();
        let cu = self.col_pos(u).unwrap();
        let last_r = self.rows[h - 1].len() - 1;
        if u == a {
            // P1 = a, chord, v down to R_h, right to c.
            let mut p1 = chord.to_vec();
            join(&mut p1, self.descend(v));
            let z = *p1.last().unwrap();
            join(&mut p1, self.row_walk(h - 1, self.rix(z), last_r));
            // P2 = b down C_r to R_2, left to C_1, down to d.
            let p2 = self.hook(r - 1, 1, 0, true);
            return (p1, p2);
        }
        if u == d {
            // P2 = d, chord, v up to R_1, right to b (reversed into b -> d).
            let mut q = chord.to_vec();
            join(&mut q, self.ascend(v));
            let z = *q.last().unwrap();
            join(&mut q, self.row_walk(0, self.rix(z), self.rows[0].len() - 1));
            // P1 = c up C_r to R_{h-1}, left to C_1, up to a (reversed).
            let p1 = self.hook(r - 1, h - 2, 0, false);
            return (rev(&p1), rev(&q));
        }
        if ru == LinePos::On(0) {
            // P2 = b along R_1 to u, chord, v down, left along R_h to d.
            let mut p2 = self.row_walk(0, self.rows[0].len() - 1, self.rix(u));
            join(&mut p2, chord.to_vec());
            join(&mut p2, self.descend(v));
            let z = *p2.last().unwrap();
            join(&mut p2, self.row_walk(h - 1, self.rix(z), 0));
            // P1 = a down C_1 to R_2, right to C_r, down to c.
            let p1 = self.hook(0, 1, r - 1, true);
            return (p1, p2);
        }
        if ru == LinePos::On(h - 1) {
            // c along R_h to u, chord, v up, left along R_1 to a (reversed).
            let mut q = self.row_walk(h - 1, last_r, self.rix(u));
            join(&mut q, chord.to_vec());
            join(&mut q, self.ascend(v));
            let z = *q.last().unwrap();
            join(&mut q, self.row_walk(0, self.rix(z), 0));
            // b down C_r to R_{h-1}, left to C_1, down to d.
            let p2 = self.hook(r - 1, h - 2, 0, true);
            return (rev(&q), p2);
        }
        if cu == LinePos::On(0) {
            // d up C_1 to u, chord, v right along its row to C_r, up to b (reversed).
            let mut q = self.col_walk(0, self.cols[0].len() - 1, self.cix(u));
            join(&mut q, chord.to_vec());
            let (k, to_row) = self.onto_row(v, true);
            join(&mut q, to_row);
            let z = *q.last().unwrap();
            join(&mut q, self.row_to_col_then(k, z, r - 1, false));
            // a along R_1 to C_2, down to R_h, right to c.
            let mut p1 = self.row_walk(0, 0, self.row_span[0][1].0);
            let x = *p1.last().unwrap();
            join(&mut p1, self.col_walk(1, self.cix(x), self.cols[1].len() - 1));
            let y = *p1.last().unwrap();
            join(&mut p1, self.row_walk(h - 1, self.rix(y), last_r));
            return (p1, rev(&q));
        }
        // u on C_r: c up C_r to u, chord, v left along its row to C_1, up to a (reversed).
        debug_assert_eq!(cu, LinePos::On(r - 1));
        let mut q = self.col_walk(r - 1, self.cols[r - 1].len() - 1, self.cix(u));
        join(&mut q, chord.to_vec());
        let (k, to_row) = self.onto_row(v, true);
        join(&mut q, to_row);
        let z = *q.last().unwrap();
        join(&mut q, self.row_to_col_then(k, z, 0, false));
        // b along R_1 left to C_{r-1}, down to R_h, left to d.
        let mut p2 = self.row_walk(0, self.rows[0].len() - 1, self.row_span[0][r - 2].1);
        let x = *p2.last().unwrap();
        join(&mut p2, self.col_walk(r - 2, self.cix(x), self.cols[r - 2].len() - 1));
        let y = *p2.last().unwrap();
        join(&mut p2, self.row_walk(h - 1, self.rix(y), 0));
        let _ = (b, c);
        (rev(&q), p2)
    }

    /// Down (or up) column `j1` from its end to row `i`, along row `i` to column
    /// `j2`, then down (or up) column `j2` to its end.
    fn hook(&self, j1: usize, i: usize, j2: usize, down: bool) -> Vec<usize> {
        let start = if down { 0 } else { self.cols[j1].len() - 1 };
        let stop = if down { self.col_span[j1][i].0 } else { self.col_span[j1][i].1 };
        let mut p = self.col_walk(j1, start, stop);
        let x = *p.last().unwrap();
        join(&mut p, self.row_to_col_then(i, x, j2, down));
        p
    }
}

fn walk(line: &[usize], from: usize, to: usize) -> Vec<usize> {
    if from <= to {
        line[from..=to].to_vec()
    } else {
        line[to..=from].iter().rev().copied().collect()
    }
}

/// Appends `next` to `path`, merging a shared junction vertex.
pub fn join(path: &mut Vec<usize>, next: Vec<usize>) {
    let mut it = next.into_iter().peekable();
    if let (Some(&last), Some(&first)) = (path.last(), it.peek()) {
        if last == first {
            it.next();
        }
    }
    path.extend(it);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_minor_model;
    use crate::wall::{identity_wall, subdivided_wall};

    #[test]
    fn sub_mesh_matches_subwall() {
        let (_, w) = subdivided_wall(8, 7, 1).unwrap();
        let m = w.mesh();
        for (i1, i2, j1, j2) in [(1, 4, 1, 4), (2, 5, 2, 5), (0, 7, 0, 6), (3, 6, 1, 3)] {
            let s = m.sub(i1, i2, j1, j2).unwrap();
            let sw = w.subwall(i1 + 1, i2 + 1, j1 + 1, j2 + 1).unwrap().mesh();
            assert_eq!(s.rows, sw.rows, "{i1} {i2} {j1} {j2}");
            assert_eq!(s.cols, sw.cols);
        }
    }

    #[test]
    fn grid_model_subselection_validates() {
        let (g, w) = subdivided_wall(9, 9, 1).unwrap();
        let m = w.mesh();
        let model = m.grid_model(&g, &[0, 2, 3, 8], &[1, 4, 5, 7]);
        assert!(validate_minor_model(&g, &model).unwrap().is_pass());
    }

    fn check_cross(g: &Graph, m: &Mesh, chord: &[usize]) {
        let (p1, p2) = m.cross_from_chord(chord).unwrap();
        let mut aug = g.clone();
        for w in chord.windows(2) {
            aug.add_edge(w[0], w[1]);
        }
        assert!(aug.is_path(&p1) && aug.is_path(&p2));
    }

    #[test]
    fn cross_row_separated() {
        let (g, w) = identity_wall(7, 7).unwrap();
        let m = w.mesh();
        let u = w.at(2, 5).unwrap();
        let v = w.at(6, 9).unwrap();
        check_cross(&g, &m, &[u, v]);
    }

    #[test]
    fn cross_column_separated() {
        let (g, w) = identity_wall(7, 7).unwrap();
        let m = w.mesh();
        let u = w.at(3, 4).unwrap();
        let v = w.at(3, 10).unwrap();
        check_cross(&g, &m, &[u, v]);
    }

    #[test]
    fn cross_boundary_cases() {
        let (g, w) = identity_wall(9, 9).unwrap();
        let m = w.mesh();
        let center = w.at(5, 9).unwrap();
        for v in m.vertices() {
            let rp = m.row_pos(v).unwrap();
            let cp = m.col_pos(v).unwrap();
            let boundary = rp == LinePos::On(0) || rp == LinePos::On(8) || cp == LinePos::On(0) || cp == LinePos::On(8);
            if boundary && !g.has_edge(v, center) {
                check_cross(&g, &m, &[v, center]);
            }
        }
    }

    #[test]
    fn cross_all_interior_pairs_subdivided() {
        let (g, w) = subdivided_wall(6, 6, 1).unwrap();
        let m = w.mesh();
        let verts = m.vertices();
        let mut ok = 0;
        for (k, &u) in verts.iter().enumerate().step_by(7) {
            for &v in verts.iter().skip(k + 1).step_by(5) {
                if g.has_edge(u, v) {
                    continue;
                }
                match m.cross_from_chord(&[u, v]) {
                    Ok(_) => ok += 1,
                    Err(CrossError::Verify(e)) => panic!("bad cross for {u} {v}: {e}"),
                    Err(_) => {}
                }
            }
        }
        assert!(ok > 10);
    }
}
