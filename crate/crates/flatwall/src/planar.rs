//! Planar embeddings as rotation systems, built by path addition
//! (Demoucron, Malgrange, Pertuiset) per block, with an optional cycle forced
//! to bound the outer face.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// Rotation system: `rot[v]` lists the neighbors of `v` in cyclic order. Face
/// tracing follows dart `u -> v` by `v -> w` where `w` comes right after `u` in
/// `rot[v]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rot: Vec<Vec<usize>>,
}

impl Embedding {
    fn succ_maps(&self) -> Vec<HashMap<usize, usize>> {
        self.rot.iter().map(|l| (0..l.len()).map(|k| (l[k], l[(k + 1) % l.len()])).collect()).collect()
    }

    /// Faces as closed vertex walks.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let succ = self.succ_maps();
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        let mut faces = Vec::new();
        for u in 0..self.rot.len() {
            for &v in &self.rot[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while used.insert((a, b)) {
                    face.push(a);
                    let c = succ[b][&a];
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checks that the rotation system matches `g` and satisfies Euler's
    /// formula on every component; with `outer`, also that some face walk is
    /// exactly that cycle.
    pub fn verify(&self, g: &Graph, outer: Option<&[usize]>) -> Result<(), String> {
        if self.rot.len() != g.n() {
            return Err(format!("rotation covers {} vertices, graph has {}", self.rot.len(), g.n()));
        }
        for v in 0..g.n() {
            let mut l = self.rot[v].clone();
            l.sort_unstable();
            if l != g.neighbors(v) {
                return Err(format!("rotation at {v} is not a permutation of its neighbors"));
            }
        }
        let faces = self.faces();
        let comps = g.components();
        let mut comp_of = vec![0; g.n()];
        for (k, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = k;
            }
        }
        let mut fcount = vec![0usize; comps.len()];
        for f in &faces {
            fcount[comp_of[f[0]]] += 1;
        }
        let mut ecount = vec![0usize; comps.len()];
        for (u, _) in g.edges() {
            ecount[comp_of[u]] += 1;
        }
        for (k, c) in comps.iter().enumerate() {
            if ecount[k] == 0 {
                continue;
            }
            let euler = c.len() as i64 - ecount[k] as i64 + fcount[k] as i64;
            if euler != 2 {
                return Err(format!("Euler characteristic {euler} on component {k}"));
            }
        }
        if let Some(cyc) = outer {
            if !faces.iter().any(|f| same_cycle(f, cyc)) {
                return Err("prescribed cycle does not bound a face".into());
            }
        }
        Ok(())
    }
}

/// Whether two closed walks are the same cyclic sequence up to direction.
pub fn same_cycle(f: &[usize], c: &[usize]) -> bool {
    if f.len() != c.len() || c.is_empty() {
        return false;
    }
    let n = c.len();
    let Some(s) = f.iter().position(|&x| x == c[0]) else { return false };
    let fwd = (0..n).all(|k| f[(s + k) % n] == c[k]);
    let bwd = (0..n).all(|k| f[(s + n - k) % n] == c[k]);
    fwd || bwd
}

/// Biconnected components as edge lists (bridges are one-edge blocks).
pub fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut estack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frames: (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, p) = (top.0, top.1);
            if top.2 < g.neighbors(v).len() {
                let w = g.neighbors(v)[top.2];
                top.2 += 1;
                if w == p {
                    continue;
                }
                if disc[w] == usize::MAX {
                    estack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    estack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(pv, _, _)) = stack.last() {
                    low[pv] = low[pv].min(low[v]);
                    if low[v] >= disc[pv] {
                        let mut blk = Vec::new();
                        while let Some(e) = estack.pop() {
                            blk.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (pv, v) {
                                break;
                            }
                        }
                        out.push(blk);
                    }
                }
            }
        }
    }
    out
}

/// Cut vertices of `g`.
pub fn cut_vertices(g: &Graph) -> Vec<usize> {
    let mut count = vec![0usize; g.n()];
    for b in blocks(g) {
        let mut vs: Vec<usize> = b.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            count[v] += 1;
        }
    }
    (0..g.n()).filter(|&v| count[v] >= 2).collect()
}

/// Path-addition embedding of a biconnected graph `b` (local ids) from an
/// initial set of oriented faces. Faces containing `avoid` are used only when
/// no other face is admissible.
fn dmp(b: &Graph, init_faces: Vec<Vec<usize>>, avoid: Option<usize>) -> Option<Vec<Vec<usize>>> {
    let n = b.n();
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for f in &init_faces {
        for k in 0..f.len() {
            let (x, y) = (f[k], f[(k + 1) % f.len()]);
            in_h[x] = true;
            h_edges.insert((x.min(y), x.max(y)));
        }
    }
    let mut faces: Vec<Vec<usize>> = init_faces;
    let mut faces_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, f) in faces.iter().enumerate() {
        for &v in f {
            faces_of[v].push(fi);
        }
    }
    loop {
        // Fragments: (attachments, path-finder seed)
        let mut frags: Vec<(Vec<usize>, Frag)> = Vec::new();
        for (u, v) in b.edges() {
            if in_h[u] && in_h[v] && !h_edges.contains(&(u, v)) {
                frags.push((vec![u, v], Frag::Chord(u, v)));
            }
        }
        let mask: Vec<bool> = (0..n).map(|v| !in_h[v]).collect();
        for comp in b.components_masked(&mask) {
            let mut att: Vec<usize> = comp.iter().flat_map(|&x| b.neighbors(x).iter().copied()).filter(|&w| in_h[w]).collect();
            att.sort_unstable();
            att.dedup();
            frags.push((att, Frag::Comp(comp)));
        }
        if frags.is_empty() {
            return Some(faces);
        }
        let mut choice: Option<(usize, usize)> = None;
        let mut fallback: Option<(usize, usize)> = None;
        for (k, (att, _)) in frags.iter().enumerate() {
            let base = att.iter().min_by_key(|&&a| faces_of[a].len()).copied()?;
            let adm: Vec<usize> =
                faces_of[base].iter().copied().filter(|&fi| att.iter().all(|&a| faces_of[a].contains(&fi))).collect();
            if adm.is_empty() {
                return None;
            }
            let pick = adm.iter().copied().find(|&fi| avoid.is_none_or(|x| !faces[fi].contains(&x))).unwrap_or(adm[0]);
            if adm.len() == 1 {
                choice = Some((k, pick));
                break;
            }
            if fallback.is_none() {
                fallback = Some((k, pick));
            }
        }
        let (k, fi) = choice.or(fallback).expect("some fragment");
        let path = match &frags[k].1 {
            Frag::Chord(u, v) => vec![*u, *v],
            Frag::Comp(comp) => fragment_path(b, comp, &in_h, &frags[k].0),
        };
        // Split face fi by the path.
        let f = faces[fi].clone();
        let (a1, a2) = (path[0], *path.last().unwrap());
        let i = f.iter().position(|&x| x == a1)?;
        let j = f.iter().position(|&x| x == a2)?;
        let len = f.len();
        let mut f1 = Vec::new();
        let mut t = i;
        loop {
            f1.push(f[t]);
            if t == j {
                break;
            }
            t = (t + 1) % len;
        }
        f1.extend(path[1..path.len() - 1].iter().rev());
        let mut f2 = Vec::new();
        let mut t = j;
        loop {
            f2.push(f[t]);
            if t == i {
                break;
            }
            t = (t + 1) % len;
        }
        f2.extend(path[1..path.len() - 1].iter());
        for &v in &f {
            faces_of[v].retain(|&x| x != fi);
        }
        faces[fi] = f1;
        let new_id = faces.len();
        faces.push(f2);
        for &v in &faces[fi] {
            faces_of[v].push(fi);
        }
        for &v in &faces[new_id] {
            faces_of[v].push(new_id);
        }
        for &v in &path {
            in_h[v] = true;
        }
        for w in path.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
}

enum Frag {
    Chord(usize, usize),
    Comp(Vec<usize>),
}

/// Path through a component fragment between two distinct attachments.
fn fragment_path(b: &Graph, comp: &[usize], in_h: &[bool], att: &[usize]) -> Vec<usize> {
    let a1 = att[0];
    let in_comp: HashSet<usize> = comp.iter().copied().collect();
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut q = VecDeque::new();
    for &w in b.neighbors(a1) {
        if in_comp.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, a1);
            q.push_back(w);
        }
    }
    while let Some(x) = q.pop_front() {
        if let Some(&a2) = b.neighbors(x).iter().find(|&&w| in_h[w] && w != a1) {
            let mut path = vec![a2, x];
            let mut y = x;
            while prev[&y] != a1 {
                y = prev[&y];
                path.push(y);
            }
            path.push(a1);
            path.reverse();
            return path;
        }
        for &w in b.neighbors(x) {
            if in_comp.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, x);
                q.push_back(w);
            }
        }
    }
    unreachable!("fragments of a biconnected graph have two attachments")
}

/// Rotation (local ids) from consistently oriented faces.
fn rotation_from_faces(n: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for f in faces {
        let l = f.len();
        for k in 0..l {
            let (u, v, w) = (f[k], f[(k + 1) % l], f[(k + 2) % l]);
            succ[v].insert(u, w);
        }
    }
    succ.into_iter()
        .map(|s| {
            if s.is_empty() {
                return Vec::new();
            }
            let start = *s.keys().min().unwrap();
            let mut out = vec![start];
            let mut x = s[&start];
            while x != start {
                out.push(x);
                x = s[&x];
            }
            out
        })
        .collect()
}

/// Some cycle of a biconnected graph with at least 3 vertices.
fn find_cycle(b: &Graph) -> Vec<usize> {
    let (u, v) = b.edges().next().expect("edge");
    let mut g2 = b.clone();
    g2.remove_edge(u, v);
    let mut to = vec![false; b.n()];
    to[u] = true;
    g2.bfs_path(&[v], &to, &vec![true; b.n()]).expect("biconnected")
}

/// Planar embedding of `g`, or `None` if none exists. With `outer`, the
/// embedding has that cycle (consecutive vertices adjacent in `g`) as the
/// boundary walk of a face.
pub fn embed(g: &Graph, outer: Option<&[usize]>) -> Option<Embedding> {
    let n = g.n();
    if let Some(c) = outer {
        if c.len() < 3 || !(0..c.len()).all(|k| g.has_edge(c[k], c[(k + 1) % c.len()])) {
            return None;
        }
    }
    let apex = n;
    let blks = blocks(g);
    let c_edges: HashSet<(usize, usize)> = outer
        .map(|c| (0..c.len()).map(|k| (c[k].min(c[(k + 1) % c.len()]), c[k].max(c[(k + 1) % c.len()]))).collect())
        .unwrap_or_default();
    let root_block = outer.and_then(|_| blks.iter().position(|b| b.iter().any(|e| c_edges.contains(e))));
    if let Some(rb) = root_block {
        let bset: HashSet<_> = blks[rb].iter().copied().collect();
        if !c_edges.iter().all(|e| bset.contains(e)) {
            return None;
        }
    }
    // Per-block rotations in global ids (apex = n in the root block).
    let mut block_rot: Vec<HashMap<usize, Vec<usize>>> = Vec::with_capacity(blks.len());
    for (bi, blk) in blks.iter().enumerate() {
        let mut vs: Vec<usize> = blk.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        if blk.len() == 1 {
            let (u, v) = blk[0];
            block_rot.push(HashMap::from([(u, vec![v]), (v, vec![u])]));
            continue;
        }
        let is_root = Some(bi) == root_block;
        if is_root {
            vs.push(apex);
        }
        let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut lg = Graph::new(vs.len());
        for &(u, v) in blk {
            lg.add_edge(local[&u], local[&v]);
        }
        let (init, avoid) = if is_root {
            let c: Vec<usize> = outer.unwrap().iter().map(|v| local[v]).collect();
            let a = local[&apex];
            for &x in &c {
                lg.add_edge(a, x);
            }
            let mut fs = vec![c.clone()];
            let k = c.len();
            for i in 0..k {
                fs.push(vec![c[(i + 1) % k], c[i], a]);
            }
            (fs, Some(a))
        } else {
            let c = find_cycle(&lg);
            let rev: Vec<usize> = c.iter().rev().copied().collect();
            (vec![c, rev], None)
        };
        let faces = dmp(&lg, init, avoid)?;
        let rot = rotation_from_faces(lg.n(), &faces);
        block_rot.push(rot.into_iter().enumerate().map(|(i, l)| (vs[i], l.into_iter().map(|x| vs[x]).collect())).collect());
    }
    // Merge blocks along the block-cut forest.
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut placed = vec![false; blks.len()];
    let mut vertex_blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (bi, br) in block_rot.iter().enumerate() {
        for &v in br.keys() {
            if v < n {
                vertex_blocks[v].push(bi);
            }
        }
    }
    let mut order: Vec<usize> = (0..blks.len()).collect();
    if let Some(rb) = root_block {
        order.retain(|&b| b != rb);
        order.insert(0, rb);
    }
    for &start in &order {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        for (&v, l) in &block_rot[start] {
            rot[v] = l.clone();
        }
        let mut q = VecDeque::from([start]);
        while let Some(b) = q.pop_front() {
            let mut vs: Vec<usize> = block_rot[b].keys().copied().filter(|&v| v < n).collect();
            vs.sort_unstable();
            for v in vs {
                for &b2 in &vertex_blocks[v] {
                    if placed[b2] {
                        continue;
                    }
                    placed[b2] = true;
                    for (&u, l) in &block_rot[b2] {
                        if u != v {
                            rot[u] = l.clone();
                        }
                    }
                    splice(&mut rot[v], &block_rot[b2][&v], apex);
                    q.push_back(b2);
                }
            }
        }
    }
    rot.truncate(n);
    for l in &mut rot {
        l.retain(|&x| x != apex);
    }
    let emb = Embedding { rot };
    debug_assert!(emb.verify(g, outer).is_ok());
    Some(emb)
}

/// Inserts `other` into cyclic list `base` at an angle not touching `apex`.
fn splice(base: &mut Vec<usize>, other: &[usize], apex: usize) {
    if base.is_empty() {
        base.extend_from_slice(other);
        return;
    }
    let l = base.len();
    let pos = (0..l).find(|&k| base[k] != apex && base[(k + 1) % l] != apex).unwrap_or(l - 1);
    let tail = base.split_off(pos + 1);
    base.extend_from_slice(other);
    base.extend(tail);
}

pub fn is_planar(g: &Graph) -> bool {
    embed(g, None).is_some()
}
