//! Simple undirected graphs, separations, minor models and embeddings.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl From<GraphRepr> for Graph {
    fn from(r: GraphRepr) -> Self {
        let mut g = Graph::new(r.n);
        for [u, v] in r.edges {
            if u < r.n && v < r.n && u != v {
                g.add_edge(u, v);
            }
        }
        g
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n(), edges: g.edges().map(|(u, v)| [u, v]).collect() }
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// `h x r` grid, vertex (i, j) (0-based) has id `i * r + j`.
    pub fn grid(h: usize, r: usize) -> Self {
        let mut g = Graph::new(h * r);
        for i in 0..h {
            for j in 0..r {
                if j + 1 < r {
                    g.add_edge(i * r + j, i * r + j + 1);
                }
                if i + 1 < h {
                    g.add_edge(i * r + j, (i + 1) * r + j);
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        let n = self.n();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u, n));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.add_edge(u, v))
    }

    /// Adds edge `uv`; returns false if it was already present. Panics on loops.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop at {u}");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos2 = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos2, u);
                self.m += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if let Ok(p) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(p);
            let q = self.adj[v].binary_search(&u).unwrap();
            self.adj[v].remove(q);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `vs`; returns it with the map new id -> old id.
    pub fn induced(&self, vs: &[usize]) -> (Graph, Vec<usize>) {
        let mut idx = HashMap::with_capacity(vs.len());
        let mut order: Vec<usize> = vs.to_vec();
        order.sort_unstable();
        order.dedup();
        for (i, &v) in order.iter().enumerate() {
            idx.insert(v, i);
        }
        let mut g = Graph::new(order.len());
        for (i, &v) in order.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = idx.get(&w) {
                    if i < j {
                        g.add_edge(i, j);
                    }
                }
            }
        }
        (g, order)
    }

    /// Connected components of the subgraph induced by vertices with `mask[v]`.
    pub fn components_masked(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !mask[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &w in &self.adj[u] {
                    if mask[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_masked(&vec![true; self.n()])
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components().len() == 1
    }

    /// Whether `set` induces a connected subgraph (empty sets are not connected).
    pub fn is_connected_set(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut mask = vec![false; self.n()];
        for &v in set {
            mask[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![set[0]];
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if mask[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        let distinct = {
            let mut s = set.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        count == distinct
    }

    /// Shortest path (fewest vertices) from any vertex of `from` to any vertex of
    /// `to`, using only vertices with `allowed[v]` (endpoints included). Ties go to
    /// the smallest ids via sorted adjacency.
    pub fn bfs_path(&self, from: &[usize], to: &[bool], allowed: &[bool]) -> Option<Vec<usize>> {
        let n = self.n();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut q = VecDeque::new();
        let mut starts: Vec<usize> = from.iter().copied().filter(|&s| allowed[s]).collect();
        starts.sort_unstable();
        starts.dedup();
        for s in starts {
            seen[s] = true;
            q.push_back(s);
        }
        while let Some(u) = q.pop_front() {
            if to[u] {
                let mut path = vec![u];
                let mut x = u;
                while prev[x] != usize::MAX {
                    x = prev[x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    prev[w] = u;
                    q.push_back(w);
                }
            }
        }
        None
    }

    /// Whether `p` is a simple path in the graph (a single vertex counts).
    pub fn is_path(&self, p: &[usize]) -> bool {
        if p.is_empty() || p.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let mut s = p.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() == p.len() && p.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p {} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }

    /// Parses `p n m` / `e u v` text; blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut g: Option<Graph> = None;
        let mut expected = 0;
        let mut found = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| GraphError::Parse { line: line_no, msg: msg.to_string() };
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap();
            let nums: Vec<usize> =
                parts.map(|p| p.parse::<usize>().map_err(|_| err(&format!("bad integer `{p}`")))).collect::<Result<_, _>>()?;
            match tag {
                "p" => {
                    if g.is_some() {
                        return Err(err("duplicate header"));
                    }
                    if nums.len() != 2 {
                        return Err(err("header needs `p <n> <m>`"));
                    }
                    g = Some(Graph::new(nums[0]));
                    expected = nums[1];
                }
                "e" => {
                    let gr = g.as_mut().ok_or_else(|| err("edge before header"))?;
                    if nums.len() != 2 {
                        return Err(err("edge needs `e <u> <v>`"));
                    }
                    gr.try_add_edge(nums[0], nums[1]).map_err(|e| err(&e.to_string()))?;
                    found += 1;
                }
                _ => return Err(err(&format!("unknown line tag `{tag}`"))),
            }
        }
        let g = g.ok_or(GraphError::Parse { line: 0, msg: "missing header".into() })?;
        if found != expected {
            return Err(GraphError::EdgeCount { expected, found });
        }
        Ok(g)
    }
}

/// Vertex and edge set of a subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphSide {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub side_x: SubgraphSide,
    pub side_y: SubgraphSide,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SeparationError {
    #[error("edge ({0},{1}) is covered by neither side")]
    Uncovered(usize, usize),
    #[error("edge ({0},{1}) lies in both sides")]
    SharedEdge(usize, usize),
    #[error("vertex {0} is in neither side")]
    MissingVertex(usize),
    #[error("side edge ({0},{1}) is not a graph edge or leaves its side")]
    ForeignEdge(usize, usize),
}

impl Separation {
    /// Separation whose sides are induced by the two vertex sets; edges inside the
    /// intersection go to side `y`.
    pub fn from_vertex_sets(g: &Graph, x: &[usize], y: &[usize]) -> Self {
        let mut in_x = vec![false; g.n()];
        let mut in_y = vec![false; g.n()];
        x.iter().for_each(|&v| in_x[v] = true);
        y.iter().for_each(|&v| in_y[v] = true);
        let mut ex = Vec::new();
        let mut ey = Vec::new();
        for (u, v) in g.edges() {
            if in_y[u] && in_y[v] {
                ey.push((u, v));
            } else {
                ex.push((u, v));
            }
        }
        let sorted = |s: &[usize]| {
            let mut s = s.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        };
        Separation {
            side_x: SubgraphSide { vertices: sorted(x), edges: ex },
            side_y: SubgraphSide { vertices: sorted(y), edges: ey },
        }
    }

    pub fn separator(&self) -> Vec<usize> {
        let ys: std::collections::HashSet<_> = self.side_y.vertices.iter().collect();
        self.side_x.vertices.iter().copied().filter(|v| ys.contains(v)).collect()
    }

    pub fn order(&self) -> usize {
        self.separator().len()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), SeparationError> {
        let mut in_x = vec![false; g.n()];
        let mut in_y = vec![false; g.n()];
        self.side_x.vertices.iter().for_each(|&v| in_x[v] = true);
        self.side_y.vertices.iter().for_each(|&v| in_y[v] = true);
        if let Some(v) = (0..g.n()).find(|&v| !in_x[v] && !in_y[v]) {
            return Err(SeparationError::MissingVertex(v));
        }
        let mut owner: BTreeMap<(usize, usize), u8> = BTreeMap::new();
        for (side, mask, tag) in [(&self.side_x, &in_x, 1u8), (&self.side_y, &in_y, 2u8)] {
            for &(a, b) in &side.edges {
                let (u, v) = (a.min(b), a.max(b));
                if !g.has_edge(u, v) || !mask[u] || !mask[v] {
                    return Err(SeparationError::ForeignEdge(u, v));
                }
                let e = owner.entry((u, v)).or_insert(0);
                if *e != 0 {
                    return Err(SeparationError::SharedEdge(u, v));
                }
                *e = tag;
            }
        }
        for e in g.edges() {
            if !owner.contains_key(&e) {
                return Err(SeparationError::Uncovered(e.0, e.1));
            }
        }
        Ok(())
    }
}

/// Model of a pattern graph `H` in a host: disjoint connected branch sets and a
/// host edge witnessing each pattern edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<usize>>,
    /// Entries `[pu, pv, hu, hv]`: pattern edge `pu pv` witnessed by host edge
    /// `hu hv` with `hu` in the branch set of `pu`.
    pub edge_witness: Vec<[usize; 4]>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("branch set count {0} does not match pattern order {1}")]
    BranchCount(usize, usize),
    #[error("host vertex {0} out of range (n = {1})")]
    HostVertex(usize, usize),
    #[error("pattern vertex {0} out of range (n = {1})")]
    PatternVertex(usize, usize),
    #[error("inner model host has {0} vertices, outer pattern has {1}")]
    HostMismatch(usize, usize),
    #[error("inner model is invalid: {0}")]
    InvalidInner(Violation),
    #[error("outer model is invalid: {0}")]
    InvalidOuter(Violation),
}

#[derive(Error, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    #[error("branch set of {0} is empty")]
    EmptyBranchSet(usize),
    #[error("host vertex {host} lies in branch sets of {a} and {b}")]
    Disjointness { host: usize, a: usize, b: usize },
    #[error("branch set of {0} is not connected")]
    Connectivity(usize),
    #[error("pattern edge ({0},{1}) has no witness")]
    MissingWitness(usize, usize),
    #[error("witness for ({pu},{pv}) is not a host edge between the branch sets")]
    BadWitness { pu: usize, pv: usize },
    #[error("witness given for non-edge ({0},{1}) of the pattern")]
    WitnessForNonEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelReport {
    Pass,
    Fail(Violation),
}

impl ModelReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, ModelReport::Pass)
    }
}

impl MinorModel {
    /// Identity model of `g` in itself.
    pub fn identity(g: &Graph) -> Self {
        MinorModel {
            pattern: g.clone(),
            branch_sets: (0..g.n()).map(|v| vec![v]).collect(),
            edge_witness: g.edges().map(|(u, v)| [u, v, u, v]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Host vertex -> pattern vertex owning it.
    pub fn owner_map(&self, host_n: usize) -> Vec<Option<usize>> {
        let mut own = vec![None; host_n];
        for (p, bs) in self.branch_sets.iter().enumerate() {
            for &h in bs {
                if h < host_n {
                    own[h] = Some(p);
                }
            }
        }
        own
    }

    /// Witness for each pattern edge, derived by scanning host edges between
    /// branch sets; entries whose pattern pair is not adjacent are skipped.
    pub fn fill_witnesses(&mut self, g: &Graph) {
        let own = self.owner_map(g.n());
        let mut found: BTreeMap<(usize, usize), [usize; 4]> = BTreeMap::new();
        for (u, v) in g.edges() {
            if let (Some(a), Some(b)) = (own[u], own[v]) {
                if a != b && self.pattern.has_edge(a, b) {
                    let key = (a.min(b), a.max(b));
                    let w = if a < b { [a, b, u, v] } else { [b, a, v, u] };
                    found.entry(key).or_insert(w);
                }
            }
        }
        self.edge_witness = found.into_values().collect();
    }
}

/// Checks the model against `g`. Structural problems (ids out of range) are
/// errors; semantic failures are reported as the first violated clause.
pub fn validate_minor_model(g: &Graph, model: &MinorModel) -> Result<ModelReport, ModelError> {
    let pn = model.pattern.n();
    if model.branch_sets.len() != pn {
        return Err(ModelError::BranchCount(model.branch_sets.len(), pn));
    }
    for bs in &model.branch_sets {
        if let Some(&h) = bs.iter().find(|&&h| h >= g.n()) {
            return Err(ModelError::HostVertex(h, g.n()));
        }
    }
    for w in &model.edge_witness {
        if w[0] >= pn || w[1] >= pn {
            return Err(ModelError::PatternVertex(w[0].max(w[1]), pn));
        }
        if w[2] >= g.n() || w[3] >= g.n() {
            return Err(ModelError::HostVertex(w[2].max(w[3]), g.n()));
        }
    }
    let mut own: Vec<Option<usize>> = vec![None; g.n()];
    for (p, bs) in model.branch_sets.iter().enumerate() {
        if bs.is_empty() {
            return Ok(ModelReport::Fail(Violation::EmptyBranchSet(p)));
        }
        for &h in bs {
            match own[h] {
                Some(q) if q != p => return Ok(ModelReport::Fail(Violation::Disjointness { host: h, a: q, b: p })),
                _ => own[h] = Some(p),
            }
        }
    }
    for (p, bs) in model.branch_sets.iter().enumerate() {
        if !g.is_connected_set(bs) {
            return Ok(ModelReport::Fail(Violation::Connectivity(p)));
        }
    }
    let mut witnessed = std::collections::HashSet::new();
    for w in &model.edge_witness {
        let [pu, pv, hu, hv] = *w;
        if !model.pattern.has_edge(pu, pv) {
            return Ok(ModelReport::Fail(Violation::WitnessForNonEdge(pu, pv)));
        }
        let ok =
            g.has_edge(hu, hv) && ((own[hu] == Some(pu) && own[hv] == Some(pv)) || (own[hu] == Some(pv) && own[hv] == Some(pu)));
        if !ok {
            return Ok(ModelReport::Fail(Violation::BadWitness { pu, pv }));
        }
        witnessed.insert((pu.min(pv), pu.max(pv)));
    }
    for (a, b) in model.pattern.edges() {
        if !witnessed.contains(&(a, b)) {
            return Ok(ModelReport::Fail(Violation::MissingWitness(a, b)));
        }
    }
    Ok(ModelReport::Pass)
}

/// Embedding of a pattern: connected vertex images plus a path per pattern edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidEmbedding {
    pub pattern: Graph,
    pub vertex_images: Vec<Vec<usize>>,
    /// One host path per pattern edge `(u, v)`, `u < v`; the path runs from the
    /// image of `u` to the image of `v` (end vertices inside those images).
    pub edge_images: Vec<((usize, usize), Vec<usize>)>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("vertex images of {0} and {1} intersect")]
    ImagesOverlap(usize, usize),
    #[error("vertex image of {0} is empty or disconnected")]
    BadImage(usize),
    #[error("edge image of ({0},{1}) is not a path between the two images")]
    BadEdgeImage(usize, usize),
    #[error("edge image of ({0},{1}) meets another image or edge image in its interior")]
    InteriorClash(usize, usize),
    #[error("pattern edge ({0},{1}) has no image")]
    MissingEdge(usize, usize),
    #[error("host vertex {0} out of range")]
    HostVertex(usize),
}

pub fn embedding_to_model(g: &Graph, emb: &ValidEmbedding) -> Result<MinorModel, EmbeddingError> {
    let pn = emb.pattern.n();
    let mut own: Vec<Option<usize>> = vec![None; g.n()];
    for (p, img) in emb.vertex_images.iter().enumerate() {
        if let Some(&h) = img.iter().find(|&&h| h >= g.n()) {
            return Err(EmbeddingError::HostVertex(h));
        }
        if !g.is_connected_set(img) {
            return Err(EmbeddingError::BadImage(p));
        }
        for &h in img {
            if let Some(q) = own[h] {
                if q != p {
                    return Err(EmbeddingError::ImagesOverlap(q, p));
                }
            }
            own[h] = Some(p);
        }
    }
    if emb.vertex_images.len() != pn {
        return Err(EmbeddingError::BadImage(emb.vertex_images.len().min(pn)));
    }
    let mut interior_used = vec![false; g.n()];
    let mut branch: Vec<Vec<usize>> = emb.vertex_images.clone();
    let mut witness = Vec::new();
    let mut images: BTreeMap<(usize, usize), &Vec<usize>> = BTreeMap::new();
    for ((a, b), path) in &emb.edge_images {
        images.insert((*a.min(b), *a.max(b)), path);
    }
    for (a, b) in emb.pattern.edges() {
        let path = images.get(&(a, b)).ok_or(EmbeddingError::MissingEdge(a, b))?;
        if path.iter().any(|&h| h >= g.n()) {
            return Err(EmbeddingError::BadEdgeImage(a, b));
        }
        let mut path: Vec<usize> = path.to_vec();
        if path.len() < 2 || !g.is_path(&path) {
            return Err(EmbeddingError::BadEdgeImage(a, b));
        }
        if own[path[0]] == Some(b) {
            path.reverse();
        }
        let (s, t) = (path[0], *path.last().unwrap());
        if own[s] != Some(a) || own[t] != Some(b) {
            return Err(EmbeddingError::BadEdgeImage(a, b));
        }
        let inner = &path[1..path.len() - 1];
        for &h in inner {
            if own[h].is_some() || interior_used[h] {
                return Err(EmbeddingError::InteriorClash(a, b));
            }
            interior_used[h] = true;
        }
        // Whole interior joins the smaller endpoint's branch set.
        branch[a].extend_from_slice(inner);
        let last_inner = if inner.is_empty() { s } else { *inner.last().unwrap() };
        witness.push([a, b, last_inner, t]);
    }
    for bs in &mut branch {
        bs.sort_unstable();
    }
    Ok(MinorModel { pattern: emb.pattern.clone(), branch_sets: branch, edge_witness: witness })
}

/// Composes a model of `H` in `G` with a model of `H'` in `H` into a model of
/// `H'` in `G`.
pub fn compose_models(g: &Graph, outer: &MinorModel, inner: &MinorModel) -> Result<MinorModel, ModelError> {
    let h = &outer.pattern;
    if let ModelReport::Fail(v) = validate_minor_model(h, inner)? {
        return Err(ModelError::InvalidInner(v));
    }
    if let ModelReport::Fail(v) = validate_minor_model(g, outer)? {
        return Err(ModelError::InvalidOuter(v));
    }
    let mut outer_witness: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for w in &outer.edge_witness {
        outer_witness.insert((w[0], w[1]), (w[2], w[3]));
        outer_witness.insert((w[1], w[0]), (w[3], w[2]));
    }
    let branch_sets: Vec<Vec<usize>> = inner
        .branch_sets
        .iter()
        .map(|hs| {
            let mut s: Vec<usize> = hs.iter().flat_map(|&x| outer.branch_sets[x].iter().copied()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let edge_witness = inner
        .edge_witness
        .iter()
        .map(|w| {
            let (hu, hv) = outer_witness[&(w[2], w[3])];
            [w[0], w[1], hu, hv]
        })
        .collect();
    Ok(MinorModel { pattern: inner.pattern.clone(), branch_sets, edge_witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Graph {
        Graph::cycle(3)
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::grid(3, 4);
        let back = Graph::from_text(&g.to_text()).unwrap();
        assert_eq!(g, back);
        let g2 = Graph::from_text("# c\n\np 3 2\ne 0 1 # x\ne 1 2\n").unwrap();
        assert_eq!(g2.m(), 2);
        assert!(Graph::from_text("p 2 1\ne 0 5\n").is_err());
        assert!(matches!(Graph::from_text("p 2 2\ne 0 1\n"), Err(GraphError::EdgeCount { .. })));
    }

    #[test]
    fn identity_triangle_passes() {
        let g = tri();
        assert_eq!(validate_minor_model(&g, &MinorModel::identity(&g)).unwrap(), ModelReport::Pass);
    }

    #[test]
    fn triangle_not_in_path() {
        let g = Graph::path(3);
        let m = MinorModel {
            pattern: tri(),
            branch_sets: vec![vec![0], vec![1], vec![2]],
            edge_witness: vec![[0, 1, 0, 1], [1, 2, 1, 2]],
        };
        assert_eq!(validate_minor_model(&g, &m).unwrap(), ModelReport::Fail(Violation::MissingWitness(0, 2)));
    }

    #[test]
    fn l_shapes_in_grid() {
        // 4x4 grid, ids i*4+j.
        let g = Graph::grid(4, 4);
        let mut m =
            MinorModel { pattern: tri(), branch_sets: vec![vec![0, 1, 4], vec![2, 3, 7], vec![5, 6, 9]], edge_witness: vec![] };
        m.fill_witnesses(&g);
        assert_eq!(validate_minor_model(&g, &m).unwrap(), ModelReport::Pass);
    }

    #[test]
    fn structural_error_for_out_of_range() {
        let g = tri();
        let m = MinorModel { pattern: tri(), branch_sets: vec![vec![0], vec![1], vec![9]], edge_witness: vec![] };
        assert!(validate_minor_model(&g, &m).is_err());
    }

    #[test]
    fn disjointness_and_connectivity() {
        let g = Graph::path(4);
        let pat = Graph::path(2);
        let m = MinorModel { pattern: pat.clone(), branch_sets: vec![vec![0, 1], vec![1, 2]], edge_witness: vec![] };
        assert!(matches!(validate_minor_model(&g, &m).unwrap(), ModelReport::Fail(Violation::Disjointness { .. })));
        let m = MinorModel { pattern: pat, branch_sets: vec![vec![0, 2], vec![1]], edge_witness: vec![] };
        assert_eq!(validate_minor_model(&g, &m).unwrap(), ModelReport::Fail(Violation::Connectivity(0)));
    }

    #[test]
    fn embedding_k2() {
        let g = Graph::path(2);
        let emb = ValidEmbedding {
            pattern: Graph::path(2),
            vertex_images: vec![vec![0], vec![1]],
            edge_images: vec![((0, 1), vec![0, 1])],
        };
        let m = embedding_to_model(&g, &emb).unwrap();
        assert_eq!(m.branch_sets, vec![vec![0], vec![1]]);
        assert!(validate_minor_model(&g, &m).unwrap().is_pass());
    }

    #[test]
    fn embedding_triangle_in_hexagon() {
        let g = Graph::cycle(6);
        let emb = ValidEmbedding {
            pattern: tri(),
            vertex_images: vec![vec![0], vec![2], vec![4]],
            edge_images: vec![((0, 1), vec![0, 1, 2]), ((1, 2), vec![2, 3, 4]), ((0, 2), vec![4, 5, 0])],
        };
        let m = embedding_to_model(&g, &emb).unwrap();
        assert!(validate_minor_model(&g, &m).unwrap().is_pass());
        assert_eq!(m.branch_sets[0], vec![0, 1, 5]);
    }

    #[test]
    fn embedding_overlap_rejected() {
        let g = Graph::cycle(6);
        let emb = ValidEmbedding {
            pattern: Graph::path(2),
            vertex_images: vec![vec![0, 1], vec![1]],
            edge_images: vec![((0, 1), vec![0, 1])],
        };
        assert!(matches!(embedding_to_model(&g, &emb), Err(EmbeddingError::ImagesOverlap(0, 1))));
    }

    #[test]
    fn compose_identity_inner() {
        let g = Graph::grid(4, 4);
        let mut outer =
            MinorModel { pattern: tri(), branch_sets: vec![vec![0, 1, 4], vec![2, 3, 7], vec![5, 6, 9]], edge_witness: vec![] };
        outer.fill_witnesses(&g);
        let inner = MinorModel::identity(&tri());
        let c = compose_models(&g, &outer, &inner).unwrap();
        assert_eq!(c, outer);
    }

    #[test]
    fn compose_rejects_invalid_inner() {
        let g = Graph::cycle(3);
        let outer = MinorModel::identity(&g);
        let inner = MinorModel { pattern: Graph::path(2), branch_sets: vec![vec![0, 1], vec![1]], edge_witness: vec![] };
        assert!(matches!(compose_models(&g, &outer, &inner), Err(ModelError::InvalidInner(_))));
    }

    #[test]
    fn separation_checks() {
        let g = Graph::path(4);
        let s = Separation::from_vertex_sets(&g, &[0, 1, 2], &[2, 3]);
        assert_eq!(s.order(), 1);
        s.validate(&g).unwrap();
    }

    #[test]
    fn model_json_round_trip() {
        let g = tri();
        let m = MinorModel::identity(&g);
        assert_eq!(MinorModel::from_json(&m.to_json()).unwrap(), m);
    }
}
