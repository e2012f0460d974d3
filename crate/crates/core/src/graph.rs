//! Undirected simple graphs with dense integer vertex ids, plus the distance
//! machinery (BFS fields, balls, neighborhoods, powers, induced radii) the
//! rest of the crate is built on.

use std::fmt::Write as _;

use thiserror::Error;

/// Sentinel distance for vertices not reached by a BFS.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex id {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(u32, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),
    #[error("edge {0}-{1} not present")]
    MissingEdge(u32, u32),
    #[error("source set is empty")]
    EmptySourceSet,
    #[error("graph must be connected for this operation")]
    Disconnected,
    #[error("graph power exponent must be at least 1, got {0}")]
    BadPowerExponent(i64),
    #[error("bias strength must lie in [0, 1), got {0}")]
    BadEps(f64),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Immutable simple undirected graph. Neighbor lists are sorted and
/// duplicate-free; vertex ids are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let dup = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge(v as u32, dup));
            }
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Position of `v` in the neighbor list of `u`, if the edge exists.
    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        self.adj[u as usize].binary_search(&v).ok()
    }

    /// Iterates canonical edges (u, v) with u < v, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.adj.len() as u32
    }

    /// Multi-source BFS: exact distance from each vertex to the nearest source.
    pub fn distances_from(&self, sources: &VertexSet) -> Result<Vec<u32>, GraphError> {
        if sources.is_empty() {
            return Err(GraphError::EmptySourceSet);
        }
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        for v in sources.iter() {
            dist[v as usize] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &w in self.neighbors(v) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Single-source distances, truncated at `max_depth` when given.
    pub fn distances_from_vertex(&self, v: u32, max_depth: Option<u32>) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[v as usize] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize];
            if let Some(cap) = max_depth {
                if d >= cap {
                    continue;
                }
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Closed ball: all vertices at distance at most `r` from `v`.
    pub fn ball(&self, v: u32, r: u32) -> VertexSet {
        let dist = self.distances_from_vertex(v, Some(r));
        let mut set = VertexSet::new(self.vertex_count());
        for (w, &d) in dist.iter().enumerate() {
            if d <= r {
                set.insert(w as u32);
            }
        }
        set
    }

    /// U together with all neighbors of U.
    pub fn closed_neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = set.clone();
        for v in set.iter() {
            for &w in self.neighbors(v) {
                out.insert(w);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = VertexSet::new(self.vertex_count());
        seen.insert(0);
        let dist = self.distances_from(&seen).expect("nonempty");
        dist.iter().all(|&d| d != UNREACHED)
    }

    /// kth power: edge uv iff 1 <= dist(u, v) <= k. Requires connectivity.
    pub fn power(&self, k: i64) -> Result<Graph, GraphError> {
        if k < 1 {
            return Err(GraphError::BadPowerExponent(k));
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let k = k as u32;
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0usize;
        for v in 0..n as u32 {
            let dist = self.distances_from_vertex(v, Some(k));
            for (w, &d) in dist.iter().enumerate() {
                if d >= 1 && d <= k {
                    adj[v as usize].push(w as u32);
                    if (w as u32) > v {
                        edge_count += 1;
                    }
                }
            }
        }
        // BFS emits neighbors in unsorted discovery order only when truncated
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, edge_count })
    }

    /// Eccentricity of `center` inside the subgraph induced by `set`, or None
    /// if some vertex of the set is unreachable within it.
    pub fn induced_eccentricity(&self, set: &VertexSet, center: u32) -> Option<u32> {
        debug_assert!(set.contains(center));
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[center as usize] = 0;
        queue.push_back(center);
        let mut reached = 0usize;
        let mut ecc = 0u32;
        while let Some(u) = queue.pop_front() {
            reached += 1;
            ecc = ecc.max(dist[u as usize]);
            for &w in self.neighbors(u) {
                if set.contains(w) && dist[w as usize] == UNREACHED {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        (reached == set.len()).then_some(ecc)
    }

    /// Radius of the induced subgraph G[set], with a witness center.
    pub fn induced_radius(&self, set: &VertexSet) -> Result<InducedRadius, GraphError> {
        if set.is_empty() {
            return Err(GraphError::EmptySourceSet);
        }
        let mut best: Option<(u32, u32)> = None;
        for u in set.iter() {
            match self.induced_eccentricity(set, u) {
                None => return Ok(InducedRadius::Infinite),
                Some(ecc) => {
                    if best.is_none_or(|(r, _)| ecc < r) {
                        best = Some((ecc, u));
                    }
                }
            }
        }
        let (radius, center) = best.unwrap();
        Ok(InducedRadius::Finite { radius, center })
    }

    /// dist(e, U) = min of the two endpoint distances to U.
    pub fn edge_distance(&self, edge: (u32, u32), set: &VertexSet) -> Result<u32, GraphError> {
        let (u, v) = edge;
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        let dist = self.distances_from(set)?;
        Ok(dist[u as usize].min(dist[v as usize]))
    }

    /// Serializes to the text format: `n m` then one `u v` line per canonical
    /// edge, sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the text format, validating counts and simplicity.
    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate();
        let (n, m) = loop {
            let (idx, line) = lines.next().ok_or(GraphError::Parse {
                line: 1,
                msg: "missing header line".into(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.and_then(|t| t.parse().ok()).ok_or(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("expected `n m` header, got {line:?}"),
                })
            };
            let n = parse(it.next())?;
            let m = parse(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: "trailing tokens after header".into(),
                });
            }
            break (n, m);
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32, GraphError> {
                tok.and_then(|t| t.parse().ok()).ok_or(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("expected `u v` edge line, got {line:?}"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    msg: "trailing tokens after edge".into(),
                });
            }
            edges.push((u.min(v), u.max(v)));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: text.lines().count(),
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    /// Order-insensitive structural fingerprint, for solver caches.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.vertex_count().hash(&mut h);
        for (u, v) in self.edges() {
            (u, v).hash(&mut h);
        }
        h.finish()
    }
}

/// Radius of an induced subgraph; `Infinite` marks a disconnected induction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InducedRadius {
    Finite { radius: u32, center: u32 },
    Infinite,
}

impl InducedRadius {
    pub fn is_at_most(&self, r: u32) -> bool {
        matches!(self, InducedRadius::Finite { radius, .. } if *radius <= r)
    }
}

/// Fixed-universe bit set over the vertices of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: Vec<u64>,
    universe: usize,
    len: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe as u32 {
            s.insert(v);
        }
        s
    }

    pub fn from_iter(universe: usize, iter: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::new(universe);
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < self.universe && self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns true if the vertex was newly inserted.
    pub fn insert(&mut self, v: u32) -> bool {
        let v = v as usize;
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let word = &mut self.bits[v / 64];
        let mask = 1u64 << (v % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, v: u32) -> bool {
        let v = v as usize;
        if v >= self.universe {
            return false;
        }
        let word = &mut self.bits[v / 64];
        let mask = 1u64 << (v % 64);
        if *word & mask != 0 {
            *word &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        self.len = self.bits.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(move |(i, &word)| {
            let base = (i * 64) as u32;
            BitIter { word, base }
        })
    }
}

struct BitIter {
    word: u64,
    base: u32,
}

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros();
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}
