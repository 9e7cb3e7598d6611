//! Immutable simple undirected graphs with BFS distances and claw detection.
//!
//! Vertices are dense integers `0..n`. Construction validates simplicity
//! (no loops, no duplicate edges); everything afterwards is read-only, so a
//! [`Graph`] can be shared freely across threads.

use std::fmt;

use crate::error::{Error, Result};

/// An unordered vertex pair, stored normalized with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Loops are rejected upstream; an equal
    /// pair here is a programming error.
    pub fn new(a: usize, b: usize) -> Edge {
        assert!(a != b, "loop edge ({a},{a})");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// An induced claw: a center adjacent to three pairwise non-adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClawWitness {
    pub center: usize,
    pub leaves: [usize; 3],
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices from unordered pairs, validating
    /// vertex ranges, loops and duplicates.
    pub fn new(n: usize, edge_pairs: &[(usize, usize)]) -> Result<Graph> {
        let mut edges = Vec::with_capacity(edge_pairs.len());
        for &(a, b) in edge_pairs {
            if a >= n {
                return Err(Error::VertexOutOfRange { v: a, n });
            }
            if b >= n {
                return Err(Error::VertexOutOfRange { v: b, n });
            }
            if a == b {
                return Err(Error::LoopEdge { u: a });
            }
            edges.push(Edge::new(a, b));
        }
        edges.sort();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge { u: w[0].u, v: w[0].v });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        Ok(self.adj[v].len())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.n || b >= self.n {
            return false;
        }
        self.adj[a].binary_search(&b).is_ok()
    }

    /// True iff every vertex is reachable from vertex 0; vacuously true for
    /// graphs of order at most one.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Single-source BFS hop distances; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        let mut rows = Vec::with_capacity(self.n);
        for v in 0..self.n {
            rows.push(self.bfs_distances(v));
        }
        DistanceMatrix { n: self.n, rows }
    }

    /// Searches each neighborhood for three pairwise non-adjacent vertices.
    /// Returns the first claw in vertex order, or `None` if the graph is
    /// claw-free.
    pub fn claw_witness(&self) -> Option<ClawWitness> {
        for center in 0..self.n {
            let nb = &self.adj[center];
            for i in 0..nb.len() {
                for j in (i + 1)..nb.len() {
                    if self.has_edge(nb[i], nb[j]) {
                        continue;
                    }
                    for k in (j + 1)..nb.len() {
                        if !self.has_edge(nb[i], nb[k]) && !self.has_edge(nb[j], nb[k]) {
                            return Some(ClawWitness {
                                center,
                                leaves: [nb[i], nb[j], nb[k]],
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_claw_free(&self) -> bool {
        self.claw_witness().is_none()
    }

    /// Induced subgraph on `s`. Returns the new graph together with the
    /// vertex relabeling as a sorted vector mapping new id -> old id.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut keep: Vec<usize> = s.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut pairs = Vec::new();
        for e in &self.edges {
            let (a, b) = (old_to_new[e.u], old_to_new[e.v]);
            if a != usize::MAX && b != usize::MAX {
                pairs.push((a, b));
            }
        }
        let sub = Graph::new(keep.len(), &pairs)?;
        Ok((sub, keep))
    }

    // Small named families, used all over the tests and the generators.

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                pairs.push((u, v));
            }
        }
        Graph::new(n, &pairs).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &pairs).expect("path graph is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        pairs.push((n - 1, 0));
        Graph::new(n, &pairs).expect("cycle graph is simple")
    }

    /// Star with one center (vertex 0) and `leaves` outer vertices.
    pub fn star(leaves: usize) -> Graph {
        let pairs: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &pairs).expect("star graph is simple")
    }
}

/// All-pairs hop distances, with unreachable pairs kept explicit.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    rows: Vec<Vec<Option<u32>>>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Hop distance between `u` and `v`, or `None` when unreachable.
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.rows[u][v]
    }

    /// True iff `d(u,v) >= l`, treating unreachable as infinitely far.
    pub fn at_least(&self, u: usize, v: usize, l: u32) -> bool {
        match self.rows[u][v] {
            Some(d) => d >= l,
            None => true,
        }
    }
}
