//! Tree subgraphs and their leaf/stem decomposition.
//!
//! A [`TreeSubgraph`] is a tree on a subset of a host graph's vertices. The
//! stem is what remains after deleting the tree's leaves once; branch
//! vertices of the stem (stem-degree >= 3) are the quantity every solver in
//! this crate minimizes or budgets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A tree on a subset of the host graph's vertices.
///
/// Conventions for tiny trees: a singleton tree has no leaves (a leaf is a
/// vertex of degree one) and its stem is the singleton itself; in a
/// two-vertex tree both endpoints are leaves and the stem is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSubgraph {
    host: Arc<Graph>,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

impl TreeSubgraph {
    /// Builds and validates a tree from an explicit vertex set and edge set.
    pub fn new(
        host: Arc<Graph>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<Edge>,
    ) -> Result<TreeSubgraph> {
        let t = TreeSubgraph { host, vertices, edges };
        t.validate()?;
        Ok(t)
    }

    /// Builds a tree from its edges alone; the vertex set is the union of
    /// the endpoints, so the result always has at least one edge.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(host: Arc<Graph>, edges: I) -> Result<TreeSubgraph> {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        if edges.is_empty() {
            return Err(Error::InvalidTree("no edges given".into()));
        }
        let mut vertices = BTreeSet::new();
        for e in &edges {
            vertices.insert(e.u);
            vertices.insert(e.v);
        }
        TreeSubgraph::new(host, vertices, edges)
    }

    /// Single-vertex tree.
    pub fn singleton(host: Arc<Graph>, v: usize) -> Result<TreeSubgraph> {
        if v >= host.order() {
            return Err(Error::VertexOutOfRange { v, n: host.order() });
        }
        Ok(TreeSubgraph {
            host,
            vertices: [v].into_iter().collect(),
            edges: BTreeSet::new(),
        })
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidTree("empty vertex set".into()));
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= self.host.order()) {
            return Err(Error::VertexOutOfRange { v, n: self.host.order() });
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} vertices",
                self.edges.len(),
                self.vertices.len()
            )));
        }
        for e in &self.edges {
            if !self.host.has_edge(e.u, e.v) {
                return Err(Error::InvalidTree(format!("({},{}) is not a host edge", e.u, e.v)));
            }
            if !self.vertices.contains(&e.u) || !self.vertices.contains(&e.v) {
                return Err(Error::InvalidTree(format!(
                    "edge ({},{}) leaves the vertex set",
                    e.u, e.v
                )));
            }
        }
        // Edge count is already |V|-1, so connectivity implies acyclicity.
        let start = *self.vertices.iter().next().unwrap();
        let mut seen: BTreeSet<usize> = [start].into_iter().collect();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.touches(v) {
                    let w = e.other(v);
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(Error::InvalidTree("edge set does not connect the vertices".into()));
        }
        Ok(())
    }

    pub fn host(&self) -> &Arc<Graph> {
        &self.host
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_spanning(&self) -> bool {
        self.vertices.len() == self.host.order()
    }

    /// Degree of each tree vertex within the tree.
    pub fn degrees(&self) -> BTreeMap<usize, usize> {
        let mut deg: BTreeMap<usize, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in &self.edges {
            *deg.get_mut(&e.u).unwrap() += 1;
            *deg.get_mut(&e.v).unwrap() += 1;
        }
        deg
    }

    /// Tree neighbors of `v`, ascending.
    pub fn tree_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices of degree exactly one.
    pub fn leaves(&self) -> BTreeSet<usize> {
        self.degrees()
            .into_iter()
            .filter(|&(_, d)| d == 1)
            .map(|(v, _)| v)
            .collect()
    }

    /// Unique path between two tree vertices, as a vertex sequence.
    pub fn path_between(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::InvalidTree(format!("path endpoints {a},{b} not in tree")));
        }
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack = vec![a];
        let mut seen: BTreeSet<usize> = [a].into_iter().collect();
        while let Some(v) = stack.pop() {
            if v == b {
                break;
            }
            for w in self.tree_neighbors(v) {
                if seen.insert(w) {
                    parent.insert(w, v);
                    stack.push(w);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = *parent
                .get(&cur)
                .ok_or_else(|| Error::Internal("tree path lookup failed".into()))?;
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// A copy with `removed` edges deleted and `added` edges inserted; the
    /// vertex set is re-derived from the edges. Fails unless the result is
    /// a valid tree.
    pub fn edited(&self, removed: &[Edge], added: &[Edge]) -> Result<TreeSubgraph> {
        let mut edges = self.edges.clone();
        for e in removed {
            if !edges.remove(e) {
                return Err(Error::InvalidTree(format!("({},{}) not in tree", e.u, e.v)));
            }
        }
        for e in added {
            if !edges.insert(*e) {
                return Err(Error::InvalidTree(format!("({},{}) already in tree", e.u, e.v)));
            }
        }
        TreeSubgraph::from_edges(self.host.clone(), edges)
    }
}

/// The leaf/stem decomposition of a tree, with stem-level degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemProfile {
    pub tree_order: usize,
    pub leaves: BTreeSet<usize>,
    pub stem_vertices: BTreeSet<usize>,
    pub stem_degrees: BTreeMap<usize, usize>,
    pub stem_branch_vertices: BTreeSet<usize>,
    pub stem_leaves: BTreeSet<usize>,
    pub degree_two_stem: BTreeSet<usize>,
    pub stem_max_degree: usize,
    pub is_spider_stem: bool,
}

impl StemProfile {
    pub fn branch_count(&self) -> usize {
        self.stem_branch_vertices.len()
    }

    pub fn stem_order(&self) -> usize {
        self.stem_vertices.len()
    }

    pub fn stem_leaf_count(&self) -> usize {
        self.stem_leaves.len()
    }
}

/// Vertices of degree exactly one in the tree.
pub fn leaves(t: &TreeSubgraph) -> BTreeSet<usize> {
    t.leaves()
}

/// Full leaf/stem decomposition.
pub fn stem_profile(t: &TreeSubgraph) -> StemProfile {
    let leaves = t.leaves();
    let stem_vertices: BTreeSet<usize> =
        t.vertices().iter().copied().filter(|v| !leaves.contains(v)).collect();
    let mut stem_degrees: BTreeMap<usize, usize> =
        stem_vertices.iter().map(|&v| (v, 0)).collect();
    for e in t.edges() {
        if stem_vertices.contains(&e.u) && stem_vertices.contains(&e.v) {
            *stem_degrees.get_mut(&e.u).unwrap() += 1;
            *stem_degrees.get_mut(&e.v).unwrap() += 1;
        }
    }
    let mut stem_branch_vertices = BTreeSet::new();
    let mut stem_leaves = BTreeSet::new();
    let mut degree_two_stem = BTreeSet::new();
    let mut stem_max_degree = 0;
    for (&v, &d) in &stem_degrees {
        stem_max_degree = stem_max_degree.max(d);
        match d {
            1 => {
                stem_leaves.insert(v);
            }
            2 => {
                degree_two_stem.insert(v);
            }
            d if d >= 3 => {
                stem_branch_vertices.insert(v);
            }
            _ => {}
        }
    }
    let is_spider_stem = stem_branch_vertices.len() <= 1;
    StemProfile {
        tree_order: t.order(),
        leaves,
        stem_vertices,
        stem_degrees,
        stem_branch_vertices,
        stem_leaves,
        degree_two_stem,
        stem_max_degree,
        is_spider_stem,
    }
}

/// Leaf count via the degree identity: sum over vertices of degree >= 3 of
/// (deg - 2), plus two. Defined for trees with at least one edge.
pub fn count_leaves_by_formula(t: &TreeSubgraph) -> Result<usize> {
    if t.order() < 2 {
        return Err(Error::SingletonTree);
    }
    let excess: usize = t
        .degrees()
        .values()
        .filter(|&&d| d >= 3)
        .map(|&d| d - 2)
        .sum();
    Ok(excess + 2)
}

/// The lexicographic search objective: grow the tree, then shrink the stem's
/// leaf count, then shrink the stem itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Objective {
    pub order: usize,
    pub stem_leaf_count: usize,
    pub stem_order: usize,
}

impl Objective {
    /// True iff `self` strictly improves on `other`.
    pub fn improves(&self, other: &Objective) -> bool {
        (
            self.order,
            std::cmp::Reverse(self.stem_leaf_count),
            std::cmp::Reverse(self.stem_order),
        ) > (
            other.order,
            std::cmp::Reverse(other.stem_leaf_count),
            std::cmp::Reverse(other.stem_order),
        )
    }
}

impl Ord for Objective {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (
            self.order,
            std::cmp::Reverse(self.stem_leaf_count),
            std::cmp::Reverse(self.stem_order),
        )
            .cmp(&(
                other.order,
                std::cmp::Reverse(other.stem_leaf_count),
                std::cmp::Reverse(other.stem_order),
            ))
    }
}

impl PartialOrd for Objective {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The objective triple (tree order, stem leaf count, stem order).
pub fn tree_metrics(t: &TreeSubgraph) -> Objective {
    let p = stem_profile(t);
    Objective {
        order: p.tree_order,
        stem_leaf_count: p.stem_leaf_count(),
        stem_order: p.stem_order(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(n: usize) -> TreeSubgraph {
        let g = Arc::new(Graph::path(n));
        let edges: Vec<Edge> = g.edges().to_vec();
        TreeSubgraph::from_edges(g, edges).unwrap()
    }

    /// Spider with center 0 and three legs 0-1-2, 0-3-4, 0-5-6.
    fn spider_tree() -> TreeSubgraph {
        let pairs = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
        let g = Arc::new(Graph::new(7, &pairs).unwrap());
        let edges: Vec<Edge> = g.edges().to_vec();
        TreeSubgraph::from_edges(g, edges).unwrap()
    }

    #[test]
    fn leaves_of_small_trees() {
        assert_eq!(
            path_tree(5).leaves(),
            [0, 4].into_iter().collect::<BTreeSet<_>>()
        );
        let star = Arc::new(Graph::star(4));
        let t = TreeSubgraph::from_edges(star.clone(), star.edges().to_vec()).unwrap();
        assert_eq!(t.leaves(), [1, 2, 3, 4].into_iter().collect::<BTreeSet<_>>());
        assert_eq!(
            spider_tree().leaves(),
            [2, 4, 6].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn singleton_conventions() {
        let g = Arc::new(Graph::new(1, &[]).unwrap());
        let t = TreeSubgraph::singleton(g, 0).unwrap();
        assert!(t.leaves().is_empty());
        let p = stem_profile(&t);
        assert_eq!(p.stem_vertices, [0].into_iter().collect());
        assert_eq!(p.branch_count(), 0);
        assert_eq!(p.stem_max_degree, 0);
        assert!(count_leaves_by_formula(&t).is_err());
    }

    #[test]
    fn two_vertex_conventions() {
        let g = Arc::new(Graph::path(2));
        let t = TreeSubgraph::from_edges(g.clone(), g.edges().to_vec()).unwrap();
        assert_eq!(t.leaves().len(), 2);
        let p = stem_profile(&t);
        assert!(p.stem_vertices.is_empty());
        assert_eq!(tree_metrics(&t), Objective { order: 2, stem_leaf_count: 0, stem_order: 0 });
        assert_eq!(count_leaves_by_formula(&t).unwrap(), 2);
    }

    #[test]
    fn stem_profile_of_path() {
        let p = stem_profile(&path_tree(5));
        assert_eq!(p.stem_vertices, [1, 2, 3].into_iter().collect());
        assert_eq!(p.branch_count(), 0);
        assert_eq!(p.stem_leaves, [1, 3].into_iter().collect());
        assert_eq!(p.degree_two_stem, [2].into_iter().collect());
        assert!(p.is_spider_stem);
    }

    #[test]
    fn stem_profile_of_spider() {
        let p = stem_profile(&spider_tree());
        assert_eq!(p.stem_vertices, [0, 1, 3, 5].into_iter().collect());
        assert_eq!(p.stem_branch_vertices, [0].into_iter().collect());
        assert_eq!(p.stem_leaves, [1, 3, 5].into_iter().collect());
        assert!(p.is_spider_stem);
    }

    #[test]
    fn leaf_formula_matches_direct_count() {
        for n in 2..=9 {
            let t = path_tree(n);
            assert_eq!(count_leaves_by_formula(&t).unwrap(), 2);
            assert_eq!(t.leaves().len(), 2);
        }
        let star = Arc::new(Graph::star(5));
        let t = TreeSubgraph::from_edges(star.clone(), star.edges().to_vec()).unwrap();
        assert_eq!(count_leaves_by_formula(&t).unwrap(), 5);

        // Two adjacent degree-3 vertices, each carrying two pendant leaves.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)];
        let g = Arc::new(Graph::new(6, &pairs).unwrap());
        let t = TreeSubgraph::from_edges(g.clone(), g.edges().to_vec()).unwrap();
        assert_eq!(count_leaves_by_formula(&t).unwrap(), 4);
        assert_eq!(t.leaves().len(), 4);
    }

    #[test]
    fn metrics_triples() {
        assert_eq!(
            tree_metrics(&path_tree(5)),
            Objective { order: 5, stem_leaf_count: 2, stem_order: 3 }
        );
        assert_eq!(
            tree_metrics(&spider_tree()),
            Objective { order: 7, stem_leaf_count: 3, stem_order: 4 }
        );
        let star = Arc::new(Graph::star(3));
        let t = TreeSubgraph::from_edges(star.clone(), star.edges().to_vec()).unwrap();
        assert_eq!(
            tree_metrics(&t),
            Objective { order: 4, stem_leaf_count: 0, stem_order: 1 }
        );
    }

    #[test]
    fn objective_ordering() {
        let base = Objective { order: 5, stem_leaf_count: 3, stem_order: 4 };
        assert!(Objective { order: 6, stem_leaf_count: 9, stem_order: 9 }.improves(&base));
        assert!(Objective { order: 5, stem_leaf_count: 2, stem_order: 9 }.improves(&base));
        assert!(Objective { order: 5, stem_leaf_count: 3, stem_order: 3 }.improves(&base));
        assert!(!base.improves(&base));
        assert!(!Objective { order: 4, stem_leaf_count: 0, stem_order: 0 }.improves(&base));
    }

    #[test]
    fn invalid_trees_rejected() {
        let g = Arc::new(Graph::cycle(4));
        let all: Vec<Edge> = g.edges().to_vec();
        assert!(TreeSubgraph::from_edges(g.clone(), all).is_err()); // cycle
        let host = Arc::new(Graph::path(3));
        // (0,2) is not an edge of P_3
        assert!(TreeSubgraph::from_edges(host, vec![Edge::new(0, 2)]).is_err());
    }

    #[test]
    fn tree_path_lookup() {
        let t = spider_tree();
        assert_eq!(t.path_between(2, 4).unwrap(), vec![2, 1, 0, 3, 4]);
        assert_eq!(t.path_between(0, 0).unwrap(), vec![0]);
    }
}
