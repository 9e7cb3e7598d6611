//! Exhaustive search for the minimum number of stem branch vertices over
//! all spanning trees.
//!
//! The main searcher is a branch-and-bound over edge inclusion/exclusion
//! decisions in lexicographic edge order. A committed partial forest already
//! forces some stem branch vertices (a vertex with three committed neighbors
//! that are themselves committed to degree two or more stays a stem branch
//! vertex in every completion); that count prunes the search. The naive
//! enumerator in [`reference`] is a deliberately independent second route
//! used to cross-check the searcher on small graphs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::limits::Limits;
use crate::tree::{stem_profile, TreeSubgraph};

/// Outcome of the exhaustive minimization.
#[derive(Debug, Clone)]
pub struct ExactResult {
    pub min_stem_branch_vertices: usize,
    pub optimal_tree: TreeSubgraph,
    /// Complete spanning trees evaluated.
    pub trees_explored: u64,
    /// Branch-and-bound nodes visited.
    pub search_nodes: u64,
    /// True iff the search completed within its work limit, i.e. the
    /// minimum is proven.
    pub exhausted: bool,
}

/// Outcome of the budgeted existence check.
#[derive(Debug, Clone)]
pub enum BudgetOutcome {
    /// A spanning tree whose stem has at most k branch vertices.
    Yes(TreeSubgraph),
    /// Exhaustively proven: no such spanning tree.
    No,
    /// Work limit hit before a witness or a proof was found.
    Inconclusive,
}

enum Mode {
    Minimize,
    Budget(usize),
}

struct Searcher {
    host: Arc<Graph>,
    edges: Vec<Edge>,
    n: usize,
    mode: Mode,
    node_limit: u64,
    nodes: u64,
    trees: u64,
    best: Option<(usize, Vec<Edge>)>,
    aborted: bool,
    done: bool,
}

impl Searcher {
    fn new(g: &Graph, mode: Mode, limits: &Limits) -> Searcher {
        Searcher {
            host: Arc::new(g.clone()),
            edges: g.edges().to_vec(),
            n: g.order(),
            mode,
            node_limit: limits.search_nodes,
            nodes: 0,
            trees: 0,
            best: None,
            aborted: false,
            done: false,
        }
    }

    fn prune_bound(&self) -> usize {
        // Subtrees that cannot strictly beat this value are cut.
        let incumbent = self.best.as_ref().map(|(c, _)| *c).unwrap_or(usize::MAX);
        match self.mode {
            Mode::Minimize => incumbent,
            Mode::Budget(k) => incumbent.min(k + 1),
        }
    }

    /// Stem branch vertices already forced by the committed forest.
    fn forced_branch_count(&self, included: &[Edge], deg: &[u8]) -> usize {
        let mut strong = vec![0u8; self.n];
        for e in included {
            if deg[e.v] >= 2 {
                strong[e.u] += 1;
            }
            if deg[e.u] >= 2 {
                strong[e.v] += 1;
            }
        }
        strong.iter().filter(|&&s| s >= 3).count()
    }

    /// Union-find root without path compression (state is copied per node).
    fn find(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }

    /// True iff the committed forest plus all undecided edges from `idx`
    /// can still connect the graph.
    fn can_connect(&self, parent: &[usize], idx: usize) -> bool {
        let mut p = parent.to_vec();
        let mut comps = (0..self.n)
            .filter(|&v| Self::find(&p, v) == v)
            .count();
        for e in &self.edges[idx..] {
            let (ru, rv) = (Self::find(&p, e.u), Self::find(&p, e.v));
            if ru != rv {
                p[ru] = rv;
                comps -= 1;
                if comps == 1 {
                    return true;
                }
            }
        }
        comps == 1
    }

    fn record_tree(&mut self, included: &[Edge]) {
        self.trees += 1;
        let tree = TreeSubgraph::from_edges(self.host.clone(), included.to_vec())
            .expect("committed acyclic edge set of full size is a spanning tree");
        let count = stem_profile(&tree).branch_count();
        let improves = self.best.as_ref().map(|(c, _)| count < *c).unwrap_or(true);
        if improves {
            self.best = Some((count, included.to_vec()));
        }
        match self.mode {
            Mode::Budget(k) => {
                if count <= k {
                    self.done = true;
                }
            }
            Mode::Minimize => {
                if count == 0 {
                    // Nothing can beat a path-like stem; the minimum is proven.
                    self.done = true;
                }
            }
        }
    }

    fn recurse(&mut self, idx: usize, included: &mut Vec<Edge>, deg: &mut Vec<u8>, parent: &[usize]) {
        if self.done || self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        if included.len() == self.n - 1 {
            self.record_tree(included);
            return;
        }
        if idx >= self.edges.len() {
            return;
        }
        // Not enough undecided edges left to finish a spanning tree.
        if included.len() + (self.edges.len() - idx) < self.n - 1 {
            return;
        }
        if self.forced_branch_count(included, deg) >= self.prune_bound() {
            return;
        }
        if !self.can_connect(parent, idx) {
            return;
        }
        let e = self.edges[idx];
        let (ru, rv) = (Self::find(parent, e.u), Self::find(parent, e.v));
        if ru != rv {
            // Include first: the first completed tree is then the
            // lexicographically smallest, which fixes the tie-break.
            let mut p2 = parent.to_vec();
            p2[ru] = rv;
            included.push(e);
            deg[e.u] += 1;
            deg[e.v] += 1;
            self.recurse(idx + 1, included, deg, &p2);
            included.pop();
            deg[e.u] -= 1;
            deg[e.v] -= 1;
        }
        self.recurse(idx + 1, included, deg, parent);
    }

    fn run(&mut self) {
        if self.n == 1 {
            // Trivial spanning tree; handled by the callers.
            return;
        }
        let mut included = Vec::with_capacity(self.n - 1);
        let mut deg = vec![0u8; self.n];
        let parent: Vec<usize> = (0..self.n).collect();
        self.recurse(0, &mut included, &mut deg, &parent);
    }
}

fn require_connected_nonempty(g: &Graph) -> Result<()> {
    if g.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Minimum stem branch-vertex count over all spanning trees, with an
/// optimal tree. Among optimal trees the lexicographically smallest edge
/// set is reported.
pub fn min_branch_spanning_tree(g: &Graph, limits: &Limits) -> Result<ExactResult> {
    require_connected_nonempty(g)?;
    if g.order() == 1 {
        let tree = TreeSubgraph::singleton(Arc::new(g.clone()), 0)?;
        return Ok(ExactResult {
            min_stem_branch_vertices: 0,
            optimal_tree: tree,
            trees_explored: 1,
            search_nodes: 0,
            exhausted: true,
        });
    }
    let mut s = Searcher::new(g, Mode::Minimize, limits);
    s.run();
    let (count, edges) = s.best.clone().ok_or(Error::WorkLimitExceeded {
        what: "spanning tree search",
        limit: limits.search_nodes,
    })?;
    let tree = TreeSubgraph::from_edges(s.host.clone(), edges)?;
    Ok(ExactResult {
        min_stem_branch_vertices: count,
        optimal_tree: tree,
        trees_explored: s.trees,
        search_nodes: s.nodes,
        exhausted: !s.aborted,
    })
}

/// Does some spanning tree have a stem with at most `k` branch vertices?
/// Early-exits on the first witness.
pub fn has_spanning_tree_with_budget(g: &Graph, k: usize, limits: &Limits) -> Result<BudgetOutcome> {
    require_connected_nonempty(g)?;
    if g.order() == 1 {
        let tree = TreeSubgraph::singleton(Arc::new(g.clone()), 0)?;
        return Ok(BudgetOutcome::Yes(tree));
    }
    let mut s = Searcher::new(g, Mode::Budget(k), limits);
    s.run();
    match s.best.clone() {
        Some((count, edges)) if count <= k => {
            let tree = TreeSubgraph::from_edges(s.host.clone(), edges)?;
            Ok(BudgetOutcome::Yes(tree))
        }
        _ if s.aborted => Ok(BudgetOutcome::Inconclusive),
        _ => Ok(BudgetOutcome::No),
    }
}

/// The independent brute-force route: enumerate every (n-1)-edge subset.
pub mod reference {
    use super::*;

    /// Minimum stem branch-vertex count by filtering all (n-1)-edge subsets
    /// for spanning trees, in lexicographic subset order. Returns the count,
    /// the first optimal tree in that order, and the number of spanning
    /// trees seen. Intended for small graphs.
    pub fn naive_min_branch(g: &Graph) -> Result<(usize, TreeSubgraph, u64)> {
        require_connected_nonempty(g)?;
        let host = Arc::new(g.clone());
        let n = g.order();
        if n == 1 {
            return Ok((0, TreeSubgraph::singleton(host, 0)?, 1));
        }
        let edges = g.edges();
        let m = edges.len();
        let need = n - 1;
        if m < need {
            return Err(Error::Disconnected);
        }
        let mut idx: Vec<usize> = (0..need).collect();
        let mut best: Option<(usize, Vec<Edge>)> = None;
        let mut trees = 0u64;
        loop {
            let subset: Vec<Edge> = idx.iter().map(|&i| edges[i]).collect();
            if is_spanning_tree(n, &subset) {
                trees += 1;
                let tree = TreeSubgraph::from_edges(host.clone(), subset.clone())?;
                let count = stem_profile(&tree).branch_count();
                if best.as_ref().map(|(c, _)| count < *c).unwrap_or(true) {
                    best = Some((count, subset));
                }
            }
            // Next combination in lexicographic order.
            let mut advanced = false;
            for i in (0..need).rev() {
                if idx[i] != i + m - need {
                    idx[i] += 1;
                    for j in (i + 1)..need {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        let (count, subset) = best
            .ok_or_else(|| Error::Internal("connected graph without spanning tree".into()))?;
        let tree = TreeSubgraph::from_edges(host, subset)?;
        Ok((count, tree, trees))
    }

    fn is_spanning_tree(n: usize, subset: &[Edge]) -> bool {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in subset {
            let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true // acyclic with n-1 edges means connected and spanning
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharp::{build_sharp_graph, SharpFamilyParams};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn cycle_has_path_stem() {
        let g = Graph::cycle(6);
        let r = min_branch_spanning_tree(&g, &lim()).unwrap();
        assert_eq!(r.min_stem_branch_vertices, 0);
        assert!(r.exhausted);
        assert!(r.optimal_tree.is_spanning());
    }

    #[test]
    fn path_is_its_own_witness() {
        let g = Graph::path(9);
        match has_spanning_tree_with_budget(&g, 0, &lim()).unwrap() {
            BudgetOutcome::Yes(t) => {
                assert!(t.is_spanning());
                assert_eq!(stem_profile(&t).branch_count(), 0);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn budget_monotone_in_k() {
        let g = Graph::star(5);
        let mut seen_yes = false;
        for k in 0..=3 {
            match has_spanning_tree_with_budget(&g, k, &lim()).unwrap() {
                BudgetOutcome::Yes(_) => seen_yes = true,
                BudgetOutcome::No => {
                    assert!(!seen_yes, "budget feasibility must be monotone in k")
                }
                BudgetOutcome::Inconclusive => panic!("tiny instance hit the limit"),
            }
        }
        assert!(seen_yes);
    }

    #[test]
    fn agrees_with_reference_on_small_graphs() {
        let graphs = vec![
            Graph::cycle(5),
            Graph::complete(5),
            Graph::star(5),
            Graph::path(6),
            Graph::new(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 4), (4, 5), (2, 5)]).unwrap(),
        ];
        for g in graphs {
            let bb = min_branch_spanning_tree(&g, &lim()).unwrap();
            let (naive_count, naive_tree, _) = reference::naive_min_branch(&g).unwrap();
            assert!(bb.exhausted);
            assert_eq!(bb.min_stem_branch_vertices, naive_count);
            // Both routes break ties toward the lexicographically smallest
            // edge set, so the trees agree exactly.
            assert_eq!(bb.optimal_tree.edges(), naive_tree.edges());
        }
    }

    #[test]
    fn smallest_family_member_is_infeasible_at_zero() {
        let s = build_sharp_graph(SharpFamilyParams::new(1, 0).unwrap());
        let r = min_branch_spanning_tree(&s.graph, &lim()).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.min_stem_branch_vertices, 1);
        assert!(matches!(
            has_spanning_tree_with_budget(&s.graph, 0, &lim()).unwrap(),
            BudgetOutcome::No
        ));
    }

    #[test]
    fn family_minimum_is_one_for_positive_budgets() {
        // For k >= 1 a star hub tree concentrates all branching at one hub
        // vertex, so the family admits a spanning tree with exactly one
        // stem branch vertex. Both routes agree, exhaustively.
        for (m, k) in [(1, 1), (2, 1), (1, 2)] {
            let s = build_sharp_graph(SharpFamilyParams::new(m, k).unwrap());
            let bb = min_branch_spanning_tree(&s.graph, &lim()).unwrap();
            let (naive, _, _) = reference::naive_min_branch(&s.graph).unwrap();
            assert!(bb.exhausted);
            assert_eq!(bb.min_stem_branch_vertices, 1, "m={m} k={k}");
            assert_eq!(naive, 1, "m={m} k={k}");
            assert!(matches!(
                has_spanning_tree_with_budget(&s.graph, k, &lim()).unwrap(),
                BudgetOutcome::Yes(_)
            ));
        }
    }

    #[test]
    fn order_twelve_members_infeasible_at_zero() {
        for (m, k) in [(1usize, 1usize), (2, 0)] {
            let s = build_sharp_graph(SharpFamilyParams::new(m, k).unwrap());
            assert!(matches!(
                has_spanning_tree_with_budget(&s.graph, 0, &lim()).unwrap(),
                BudgetOutcome::No
            ));
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            min_branch_spanning_tree(&g, &lim()),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn budget_limit_is_inconclusive_not_false() {
        // Infeasible at budget 0, but a tiny node cap cannot prove it.
        let s = build_sharp_graph(SharpFamilyParams::new(2, 1).unwrap());
        let r =
            has_spanning_tree_with_budget(&s.graph, 0, &Limits::with_search_nodes(100)).unwrap();
        assert!(matches!(r, BudgetOutcome::Inconclusive));
    }

    #[test]
    fn limit_reports_not_exhausted() {
        // A member with minimum 1, so the search cannot stop early on a
        // path-stem tree; a tiny node budget must be reported.
        let s = build_sharp_graph(SharpFamilyParams::new(2, 1).unwrap());
        match min_branch_spanning_tree(&s.graph, &Limits::with_search_nodes(200)) {
            Ok(r) => assert!(!r.exhausted),
            Err(Error::WorkLimitExceeded { .. }) => {}
            Err(e) => panic!("unexpected error: {e}"),
        }
    }
}
