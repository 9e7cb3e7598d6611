//! Local search over tree subgraphs with a lexicographic objective.
//!
//! The solver keeps a tree whose stem stays within the branch-vertex budget
//! and repeatedly applies the best strictly-improving exchange from a fixed
//! catalog (grow the tree; rewire a leaf around a degree-2 stem vertex via a
//! clique edge; merge adjacent stem leaves; reroute the leaf children of a
//! stem leaf; absorb a connecting path; a distance-4 rewiring). When no move
//! applies and the tree is not spanning, the blocked configuration itself
//! yields a small vertex set whose pairwise distances are large and whose
//! degree sum is low — a certificate that the degree-sum hypothesis fails on
//! this input. Every candidate move is validated by applying it, so
//! everything the catalog emits preserves the state invariants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Edge, Graph};
use crate::limits::Limits;
use crate::tree::{stem_profile, tree_metrics, Objective, StemProfile, TreeSubgraph};

/// The move catalog, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveKind {
    /// Attach an outside vertex without creating a new stem branch vertex.
    Extend,
    /// Attach an outside vertex at a leaf whose parent becomes a new stem
    /// branch vertex; needs budget headroom.
    LeafAttach,
    /// Rewire around a degree-2 stem vertex using a clique edge at it, then
    /// extend (single degree-2 neighborhood shape).
    ClawExchangeA,
    /// Same, for the shape where the degree-2 stem vertex has a degree-2
    /// stem neighbor.
    ClawExchangeB,
    /// Join two stem leaves adjacent in the host and break the cycle.
    StemleafMerge,
    /// Move every leaf child of a stem leaf to other stem vertices, turning
    /// the stem leaf into a leaf.
    Reroute,
    /// Absorb a path that connects certificate candidates while avoiding
    /// the stem.
    PathAbsorb,
    /// Rewire a distance-4 connection between certificate candidates.
    Dist5Exchange,
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::Extend => "EXTEND",
            MoveKind::LeafAttach => "LEAF_ATTACH",
            MoveKind::ClawExchangeA => "CLAW_EXCHANGE_A",
            MoveKind::ClawExchangeB => "CLAW_EXCHANGE_B",
            MoveKind::StemleafMerge => "STEMLEAF_MERGE",
            MoveKind::Reroute => "REROUTE",
            MoveKind::PathAbsorb => "PATH_ABSORB",
            MoveKind::Dist5Exchange => "DIST5_EXCHANGE",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated, strictly improving tree exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub removed_edges: Vec<Edge>,
    pub added_edges: Vec<Edge>,
    pub description: String,
    /// Objective of the tree this move produces.
    pub resulting_objective: Objective,
}

/// A tree plus its cached profile and budget.
#[derive(Debug, Clone)]
pub struct SearchState {
    tree: TreeSubgraph,
    profile: StemProfile,
    budget: usize,
    objective: Objective,
    claw_free: bool,
}

impl SearchState {
    pub fn new(tree: TreeSubgraph, budget: usize) -> Result<SearchState> {
        let profile = stem_profile(&tree);
        if profile.branch_count() > budget {
            return Err(Error::InvalidParameter(format!(
                "tree stem has {} branch vertices, budget is {budget}",
                profile.branch_count()
            )));
        }
        let claw_free = tree.host().is_claw_free();
        let objective = Objective {
            order: profile.tree_order,
            stem_leaf_count: profile.stem_leaf_count(),
            stem_order: profile.stem_order(),
        };
        Ok(SearchState { tree, profile, budget, objective, claw_free })
    }

    pub fn tree(&self) -> &TreeSubgraph {
        &self.tree
    }

    pub fn profile(&self) -> &StemProfile {
        &self.profile
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Applies a validated move, producing the next state.
    pub fn apply(&self, mv: &Move) -> Result<SearchState> {
        let tree = self.tree.edited(&mv.removed_edges, &mv.added_edges)?;
        SearchState::new(tree, self.budget)
    }
}

/// Certificate kinds: a (k+3)-set at pairwise distance >= 4, or a pair at
/// distance >= 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    T17Witness,
    T18Witness,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::T17Witness => "T1.7-witness",
            CertificateKind::T18Witness => "T1.8-witness",
        }
    }

    pub fn parse(s: &str) -> Result<CertificateKind> {
        match s.trim() {
            "T1.7-witness" => Ok(CertificateKind::T17Witness),
            "T1.8-witness" => Ok(CertificateKind::T18Witness),
            other => Err(Error::InvalidParameter(format!("unknown certificate kind `{other}`"))),
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A vertex set witnessing that a degree-sum hypothesis fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub vertices: Vec<usize>,
    pub distances_ok: bool,
    pub degree_sum: usize,
    /// Strict violation threshold the degree sum stays at or below:
    /// |G| - 2k - 6 for the set witness, |G| - 3k - 7 for the pair witness.
    pub bound: i64,
}

/// Why certificate extraction declined to produce a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionFailure {
    pub reason: String,
    /// True when the failure indicates a broken internal invariant rather
    /// than an honestly inconclusive state.
    pub internal: bool,
}

impl fmt::Display for ExtractionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)
    }
}

/// Which certificate to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionTarget {
    T17,
    T18,
}

/// Final outcome of a solver run.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// Spanning tree within the branch budget.
    Feasible(TreeSubgraph),
    /// The hypothesis fails; here is the witness.
    Certificate(Certificate),
    /// No move applies and no certificate could be extracted.
    Stuck { state: SearchState, reason: String },
}

/// Solver run result with its move trace.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub moves_applied: Vec<String>,
    pub iterations: u64,
}

// ---------------------------------------------------------------------------
// Move generation
// ---------------------------------------------------------------------------

/// Per-state context shared by the generators.
struct Ctx<'a> {
    g: &'a Graph,
    state: &'a SearchState,
    outside: Vec<usize>,
    /// leaf -> its unique tree neighbor
    leaf_parent: BTreeMap<usize, usize>,
    /// outside vertices adjacent to at least one leaf
    attachers: Vec<usize>,
    /// stem leaf -> smallest leaf child whose host neighborhood stays
    /// within Leaf(T) plus that stem leaf
    private_child: BTreeMap<usize, usize>,
}

impl<'a> Ctx<'a> {
    fn new(state: &'a SearchState) -> Ctx<'a> {
        let g = state.tree.host().as_ref();
        let tree = &state.tree;
        let profile = &state.profile;
        let outside: Vec<usize> = (0..g.order()).filter(|v| !tree.contains(*v)).collect();
        let mut leaf_parent = BTreeMap::new();
        for &l in &profile.leaves {
            let nb = tree.tree_neighbors(l);
            debug_assert_eq!(nb.len(), 1);
            leaf_parent.insert(l, nb[0]);
        }
        let attachers: Vec<usize> = outside
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().any(|w| profile.leaves.contains(w)))
            .collect();
        let mut private_child = BTreeMap::new();
        for &x in &profile.stem_leaves {
            let mut children: Vec<usize> = leaf_parent
                .iter()
                .filter(|&(_, &p)| p == x)
                .map(|(&c, _)| c)
                .collect();
            children.sort_unstable();
            for c in children {
                let private = g
                    .neighbors(c)
                    .iter()
                    .all(|&w| w == x || profile.leaves.contains(&w));
                if private {
                    private_child.insert(x, c);
                    break;
                }
            }
        }
        Ctx { g, state, outside, leaf_parent, attachers, private_child }
    }

    fn profile(&self) -> &StemProfile {
        &self.state.profile
    }

    fn tree(&self) -> &TreeSubgraph {
        &self.state.tree
    }

    /// The two stem neighbors of a degree-2 stem vertex, ascending.
    fn stem_neighbors(&self, w: usize) -> Vec<usize> {
        self.tree()
            .tree_neighbors(w)
            .into_iter()
            .filter(|x| self.profile().stem_vertices.contains(x))
            .collect()
    }
}

/// An unvalidated candidate, described by the full target edge set.
struct Candidate {
    kind: MoveKind,
    target: BTreeSet<Edge>,
    description: String,
}

fn validate(state: &SearchState, cand: Candidate) -> Option<Move> {
    let tree = &state.tree;
    let next = TreeSubgraph::from_edges(tree.host().clone(), cand.target.iter().copied()).ok()?;
    // Moves never drop vertices.
    if !tree.vertices().iter().all(|v| next.contains(*v)) {
        return None;
    }
    let profile = stem_profile(&next);
    if profile.branch_count() > state.budget {
        return None;
    }
    let objective = tree_metrics(&next);
    if !objective.improves(&state.objective) {
        return None;
    }
    let removed: Vec<Edge> = tree.edges().difference(&cand.target).copied().collect();
    let added: Vec<Edge> = cand.target.difference(tree.edges()).copied().collect();
    if removed.is_empty() && added.is_empty() {
        return None;
    }
    Some(Move {
        kind: cand.kind,
        removed_edges: removed,
        added_edges: added,
        description: cand.description,
        resulting_objective: objective,
    })
}

fn target_with(tree: &TreeSubgraph, remove: &[Edge], add: &[Edge]) -> BTreeSet<Edge> {
    let mut t = tree.edges().clone();
    for e in remove {
        t.remove(e);
    }
    for e in add {
        t.insert(*e);
    }
    t
}

fn gen_attach(ctx: &Ctx, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    for &v in &ctx.outside {
        for &w in ctx.g.neighbors(v) {
            if !ctx.tree().contains(w) {
                continue;
            }
            // Attaching at a leaf pulls it into the stem; the parent picks
            // up a stem edge and may turn into a branch vertex.
            let creates_branch = profile.leaves.contains(&w)
                && ctx
                    .leaf_parent
                    .get(&w)
                    .is_some_and(|p| profile.degree_two_stem.contains(p));
            let kind = if creates_branch { MoveKind::LeafAttach } else { MoveKind::Extend };
            out.push(Candidate {
                kind,
                target: target_with(ctx.tree(), &[], &[Edge::new(v, w)]),
                description: format!("attach outside vertex {v} at {w}"),
            });
        }
    }
}

fn gen_claw_exchanges(ctx: &Ctx, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    for (&u, &w) in &ctx.leaf_parent {
        if !profile.degree_two_stem.contains(&w) {
            continue;
        }
        let Some(&v) = ctx
            .attachers
            .iter()
            .find(|&&v| ctx.g.has_edge(v, u))
        else {
            continue;
        };
        let sn = ctx.stem_neighbors(w);
        if sn.len() != 2 {
            continue;
        }
        let uv = Edge::new(u, v);
        // Shape A: both orientations of the degree-2 vertex's neighborhood.
        for &(y, t) in &[(sn[0], sn[1]), (sn[1], sn[0])] {
            if ctx.g.has_edge(u, y) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeA,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(w, u)],
                        &[Edge::new(u, y), uv],
                    ),
                    description: format!("rehang leaf {u} from {w} onto {y}, extend to {v}"),
                });
            }
            if ctx.g.has_edge(u, t) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeA,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(t, w)],
                        &[Edge::new(u, t), uv],
                    ),
                    description: format!("rehang {t} from {w} onto leaf {u}, extend to {v}"),
                });
            }
            if ctx.g.has_edge(y, t) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeA,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(t, w)],
                        &[Edge::new(t, y), uv],
                    ),
                    description: format!("rehang {t} from {w} onto {y}, extend to {v}"),
                });
            }
        }
        // Shape B: a degree-2 stem neighbor w2; y is the other neighbor.
        for &(w2, y) in &[(sn[0], sn[1]), (sn[1], sn[0])] {
            if !profile.degree_two_stem.contains(&w2) {
                continue;
            }
            if ctx.g.has_edge(u, y) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeB,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(y, w)],
                        &[Edge::new(u, y), uv],
                    ),
                    description: format!("rehang {y} from {w} onto leaf {u}, extend to {v}"),
                });
            }
            if ctx.g.has_edge(u, w2) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeB,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(w, w2)],
                        &[Edge::new(u, w2), uv],
                    ),
                    description: format!("rehang {w2} from {w} onto leaf {u}, extend to {v}"),
                });
            }
            if ctx.g.has_edge(y, w2) {
                out.push(Candidate {
                    kind: MoveKind::ClawExchangeB,
                    target: target_with(
                        ctx.tree(),
                        &[Edge::new(w, w2)],
                        &[Edge::new(y, w2), uv],
                    ),
                    description: format!("rehang {w2} from {w} onto {y}, extend to {v}"),
                });
            }
        }
    }
}

fn gen_stemleaf_merge(ctx: &Ctx, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    let xs: Vec<usize> = profile.stem_leaves.iter().copied().collect();
    for (i, &xi) in xs.iter().enumerate() {
        for &xj in &xs[i + 1..] {
            if !ctx.g.has_edge(xi, xj) {
                continue;
            }
            let joining = Edge::new(xi, xj);
            if ctx.tree().edges().contains(&joining) {
                continue;
            }
            let Ok(path) = ctx.tree().path_between(xi, xj) else { continue };
            let path_edges: Vec<Edge> =
                path.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
            // Prefer cutting a stem edge at a branch vertex, but let
            // validation judge every cycle edge.
            let mut cuts: Vec<Edge> = path_edges
                .iter()
                .copied()
                .filter(|e| {
                    profile.stem_vertices.contains(&e.u)
                        && profile.stem_vertices.contains(&e.v)
                        && (profile.stem_branch_vertices.contains(&e.u)
                            || profile.stem_branch_vertices.contains(&e.v))
                })
                .collect();
            for e in &path_edges {
                if !cuts.contains(e) {
                    cuts.push(*e);
                }
            }
            for cut in cuts {
                out.push(Candidate {
                    kind: MoveKind::StemleafMerge,
                    target: target_with(ctx.tree(), &[cut], &[joining]),
                    description: format!(
                        "join stem leaves {xi} and {xj}, cut ({},{})",
                        cut.u, cut.v
                    ),
                });
            }
        }
    }
}

fn gen_reroute(ctx: &Ctx, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    for &x in &profile.stem_leaves {
        let children: Vec<usize> = ctx
            .leaf_parent
            .iter()
            .filter(|&(_, &p)| p == x)
            .map(|(&c, _)| c)
            .collect();
        if children.is_empty() {
            continue;
        }
        let mut remove = Vec::new();
        let mut add = Vec::new();
        let mut ok = true;
        for &c in &children {
            let dest = ctx
                .g
                .neighbors(c)
                .iter()
                .copied()
                .find(|z| *z != x && profile.stem_vertices.contains(z));
            match dest {
                Some(z) => {
                    remove.push(Edge::new(c, x));
                    add.push(Edge::new(c, z));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(Candidate {
                kind: MoveKind::Reroute,
                target: target_with(ctx.tree(), &remove, &add),
                description: format!("reroute the leaf children of stem leaf {x}"),
            });
        }
    }
}

/// BFS path inside an allowed vertex set, deterministic by vertex order.
fn allowed_path(
    g: &Graph,
    from: usize,
    to: usize,
    allowed: &dyn Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    if !allowed(from) || !allowed(to) {
        return None;
    }
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seen: BTreeSet<usize> = [from].into_iter().collect();
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(v) {
            if allowed(w) && seen.insert(w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// One cycle of an edge set, if any, as an edge list.
fn find_cycle(n: usize, edges: &BTreeSet<Edge>) -> Option<Vec<Edge>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut color = vec![0u8; n]; // 0 unseen, 1 active, 2 done
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    for &start in adj.keys() {
        if color[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            if color[v] == 2 {
                continue;
            }
            color[v] = 2;
            for &w in adj.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
                if w == from {
                    continue;
                }
                if color[w] == 0 {
                    parent.insert(w, v);
                    color[w] = 1;
                    stack.push((w, v));
                } else {
                    // Back edge: walk both endpoints up to their meeting
                    // point through the parent map.
                    let mut path_v = vec![v];
                    let mut cur = v;
                    while let Some(&p) = parent.get(&cur) {
                        path_v.push(p);
                        cur = p;
                    }
                    let mut path_w = vec![w];
                    cur = w;
                    while let Some(&p) = parent.get(&cur) {
                        path_w.push(p);
                        cur = p;
                    }
                    let meet = *path_v.iter().find(|x| path_w.contains(x))?;
                    let mut cyc = Vec::new();
                    for win in path_v[..=path_v.iter().position(|&x| x == meet)?].windows(2) {
                        cyc.push(Edge::new(win[0], win[1]));
                    }
                    for win in path_w[..=path_w.iter().position(|&x| x == meet)?].windows(2) {
                        cyc.push(Edge::new(win[0], win[1]));
                    }
                    cyc.push(Edge::new(v, w));
                    return Some(cyc);
                }
            }
        }
    }
    None
}

/// Absorbs a path into the tree: adds the path edges and releases the stem
/// links of the leaves the path runs through (anchor edges stay). Emits the
/// direct result when it is a tree, or every single-edge cycle break when
/// the result has one extra edge.
fn absorb_candidates(
    ctx: &Ctx,
    path: &[usize],
    kept: &BTreeSet<Edge>,
    kind: MoveKind,
    description: String,
    out: &mut Vec<Candidate>,
) {
    let profile = ctx.profile();
    let tree = ctx.tree();
    let mut target = tree.edges().clone();
    for w in path {
        if let Some(&p) = ctx.leaf_parent.get(w) {
            let link = Edge::new(*w, p);
            if profile.stem_vertices.contains(&p) && !kept.contains(&link) {
                target.remove(&link);
            }
        }
    }
    for w in path.windows(2) {
        target.insert(Edge::new(w[0], w[1]));
    }
    let mut vertices: BTreeSet<usize> = tree.vertices().clone();
    vertices.extend(path.iter().copied());
    if target.len() + 1 == vertices.len() {
        out.push(Candidate { kind, target, description });
        return;
    }
    if target.len() != vertices.len() {
        return; // construction went sideways; nothing salvageable here
    }
    let Some(cycle) = find_cycle(ctx.g.order(), &target) else { return };
    let mut cuts: Vec<Edge> = cycle
        .iter()
        .copied()
        .filter(|e| {
            tree.edges().contains(e)
                && profile.stem_vertices.contains(&e.u)
                && profile.stem_vertices.contains(&e.v)
                && (profile.stem_branch_vertices.contains(&e.u)
                    || profile.stem_branch_vertices.contains(&e.v))
        })
        .collect();
    cuts.sort();
    let mut rest: Vec<Edge> = cycle.iter().copied().filter(|e| !cuts.contains(e)).collect();
    rest.sort();
    rest.dedup();
    cuts.extend(rest);
    for cut in cuts {
        let mut t = target.clone();
        if !t.remove(&cut) {
            continue;
        }
        out.push(Candidate {
            kind,
            target: t,
            description: format!("{description}, cut ({},{})", cut.u, cut.v),
        });
    }
}

fn gen_path_absorb(ctx: &Ctx, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    let leaves = &profile.leaves;
    let in_tree = |v: usize| ctx.tree().contains(v);

    // Outside-to-private-leaf paths.
    for &v in &ctx.attachers {
        for (&x, &y) in &ctx.private_child {
            let allowed = |w: usize| -> bool { !in_tree(w) || leaves.contains(&w) || w == x };
            let Some(path) = allowed_path(ctx.g, v, y, &allowed) else { continue };
            // If the path runs through the stem leaf, only the segment up
            // to it is absorbed; the leaf keeps its anchor edge.
            let path = match path.iter().position(|&p| p == x) {
                Some(pos) => path[..=pos].to_vec(),
                None => path,
            };
            let kept: BTreeSet<Edge> = [Edge::new(y, x)].into_iter().collect();
            absorb_candidates(
                ctx,
                &path,
                &kept,
                MoveKind::PathAbsorb,
                format!("absorb path from outside vertex {v} toward stem leaf {x}"),
                out,
            );
        }
    }

    // Private-leaf-to-private-leaf paths.
    let privates: Vec<(usize, usize)> =
        ctx.private_child.iter().map(|(&x, &y)| (x, y)).collect();
    for (i, &(xi, yi)) in privates.iter().enumerate() {
        for &(xj, yj) in &privates[i + 1..] {
            let allowed =
                |w: usize| -> bool { !in_tree(w) || leaves.contains(&w) || w == xi || w == xj };
            let Some(path) = allowed_path(ctx.g, yi, yj, &allowed) else { continue };
            let kept: BTreeSet<Edge> =
                [Edge::new(yi, xi), Edge::new(yj, xj)].into_iter().collect();
            absorb_candidates(
                ctx,
                &path,
                &kept,
                MoveKind::PathAbsorb,
                format!("absorb path between leaves {yi} and {yj}"),
                out,
            );
        }
    }
}

fn gen_dist5(ctx: &Ctx, dm: &DistanceMatrix, out: &mut Vec<Candidate>) {
    let profile = ctx.profile();
    let tree = ctx.tree();
    for &v in &ctx.attachers {
        for (&x, &y) in &ctx.private_child {
            if dm.get(v, y) != Some(4) {
                continue;
            }
            // Walk the distance-4 connection v - u2 - s - z - y with s in
            // the stem away from x.
            for &u2 in ctx.g.neighbors(v) {
                if dm.get(u2, y) != Some(3) || !profile.leaves.contains(&u2) {
                    continue;
                }
                let pu = ctx.leaf_parent[&u2];
                for &s in ctx.g.neighbors(u2) {
                    if dm.get(s, y) != Some(2)
                        || s == x
                        || !profile.stem_vertices.contains(&s)
                    {
                        continue;
                    }
                    // Rehang the leaf onto s first.
                    let rehang_remove = if pu == s { vec![] } else { vec![Edge::new(u2, pu)] };
                    let rehang_add = if pu == s { vec![] } else { vec![Edge::new(u2, s)] };
                    let base = target_with(tree, &rehang_remove, &rehang_add);
                    let Ok(star) = TreeSubgraph::from_edges(tree.host().clone(), base.iter().copied())
                    else {
                        continue;
                    };
                    let star_profile = stem_profile(&star);
                    let sn: Vec<usize> = star
                        .tree_neighbors(s)
                        .into_iter()
                        .filter(|q| star_profile.stem_vertices.contains(q))
                        .collect();
                    if sn.len() != 2 {
                        continue;
                    }
                    let uv = Edge::new(u2, v);
                    for &(yy, tt) in &[(sn[0], sn[1]), (sn[1], sn[0])] {
                        if ctx.g.has_edge(u2, yy) {
                            let mut t = base.clone();
                            t.remove(&Edge::new(yy, s));
                            t.insert(Edge::new(u2, yy));
                            t.insert(uv);
                            out.push(Candidate {
                                kind: MoveKind::Dist5Exchange,
                                target: t,
                                description: format!(
                                    "rewire around stem vertex {s} via leaf {u2}, extend to {v}"
                                ),
                            });
                        }
                        if ctx.g.has_edge(yy, tt) {
                            // Three-edge variant: also reconnect y through
                            // its common neighbor z with s.
                            for &z in ctx.g.neighbors(s) {
                                if !ctx.g.has_edge(z, y) || !tree.contains(z) || z == s {
                                    continue;
                                }
                                let zp = if let Some(&p) = ctx.leaf_parent.get(&z) {
                                    Some(Edge::new(z, p))
                                } else if z == x {
                                    ctx.stem_neighbors(x).first().map(|&p| Edge::new(x, p))
                                } else {
                                    None
                                };
                                let Some(zp) = zp else { continue };
                                let mut t = base.clone();
                                t.remove(&Edge::new(tt, s));
                                t.remove(&Edge::new(yy, s));
                                t.remove(&zp);
                                t.insert(Edge::new(tt, yy));
                                t.insert(Edge::new(s, z));
                                t.insert(Edge::new(z, y));
                                t.insert(uv);
                                out.push(Candidate {
                                    kind: MoveKind::Dist5Exchange,
                                    target: t,
                                    description: format!(
                                        "rewire around stem vertex {s} via {z}, extend to {v}"
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Generates, validates and orders all applicable moves for a state.
///
/// Every returned move has been applied to a copy of the state: the result
/// is a valid tree within budget whose objective strictly improves. Moves
/// are sorted by resulting objective, then kind, then edge lists.
pub fn find_moves(state: &SearchState) -> Vec<Move> {
    let ctx = Ctx::new(state);
    let mut cands = Vec::new();
    gen_attach(&ctx, &mut cands);
    if state.claw_free {
        gen_claw_exchanges(&ctx, &mut cands);
    }
    gen_stemleaf_merge(&ctx, &mut cands);
    gen_reroute(&ctx, &mut cands);
    gen_path_absorb(&ctx, &mut cands);
    if state.claw_free {
        let dm = ctx.g.all_pairs_distances();
        gen_dist5(&ctx, &dm, &mut cands);
    }
    let mut moves: Vec<Move> = cands
        .into_iter()
        .filter_map(|c| validate(state, c))
        .collect();
    moves.sort_by(|a, b| {
        b.resulting_objective
            .cmp(&a.resulting_objective)
            .then(a.kind.cmp(&b.kind))
            .then(a.removed_edges.cmp(&b.removed_edges))
            .then(a.added_edges.cmp(&b.added_edges))
    });
    let mut seen: BTreeSet<(Vec<Edge>, Vec<Edge>)> = BTreeSet::new();
    moves.retain(|m| seen.insert((m.removed_edges.clone(), m.added_edges.clone())));
    moves
}

// ---------------------------------------------------------------------------
// Certificate extraction and verification
// ---------------------------------------------------------------------------

fn smallest_attacher(g: &Graph, state: &SearchState) -> Option<usize> {
    let profile = &state.profile;
    (0..g.order())
        .filter(|v| !state.tree.contains(*v))
        .find(|&v| g.neighbors(v).iter().any(|w| profile.leaves.contains(w)))
}

/// Extracts a hypothesis-violation witness from a move-free, non-spanning
/// state: the smallest outside vertex attached to a leaf, together with one
/// private leaf per stem leaf. All certificate invariants are re-verified
/// before returning; any miss produces a structured failure instead.
pub fn extract_certificate(
    state: &SearchState,
    target: ExtractionTarget,
) -> std::result::Result<Certificate, ExtractionFailure> {
    let g = state.tree.host().clone();
    if state.tree.is_spanning() {
        return Err(ExtractionFailure {
            reason: "tree is spanning; there is nothing to witness".into(),
            internal: true,
        });
    }
    let Some(v) = smallest_attacher(&g, state) else {
        return Err(ExtractionFailure {
            reason: "tree not extendable but not spanning".into(),
            internal: true,
        });
    };
    let ctx = Ctx::new(state);
    let profile = &state.profile;
    let k = state.budget;
    let n = g.order() as i64;
    let dm = g.all_pairs_distances();

    let xs: Vec<usize> = profile.stem_leaves.iter().copied().collect();
    match target {
        ExtractionTarget::T17 => {
            if xs.len() < k + 2 {
                return Err(ExtractionFailure {
                    reason: format!(
                        "stem has {} leaves, need {} for a set witness",
                        xs.len(),
                        k + 2
                    ),
                    internal: false,
                });
            }
            let mut set = vec![v];
            for &x in xs.iter().take(k + 2) {
                match ctx.private_child.get(&x) {
                    Some(&y) => set.push(y),
                    None => {
                        return Err(ExtractionFailure {
                            reason: format!("stem leaf {x} has no private leaf child"),
                            internal: false,
                        })
                    }
                }
            }
            set.sort_unstable();
            set.dedup();
            if set.len() != k + 3 {
                return Err(ExtractionFailure {
                    reason: "witness vertices are not distinct".into(),
                    internal: false,
                });
            }
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    if !dm.at_least(set[i], set[j], 4) {
                        return Err(ExtractionFailure {
                            reason: format!(
                                "witness pair ({},{}) is at distance {:?} < 4",
                                set[i],
                                set[j],
                                dm.get(set[i], set[j])
                            ),
                            internal: false,
                        });
                    }
                }
            }
            let degree_sum: usize = set.iter().map(|&w| g.neighbors(w).len()).sum();
            let bound = n - 2 * k as i64 - 6;
            if (degree_sum as i64) > bound {
                return Err(ExtractionFailure {
                    reason: format!("witness degree sum {degree_sum} exceeds {bound}"),
                    internal: false,
                });
            }
            Ok(Certificate {
                kind: CertificateKind::T17Witness,
                vertices: set,
                distances_ok: true,
                degree_sum,
                bound,
            })
        }
        ExtractionTarget::T18 => {
            let bound = n - 3 * k as i64 - 7;
            let mut last_reason = "no stem leaf has a private leaf child".to_string();
            for &x in &xs {
                let Some(&y) = ctx.private_child.get(&x) else { continue };
                if !dm.at_least(v, y, 5) {
                    last_reason = format!(
                        "pair ({v},{y}) is at distance {:?} < 5",
                        dm.get(v, y)
                    );
                    continue;
                }
                let degree_sum = g.neighbors(v).len() + g.neighbors(y).len();
                if (degree_sum as i64) > bound {
                    last_reason = format!("pair degree sum {degree_sum} exceeds {bound}");
                    continue;
                }
                let mut set = vec![v, y];
                set.sort_unstable();
                return Ok(Certificate {
                    kind: CertificateKind::T18Witness,
                    vertices: set,
                    distances_ok: true,
                    degree_sum,
                    bound,
                });
            }
            Err(ExtractionFailure { reason: last_reason, internal: false })
        }
    }
}

/// Re-checks a certificate from scratch against the graph: set size,
/// distinctness, pairwise distances and the degree-sum threshold.
pub fn verify_certificate(g: &Graph, cert: &Certificate, k: usize) -> (bool, Vec<String>) {
    let mut diags = Vec::new();
    let n = g.order() as i64;
    let (want_size, want_dist, bound) = match cert.kind {
        CertificateKind::T17Witness => (k + 3, 4, n - 2 * k as i64 - 6),
        CertificateKind::T18Witness => (2, 5, n - 3 * k as i64 - 7),
    };
    if cert.vertices.len() != want_size {
        diags.push(format!(
            "witness has {} vertices, expected {want_size}",
            cert.vertices.len()
        ));
    }
    let mut sorted = cert.vertices.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cert.vertices.len() {
        diags.push("witness vertices are not distinct".into());
    }
    if let Some(&v) = cert.vertices.iter().find(|&&v| v >= g.order()) {
        diags.push(format!("vertex {v} out of range"));
        return (false, diags);
    }
    let dm = g.all_pairs_distances();
    for i in 0..cert.vertices.len() {
        for j in (i + 1)..cert.vertices.len() {
            let (a, b) = (cert.vertices[i], cert.vertices[j]);
            if !dm.at_least(a, b, want_dist) {
                diags.push(format!(
                    "pair ({a},{b}) is at distance {:?} < {want_dist}",
                    dm.get(a, b)
                ));
            }
        }
    }
    let degree_sum: usize = cert.vertices.iter().map(|&v| g.neighbors(v).len()).sum();
    if degree_sum != cert.degree_sum {
        diags.push(format!(
            "stored degree sum {} differs from recomputed {degree_sum}",
            cert.degree_sum
        ));
    }
    if cert.bound != bound {
        diags.push(format!("stored bound {} differs from recomputed {bound}", cert.bound));
    }
    if (degree_sum as i64) > bound {
        diags.push(format!("degree sum {degree_sum} exceeds threshold {bound}"));
    }
    (diags.is_empty(), diags)
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

/// Longest path found by a double BFS sweep; its stem is a path, so it fits
/// any budget.
fn initial_path_tree(host: Arc<Graph>) -> Result<TreeSubgraph> {
    let n = host.order();
    if n == 1 {
        return TreeSubgraph::singleton(host, 0);
    }
    fn bfs(g: &Graph, src: usize) -> (Vec<Option<u32>>, Vec<usize>) {
        let mut dist = vec![None; g.order()];
        let mut parent = vec![usize::MAX; g.order()];
        let mut q = VecDeque::from([src]);
        dist[src] = Some(0);
        while let Some(v) = q.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    parent[w] = v;
                    q.push_back(w);
                }
            }
        }
        (dist, parent)
    }
    fn farthest(dist: &[Option<u32>]) -> usize {
        let mut best = 0;
        let mut best_d = 0;
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                if *d > best_d {
                    best_d = *d;
                    best = v;
                }
            }
        }
        best
    }
    let (d0, _) = bfs(&host, 0);
    let a = farthest(&d0);
    let (da, pa) = bfs(&host, a);
    let b = farthest(&da);
    if a == b {
        // Single reachable vertex; fall back to any incident edge.
        let e = host.edges()[0];
        return TreeSubgraph::from_edges(host.clone(), vec![e]);
    }
    let mut edges = Vec::new();
    let mut cur = b;
    while cur != a {
        let p = pa[cur];
        edges.push(Edge::new(cur, p));
        cur = p;
    }
    TreeSubgraph::from_edges(host, edges)
}

/// Runs the local search at budget `k`: grows and rewires a tree until it
/// spans (FEASIBLE) or no move applies; a move-free non-spanning state on a
/// claw-free graph is turned into a certificate when one verifies.
pub fn solve(g: &Graph, k: usize, limits: &Limits) -> Result<SolveReport> {
    if g.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let host = Arc::new(g.clone());
    let tree = initial_path_tree(host)?;
    let mut state = SearchState::new(tree, k)?;
    let mut moves_applied = Vec::new();
    let mut iterations = 0u64;
    loop {
        if state.tree.is_spanning() {
            return Ok(SolveReport {
                outcome: SolveOutcome::Feasible(state.tree.clone()),
                moves_applied,
                iterations,
            });
        }
        if iterations >= limits.max_iterations {
            return Ok(SolveReport {
                outcome: SolveOutcome::Stuck {
                    state,
                    reason: format!("iteration limit {} reached", limits.max_iterations),
                },
                moves_applied,
                iterations,
            });
        }
        let moves = find_moves(&state);
        let Some(best) = moves.first() else {
            // No move applies. On claw-free hosts the blocked configuration
            // should witness a hypothesis violation.
            if !state.claw_free {
                return Ok(SolveReport {
                    outcome: SolveOutcome::Stuck {
                        state,
                        reason: "no applicable move (host is not claw-free; witness \
                                 extraction disabled)"
                            .into(),
                    },
                    moves_applied,
                    iterations,
                });
            }
            let t17 = extract_certificate(&state, ExtractionTarget::T17);
            let cert = match t17 {
                Ok(c) => Ok(c),
                Err(f1) => match extract_certificate(&state, ExtractionTarget::T18) {
                    Ok(c) => Ok(c),
                    Err(f2) => Err(format!("set witness: {f1}; pair witness: {f2}")),
                },
            };
            return Ok(match cert {
                Ok(c) => {
                    let (ok, diags) = verify_certificate(g, &c, k);
                    if ok {
                        SolveReport {
                            outcome: SolveOutcome::Certificate(c),
                            moves_applied,
                            iterations,
                        }
                    } else {
                        SolveReport {
                            outcome: SolveOutcome::Stuck {
                                state,
                                reason: format!("extracted witness failed verification: {diags:?}"),
                            },
                            moves_applied,
                            iterations,
                        }
                    }
                }
                Err(reason) => SolveReport {
                    outcome: SolveOutcome::Stuck { state, reason },
                    moves_applied,
                    iterations,
                },
            });
        };
        let next = state.apply(best)?;
        assert!(
            next.objective.improves(&state.objective),
            "accepted move must strictly improve the objective"
        );
        moves_applied.push(format!("{}: {}", best.kind, best.description));
        state = next;
        iterations += 1;
    }
}
