//! Distance-constrained independence and degree-sum invariants, plus the
//! named hypothesis checks built on them.
//!
//! Both quantities are computed by exhaustive subset search with pruning;
//! they are oracle values, so the search fails loudly when its work limit is
//! hit rather than approximating. Ties among witness sets are broken toward
//! the lexicographically smallest vertex sequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph};
use crate::limits::Limits;

/// A degree sum that may be infinite (no qualifying set exists).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaValue {
    Finite(usize),
    Infinite,
}

impl SigmaValue {
    /// Compares against a possibly negative bound; infinity beats everything.
    pub fn at_least(&self, bound: i64) -> bool {
        match self {
            SigmaValue::Infinite => true,
            SigmaValue::Finite(s) => *s as i64 >= bound,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SigmaValue::Infinite)
    }
}

impl fmt::Display for SigmaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaValue::Finite(s) => write!(f, "{s}"),
            SigmaValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Minimum degree sum over k-vertex distance-l independent sets, with a
/// minimizing set when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSumResult {
    pub value: SigmaValue,
    pub witness_set: Option<Vec<usize>>,
}

/// Identifiers for the supported sufficient conditions.
///
/// `Kty` and `KySigma` share one inequality but promise different tree
/// shapes; the distinct ids keep the conclusions apart in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// sigma^4_{k+3} >= |G| - 2k - 5 on claw-free graphs -> stem with at most k branch vertices.
    T17,
    /// sigma^5_2 >= |G| - 3k - 6 on claw-free graphs -> stem with at most k branch vertices.
    T18,
    /// sigma^4_4 >= |G| - 7 on claw-free graphs -> spider stem (k = 1).
    T19A,
    /// sigma^5_2 >= |G| - 9 on claw-free graphs -> spider stem (k = 1).
    T19B,
    /// alpha^4 <= k + 2 -> stem with at most k branch vertices.
    YanAlpha,
    /// sigma^4_{k+3} >= |G| - 2k - 3 -> stem with at most k branch vertices.
    YanSigma,
    /// sigma_{k+1} >= |G| - k - 1 -> stem with maximum degree at most k.
    Kty,
    /// sigma_3 >= |G| - 2k + 1 -> stem with at most k leaves.
    Tz,
    /// sigma_{k+1} >= |G| - k - 1 -> stem with at most k leaves.
    KySigma,
    /// sigma_{k+1} >= |G| - 2k - 1 on claw-free graphs -> stem with at most k leaves.
    KyClawfree,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::T17,
        TheoremId::T18,
        TheoremId::T19A,
        TheoremId::T19B,
        TheoremId::YanAlpha,
        TheoremId::YanSigma,
        TheoremId::Kty,
        TheoremId::Tz,
        TheoremId::KySigma,
        TheoremId::KyClawfree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::T17 => "T1.7",
            TheoremId::T18 => "T1.8",
            TheoremId::T19A => "T1.9-a",
            TheoremId::T19B => "T1.9-b",
            TheoremId::YanAlpha => "Yan-alpha",
            TheoremId::YanSigma => "Yan-sigma",
            TheoremId::Kty => "KTY",
            TheoremId::Tz => "TZ",
            TheoremId::KySigma => "KY-sigma",
            TheoremId::KyClawfree => "KY-clawfree",
        }
    }

    pub fn parse(s: &str) -> Result<TheoremId> {
        let canon = s.trim();
        for id in TheoremId::ALL {
            if id.name().eq_ignore_ascii_case(canon) {
                return Ok(id);
            }
        }
        // Greek-letter spellings are accepted as aliases.
        match canon {
            "Yan-α" => Ok(TheoremId::YanAlpha),
            "Yan-σ" => Ok(TheoremId::YanSigma),
            "KY-σ" => Ok(TheoremId::KySigma),
            _ => Err(Error::UnknownTheorem(s.to_string())),
        }
    }

    /// Whether the condition is stated for claw-free graphs only.
    pub fn requires_claw_free(&self) -> bool {
        matches!(
            self,
            TheoremId::T17
                | TheoremId::T18
                | TheoremId::T19A
                | TheoremId::T19B
                | TheoremId::KyClawfree
        )
    }

    /// What the condition promises about some spanning tree's stem.
    pub fn conclusion(&self) -> &'static str {
        match self {
            TheoremId::T17 | TheoremId::T18 | TheoremId::YanAlpha | TheoremId::YanSigma => {
                "stem has at most k branch vertices"
            }
            TheoremId::T19A | TheoremId::T19B => "stem is a spider",
            TheoremId::Kty => "stem has maximum degree at most k",
            TheoremId::Tz | TheoremId::KySigma | TheoremId::KyClawfree => {
                "stem has at most k leaves"
            }
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of checking one named condition on one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisVerdict {
    pub theorem_id: TheoremId,
    pub k: usize,
    pub holds: bool,
    /// Computed invariant (degree sum, or set size for the alpha condition).
    pub lhs: SigmaValue,
    /// Bound the invariant is compared against; may be negative.
    pub rhs: i64,
    /// For claw-free-specific conditions: whether the graph passed the
    /// claw-free check. `None` for the unrestricted conditions.
    pub claw_free: Option<bool>,
    pub witness_set: Option<Vec<usize>>,
}

fn require_connected(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Maximum size of a vertex set with pairwise distance at least `l`, plus
/// the lexicographically smallest maximizing set.
pub fn distance_independence_number(
    g: &Graph,
    l: u32,
    limits: &Limits,
) -> Result<(usize, Vec<usize>)> {
    require_connected(g)?;
    if l < 2 {
        return Err(Error::InvalidParameter(format!("l = {l}, need l >= 2")));
    }
    if g.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    let dm = g.all_pairs_distances();
    let mut best: Vec<usize> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let candidates: Vec<usize> = (0..g.order()).collect();
    let mut nodes = 0u64;
    alpha_search(&dm, l, &candidates, &mut chosen, &mut best, &mut nodes, limits.search_nodes)?;
    if best.is_empty() {
        // Any single vertex qualifies vacuously.
        best.push(0);
    }
    Ok((best.len(), best))
}

fn alpha_search(
    dm: &DistanceMatrix,
    l: u32,
    candidates: &[usize],
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
    nodes: &mut u64,
    node_limit: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > node_limit {
        return Err(Error::WorkLimitExceeded { what: "distance-independence search", limit: node_limit });
    }
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    if chosen.len() + candidates.len() <= best.len() {
        return Ok(()); // cannot strictly beat the incumbent
    }
    for (i, &v) in candidates.iter().enumerate() {
        chosen.push(v);
        let rest: Vec<usize> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|&w| dm.at_least(v, w, l))
            .collect();
        alpha_search(dm, l, &rest, chosen, best, nodes, node_limit)?;
        chosen.pop();
        if chosen.len() + (candidates.len() - i - 1) <= best.len() {
            return Ok(());
        }
    }
    Ok(())
}

/// Minimum degree sum over k-vertex sets with pairwise distance at least
/// `l`; infinite when no such set exists.
pub fn sigma(g: &Graph, l: u32, k: usize, limits: &Limits) -> Result<DegreeSumResult> {
    require_connected(g)?;
    if l < 2 {
        return Err(Error::InvalidParameter(format!("l = {l}, need l >= 2")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k = 0, need k >= 1".into()));
    }
    let n = g.order();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let dm = g.all_pairs_distances();
    let degs: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    // min_tail_deg[i] = smallest degree among vertices i..n
    let mut min_tail_deg = vec![usize::MAX; n + 1];
    for v in (0..n).rev() {
        min_tail_deg[v] = min_tail_deg[v + 1].min(degs[v]);
    }
    let mut best_sum: Option<usize> = None;
    let mut best_set: Vec<usize> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let candidates: Vec<usize> = (0..n).collect();
    let mut nodes = 0u64;
    sigma_search(
        &dm,
        l,
        k,
        &degs,
        &min_tail_deg,
        &candidates,
        0,
        &mut chosen,
        &mut best_sum,
        &mut best_set,
        &mut nodes,
        limits.search_nodes,
    )?;
    match best_sum {
        Some(sum) => Ok(DegreeSumResult { value: SigmaValue::Finite(sum), witness_set: Some(best_set) }),
        None => Ok(DegreeSumResult { value: SigmaValue::Infinite, witness_set: None }),
    }
}

#[allow(clippy::too_many_arguments)]
fn sigma_search(
    dm: &DistanceMatrix,
    l: u32,
    k: usize,
    degs: &[usize],
    min_tail_deg: &[usize],
    candidates: &[usize],
    partial_sum: usize,
    chosen: &mut Vec<usize>,
    best_sum: &mut Option<usize>,
    best_set: &mut Vec<usize>,
    nodes: &mut u64,
    node_limit: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > node_limit {
        return Err(Error::WorkLimitExceeded { what: "degree-sum search", limit: node_limit });
    }
    if chosen.len() == k {
        if best_sum.is_none_or(|b| partial_sum < b) {
            *best_sum = Some(partial_sum);
            *best_set = chosen.clone();
        }
        return Ok(());
    }
    let need = k - chosen.len();
    if candidates.len() < need {
        return Ok(());
    }
    for (i, &v) in candidates.iter().enumerate() {
        if candidates.len() - i < need {
            break;
        }
        // Cheap lower bound: remaining picks each cost at least the smallest
        // degree that is still available anywhere to the right.
        if let Some(b) = *best_sum {
            let lb = partial_sum + degs[v] + (need - 1) * min_tail_deg[v + 1].min(usize::MAX / 2);
            if lb >= b {
                continue;
            }
        }
        chosen.push(v);
        let rest: Vec<usize> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|&w| dm.at_least(v, w, l))
            .collect();
        sigma_search(
            dm,
            l,
            k,
            degs,
            min_tail_deg,
            &rest,
            partial_sum + degs[v],
            chosen,
            best_sum,
            best_set,
            nodes,
            node_limit,
        )?;
        chosen.pop();
    }
    Ok(())
}

/// Evaluates the named condition's inequality on `g` at budget `k`.
pub fn check_hypothesis(
    g: &Graph,
    theorem_id: TheoremId,
    k: usize,
    limits: &Limits,
) -> Result<HypothesisVerdict> {
    require_connected(g)?;
    let n = g.order() as i64;
    let claw_free = if theorem_id.requires_claw_free() {
        Some(g.is_claw_free())
    } else {
        None
    };
    // The two spider conditions are the k = 1 cases of the general ones.
    let k_eff = match theorem_id {
        TheoremId::T19A | TheoremId::T19B => 1,
        _ => k,
    };
    let ki = k_eff as i64;
    let (lhs, rhs, witness) = match theorem_id {
        TheoremId::T17 => {
            let r = sigma(g, 4, k_eff + 3, limits)?;
            (r.value, n - 2 * ki - 5, r.witness_set)
        }
        TheoremId::T18 => {
            let r = sigma(g, 5, 2, limits)?;
            (r.value, n - 3 * ki - 6, r.witness_set)
        }
        TheoremId::T19A => {
            let r = sigma(g, 4, 4, limits)?;
            (r.value, n - 7, r.witness_set)
        }
        TheoremId::T19B => {
            let r = sigma(g, 5, 2, limits)?;
            (r.value, n - 9, r.witness_set)
        }
        TheoremId::YanAlpha => {
            let (a, w) = distance_independence_number(g, 4, limits)?;
            (SigmaValue::Finite(a), ki + 2, Some(w))
        }
        TheoremId::YanSigma => {
            let r = sigma(g, 4, k_eff + 3, limits)?;
            (r.value, n - 2 * ki - 3, r.witness_set)
        }
        TheoremId::Kty | TheoremId::KySigma => {
            let r = sigma(g, 2, k_eff + 1, limits)?;
            (r.value, n - ki - 1, r.witness_set)
        }
        TheoremId::Tz => {
            let r = sigma(g, 2, 3, limits)?;
            (r.value, n - 2 * ki + 1, r.witness_set)
        }
        TheoremId::KyClawfree => {
            let r = sigma(g, 2, k_eff + 1, limits)?;
            (r.value, n - 2 * ki - 1, r.witness_set)
        }
    };
    // The alpha condition is an upper bound; all others are lower bounds.
    let holds = match theorem_id {
        TheoremId::YanAlpha => match lhs {
            SigmaValue::Finite(a) => (a as i64) <= rhs,
            SigmaValue::Infinite => false,
        },
        _ => lhs.at_least(rhs),
    };
    Ok(HypothesisVerdict {
        theorem_id,
        k: k_eff,
        holds,
        lhs,
        rhs,
        claw_free,
        witness_set: witness,
    })
}
