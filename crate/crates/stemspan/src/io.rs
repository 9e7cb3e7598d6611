//! Edge-list files, run reports, the claw-free corpus generator, and the
//! cross-checking validation pipeline behind the CLI.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{self, BudgetOutcome};
use crate::graph::Graph;
use crate::invariants::{self, SigmaValue, TheoremId};
use crate::limits::Limits;
use crate::search::{self, Certificate, CertificateKind, SolveOutcome};
use crate::sharp::LabeledSharpGraph;
use crate::tree::stem_profile;

// ---------------------------------------------------------------------------
// Edge-list format
// ---------------------------------------------------------------------------

/// Parses the edge-list format: `#` lines are comments, the first data line
/// is `n m`, followed by exactly `m` lines `u v` with `0 <= u,v < n`,
/// `u != v`, and no duplicates. Errors name the offending line.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut seen_edges = std::collections::BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two tokens, found {}", tokens.len()),
            });
        }
        let nums: Vec<usize> = tokens
            .iter()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("`{t}` is not a non-negative integer"),
                })
            })
            .collect::<Result<_>>()?;
        match header {
            None => header = Some((nums[0], nums[1])),
            Some((n, m)) => {
                if pairs.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("more than the declared {m} edges"),
                    });
                }
                let (u, v) = (nums[0], nums[1]);
                if u == v {
                    return Err(Error::Parse { line: line_no, msg: format!("loop edge ({u},{u})") });
                }
                if u >= n || v >= n {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("vertex out of range for order {n}"),
                    });
                }
                let key = (u.min(v), u.max(v));
                if !seen_edges.insert(key) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("duplicate edge ({u},{v})"),
                    });
                }
                pairs.push((u, v));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse { line: 1, msg: "missing `n m` header".into() });
    };
    if pairs.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("declared {m} edges, found {}", pairs.len()),
        });
    }
    Graph::new(n, &pairs)
}

/// Serializes a graph canonically: optional comment block, `n m` header,
/// then the edges sorted with `u < v`.
pub fn serialize_edge_list(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("{} {}\n", g.order(), g.edge_count()));
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    out
}

/// Serializes an extremal family member with its role-annotation comments.
pub fn serialize_sharp_graph(s: &LabeledSharpGraph) -> String {
    let p = s.params;
    let mut comments = vec![
        format!("sharp family m={} k={}", p.m, p.k),
        format!("order {} = (k+3)(m+2), groups {}", p.order(), p.groups()),
    ];
    let mut line = String::from("roles:");
    for (v, role) in s.roles.iter().enumerate() {
        line.push_str(&format!(" {role}={v}"));
        if (v + 1) % p.groups() == 0 {
            comments.push(std::mem::take(&mut line));
            line = String::from("roles:");
        }
    }
    if line != "roles:" {
        comments.push(line);
    }
    serialize_edge_list(&s.graph, &comments)
}

/// Parses a certificate file: a `kind:` line and a `vertices:` line, in the
/// same shape the solve report embeds. Comment and blank lines are ignored.
pub fn parse_certificate_file(text: &str, g: &Graph, k: usize) -> Result<Certificate> {
    let mut kind: Option<CertificateKind> = None;
    let mut vertices: Option<Vec<usize>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("kind:") {
            kind = Some(CertificateKind::parse(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("vertices:") {
            let vs: Vec<usize> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("`{t}` is not a vertex id"),
                    })
                })
                .collect::<Result<_>>()?;
            vertices = Some(vs);
        }
    }
    let kind = kind.ok_or(Error::Parse { line: 1, msg: "missing `kind:` line".into() })?;
    let mut vertices =
        vertices.ok_or(Error::Parse { line: 1, msg: "missing `vertices:` line".into() })?;
    vertices.sort_unstable();
    if let Some(&v) = vertices.iter().find(|&&v| v >= g.order()) {
        return Err(Error::VertexOutOfRange { v, n: g.order() });
    }
    let degree_sum = vertices.iter().map(|&v| g.neighbors(v).len()).sum();
    let n = g.order() as i64;
    let bound = match kind {
        CertificateKind::T17Witness => n - 2 * k as i64 - 6,
        CertificateKind::T18Witness => n - 3 * k as i64 - 7,
    };
    Ok(Certificate { kind, vertices, distances_ok: true, degree_sum, bound })
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

/// A deterministic, indentation-structured key/value report.
#[derive(Debug, Clone)]
pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            lines: vec!["stemspan-report v1".into(), format!("command: {command}")],
        }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn kv_at(&mut self, indent: usize, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{}{key}: {value}", "  ".repeat(indent)));
        self
    }

    pub fn section(&mut self, indent: usize, name: &str) -> &mut Self {
        self.lines.push(format!("{}{name}:", "  ".repeat(indent)));
        self
    }

    pub fn list(&mut self, indent: usize, key: &str, items: &[impl std::fmt::Display]) -> &mut Self {
        let joined = items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        self.kv_at(indent, key, joined)
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Renders a certificate as report lines under `indent`.
pub fn report_certificate(r: &mut Report, indent: usize, cert: &Certificate) {
    r.section(indent, "certificate");
    r.kv_at(indent + 1, "kind", cert.kind);
    r.list(indent + 1, "vertices", &cert.vertices);
    r.kv_at(indent + 1, "degree-sum", cert.degree_sum);
    r.kv_at(indent + 1, "bound", cert.bound);
    r.kv_at(indent + 1, "distances-ok", cert.distances_ok);
}

// ---------------------------------------------------------------------------
// Corpus generation
// ---------------------------------------------------------------------------

/// Line graph: one vertex per base edge, adjacent iff the base edges share
/// an endpoint. Line graphs of connected graphs are connected and claw-free.
pub fn line_graph(base: &Graph) -> Graph {
    let edges = base.edges();
    let mut pairs = Vec::new();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = (edges[i], edges[j]);
            if a.touches(b.u) || a.touches(b.v) {
                pairs.push((i, j));
            }
        }
    }
    Graph::new(edges.len(), &pairs).expect("line graph construction is simple")
}

// Base graphs may have one vertex more than their edge count (trees), so
// sparse bases with long line graphs show up alongside dense ones; that
// mix supplies both hypothesis-satisfying and hypothesis-violating
// instances.
const CORPUS_BASE_MAX_ORDER: usize = 13;
const CORPUS_ATTEMPTS_PER_GRAPH: usize = 20_000;

/// Generates `count` connected claw-free graphs with orders inside
/// `[order_min, order_max]`, as line graphs of random connected base
/// graphs. Deterministic for a fixed seed.
pub fn generate_clawfree_corpus(
    seed: u64,
    count: usize,
    order_min: usize,
    order_max: usize,
) -> Result<Vec<Graph>> {
    if order_min == 0 || order_min > order_max {
        return Err(Error::InvalidParameter(format!(
            "order range {order_min}..={order_max} is invalid"
        )));
    }
    // A connected base with m edges needs at most m+1 and at least
    // ~(1+sqrt(8m))/2 vertices; reject ranges no base order can serve.
    let feasible = (order_min..=order_max).any(|m| {
        (2..=CORPUS_BASE_MAX_ORDER.min(m + 1)).any(|nb| nb * (nb - 1) / 2 >= m)
    });
    if !feasible {
        return Err(Error::InfeasibleRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut found = false;
        for _ in 0..CORPUS_ATTEMPTS_PER_GRAPH {
            let m_target = rng.random_range(order_min..=order_max);
            let nb_lo = (2..=CORPUS_BASE_MAX_ORDER)
                .find(|&nb| nb * (nb - 1) / 2 >= m_target)
                .unwrap_or(CORPUS_BASE_MAX_ORDER);
            let nb_hi = CORPUS_BASE_MAX_ORDER.min(m_target + 1);
            if nb_lo > nb_hi {
                continue;
            }
            let nb = rng.random_range(nb_lo..=nb_hi);
            let max_edges = nb * (nb - 1) / 2;
            let p = (m_target as f64 / max_edges as f64).clamp(0.05, 0.98);
            let mut pairs = Vec::new();
            for u in 0..nb {
                for v in (u + 1)..nb {
                    if rng.random::<f64>() < p {
                        pairs.push((u, v));
                    }
                }
            }
            let base = Graph::new(nb, &pairs).expect("sampled pairs are simple");
            if base.edge_count() < order_min
                || base.edge_count() > order_max
                || !base.is_connected()
            {
                continue;
            }
            out.push(line_graph(&base));
            found = true;
            break;
        }
        if !found {
            return Err(Error::InfeasibleRange);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Validation pipeline
// ---------------------------------------------------------------------------

/// Aggregated outcome of the corpus validation pipeline.
#[derive(Debug, Clone, Default)]
pub struct ValidationStats {
    pub instances: usize,
    pub hypothesis_holds: usize,
    pub feasible_confirmed: usize,
    pub certificates_verified: usize,
    pub stuck_without_certificate: usize,
    pub exact_inconclusive: usize,
    /// Any entry here means an internal inconsistency or a contradiction of
    /// the guaranteed behavior; the CLI maps it to exit code 3.
    pub contradictions: Vec<String>,
}

/// Generates a corpus and cross-checks both solvers against the degree-sum
/// hypotheses on every instance at budget `k`.
pub fn validate_corpus(
    seed: u64,
    count: usize,
    k: usize,
    order_min: usize,
    order_max: usize,
    limits: &Limits,
) -> Result<ValidationStats> {
    let corpus = generate_clawfree_corpus(seed, count, order_min, order_max)?;
    let mut stats = ValidationStats { instances: corpus.len(), ..Default::default() };
    for (idx, g) in corpus.iter().enumerate() {
        validate_instance(idx, g, k, limits, &mut stats)?;
    }
    Ok(stats)
}

fn validate_instance(
    idx: usize,
    g: &Graph,
    k: usize,
    limits: &Limits,
    stats: &mut ValidationStats,
) -> Result<()> {
    let tag = format!("instance {idx} (order {})", g.order());
    let t17 = invariants::check_hypothesis(g, TheoremId::T17, k, limits)?;
    let t18 = invariants::check_hypothesis(g, TheoremId::T18, k, limits)?;
    let holds = t17.holds || t18.holds;
    if holds {
        stats.hypothesis_holds += 1;
    }

    let exact_outcome = exact::has_spanning_tree_with_budget(g, k, limits)?;
    let report = search::solve(g, k, limits)?;

    match &exact_outcome {
        BudgetOutcome::Yes(t) => {
            let p = stem_profile(t);
            if !t.is_spanning() || p.branch_count() > k {
                stats
                    .contradictions
                    .push(format!("{tag}: exact witness fails re-profiling"));
            }
        }
        BudgetOutcome::No => {
            if holds {
                stats.contradictions.push(format!(
                    "{tag}: hypothesis holds but exhaustive search proves infeasibility"
                ));
            }
        }
        BudgetOutcome::Inconclusive => {
            stats.exact_inconclusive += 1;
            if holds {
                stats.contradictions.push(format!(
                    "{tag}: hypothesis holds but exhaustive search was inconclusive"
                ));
            }
        }
    }

    match &report.outcome {
        SolveOutcome::Feasible(t) => {
            let p = stem_profile(t);
            if !t.is_spanning() || p.branch_count() > k {
                stats
                    .contradictions
                    .push(format!("{tag}: local-search tree fails re-profiling"));
            } else {
                stats.feasible_confirmed += 1;
            }
            if matches!(exact_outcome, BudgetOutcome::No) {
                stats.contradictions.push(format!(
                    "{tag}: local search found a tree the exhaustive search ruled out"
                ));
            }
        }
        SolveOutcome::Certificate(cert) => {
            let (ok, diags) = search::verify_certificate(g, cert, k);
            if !ok {
                stats
                    .contradictions
                    .push(format!("{tag}: emitted certificate fails verification: {diags:?}"));
            } else if !sigma_confirms(g, cert, k, limits)? {
                stats.contradictions.push(format!(
                    "{tag}: certificate not confirmed by the degree-sum search"
                ));
            } else {
                stats.certificates_verified += 1;
            }
            if holds {
                stats.contradictions.push(format!(
                    "{tag}: hypothesis holds but the solver emitted a violation witness"
                ));
            }
        }
        SolveOutcome::Stuck { reason, .. } => {
            stats.stuck_without_certificate += 1;
            if holds {
                stats
                    .contradictions
                    .push(format!("{tag}: hypothesis holds but the solver got stuck: {reason}"));
            }
        }
    }
    Ok(())
}

/// Confirms a certificate's implied degree-sum bound with the independent
/// subset search.
pub fn sigma_confirms(g: &Graph, cert: &Certificate, k: usize, limits: &Limits) -> Result<bool> {
    let n = g.order() as i64;
    let (l, size, bound) = match cert.kind {
        CertificateKind::T17Witness => (4, k + 3, n - 2 * k as i64 - 6),
        CertificateKind::T18Witness => (5, 2, n - 3 * k as i64 - 7),
    };
    let r = invariants::sigma(g, l, size, limits)?;
    Ok(match r.value {
        SigmaValue::Finite(s) => s as i64 <= bound,
        SigmaValue::Infinite => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_triangle() {
        let g = parse_edge_list("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn parse_errors_name_lines() {
        match parse_edge_list("2 1\n0 0\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("loop"));
            }
            other => panic!("expected loop error, got {other:?}"),
        }
        match parse_edge_list("2 1\n0 5\n") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("range")),
            other => panic!("expected range error, got {other:?}"),
        }
        match parse_edge_list("3 2\n0 1\n1 0\n") {
            Err(Error::Parse { line: 3, msg }) => assert!(msg.contains("duplicate")),
            other => panic!("expected duplicate error, got {other:?}"),
        }
        match parse_edge_list("3 3\n0 1\n1 2\n") {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("declared")),
            other => panic!("expected count mismatch, got {other:?}"),
        }
        assert!(parse_edge_list("oops\n").is_err());
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        for g in [Graph::complete(5), Graph::cycle(7), Graph::star(4)] {
            let text = serialize_edge_list(&g, &[]);
            let back = parse_edge_list(&text).unwrap();
            assert_eq!(back, g);
            // Canonical documents round-trip byte-identically.
            assert_eq!(serialize_edge_list(&back, &[]), text);
        }
    }

    #[test]
    fn line_graph_shapes() {
        let lk4 = line_graph(&Graph::complete(4));
        assert_eq!(lk4.order(), 6);
        assert!(lk4.is_connected());
        assert!(lk4.is_claw_free());
        let lp5 = line_graph(&Graph::path(5));
        assert_eq!(lp5, Graph::path(4));
    }

    #[test]
    fn corpus_is_deterministic_and_in_range() {
        let a = generate_clawfree_corpus(42, 10, 5, 12).unwrap();
        let b = generate_clawfree_corpus(42, 10, 5, 12).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        for g in &a {
            assert!((5..=12).contains(&g.order()));
            assert!(g.is_connected());
            assert!(g.is_claw_free());
        }
        let c = generate_clawfree_corpus(43, 10, 5, 12).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x != y));
    }

    #[test]
    fn infeasible_range_rejected() {
        // No base graph within the order cap carries this many edges.
        assert!(matches!(
            generate_clawfree_corpus(1, 1, 100, 120),
            Err(Error::InfeasibleRange)
        ));
        assert!(generate_clawfree_corpus(1, 1, 3, 0).is_err());
    }

    #[test]
    fn certificate_file_roundtrip() {
        let s = crate::sharp::build_sharp_graph(crate::sharp::SharpFamilyParams::new(1, 0).unwrap());
        let text = "kind: T1.7-witness\nvertices: 3 4 5\n";
        let cert = parse_certificate_file(text, &s.graph, 0).unwrap();
        assert_eq!(cert.vertices, vec![3, 4, 5]);
        assert_eq!(cert.degree_sum, 3);
        assert_eq!(cert.bound, 3);
        let (ok, diags) = search::verify_certificate(&s.graph, &cert, 0);
        assert!(ok, "{diags:?}");
    }

    #[test]
    fn report_rendering() {
        let mut r = Report::new("solve");
        r.kv("k", 1).section(0, "result").kv_at(1, "outcome", "feasible");
        let text = r.render();
        assert!(text.starts_with("stemspan-report v1\ncommand: solve\n"));
        assert!(text.contains("\nresult:\n  outcome: feasible\n"));
    }
}
