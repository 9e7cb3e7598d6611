//! Command-line interface.
//!
//! Exit codes: 0 success, 1 infeasible or false verdict, 2 input error,
//! 3 internal inconsistency (a cross-check that must never fail did).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use stemspan::error::Error;
use stemspan::exact::{self, BudgetOutcome};
use stemspan::graph::Graph;
use stemspan::invariants::{self, TheoremId};
use stemspan::io::{self, Report};
use stemspan::limits::Limits;
use stemspan::search::{self, SolveOutcome};
use stemspan::sharp::{self, CheckStatus, SharpFamilyParams};
use stemspan::tree::stem_profile;

/// Environment variable overriding the default search-node limit.
const NODE_LIMIT_ENV: &str = "STEMSPAN_NODE_LIMIT";

#[derive(Parser)]
#[command(name = "stemspan", version, about = "Spanning trees whose stems have few branch vertices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check connectivity and claw-freeness; prints a claw witness if any.
    Check { file: PathBuf },
    /// Compute the distance-l independence number and the k-vertex
    /// degree-sum minimum, with witnesses.
    Invariants {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        l: u32,
        #[arg(long)]
        k: usize,
    },
    /// Evaluate a named degree-sum condition at budget k.
    Hypothesis {
        file: PathBuf,
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Search for a spanning tree whose stem has at most k branch vertices.
    Solve {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = ["exact", "proof"])]
        method: String,
        /// Search-node limit for the exhaustive method.
        #[arg(long)]
        node_limit: Option<u64>,
        /// Iteration limit for the local-search method.
        #[arg(long)]
        iter_limit: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a certificate file against a graph at budget k.
    VerifyCert {
        graph: PathBuf,
        cert: PathBuf,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Generators.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Generate a corpus of connected claw-free graphs (line graphs of
    /// random connected graphs).
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        order_min: usize,
        #[arg(long, default_value_t = 12)]
        order_max: usize,
        /// Directory for the .el files; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full pipeline: corpus, hypotheses, both solvers, cross-checks.
    /// Exits 3 if any guaranteed behavior is contradicted.
    Validate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        order_min: usize,
        #[arg(long, default_value_t = 12)]
        order_max: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Build an extremal clique-chain family member.
    Sharp {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also run the family verifier and report each check.
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) | Error::InvalidTree(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn limits_from(node_limit: Option<u64>, iter_limit: Option<u64>) -> Limits {
    let mut limits = Limits::default();
    if let Ok(s) = std::env::var(NODE_LIMIT_ENV) {
        if let Ok(v) = s.parse::<u64>() {
            limits.search_nodes = v;
        }
    }
    if let Some(v) = node_limit {
        limits.search_nodes = v;
    }
    if let Some(v) = iter_limit {
        limits.max_iterations = v;
    }
    limits
}

fn load_graph(path: &Path) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    io::parse_edge_list(&text)
}

fn emit(report: &Report, output: Option<&Path>) -> Result<(), Error> {
    let text = report.render();
    match output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn edge_list_string(edges: impl IntoIterator<Item = stemspan::Edge>) -> String {
    edges
        .into_iter()
        .map(|e| format!("{}-{}", e.u, e.v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Check { file } => {
            let g = load_graph(&file)?;
            let mut r = Report::new("check");
            r.kv("input", file.display());
            r.kv("order", g.order());
            r.kv("edges", g.edge_count());
            let connected = g.is_connected();
            r.kv("connected", connected);
            let witness = g.claw_witness();
            r.kv("claw-free", witness.is_none());
            if let Some(w) = &witness {
                r.section(0, "claw");
                r.kv_at(1, "center", w.center);
                r.list(1, "leaves", &w.leaves);
            }
            emit(&r, None)?;
            Ok(if connected && witness.is_none() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Invariants { file, l, k } => {
            let g = load_graph(&file)?;
            let limits = limits_from(None, None);
            let (alpha, alpha_set) = invariants::distance_independence_number(&g, l, &limits)?;
            let sig = invariants::sigma(&g, l, k, &limits)?;
            let mut r = Report::new("invariants");
            r.kv("input", file.display());
            r.kv("l", l);
            r.kv("k", k);
            r.kv(&format!("alpha^{l}"), alpha);
            r.list(0, "alpha-witness", &alpha_set);
            r.kv(&format!("sigma^{l}_{k}"), sig.value);
            if let Some(w) = &sig.witness_set {
                r.list(0, "sigma-witness", w);
            }
            emit(&r, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hypothesis { file, theorem, k } => {
            let g = load_graph(&file)?;
            let id = TheoremId::parse(&theorem)?;
            let limits = limits_from(None, None);
            let v = invariants::check_hypothesis(&g, id, k, &limits)?;
            let mut r = Report::new("hypothesis");
            r.kv("input", file.display());
            r.kv("theorem", v.theorem_id);
            r.kv("k", v.k);
            r.kv("lhs", v.lhs);
            r.kv("rhs", v.rhs);
            r.kv("holds", v.holds);
            if let Some(cf) = v.claw_free {
                r.kv("claw-free", cf);
            }
            r.kv("conclusion-if-holds", id.conclusion());
            if let Some(w) = &v.witness_set {
                r.list(0, "witness", w);
            }
            emit(&r, None)?;
            Ok(if v.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Solve { file, k, method, node_limit, iter_limit, output } => {
            let g = load_graph(&file)?;
            let limits = limits_from(node_limit, iter_limit);
            let started = Instant::now();
            let mut r = Report::new("solve");
            r.kv("input", file.display());
            r.kv("method", &method);
            r.kv("k", k);
            r.kv("order", g.order());
            let code = match method.as_str() {
                "exact" => {
                    let outcome = exact::has_spanning_tree_with_budget(&g, k, &limits)?;
                    match outcome {
                        BudgetOutcome::Yes(t) => {
                            r.kv("outcome", "feasible");
                            let p = stem_profile(&t);
                            r.section(0, "tree");
                            r.kv_at(1, "edges", edge_list_string(t.edges().iter().copied()));
                            r.kv_at(1, "stem-branch-vertices", p.branch_count());
                            ExitCode::SUCCESS
                        }
                        BudgetOutcome::No => {
                            r.kv("outcome", "infeasible");
                            ExitCode::from(1)
                        }
                        BudgetOutcome::Inconclusive => {
                            r.kv("outcome", "inconclusive");
                            r.kv("note", "work limit hit before a witness or a proof");
                            ExitCode::from(1)
                        }
                    }
                }
                "proof" => {
                    let report = search::solve(&g, k, &limits)?;
                    let code = match &report.outcome {
                        SolveOutcome::Feasible(t) => {
                            r.kv("outcome", "feasible");
                            let p = stem_profile(t);
                            r.section(0, "tree");
                            r.kv_at(1, "edges", edge_list_string(t.edges().iter().copied()));
                            r.kv_at(1, "stem-branch-vertices", p.branch_count());
                            ExitCode::SUCCESS
                        }
                        SolveOutcome::Certificate(cert) => {
                            r.kv("outcome", "certificate");
                            io::report_certificate(&mut r, 0, cert);
                            ExitCode::from(1)
                        }
                        SolveOutcome::Stuck { reason, .. } => {
                            r.kv("outcome", "stuck");
                            r.kv("reason", reason);
                            ExitCode::from(1)
                        }
                    };
                    r.kv("iterations", report.iterations);
                    r.section(0, "moves-applied");
                    for m in &report.moves_applied {
                        r.kv_at(1, "move", m);
                    }
                    code
                }
                _ => unreachable!("clap restricts the method values"),
            };
            r.kv("wall-time-ms", started.elapsed().as_millis());
            emit(&r, output.as_deref())?;
            Ok(code)
        }
        Command::VerifyCert { graph, cert, k } => {
            let g = load_graph(&graph)?;
            let text = std::fs::read_to_string(&cert).map_err(|e| Error::Parse {
                line: 0,
                msg: format!("cannot read {}: {e}", cert.display()),
            })?;
            let certificate = io::parse_certificate_file(&text, &g, k)?;
            let (ok, diags) = search::verify_certificate(&g, &certificate, k);
            let mut r = Report::new("verify-cert");
            r.kv("input", graph.display());
            r.kv("k", k);
            io::report_certificate(&mut r, 0, &certificate);
            r.kv("valid", ok);
            for d in &diags {
                r.kv("diagnostic", d);
            }
            emit(&r, None)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Gen { what } => match what {
            GenCommand::Sharp { m, k, output, verify } => {
                let params = SharpFamilyParams::new(m, k)?;
                let labeled = sharp::build_sharp_graph(params);
                let text = io::serialize_sharp_graph(&labeled);
                match &output {
                    Some(path) => std::fs::write(path, &text).map_err(|e| Error::Parse {
                        line: 0,
                        msg: format!("cannot write {}: {e}", path.display()),
                    })?,
                    None => print!("{text}"),
                }
                if verify {
                    let limits = limits_from(None, None);
                    let report = sharp::verify_sharpness(params, &limits);
                    let mut r = Report::new("verify-sharpness");
                    r.kv("m", m);
                    r.kv("k", k);
                    for (name, status) in report.checks() {
                        let line = match status {
                            CheckStatus::Pass => "pass".to_string(),
                            CheckStatus::Fail(msg) => format!("FAIL ({msg})"),
                            CheckStatus::Skipped(msg) => format!("skipped ({msg})"),
                        };
                        r.kv(name, line);
                    }
                    emit(&r, None)?;
                    if !report.all_passed() {
                        return Ok(ExitCode::from(1));
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Corpus { seed, count, order_min, order_max, output } => {
            let corpus = io::generate_clawfree_corpus(seed, count, order_min, order_max)?;
            match &output {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Parse {
                        line: 0,
                        msg: format!("cannot create {}: {e}", dir.display()),
                    })?;
                    for (i, g) in corpus.iter().enumerate() {
                        let name = format!("corpus-{seed}-{i:04}.el");
                        let comments =
                            vec![format!("corpus seed={seed} index={i} order={}", g.order())];
                        std::fs::write(dir.join(&name), io::serialize_edge_list(g, &comments))
                            .map_err(|e| Error::Parse {
                                line: 0,
                                msg: format!("cannot write {name}: {e}"),
                            })?;
                    }
                    println!("wrote {} graphs to {}", corpus.len(), dir.display());
                }
                None => {
                    for (i, g) in corpus.iter().enumerate() {
                        let comments =
                            vec![format!("corpus seed={seed} index={i} order={}", g.order())];
                        print!("{}", io::serialize_edge_list(g, &comments));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { seed, count, k, order_min, order_max } => {
            let limits = limits_from(None, None);
            let stats = io::validate_corpus(seed, count, k, order_min, order_max, &limits)?;
            let mut r = Report::new("validate");
            r.kv("seed", seed);
            r.kv("count", count);
            r.kv("k", k);
            r.kv("instances", stats.instances);
            r.kv("hypothesis-holds", stats.hypothesis_holds);
            r.kv("feasible-confirmed", stats.feasible_confirmed);
            r.kv("certificates-verified", stats.certificates_verified);
            r.kv("stuck-without-certificate", stats.stuck_without_certificate);
            r.kv("exact-inconclusive", stats.exact_inconclusive);
            r.kv("contradictions", stats.contradictions.len());
            for c in &stats.contradictions {
                r.kv("contradiction", c);
            }
            emit(&r, None)?;
            Ok(if stats.contradictions.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}
