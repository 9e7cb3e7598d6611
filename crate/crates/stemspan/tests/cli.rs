//! End-to-end tests of the command-line binary: formats, exit codes,
//! golden bytes for the generator, and report re-verification.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stemspan"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn gen_sharp_matches_golden_bytes() {
    for (m, k, golden) in [(1, 0, "sharp-m1-k0.el"), (2, 1, "sharp-m2-k1.el")] {
        let out = run(&["gen", "sharp", "--m", &m.to_string(), "--k", &k.to_string()]);
        assert_eq!(code(&out), 0);
        let expected = std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden),
        )
        .unwrap();
        assert_eq!(stdout_of(&out), expected, "golden mismatch for m={m} k={k}");
    }
}

#[test]
fn check_reports_claws_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sharp = dir.path().join("g.el");
    let out = run(&[
        "gen", "sharp", "--m", "1", "--k", "0", "-o",
        sharp.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["check", sharp.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("connected: true"));
    assert!(text.contains("claw-free: true"));

    // A star is a claw; exit 1 plus a witness block.
    let star = dir.path().join("star.el");
    std::fs::write(&star, "4 3\n0 1\n0 2\n0 3\n").unwrap();
    let out = run(&["check", star.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("claw-free: false"));
    assert!(text.contains("center: 0"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.el");
    std::fs::write(&bad, "2 1\n0 0\n").unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn hypothesis_on_family_member() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g21.el");
    run(&["gen", "sharp", "--m", "2", "--k", "1", "-o", g.to_str().unwrap()]);
    let out = run(&["hypothesis", g.to_str().unwrap(), "--theorem", "T1.7", "--k", "1"]);
    assert_eq!(code(&out), 1, "the family member violates the bound");
    let text = stdout_of(&out);
    assert!(text.contains("lhs: 8"));
    assert!(text.contains("rhs: 9"));
    assert!(text.contains("holds: false"));

    // Vacuously holding condition: no 4-distant triple in a clique.
    let k6 = dir.path().join("k6.el");
    let mut doc = String::from("6 15\n");
    for u in 0..6 {
        for v in (u + 1)..6 {
            doc.push_str(&format!("{u} {v}\n"));
        }
    }
    std::fs::write(&k6, doc).unwrap();
    let out = run(&["hypothesis", k6.to_str().unwrap(), "--theorem", "T1.7", "--k", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("lhs: inf"));
}

#[test]
fn solve_exact_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g10 = dir.path().join("g10.el");
    run(&["gen", "sharp", "--m", "1", "--k", "0", "-o", g10.to_str().unwrap()]);
    let out = run(&["solve", g10.to_str().unwrap(), "--k", "0", "--method", "exact"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("outcome: infeasible"));

    let out = run(&["solve", g10.to_str().unwrap(), "--k", "1", "--method", "exact"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("outcome: feasible"));

    // The order-12 member is feasible at budget 1 (star-hub tree), proven
    // exhaustively; the exact method must find it.
    let g11 = dir.path().join("g11.el");
    run(&["gen", "sharp", "--m", "1", "--k", "1", "-o", g11.to_str().unwrap()]);
    let out = run(&["solve", g11.to_str().unwrap(), "--k", "1", "--method", "exact"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("outcome: feasible"));
}

#[test]
fn solve_proof_on_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = dir.path().join("c6.el");
    std::fs::write(&c6, "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n").unwrap();
    let out = run(&["solve", c6.to_str().unwrap(), "--k", "0", "--method", "proof"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("outcome: feasible"));
    assert!(text.contains("stem-branch-vertices: 0"));
}

#[test]
fn solve_certificate_feeds_verify_cert() {
    let dir = tempfile::tempdir().unwrap();
    let g10 = dir.path().join("g10.el");
    run(&["gen", "sharp", "--m", "1", "--k", "0", "-o", g10.to_str().unwrap()]);
    let report_path = dir.path().join("report.txt");
    let out = run(&[
        "solve",
        g10.to_str().unwrap(),
        "--k",
        "0",
        "--method",
        "proof",
        "-o",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("outcome: certificate"));

    // The embedded certificate block is directly consumable.
    let cert_lines: Vec<&str> = report
        .lines()
        .filter(|l| {
            let t = l.trim_start();
            t.starts_with("kind:") || t.starts_with("vertices:")
        })
        .collect();
    let cert_path = dir.path().join("cert.txt");
    std::fs::write(&cert_path, cert_lines.join("\n")).unwrap();
    let out = run(&[
        "verify-cert",
        g10.to_str().unwrap(),
        cert_path.to_str().unwrap(),
        "--k",
        "0",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("valid: true"));

    // A tampered witness must be rejected with a named pair.
    std::fs::write(&cert_path, "kind: T1.7-witness\nvertices: 0 1 2\n").unwrap();
    let out = run(&[
        "verify-cert",
        g10.to_str().unwrap(),
        cert_path.to_str().unwrap(),
        "--k",
        "0",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("valid: false"));
    assert!(text.contains("distance"));
}

#[test]
fn corpus_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    for d in [&d1, &d2] {
        let out = run(&[
            "corpus", "--seed", "42", "--count", "5", "--order-min", "5", "--order-max", "10",
            "-o",
            d.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let mut names: Vec<String> = std::fs::read_dir(&d1)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for name in names {
        let a = std::fs::read(d1.join(&name)).unwrap();
        let b = std::fs::read(d2.join(&name)).unwrap();
        assert_eq!(a, b, "corpus output must be byte-identical across runs");
    }
}

#[test]
fn validate_small_run_is_clean() {
    let out = run(&[
        "validate", "--seed", "7", "--count", "40", "--k", "1", "--order-min", "5",
        "--order-max", "11",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("contradictions: 0"));
}

#[test]
fn invariants_report_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let p7 = dir.path().join("p7.el");
    std::fs::write(&p7, "7 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n").unwrap();
    let out = run(&["invariants", p7.to_str().unwrap(), "--l", "4", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("alpha^4: 2"));
    assert!(text.contains("alpha-witness: 0 4"));
    // The endpoint pair {0,6} is 6 apart with degree sum 2.
    assert!(text.contains("sigma^4_2: 2"));
    assert!(text.contains("sigma-witness: 0 6"));
}
