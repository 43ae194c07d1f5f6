//! End-to-end tests of the binary: exit codes, report determinism across
//! worker counts, and the file formats the verbs consume and produce.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ramsey_core::catalog::builders::{chain, two_class};
use ramsey_core::io;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ramsey")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("RAMSEY_MAX_COLORINGS")
        .output()
        .expect("binary runs")
}

fn write_structure(dir: &Path, name: &str, s: &ramsey_core::structure::FiniteStructure) -> PathBuf {
    let path = dir.join(name);
    io::write_structure_file(&path, s).unwrap();
    path
}

/// Chain structure files for the classical instance.
fn chain_files(dir: &Path) {
    for n in 1..=6 {
        write_structure(dir, &format!("chain{}.rst", n), &chain(n));
    }
}

#[test]
fn arrow_verdicts_and_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    chain_files(tmp.path());
    let holds = run_in(
        tmp.path(),
        &[
            "arrow",
            "--C",
            "chain6.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
        ],
    );
    assert_eq!(holds.status.code(), Some(0), "{:?}", holds);
    assert!(String::from_utf8_lossy(&holds.stdout).contains("verdict: holds"));

    let fails = run_in(
        tmp.path(),
        &[
            "arrow",
            "--C",
            "chain5.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
            "--out",
            "cex.json",
        ],
    );
    assert_eq!(fails.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&fails.stdout);
    assert!(stdout.contains("verdict: fails"));
    let cex = std::fs::read_to_string(tmp.path().join("cex.json")).unwrap();
    assert!(cex.contains("\"assignment\""));

    // No host: B does not fit into C.
    let nohost = run_in(
        tmp.path(),
        &[
            "arrow",
            "--C",
            "chain2.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain1.rst",
            "--k",
            "2",
            "--t",
            "1",
        ],
    );
    assert_eq!(nohost.status.code(), Some(2));

    // Input error: t > k.
    let bad = run_in(
        tmp.path(),
        &[
            "arrow",
            "--C",
            "chain3.rst",
            "--B",
            "chain2.rst",
            "--A",
            "chain1.rst",
            "--k",
            "1",
            "--t",
            "2",
        ],
    );
    assert_eq!(bad.status.code(), Some(3));

    // Resource guard via the documented environment variable.
    let guarded = Command::new(bin())
        .args([
            "arrow",
            "--C",
            "chain6.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
        ])
        .current_dir(tmp.path())
        .env("RAMSEY_MAX_COLORINGS", "10")
        .output()
        .unwrap();
    assert_eq!(guarded.status.code(), Some(4));
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    chain_files(tmp.path());
    let args_sets: Vec<Vec<&str>> = vec![
        vec![
            "arrow",
            "--C",
            "chain5.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
        ],
        vec![
            "arrow",
            "--C",
            "chain6.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
        ],
        vec![
            "min-t",
            "--C",
            "chain3.rst",
            "--B",
            "chain2.rst",
            "--A",
            "chain1.rst",
        ],
    ];
    for args in args_sets {
        let mut one = args.clone();
        one.extend(["--workers", "1"]);
        let mut eight = args.clone();
        eight.extend(["--workers", "8"]);
        let out1 = run_in(tmp.path(), &one);
        let out8 = run_in(tmp.path(), &eight);
        // Whole reports, replay line included: the worker flag is excluded
        // from the echo precisely so this holds byte for byte.
        assert_eq!(out1.stdout, out8.stdout, "args {:?}", args);
        assert_eq!(out1.status.code(), out8.status.code());
    }
}

#[test]
fn generate_validate_and_rigidity() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run_in(
        tmp.path(),
        &[
            "generate",
            "--family",
            "ordered:pure_sets:3",
            "--out",
            "ordered3",
        ],
    );
    assert_eq!(gen.status.code(), Some(0), "{:?}", gen);
    let validate = run_in(
        tmp.path(),
        &["validate", "--fragment", "ordered3/manifest.json"],
    );
    assert_eq!(validate.status.code(), Some(0));
    let rigid = run_in(
        tmp.path(),
        &["rigidity", "--fragment", "ordered3/manifest.json"],
    );
    assert_eq!(rigid.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&rigid.stdout).contains("verdict: rigid"));

    let gen = run_in(
        tmp.path(),
        &["generate", "--family", "pure_sets:3", "--out", "plain3"],
    );
    assert_eq!(gen.status.code(), Some(0));
    let rigid = run_in(
        tmp.path(),
        &["rigidity", "--fragment", "plain3/manifest.json"],
    );
    assert_eq!(rigid.status.code(), Some(1));

    // Generation is byte-deterministic.
    let before = std::fs::read_to_string(tmp.path().join("ordered3/manifest.json")).unwrap();
    run_in(
        tmp.path(),
        &[
            "generate",
            "--family",
            "ordered:pure_sets:3",
            "--out",
            "ordered3",
        ],
    );
    let after = std::fs::read_to_string(tmp.path().join("ordered3/manifest.json")).unwrap();
    assert_eq!(before, after);
}

#[test]
fn kriz_and_degree_on_the_two_class_pair() {
    let tmp = tempfile::tempdir().unwrap();
    write_structure(tmp.path(), "tc33.rst", &two_class(3, 3));
    write_structure(tmp.path(), "cross.rst", &two_class(1, 1));
    write_structure(tmp.path(), "point.rst", &two_class(1, 0));

    let defeated = run_in(
        tmp.path(),
        &[
            "kriz",
            "--C",
            "tc33.rst",
            "--B",
            "cross.rst",
            "--A",
            "point.rst",
            "--t",
            "1",
            "--out",
            "witness.json",
        ],
    );
    assert_eq!(defeated.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&defeated.stdout);
    assert!(stdout.contains("product: 0,0,0,1,1,1"));
    assert!(std::fs::read_to_string(tmp.path().join("witness.json"))
        .unwrap()
        .contains("entries"));

    let success = run_in(
        tmp.path(),
        &[
            "kriz",
            "--C",
            "tc33.rst",
            "--B",
            "cross.rst",
            "--A",
            "point.rst",
            "--t",
            "2",
        ],
    );
    assert_eq!(success.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&success.stdout).contains("relation: 0,1"));

    let gen = run_in(
        tmp.path(),
        &["generate", "--family", "two_class:3,3", "--out", "tc"],
    );
    assert_eq!(gen.status.code(), Some(0));
    let degree = run_in(
        tmp.path(),
        &[
            "degree",
            "--A",
            "point.rst",
            "--fragment",
            "tc/manifest.json",
            "--size-limit",
            "2",
        ],
    );
    assert_eq!(degree.status.code(), Some(0), "{:?}", degree);
    let stdout = String::from_utf8_lossy(&degree.stdout);
    assert!(stdout.contains("lower: 2"));
    assert!(stdout.contains("upper: 2"));
}

#[test]
fn expansion_pipeline_via_cli() {
    let tmp = tempfile::tempdir().unwrap();
    write_structure(tmp.path(), "tc33.rst", &two_class(3, 3));
    write_structure(tmp.path(), "cross.rst", &two_class(1, 1));
    write_structure(tmp.path(), "point.rst", &two_class(1, 0));

    let expand = run_in(
        tmp.path(),
        &[
            "expand",
            "--structure",
            "tc33.rst",
            "--A",
            "point.rst",
            "--relation",
            "0,0,0,1,1,1",
            "--classes",
            "2",
            "--out",
            "expanded.json",
            "--age-out",
            "kstar",
        ],
    );
    assert_eq!(expand.status.code(), Some(0), "{:?}", expand);
    let expanded = io::read_expanded_file(&tmp.path().join("expanded.json")).unwrap();
    assert_eq!(expanded.reduct().unwrap(), two_class(3, 3));

    let gen = run_in(
        tmp.path(),
        &["generate", "--family", "two_class:3,3", "--out", "base"],
    );
    assert_eq!(gen.status.code(), Some(0));

    let pre = run_in(
        tmp.path(),
        &[
            "precompact",
            "--base",
            "base/manifest.json",
            "--expanded",
            "kstar/manifest.json",
            "--bound",
            "2",
        ],
    );
    assert_eq!(pre.status.code(), Some(0), "{:?}", pre);

    let lb = run_in(
        tmp.path(),
        &[
            "lower-bound",
            "--A",
            "point.rst",
            "--B",
            "cross.rst",
            "--expanded",
            "kstar/manifest.json",
            "--t",
            "2",
        ],
    );
    assert_eq!(lb.status.code(), Some(0));
    let lb_fail = run_in(
        tmp.path(),
        &[
            "lower-bound",
            "--A",
            "point.rst",
            "--B",
            "point.rst",
            "--expanded",
            "kstar/manifest.json",
            "--t",
            "2",
        ],
    );
    assert_eq!(lb_fail.status.code(), Some(1));

    let ep = run_in(
        tmp.path(),
        &[
            "expansion-property",
            "--base",
            "base/manifest.json",
            "--expanded",
            "kstar/manifest.json",
        ],
    );
    assert_eq!(ep.status.code(), Some(0), "{:?}", ep);
    assert!(String::from_utf8_lossy(&ep.stdout).contains("witness"));

    let reas = run_in(
        tmp.path(),
        &[
            "reasonability",
            "--base",
            "base/manifest.json",
            "--expanded",
            "kstar/manifest.json",
        ],
    );
    assert_eq!(reas.status.code(), Some(0));
}

#[test]
fn koenig_branch_via_cli() {
    let tmp = tempfile::tempdir().unwrap();
    write_structure(tmp.path(), "top.rst", &two_class(3, 3));
    write_structure(tmp.path(), "ambient.rst", &two_class(5, 5));
    write_structure(tmp.path(), "point.rst", &two_class(1, 0));
    std::fs::write(
        tmp.path().join("chain.json"),
        "{\"ambient\": \"ambient.rst\", \"levels\": [[0, 3], [0, 1, 3, 4], [0, 1, 2, 3, 4, 5]], \"pattern\": \"point.rst\", \"top\": \"top.rst\"}\n",
    )
    .unwrap();
    let koenig = run_in(tmp.path(), &["koenig", "--chain", "chain.json", "--t", "2"]);
    assert_eq!(koenig.status.code(), Some(0), "{:?}", koenig);
    let stdout = String::from_utf8_lossy(&koenig.stdout);
    assert!(stdout.contains("branch: found depth 2"));
    assert!(stdout.contains("relation 0,0,0,1,1,1"));
}

#[test]
fn ramsey_report_and_undecided_exit() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = run_in(
        tmp.path(),
        &[
            "generate",
            "--family",
            "ordered:pure_sets:3",
            "--out",
            "chains3",
        ],
    );
    assert_eq!(gen.status.code(), Some(0));
    // Host limit 3 leaves (2-chain, 3-chain) undecided.
    let ramsey = run_in(
        tmp.path(),
        &[
            "ramsey",
            "--expanded",
            "chains3/manifest.json",
            "--host-limit",
            "3",
        ],
    );
    assert_eq!(ramsey.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&ramsey.stdout);
    assert!(stdout.contains("holds with host"));
    assert!(stdout.contains("undecided within fragment"));
}

#[test]
fn export_cnf_writes_dimacs_and_legend() {
    let tmp = tempfile::tempdir().unwrap();
    chain_files(tmp.path());
    let export = run_in(
        tmp.path(),
        &[
            "export-cnf",
            "--C",
            "chain5.rst",
            "--B",
            "chain3.rst",
            "--A",
            "chain2.rst",
            "--k",
            "2",
            "--t",
            "1",
            "--out",
            "arrow.cnf",
        ],
    );
    assert_eq!(export.status.code(), Some(0), "{:?}", export);
    let dimacs = std::fs::read_to_string(tmp.path().join("arrow.cnf")).unwrap();
    assert!(dimacs.starts_with("p cnf "));
    let legend = std::fs::read_to_string(tmp.path().join("arrow.legend")).unwrap();
    assert!(legend.contains("param k 2"));
    assert!(legend.contains("copyA 0 0,1"));
}

#[test]
fn copies_listing() {
    let tmp = tempfile::tempdir().unwrap();
    chain_files(tmp.path());
    let copies = run_in(
        tmp.path(),
        &["copies", "--A", "chain2.rst", "--C", "chain4.rst"],
    );
    assert_eq!(copies.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&copies.stdout);
    assert!(stdout.contains("copies: 6"));
    assert!(stdout.contains("copy: 0,1"));
    assert!(stdout.contains("copy: 2,3"));
}
