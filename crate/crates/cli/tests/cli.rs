//! End-to-end tests of the binary: exit codes, document round trips, and
//! witness output.

use std::path::Path;
use std::process::{Command, Output};

use amou::element::Model;
use amou::isometry;
use amou::linalg::TolerancePolicy;
use amou_cli::document::{ElementDocument, WitnessDocument, F17};

fn amou_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amou"))
}

fn run(args: &[&str]) -> Output {
    amou_bin().args(args).output().expect("binary runs")
}

fn write_doc(dir: &Path, name: &str, doc: &ElementDocument) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn e12_doc() -> ElementDocument {
    ElementDocument {
        model: vec![2],
        shape: [1, 1],
        blocks: vec![vec![
            [F17(0.0), F17(0.0)],
            [F17(1.0), F17(0.0)],
            [F17(0.0), F17(0.0)],
            [F17(0.0), F17(0.0)],
        ]],
    }
}

fn proj_doc(rank: usize, seed: u64) -> ElementDocument {
    let model = Model::with_default_tol(vec![2]).unwrap();
    let p = isometry::random_projection(&model, 1, &[rank], seed).unwrap();
    ElementDocument::from_element(p.element().element())
}

#[test]
fn abs_of_matrix_unit() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(dir.path(), "e12.json", &e12_doc());
    let out = run(&["abs", &input]);
    assert!(out.status.success());
    let doc: amou_cli::document::AbsDocument = serde_json::from_slice(&out.stdout).unwrap();
    let abs = doc.abs.to_element(TolerancePolicy::default()).unwrap();
    let abs_star = doc.abs_star.to_element(TolerancePolicy::default()).unwrap();
    // oracle: |e12| = diag(0,1), |e12^*| = diag(1,0)
    assert!((abs.block(0).get(1, 1).re - 1.0).abs() < 1e-12);
    assert!(abs.block(0).get(0, 0).norm() < 1e-12);
    assert!((abs_star.block(0).get(0, 0).re - 1.0).abs() < 1e-12);

    // zero document maps to zeros
    let zero = ElementDocument {
        model: vec![2],
        shape: [1, 1],
        blocks: vec![vec![[F17(0.0), F17(0.0)]; 4]],
    };
    let input = write_doc(dir.path(), "zero.json", &zero);
    let out = run(&["abs", &input]);
    assert!(out.status.success());
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["abs", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // missing file is also a parse failure
    let out = run(&["abs", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shape_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let doc = ElementDocument {
        model: vec![2],
        shape: [1, 1],
        blocks: vec![vec![[F17(0.0), F17(0.0)]; 3]],
    };
    let input = write_doc(dir.path(), "badshape.json", &doc);
    let out = run(&["abs", &input]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_predicates() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(dir.path(), "p.json", &proj_doc(1, 5));
    let out = run(&["check", "order-projection", &p]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("order-projection"));
    assert!(stdout.contains("residual"));

    // e12 is a partial isometry but not an order projection
    let v = write_doc(dir.path(), "e12.json", &e12_doc());
    let out = run(&["check", "partial-isometry", &v]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", "order-projection", &v]);
    assert_eq!(out.status.code(), Some(1));

    // unknown predicate
    let out = run(&["check", "borderline", &v]);
    assert_eq!(out.status.code(), Some(4));

    // orthogonality needs two documents
    let w = write_doc(dir.path(), "e21.json", &{
        let mut d = e12_doc();
        d.blocks[0].swap(1, 2);
        d
    });
    let out = run(&["check", "orthogonal", &v, &w]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", "orthogonal", &v, &v]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["check", "orthogonal", &v]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn equiv_writes_certified_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(dir.path(), "p.json", &proj_doc(1, 10));
    let q = write_doc(dir.path(), "q.json", &proj_doc(1, 11));
    let out_path = dir.path().join("witness.json");
    let out = run(&[
        "equiv",
        &p,
        &q,
        "--relation",
        "mvn",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: WitnessDocument =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(doc.holds);
    // the written witness re-certifies against the endpoints
    let tol = TolerancePolicy::default();
    let w = doc.witness.unwrap().to_element(tol).unwrap();
    let pi = isometry::certify_partial_isometry(&w).unwrap();
    assert!(pi.residual() <= 1e-9);
    let p = proj_doc(1, 10).to_element(tol).unwrap();
    assert!(pi.range_proj().element().element().approx_eq(&p).unwrap());
}

#[test]
fn equiv_rank_mismatch_exits_1_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(dir.path(), "p.json", &proj_doc(1, 20));
    let q = write_doc(dir.path(), "q.json", &proj_doc(2, 21));
    let out = run(&["equiv", &p, &q, "--relation", "mvn"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: WitnessDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!doc.holds);
    assert!(doc.detail.unwrap().contains("ranks"));
}

#[test]
fn equiv_non_projection_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(dir.path(), "p.json", &proj_doc(1, 30));
    let v = write_doc(dir.path(), "v.json", &e12_doc());
    let out = run(&["equiv", &p, &v]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn equiv_sub_and_unitary_relations() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(dir.path(), "p.json", &proj_doc(1, 40));
    let q = write_doc(dir.path(), "q.json", &proj_doc(2, 41));
    let out = run(&["equiv", &p, &q, "--relation", "sub"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: WitnessDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.holds && doc.dominated.is_some() && doc.complement.is_some());

    // reverse direction fails
    let out = run(&["equiv", &q, &p, "--relation", "sub"]);
    assert_eq!(out.status.code(), Some(1));

    let q2 = write_doc(dir.path(), "q2.json", &proj_doc(1, 42));
    let out = run(&["equiv", &p, &q2, "--relation", "unitary"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: WitnessDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.holds && doc.unitary.is_some());

    // unknown relation
    let out = run(&["equiv", &p, &q, "--relation", "weird"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn suite_exit_codes() {
    let out = run(&["suite", "nonsense", "--cases", "1"]);
    assert_eq!(out.status.code(), Some(4));
    // zero cases: an empty passing report
    let out = run(&["suite", "prop6", "--cases", "0", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: amou_cli::report::SuiteReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.cases, 0);
    assert!(report.passed());
}

#[test]
fn coverage_lists_all_suites() {
    let out = run(&["coverage"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), amou_cli::suites::SUITES.len());
    for id in [
        "prop1",
        "prop5",
        "prop6",
        "norm",
        "remark3",
        "remark4",
        "remark7",
        "remark8",
        "prop9",
        "cor10",
        "prop11",
        "lemma12",
        "conj",
        "H",
        "T",
        "lemma13",
        "prop14",
        "prop15",
        "prop16",
        "prop17",
        "prop18",
        "cor-u",
        "prop19",
        "sec5-matrix",
        "sec5-cardinal",
    ] {
        assert!(
            lines.iter().any(|l| l.starts_with(&format!("{id}\t"))),
            "missing suite {id}"
        );
    }
}
