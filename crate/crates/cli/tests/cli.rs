use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flagwedge"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_then_homology_on_celegans() {
    let csv = data("celegans/NeuronConnect.csv");
    let built = run(&["build", "dfl", csv.to_str().unwrap()]);
    assert!(built.status.success());
    let h = run_stdin(&["homology", "--betti-only"], &stdout(&built));
    assert_eq!(stdout(&h), "betti: [1, 183, 249, 134, 105, 63, 19, 5]\n");
}

#[test]
fn cone_and_collapse_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cx = dir.path().join("sphere.cx");
    // Boundary of a tetrahedron.
    fs::write(&cx, "0 1 2\n0 1 3\n0 2 3\n1 2 3\n").unwrap();
    let cert = dir.path().join("cert.txt");
    let o = run(&["cone-and-collapse", cx.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert!(o.status.success());
    let v = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v), "OK\nwedge: S^2*1\n");

    let text = fs::read_to_string(&cert).unwrap();
    let tampered = text.replacen("\nC ", "\nC 9", 1);
    assert_ne!(tampered, text);
    fs::write(&cert, tampered).unwrap();
    assert_eq!(run(&["verify", cert.to_str().unwrap()]).status.code(), Some(1));

    fs::write(&cert, "not a certificate\n").unwrap();
    assert_eq!(run(&["verify", cert.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_collections() {
    let o = run(&["classify", "--collection", data("tournaments/reg7.trn").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("# homotopy types: 3 (unresolved: 0, errors: 0)\n"));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.trn");
    fs::write(&f, "101\n10\n").unwrap();
    assert_eq!(run(&["classify", "--collection", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_single_graph() {
    let o = run_stdin(&["classify"], "0 1\n1 2\n2 0\n");
    assert_eq!(stdout(&o), "CERTIFIED-WEDGE S^1*1\n");
    let o = run_stdin(&["classify"], "0 1\n0 2\n2 1\n");
    assert_eq!(stdout(&o), "CONTRACTIBLE pt\n");
}

#[test]
fn input_errors_exit_two() {
    let o = run_stdin(&["homology"], "0 0\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let o = run_stdin(&["build", "dfl"], "0 1\n0 1\n");
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn edge_list_round_trip_through_gen_random() {
    let o = run(&["gen-random", "--n", "8", "--p", "0.4", "--seed", "3"]);
    let text = stdout(&o);
    let again = run(&["gen-random", "--n", "8", "--p", "0.4", "--seed", "3"]);
    assert_eq!(text, stdout(&again));
    let built = run_stdin(&["build", "uflag"], &text);
    assert!(built.status.success());
}

#[test]
fn tflag_output_feeds_homology() {
    let built = run_stdin(&["build", "tflag"], "0 1\n1 2\n2 0\n");
    let text = stdout(&built);
    assert!(text.contains("0 1 2 : 101\n"));
    let h = run_stdin(&["homology"], &text);
    assert_eq!(stdout(&h), "0: betti=1 torsion=[]\n1: betti=0 torsion=[]\n2: betti=0 torsion=[]\n");
}

#[test]
fn pop_everything_and_collapse() {
    let circle = "0 1\n1 2\n0 2\n";
    assert_eq!(stdout(&run_stdin(&["pop-everything"], circle)), "success: S^1*1\n");
    let o = run_stdin(&["collapse"], "0 1 2\n2 3\n");
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn generated_files_match_generators() {
    for (family, n, file) in [("regular", "9", "reg9.trn"), ("all", "5", "all5.trn"), ("doubly-regular", "15", "drt15.trn")] {
        let o = run(&["gen-tournaments", "--family", family, "--n", n]);
        assert_eq!(stdout(&o), fs::read_to_string(data(&format!("tournaments/{file}"))).unwrap(), "{file}");
    }
}

#[test]
fn automorphisms_of_celegans() {
    let o = run(&["autgroup", data("celegans/NeuronConnect.csv").to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.starts_with("classes: 275 singletons, 2 larger\n"));
    assert!(out.contains("order: 4\nklein four: yes\n"));
}
