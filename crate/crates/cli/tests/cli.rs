use std::fs;
use std::process::{Command, Output};

fn chordlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordlink")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tree_file(tag: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("chordlink-cli-{tag}-{}.tree", std::process::id()));
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn enumerate_lists_sorted_codes() {
    let o = chordlink(&["enumerate", "1", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k=2 [][a a]\nk=2 [a][a]\nk=2 [a a][]\n");
    let o = chordlink(&["enumerate", "2", "1", "--json"]);
    let v: Vec<String> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 3);
}

#[test]
fn enumerate_respects_cap() {
    let o = chordlink(&["--cap", "10", "enumerate", "3", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn graph_dot_marks_double_border() {
    let o = chordlink(&["graph", "k=2 [a b][b a]"]);
    let s = stdout(&o);
    assert!(s.contains("peripheries=2"));
    assert!(s.contains("dir=none"));
    let o = chordlink(&["graph", "k=1 [a b a b]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn equal_mod_relations() {
    // single isolated chord dies under 1T
    let o = chordlink(&["equal", "k=1 [a a b b]", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("equal"));
    let o = chordlink(&["--relations", "4t", "equal", "k=1 [a a b b]", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("not equal"));
    let o = chordlink(&["--json", "equal", "k=2 [a][a]", "k=2 [a][a]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equal"], true);
}

#[test]
fn dim_matches_known_values() {
    let o = chordlink(&["--relations", "4t", "dim", "2", "1"]);
    assert!(stdout(&o).contains("dimension 2"));
    let o = chordlink(&["--json", "dim", "3", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 1);
}

#[test]
fn dim_uses_cache_dir() {
    let dir = std::env::temp_dir().join(format!("chordlink-cli-cache-{}", std::process::id()));
    let d = dir.to_string_lossy().into_owned();
    let a = stdout(&chordlink(&["--cache-dir", &d, "dim", "3", "2"]));
    let b = stdout(&chordlink(&["--cache-dir", &d, "dim", "3", "2"]));
    assert_eq!(a, b);
    assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn torsion_small_and_gated() {
    let o = chordlink(&["--ring", "z", "torsion", "3", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("invariant factors []"));
    assert!(!stdout(&o).contains("torsion pair"));
    let o = chordlink(&["torsion", "5", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn realizable_and_reconstruct() {
    let accepted = tree_file("ok", "# two marked chords\nv x 1 2\nv y 2 3\ne x -> y\n");
    let o = chordlink(&["realizable", &accepted]);
    assert_eq!(stdout(&o).lines().next(), Some("accepted"));
    let o = chordlink(&["reconstruct", &accepted, "--verify"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("k=3 "));
    assert!(s.contains("round trip: ok"));
    // deterministic
    assert_eq!(stdout(&chordlink(&["reconstruct", &accepted])), stdout(&chordlink(&["reconstruct", &accepted])));

    let rejected = tree_file("bad", "v x 1 3\n");
    let o = chordlink(&["realizable", &rejected, "-n", "3"]);
    assert_eq!(stdout(&o).lines().next(), Some("rejected"));
    let o = chordlink(&["reconstruct", &rejected, "-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    for f in [accepted, rejected] {
        fs::remove_file(f).unwrap();
    }
}

#[test]
fn orbit_is_sorted() {
    let o = chordlink(&["orbit", "k=2 [a][a]"]);
    assert_eq!(stdout(&o), "k=2 [a][a]\n");
    let o = chordlink(&["orbit", &"k=2 [b v b][c v c]".to_string()]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
    assert!(!lines.is_empty());
}

#[test]
fn verify_exit_codes() {
    let o = chordlink(&["verify", "thm-2comp", "--max-degree", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("thm-2comp: PASS"));
    let o = chordlink(&["verify", "thm-ncomp", "--max-degree", "2"]);
    assert!(o.status.success());
    // the light-bough duality fails at an unmarked vertex in degree 3
    let o = chordlink(&["verify", "lemma-share", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
    let o = chordlink(&["--json", "verify", "prop-orbit", "--max-degree", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn json_is_stable() {
    let a = stdout(&chordlink(&["--json", "verify", "centrality", "--max-degree", "3"]));
    let b = stdout(&chordlink(&["--json", "verify", "centrality", "--max-degree", "3"]));
    assert_eq!(a, b);
}
