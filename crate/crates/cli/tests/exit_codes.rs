use std::path::{Path, PathBuf};
use std::process::Command;

fn game(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../games").join(name).display().to_string()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cbr-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn cbr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cbr")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn success_and_usage() {
    let pd = game("prisoners_dilemma.toml");
    assert_eq!(cbr(&["equilibria", &pd]).0, 0);
    assert_eq!(cbr(&["--help"]).0, 0);
    assert_eq!(cbr(&["frobnicate"]).0, 1);
    assert_eq!(cbr(&["equilibria"]).0, 1);
    assert_eq!(cbr(&["equilibria", "--mode", "sideways", &pd]).0, 1);
    assert_eq!(cbr(&["equilibria", "--format", "dot", &pd]).0, 1);
    assert_eq!(cbr(&["stable", "--eps", "1e-1..3e-3", &pd]).0, 1);
    assert_eq!(cbr(&["simulate", "--eps", "1/10", "--start", "(a9,b9)", &pd]).0, 1);
    assert_eq!(cbr(&["netform", &pd]).0, 1);
}

#[test]
fn parse_errors_report_position() {
    let missing = game("no_such_file.toml");
    assert_eq!(cbr(&["equilibria", &missing]).0, 2);
    let bad = scratch("bad.toml", "players = 2\nactions = [[\"a1\"], [\"b1\"]]\npayoffs = [\n  { profile = [\"a1\", \"b1\"], payoff = [1, 2.5] },\n]\n");
    let (code, _, err) = cbr(&["equilibria", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4, column 42"), "{err}");
    let grammar = scratch("grammar.toml", "players = 2\nactions = [[\"a1\"\n");
    let (code, _, err) = cbr(&["equilibria", grammar.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn validation_errors() {
    let dup = scratch(
        "dup.toml",
        "players = 1\nactions = [[\"a1\", \"a2\"]]\npayoffs = [\n  { profile = [\"a1\"], payoff = [1] },\n  { profile = [\"a1\"], payoff = [2] },\n]\n",
    );
    let (code, _, err) = cbr(&["equilibria", dup.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("duplicate payoff row for profile (a1)"), "{err}");
    assert!(err.contains("missing payoff"), "{err}");
    let pd = game("prisoners_dilemma.toml");
    let (code, _, err) = cbr(&["stable", "--eps", "1,1/10", &pd]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = cbr(&["chain", "--eps", "2", &pd]);
    assert_eq!(code, 3);
}

#[test]
fn caps_are_enforced() {
    // 7-node network: 2^21 networks, over the node cap
    let big = scratch("big.toml", "nodes = 7\nvalues = []\n");
    let (code, _, err) = cbr(&["equilibria", big.to_str().unwrap()]);
    assert_eq!(code, 4, "{err}");
    // 17 players exceed the player cap before any payoff is read
    let actions = vec!["[\"x\"]"; 17].join(", ");
    let wide = scratch("wide.toml", &format!("players = 17\nactions = [{actions}]\npayoffs = []\n"));
    let (code, _, err) = cbr(&["equilibria", wide.to_str().unwrap()]);
    assert_eq!(code, 4, "{err}");
    // 6-node network is fine for stability but over the chain cap
    let six = scratch("six.toml", &six_node_network());
    let (code, out, err) = cbr(&["equilibria", six.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("strongly stable networks: 1"), "{out}");
    assert!(out.contains("recurrent classes: not computed"), "{out}");
    assert_eq!(cbr(&["graph", six.to_str().unwrap()]).0, 4);
    let (code, _, err) = cbr(&["chain", six.to_str().unwrap()]);
    assert_eq!(code, 4, "{err}");
}

fn six_node_network() -> String {
    let edges: Vec<(usize, usize)> = (1..=6).flat_map(|i| (i + 1..=6).map(move |j| (i, j))).collect();
    let mut text = String::from("nodes = 6\nvalues = [\n");
    for mask in 0u32..(1 << edges.len()) {
        let list: Vec<String> =
            edges.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, (i, j))| format!("[{i}, {j}]")).collect();
        let v = mask.count_ones();
        text.push_str(&format!("  {{ edges = [{}], payoff = [{v}, {v}, {v}, {v}, {v}, {v}] }},\n", list.join(", ")));
    }
    text.push_str("]\n");
    text
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let pd = game("prisoners_dilemma.toml");
    let args = ["simulate", "--eps", "1/20", "--horizon", "20000", "--seed", "3", "--replicas", "3", &pd];
    let a = cbr(&args);
    let b = cbr(&args);
    assert_eq!(a, b);
    let out = std::env::temp_dir().join(format!("cbr-out-{}.dot", std::process::id()));
    let (code, stdout, _) = cbr(&["graph", "--format", "dot", "-o", out.to_str().unwrap(), &pd]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("digraph deviations {"));
}
