use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unideal"))
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn permanent_of_all_ones() {
    let d = TempDir::new().unwrap();
    let m = file(&d, "ones4.txt", "1 1 1 1\n1 1 1 1\n1 1 1 1\n1 1 1 1\n");
    let o = run(&["perm", "--matrix", s(&m), "--rank", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("24"));
    assert!(stdout(&o).contains("algorithm:"));
}

#[test]
fn zero_circuit_is_member() {
    let d = TempDir::new().unwrap();
    let c = file(&d, "zero.txt", "vars 2\nconst 0\nout 0\n");
    let i = file(&d, "any.txt", "var 0 : 1 0 1\nvar 1 : 2 3\n");
    let o = run(&["member", "--circuit", s(&c), "--ideal", s(&i), "--mode", "brute"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("MEMBER"));
}

#[test]
fn cycle_has_cover_of_two() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let o = run(&["vc", "--graph", s(&g), "--k", "2", "--seed", "1", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("HAS-VC"));
    assert!(out.contains("error bound:"));
    let o = run(&["vc", "--graph", s(&g), "--k", "1", "--seed", "1", "--trials", "20"]);
    assert_eq!(stdout(&o).lines().next(), Some("NO-VC"));
}

#[test]
fn same_seed_same_bytes() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.txt", "5 5\n0 1\n0 2\n1 3\n2 3\n3 4\n");
    let args = ["vc", "--graph", s(&g), "--k", "2", "--seed", "9", "--trials", "5", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let c = file(&d, "c.txt", "vars 3\nin 0\nin 1\nin 2\nmul 0 1\nmul 1 2\nadd 3 4\nout 5\n");
    let args = ["mlmd", "--circuit", s(&c), "--k", "2", "--exponents", "2 2 2", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn json_schema() {
    let d = TempDir::new().unwrap();
    let m = file(&d, "m.txt", "1 2\n2 4\n");
    let o = run(&["perm", "--matrix", s(&m), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["decision", "value", "error_bound", "seed", "algorithm", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["value"], "8");
    assert!(v["timings"].is_null());
    let o = run(&["perm", "--matrix", s(&m), "--json", "--timings"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["timings"]["total_ms"].is_number());
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(&["perm"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let bad = file(&d, "bad.txt", "vars 1\nfrobnicate 3\n");
    let i = file(&d, "i.txt", "var 0 : 0 1\n");
    let o = run(&["member", "--circuit", s(&bad), "--ideal", s(&i)]);
    assert_eq!(o.status.code(), Some(2));
    // (x0 + x1 + x2)^4 has 15 monomials.
    let c = file(&d, "c.txt", "vars 3\nlin 1 1 1\nmul 0 0 0 0\nout 1\n");
    let i = file(&d, "i3.txt", "var 0 : 1 0 0 0 0 1\nvar 1 : 1 0 0 0 0 1\nvar 2 : 1 0 0 0 0 1\n");
    let o = run(&["member", "--circuit", s(&c), "--ideal", s(&i), "--mode", "brute", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn auto_mode_prints_dispatch() {
    let d = TempDir::new().unwrap();
    let sq = file(&d, "sq.txt", "var 0 : 0 0 1\nvar 1 : 0 0 1\nvar 2 : 0 0 1\n");
    let c = file(&d, "c.txt", "vars 3\nin 0\nin 1\nmul 0 1\nout 2\n");
    let out = stdout(&run(&["member", "--circuit", s(&c), "--ideal", s(&sq)]));
    assert!(out.starts_with("NONMEMBER"));
    assert!(out.contains("mode: powers"));
    let lr = file(&d, "lr.txt", "vars 1\nin 0\nmul 0 0\nout 1\nform 1 1 1\n");
    let out = stdout(&run(&["member", "--lowrank", s(&lr), "--ideal", s(&sq)]));
    assert!(out.starts_with("NONMEMBER"));
    assert!(out.contains("mode: lowrank"));
    let gen = file(&d, "gen.txt", "var 0 : -1 0 1\nvar 1 : -1 0 1\nvar 2 : 0 1\n");
    let out = stdout(&run(&["member", "--circuit", s(&c), "--ideal", s(&gen)]));
    assert!(out.contains("mode: brute"));
}

#[test]
fn rem_eval_of_square() {
    let d = TempDir::new().unwrap();
    let lr = file(&d, "lr.txt", "vars 1\nin 0\nmul 0 0\nout 1\nform 1 1\n");
    let i = file(&d, "i.txt", "var 0 : 0 0 1\nvar 1 : 0 0 1\n");
    let o = run(&["rem-eval", "--lowrank", s(&lr), "--ideal", s(&i), "--point", "1 1"]);
    assert_eq!(stdout(&o).lines().next(), Some("2"));
}

#[test]
fn certificate_round_trip() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f.txt", "vars 2\nin 0\nin 1\nmul 0 1\nconst -1\nadd 2 3\nout 4\n");
    let i = file(&d, "i.txt", "var 0 : -2 0 1\nvar 1 : -3 0 1\n");
    let cert = d.path().join("cert.txt");
    let o = run(&["certify", "--circuit", s(&f), "--ideal", s(&i), "--search", "--out-cert", s(&cert)]);
    assert_eq!(stdout(&o).lines().next(), Some("NONMEMBER"));
    let o = run(&["certify", "--circuit", s(&f), "--ideal", s(&i), "--verify", s(&cert)]);
    assert_eq!(stdout(&o).lines().next(), Some("NONMEMBER"));
    // A point far from every root fails the residual test.
    let wrong = file(&d, "wrong.txt", "0 0\n0 0\n");
    let o = run(&["certify", "--circuit", s(&f), "--ideal", s(&i), "--verify", s(&wrong)]);
    assert_eq!(stdout(&o).lines().next(), Some("REJECTED"));
    // x0² − 2 is a member of its own ideal.
    let m = file(&d, "m.txt", "vars 2\nin 0\nmul 0 0\nconst -2\nadd 1 2\nout 3\n");
    let o = run(&["certify", "--circuit", s(&m), "--ideal", s(&i)]);
    assert_eq!(stdout(&o).lines().next(), Some("MEMBER"));
}

#[test]
fn reductions_feed_member() {
    let d = TempDir::new().unwrap();
    let sat = file(&d, "sat.txt", "4 2\n0 1 2\n1 2 3\n");
    let (c, i) = (d.path().join("c.txt"), d.path().join("i.txt"));
    let o = run(&["reduce", "one-in-three", "--in", s(&sat), "--out-circuit", s(&c), "--out-ideal", s(&i)]);
    assert_eq!(o.status.code(), Some(0));
    // x_1 = 1 alone satisfies both clauses.
    let out = stdout(&run(&["member", "--circuit", s(&c), "--ideal", s(&i), "--mode", "brute"]));
    assert!(out.starts_with("NONMEMBER"));

    let g = file(&d, "k3.txt", "3 3\n0 1\n1 2\n0 2\n");
    let o = run(&["reduce", "indep-set", "--in", s(&g), "--k", "2", "--out-circuit", s(&c), "--out-ideal", s(&i)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&run(&["member", "--circuit", s(&c), "--ideal", s(&i), "--mode", "brute"]));
    assert!(out.starts_with("MEMBER"));

    assert_eq!(run(&["reduce", "coloring", "--in", s(&g)]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS"));
}
