use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use kp3::io::{parse_instance, parse_weight};
use kp3::solvers::is_valid_coloring;
use kp3::VertexSet;

fn kp3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kp3")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const C5: &str = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\nparam k 2\n";

#[test]
fn oct_on_five_cycle() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c5.txt", C5);
    let out = kp3(&["solve", "oct", s(&p), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["weight"], "1");
    assert_eq!(r["verdicts"]["oracle"], "match");
    assert_eq!(r["chosen"].as_array().unwrap().len(), 1);
}

#[test]
fn small_distance_is_a_precondition_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.txt", "p edge 3 2\ne 1 2\ne 2 3\nparam d 5\n");
    for cmd in ["dsis", "ldrcol"] {
        let out = kp3(&["solve", cmd, s(&p)]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("d = 5"));
    }
    let out = kp3(&["family", "gen-dist", s(&p)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mwlcis_oracle_match_on_generated_instance() {
    let dir = TempDir::new().unwrap();
    let gen = kp3(&["gen", "--rejection", "--n", "8", "--k", "2", "--seed", "3", "--r", "2"]);
    assert_eq!(gen.status.code(), Some(0));
    let text = String::from_utf8(gen.stdout).unwrap();
    let p = write(&dir, "g.txt", &text);
    let out = kp3(&["solve", "mwlcis", s(&p), "--oracle", "--verify-k"]);
    assert_eq!(out.status.code(), Some(0));
    let raw = String::from_utf8_lossy(&out.stdout);
    assert!(raw.contains("\"oracle\":\"match\""), "{raw}");

    // the reported set and colouring pass an independent check
    let inst = parse_instance(&text).unwrap();
    let r = report(&out);
    let chosen: VertexSet = r["chosen"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize - 1).collect();
    let coloring = r["coloring"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap() as usize - 1, p[1].as_u64().unwrap() as u32))
        .collect();
    assert!(is_valid_coloring(&inst.graph, &inst.lists, &chosen, &coloring, 2));
    assert_eq!(parse_weight(r["weight"].as_str().unwrap()).unwrap(), inst.weight_of(&chosen));
}

#[test]
fn rational_weights_in_reports() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "w.txt", "p edge 3 2\ne 1 2\ne 2 3\nw 1 1/3\nw 2 1/2\nw 3 1/4\nparam k 1\n");
    let r = report(&kp3(&["solve", "mwis", s(&p)]));
    assert_eq!(r["weight"], "7/12");
    assert_eq!(r["chosen"], serde_json::json!([1, 3]));
}

#[test]
fn ldrcol_reports_a_decision() {
    let dir = TempDir::new().unwrap();
    let yes = write(&dir, "y.txt", "p edge 2 1\ne 1 2\nparam r 2\nparam k 1\nparam d 6\n");
    let r = report(&kp3(&["solve", "ldrcol", s(&yes), "--oracle"]));
    assert_eq!(r["decision"], "yes");
    assert_eq!(r["verdicts"]["oracle"], "match");
    let no = write(&dir, "n.txt", "p edge 3 2\ne 1 2\ne 2 3\nparam r 2\nparam k 1\nparam d 6\n");
    let out = kp3(&["solve", "ldrcol", s(&no)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["decision"], "no");
    assert!(r["chosen"].is_null());
}

#[test]
fn wrong_k_is_caught_by_verify_k() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "two.txt", "p edge 6 4\ne 1 2\ne 2 3\ne 4 5\ne 5 6\nparam k 2\n");
    assert_eq!(kp3(&["solve", "mwis", s(&p), "--verify-k"]).status.code(), Some(2));
    assert_eq!(kp3(&["solve", "mwis", s(&p)]).status.code(), Some(0));
}

#[test]
fn parse_and_usage_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "p edge 3 1\ne 1 x\n");
    let out = kp3(&["solve", "mwis", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(kp3(&["solve", "mwis", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(kp3(&["solve", "nothing", s(&bad)]).status.code(), Some(1));
    assert_eq!(kp3(&["--help"]).status.code(), Some(0));
}

#[test]
fn family_gen_on_cluster_graph() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "k.txt", "p edge 4 1\ne 1 2\nparam k 1\n");
    let r = report(&kp3(&["family", "gen", s(&p), "--dump"]));
    assert_eq!(r["family_size"], 1);
    assert_eq!(r["members"], serde_json::json!([[1, 2, 3, 4]]));
    assert_eq!(r["within_bound"], true);
}

#[test]
fn family_gen_dist_avoids_forbidden_vertices() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p9.txt", &{
        let mut t = String::from("p edge 9 8\nparam k 3\nparam d 6\n");
        for i in 1..9 {
            t.push_str(&format!("e {} {}\n", i, i + 1));
        }
        t
    });
    let f = write(&dir, "f.txt", "f 1 5\n");
    let r = report(&kp3(&["family", "gen-dist", s(&p), "--forbidden", s(&f), "--dump"]));
    assert_eq!(r["forbidden"], serde_json::json!([1, 5]));
    for m in r["members"].as_array().unwrap() {
        for v in m.as_array().unwrap() {
            assert!(v != 1 && v != 5, "{m}");
        }
    }
    let out = kp3(&["family", "verify", s(&p), "--dist", "--forbidden", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["verdict"], "ok");
}

#[test]
fn family_verify_reports_counterexample() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c5.txt", C5);
    let good = kp3(&["family", "verify", s(&p)]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(report(&good)["verdict"], "ok");
    // {1,3} misses the maximal independent set {2,4}
    let fam = write(&dir, "fam.txt", "m 1 3\nm 1 4\nm 2 5\nm 3 5\n");
    let out = kp3(&["family", "verify", s(&p), "--family", s(&fam)]);
    assert_eq!(out.status.code(), Some(3));
    let verdict = report(&out)["verdict"].as_str().unwrap().to_string();
    assert!(verdict.starts_with("counterexample"), "{verdict}");
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--structured", "--n", "20", "--k", "2", "--seed", "7"];
    let a = kp3(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, kp3(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("p edge 20 "));
    let inst = parse_instance(&text).unwrap();
    assert_eq!(inst.k, 2);
}

#[test]
fn gen_k1_yields_cluster_graph() {
    let out = kp3(&["gen", "--k", "1", "--n", "10", "--seed", "5"]);
    let inst = parse_instance(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(inst.graph.is_p3_free());
}

#[test]
fn gen_rejection_gives_up_with_diagnostic() {
    let out = kp3(&["gen", "--rejection", "--n", "12", "--k", "1", "--density", "0.5", "--max-attempts", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gave up after 3 attempts"));
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c5.txt", C5);
    assert!(report(&kp3(&["solve", "mwis", s(&p)]))["elapsed_us"].is_null());
    assert!(report(&kp3(&["solve", "mwis", s(&p), "--timing"]))["elapsed_us"].is_u64());
}
