mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use ttmaps::format::parse;

fn ttmaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttmaps")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    common::corpus_dir().join(name).to_string_lossy().into_owned()
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn analyze_gamma_reports_flags_and_lambda() {
    let o = ttmaps(&["--json", "analyze", &corpus("gamma.tt")]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 1);
    let l = &lines[0];
    assert_eq!(l["schema_version"], 1);
    assert_eq!(l["kind"], "analysis");
    let p = &l["payload"];
    for flag in ["irreducible", "expanding", "train_track", "vertex_periodic"] {
        assert_eq!(p["flags"][flag], true, "{flag}");
    }
    assert_eq!(p["lambda"]["char_poly"], "x^7 - x^2 - x - 1");
    assert_eq!(p["m"], 2);
    assert_eq!(p["fold_bound_holds"], true);
}

#[test]
fn every_line_carries_the_envelope() {
    for args in [
        vec!["--json", "decompose", "tests/corpus/delta2_g.tt"],
        vec!["--json", "eigen", "tests/corpus/rose4.tt"],
        vec!["--json", "stackgraph", "tests/corpus/gamma.tt"],
        vec!["--json", "verify", "--theorem", "A", "tests/corpus/rose2_fibonacci.tt"],
        vec!["--json", "score", "tests/corpus/theta_p32.tt"],
    ] {
        let args: Vec<String> = args
            .into_iter()
            .map(|a| match a.strip_prefix("tests/corpus/") {
                Some(f) => corpus(f),
                None => a.to_string(),
            })
            .collect();
        let o = ttmaps(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let lines = json_lines(&o);
        assert!(!lines.is_empty(), "{args:?}");
        for l in lines {
            assert_eq!(l["schema_version"], 1);
            assert!(l["kind"].is_string());
            assert!(l["payload"].is_object());
        }
    }
}

#[test]
fn periodic_maps_have_lambda_one() {
    let o = ttmaps(&["--json", "eigen", &corpus("rose3_permutation.tt")]);
    assert_eq!(o.status.code(), Some(0));
    let p = &json_lines(&o)[0]["payload"];
    assert_eq!(p["minimal_poly"], "x - 1");
    assert_eq!(p["lambda_float"], "1");
    let o = ttmaps(&["eigen", "--precision", "2^-60", &corpus("rose2_fibonacci.tt")]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("x^2 - x - 1"), "{text}");
    assert!(text.contains("1.61803"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tt");
    std::fs::write(&bad, "graph G\nvertex v\nnonsense here\n").unwrap();
    let o = ttmaps(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let o = ttmaps(&["analyze", dir.path().join("missing.tt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = ttmaps(&["analyze"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ttmaps(&["verify", "--theorem", "nope"]);
    assert_eq!(o.status.code(), Some(2));

    // not a homotopy equivalence: the fold bound cannot be checked
    let o = ttmaps(&["--json", "verify", "--theorem", "A", &corpus("stack_example_f.tt")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o)[0]["kind"], "error");

    let o = ttmaps(&["verify", "--theorem", "A", &corpus("gamma.tt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass"));
}

#[test]
fn census_resumes_to_the_same_answer() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let ck = ck.to_str().unwrap();
    let query = ["census", "--rank", "2", "--max-folds", "2", "--edges", "2..5", "--bound", "x^2 - 3"];
    let mut first = query.to_vec();
    first.extend(["--checkpoint", ck, "--checkpoint-every", "5", "--max-candidates", "20"]);
    let o = ttmaps(&first);
    assert_eq!(o.status.code(), Some(1));
    assert!(Path::new(ck).exists());

    let resumed = ttmaps(&["--json", "census", "--resume", ck]);
    assert_eq!(resumed.status.code(), Some(0));
    let mut full = vec!["--json"];
    full.extend(query);
    let fresh = ttmaps(&full);
    assert_eq!(resumed.stdout, fresh.stdout);

    let lines = json_lines(&fresh);
    let summary = lines.last().unwrap();
    assert_eq!(summary["kind"], "census_summary");
    let records: Vec<_> = lines.iter().filter(|l| l["kind"] == "census_record").collect();
    assert_eq!(summary["payload"]["records"], records.len());
    for r in records {
        let doc = parse(r["payload"]["document"].as_str().unwrap()).unwrap();
        assert_eq!(doc.maps.len(), 1);
        assert_eq!(doc.maps[0].2.excess(), r["payload"]["m"].as_u64().unwrap() as usize);
    }
}

#[test]
fn stack_graph_dot() {
    let o = ttmaps(&["stackgraph", "--dot", "-", &corpus("gamma.tt")]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.trim_start().starts_with("digraph"), "{text}");
    assert!(text.contains("->"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    let o = ttmaps(&["stackgraph", "--dot", path.to_str().unwrap(), &corpus("delta2_g.tt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(path).unwrap().starts_with("digraph"));
}

#[test]
fn witness_document_parses_and_lists_classes() {
    let o = ttmaps(&["--json", "verify", "--theorem", "B-witness", &corpus("delta2_g.tt")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = json_lines(&o);
    let p = &lines[0]["payload"];
    let text = p["document"].as_str().unwrap();
    let doc = parse(text).unwrap();
    let w = doc.graph("W").unwrap();
    let psi = doc.map("psi").unwrap();
    // psi permutes the edges of W
    let mut seen = vec![false; w.num_edges()];
    for e in 0..w.num_edges() {
        let img = psi.image(ttmaps::graph::OrientedEdge::fwd(e));
        assert_eq!(img.len(), 1);
        assert!(!std::mem::replace(&mut seen[img.0[0].edge], true));
    }
    let classes = text.lines().filter(|l| l.starts_with("#   ")).count();
    assert_eq!(classes as u64, p["class_count"].as_u64().unwrap());

    let analysis = json_lines(&ttmaps(&["--json", "analyze", &corpus("delta2_g.tt")]));
    assert_eq!(analysis[0]["payload"]["stacks"].as_array().unwrap().len(), classes);
}
