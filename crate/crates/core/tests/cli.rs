#![allow(clippy::needless_range_loop)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netgen::cli::read_matrix_csv;

const BIN: &str = env!("CARGO_BIN_EXE_netgen");

fn netgen(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("NETGEN_SEED")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = netgen(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/family_exemplars.tsv")
}

fn edge_lines(text: &str) -> usize {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .count()
}

#[test]
fn missing_file_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = netgen(dir.path(), &["evolve", "nope.txt", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
    assert_eq!(netgen(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(netgen(dir.path(), &["synth"]).status.code(), Some(2));
}

#[test]
fn bad_expression_is_a_usage_error_and_impossible_size_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.gen", "add(k,\n");
    let out = netgen(dir.path(), &["synth", "bad.gen"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    write(dir.path(), "k.gen", "k\n");
    let out = netgen(
        dir.path(),
        &["synth", "k.gen", "--nodes", "4", "--edges", "7"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synth_writes_exact_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k.gen", "k\n");
    let text = ok(
        dir.path(),
        &[
            "synth", "k.gen", "--nodes", "200", "--edges", "800", "--seed", "3",
        ],
    );
    assert_eq!(edge_lines(&text), 800);
    assert!(text.starts_with("# generator: k_i\n"));
    assert!(text.contains("\"seed\":3"));
    assert_eq!(
        text,
        ok(
            dir.path(),
            &["synth", "k.gen", "--nodes", "200", "--edges", "800", "--seed", "3"]
        )
    );
    assert_ne!(
        text,
        ok(
            dir.path(),
            &["synth", "k.gen", "--nodes", "200", "--edges", "800", "--seed", "4"]
        )
    );
    let empty = ok(
        dir.path(),
        &["synth", "k.gen", "--nodes", "20", "--edges", "0"],
    );
    assert_eq!(edge_lines(&empty), 0);
}

#[test]
fn seed_layering() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k.gen", "k\n");
    write(dir.path(), "run.cfg", "nodes = 30\nedges = 40\nseed = 9\n");
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(BIN);
        c.current_dir(dir.path())
            .args(["synth", "k.gen", "--config", "run.cfg"])
            .args(extra);
        match env {
            Some(v) => c.env("NETGEN_SEED", v),
            None => c.env_remove("NETGEN_SEED"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let from_file = run(Some("1"), &[]);
    assert!(from_file.contains("\"seed\":9"));
    assert!(run(Some("1"), &["--seed", "2"]).contains("\"seed\":2"));
    std::fs::write(dir.path().join("run.cfg"), "nodes = 30\nedges = 40\n").unwrap();
    assert!(run(Some("5"), &[]).contains("\"seed\":5"));
}

#[test]
fn stats_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.txt", "1 2\n2 3\n3 1\n");
    let text = ok(dir.path(), &["stats", "tri.txt"]);
    assert!(text.lines().any(|l| l == "triangle: 1.0"), "{text}");
    assert!(text.lines().any(|l| l == "open_triad: 0.0"));
    assert!(text.lines().any(|l| l == "nodes: 3"));
}

#[test]
fn stats_drop_ego_removes_node() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "ego.txt", "7 1\n7 2\n7 3\n1 2\n");
    let text = ok(dir.path(), &["stats", "ego.txt", "--drop-ego", "7"]);
    assert!(text.lines().any(|l| l == "nodes: 3"));
    assert!(text.lines().any(|l| l == "edges: 1"));
}

#[test]
fn evolve_is_deterministic_and_names_the_best_run() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k.gen", "k\n");
    let target = ok(
        dir.path(),
        &[
            "synth", "k.gen", "--nodes", "60", "--edges", "150", "--seed", "1",
        ],
    );
    write(dir.path(), "target.txt", &target);
    let args = |out: &str| {
        vec![
            "evolve".to_string(),
            "target.txt".into(),
            "--runs".into(),
            "5".into(),
            "--seed".into(),
            "42".into(),
            "--generations".into(),
            "15".into(),
            "--out".into(),
            out.into(),
        ]
    };
    for out in ["a", "b"] {
        let a: Vec<String> = args(out);
        ok(
            dir.path(),
            &a.iter().map(String::as_str).collect::<Vec<_>>(),
        );
    }
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "best_generator.txt",
            "labels.tsv",
            "run_0.json",
            "run_1.json",
            "run_2.json",
            "run_3.json",
            "run_4.json",
            "summary.json"
        ]
    );
    for name in &names {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/summary.json")).unwrap())
            .unwrap();
    let fits: Vec<f64> = summary["runs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["fitness"].as_f64().unwrap())
        .collect();
    let best = summary["best_run"].as_u64().unwrap() as usize;
    assert!(fits.iter().all(|&f| fits[best] <= f));
    assert_eq!(summary["config"]["evolution"]["seed"], 42);
    let best_file = std::fs::read_to_string(dir.path().join("a/best_generator.txt")).unwrap();
    let body = netgen::cli::parse_generator_text(&best_file).unwrap();
    assert_eq!(body, summary["best_expression"].as_str().unwrap());
}

#[test]
fn fitness_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.gen", "0.5\n");
    let target = ok(
        dir.path(),
        &["synth", "c.gen", "--nodes", "50", "--edges", "120"],
    );
    write(dir.path(), "t.txt", &target);
    let text = ok(dir.path(), &["fitness", "t.txt", "c.gen", "--seed", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let r = &v["report"];
    let ratios = ["k_d", "PR_d", "d_d", "tau_d"].map(|k| r["ratios"][k].as_f64().unwrap());
    assert_eq!(
        r["fitness"].as_f64().unwrap(),
        ratios.iter().copied().fold(f64::MIN, f64::max)
    );
    assert_eq!(
        text,
        ok(dir.path(), &["fitness", "t.txt", "c.gen", "--seed", "3"])
    );
}

#[test]
fn atlas_embed_classify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "er.gen", "0.5\n");
    write(dir.path(), "pa.gen", "k\n");
    write(dir.path(), "sc.gen", "aff(5, exp(k), 1)\n");
    let args = [
        "atlas", "er.gen", "pa.gen", "sc.gen", "--nodes", "120", "--edges", "500", "--out", "atlas",
    ];
    ok(dir.path(), &args);
    for name in ["degree", "pagerank", "distance", "motif", "combined"] {
        let (ids, m) = read_matrix_csv(&dir.path().join(format!("atlas/{name}.csv"))).unwrap();
        assert_eq!(ids, ["er", "pa", "sc"]);
        for i in 0..3 {
            assert_eq!(m[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i], "{name}");
            }
        }
    }
    let first = std::fs::read(dir.path().join("atlas/combined.csv")).unwrap();
    ok(dir.path(), &args);
    assert_eq!(
        first,
        std::fs::read(dir.path().join("atlas/combined.csv")).unwrap()
    );

    ok(dir.path(), &["embed", "atlas", "--out", "emb.csv", "--svg"]);
    let csv = std::fs::read_to_string(dir.path().join("emb.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "id,x,y,family");
    assert!(rows[1].starts_with("er,") && rows[1].ends_with(",ER"));
    assert!(rows[2].ends_with(",PA") && rows[3].ends_with(",SC-beta"));
    let svg = std::fs::read_to_string(dir.path().join("emb.svg")).unwrap();
    assert_eq!(svg.matches("<title>").count(), 3);
    assert_eq!(csv, ok(dir.path(), &["embed", "atlas"]));

    let classified = ok(dir.path(), &["classify", "er.gen", "pa.gen", "sc.gen"]);
    let fams: Vec<&str> = classified
        .lines()
        .skip(2)
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(fams, ["ER", "PA", "SC-beta"]);
}

#[test]
fn classify_fixture_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture(), dir.path().join("exemplars.tsv")).unwrap();
    let text = ok(dir.path(), &["classify", "."]);
    let legend = [
        "14", "58", "18", "26", "193", "126", "90", "104", "148", "25", "156", "128", "8",
    ];
    for row in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = row.split('\t').collect();
        if legend.contains(&cols[0]) {
            assert_eq!(cols[1], cols[2], "{row}");
        }
    }
    assert!(text.trim_end().ends_with("# agreement: 88/91"));
}
