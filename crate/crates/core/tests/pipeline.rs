mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::demo_dir;
use mission_content::config::RunConfig;
use mission_content::pipeline::{run, sha256_hex, RunOptions, Stage};
use mission_content::{Error, ErrorKind};

/// Copy of the demo inputs in a fresh directory.
fn demo_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for f in ["corpus.csv", "sentiment.csv", "csr.csv", "demo.toml"] {
        std::fs::copy(demo_dir().join(f), dir.path().join(f)).unwrap();
    }
    dir
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn file_sha(path: impl AsRef<Path>) -> String {
    sha256_hex(&std::fs::read(path).unwrap())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mission-content"))
}

#[test]
fn demo_run_is_reproducible() {
    let (a, b) = (demo_copy(), demo_copy());
    for d in [&a, &b] {
        let cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
        run(&cfg, &RunOptions::default()).unwrap();
    }
    assert_eq!(
        read(a.path().join("out/manifest.json")),
        read(b.path().join("out/manifest.json"))
    );
}

#[test]
fn demo_outputs_match_golden_checksums() {
    let d = demo_copy();
    let cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
    let manifest = run(&cfg, &RunOptions::default()).unwrap();
    let golden = [
        (
            "metrics.csv",
            "fa30f8cf7de901d5d5263705d95ad9a7a1e46b9f0c581270b5eb44ca243dfd8b",
        ),
        (
            "tags.csv",
            "138a92aa44cc7c8f4fecbb0427e34c40182afd4651c0b53e4eb90df4d5b1fad8",
        ),
        (
            "sample.csv",
            "cdb504e492bcf4a50521306b30e3ecc85baea1056bc7694ed3dfe8c40c64c76a",
        ),
        (
            "network.json",
            "aa838e0ddc0995f1010a4f58e86f3a7687e9667f4811e430ba10116020e481fa",
        ),
        (
            "communities.csv",
            "e8d6e32adc50f7b7de05d482ea84bcaf1beaa4162ddd8b2f4f92c5a88de32107",
        ),
        (
            "dfm.csv",
            "d4d16ae890644d32a9eae541504fcce289af176040011b35c432c6fedccd08d0",
        ),
        (
            "dendrogram.nwk",
            "986e75dc5cd281f267dad794bbe87cce4f282ebd1270db3cd9462e3f2596bbe2",
        ),
    ];
    for (name, want) in golden {
        assert_eq!(file_sha(d.path().join("out").join(name)), want, "{name}");
    }
    for a in &manifest.artifacts {
        assert_eq!(file_sha(d.path().join("out").join(&a.path)), a.sha256, "{}", a.path);
    }
    assert_eq!(manifest.inputs[0].path, "corpus.csv");
    assert_eq!(manifest.seeds.sampling, Some(2024));
}

#[test]
fn seed_changes_sample_but_not_metrics() {
    let d = demo_copy();
    let mut cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
    run(&cfg, &RunOptions::default()).unwrap();
    let (sample, metrics) = (
        read(d.path().join("out/sample.csv")),
        read(d.path().join("out/metrics.csv")),
    );

    cfg.override_seed(7, false);
    cfg.output_dir = d.path().join("out7");
    let m = run(&cfg, &RunOptions::default()).unwrap();
    assert_eq!(m.seeds.network, 7);
    assert_ne!(read(d.path().join("out7/sample.csv")), sample);
    assert_eq!(read(d.path().join("out7/metrics.csv")), metrics);
}

#[test]
fn metrics_only_run_on_three_documents() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(
        d.path().join("c.csv"),
        "id,institution,sector,continent,text\n\
         a,A,Health,Europe,We heal people.\n\
         b,B,Government,Asia,We serve the public. We listen.\n\
         c,C,Private,Oceania,We build homes for families.\n",
    )
    .unwrap();
    std::fs::write(d.path().join("run.toml"), "[corpus]\npath = \"c.csv\"\n").unwrap();
    let cfg = RunConfig::load(d.path().join("run.toml")).unwrap();
    let m = run(
        &cfg,
        &RunOptions {
            stages: Some(vec![Stage::Metrics]),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(m.stages, ["metrics"]);
    assert_eq!(m.artifacts.len(), 1);
    assert_eq!(m.artifacts[0].path, "metrics.csv");
    assert_eq!(read(d.path().join("out/metrics.csv")).lines().count(), 4);
}

#[test]
fn failing_stage_is_named_and_earlier_outputs_kept() {
    let d = demo_copy();
    let text = read(d.path().join("demo.toml")).replace("min_count = 2", "min_count = 100000");
    std::fs::write(d.path().join("demo.toml"), text).unwrap();
    let cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
    let err = run(&cfg, &RunOptions::default()).unwrap_err();
    match &err {
        Error::Stage { stage, .. } => assert_eq!(stage, "similarity"),
        other => panic!("unexpected {other}"),
    }
    assert_eq!(err.kind(), ErrorKind::Analysis);
    let manifest: serde_json::Value = serde_json::from_str(&read(d.path().join("out/manifest.json"))).unwrap();
    assert_eq!(manifest["failed_stage"], "similarity");
    assert!(d.path().join("out/metrics.csv").is_file());
    assert!(d.path().join("out/network.graphml").is_file());
    assert!(!d.path().join("out/averages.csv").exists());
}

#[test]
fn graphml_is_well_formed() {
    let d = demo_copy();
    let cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
    run(
        &cfg,
        &RunOptions {
            stages: Some(vec![Stage::Network]),
            ..Default::default()
        },
    )
    .unwrap();
    let xml = read(d.path().join("out/network.graphml"));
    let doc = roxmltree::Document::parse(&xml).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&read(d.path().join("out/network_summary.json"))).unwrap();
    let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count() as u64;
    assert_eq!(count("node"), summary["nodes"].as_u64().unwrap());
    assert_eq!(count("edge"), summary["edges"].as_u64().unwrap());
    let graph = doc.descendants().find(|n| n.has_tag_name("graph")).unwrap();
    assert_eq!(graph.attribute("edgedefault"), Some("directed"));
}

#[test]
fn report_reuses_earlier_metrics() {
    let d = demo_copy();
    let cfg = RunConfig::load(d.path().join("demo.toml")).unwrap();
    let only = |s| RunOptions {
        stages: Some(vec![s]),
        ..Default::default()
    };
    run(&cfg, &only(Stage::Metrics)).unwrap();
    run(&cfg, &only(Stage::Report)).unwrap();
    let first = read(d.path().join("out/averages.csv"));
    std::fs::remove_file(d.path().join("out/metrics.csv")).unwrap();
    run(&cfg, &only(Stage::Report)).unwrap();
    assert_eq!(read(d.path().join("out/averages.csv")), first);
    assert!(read(d.path().join("out/correlations.txt")).contains("Private"));
}

fn exit_code(args: &[&str], cwd: &Path) -> (i32, String) {
    let out = bin().args(args).current_dir(cwd).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cli_exit_codes() {
    let d = demo_copy();
    let p = d.path();

    let (code, _) = exit_code(&["run", "--config", "demo.toml", "--stages", "metrics"], p);
    assert_eq!(code, 0);

    let (code, err) = exit_code(&["run", "--config", "absent.toml"], p);
    assert_eq!(code, 5, "{err}");

    std::fs::write(
        p.join("bad.toml"),
        "[corpus]\npath = \"corpus.csv\"\n[sampling]\nn = 0\nseed = 1\n",
    )
    .unwrap();
    let (code, err) = exit_code(&["run", "--config", "bad.toml"], p);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("sampling"));

    let (code, _) = exit_code(&["run", "--config", "demo.toml", "--stages", "plot"], p);
    assert_eq!(code, 2);

    std::fs::write(
        p.join("dup.csv"),
        "id,institution,sector,continent,text\nx,A,Health,Asia,Hi.\nx,B,Health,Asia,Ho.\n",
    )
    .unwrap();
    let (code, err) = exit_code(&["ingest", "dup.csv"], p);
    assert_eq!(code, 3, "{err}");

    let text = read(p.join("demo.toml")).replace("min_count = 2", "min_count = 100000");
    std::fs::write(p.join("strict.toml"), text).unwrap();
    let (code, err) = exit_code(&["similarity", "--config", "strict.toml"], p);
    assert_eq!(code, 4, "{err}");
    assert!(err.contains("similarity"));
}

#[test]
fn cli_seed_override_is_recorded() {
    let d = demo_copy();
    let out: PathBuf = d.path().join("alt");
    let run = bin()
        .args([
            "run",
            "--config",
            "demo.toml",
            "--seed",
            "11",
            "--stages",
            "network",
            "--out-dir",
        ])
        .arg(&out)
        .current_dir(d.path())
        .output()
        .unwrap();
    assert!(run.status.success());
    assert_eq!(String::from_utf8_lossy(&run.stdout).lines().count(), 7);
    let manifest: serde_json::Value = serde_json::from_str(&read(out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["overrides"]["seed"], "11");
    assert_eq!(manifest["seeds"]["sampling"], 11);
    assert_eq!(manifest["seeds"]["network"], 11);
}
