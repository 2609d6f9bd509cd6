//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 10 needs the full mission-statement corpus, which is not
//! distributed. Point `MISSION_CONTENT_CORPUS` at a CSV or JSONL copy to run
//! it; `MISSION_CONTENT_STOPWORDS` and `MISSION_CONTENT_SEED` are optional.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::time::{Duration, Instant};

use common::oracles::{betweenness_oracle, hac_oracle, modularity_oracle, random_similarity};
use common::{demo_dir, random_graph, table_corpus, Lcg};
use mission_content::config::RunConfig;
use mission_content::corpus::{load_corpus, merge_strata, stratified_sample, Corpus, Format, Sector};
use mission_content::lexicons::{tag, Lexicon};
use mission_content::lexmetrics::{fkgl, yules_k};
use mission_content::pipeline::{run, RunOptions};
use mission_content::report::{aggregate, metrics_rows};
use mission_content::semnet::{
    betweenness, build_cooccurrence, louvain, top_terms, CentralityMode, CooccurrenceConfig, Node, SemanticGraph,
};
use mission_content::simclust::{build_dfm, cosine_sim, group_rows, hac, similarity_matrix, Linkage};
use mission_content::textprep::{prepare, tokenize, PrepConfig};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = fn() -> Outcome;

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Pass(detail.into())
    } else {
        Outcome::Fail(detail.into())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn c1_fkgl() -> Outcome {
    let cat = fkgl("The cat sat.").unwrap().fkgl;
    let long = format!("{}.", vec!["cat"; 100].join(" "));
    let hundred = fkgl(&long).unwrap().fkgl;
    verdict(
        close(cat, -2.62, 1e-9) && close(hundred, 35.21, 1e-9),
        format!("cat sat {cat:.6}, 100 monosyllables {hundred:.6}"),
    )
}

fn c2_yules_k() -> Outcome {
    let unique = yules_k(&["a", "b", "c", "d"]).unwrap().k;
    let repeated = yules_k(&["x"; 10]).unwrap().k;
    let aab = yules_k(&["a", "a", "b"]).unwrap().k;
    verdict(
        unique == 0.0 && close(repeated, 9000.0, 1e-9) && close(aab, 2222.22, 0.01),
        format!("unique {unique}, x*10 {repeated}, aab {aab:.4}"),
    )
}

const KING_MONGKUT: &str = "Missions of the Institute's Act consist of 4 categories. \
1. Provision of higher education in science and technology of the highest quality toward international \
standards with good morality. 2. Advancement of knowledge and research in science, engineering, and \
technology to support the sustainable development of the nation and to ward international excellence \
3. Provision of knowledge and innovation for the best academic and Community services. \
4. Preservation and promotion of Thai Arts and Culture.";

fn c3_table_readability() -> Outcome {
    let r = fkgl(KING_MONGKUT).unwrap();
    verdict(
        close(r.fkgl, 11.6, 1.5),
        format!(
            "FKGL {:.2} ({} words, {} sentences, {} syllables), target 11.6 +/- 1.5",
            r.fkgl, r.words, r.sentences, r.syllables
        ),
    )
}

fn path_graph() -> SemanticGraph {
    let node = |t: &str| Node {
        term: t.into(),
        freq: 1,
    };
    SemanticGraph::from_parts(
        vec![node("a"), node("b"), node("c")],
        [("a".into(), "b".into(), 1), ("b".into(), "c".into(), 1)],
    )
    .unwrap()
}

fn c4_betweenness() -> Outcome {
    let path = betweenness(&path_graph(), CentralityMode::Binary).scores;
    if path != [0.0, 1.0, 0.0] {
        return Outcome::Fail(format!("a->b->c scores {path:?}"));
    }
    let mut rng = Lcg(11);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = 2 + rng.below(7) as usize;
        let g = random_graph(&mut rng, n, 0.35, 4);
        for (mode, weighted) in [(CentralityMode::Binary, false), (CentralityMode::Weighted, true)] {
            let got = betweenness(&g, mode).scores;
            let want = betweenness_oracle(&g, weighted);
            for (a, b) in got.iter().zip(&want) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    verdict(
        worst < 1e-9,
        format!("200 graphs, max deviation {worst:.2e}; path centre 1"),
    )
}

fn c5_louvain() -> Outcome {
    let node = |t: &str| Node {
        term: t.into(),
        freq: 1,
    };
    let edges = [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")];
    let triangles = SemanticGraph::from_parts(
        ["a", "b", "c", "d", "e", "f"].map(node).to_vec(),
        edges.map(|(x, y)| (x.to_string(), y.to_string(), 1)),
    )
    .unwrap();
    let t = louvain(&triangles, 1.0, 0).unwrap();
    if t.community_count() != 2 || !close(t.modularity_q, 0.5, 1e-9) {
        return Outcome::Fail(format!(
            "triangles: {} communities, Q {}",
            t.community_count(),
            t.modularity_q
        ));
    }
    let mut rng = Lcg(5);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let n = 10 + rng.below(21) as usize;
        let g = random_graph(&mut rng, n, 0.2, 3);
        let a = louvain(&g, 1.0, trial).unwrap();
        worst = worst.max((a.modularity_q - modularity_oracle(&g, &a.membership, 1.0)).abs());
        if a.pass_modularity.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            return Outcome::Fail(format!("trial {trial}: Q decreased {:?}", a.pass_modularity));
        }
    }
    verdict(
        worst < 1e-9,
        format!("triangles Q 0.5; 50 graphs, max Q deviation {worst:.2e}"),
    )
}

fn c6_cosine_hac() -> Outcome {
    let c = cosine_sim(&[1, 2, 0], &[2, 1, 0]).unwrap();
    if c != 0.8 {
        return Outcome::Fail(format!("cosine {c}"));
    }
    let mut rng = Lcg(99);
    for trial in 0..100 {
        let n = 2 + rng.below(5) as usize;
        let sim = random_similarity(&mut rng, n, trial % 2 == 0);
        for linkage in [Linkage::Average, Linkage::Complete, Linkage::Single] {
            let got = hac(&sim, linkage).unwrap().merge_members();
            let want = hac_oracle(&sim, linkage);
            let same = got.len() == want.len()
                && got
                    .iter()
                    .zip(&want)
                    .all(|(g, w)| g.0 == w.0 && g.1 == w.1 && (g.2 - w.2).abs() <= 1e-12);
            if !same {
                return Outcome::Fail(format!("trial {trial} {linkage:?} differs from brute force"));
            }
        }
    }
    Outcome::Pass("cosine 0.8; 100 trials x 3 linkages identical".into())
}

fn c7_ratios() -> Outcome {
    let lex = Lexicon::from_pairs("probe", [("hit", "alpha")]).unwrap();
    let mut words = vec!["filler"; 75];
    for i in [3, 17, 30, 51, 70] {
        words[i] = "alpha";
    }
    let text = format!("{}.", words.join(" "));
    let r = tag("d", &tokenize(&text), &lex).unwrap().ratios["hit"];
    if !close(r, 6.67, 0.01) {
        return Outcome::Fail(format!("5 in 75 gives {r}"));
    }
    let vocab = [
        "human",
        "rights",
        "climate",
        "change",
        "community",
        "research",
        "we",
        "serve",
        "the",
        "public",
    ];
    let lex = Lexicon::from_pairs(
        "csr",
        [
            ("rights", "human rights"),
            ("env", "climate change"),
            ("env", "climate"),
            ("social", "community"),
            ("social", "the public"),
        ],
    )
    .unwrap();
    let mut rng = Lcg(7);
    for doc in 0..100 {
        let sentences: Vec<String> = (0..1 + rng.below(4))
            .map(|_| {
                let ws: Vec<&str> = (0..1 + rng.below(12)).map(|_| vocab[rng.below(10) as usize]).collect();
                let s = ws.join(" ");
                format!("{}{}.", s[..1].to_uppercase(), &s[1..])
            })
            .collect();
        let t = sentences.join(" ");
        let once = tag("d", &tokenize(&t), &lex).unwrap();
        let twice = tag("d", &tokenize(&format!("{t} {t}")), &lex).unwrap();
        for (cat, r) in &once.ratios {
            if (twice.ratios[cat] - r).abs() > 1e-9 {
                return Outcome::Fail(format!("document {doc}: {cat} {r} became {}", twice.ratios[cat]));
            }
        }
    }
    Outcome::Pass(format!("5/75 -> {r:.4}; 100 doubled documents unchanged"))
}

fn ids(c: &Corpus) -> BTreeSet<String> {
    c.iter().map(|d| d.id.clone()).collect()
}

fn c8_sampling() -> Outcome {
    let corpus = table_corpus();
    let a = stratified_sample(&corpus, 24, 2024).unwrap();
    let b = stratified_sample(&corpus, 24, 2024).unwrap();
    let merged = merge_strata(&corpus, &[Sector::Others, Sector::Private], Sector::Mixed)
        .and_then(|c| c.restrict_sectors(&[Sector::Health, Sector::HigherEd, Sector::Mixed]))
        .unwrap();
    let m1 = stratified_sample(&merged, 57, 2024).unwrap();
    let m2 = stratified_sample(&merged, 57, 2024).unwrap();
    verdict(
        corpus.len() == 1955 && a.len() == 120 && m1.len() == 171 && ids(&a) == ids(&b) && ids(&m1) == ids(&m2),
        format!(
            "{} docs -> {} sampled, merged design {}",
            corpus.len(),
            a.len(),
            m1.len()
        ),
    )
}

fn c9_determinism() -> Outcome {
    let run_once = || -> String {
        let dir = tempfile::tempdir().unwrap();
        for f in ["corpus.csv", "sentiment.csv", "csr.csv", "demo.toml"] {
            std::fs::copy(demo_dir().join(f), dir.path().join(f)).unwrap();
        }
        let cfg = RunConfig::load(dir.path().join("demo.toml")).unwrap();
        run(&cfg, &RunOptions::default()).unwrap();
        std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()
    };
    let (a, b) = (run_once(), run_once());
    verdict(a == b, format!("manifest {} bytes, identical: {}", a.len(), a == b))
}

fn c10_dataset() -> Outcome {
    let Some(path) = std::env::var_os("MISSION_CONTENT_CORPUS") else {
        return Outcome::Skip("MISSION_CONTENT_CORPUS not set; the mission-statement corpus is not bundled".into());
    };
    let path = Path::new(&path);
    let corpus = match load_corpus(path, Format::from_path(path)) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(format!("cannot load corpus: {e}")),
    };
    let prep = match PrepConfig::from_files(
        std::env::var_os("MISSION_CONTENT_STOPWORDS").as_deref().map(Path::new),
        None,
    ) {
        Ok(p) => p,
        Err(e) => return Outcome::Fail(format!("cannot load stopwords: {e}")),
    };
    let seed = std::env::var("MISSION_CONTENT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let mut failures = Vec::new();

    let rows = metrics_rows(&corpus, &[]).unwrap();
    let total = aggregate(&rows, &corpus).unwrap();
    let means = &total.total().means;
    for (i, target) in [75.0, 19.8, 528.3].into_iter().enumerate() {
        if (means[i] - target).abs() > 0.1 * target {
            failures.push(format!("{} mean {:.2} vs {target}", total.variables[i], means[i]));
        }
    }

    let sample = stratified_sample(&corpus, 24, seed).unwrap();
    let streams: Vec<_> = sample.iter().map(|d| prepare(&d.text, &prep)).collect();
    let g = build_cooccurrence(&streams, CooccurrenceConfig::default());
    if (g.node_count() as f64 - 2130.0).abs() > 0.15 * 2130.0 || g.edge_count() < 150_000 {
        failures.push(format!("network {} nodes, {} links", g.node_count(), g.edge_count()));
    }
    let communities = louvain(&g, 1.0, seed).unwrap();
    let central = betweenness(&g, CentralityMode::Weighted);
    let top = top_terms(&g, &communities, &central, 5).unwrap();
    if !top.global.iter().any(|t| t.term == "research") {
        failures.push("research missing from the global top 5".into());
    }

    let sector_streams: Vec<(String, _)> = corpus.iter().map(|d| (d.id.clone(), prepare(&d.text, &prep))).collect();
    let groups: HashMap<String, String> = corpus
        .iter()
        .map(|d| (d.id.clone(), d.sector.label().to_string()))
        .collect();
    let dfm = build_dfm(sector_streams.iter().map(|(id, s)| (id.as_str(), s)), 0)
        .and_then(|d| group_rows(&d, &groups))
        .unwrap();
    let dendro = hac(&similarity_matrix(&dfm).unwrap(), Linkage::Average).unwrap();
    let merges = dendro.merge_members();
    let label = |s: Sector| s.label().to_string();
    let clade = merges.iter().find(|(l, r, _)| {
        let all: Vec<&String> = l.iter().chain(r).collect();
        all.contains(&&label(Sector::Health)) && all.contains(&&label(Sector::Private))
    });
    if clade.is_some_and(|(l, r, _)| l.iter().chain(r).any(|m| *m == label(Sector::HigherEd))) {
        failures.push("HigherEd joins before Health and Private meet".into());
    }
    let last = merges.last().unwrap();
    if last.0 != [label(Sector::Others)] && last.1 != [label(Sector::Others)] {
        failures.push(format!("last merge is {:?} + {:?}", last.0, last.1));
    }

    let detail = format!(
        "means {:.1}/{:.1}/{:.1}, {} nodes, {} links",
        means[0],
        means[1],
        means[2],
        g.node_count(),
        g.edge_count()
    );
    if failures.is_empty() {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(format!("{detail}; {}", failures.join("; ")))
    }
}

fn main() {
    let criteria: [(&str, Check, Duration); 10] = [
        ("FKGL formula oracle", c1_fkgl, Duration::from_secs(1)),
        ("Yule's K oracles", c2_yules_k, Duration::from_secs(1)),
        (
            "FKGL of the King Mongkut mission",
            c3_table_readability,
            Duration::from_secs(1),
        ),
        (
            "Betweenness vs path enumeration",
            c4_betweenness,
            Duration::from_secs(60),
        ),
        ("Louvain modularity", c5_louvain, Duration::from_secs(60)),
        ("Cosine and HAC vs brute force", c6_cosine_hac, Duration::from_secs(30)),
        ("Lexicon ratios", c7_ratios, Duration::from_secs(10)),
        ("Sampling shapes", c8_sampling, Duration::from_secs(5)),
        ("Pipeline determinism", c9_determinism, Duration::from_secs(30)),
        ("Full-corpus reproduction", c10_dataset, Duration::from_secs(3600)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Outcome::Pass(_) if took > budget => ("FAIL", format!("took {took:.2?}, budget {budget:?}")),
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => ("FAIL", d),
            Outcome::Skip(d) => ("SKIP", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:>2} {name} [{took:.2?}]: {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
