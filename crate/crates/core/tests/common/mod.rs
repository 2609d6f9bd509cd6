#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;

use mission_content::corpus::{Continent, Corpus, Document, Sector};
use mission_content::semnet::{Node, SemanticGraph};

/// Small deterministic generator for test fixtures.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn chance(&mut self, p: f64) -> bool {
        (self.next() as f64 / (1u64 << 31) as f64) < p
    }
}

/// Random directed graph; each ordered pair gets an edge with probability
/// `p` and weight in `1..=max_w`.
pub fn random_graph(rng: &mut Lcg, n: usize, p: f64, max_w: u64) -> SemanticGraph {
    let term = |i: usize| format!("n{i:02}");
    let nodes = (0..n)
        .map(|i| Node {
            term: term(i),
            freq: 1 + rng.below(5),
        })
        .collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.chance(p) {
                edges.push((term(a), term(b), 1 + rng.below(max_w)));
            }
        }
    }
    SemanticGraph::from_parts(nodes, edges).unwrap()
}

pub fn demo_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo")
}

/// Document counts per (sector, continent) of the reference mission corpus.
pub const TABLE_STRATA: &[(Sector, Continent, usize)] = &[
    (Sector::Government, Continent::Africa, 7),
    (Sector::Government, Continent::Asia, 103),
    (Sector::Government, Continent::Europe, 133),
    (Sector::Government, Continent::LatamCar, 2),
    (Sector::Government, Continent::NorthAmerica, 49),
    (Sector::Government, Continent::Oceania, 6),
    (Sector::Health, Continent::Africa, 5),
    (Sector::Health, Continent::Asia, 59),
    (Sector::Health, Continent::Europe, 93),
    (Sector::Health, Continent::LatamCar, 1),
    (Sector::Health, Continent::NorthAmerica, 150),
    (Sector::Health, Continent::Oceania, 29),
    (Sector::HigherEd, Continent::Africa, 55),
    (Sector::HigherEd, Continent::Asia, 451),
    (Sector::HigherEd, Continent::Europe, 361),
    (Sector::HigherEd, Continent::LatamCar, 11),
    (Sector::HigherEd, Continent::NorthAmerica, 351),
    (Sector::HigherEd, Continent::Oceania, 32),
    (Sector::Others, Continent::Asia, 1),
    (Sector::Others, Continent::Europe, 5),
    (Sector::Others, Continent::NorthAmerica, 18),
    (Sector::Private, Continent::Asia, 6),
    (Sector::Private, Continent::Europe, 9),
    (Sector::Private, Continent::NorthAmerica, 17),
    (Sector::Private, Continent::Oceania, 1),
];

/// A corpus with the table's stratum sizes and placeholder texts.
pub fn table_corpus() -> Corpus {
    let mut docs = Vec::new();
    for &(sector, continent, count) in TABLE_STRATA {
        for i in 0..count {
            docs.push(Document {
                id: format!("{}-{}-{i:03}", sector.label(), continent.label().replace(' ', "")),
                institution: format!("Institution {i}"),
                sector,
                continent,
                country: None,
                text: "We advance research and education.".into(),
            });
        }
    }
    Corpus::new(docs).unwrap()
}
