//! Content analysis of organisational mission statements.
//!
//! The crate loads a sector/continent-tagged corpus and computes readability
//! (FKGL), lexical diversity (Yule's K), lexicon category ratios, term
//! co-occurrence networks with communities and betweenness, and cosine
//! similarity dendrograms. [`pipeline::run`] drives all of it from a TOML
//! config.

pub mod config;
pub mod corpus;
pub mod error;
pub mod lexicons;
pub mod lexmetrics;
pub mod pipeline;
pub mod report;
pub mod semnet;
pub mod simclust;
pub mod textprep;

pub use error::{Error, ErrorKind, Result};
