//! Term-frequency matrices, cosine similarity and hierarchical clustering.

mod dfm;
mod hac;

pub use dfm::{build_dfm, group_rows, FeatureMatrix};
pub use hac::{export_dendrogram, hac, Dendrogram, DendrogramFormat, Linkage, Merge, HEIGHT_TOLERANCE};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric row-by-row cosine similarities with a unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i][j])
    }

    /// CSV with a leading label column, values printed in full precision.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| format!("{v:?}")));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<similarity csv>", e))
    }
}

/// Cosine of two count vectors. Zero vectors have no direction and are
/// rejected.
pub fn cosine_sim(x: &[u64], y: &[u64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "vector lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let (mut dot, mut xx, mut yy) = (0u128, 0u128, 0u128);
    for (&a, &b) in x.iter().zip(y) {
        let (a, b) = (a as u128, b as u128);
        dot += a * b;
        xx += a * a;
        yy += b * b;
    }
    if xx == 0 || yy == 0 {
        return Err(Error::invalid("cosine similarity of a zero vector is undefined"));
    }
    Ok((dot as f64 / (xx as f64 * yy as f64).sqrt()).min(1.0))
}

pub fn similarity_matrix(dfm: &FeatureMatrix) -> Result<SimilarityMatrix> {
    for (label, row) in dfm.rows.iter().zip(&dfm.cells) {
        if row.iter().all(|&c| c == 0) {
            return Err(Error::invalid(format!(
                "row {label:?} has no retained terms; lower min_count or drop the row"
            )));
        }
    }
    let n = dfm.rows.len();
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ok(1.0)
                    } else {
                        // Compute each pair in a fixed orientation so the
                        // matrix is exactly symmetric.
                        let (a, b) = (i.min(j), i.max(j));
                        cosine_sim(&dfm.cells[a], &dfm.cells[b])
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimilarityMatrix {
        labels: dfm.rows.clone(),
        values,
    })
}
