use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::TokenStream;

/// Row-labelled term count matrix with lexicographically ordered columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<u64>>,
    /// Terms with a corpus-wide total at or below this were dropped.
    pub min_count: u64,
}

impl FeatureMatrix {
    pub fn row(&self, label: &str) -> Option<&[u64]> {
        self.rows
            .iter()
            .position(|r| r == label)
            .map(|i| self.cells[i].as_slice())
    }

    pub fn column_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.columns.len()];
        for row in &self.cells {
            for (t, c) in totals.iter_mut().zip(row) {
                *t += c;
            }
        }
        totals
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["label".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.rows.iter().zip(&self.cells) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(u64::to_string));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<dfm csv>", e))
    }

    /// Parse a matrix written by [`FeatureMatrix::write_csv`].
    pub fn read_csv<R: Read>(reader: R, min_count: u64) -> Result<FeatureMatrix> {
        let mut rdr = csv::Reader::from_reader(reader);
        let columns: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut cells = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            rows.push(rec.get(0).unwrap_or("").to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|v| v.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Record {
                    line,
                    message: format!("bad count: {e}"),
                })?;
            cells.push(row);
        }
        let m = FeatureMatrix {
            rows,
            columns,
            cells,
            min_count,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for r in &self.rows {
            if !seen.insert(r) {
                return Err(Error::invalid(format!("duplicate row label {r:?}")));
            }
        }
        let cols: BTreeSet<&String> = self.columns.iter().collect();
        if cols.len() != self.columns.len() {
            return Err(Error::invalid("duplicate column label"));
        }
        if self.cells.iter().any(|r| r.len() != self.columns.len()) {
            return Err(Error::invalid("ragged feature matrix"));
        }
        Ok(())
    }
}

/// Count terms per labelled stream, dropping terms whose total is
/// `<= min_count`.
pub fn build_dfm<'a, L, I>(streams: I, min_count: u64) -> Result<FeatureMatrix>
where
    L: AsRef<str>,
    I: IntoIterator<Item = (L, &'a TokenStream)>,
{
    let inputs: Vec<(String, &TokenStream)> = streams.into_iter().map(|(l, s)| (l.as_ref().to_string(), s)).collect();
    if inputs.is_empty() {
        return Err(Error::invalid("a feature matrix needs at least one stream"));
    }
    let counts: Vec<HashMap<&str, u64>> = inputs
        .par_iter()
        .map(|(_, s)| {
            let mut m: HashMap<&str, u64> = HashMap::new();
            for t in &s.tokens {
                *m.entry(t.as_str()).or_default() += 1;
            }
            m
        })
        .collect();
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for m in &counts {
        for (&t, &c) in m {
            *totals.entry(t).or_default() += c;
        }
    }
    let columns: Vec<String> = totals
        .into_iter()
        .filter(|&(_, c)| c > min_count)
        .map(|(t, _)| t.to_string())
        .collect();
    if columns.is_empty() {
        return Err(Error::invalid(format!(
            "no term occurs more than {min_count} times; lower the min_count threshold"
        )));
    }
    let cells = counts
        .par_iter()
        .map(|m| {
            columns
                .iter()
                .map(|t| m.get(t.as_str()).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    let matrix = FeatureMatrix {
        rows: inputs.into_iter().map(|(l, _)| l).collect(),
        columns,
        cells,
        min_count,
    };
    matrix.validate()?;
    Ok(matrix)
}

/// Sum rows that share a group name. Groups are emitted in name order.
pub fn group_rows(dfm: &FeatureMatrix, grouping: &HashMap<String, String>) -> Result<FeatureMatrix> {
    let mut groups: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for (label, row) in dfm.rows.iter().zip(&dfm.cells) {
        let g = grouping
            .get(label)
            .ok_or_else(|| Error::invalid(format!("row {label:?} has no group")))?;
        let acc = groups.entry(g.as_str()).or_insert_with(|| vec![0; dfm.columns.len()]);
        for (a, c) in acc.iter_mut().zip(row) {
            *a += c;
        }
    }
    let (rows, cells) = groups.into_iter().map(|(g, r)| (g.to_string(), r)).unzip();
    Ok(FeatureMatrix {
        rows,
        columns: dfm.columns.clone(),
        cells,
        min_count: dfm.min_count,
    })
}
