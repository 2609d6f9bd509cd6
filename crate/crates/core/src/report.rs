//! Per-document metric rows, group averages and Pearson correlation tables.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::io::Write;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Continent, Corpus, Sector};
use crate::error::{Error, Result};
use crate::lexicons::{tag, Lexicon};
use crate::lexmetrics::{fkgl_stream, yules_k};
use crate::textprep::tokenize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub doc_id: String,
    pub word_count: usize,
    pub fkgl: f64,
    pub yules_k: f64,
    /// Keyed `lexicon:category`, in lexicon then category order.
    pub ratios: IndexMap<String, f64>,
}

impl MetricsRow {
    pub fn variables(&self) -> Vec<String> {
        let mut v = vec!["word_count".to_string(), "fkgl".into(), "yules_k".into()];
        v.extend(self.ratios.keys().cloned());
        v
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.word_count as f64, self.fkgl, self.yules_k];
        v.extend(self.ratios.values().copied());
        v
    }
}

/// Readability, diversity and lexicon ratios for every document, sorted by id.
pub fn metrics_rows(corpus: &Corpus, lexicons: &[Lexicon]) -> Result<Vec<MetricsRow>> {
    if corpus.is_empty() {
        return Err(Error::invalid("cannot compute metrics of an empty corpus"));
    }
    let mut docs: Vec<_> = corpus.iter().collect();
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    docs.par_iter()
        .map(|d| {
            let stream = tokenize(&d.text);
            let read = fkgl_stream(&stream).map_err(|e| Error::invalid(format!("document {:?}: {e}", d.id)))?;
            let div = yules_k(&stream.tokens)?;
            let mut ratios = IndexMap::new();
            for lex in lexicons {
                let t = tag(&d.id, &stream, lex)?;
                for (cat, r) in t.ratios {
                    ratios.insert(format!("{}:{}", lex.name(), cat), r);
                }
            }
            Ok(MetricsRow {
                doc_id: d.id.clone(),
                word_count: stream.raw_word_count,
                fkgl: read.fkgl,
                yules_k: div.k,
                ratios,
            })
        })
        .collect()
}

fn check_rows(rows: &[MetricsRow]) -> Result<Vec<String>> {
    let first = rows.first().ok_or_else(|| Error::invalid("no metric rows"))?;
    let mut seen = HashSet::new();
    for r in rows {
        if !seen.insert(r.doc_id.as_str()) {
            return Err(Error::invalid(format!("duplicate metric row for {:?}", r.doc_id)));
        }
        if !r.ratios.keys().eq(first.ratios.keys()) {
            return Err(Error::invalid(format!(
                "metric row {:?} has different ratio columns",
                r.doc_id
            )));
        }
    }
    Ok(first.variables())
}

pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], writer: W) -> Result<()> {
    let vars = check_rows(rows)?;
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["doc_id".to_string()];
    header.extend(vars);
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.doc_id.clone(), r.word_count.to_string()];
        rec.extend(r.values()[1..].iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<metrics csv>", e))
}

pub fn read_metrics_csv<R: std::io::Read>(reader: R) -> Result<Vec<MetricsRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.len() < 4 || header[..4] != ["doc_id", "word_count", "fkgl", "yules_k"] {
        return Err(Error::Schema(
            "metrics CSV must start with doc_id,word_count,fkgl,yules_k".into(),
        ));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let num = |i: usize| -> Result<f64> {
            rec.get(i).unwrap_or("").parse::<f64>().map_err(|e| Error::Record {
                line,
                message: format!("column {}: {e}", header[i]),
            })
        };
        let word_count = rec.get(1).unwrap_or("").parse::<usize>().map_err(|e| Error::Record {
            line,
            message: format!("word_count: {e}"),
        })?;
        let mut ratios = IndexMap::new();
        for (i, name) in header.iter().enumerate().skip(4) {
            ratios.insert(name.clone(), num(i)?);
        }
        rows.push(MetricsRow {
            doc_id: rec.get(0).unwrap_or("").to_string(),
            word_count,
            fkgl: num(2)?,
            yules_k: num(3)?,
            ratios,
        });
    }
    check_rows(&rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageRow {
    /// `None` on continent-only rows and the grand total.
    pub sector: Option<Sector>,
    /// `None` on sector subtotals and the grand total.
    pub continent: Option<Continent>,
    pub n: usize,
    pub means: Vec<f64>,
}

impl AverageRow {
    pub fn label(&self) -> String {
        match (self.sector, self.continent) {
            (Some(s), Some(c)) => format!("{s} / {c}"),
            (Some(s), None) => format!("{s} total"),
            (None, Some(c)) => format!("{c} total"),
            (None, None) => "Total general".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageTable {
    pub variables: Vec<String>,
    pub rows: Vec<AverageRow>,
}

impl AverageTable {
    pub fn total(&self) -> &AverageRow {
        self.rows.last().expect("aggregate always emits a total row")
    }

    pub fn find(&self, sector: Option<Sector>, continent: Option<Continent>) -> Option<&AverageRow> {
        self.rows
            .iter()
            .find(|r| r.sector == sector && r.continent == continent)
    }
}

#[derive(Default)]
struct Sums {
    n: usize,
    sums: Vec<f64>,
}

impl Sums {
    fn add(&mut self, values: &[f64]) {
        if self.sums.is_empty() {
            self.sums = vec![0.0; values.len()];
        }
        for (s, v) in self.sums.iter_mut().zip(values) {
            *s += v;
        }
        self.n += 1;
    }

    fn row(&self, sector: Option<Sector>, continent: Option<Continent>) -> AverageRow {
        AverageRow {
            sector,
            continent,
            n: self.n,
            means: self.sums.iter().map(|s| s / self.n as f64).collect(),
        }
    }
}

/// Unweighted means per sector x continent, per sector, per continent and
/// overall. Each sector's continent rows are followed by its subtotal; then
/// come continent totals and the grand total.
pub fn aggregate(rows: &[MetricsRow], corpus: &Corpus) -> Result<AverageTable> {
    let variables = check_rows(rows)?;
    let mut sorted: Vec<&MetricsRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));

    let mut cells: BTreeMap<(Sector, Continent), Sums> = BTreeMap::new();
    let mut sectors: BTreeMap<Sector, Sums> = BTreeMap::new();
    let mut continents: BTreeMap<Continent, Sums> = BTreeMap::new();
    let mut total = Sums::default();
    for r in sorted {
        let doc = corpus
            .get(&r.doc_id)
            .ok_or_else(|| Error::invalid(format!("metric row {:?} is not in the corpus", r.doc_id)))?;
        let v = r.values();
        cells.entry((doc.sector, doc.continent)).or_default().add(&v);
        sectors.entry(doc.sector).or_default().add(&v);
        continents.entry(doc.continent).or_default().add(&v);
        total.add(&v);
    }

    let mut out = Vec::new();
    for (sector, sums) in &sectors {
        for ((_, c), cell) in cells.iter().filter(|((s, _), _)| s == sector) {
            out.push(cell.row(Some(*sector), Some(*c)));
        }
        out.push(sums.row(Some(*sector), None));
    }
    for (c, sums) in &continents {
        out.push(sums.row(None, Some(*c)));
    }
    out.push(total.row(None, None));
    Ok(AverageTable { variables, rows: out })
}

fn fmt_display(v: f64, decimals: usize, comma: bool) -> String {
    let s = format!("{v:.decimals$}");
    if comma {
        s.replace('.', ",")
    } else {
        s
    }
}

pub fn write_averages_csv<W: Write>(table: &AverageTable, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["sector".to_string(), "continent".into(), "n".into()];
    header.extend(table.variables.iter().cloned());
    w.write_record(&header)?;
    for r in &table.rows {
        let mut rec = vec![
            r.sector.map(|s| s.to_string()).unwrap_or_default(),
            r.continent.map(|c| c.to_string()).unwrap_or_default(),
            r.n.to_string(),
        ];
        rec.extend(r.means.iter().map(|m| m.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<averages csv>", e))
}

/// Right-aligned text table, one decimal. `comma_decimal` only changes the
/// separator shown.
pub fn averages_text(table: &AverageTable, comma_decimal: bool) -> String {
    let mut header = vec!["group".to_string(), "n".into()];
    header.extend(table.variables.iter().cloned());
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![r.label(), r.n.to_string()];
            cells.extend(r.means.iter().map(|&m| fmt_display(m, 1, comma_decimal)));
            cells
        })
        .collect();
    aligned(&header, &body)
}

fn aligned(header: &[String], body: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    for row in std::iter::once(header).chain(body.iter().map(Vec::as_slice)) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    s
}

/// Pearson correlation; `None` if either variable is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson needs paired samples");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    if x == y {
        return Some(1.0);
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a Pearson `r` on `n` pairs, from Student's t with
/// `n - 2` degrees of freedom.
pub fn pearson_p_value(r: f64, n: usize) -> f64 {
    assert!(n >= 3, "need at least three pairs");
    let df = (n - 2) as f64;
    // P(|T| > |t|) = I_{df / (df + t^2)}(df/2, 1/2), and df / (df + t^2) = 1 - r^2.
    let x = ((1.0 - r) * (1.0 + r)).clamp(0.0, 1.0);
    regularized_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// Natural log of the gamma function (Lanczos, g = 7).
#[allow(clippy::excessive_precision)]
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized incomplete beta `I_x(a, b)` by continued fraction.
pub fn regularized_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(1.0 - x, b, a) / b
    }
}

fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCell {
    pub x: String,
    pub y: String,
    pub n: usize,
    /// `None` when either variable is constant.
    pub r: Option<f64>,
    pub p_value: Option<f64>,
}

impl CorrelationCell {
    pub fn p_at_most(&self, level: f64) -> bool {
        self.p_value.is_some_and(|p| p <= level)
    }

    pub fn strong(&self) -> bool {
        self.r.is_some_and(|r| r.abs() >= 0.7)
    }

    /// `*`, `**` or `***` for p at or below .05, .01 and .001.
    pub fn stars(&self) -> &'static str {
        if self.p_at_most(0.001) {
            "***"
        } else if self.p_at_most(0.01) {
            "**"
        } else if self.p_at_most(0.05) {
            "*"
        } else {
            ""
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub partition: Option<Sector>,
    pub variables: Vec<String>,
    /// Square, indexed like `variables`.
    pub cells: Vec<Vec<CorrelationCell>>,
}

impl CorrelationMatrix {
    pub fn cell(&self, x: &str, y: &str) -> Option<&CorrelationCell> {
        let i = self.variables.iter().position(|v| v == x)?;
        let j = self.variables.iter().position(|v| v == y)?;
        Some(&self.cells[i][j])
    }
}

/// Pearson r and two-sided p for every variable pair, over all rows or over
/// the documents of one sector.
pub fn correlations(rows: &[MetricsRow], corpus: &Corpus, partition: Option<Sector>) -> Result<CorrelationMatrix> {
    let variables = check_rows(rows)?;
    let mut selected: Vec<&MetricsRow> = Vec::new();
    for r in rows {
        let doc = corpus
            .get(&r.doc_id)
            .ok_or_else(|| Error::invalid(format!("metric row {:?} is not in the corpus", r.doc_id)))?;
        if partition.is_none_or(|s| doc.sector == s) {
            selected.push(r);
        }
    }
    selected.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let n = selected.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "correlations need at least 3 documents, {} has {n}",
            partition.map_or("the corpus".to_string(), |s| s.to_string())
        )));
    }
    let columns: Vec<Vec<f64>> = (0..variables.len())
        .map(|j| selected.iter().map(|r| r.values()[j]).collect())
        .collect();
    let cells = (0..variables.len())
        .map(|i| {
            (0..variables.len())
                .map(|j| {
                    let r = pearson(&columns[i], &columns[j]);
                    CorrelationCell {
                        x: variables[i].clone(),
                        y: variables[j].clone(),
                        n,
                        r,
                        p_value: r.map(|r| pearson_p_value(r, n)),
                    }
                })
                .collect()
        })
        .collect();
    Ok(CorrelationMatrix {
        partition,
        variables,
        cells,
    })
}

/// Long-format CSV: one line per unordered pair (diagonal excluded) with
/// significance flag columns. Undefined cells print `NA`.
pub fn write_correlations_csv<W: Write>(matrices: &[CorrelationMatrix], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "partition",
        "x",
        "y",
        "n",
        "r",
        "p_value",
        "p_le_05",
        "p_le_01",
        "p_le_001",
        "abs_r_ge_07",
    ])?;
    let na = || "NA".to_string();
    for m in matrices {
        let part = m.partition.map_or("all".to_string(), |s| s.to_string());
        for i in 0..m.variables.len() {
            for c in &m.cells[i][i + 1..] {
                let flag = |b: bool| if c.r.is_none() { na() } else { (b as u8).to_string() };
                w.write_record([
                    part.clone(),
                    c.x.clone(),
                    c.y.clone(),
                    c.n.to_string(),
                    c.r.map_or_else(na, |r| r.to_string()),
                    c.p_value.map_or_else(na, |p| p.to_string()),
                    flag(c.p_at_most(0.05)),
                    flag(c.p_at_most(0.01)),
                    flag(c.p_at_most(0.001)),
                    flag(c.strong()),
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("<correlations csv>", e))
}

/// Lower-triangle r values with significance stars.
pub fn correlations_text(m: &CorrelationMatrix, comma_decimal: bool) -> String {
    let mut header = vec![m.partition.map_or("all".to_string(), |s| s.to_string())];
    header.extend(m.variables.iter().cloned());
    let body: Vec<Vec<String>> = m
        .cells
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut cells = vec![m.variables[i].clone()];
            cells.extend(row.iter().enumerate().map(|(j, c)| {
                if j > i {
                    String::new()
                } else if j == i {
                    c.r.map_or("NA".into(), |r| fmt_display(r, 2, comma_decimal))
                } else {
                    match c.r {
                        Some(r) => format!("{}{}", fmt_display(r, 2, comma_decimal), c.stars()),
                        None => "NA".into(),
                    }
                }
            }));
            cells
        })
        .collect();
    aligned(&header, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    fn doc(id: &str, sector: Sector, continent: Continent) -> Document {
        Document {
            id: id.into(),
            institution: format!("Inst {id}"),
            sector,
            continent,
            country: None,
            text: "We teach.".into(),
        }
    }

    fn row(id: &str, words: usize, fkgl: f64) -> MetricsRow {
        MetricsRow {
            doc_id: id.into(),
            word_count: words,
            fkgl,
            yules_k: 0.0,
            ratios: IndexMap::from([("s:pos".to_string(), 1.0)]),
        }
    }

    #[test]
    fn averages() {
        let corpus = Corpus::new(vec![
            doc("a", Sector::Health, Continent::Asia),
            doc("b", Sector::Health, Continent::Asia),
            doc("c", Sector::Government, Continent::Europe),
        ])
        .unwrap();
        let rows = vec![row("a", 50, 1.0), row("b", 100, 3.0), row("c", 30, 5.0)];
        let t = aggregate(&rows, &corpus).unwrap();
        let cell = t.find(Some(Sector::Health), Some(Continent::Asia)).unwrap();
        assert_eq!(cell.means[0], 75.0);
        assert_eq!(cell.n, 2);
        let single = t.find(Some(Sector::Government), Some(Continent::Europe)).unwrap();
        assert_eq!(single.means, rows[2].values());
        assert_eq!(t.total().n, 3);
        assert!((t.total().means[0] - 60.0).abs() < 1e-12);

        let mut reversed = rows.clone();
        reversed.reverse();
        assert_eq!(aggregate(&reversed, &corpus).unwrap(), t);

        let orphan = vec![row("zzz", 1, 1.0)];
        assert!(aggregate(&orphan, &corpus).is_err());

        let text = averages_text(&t, true);
        assert!(text.contains("75,0"));
        assert!(text.lines().last().unwrap().starts_with("Total general"));
    }

    #[test]
    fn perfect_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = pearson(&x, &y).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(pearson_p_value(r, 10) < 0.001);
        assert_eq!(pearson(&x, &[3.0; 10]), None);
        assert_eq!(pearson(&x, &x), Some(1.0));
    }

    #[test]
    fn p_value_reference_points() {
        // r = 0 gives p = 1; with df = 1 the t distribution is Cauchy, so
        // p = 1 - 2 atan(|t|) / pi.
        assert!((pearson_p_value(0.0, 10) - 1.0).abs() < 1e-12);
        let r: f64 = 0.6;
        let t = r / (1.0 - r * r).sqrt();
        let expected = 1.0 - 2.0 * t.atan() / std::f64::consts::PI;
        assert!((pearson_p_value(r, 3) - expected).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn matrix_with_constant_column() {
        let corpus = Corpus::new(vec![
            doc("a", Sector::Health, Continent::Asia),
            doc("b", Sector::Health, Continent::Asia),
            doc("c", Sector::Health, Continent::Europe),
            doc("d", Sector::Government, Continent::Europe),
        ])
        .unwrap();
        let rows = vec![
            row("a", 10, 1.0),
            row("b", 20, 2.5),
            row("c", 35, 2.0),
            row("d", 5, 9.0),
        ];
        let m = correlations(&rows, &corpus, None).unwrap();
        let c = m.cell("word_count", "s:pos").unwrap();
        assert_eq!(c.r, None);
        assert_eq!(
            m.cell("fkgl", "word_count").unwrap().r,
            m.cell("word_count", "fkgl").unwrap().r
        );
        assert!(correlations(&rows, &corpus, Some(Sector::Government)).is_err());
        assert_eq!(
            correlations(&rows, &corpus, Some(Sector::Health)).unwrap().cells[0][0].n,
            3
        );

        let mut buf = Vec::new();
        write_correlations_csv(&[m], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("all,word_count,s:pos,4,NA,NA,NA,NA,NA,NA"));
    }

    #[test]
    fn metrics_csv_round_trip() {
        let rows = vec![row("a", 10, 1.25), row("b", 20, -2.62)];
        let mut buf = Vec::new();
        write_metrics_csv(&rows, &mut buf).unwrap();
        assert_eq!(read_metrics_csv(buf.as_slice()).unwrap(), rows);
    }
}
