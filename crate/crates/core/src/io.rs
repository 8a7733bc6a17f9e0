//! CSV and edge-list readers and writers.
//!
//! Text formats are deterministic: fixed column orders, stable row orders,
//! and undefined values as empty cells. Centrality scores carry 12
//! significant digits; all other floats print in Rust's shortest
//! round-trip form, so write/read pairs reproduce values exactly.

use crate::analysis::{
    Block, CorpusPoint, CorrelationMatrix, Histogram, RegressionResult, ThresholdEdge,
};
use crate::centrality::CentralityVector;
use crate::graph::{Graph, Labels};
use crate::partition::Partition;
use crate::stats::{MacroFeatures, MesoFeatures, TopoFeatures, FEATURE_ORDER};
use crate::{Error, Result};

/// Serializes a graph as one `label label` edge per line.
pub fn write_edge_list(g: &Graph, labels: &Labels) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        out.push_str(labels.name(u));
        out.push(' ');
        out.push_str(labels.name(v));
        out.push('\n');
    }
    out
}

/// Serializes a partition as one `label community_id` line per node.
pub fn write_partition(p: &Partition, labels: &Labels) -> String {
    let mut out = String::new();
    for node in 0..p.node_count() as u32 {
        out.push_str(labels.name(node));
        out.push(' ');
        out.push_str(&p.community_of(node).to_string());
        out.push('\n');
    }
    out
}

/// Serializes the label map as `label,index` CSV.
pub fn write_labels_csv(labels: &Labels) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "index"])?;
    for i in 0..labels.len() as u32 {
        w.write_record([labels.name(i), &i.to_string()])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invalid(format!("csv flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// 12 significant digits, as used for centrality scores.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes centrality vectors as a `node,<measure>,...` table, one row per
/// node in label order, scores with 12 significant digits.
pub fn write_centrality_csv(vectors: &[CentralityVector], labels: &Labels) -> Result<String> {
    if vectors.is_empty() {
        return Err(Error::Invalid("no centrality vectors to write".to_string()));
    }
    let n = labels.len();
    for v in vectors {
        if v.scores.len() != n {
            return Err(Error::Invalid(format!(
                "measure {} has {} scores for {} nodes",
                v.measure,
                v.scores.len(),
                n
            )));
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["node".to_string()];
    header.extend(vectors.iter().map(|v| v.measure.clone()));
    w.write_record(&header)?;
    for node in 0..n as u32 {
        let mut row = vec![labels.name(node).to_string()];
        row.extend(vectors.iter().map(|v| sig12(v.scores[node as usize])));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Writes a correlation matrix with classical ids down the rows and
/// community-aware ids across the columns; undefined entries are empty.
pub fn write_heatmap_csv(m: &CorrelationMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(m.cols.iter().cloned());
    w.write_record(&header)?;
    for (i, row) in m.values.iter().enumerate() {
        let mut record = vec![m.rows[i].clone()];
        record.extend(row.iter().map(|v| v.map_or(String::new(), |t| t.to_string())));
        w.write_record(&record)?;
    }
    finish(w)
}

/// Reads a matrix written by [`write_heatmap_csv`].
pub fn read_heatmap_csv(text: &str) -> Result<CorrelationMatrix> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = r.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty correlation matrix file".to_string(),
        })??;
    let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if cols.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "correlation matrix header has no columns".to_string(),
        });
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != cols.len() + 1 {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "expected {} fields, got {}",
                    cols.len() + 1,
                    record.len()
                ),
            });
        }
        rows.push(record[0].to_string());
        let row: Vec<Option<f64>> = record
            .iter()
            .skip(1)
            .map(|cell| parse_optional(cell, line))
            .collect::<Result<_>>()?;
        values.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "correlation matrix has no rows".to_string(),
        });
    }
    Ok(CorrelationMatrix { rows, cols, values })
}

fn parse_optional(cell: &str, line: usize) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>().map(Some).map_err(|_| Error::Parse {
        line,
        msg: format!("expected a number or empty cell, got {cell:?}"),
    })
}

fn parse_required(cell: &str, line: usize, what: &str) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("{what}: expected a number, got {cell:?}"),
    })
}

fn ks_pass_cell(v: Option<bool>) -> String {
    v.map_or(String::new(), |b| b.to_string())
}

fn feature_cells(f: &TopoFeatures) -> Vec<String> {
    FEATURE_ORDER
        .iter()
        .map(|id| f.get(id).map_or(String::new(), |v| v.to_string()))
        .collect()
}

/// Writes one row of topological features per network: exactly the 16
/// feature columns plus `ks_pass`, undefined values as empty cells.
pub fn write_features_csv(rows: &[TopoFeatures]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = FEATURE_ORDER.iter().map(|s| s.to_string()).collect();
    header.push("ks_pass".to_string());
    w.write_record(&header)?;
    for f in rows {
        let mut record = feature_cells(f);
        record.push(ks_pass_cell(f.macros.ks_pass));
        w.write_record(&record)?;
    }
    finish(w)
}

/// Writes the regression corpus: per network its name, the 16 features,
/// the goodness-of-fit flag, and the two block means.
pub fn write_corpus_csv(corpus: &[CorpusPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["network".to_string()];
    header.extend(FEATURE_ORDER.iter().map(|s| s.to_string()));
    header.extend(["ks_pass", "mean_local", "mean_global"].map(String::from));
    w.write_record(&header)?;
    for point in corpus {
        let mut record = vec![point.name.clone()];
        record.extend(feature_cells(&point.features));
        record.push(ks_pass_cell(point.features.macros.ks_pass));
        record.push(point.mean_local.to_string());
        record.push(point.mean_global.to_string());
        w.write_record(&record)?;
    }
    finish(w)
}

/// Reads a corpus written by [`write_corpus_csv`].
pub fn read_corpus_csv(text: &str) -> Result<Vec<CorpusPoint>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = r.records();
    let header = records.next().ok_or_else(|| Error::Parse {
        line: 1,
        msg: "empty corpus file".to_string(),
    })??;
    let expected_len = 1 + FEATURE_ORDER.len() + 3;
    if header.len() != expected_len || &header[0] != "network" {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "corpus header must start with \"network\" and have {expected_len} columns"
            ),
        });
    }
    let mut out = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != expected_len {
            return Err(Error::Parse {
                line,
                msg: format!("expected {expected_len} fields, got {}", record.len()),
            });
        }
        let get = |j: usize| &record[1 + j];
        let opt = |j: usize| parse_optional(get(j), line);
        let req = |j: usize| parse_required(get(j), line, FEATURE_ORDER[j]);
        let ks_cell = &record[1 + FEATURE_ORDER.len()];
        let ks_pass = match ks_cell {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("ks_pass: expected true, false, or empty, got {other:?}"),
                })
            }
        };
        let features = TopoFeatures {
            macros: MacroFeatures {
                density: req(0)?,
                transitivity: req(1)?,
                assortativity: opt(2)?,
                avg_distance: opt(3)?,
                diameter: opt(4)?,
                efficiency: req(5)?,
                gamma_pred: opt(6)?,
                ks_pass,
            },
            mesos: MesoFeatures {
                mixing_parameter: req(7)?,
                modularity: req(8)?,
                internal_distance: req(9)?,
                internal_density: req(10)?,
                max_odf: req(11)?,
                avg_odf: req(12)?,
                flake_odf: req(13)?,
                embeddedness: req(14)?,
                hub_dominance: req(15)?,
            },
        };
        let base = 1 + FEATURE_ORDER.len() + 1;
        out.push(CorpusPoint {
            name: record[0].to_string(),
            features,
            mean_local: parse_required(&record[base], line, "mean_local")?,
            mean_global: parse_required(&record[base + 1], line, "mean_global")?,
        });
    }
    Ok(out)
}

/// Writes regression results, one row per (feature, block, estimator).
/// Skipped combinations leave the numeric cells empty and give the reason.
pub fn write_regression_csv(results: &[RegressionResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "feature",
        "block",
        "estimator",
        "n",
        "slope",
        "intercept",
        "std_error",
        "p_value",
        "ci_low",
        "ci_high",
        "r_squared",
        "stars",
        "skip_reason",
    ])?;
    for r in results {
        let fit_cells = match &r.fit {
            Some(f) => [
                f.slope.to_string(),
                f.intercept.to_string(),
                f.std_error.to_string(),
                f.p_value.to_string(),
                f.ci95.0.to_string(),
                f.ci95.1.to_string(),
                f.r_squared.to_string(),
            ],
            None => Default::default(),
        };
        let mut record = vec![
            r.feature.clone(),
            r.block.label().to_string(),
            r.estimator.label().to_string(),
            r.n_used.to_string(),
        ];
        record.extend(fit_cells);
        record.push("*".repeat(r.stars as usize));
        record.push(r.skip_reason.clone().unwrap_or_default());
        w.write_record(&record)?;
    }
    finish(w)
}

/// Writes a histogram as `bin_lo,bin_hi,count` rows over the full tiling.
pub fn write_histogram_csv(h: &Histogram) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_lo", "bin_hi", "count"])?;
    for (i, count) in h.counts.iter().enumerate() {
        let (lo, hi) = h.bin_range(i);
        w.write_record([lo.to_string(), hi.to_string(), count.to_string()])?;
    }
    finish(w)
}

/// Writes a thresholded correlation network as a bipartite edge list.
pub fn write_threshold_csv(edges: &[ThresholdEdge]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["classical_id", "ca_id", "tau"])?;
    for e in edges {
        w.write_record([e.classical.as_str(), e.community.as_str(), &e.tau.to_string()])?;
    }
    finish(w)
}

/// Writes block means alongside their strength-style magnitudes.
pub fn write_block_means_csv(signed: &crate::analysis::BlockMeans) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["block", "mean"])?;
    for (block, mean) in [
        (Block::Local, signed.local),
        (Block::Global, signed.global),
        (Block::Mixed, signed.mixed),
    ] {
        w.write_record([block.label(), &mean.to_string()])?;
    }
    finish(w)
}
