//! Correlation and regression analysis over centrality vectors.
//!
//! The centerpiece is the 10 x 28 matrix of Kendall tau-b rank correlations
//! between classical and community-aware measures, summarized by block
//! means, histograms, and a thresholded bipartite network. Matrices from
//! different graphs are compared by Pearson correlation, and the regression
//! suite relates block means to topological features with OLS and
//! heteroskedasticity-weighted least squares.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::centrality::{all_classical, CentralityParams};
use crate::community::{all_community, MixedParams};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::stats::{TopoFeatures, FEATURE_ORDER};
use crate::{Error, Result};

/// Kendall tau-b with tie corrections, by merge-sort inversion counting.
///
/// Returns `Ok(None)` when either vector is entirely tied, where tau-b is
/// undefined; downstream aggregation skips such pairs.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Invalid(format!(
            "length mismatch: {} vs {}",
            n,
            y.len()
        )));
    }
    if n < 2 {
        return Err(Error::Invalid(format!("need at least 2 points, got {n}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("non-finite value in input".to_string()));
    }

    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n as i64) * (n as i64 - 1) / 2;
    let mut n1 = 0i64; // pairs tied in x
    let mut n3 = 0i64; // pairs tied in both
    let mut run_x = 1i64;
    let mut run_xy = 1i64;
    for i in 1..n {
        if pairs[i].0 == pairs[i - 1].0 {
            run_x += 1;
            if pairs[i].1 == pairs[i - 1].1 {
                run_xy += 1;
            } else {
                n3 += run_xy * (run_xy - 1) / 2;
                run_xy = 1;
            }
        } else {
            n1 += run_x * (run_x - 1) / 2;
            n3 += run_xy * (run_xy - 1) / 2;
            run_x = 1;
            run_xy = 1;
        }
    }
    n1 += run_x * (run_x - 1) / 2;
    n3 += run_xy * (run_xy - 1) / 2;

    // Sorting by (x, y) zeroes inversions inside x-tie runs, so the strict
    // y-inversions that remain are exactly the discordant pairs.
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let swaps = count_inversions(&mut ys) as i64;

    // The array is sorted now; y-tie runs read off directly.
    let mut n2 = 0i64;
    let mut run_y = 1i64;
    for i in 1..n {
        if ys[i] == ys[i - 1] {
            run_y += 1;
        } else {
            n2 += run_y * (run_y - 1) / 2;
            run_y = 1;
        }
    }
    n2 += run_y * (run_y - 1) / 2;

    if n0 == n1 || n0 == n2 {
        return Ok(None);
    }
    let numerator = n0 - n1 - n2 + n3 - 2 * swaps;
    Ok(Some(
        numerator as f64 / (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt(),
    ))
}

/// Counts strict inversions while merge-sorting in place.
fn count_inversions(values: &mut [f64]) -> u64 {
    let n = values.len();
    let mut buffer = vec![0.0; n];
    let mut count = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo + width < n {
            let mid = lo + width;
            let hi = (mid + width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if values[j] < values[i] {
                    count += (mid - i) as u64;
                    buffer[k] = values[j];
                    j += 1;
                } else {
                    buffer[k] = values[i];
                    i += 1;
                }
                k += 1;
            }
            buffer[k..hi].copy_from_slice(if i < mid {
                &values[i..mid]
            } else {
                &values[j..hi]
            });
            values[lo..hi].copy_from_slice(&buffer[lo..hi]);
            lo += 2 * width;
        }
        width *= 2;
    }
    count
}

/// Column blocks of the correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Local,
    Global,
    Mixed,
}

impl Block {
    pub fn label(self) -> &'static str {
        match self {
            Block::Local => "LOCAL",
            Block::Global => "GLOBAL",
            Block::Mixed => "MIXED",
        }
    }
}

/// Kendall correlations of every classical measure (rows) against every
/// community-aware measure (columns). `None` marks an undefined entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    /// Block of column `j`: ten local components, then the twelve
    /// global-side measures, then the six mixed ones.
    pub fn col_block(j: usize) -> Block {
        match j {
            0..=9 => Block::Local,
            10..=21 => Block::Global,
            _ => Block::Mixed,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }
}

/// Computes the full 10 x 28 correlation matrix for one partitioned graph.
pub fn heatmap(
    g: &Graph,
    p: &Partition,
    cparams: &CentralityParams,
    mparams: &MixedParams,
) -> Result<CorrelationMatrix> {
    let classical = all_classical(g, cparams)?;
    let community = all_community(g, p, cparams, mparams)?;
    let mut values = Vec::with_capacity(classical.len());
    for row in &classical {
        let mut line = Vec::with_capacity(community.len());
        for col in &community {
            line.push(kendall_tau_b(&row.scores, &col.scores)?);
        }
        values.push(line);
    }
    Ok(CorrelationMatrix {
        rows: classical.iter().map(|v| v.measure.clone()).collect(),
        cols: community.iter().map(|v| v.measure.clone()).collect(),
        values,
    })
}

/// Mean correlation per block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMeans {
    pub local: f64,
    pub global: f64,
    pub mixed: f64,
}

/// Mean of the defined entries in each block, signed by default, absolute
/// when `absolute` is set. A block with no defined entries is an error.
pub fn block_means(m: &CorrelationMatrix, absolute: bool) -> Result<BlockMeans> {
    let mut sums = [0.0f64; 3];
    let mut counts = [0usize; 3];
    for row in &m.values {
        for (j, v) in row.iter().enumerate() {
            if let Some(tau) = v {
                let b = CorrelationMatrix::col_block(j) as usize;
                sums[b] += if absolute { tau.abs() } else { *tau };
                counts[b] += 1;
            }
        }
    }
    let mean = |b: Block| {
        let i = b as usize;
        if counts[i] == 0 {
            Err(Error::InsufficientData(format!(
                "no defined correlations in the {} block",
                b.label()
            )))
        } else {
            Ok(sums[i] / counts[i] as f64)
        }
    };
    Ok(BlockMeans {
        local: mean(Block::Local)?,
        global: mean(Block::Global)?,
        mixed: mean(Block::Mixed)?,
    })
}

/// Counts over half-open bins [k w, (k+1) w) tiling [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    /// Bin index k of `counts[0]`.
    pub first_bin: i64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_range(&self, i: usize) -> (f64, f64) {
        let k = self.first_bin + i as i64;
        (k as f64 * self.bin_width, (k + 1) as f64 * self.bin_width)
    }

    /// Bin with the largest count; ties go to the lower bin.
    pub fn modal_class(&self) -> (f64, f64) {
        let best = self
            .counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, c)| (c, usize::MAX - i))
            .expect("histogram has at least one bin")
            .0;
        self.bin_range(best)
    }
}

/// Histogram of correlation values with the given bin width.
pub fn histogram(values: &[f64], bin_width: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) {
        return Err(Error::Invalid(format!(
            "bin width {bin_width} must be positive"
        )));
    }
    if values.is_empty() {
        return Err(Error::Invalid("histogram of no values".to_string()));
    }
    if values.iter().any(|v| !v.is_finite() || v.abs() > 1.0 + 1e-12) {
        return Err(Error::Invalid(
            "correlation values must lie in [-1, 1]".to_string(),
        ));
    }
    let first_bin = (-1.0f64 / bin_width).floor() as i64;
    let last_bin = (1.0f64 / bin_width).floor() as i64;
    let mut counts = vec![0u64; (last_bin - first_bin + 1) as usize];
    for &v in values {
        let k = ((v / bin_width).floor() as i64).clamp(first_bin, last_bin);
        counts[(k - first_bin) as usize] += 1;
    }
    Ok(Histogram {
        bin_width,
        first_bin,
        counts,
    })
}

/// Pearson correlation between two matrices over one block, using entries
/// defined in both (pairwise complete).
pub fn compare_heatmaps(
    a: &CorrelationMatrix,
    b: &CorrelationMatrix,
    block: Block,
) -> Result<f64> {
    if a.rows.len() != b.rows.len() || a.cols.len() != b.cols.len() {
        return Err(Error::Invalid("matrix shapes differ".to_string()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..a.values.len() {
        for j in 0..a.values[i].len() {
            if CorrelationMatrix::col_block(j) != block {
                continue;
            }
            if let (Some(u), Some(v)) = (a.values[i][j], b.values[i][j]) {
                xs.push(u);
                ys.push(v);
            }
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} shared defined entries in the {} block",
            xs.len(),
            block.label()
        )));
    }
    crate::stats::pearson(&xs, &ys).ok_or_else(|| {
        Error::InsufficientData(format!(
            "zero variance across the {} block",
            block.label()
        ))
    })
}

/// One edge of the thresholded bipartite correlation network.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEdge {
    pub classical: String,
    pub community: String,
    pub tau: f64,
}

/// Edges between measure pairs whose correlation strictly exceeds the
/// threshold.
pub fn threshold_network(
    m: &CorrelationMatrix,
    threshold: f64,
) -> Result<Vec<ThresholdEdge>> {
    if !(-1.0 < threshold && threshold < 1.0) {
        return Err(Error::Invalid(format!(
            "threshold {threshold} outside (-1, 1)"
        )));
    }
    let mut edges = Vec::new();
    for (i, row) in m.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let Some(tau) = v {
                if *tau > threshold {
                    edges.push(ThresholdEdge {
                        classical: m.rows[i].clone(),
                        community: m.cols[j].clone(),
                        tau: *tau,
                    });
                }
            }
        }
    }
    Ok(edges)
}

/// A fitted simple linear regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    pub p_value: f64,
    pub ci95: (f64, f64),
    pub r_squared: f64,
    pub n: usize,
}

/// Ordinary least squares with a two-sided t-test on the slope.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(Error::Invalid(format!(
            "regression needs matched vectors of at least 3 points, got {} and {}",
            n,
            y.len()
        )));
    }
    weighted_fit(x, y, None)
}

/// Weighted least squares with weights from the log-variance auxiliary
/// regression: OLS residuals feed ln(u^2 + 1e-12) on x, the exponentiated
/// fit estimates the conditional variance, and its inverse weights the
/// final regression. Exact-fit data short-circuits to the OLS result.
pub fn wls_wooldridge(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n != y.len() || n < 5 {
        return Err(Error::Invalid(format!(
            "weighted regression needs at least 5 points, got {n}"
        )));
    }
    let base = ols(x, y)?;
    let residual_sq: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let e = yi - (base.intercept + base.slope * xi);
            e * e
        })
        .collect();
    if residual_sq.iter().all(|&e| e == 0.0) {
        return Ok(base);
    }
    let log_sq: Vec<f64> = residual_sq.iter().map(|&e| (e + 1e-12).ln()).collect();
    let aux = ols(x, &log_sq)?;
    let weights: Vec<f64> = x
        .iter()
        .map(|&xi| (-(aux.intercept + aux.slope * xi)).exp())
        .collect();
    weighted_fit(x, y, Some(&weights))
}

fn weighted_fit(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Result<LinearFit> {
    let n = x.len();
    // A constant regressor must fail cleanly even when the mean round-trip
    // leaves residual variance of order 1e-30.
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::Invalid("regressor has zero variance".to_string()));
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let total: f64 = (0..n).map(&w).sum();
    let mx: f64 = (0..n).map(|i| w(i) * x[i]).sum::<f64>() / total;
    let my: f64 = (0..n).map(|i| w(i) * y[i]).sum::<f64>() / total;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxx += w(i) * dx * dx;
        sxy += w(i) * dx * dy;
        syy += w(i) * dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Invalid(
            "regressor has zero variance".to_string(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = (0..n)
        .map(|i| {
            let e = y[i] - (intercept + slope * x[i]);
            w(i) * e * e
        })
        .sum();
    let r_squared = if syy == 0.0 { 0.0 } else { 1.0 - sse / syy };
    let df = (n - 2) as f64;
    let std_error = (sse / df / sxx).sqrt();
    let (p_value, ci95) = if std_error == 0.0 {
        let p = if slope == 0.0 { 1.0 } else { 0.0 };
        (p, (slope, slope))
    } else {
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        let t = slope / std_error;
        let p = 2.0 * (1.0 - dist.cdf(t.abs()));
        let margin = dist.inverse_cdf(0.975) * std_error;
        (p, (slope - margin, slope + margin))
    };
    Ok(LinearFit {
        slope,
        intercept,
        std_error,
        p_value,
        ci95,
        r_squared,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Ols,
    Wls,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ols => "OLS",
            Estimator::Wls => "WLS",
        }
    }
}

/// One network of the regression corpus: its features and its two block
/// means.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPoint {
    pub name: String,
    pub features: TopoFeatures,
    pub mean_local: f64,
    pub mean_global: f64,
}

/// Outcome of one (feature, block, estimator) regression. `fit` is `None`
/// when the combination was skipped; `skip_reason` says why.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub feature: String,
    pub block: Block,
    pub estimator: Estimator,
    pub n_used: usize,
    pub fit: Option<LinearFit>,
    /// 2 at p <= 0.01, 1 at p <= 0.05, else 0.
    pub stars: u8,
    pub skip_reason: Option<String>,
}

/// Regresses each block mean on each feature with both estimators.
///
/// Networks with an undefined feature value drop out of that feature's
/// regressions; the exponent feature additionally requires a passing
/// goodness-of-fit gate. Combinations left with fewer than 3 points (5 for
/// the weighted estimator) are skipped, not fabricated.
pub fn regression_suite(corpus: &[CorpusPoint]) -> Result<Vec<RegressionResult>> {
    if corpus.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "regression corpus needs at least 10 networks, got {}",
            corpus.len()
        )));
    }
    let mut out = Vec::with_capacity(FEATURE_ORDER.len() * 4);
    for feature in FEATURE_ORDER {
        let usable: Vec<&CorpusPoint> = corpus
            .iter()
            .filter(|p| {
                p.features.get(feature).is_some()
                    && (feature != "gamma_pred" || p.features.macros.ks_pass == Some(true))
            })
            .collect();
        let xs: Vec<f64> = usable
            .iter()
            .map(|p| p.features.get(feature).expect("filtered to defined"))
            .collect();
        for block in [Block::Local, Block::Global] {
            let ys: Vec<f64> = usable
                .iter()
                .map(|p| match block {
                    Block::Local => p.mean_local,
                    Block::Global => p.mean_global,
                    Block::Mixed => unreachable!(),
                })
                .collect();
            for estimator in [Estimator::Ols, Estimator::Wls] {
                let minimum = match estimator {
                    Estimator::Ols => 3,
                    Estimator::Wls => 5,
                };
                let attempt = if xs.len() < minimum {
                    Err(Error::InsufficientData(format!(
                        "{} usable networks, need {minimum}",
                        xs.len()
                    )))
                } else {
                    match estimator {
                        Estimator::Ols => ols(&xs, &ys),
                        Estimator::Wls => wls_wooldridge(&xs, &ys),
                    }
                };
                let (fit, stars, skip_reason) = match attempt {
                    Ok(fit) => {
                        let stars = if fit.p_value <= 0.01 {
                            2
                        } else if fit.p_value <= 0.05 {
                            1
                        } else {
                            0
                        };
                        (Some(fit), stars, None)
                    }
                    Err(e) => (None, 0, Some(e.to_string())),
                };
                out.push(RegressionResult {
                    feature: feature.to_string(),
                    block,
                    estimator,
                    n_used: xs.len(),
                    fit,
                    stars,
                    skip_reason,
                });
            }
        }
    }
    Ok(out)
}
