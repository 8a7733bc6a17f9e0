//! Batch command-line surface over the library: benchmark generation,
//! community detection, centrality tables, correlation analysis, and an
//! end-to-end pipeline.
//!
//! Every command is deterministic given its inputs and seed, and every
//! output location receives a provenance JSON that echoes the full
//! parameter set, so any artifact can be regenerated from its sidecar
//! alone. Provenance never includes timestamps or host details; identical
//! runs are byte-identical.
//!
//! Exit codes: 0 success, 1 runtime failure (I/O, parse, convergence),
//! 2 usage or validation error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use commcent::analysis::{
    block_means, heatmap, histogram, regression_suite, threshold_network, Block, CorpusPoint,
    CorrelationMatrix, Estimator,
};
use commcent::centrality::{all_classical, CentralityParams};
use commcent::community::{all_community, MixedParams};
use commcent::graph::load_edge_list;
use commcent::io;
use commcent::lfr::{generate, LfrParams};
use commcent::partition::{load_partition, louvain, mixing_parameter, modularity};
use commcent::stats::topo_features;
use commcent::{Error, Graph, Labels, LoadedGraph, Partition, Result};

#[derive(Parser)]
#[command(name = "commcent", version, about = "Community-aware centrality toolkit")]
struct Cli {
    /// Cap the worker thread count. Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark graph with planted communities.
    Generate(GenerateArgs),
    /// Detect communities, or ingest an externally computed partition.
    Communities(CommunitiesArgs),
    /// Tabulate centrality scores, one row per node.
    Centrality(CentralityArgs),
    /// Rank-correlate every classical measure against every community-aware one.
    Heatmap(HeatmapArgs),
    /// Histogram the correlations of one block of the heatmap.
    Histogram(HistogramArgs),
    /// Keep heatmap cells above a threshold as a bipartite edge list.
    Corrnet(CorrnetArgs),
    /// Tabulate topological features, optionally as a regression corpus.
    Features(FeaturesArgs),
    /// Regress correlation block means on topological features.
    Regress(RegressArgs),
    /// Run a parameter grid end to end: generate, correlate, histogram, average.
    Pipeline(PipelineArgs),
}

/// Measure parameters shared by every command that computes centralities.
/// Defaults mirror the library defaults, and all values are echoed into
/// the provenance sidecar verbatim.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct MeasureOpts {
    /// Katz attenuation as a fraction of the spectral-radius bound.
    #[arg(long, default_value_t = CentralityParams::default().katz_fraction)]
    katz_fraction: f64,
    /// Teleport damping of the random-walk measure.
    #[arg(long, default_value_t = CentralityParams::default().pagerank_damping)]
    pagerank_damping: f64,
    /// Decay rate of the diffusion measure.
    #[arg(long, default_value_t = CentralityParams::default().diffusion_lambda)]
    diffusion_lambda: f64,
    /// Scale constant of the comm measure.
    #[arg(long, default_value_t = MixedParams::default().comm_r)]
    comm_r: f64,
    /// Weight on the local term of the community-aware k-shell.
    #[arg(long, default_value_t = MixedParams::default().kshell_alpha)]
    kshell_alpha: f64,
}

impl Default for MeasureOpts {
    fn default() -> Self {
        let c = CentralityParams::default();
        let m = MixedParams::default();
        MeasureOpts {
            katz_fraction: c.katz_fraction,
            pagerank_damping: c.pagerank_damping,
            diffusion_lambda: c.diffusion_lambda,
            comm_r: m.comm_r,
            kshell_alpha: m.kshell_alpha,
        }
    }
}

impl MeasureOpts {
    fn centrality(&self) -> CentralityParams {
        CentralityParams {
            katz_fraction: self.katz_fraction,
            pagerank_damping: self.pagerank_damping,
            diffusion_lambda: self.diffusion_lambda,
            ..CentralityParams::default()
        }
    }

    fn mixed(&self) -> MixedParams {
        MixedParams {
            comm_r: self.comm_r,
            kshell_alpha: self.kshell_alpha,
        }
    }

    fn provenance(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("measure params serialize")
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Fraction of each node's edges leaving its community, in [0, 1].
    #[arg(long)]
    mu: f64,
    /// Degree distribution exponent.
    #[arg(long, default_value_t = LfrParams::default().gamma)]
    gamma: f64,
    /// Community size distribution exponent.
    #[arg(long, default_value_t = LfrParams::default().theta)]
    theta: f64,
    /// Target mean degree.
    #[arg(long, default_value_t = LfrParams::default().avg_degree)]
    avg_degree: f64,
    #[arg(long, default_value_t = LfrParams::default().max_degree)]
    max_degree: usize,
    #[arg(long, default_value_t = LfrParams::default().min_community)]
    min_community: usize,
    #[arg(long, default_value_t = LfrParams::default().max_community)]
    max_community: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for network.edges, network.cmty, provenance.json.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CommunitiesArgs {
    /// Input edge list.
    #[arg(short, long)]
    graph: PathBuf,
    /// Partition to ingest instead of running detection.
    #[arg(short, long)]
    partition: Option<PathBuf>,
    /// Detection seed; unused when a partition is supplied.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for communities.cmty and provenance.json.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CentralityArgs {
    /// Input edge list.
    #[arg(short, long)]
    graph: PathBuf,
    /// With a partition, the community-aware columns follow the classical ones.
    #[arg(short, long)]
    partition: Option<PathBuf>,
    #[command(flatten)]
    measure: MeasureOpts,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct HeatmapArgs {
    /// Input edge list.
    #[arg(short, long)]
    graph: PathBuf,
    /// Partition file for the community-aware measures.
    #[arg(short, long)]
    partition: PathBuf,
    #[command(flatten)]
    measure: MeasureOpts,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct HistogramArgs {
    /// Input edge list.
    #[arg(short, long)]
    graph: PathBuf,
    /// Partition file for the community-aware measures.
    #[arg(short, long)]
    partition: PathBuf,
    /// Which column block of the heatmap to histogram.
    #[arg(long, value_enum)]
    block: BlockArg,
    #[arg(long, default_value_t = 0.1)]
    bin_width: f64,
    #[command(flatten)]
    measure: MeasureOpts,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorrnetArgs {
    /// Input edge list.
    #[arg(short, long)]
    graph: PathBuf,
    /// Partition file for the community-aware measures.
    #[arg(short, long)]
    partition: PathBuf,
    /// Keep cells strictly above this value.
    #[arg(long, default_value_t = 0.7)]
    threshold: f64,
    #[command(flatten)]
    measure: MeasureOpts,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Input edge lists; one output row per graph, in the given order.
    #[arg(short, long, required = true)]
    graph: Vec<PathBuf>,
    /// Partitions paired with the graphs; when absent, detection runs.
    #[arg(short, long)]
    partition: Vec<PathBuf>,
    /// Detection seed for graphs without a partition.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute correlation block means and emit a regression corpus.
    #[arg(long)]
    corpus: bool,
    /// Report block means as magnitudes instead of signed values.
    #[arg(long)]
    abs_means: bool,
    #[command(flatten)]
    measure: MeasureOpts,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct RegressArgs {
    /// Corpus CSV as written by `features --corpus`.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Both)]
    estimator: EstimatorArg,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    /// JSON grid configuration; unknown keys are rejected.
    #[arg(long)]
    config: PathBuf,
    /// Report block means as magnitudes instead of signed values.
    #[arg(long)]
    abs_means: bool,
    /// Output directory.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockArg {
    Local,
    Global,
    Mixed,
}

impl BlockArg {
    fn block(self) -> Block {
        match self {
            BlockArg::Local => Block::Local,
            BlockArg::Global => Block::Global,
            BlockArg::Mixed => Block::Mixed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EstimatorArg {
    Ols,
    Wls,
    Both,
}

impl EstimatorArg {
    fn keeps(self, e: Estimator) -> bool {
        match self {
            EstimatorArg::Ols => e == Estimator::Ols,
            EstimatorArg::Wls => e == Estimator::Wls,
            EstimatorArg::Both => true,
        }
    }

    fn label(self) -> &'static str {
        match self {
            EstimatorArg::Ols => "ols",
            EstimatorArg::Wls => "wls",
            EstimatorArg::Both => "both",
        }
    }
}

/// Grid configuration for the pipeline command: a full LFR parameter set
/// minus mu and seed, which range over the grid. Unknown keys are rejected
/// so a typo cannot silently fall back to a default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineConfig {
    n: usize,
    mus: Vec<f64>,
    seeds: Vec<u64>,
    #[serde(default = "default_avg_degree")]
    avg_degree: f64,
    #[serde(default = "default_max_degree")]
    max_degree: usize,
    #[serde(default = "default_gamma")]
    gamma: f64,
    #[serde(default = "default_theta")]
    theta: f64,
    #[serde(default = "default_min_community")]
    min_community: usize,
    #[serde(default = "default_max_community")]
    max_community: usize,
    #[serde(default = "default_bin_width")]
    bin_width: f64,
    #[serde(default)]
    abs_means: bool,
    #[serde(default)]
    measure: MeasureOpts,
}

fn default_avg_degree() -> f64 {
    LfrParams::default().avg_degree
}

fn default_max_degree() -> usize {
    LfrParams::default().max_degree
}

fn default_gamma() -> f64 {
    LfrParams::default().gamma
}

fn default_theta() -> f64 {
    LfrParams::default().theta
}

fn default_min_community() -> usize {
    LfrParams::default().min_community
}

fn default_max_community() -> usize {
    LfrParams::default().max_community
}

fn default_bin_width() -> f64 {
    0.1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // The global pool can only be configured once; a second attempt in
        // the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Invalid(_) | Error::InsufficientData(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Communities(args) => cmd_communities(args),
        Command::Centrality(args) => cmd_centrality(args),
        Command::Heatmap(args) => cmd_heatmap(args),
        Command::Histogram(args) => cmd_histogram(args),
        Command::Corrnet(args) => cmd_corrnet(args),
        Command::Features(args) => cmd_features(args),
        Command::Regress(args) => cmd_regress(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let params = LfrParams {
        n: args.n,
        avg_degree: args.avg_degree,
        max_degree: args.max_degree,
        gamma: args.gamma,
        theta: args.theta,
        mu: args.mu,
        min_community: args.min_community,
        max_community: args.max_community,
        seed: args.seed,
    };
    let (g, p) = generate(&params)?;
    let labels = Labels::numeric(params.n);
    let realized_mu = mixing_parameter(&g, &p)?;
    let mean_degree = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
    write_file(&args.out.join("network.edges"), &io::write_edge_list(&g, &labels))?;
    write_file(&args.out.join("network.cmty"), &io::write_partition(&p, &labels))?;
    let prov = json!({
        "command": "generate",
        "n": params.n,
        "avg_degree": params.avg_degree,
        "max_degree": params.max_degree,
        "gamma": params.gamma,
        "theta": params.theta,
        "mu": params.mu,
        "min_community": params.min_community,
        "max_community": params.max_community,
        "seed": params.seed,
        "realized_mu": realized_mu,
        "mean_degree": mean_degree,
        "community_count": p.community_count(),
    });
    write_file(&args.out.join("provenance.json"), &pretty(&prov))
}

fn cmd_communities(args: CommunitiesArgs) -> Result<()> {
    let loaded = load_graph(&args.graph)?;
    let p = match &args.partition {
        Some(path) => load_partition(&fs::read_to_string(path)?, &loaded.labels)?,
        None => louvain(&loaded.graph, args.seed)?,
    };
    let mu = mixing_parameter(&loaded.graph, &p)?;
    let q = modularity(&loaded.graph, &p)?;
    write_file(
        &args.out.join("communities.cmty"),
        &io::write_partition(&p, &loaded.labels),
    )?;
    let prov = json!({
        "command": "communities",
        "graph": args.graph,
        "partition": args.partition,
        "seed": args.seed,
        "mixing_parameter": mu,
        "modularity": q,
        "community_count": p.community_count(),
    });
    write_file(&args.out.join("provenance.json"), &pretty(&prov))
}

fn cmd_centrality(args: CentralityArgs) -> Result<()> {
    let loaded = load_graph(&args.graph)?;
    let cparams = args.measure.centrality();
    let mut vectors = all_classical(&loaded.graph, &cparams)?;
    if let Some(path) = &args.partition {
        let p = load_partition(&fs::read_to_string(path)?, &loaded.labels)?;
        vectors.extend(all_community(&loaded.graph, &p, &cparams, &args.measure.mixed())?);
    }
    write_file(&args.out, &io::write_centrality_csv(&vectors, &loaded.labels)?)?;
    let prov = json!({
        "command": "centrality",
        "graph": args.graph,
        "partition": args.partition,
        "params": args.measure.provenance(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_heatmap(args: HeatmapArgs) -> Result<()> {
    let (g, _, p) = load_pair(&args.graph, &args.partition)?;
    let m = heatmap(&g, &p, &args.measure.centrality(), &args.measure.mixed())?;
    write_file(&args.out, &io::write_heatmap_csv(&m)?)?;
    let prov = json!({
        "command": "heatmap",
        "graph": args.graph,
        "partition": args.partition,
        "params": args.measure.provenance(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_histogram(args: HistogramArgs) -> Result<()> {
    let (g, _, p) = load_pair(&args.graph, &args.partition)?;
    let m = heatmap(&g, &p, &args.measure.centrality(), &args.measure.mixed())?;
    let block = args.block.block();
    let h = histogram(&block_cells(&m, block), args.bin_width)?;
    write_file(&args.out, &io::write_histogram_csv(&h)?)?;
    let prov = json!({
        "command": "histogram",
        "graph": args.graph,
        "partition": args.partition,
        "block": block.label(),
        "bin_width": args.bin_width,
        "params": args.measure.provenance(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_corrnet(args: CorrnetArgs) -> Result<()> {
    let (g, _, p) = load_pair(&args.graph, &args.partition)?;
    let m = heatmap(&g, &p, &args.measure.centrality(), &args.measure.mixed())?;
    let edges = threshold_network(&m, args.threshold)?;
    write_file(&args.out, &io::write_threshold_csv(&edges)?)?;
    let prov = json!({
        "command": "corrnet",
        "graph": args.graph,
        "partition": args.partition,
        "threshold": args.threshold,
        "params": args.measure.provenance(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_features(args: FeaturesArgs) -> Result<()> {
    if !args.partition.is_empty() && args.partition.len() != args.graph.len() {
        return Err(Error::Invalid(format!(
            "got {} graphs but {} partitions; supply one per graph or none",
            args.graph.len(),
            args.partition.len()
        )));
    }
    let mut rows = Vec::new();
    let mut corpus = Vec::new();
    for (i, gpath) in args.graph.iter().enumerate() {
        let loaded = load_graph(gpath)?;
        let p = match args.partition.get(i) {
            Some(path) => load_partition(&fs::read_to_string(path)?, &loaded.labels)?,
            None => louvain(&loaded.graph, args.seed)?,
        };
        let features = topo_features(&loaded.graph, &p)?;
        if args.corpus {
            let m = heatmap(&loaded.graph, &p, &args.measure.centrality(), &args.measure.mixed())?;
            let means = block_means(&m, args.abs_means)?;
            corpus.push(CorpusPoint {
                name: network_name(gpath, i),
                features,
                mean_local: means.local,
                mean_global: means.global,
            });
        } else {
            rows.push(features);
        }
    }
    let csv = if args.corpus {
        io::write_corpus_csv(&corpus)?
    } else {
        io::write_features_csv(&rows)?
    };
    write_file(&args.out, &csv)?;
    let prov = json!({
        "command": "features",
        "graphs": args.graph,
        "partitions": args.partition,
        "seed": args.seed,
        "corpus": args.corpus,
        "abs_means": args.abs_means,
        "params": args.measure.provenance(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_regress(args: RegressArgs) -> Result<()> {
    let corpus = io::read_corpus_csv(&fs::read_to_string(&args.corpus)?)?;
    let results: Vec<_> = regression_suite(&corpus)?
        .into_iter()
        .filter(|r| args.estimator.keeps(r.estimator))
        .collect();
    write_file(&args.out, &io::write_regression_csv(&results)?)?;
    let prov = json!({
        "command": "regress",
        "corpus": args.corpus,
        "estimator": args.estimator.label(),
    });
    write_file(&sidecar(&args.out), &pretty(&prov))
}

fn cmd_pipeline(args: PipelineArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)?;
    let cfg: PipelineConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("config {}: {e}", args.config.display())))?;
    if cfg.mus.is_empty() || cfg.seeds.is_empty() {
        return Err(Error::Invalid(
            "config needs at least one mu and one seed".to_string(),
        ));
    }
    let abs = args.abs_means || cfg.abs_means;
    let cparams = cfg.measure.centrality();
    let mparams = cfg.measure.mixed();
    let mut means_csv = String::from("mu,seed,local,global,mixed\n");
    for &mu in &cfg.mus {
        let mut pooled: Vec<(Block, Vec<f64>)> = [Block::Local, Block::Global, Block::Mixed]
            .into_iter()
            .map(|b| (b, Vec::new()))
            .collect();
        for &seed in &cfg.seeds {
            let params = LfrParams {
                n: cfg.n,
                avg_degree: cfg.avg_degree,
                max_degree: cfg.max_degree,
                gamma: cfg.gamma,
                theta: cfg.theta,
                mu,
                min_community: cfg.min_community,
                max_community: cfg.max_community,
                seed,
            };
            let (g, p) = generate(&params)?;
            let m = heatmap(&g, &p, &cparams, &mparams)?;
            write_file(
                &args.out.join(format!("heat_mu{mu:.2}_s{seed}.csv")),
                &io::write_heatmap_csv(&m)?,
            )?;
            let bm = block_means(&m, abs)?;
            means_csv.push_str(&format!(
                "{mu},{seed},{},{},{}\n",
                bm.local, bm.global, bm.mixed
            ));
            for (block, cells) in pooled.iter_mut() {
                cells.extend(block_cells(&m, *block));
            }
        }
        for (block, cells) in &pooled {
            let h = histogram(cells, cfg.bin_width)?;
            write_file(
                &args
                    .out
                    .join(format!("hist_{}_mu{mu:.2}.csv", block.label().to_ascii_lowercase())),
                &io::write_histogram_csv(&h)?,
            )?;
        }
    }
    write_file(&args.out.join("means.csv"), &means_csv)?;
    let prov = json!({
        "command": "pipeline",
        "config": cfg,
        "abs_means": abs,
    });
    write_file(&args.out.join("provenance.json"), &pretty(&prov))
}

fn load_graph(path: &Path) -> Result<LoadedGraph> {
    let loaded = load_edge_list(&fs::read_to_string(path)?)?;
    if loaded.dropped_self_loops > 0 || loaded.dropped_duplicates > 0 {
        eprintln!(
            "note: {} dropped {} self-loops and {} duplicate edges",
            path.display(),
            loaded.dropped_self_loops,
            loaded.dropped_duplicates
        );
    }
    Ok(loaded)
}

fn load_pair(graph: &Path, partition: &Path) -> Result<(Graph, Labels, Partition)> {
    let loaded = load_graph(graph)?;
    let p = load_partition(&fs::read_to_string(partition)?, &loaded.labels)?;
    Ok((loaded.graph, loaded.labels, p))
}

/// Collects the defined cells of one column block of the heatmap.
fn block_cells(m: &CorrelationMatrix, block: Block) -> Vec<f64> {
    let mut out = Vec::new();
    for row in &m.values {
        for (j, v) in row.iter().enumerate() {
            if let Some(v) = v {
                if CorrelationMatrix::col_block(j) == block {
                    out.push(*v);
                }
            }
        }
    }
    out
}

fn network_name(path: &Path, index: usize) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| format!("network{index}"))
}

/// Provenance sidecar path: the output path plus `.provenance.json`, so
/// several commands can share one directory without colliding.
fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".provenance.json");
    PathBuf::from(name)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("provenance serializes");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}
