use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gssl_core::data::{gen_gaussian_mixture, gen_rectangle, gen_ring_of_gaussians, sample_labeled, LabelBudget};
use log::{info, warn};

use crate::cache::{read_graph, write_graph};
use crate::config::{DatasetSpec, ExperimentConfig};
use crate::error::{Error, Result};
use crate::graph::build_graph_parallel;
use crate::harness::{evaluate, run_benchmark, thread_pool, timed_predict, trial_seed};
use crate::io::{write_csv, write_scores};

#[derive(Debug, Parser)]
#[command(name = "gssl", version, about = "Graph-based semi-supervised learning experiments")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset as CSV.
    Generate(GenerateArgs),
    /// Build the kNN graph of a dataset and write it to a cache file.
    Graph(GraphArgs),
    /// Run one method on one labeled sample.
    Run(RunArgs),
    /// Run every method, budget and trial and write result tables.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Generator {
    Ring,
    Gmm,
    Rectangle,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub generator: Generator,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rectangle height.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Default)]
pub struct DatasetArgs {
    /// Generator name (ring, gmm, rectangle) or path to a CSV file.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Number of points for generated datasets.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Seed for generated datasets.
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    /// Label column of a CSV dataset.
    #[arg(long)]
    pub label_column: Option<String>,
    /// Comma-separated feature columns of a CSV dataset (default: all others).
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,
}

impl DatasetArgs {
    fn spec(&self) -> Result<Option<DatasetSpec>> {
        let Some(name) = &self.dataset else {
            return Ok(None);
        };
        let mut spec = DatasetSpec::from_flag(name, self.n, self.beta, self.data_seed)?;
        if let DatasetSpec::Csv {
            label_column, features, ..
        } = &mut spec
        {
            if let Some(l) = &self.label_column {
                *label_column = l.clone();
            }
            features.clone_from(&self.features);
        }
        Ok(Some(spec))
    }
}

#[derive(Debug, Args, Default)]
pub struct GraphParams {
    /// Neighbor rank used for the kernel bandwidth.
    #[arg(long)]
    pub scale_k: Option<usize>,
    /// Neighbors kept per node before symmetrization.
    #[arg(long)]
    pub neighbor_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[command(flatten)]
    pub graph: GraphParams,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, env = "GSSL_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[command(flatten)]
    pub graph: GraphParams,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Load the graph from a cache file instead of building it.
    #[arg(long)]
    pub graph_cache: Option<PathBuf>,
    #[arg(long, default_value = "auc_spec")]
    pub method: String,
    /// Total labeled points, split equally across classes.
    #[arg(long)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
    /// Base seed; the label seed is base seed + trial.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write per-node scores (node,score,hard_label) to this file.
    #[arg(long)]
    pub dump_scores: Option<PathBuf>,
    #[arg(long, env = "GSSL_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[command(flatten)]
    pub graph: GraphParams,
    /// TOML experiment config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed; trial t uses base seed + t.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "GSSL_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

fn base_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::from_toml_file(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn apply_common(cfg: &mut ExperimentConfig, data: &DatasetArgs, graph: &GraphParams) -> Result<()> {
    if let Some(spec) = data.spec()? {
        cfg.datasets = vec![spec];
    }
    if let Some(k) = graph.scale_k {
        cfg.scale_k = k;
    }
    if let Some(k) = graph.neighbor_k {
        cfg.neighbor_k = k;
    }
    Ok(())
}

fn single_dataset(cfg: &ExperimentConfig) -> Result<&DatasetSpec> {
    match cfg.datasets.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::Usage("no dataset given (use --dataset or a config file)".into())),
        _ => Err(Error::Usage("this command takes exactly one dataset".into())),
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let data = match args.generator {
        Generator::Ring => gen_ring_of_gaussians(args.n, args.seed)?,
        Generator::Gmm => gen_gaussian_mixture(args.n, args.seed)?,
        Generator::Rectangle => {
            let beta = args
                .beta
                .ok_or_else(|| Error::Usage("--beta is required for rectangle".into()))?;
            gen_rectangle(args.n, beta, args.seed)?
        }
    };
    write_csv(&data, &args.out)?;
    info!("wrote {} rows to {}", data.len(), args.out.display());
    Ok(())
}

pub fn cmd_graph(args: &GraphArgs) -> Result<()> {
    let mut cfg = base_config(args.config.as_deref())?;
    apply_common(&mut cfg, &args.data, &args.graph)?;
    let data = single_dataset(&cfg)?.load()?;
    let pool = thread_pool(args.jobs)?;
    let graph = pool.install(|| build_graph_parallel(&data, cfg.scale_k, cfg.neighbor_k))?;
    write_graph(&graph, &args.out)?;
    println!("nodes: {}", graph.len());
    println!("edges: {}", graph.num_edges());
    println!("components: {}", graph.connected_components().1);
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let mut cfg = base_config(args.config.as_deref())?;
    apply_common(&mut cfg, &args.data, &args.graph)?;
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    let data = single_dataset(&cfg)?.load()?;
    let graph = match &args.graph_cache {
        Some(p) => {
            let g = read_graph(p)?;
            if g.len() != data.len() {
                return Err(Error::Schema {
                    path: p.clone(),
                    message: format!("graph has {} nodes, dataset has {}", g.len(), data.len()),
                });
            }
            g
        }
        None => thread_pool(args.jobs)?.install(|| build_graph_parallel(&data, cfg.scale_k, cfg.neighbor_k))?,
    };
    let method = cfg.method(&args.method)?;
    let predictor = method.prepare(&graph)?;
    let seed = trial_seed(cfg.base_seed, args.trial);
    let labels = sample_labeled(&data, LabelBudget::new(args.budget, seed))?;
    let (pred, runtime_ms) = timed_predict(predictor.as_ref(), &labels);
    let pred = pred?;
    if pred.unlabeled_components > 0 {
        warn!(
            "{} connected component(s) contain no labeled node; their scores stay at the initial value",
            pred.unlabeled_components
        );
    }
    if !pred.converged {
        warn!("{} stopped at the iteration limit ({})", method.name(), pred.iterations);
    }
    let eval = evaluate(&data, &labels, &pred)?;
    if let Some(p) = &args.dump_scores {
        write_scores(&pred, p)?;
    }
    println!("dataset: {}", data.name());
    println!("method: {}", method.name());
    println!("n_labeled: {}", args.budget);
    println!("seed: {seed}");
    println!("auc: {}", eval.auc.map_or("NA".to_string(), |a| format!("{a:.6}")));
    println!("accuracy: {:.6}", eval.accuracy);
    println!("runtime_ms: {runtime_ms:.3}");
    println!("iterations: {}", pred.iterations);
    println!("converged: {}", pred.converged);
    Ok(())
}

/// Resolve config file plus flag overrides.
pub fn benchmark_config(args: &BenchmarkArgs) -> Result<ExperimentConfig> {
    let mut cfg = base_config(args.config.as_deref())?;
    apply_common(&mut cfg, &args.data, &args.graph)?;
    if let Some(m) = &args.methods {
        cfg.methods.clone_from(m);
    }
    if let Some(b) = &args.budgets {
        cfg.budgets.clone_from(b);
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if let Some(o) = &args.out {
        cfg.output.clone_from(o);
    }
    Ok(cfg)
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<()> {
    let cfg = benchmark_config(args)?;
    let out = run_benchmark(&cfg, args.jobs)?;
    out.write(&cfg, &cfg.output)?;
    let failed = out.rows.iter().filter(|r| r.error.is_some()).count();
    print!("{}", out.summary_csv());
    println!();
    println!("{} rows ({failed} failed) written to {}", out.rows.len(), cfg.output.display());
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Run(a) => cmd_run(a),
        Command::Benchmark(a) => cmd_benchmark(a),
    }
}
