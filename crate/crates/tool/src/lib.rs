//! The `chaostex` command line. [`run`] parses arguments and returns the
//! process exit status: 0 success, 2 usage, 3 data, 4 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};

use chaostex_core::logistic::series_orbit_check;
use chaostex_core::{ChaoticMap, DescriptorConfig, LbpParams, PcaDims};
use chaostex_harness::features::ExtractOptions;
use chaostex_harness::synth::{generate, SynthSpec};
use chaostex_harness::{
    evaluate, extract_dataset, ingest, EvalSettings, ExperimentResult, FeatureKind, FeatureTable, HarnessError,
    IngestOptions, Protocol, TableMeta,
};
use clap::{Args, Parser, Subcommand};
use log::info;

#[derive(Parser)]
#[command(name = "chaostex", version, about = "Chaotic-map texture descriptors and evaluation")]
struct Cli {
    /// Worker threads for extraction and evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a feature table from a directory-per-class image dataset.
    Extract(ExtractArgs),
    /// Run PCA + LDA over train/test splits of a feature table.
    Evaluate(EvaluateArgs),
    /// Write the summed confusion matrix of a results file as CSV.
    Confusion(ConfusionArgs),
    /// Compare the logistic power series against direct iteration.
    AnalyzeLogistic(AnalyzeArgs),
    /// Generate the synthetic grating dataset.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    data: PathBuf,
    /// Map configuration, e.g. `logistic:mu=3.8` or `circle:mu=0.2,nu=0.5`.
    #[arg(long, default_value = "logistic:mu=3.8", value_parser = parse_with::<ChaoticMap>)]
    map: ChaoticMap,
    #[arg(long, default_value_t = 10)]
    n_iter: usize,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// `P,R` pairs; repeat the flag for several.
    #[arg(long, default_value = "8,1", value_parser = parse_with::<LbpParams>)]
    lbp: Vec<LbpParams>,
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    scales: Vec<f64>,
    /// Plain LBP of the input images instead of the chaotic descriptor.
    #[arg(long)]
    plain: bool,
    /// Drop undecodable images instead of aborting.
    #[arg(long)]
    skip_bad: bool,
    #[arg(long)]
    no_cache: bool,
    /// `.csv` for text, anything else for the CTXF binary format.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    features: PathBuf,
    /// `grouped` (one train group per class) or `half` (random 50/50).
    #[arg(long, default_value = "half", value_parser = parse_with::<Protocol>)]
    protocol: Protocol,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `auto` or a fixed number of components.
    #[arg(long, default_value = "auto", value_parser = parse_with::<PcaDims>)]
    pca: PcaDims,
    /// Candidate LDA regularizations, chosen by cross-validation.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long, default_value_t = chaostex_core::classify::DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConfusionArgs {
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, default_value_t = 3.8)]
    mu: f64,
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Iterations per starting point.
    #[arg(long, default_value_t = 5)]
    steps: u32,
    /// Starting points, spread evenly over the admissible interval.
    #[arg(long, default_value_t = 9)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 40)]
    per_class: usize,
    #[arg(long, default_value_t = 64)]
    size: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn parse_with<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn run_extract(args: ExtractArgs) -> Result<(), HarnessError> {
    let descriptor = DescriptorConfig {
        map: args.map,
        n_iter: args.n_iter,
        delta: args.delta,
        lbp: args.lbp,
        scales: args.scales,
        pca_dims: PcaDims::Auto,
    };
    let kind = if args.plain { FeatureKind::Plain } else { FeatureKind::Chaos };
    let meta = TableMeta { kind, descriptor };
    meta.columns()?;
    let index = ingest(&args.data, IngestOptions { skip_bad: args.skip_bad })?;
    info!("{} images in {} classes", index.len(), index.classes.len());
    let table = extract_dataset(&index, &meta, ExtractOptions { use_cache: !args.no_cache })?;
    table.save(&args.out)?;
    info!("wrote {} x {} features to {}", table.len(), table.values[0].len(), args.out.display());
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<(), HarnessError> {
    let table = FeatureTable::load(&args.features)?;
    let mut settings = EvalSettings {
        protocol: args.protocol,
        rounds: args.rounds,
        seed: args.seed,
        pca: args.pca,
        folds: args.folds,
        ..EvalSettings::default()
    };
    if let Some(grid) = args.lambda {
        if grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(HarnessError::usage("lambda values must be finite and non-negative"));
        }
        settings.lambda_grid = grid;
    }
    let result = evaluate(&table, &settings)?;
    println!("accuracy {:.4} +- {:.4} over {} rounds", result.mean, result.std, result.accuracies.len());
    result.save(&args.out)
}

fn run_confusion(args: ConfusionArgs) -> Result<(), HarnessError> {
    let result = ExperimentResult::load(&args.results)?;
    write(&args.out, &result.confusion_csv())
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), HarnessError> {
    if args.points == 0 {
        return Err(HarnessError::usage("--points must be at least 1"));
    }
    // The minus-branch inverse needs x0 <= (mu - 1)/4.
    let upper = ((args.mu - 1.0) / 4.0).min(1.0);
    let mut out = String::from("x0,n,direct,series,closed_approx,abs_error\n");
    for j in 1..=args.points {
        let x0 = upper * j as f64 / (args.points + 1) as f64;
        for row in series_orbit_check(x0, args.mu, args.steps, args.order)? {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.x0, row.n, row.direct, row.series, row.closed_approx, row.abs_error
            ));
        }
    }
    write(&args.out, &out)
}

fn run_synth(args: SynthArgs) -> Result<(), HarnessError> {
    let spec = SynthSpec { per_class: args.per_class, size: args.size, seed: args.seed, ..SynthSpec::default() };
    let labels = generate(&args.out, &spec)?;
    info!("wrote {} classes x {} images to {}", labels.len(), spec.per_class, args.out.display());
    Ok(())
}

/// Runs one command line (including the program name) and returns its exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = pool.install(|| match cli.command {
        Command::Extract(a) => run_extract(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Confusion(a) => run_confusion(a),
        Command::AnalyzeLogistic(a) => run_analyze(a),
        Command::Synth(a) => run_synth(a),
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
