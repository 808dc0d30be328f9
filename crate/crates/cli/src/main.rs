use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gapminer_core::pipeline::{self, Outcome, PipelineConfig, Stage, MANIFEST_FILE};
use gapminer_core::synth::{self, Generator, SynthParams};
use gapminer_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "gapminer", version, about = "Detect gap-opening papers with persistent homology")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Pipeline configuration file (TOML); flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Input corpus (line-delimited JSON records).
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,

    /// Output directory for artifacts and the manifest.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Master seed for every randomized step.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[arg(long, global = true, value_name = "N")]
    max_dim: Option<usize>,

    /// Minimum lifetime in years for a finite dimension-1 feature to count as a gap.
    #[arg(long, global = true, value_name = "N")]
    min_persistence: Option<i32>,

    #[arg(long, global = true, value_name = "N")]
    null_replicates: Option<usize>,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_name = "N", env = "GAPMINER_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the corpus and write its canonical form and rejection report.
    Ingest,
    /// Build per-discipline concept networks.
    Network,
    /// Compute persistence diagrams of the networks' flag complexes.
    Persist,
    /// Classify papers and compare category shares with the null model.
    Classify,
    /// Compute per-paper metrics.
    Metrics,
    /// Write verb ratios and per-category summaries.
    Report,
    /// Run all enabled stages, skipping those whose inputs are unchanged.
    Run {
        /// Run only this stage (its dependencies must already be up to date).
        #[arg(long, value_name = "NAME")]
        stage: Option<Stage>,
    },
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// One of planted-cycle, planted-clique, random-pairs.
    generator: String,

    /// Cycle length, clique size, or number of papers.
    #[arg(long, default_value_t = SynthParams::default().size)]
    size: usize,

    #[arg(long, default_value_t = SynthParams::default().disciplines)]
    disciplines: usize,

    /// Filler papers after the planted structure.
    #[arg(long, default_value_t = SynthParams::default().fillers)]
    fillers: usize,

    /// Concept vocabulary size for random-pairs.
    #[arg(long, default_value_t = SynthParams::default().concepts)]
    concepts: usize,

    /// Corpus file to write.
    #[arg(long, short)]
    output: PathBuf,
}

fn config_from(args: &GlobalArgs) -> Result<PipelineConfig> {
    let mut config = match &args.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = &args.corpus {
        config.corpus_path = Some(p.clone());
    }
    if let Some(p) = &args.out {
        config.output_dir = p.clone();
    }
    if let Some(s) = args.seed {
        config.seed = s;
        config.seeds = Default::default();
    }
    if let Some(d) = args.max_dim {
        config.max_dim = d;
    }
    if let Some(m) = args.min_persistence {
        config.min_persistence = m;
    }
    if let Some(r) = args.null_replicates {
        config.null_replicates = r;
    }
    if let Some(t) = args.threads {
        config.threads = Some(t);
    }
    config.validate()?;
    Ok(config)
}

fn init_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run_pipeline(config: &PipelineConfig, only: Option<Stage>) -> Result<()> {
    let report = pipeline::run(config, only)?;
    for (stage, outcome) in &report.stages {
        let what = match outcome {
            Outcome::Ran => "ran",
            Outcome::Skipped => "up to date",
            Outcome::Disabled => "disabled",
        };
        eprintln!("{:<9} {what}", stage.label());
    }
    eprintln!("manifest: {}", config.output_dir.join(MANIFEST_FILE).display());
    Ok(())
}

fn synth(args: &SynthArgs, seed: u64) -> Result<()> {
    let params = SynthParams {
        size: args.size,
        disciplines: args.disciplines,
        fillers: args.fillers,
        concepts: args.concepts,
    };
    let generator = Generator::from_name(&args.generator, params)?;
    let n = synth::write_synthetic(&args.output, generator, seed)?;
    eprintln!("wrote {n} papers to {}", args.output.display());
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    let config = config_from(&cli.global)?;
    init_threads(config.threads)?;
    let stage = |s: Stage| run_pipeline(&config, Some(s));
    match &cli.command {
        Command::Ingest => stage(Stage::Ingest),
        Command::Network => stage(Stage::Network),
        Command::Persist => stage(Stage::Persist),
        Command::Classify => stage(Stage::Classify),
        Command::Metrics => stage(Stage::Metrics),
        Command::Report => stage(Stage::Report),
        Command::Run { stage } => run_pipeline(&config, *stage),
        Command::Synth(args) => synth(args, config.seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
