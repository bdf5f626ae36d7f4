//! Batch command-line front end: realisability checks, deterministic
//! construction, random generation with SNIS estimation, the MCMC
//! baseline, brute-force enumeration and benchmark sequences.
//!
//! Exit codes: 0 success, 1 domain-negative outcome (not realisable,
//! instance over the enumeration cap), 2 usage or parse failure, 3
//! internal invariant violation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypergen::estimate::{
    avg_clustering_coefficient, bootstrap_std_error, snis_estimate, WeightMode, WeightedSample,
};
use hypergen::generate::{derive_seed, generate, hypergraph_multiplicity};
use hypergen::io::{
    parse_sequence_file, pseudofractal_sequences, render_hypergraph_edgelist,
    render_report_json, render_samples_csv, render_sequence, RunMetadata, SampleRecord,
    SamplesReport,
};
use hypergen::mcmc::{mcmc_ess, select_lag, ChainState, DEFAULT_ACF_THRESHOLD};
use hypergen::seq::{check_realisability, IntSequence};
use hypergen::{Error, Hypergraph};

/// Resamples used for the bootstrap standard error carried in reports.
const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Sample-index stream reserved for deriving the bootstrap seed.
const BOOTSTRAP_SEED_STREAM: u64 = u64::MAX;

#[derive(Parser)]
#[command(
    name = "hypergen",
    about = "Construct, randomly generate and estimate properties of hypergraphs \
             with prescribed degree and dimension sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SequenceArgs {
    /// Degree sequence file (whitespace-separated non-negative integers)
    #[arg(long)]
    degrees: PathBuf,
    /// Dimension sequence file (same format)
    #[arg(long)]
    dimensions: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightModeArg {
    Paper,
    Exact,
}

impl From<WeightModeArg> for WeightMode {
    fn from(arg: WeightModeArg) -> Self {
        match arg {
            WeightModeArg::Paper => WeightMode::Paper,
            WeightModeArg::Exact => WeightMode::Exact,
        }
    }
}

/// Sampling lag: a positive integer or `auto` for the pilot-chain
/// autocorrelation procedure.
#[derive(Clone, Copy)]
enum LagArg {
    Auto,
    Fixed(usize),
}

impl FromStr for LagArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(LagArg::Auto);
        }
        match s.parse::<usize>() {
            Ok(l) if l >= 1 => Ok(LagArg::Fixed(l)),
            _ => Err(format!("expected 'auto' or a positive integer, got '{s}'")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Test whether the sequence pair is realisable by a hypergraph
    Check(SequenceArgs),
    /// Write the deterministic greedy realisation as an edge list
    Construct {
        #[command(flatten)]
        sequences: SequenceArgs,
        /// Output path (stdout when omitted)
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Generate random hypergraphs and report the SNIS property estimate
    Generate {
        #[command(flatten)]
        sequences: SequenceArgs,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = WeightModeArg::Exact)]
        weight_mode: WeightModeArg,
        /// Property to evaluate on each sample
        #[arg(long, default_value = "cc")]
        property: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample hypergraphs from the pairwise-shuffle Markov chain
    Mcmc {
        #[command(flatten)]
        sequences: SequenceArgs,
        #[arg(long)]
        samples: usize,
        /// Sampling lag, or `auto` to pick it from a pilot chain's
        /// autocorrelation
        #[arg(long, default_value = "auto")]
        lag: LagArg,
        /// Steps discarded before sampling (default 10 x lag)
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pilot chain length for auto lag selection
        #[arg(long, default_value_t = 10_000)]
        pilot_steps: usize,
        #[arg(long, default_value = "cc")]
        property: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute a SNIS estimate from a samples report
    Estimate {
        /// Samples report (JSON) produced by `generate` or `mcmc`
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, default_value = "cc")]
        property: String,
        #[arg(long, value_enum, default_value_t = WeightModeArg::Exact)]
        weight_mode: WeightModeArg,
        /// Write the full estimate report (with normalised weights) here
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List every realisation of a small instance with exact statistics
    Enumerate {
        #[command(flatten)]
        sequences: SequenceArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Emit the degree/dimension sequences of the pseudo-fractal family
    Pseudofractal {
        /// Generation index (1..=8)
        #[arg(long)]
        t: u32,
        /// Files are written as <prefix>.degrees.txt / <prefix>.dimensions.txt
        #[arg(long, default_value = "pseudofractal")]
        output_prefix: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotRealisable(_) | Error::CapExceeded { .. } | Error::ZeroVariance => 1,
        Error::Parse { .. }
        | Error::EmptyInput
        | Error::InvalidArgument(_)
        | Error::Io { .. }
        | Error::Json { .. } => 2,
        Error::InternalInvariant(_) => 3,
    }
}

fn run(command: Command) -> hypergen::Result<i32> {
    match command {
        Command::Check(seqs) => {
            let (a, b) = load_sequences(&seqs)?;
            match check_realisability(&a, &b) {
                Ok(()) => {
                    println!("realisable");
                    Ok(0)
                }
                Err(violation) => {
                    println!("not realisable: {violation}");
                    Ok(1)
                }
            }
        }
        Command::Construct { sequences, output } => {
            let (a, b) = load_sequences(&sequences)?;
            let h = hypergen::construct::construct_initial(&a, &b)?;
            write_output(&render_hypergraph_edgelist(&h, None), output.as_deref())?;
            Ok(0)
        }
        Command::Generate {
            sequences,
            samples,
            seed,
            weight_mode,
            property,
            output,
            format,
        } => {
            check_property(&property)?;
            let (a, b) = load_sequences(&sequences)?;
            let mode = WeightMode::from(weight_mode);
            let report = run_generate(&a, &b, samples, seed, mode)?;
            write_report(&report, output.as_deref(), format)?;
            Ok(0)
        }
        Command::Mcmc {
            sequences,
            samples,
            lag,
            burn_in,
            seed,
            pilot_steps,
            property,
            output,
            format,
        } => {
            check_property(&property)?;
            let (a, b) = load_sequences(&sequences)?;
            let report = run_mcmc(&a, &b, samples, lag, burn_in, seed, pilot_steps)?;
            write_report(&report, output.as_deref(), format)?;
            Ok(0)
        }
        Command::Estimate { input, property, weight_mode, output } => {
            check_property(&property)?;
            let report = hypergen::io::read_samples_report(&input)?;
            let samples: Vec<WeightedSample> = report
                .samples
                .iter()
                .map(|r| WeightedSample {
                    log_prob: r.log_prob,
                    log_multiplicity: r.log_multiplicity,
                    property_value: r.property_value,
                })
                .collect();
            let mode = WeightMode::from(weight_mode);
            let est = snis_estimate(&samples, mode)?;
            // fixed stream: re-estimation has no seed flag and must be
            // reproducible
            let se = bootstrap_std_error(&samples, mode, BOOTSTRAP_RESAMPLES, 0)?;
            println!(
                "estimate={} ess={} bootstrap_se={} n_samples={} weight_mode={}",
                est.estimate, est.ess, se, est.n_samples, est.weight_mode
            );
            if let Some(path) = output {
                let doc = json!({
                    "estimate": est.estimate,
                    "ess": est.ess,
                    "bootstrap_se": se,
                    "n_samples": est.n_samples,
                    "weight_mode": est.weight_mode.to_string(),
                    "normalised_weights": est.normalised_weights,
                });
                let mut text = serde_json::to_string_pretty(&doc).map_err(|source| {
                    Error::Json { context: "serialising estimate report".to_string(), source }
                })?;
                text.push('\n');
                write_output(&text, Some(&path))?;
            }
            Ok(0)
        }
        Command::Enumerate { sequences, output } => {
            let (a, b) = load_sequences(&sequences)?;
            let listing = run_enumerate(&a, &b)?;
            write_output(&listing, output.as_deref())?;
            Ok(0)
        }
        Command::Pseudofractal { t, output_prefix } => {
            let (degrees, dimensions) = pseudofractal_sequences(t)?;
            let deg_path = PathBuf::from(format!("{output_prefix}.degrees.txt"));
            let dim_path = PathBuf::from(format!("{output_prefix}.dimensions.txt"));
            write_file(&render_sequence(&degrees), &deg_path)?;
            write_file(&render_sequence(&dimensions), &dim_path)?;
            println!(
                "t={t}: {} degrees -> {}, {} dimensions -> {}",
                degrees.len(),
                deg_path.display(),
                dimensions.len(),
                dim_path.display()
            );
            Ok(0)
        }
    }
}

fn check_property(property: &str) -> hypergen::Result<()> {
    if property != "cc" {
        return Err(Error::InvalidArgument(format!(
            "unknown property '{property}' (only 'cc' is available)"
        )));
    }
    Ok(())
}

fn load_sequences(args: &SequenceArgs) -> hypergen::Result<(IntSequence, IntSequence)> {
    Ok((load_sequence(&args.degrees)?, load_sequence(&args.dimensions)?))
}

fn load_sequence(path: &Path) -> hypergen::Result<IntSequence> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading sequence file {}", path.display()),
        source,
    })?;
    parse_sequence_file(&text).map_err(|err| match err {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

fn write_output(text: &str, output: Option<&Path>) -> hypergen::Result<()> {
    match output {
        Some(path) => write_file(text, path),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(text: &str, path: &Path) -> hypergen::Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

fn write_report(
    report: &SamplesReport,
    output: Option<&Path>,
    format: Format,
) -> hypergen::Result<()> {
    let text = match format {
        Format::Json => render_report_json(report)?,
        Format::Csv => render_samples_csv(report),
    };
    write_output(&text, output)
}

/// Fans sample generation out across worker threads, one derived seed
/// per sample index, so reports are byte-identical for any worker
/// count. `HYPERGEN_THREADS` caps the pool.
fn run_generate(
    a: &IntSequence,
    b: &IntSequence,
    n_samples: usize,
    seed: u64,
    mode: WeightMode,
) -> hypergen::Result<SamplesReport> {
    use rayon::prelude::*;

    let worker = |i: usize| -> hypergen::Result<WeightedSample> {
        let trace = generate(a, b, derive_seed(seed, i as u64))?;
        WeightedSample::from_trace(&trace, a.len(), avg_clustering_coefficient)
    };

    let results: Vec<hypergen::Result<WeightedSample>> = match thread_cap() {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("building thread pool: {e}")))?;
            pool.install(|| (0..n_samples).into_par_iter().map(worker).collect())
        }
        None => (0..n_samples).into_par_iter().map(worker).collect(),
    };
    let samples = results.into_iter().collect::<hypergen::Result<Vec<_>>>()?;

    let (estimate, ess, bootstrap_se) = if samples.is_empty() {
        (None, None, None)
    } else {
        let est = snis_estimate(&samples, mode)?;
        let se = bootstrap_std_error(
            &samples,
            mode,
            BOOTSTRAP_RESAMPLES,
            derive_seed(seed, BOOTSTRAP_SEED_STREAM),
        )?;
        (Some(est.estimate), Some(est.ess), Some(se))
    };
    Ok(SamplesReport {
        metadata: RunMetadata { seed, mode: mode.to_string(), lag: None },
        n_samples: samples.len(),
        estimate,
        ess,
        bootstrap_se,
        samples: records(&samples),
    })
}

fn records(samples: &[WeightedSample]) -> Vec<SampleRecord> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| SampleRecord {
            sample_index: i,
            log_prob: s.log_prob,
            log_multiplicity: s.log_multiplicity,
            property_value: s.property_value,
        })
        .collect()
}

fn thread_cap() -> Option<usize> {
    std::env::var("HYPERGEN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
}

fn run_mcmc(
    a: &IntSequence,
    b: &IntSequence,
    n_samples: usize,
    lag: LagArg,
    burn_in: Option<usize>,
    seed: u64,
    pilot_steps: usize,
) -> hypergen::Result<SamplesReport> {
    let initial = hypergen::construct::construct_initial(a, b)?;

    let lag = match lag {
        LagArg::Fixed(l) => l,
        LagArg::Auto => auto_lag(&initial, pilot_steps, derive_seed(seed, 1))?,
    };
    let burn_in = burn_in.unwrap_or(10 * lag);

    let chain = hypergen::mcmc::run_chain(&initial, n_samples, lag, burn_in, derive_seed(seed, 2))?;
    let cc_series: Vec<f64> = chain.iter().map(avg_clustering_coefficient).collect();
    let samples: Vec<WeightedSample> = chain
        .iter()
        .zip(&cc_series)
        .map(|(h, &cc)| WeightedSample {
            // chain samples carry no generation probability; zero log
            // weights make SNIS reduce to the plain mean
            log_prob: 0.0,
            log_multiplicity: hypergraph_multiplicity(h),
            property_value: cc,
        })
        .collect();

    let estimate = if cc_series.is_empty() {
        None
    } else {
        Some(cc_series.iter().sum::<f64>() / cc_series.len() as f64)
    };
    let ess = match mcmc_ess(&cc_series) {
        Ok(e) => Some(e),
        Err(Error::ZeroVariance) => {
            eprintln!("warning: sample property series has zero variance; ESS omitted");
            None
        }
        Err(Error::InvalidArgument(_)) => None,
        Err(other) => return Err(other),
    };
    let bootstrap_se = if samples.is_empty() {
        None
    } else {
        // zero log-weights: this bootstraps the plain mean
        Some(bootstrap_std_error(
            &samples,
            WeightMode::Paper,
            BOOTSTRAP_RESAMPLES,
            derive_seed(seed, BOOTSTRAP_SEED_STREAM),
        )?)
    };

    Ok(SamplesReport {
        metadata: RunMetadata { seed, mode: "mcmc".to_string(), lag: Some(lag) },
        n_samples: samples.len(),
        estimate,
        ess,
        bootstrap_se,
        samples: records(&samples),
    })
}

/// Pilot-chain lag selection: run the chain, track the property series
/// and pick the first lag whose autocorrelation drops below the
/// threshold.
fn auto_lag(initial: &Hypergraph, pilot_steps: usize, seed: u64) -> hypergen::Result<usize> {
    if initial.n_edges() < 2 {
        // frozen chain: any lag works
        return Ok(1);
    }
    if pilot_steps < 2 {
        return Err(Error::InvalidArgument(
            "auto lag selection needs at least 2 pilot steps".to_string(),
        ));
    }
    let mut state = ChainState::new(initial.clone(), seed);
    let mut series = Vec::with_capacity(pilot_steps);
    for _ in 0..pilot_steps {
        state.pairwise_shuffle_step()?;
        series.push(avg_clustering_coefficient(state.current()));
    }
    match select_lag(&series, DEFAULT_ACF_THRESHOLD) {
        Ok(sel) => {
            if sel.saturated {
                eprintln!(
                    "warning: autocorrelation stayed above {DEFAULT_ACF_THRESHOLD} \
                     for all {pilot_steps} pilot lags; using lag {}",
                    sel.lag
                );
            }
            Ok(sel.lag)
        }
        Err(Error::ZeroVariance) => {
            // the property is constant along the pilot chain; thinning
            // cannot help, sample every step
            Ok(1)
        }
        Err(other) => Err(other),
    }
}

fn run_enumerate(a: &IntSequence, b: &IntSequence) -> hypergen::Result<String> {
    let realisations = hypergen::oracle::enumerate_hypergraphs(a, b)?;
    let mut out = String::new();
    out.push_str(&format!(
        "degrees={a} dimensions={b}: {} realisation(s)\n",
        realisations.len()
    ));
    for (h, orderings) in &realisations {
        let edges: Vec<String> = h
            .canonical_edges()
            .iter()
            .map(|e| {
                e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            })
            .collect();
        out.push_str(&format!(
            "{{ {} }} orderings={orderings} cc={}\n",
            edges.join(" | "),
            avg_clustering_coefficient(h)
        ));
    }
    if !realisations.is_empty() {
        let mean = hypergen::oracle::exact_population_mean(a, b, avg_clustering_coefficient)?;
        out.push_str(&format!("population cc mean={mean}\n"));
    }
    Ok(out)
}
