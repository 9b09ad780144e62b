use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use vibelsd_core::colour_code::{build_colour_code, Tiling};
use vibelsd_core::dem::{code_capacity_dem, emit_dem};
use vibelsd_core::experiment::{
    load_dem, per_round_rate, run_experiment_on, write_cluster_stats, write_csv, DecoderSpec,
    ExperimentOutput, ExperimentSpec, ProblemSource,
};
use vibelsd_core::{BitVector, DecodePath, EnsembleConfig, Error, SparseBinaryMatrix};

#[derive(Parser, Debug)]
#[command(
    name = "vibelsd",
    version,
    about = "Ensemble BP+LSD decoding for colour codes and detector error models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a colour-code check matrix as a DEM or as sparse triplets.
    GenCode(GenCodeArgs),
    /// Decode a file of syndromes against a DEM.
    Decode(DecodeArgs),
    /// Run a Monte-Carlo memory experiment.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Dem,
    Triplet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecoderKind {
    Vibelsd,
    Bplsd,
    Bp,
}

#[derive(Args, Debug)]
struct GenCodeArgs {
    #[arg(long)]
    tiling: Tiling,
    #[arg(long)]
    distance: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Dem)]
    format: OutputFormat,
    /// Bit-flip probability written into the DEM.
    #[arg(long, default_value_t = 0.01)]
    p: f64,
}

#[derive(Args, Debug)]
struct DecoderArgs {
    #[arg(long, value_enum, default_value_t = DecoderKind::Vibelsd)]
    decoder: DecoderKind,
    /// Ensemble size L.
    #[arg(long)]
    ensemble: Option<usize>,
    /// Number of converged members to wait for, M.
    #[arg(long)]
    limit: Option<usize>,
    /// BP iteration cap T.
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    dem: PathBuf,
    #[arg(long)]
    syndromes: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, required_unless_present = "code", conflicts_with = "code")]
    dem: Option<PathBuf>,
    /// Generated code-capacity problem, e.g. `hex666:5:0.05`.
    #[arg(long, value_parser = parse_code_source)]
    code: Option<ProblemSource>,
    #[arg(long)]
    shots: u64,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    cluster_stats: Option<PathBuf>,
    /// Rounds in the DEM; adds a per-round error rate to the summary.
    #[arg(long)]
    rounds: Option<usize>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall-clock time in the CSV.
    #[arg(long)]
    timing: bool,
}

fn parse_code_source(s: &str) -> Result<ProblemSource, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [tiling, d, p] = parts[..] else {
        return Err(format!("expected TILING:D:P, got `{s}`"));
    };
    let tiling: Tiling = tiling.parse().map_err(|e: Error| e.to_string())?;
    let distance = d
        .parse()
        .map_err(|_| format!("distance `{d}` is not a positive integer"))?;
    let p: f64 = p
        .parse()
        .map_err(|_| format!("probability `{p}` is not a number"))?;
    Ok(ProblemSource::Code {
        tiling,
        distance,
        p,
    })
}

/// Anything that ends a run early, tagged with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Core(Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Core(e) => match e {
                Error::DimensionMismatch(_) | Error::InvalidValue(_) => 1,
                Error::Parse(_) | Error::DemFile { .. } | Error::Io { .. } | Error::Csv { .. } => 2,
                Error::Unsolvable | Error::Shot { .. } => 3,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Parse(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::GenCode(args) => gen_code(&args),
        Command::Decode(args) => decode(&args),
        Command::Bench(args) => bench(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|source| {
        Failure::Core(Error::Io {
            path: path.to_owned(),
            source,
        })
    })
}

fn gen_code(args: &GenCodeArgs) -> Result<(), Failure> {
    let lattice = build_colour_code(args.tiling, args.distance)?;
    let text = match args.format {
        OutputFormat::Dem => emit_dem(&code_capacity_dem(
            &lattice.check_matrix,
            &lattice.logical,
            args.p,
        )?),
        OutputFormat::Triplet => triplets(&lattice.check_matrix),
    };
    write_file(&args.out, &text)
}

fn triplets(h: &SparseBinaryMatrix) -> String {
    let mut out = format!("{} {}\n", h.rows(), h.cols());
    for r in 0..h.rows() {
        for &c in h.row(r) {
            out.push_str(&format!("{r} {c}\n"));
        }
    }
    out
}

/// `distance` picks the ensemble defaults; DEM files use the small-code ones.
fn decoder_spec(args: &DecoderArgs, distance: usize, seed: u64) -> Result<DecoderSpec, Failure> {
    let mut config = EnsembleConfig::for_distance(distance, seed);
    if let Some(l) = args.ensemble {
        config.ensemble_size = l;
    }
    if let Some(m) = args.limit {
        config.correction_limit = m;
    }
    if let Some(t) = args.iters {
        config.max_iterations = t;
    }
    if config.max_iterations == 0 {
        return Err(Failure::Usage("--iters must be at least 1".into()));
    }
    let max_iterations = config.max_iterations;
    Ok(match args.decoder {
        DecoderKind::Vibelsd => DecoderSpec::VibeLsd(config),
        DecoderKind::Bplsd => DecoderSpec::BpLsd { max_iterations },
        DecoderKind::Bp => DecoderSpec::BpOnly { max_iterations },
    })
}

fn parse_syndromes(text: &str, detectors: usize, path: &Path) -> Result<Vec<BitVector>, Failure> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let err = |msg: String| Failure::Parse(format!("{}:{}: {msg}", path.display(), i + 1));
            let mut indices = Vec::new();
            for token in line.split_whitespace() {
                let d: usize = token
                    .parse()
                    .map_err(|_| err(format!("`{token}` is not a detector index")))?;
                if d >= detectors {
                    return Err(err(format!(
                        "detector {d} out of range for a model with {detectors} detectors"
                    )));
                }
                indices.push(d);
            }
            indices.sort_unstable();
            if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
                return Err(err(format!("detector {} listed twice", w[0])));
            }
            Ok(BitVector::from_support(detectors, indices)?)
        })
        .collect()
}

fn decode(args: &DecodeArgs) -> Result<(), Failure> {
    let dem = load_dem(&args.dem)?;
    let text = fs::read_to_string(&args.syndromes).map_err(|source| Error::Io {
        path: args.syndromes.clone(),
        source,
    })?;
    let syndromes = parse_syndromes(&text, dem.num_detectors(), &args.syndromes)?;
    let decoder = decoder_spec(&args.decoder, 0, args.seed)?.build(&dem)?;
    let mut out = String::new();
    for (shot, s) in syndromes.iter().enumerate() {
        let outcome = decoder.decode(s).map_err(|e| Error::Shot {
            shot: shot as u64,
            source: Box::new(e),
        })?;
        let line: Vec<String> = outcome.correction.iter().map(|j| j.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    write_file(&args.out, &out)
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    if args.shots == 0 {
        return Err(Failure::Usage("--shots must be at least 1".into()));
    }
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let source = match (&args.dem, &args.code) {
        (Some(path), None) => ProblemSource::DemFile(path.clone()),
        (None, Some(code)) => code.clone(),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let distance = match source {
        ProblemSource::Code { distance, .. } => distance,
        ProblemSource::DemFile(_) => 0,
    };
    let spec = ExperimentSpec {
        decoder: decoder_spec(&args.decoder, distance, args.seed)?,
        source,
        shots: args.shots,
        root_seed: args.seed,
        threads: args.threads,
        record_timing: args.timing,
    };
    let dem = spec.source.load()?;
    let output = run_experiment_on(&spec, &dem)?;
    if let Some(path) = &args.csv {
        write_csv(std::slice::from_ref(&output.result), path)?;
    }
    if let Some(path) = &args.cluster_stats {
        write_cluster_stats(&output.shot_records, path)?;
    }
    let summary = summarize(&output, args.rounds)?;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(summary.as_bytes());
    Ok(())
}

/// Shot totals, LSD-call counts and cluster sizes in the layout of the
/// per-shot cluster-size scatter plots.
fn summarize(output: &ExperimentOutput, rounds: Option<usize>) -> Result<String, Failure> {
    let r = &output.result;
    let lsd: Vec<usize> = output
        .shot_records
        .iter()
        .filter(|s| s.path == DecodePath::Lsd)
        .map(|s| s.largest_cluster)
        .collect();
    let per_call = if lsd.is_empty() {
        0.0
    } else {
        lsd.iter().sum::<usize>() as f64 / lsd.len() as f64
    };
    let mut out = String::new();
    out.push_str(&format!(
        "source {}  decoder {} (L={}, M={}, T={})  seed {}\n",
        r.source, r.decoder, r.ensemble_size, r.limit_m, r.iters, r.seed
    ));
    out.push_str(&format!(
        "shots {}  failures {}  ler {:.6e}  95% CI [{:.6e}, {:.6e}]\n",
        r.shots, r.failures, r.logical_error_rate, r.ci_low, r.ci_high
    ));
    out.push_str(&format!(
        "lsd calls {} / {} ({:.2}%)\n",
        r.lsd_calls,
        r.shots,
        100.0 * r.lsd_calls as f64 / r.shots as f64
    ));
    out.push_str(&format!(
        "largest cluster max {}  mean per shot {:.4}  mean per lsd call {:.4}\n",
        r.max_cluster, r.mean_largest_cluster, per_call
    ));
    if let Some(rounds) = rounds {
        let low = per_round_rate(r.ci_low.min(0.5), rounds)?;
        let high = per_round_rate(r.ci_high.min(0.5), rounds)?;
        let point = per_round_rate(r.logical_error_rate.min(0.5), rounds)?;
        out.push_str(&format!(
            "per-round ler ({rounds} rounds) {point:.6e}  95% CI [{low:.6e}, {high:.6e}]\n"
        ));
    }
    if r.wall_seconds > 0.0 {
        out.push_str(&format!("wall {:.3} s\n", r.wall_seconds));
    }
    Ok(out)
}
