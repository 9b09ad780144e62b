//! Monte-Carlo memory experiments and their CSV records.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::bp::{BpConfig, Permutation};
use crate::colour_code::{build_colour_code, Tiling};
use crate::decoder::{BpLsdDecoder, BpOnlyDecoder, DecodePath, Decoder};
use crate::dem::{code_capacity_dem, parse_dem, DetectorErrorModel, SampledShot};
use crate::ensemble::{EnsembleConfig, EnsembleDecoder};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::rng::shot_rng;

pub const CSV_HEADER: [&str; 17] = [
    "source",
    "distance",
    "p",
    "decoder",
    "ensemble_size",
    "limit_m",
    "iters",
    "shots",
    "failures",
    "ler",
    "ci_low",
    "ci_high",
    "lsd_calls",
    "max_cluster",
    "mean_largest_cluster",
    "wall_seconds",
    "seed",
];

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    DemFile(PathBuf),
    /// Code-capacity bit-flip noise on a colour code.
    Code {
        tiling: Tiling,
        distance: usize,
        p: f64,
    },
}

impl ProblemSource {
    pub fn load(&self) -> Result<DetectorErrorModel> {
        match self {
            ProblemSource::DemFile(path) => load_dem(path),
            &ProblemSource::Code {
                tiling,
                distance,
                p,
            } => {
                let lattice = build_colour_code(tiling, distance)?;
                code_capacity_dem(&lattice.check_matrix, &lattice.logical, p)
            }
        }
    }

    fn label(&self) -> String {
        match self {
            ProblemSource::DemFile(path) => path.display().to_string(),
            ProblemSource::Code { tiling, .. } => tiling.to_string(),
        }
    }
}

pub fn load_dem(path: &Path) -> Result<DetectorErrorModel> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_dem(&text).map_err(|source| Error::DemFile {
        path: path.to_owned(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum DecoderSpec {
    VibeLsd(EnsembleConfig),
    /// One serial BP decoder in natural order, LSD on failure.
    BpLsd {
        max_iterations: usize,
    },
    /// One serial BP decoder in natural order, nothing else.
    BpOnly {
        max_iterations: usize,
    },
}

impl DecoderSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderSpec::VibeLsd(_) => "vibelsd",
            DecoderSpec::BpLsd { .. } => "bplsd",
            DecoderSpec::BpOnly { .. } => "bp",
        }
    }

    /// (L, M, T) as reported in result rows.
    fn shape(&self) -> (usize, usize, usize) {
        match self {
            DecoderSpec::VibeLsd(c) => (c.ensemble_size, c.correction_limit, c.max_iterations),
            DecoderSpec::BpLsd { max_iterations } | DecoderSpec::BpOnly { max_iterations } => {
                (1, 1, *max_iterations)
            }
        }
    }

    pub fn build(&self, dem: &DetectorErrorModel) -> Result<Box<dyn Decoder>> {
        let serial = |t: usize| BpConfig::serial(t, Permutation::identity(dem.num_mechanisms()));
        Ok(match self {
            DecoderSpec::VibeLsd(config) => {
                Box::new(EnsembleDecoder::setup_offline(dem, config.clone())?)
            }
            DecoderSpec::BpLsd { max_iterations } => {
                Box::new(BpLsdDecoder::new(dem, serial(*max_iterations))?)
            }
            DecoderSpec::BpOnly { max_iterations } => {
                Box::new(BpOnlyDecoder::new(dem, serial(*max_iterations))?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub source: ProblemSource,
    pub decoder: DecoderSpec,
    pub shots: u64,
    pub root_seed: u64,
    /// Worker threads; `None` uses the global rayon pool. Results do not
    /// depend on this.
    pub threads: Option<usize>,
    /// Measure wall-clock time. Off by default so that result rows are
    /// reproducible byte for byte.
    pub record_timing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub source: String,
    pub distance: Option<usize>,
    pub p: Option<f64>,
    pub decoder: String,
    pub ensemble_size: usize,
    pub limit_m: usize,
    pub iters: usize,
    pub shots: u64,
    pub failures: u64,
    pub logical_error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub lsd_calls: u64,
    pub max_cluster: usize,
    /// Mean per-shot κ, counting shots that never reached LSD as zero.
    pub mean_largest_cluster: f64,
    pub wall_seconds: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub shot_index: u64,
    pub path: DecodePath,
    pub largest_cluster: usize,
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub result: ExperimentResult,
    pub shot_records: Vec<ShotRecord>,
}

/// A shot fails when the correction and the error differ on any
/// observable.
pub fn is_failure(dem: &DetectorErrorModel, shot: &SampledShot, correction: &BitVector) -> bool {
    dem.observable_matrix()
        .matvec(correction)
        .expect("correction length")
        != shot.observable_flips
}

/// Samples and decodes one shot from its own stream.
pub fn run_shot(
    dem: &DetectorErrorModel,
    decoder: &dyn Decoder,
    root_seed: u64,
    shot_index: u64,
) -> Result<ShotRecord> {
    let shot = dem.sample(&mut shot_rng(root_seed, shot_index));
    let outcome = decoder.decode(&shot.syndrome).map_err(|e| Error::Shot {
        shot: shot_index,
        source: Box::new(e),
    })?;
    Ok(ShotRecord {
        shot_index,
        path: outcome.path,
        largest_cluster: outcome.largest_cluster,
        failed: is_failure(dem, &shot, &outcome.correction),
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    if spec.shots == 0 {
        return Err(Error::value("an experiment needs at least one shot"));
    }
    let dem = spec.source.load()?;
    run_experiment_on(spec, &dem)
}

/// Like [`run_experiment`] with an already loaded model.
pub fn run_experiment_on(
    spec: &ExperimentSpec,
    dem: &DetectorErrorModel,
) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let decoder = spec.decoder.build(dem)?;
    let work = || -> Result<Vec<ShotRecord>> {
        (0..spec.shots)
            .into_par_iter()
            .map(|k| run_shot(dem, decoder.as_ref(), spec.root_seed, k))
            .collect()
    };
    let shot_records = match spec.threads {
        None => work()?,
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::value(format!("cannot start {threads} worker threads: {e}")))?
            .install(work)?,
    };
    let wall_seconds = if spec.record_timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };

    let failures = shot_records.iter().filter(|r| r.failed).count() as u64;
    let lsd: Vec<usize> = shot_records
        .iter()
        .filter(|r| r.path == DecodePath::Lsd)
        .map(|r| r.largest_cluster)
        .collect();
    let (ci_low, ci_high) = binomial_ci(failures, spec.shots)?;
    let (distance, p) = match spec.source {
        ProblemSource::Code { distance, p, .. } => (Some(distance), Some(p)),
        ProblemSource::DemFile(_) => (None, None),
    };
    let (ensemble_size, limit_m, iters) = spec.decoder.shape();
    let result = ExperimentResult {
        source: spec.source.label(),
        distance,
        p,
        decoder: spec.decoder.name().to_string(),
        ensemble_size,
        limit_m,
        iters,
        shots: spec.shots,
        failures,
        logical_error_rate: failures as f64 / spec.shots as f64,
        ci_low,
        ci_high,
        lsd_calls: lsd.len() as u64,
        max_cluster: lsd.iter().copied().max().unwrap_or(0),
        mean_largest_cluster: lsd.iter().sum::<usize>() as f64 / spec.shots as f64,
        wall_seconds,
        seed: spec.root_seed,
    };
    Ok(ExperimentOutput {
        result,
        shot_records,
    })
}

/// Per-round rate of an `r`-round experiment whose per-shot failure
/// probability is `p_shot`: `(1 - (1 - 2 p_shot)^(1/r)) / 2`.
pub fn per_round_rate(p_shot: f64, rounds: usize) -> Result<f64> {
    if !(0.0..=0.5).contains(&p_shot) {
        return Err(Error::value(format!(
            "per-shot rate {p_shot} is outside [0, 0.5]"
        )));
    }
    if rounds == 0 {
        return Err(Error::value("rounds must be at least 1"));
    }
    Ok((1.0 - (1.0 - 2.0 * p_shot).powf(1.0 / rounds as f64)) / 2.0)
}

/// 95% Wilson score interval.
pub fn binomial_ci(failures: u64, shots: u64) -> Result<(f64, f64)> {
    if shots == 0 {
        return Err(Error::value("interval of an empty sample"));
    }
    if failures > shots {
        return Err(Error::value(format!(
            "{failures} failures out of {shots} shots"
        )));
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = shots as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if failures == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let high = if failures == shots {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((low.min(p), high.max(p)))
}

/// Shortest decimal form is not used on purpose: 17 significant digits in
/// scientific notation keep every row the same shape.
fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_owned(),
        source,
    }
}

pub fn write_csv(results: &[ExperimentResult], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error(path))?;
    w.write_record(CSV_HEADER).map_err(csv_error(path))?;
    for r in results {
        let opt = |v: Option<String>| v.unwrap_or_default();
        w.write_record([
            r.source.clone(),
            opt(r.distance.map(|d| d.to_string())),
            opt(r.p.map(format_float)),
            r.decoder.clone(),
            r.ensemble_size.to_string(),
            r.limit_m.to_string(),
            r.iters.to_string(),
            r.shots.to_string(),
            r.failures.to_string(),
            format_float(r.logical_error_rate),
            format_float(r.ci_low),
            format_float(r.ci_high),
            r.lsd_calls.to_string(),
            r.max_cluster.to_string(),
            format_float(r.mean_largest_cluster),
            format_float(r.wall_seconds),
            r.seed.to_string(),
        ])
        .map_err(csv_error(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentResult>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_error(path))?;
    let headers = reader.headers().map_err(csv_error(path))?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::value(format!(
            "{}: unexpected header",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error(path))?;
        let bad = |field: &str| {
            Error::value(format!(
                "{}: row {}: invalid `{field}`",
                path.display(),
                k + 2
            ))
        };
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        fn parse<T: std::str::FromStr>(s: &str) -> Option<T> {
            s.parse().ok()
        }
        let num = |i: usize| parse::<f64>(field(i)).ok_or_else(|| bad(CSV_HEADER[i]));
        let int = |i: usize| parse::<u64>(field(i)).ok_or_else(|| bad(CSV_HEADER[i]));
        let optional = |i: usize| -> Result<Option<f64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(ExperimentResult {
            source: field(0).to_string(),
            distance: optional(1)?.map(|d| d as usize),
            p: optional(2)?,
            decoder: field(3).to_string(),
            ensemble_size: int(4)? as usize,
            limit_m: int(5)? as usize,
            iters: int(6)? as usize,
            shots: int(7)?,
            failures: int(8)?,
            logical_error_rate: num(9)?,
            ci_low: num(10)?,
            ci_high: num(11)?,
            lsd_calls: int(12)?,
            max_cluster: int(13)? as usize,
            mean_largest_cluster: num(14)?,
            wall_seconds: num(15)?,
            seed: int(16)?,
        });
    }
    Ok(out)
}

impl fmt::Display for ShotRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.shot_index,
            self.path.name(),
            self.largest_cluster
        )
    }
}

/// One `shot_index,path,largest_cluster` line per shot, after a header.
pub fn write_cluster_stats(records: &[ShotRecord], path: &Path) -> Result<()> {
    let mut text = String::from("shot_index,path,largest_cluster\n");
    for r in records {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
