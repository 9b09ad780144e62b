//! Ensembles of serial BP decoders with differently permuted schedules.
//!
//! All members decode the same syndrome. Once `M` of them converge the rest
//! stop, and the candidate with the smallest channel weight wins. If none
//! converges, the members' final posteriors are normalised and averaged, and
//! LSD decodes with that average as its reliability order.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::bp::{BpConfig, BpDecoder, CancelToken, Permutation, TannerGraph};
use crate::decoder::{solution_weight, DecodeOutcome, DecodePath, Decoder};
use crate::dem::DetectorErrorModel;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};
use crate::lsd::lsd0_decode;
use crate::rng::permutation_rng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecutionMode {
    /// Members advance one iteration at a time, in index order. Results are
    /// reproducible.
    #[default]
    Sequential,
    /// Members run on the rayon pool and stop cooperatively.
    Parallel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub ensemble_size: usize,
    pub correction_limit: usize,
    pub max_iterations: usize,
    pub min_sum_scale: f64,
    pub root_seed: u64,
    pub include_identity_permutation: bool,
    pub mode: ExecutionMode,
}

impl EnsembleConfig {
    /// L=32, M=5, T=20 up to distance 11; L=64, M=7, T=25 beyond.
    pub fn for_distance(distance: usize, root_seed: u64) -> Self {
        let (l, m, t) = if distance <= 11 {
            (32, 5, 20)
        } else {
            (64, 7, 25)
        };
        EnsembleConfig {
            ensemble_size: l,
            correction_limit: m,
            max_iterations: t,
            min_sum_scale: 1.0,
            root_seed,
            include_identity_permutation: true,
            mode: ExecutionMode::Sequential,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::value("ensemble size must be at least 1"));
        }
        if self.correction_limit == 0 || self.correction_limit > self.ensemble_size {
            return Err(Error::value(format!(
                "correction limit {} must lie in 1..={}",
                self.correction_limit, self.ensemble_size
            )));
        }
        Ok(())
    }
}

/// Draws `count` schedules over `n` variables. Member `i` shuffles with
/// permutation stream `i`; a shuffle equal to an earlier member is redrawn
/// from the same stream unless `n!` is too small for distinct members.
pub fn draw_permutations(
    n: usize,
    count: usize,
    root_seed: u64,
    include_identity: bool,
) -> Vec<Permutation> {
    let distinct_possible = (1..=n)
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .map(|f| f >= count)
        .unwrap_or(true);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let order = if i == 0 && include_identity {
            (0..n).collect()
        } else {
            let mut rng = permutation_rng(root_seed, i as u64);
            loop {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                if !distinct_possible || !seen.contains(&order) {
                    break order;
                }
            }
        };
        seen.insert(order.clone());
        out.push(Permutation::new(order).expect("shuffled range"));
    }
    out
}

/// `(1/L) Σ_i v_i / ‖v_i‖₂`; zero vectors contribute nothing.
pub fn average_llrs<V: AsRef<[f64]>>(vectors: &[V]) -> Vec<f64> {
    assert!(!vectors.is_empty(), "need at least one vector");
    let n = vectors[0].as_ref().len();
    let mut sum = vec![0.0; n];
    for v in vectors {
        let v = v.as_ref();
        assert_eq!(v.len(), n, "vectors differ in length");
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x / norm;
            }
        }
    }
    let l = vectors.len() as f64;
    sum.iter().map(|s| s / l).collect()
}

/// Index of the candidate with the smallest channel weight; the earliest
/// wins ties.
pub fn rank_candidates(candidates: &[BitVector], channel_llrs: &[f64]) -> usize {
    assert!(!candidates.is_empty(), "no candidates to rank");
    let mut best = 0;
    let mut best_weight = solution_weight(&candidates[0], channel_llrs);
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let w = solution_weight(c, channel_llrs);
        if w < best_weight {
            best = i;
            best_weight = w;
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct EnsembleDecoder {
    h: Arc<SparseBinaryMatrix>,
    channel_llrs: Arc<[f64]>,
    members: Vec<BpDecoder>,
    config: EnsembleConfig,
}

/// Final state of one member.
struct MemberResult {
    converged: bool,
    estimate: BitVector,
    posteriors: Vec<f64>,
}

impl EnsembleDecoder {
    pub fn setup_offline(dem: &DetectorErrorModel, config: EnsembleConfig) -> Result<Self> {
        config.validate()?;
        let h = Arc::new(dem.check_matrix().clone());
        let graph = Arc::new(TannerGraph::new(&h));
        let channel_llrs: Arc<[f64]> = dem.llr_priors().into();
        let members = draw_permutations(
            dem.num_mechanisms(),
            config.ensemble_size,
            config.root_seed,
            config.include_identity_permutation,
        )
        .into_iter()
        .map(|p| {
            let mut bp = BpConfig::serial(config.max_iterations, p);
            bp.min_sum_scale = config.min_sum_scale;
            BpDecoder::with_graph(graph.clone(), channel_llrs.clone(), bp)
        })
        .collect::<Result<Vec<_>>>()?;
        Ok(EnsembleDecoder {
            h,
            channel_llrs,
            members,
            config,
        })
    }

    pub fn config(&self) -> &EnsembleConfig {
        &self.config
    }

    pub fn permutations(&self) -> impl Iterator<Item = &Permutation> {
        self.members.iter().map(|m| match &m.config().schedule {
            crate::bp::Schedule::Serial(p) => p,
            crate::bp::Schedule::Parallel => unreachable!("members are serial"),
        })
    }

    fn run_sequential(&self, syndrome: &BitVector) -> Result<Vec<MemberResult>> {
        let mut runs = self
            .members
            .iter()
            .map(|m| m.start(syndrome))
            .collect::<Result<Vec<_>>>()?;
        let mut converged = 0;
        'rounds: for _ in 0..self.config.max_iterations {
            for run in runs.iter_mut().filter(|r| !r.is_finished()) {
                if run.step() {
                    converged += 1;
                    if converged == self.config.correction_limit {
                        break 'rounds;
                    }
                }
            }
        }
        Ok(runs
            .into_iter()
            .map(|run| {
                let converged = run.is_converged();
                let r = run.finish();
                MemberResult {
                    converged,
                    estimate: r.estimate,
                    posteriors: r.posteriors,
                }
            })
            .collect())
    }

    fn run_parallel(&self, syndrome: &BitVector) -> Result<Vec<MemberResult>> {
        let cancel = CancelToken::new();
        let converged = AtomicUsize::new(0);
        self.members
            .par_iter()
            .map(|m| {
                let r = m.decode(syndrome, Some(&cancel))?;
                if r.converged
                    && converged.fetch_add(1, Ordering::SeqCst) + 1 >= self.config.correction_limit
                {
                    cancel.cancel();
                }
                Ok(MemberResult {
                    converged: r.converged,
                    estimate: r.estimate,
                    posteriors: r.posteriors,
                })
            })
            .collect()
    }
}

impl Decoder for EnsembleDecoder {
    fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome> {
        let results = match self.config.mode {
            ExecutionMode::Sequential => self.run_sequential(syndrome)?,
            ExecutionMode::Parallel => self.run_parallel(syndrome)?,
        };
        let candidates: Vec<BitVector> = results
            .iter()
            .filter(|r| r.converged)
            .map(|r| r.estimate.clone())
            .collect();
        if !candidates.is_empty() {
            let best = rank_candidates(&candidates, &self.channel_llrs);
            let correction = candidates[best].clone();
            return Ok(DecodeOutcome {
                solution_weight: solution_weight(&correction, &self.channel_llrs),
                correction,
                path: DecodePath::ConvergedBp,
                converged_count: candidates.len(),
                largest_cluster: 0,
            });
        }
        let posteriors: Vec<&[f64]> = results.iter().map(|r| r.posteriors.as_slice()).collect();
        let soft = average_llrs(&posteriors);
        let (correction, stats) = lsd0_decode(&self.h, syndrome, &soft)?;
        Ok(DecodeOutcome {
            solution_weight: solution_weight(&correction, &self.channel_llrs),
            correction,
            path: DecodePath::Lsd,
            converged_count: 0,
            largest_cluster: stats.largest_cluster,
        })
    }
}
