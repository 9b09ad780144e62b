//! Syndrome decoders behind one interface.

use std::sync::Arc;

use crate::bp::{BpConfig, BpDecoder, Permutation, TannerGraph};
use crate::dem::DetectorErrorModel;
use crate::error::Result;
use crate::gf2::{BitVector, SparseBinaryMatrix};
use crate::lsd::lsd0_decode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodePath {
    ConvergedBp,
    Lsd,
    /// BP-only decoding that ran out of iterations; the correction is the
    /// last hard decision and need not match the syndrome.
    BpUnconverged,
}

impl DecodePath {
    pub fn name(self) -> &'static str {
        match self {
            DecodePath::ConvergedBp => "bp",
            DecodePath::Lsd => "lsd",
            DecodePath::BpUnconverged => "bp_unconverged",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub correction: BitVector,
    pub path: DecodePath,
    /// BP runs that reproduced the syndrome.
    pub converged_count: usize,
    /// Sum of channel LLRs over the correction's support.
    pub solution_weight: f64,
    /// κ of the LSD call; zero on other paths.
    pub largest_cluster: usize,
}

pub trait Decoder: Send + Sync {
    fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome>;
}

pub fn solution_weight(correction: &BitVector, channel_llrs: &[f64]) -> f64 {
    correction.support().iter().map(|&j| channel_llrs[j]).sum()
}

/// Single BP decoder with LSD on non-convergence.
#[derive(Clone, Debug)]
pub struct BpLsdDecoder {
    h: Arc<SparseBinaryMatrix>,
    channel_llrs: Arc<[f64]>,
    bp: BpDecoder,
}

impl BpLsdDecoder {
    pub fn new(dem: &DetectorErrorModel, config: BpConfig) -> Result<Self> {
        let h = Arc::new(dem.check_matrix().clone());
        let channel_llrs: Arc<[f64]> = dem.llr_priors().into();
        let bp =
            BpDecoder::with_graph(Arc::new(TannerGraph::new(&h)), channel_llrs.clone(), config)?;
        Ok(BpLsdDecoder {
            h,
            channel_llrs,
            bp,
        })
    }

    /// Serial BP in natural variable order.
    pub fn serial(dem: &DetectorErrorModel, max_iterations: usize) -> Result<Self> {
        let n = dem.num_mechanisms();
        Self::new(
            dem,
            BpConfig::serial(max_iterations, Permutation::identity(n)),
        )
    }
}

impl Decoder for BpLsdDecoder {
    fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome> {
        let bp = self.bp.decode(syndrome, None)?;
        if bp.converged {
            return Ok(DecodeOutcome {
                solution_weight: solution_weight(&bp.estimate, &self.channel_llrs),
                correction: bp.estimate,
                path: DecodePath::ConvergedBp,
                converged_count: 1,
                largest_cluster: 0,
            });
        }
        let (correction, stats) = lsd0_decode(&self.h, syndrome, &bp.posteriors)?;
        Ok(DecodeOutcome {
            solution_weight: solution_weight(&correction, &self.channel_llrs),
            correction,
            path: DecodePath::Lsd,
            converged_count: 0,
            largest_cluster: stats.largest_cluster,
        })
    }
}

/// BP alone; unconverged shots return the final hard decision.
#[derive(Clone, Debug)]
pub struct BpOnlyDecoder {
    channel_llrs: Arc<[f64]>,
    bp: BpDecoder,
}

impl BpOnlyDecoder {
    pub fn new(dem: &DetectorErrorModel, config: BpConfig) -> Result<Self> {
        let channel_llrs: Arc<[f64]> = dem.llr_priors().into();
        let bp = BpDecoder::with_graph(
            Arc::new(TannerGraph::new(dem.check_matrix())),
            channel_llrs.clone(),
            config,
        )?;
        Ok(BpOnlyDecoder { channel_llrs, bp })
    }
}

impl Decoder for BpOnlyDecoder {
    fn decode(&self, syndrome: &BitVector) -> Result<DecodeOutcome> {
        let bp = self.bp.decode(syndrome, None)?;
        Ok(DecodeOutcome {
            solution_weight: solution_weight(&bp.estimate, &self.channel_llrs),
            correction: bp.estimate,
            path: if bp.converged {
                DecodePath::ConvergedBp
            } else {
                DecodePath::BpUnconverged
            },
            converged_count: usize::from(bp.converged),
            largest_cluster: 0,
        })
    }
}
