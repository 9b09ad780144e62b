//! Detector error models: the decoding problem as a check matrix, an
//! observable matrix and independent per-mechanism priors.

mod parse;

use rand::Rng;

pub use parse::{emit_dem, parse_dem, ParseError, ParseErrorKind};

use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};

/// Independent error mechanisms (columns) acting on detectors (rows of the
/// check matrix) and logical observables (rows of the observable matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorErrorModel {
    check_matrix: SparseBinaryMatrix,
    observables: SparseBinaryMatrix,
    priors: Vec<f64>,
}

/// One sampled error together with what it triggers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledShot {
    pub error: BitVector,
    pub syndrome: BitVector,
    pub observable_flips: BitVector,
}

impl DetectorErrorModel {
    pub fn new(
        check_matrix: SparseBinaryMatrix,
        observables: SparseBinaryMatrix,
        priors: Vec<f64>,
    ) -> Result<Self> {
        if check_matrix.cols() != priors.len() || observables.cols() != priors.len() {
            return Err(Error::dims(format!(
                "check matrix has {} columns, observable matrix {}, priors {}",
                check_matrix.cols(),
                observables.cols(),
                priors.len()
            )));
        }
        if let Some((j, p)) = priors
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 0.0 && p < 1.0))
        {
            return Err(Error::value(format!(
                "prior {p} of mechanism {j} is outside (0, 1)"
            )));
        }
        Ok(Self::from_parts(check_matrix, observables, priors))
    }

    pub(crate) fn from_parts(
        check_matrix: SparseBinaryMatrix,
        observables: SparseBinaryMatrix,
        priors: Vec<f64>,
    ) -> Self {
        DetectorErrorModel {
            check_matrix,
            observables,
            priors,
        }
    }

    pub fn num_detectors(&self) -> usize {
        self.check_matrix.rows()
    }

    pub fn num_mechanisms(&self) -> usize {
        self.check_matrix.cols()
    }

    pub fn num_observables(&self) -> usize {
        self.observables.rows()
    }

    /// Detectors × mechanisms.
    pub fn check_matrix(&self) -> &SparseBinaryMatrix {
        &self.check_matrix
    }

    /// Observables × mechanisms.
    pub fn observable_matrix(&self) -> &SparseBinaryMatrix {
        &self.observables
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Channel log-likelihood ratios `ln((1 - p) / p)`.
    pub fn llr_priors(&self) -> Vec<f64> {
        self.priors.iter().map(|&p| prior_llr(p)).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledShot {
        let error = sample_error(&self.priors, rng);
        self.shot_from_error(error)
    }

    /// Completes a shot from a known error.
    pub fn shot_from_error(&self, error: BitVector) -> SampledShot {
        let syndrome = self.check_matrix.matvec(&error).expect("error length");
        let observable_flips = self.observables.matvec(&error).expect("error length");
        SampledShot {
            error,
            syndrome,
            observable_flips,
        }
    }
}

pub fn prior_llr(p: f64) -> f64 {
    ((1.0 - p) / p).ln()
}

/// Channel LLRs of a model's priors.
pub fn llr_priors(dem: &DetectorErrorModel) -> Vec<f64> {
    dem.llr_priors()
}

/// Draws each index independently with its probability. Probabilities of
/// exactly 0 and 1 are honoured.
pub fn sample_error<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> BitVector {
    let support = probabilities
        .iter()
        .enumerate()
        .filter_map(|(j, &p)| (rng.gen::<f64>() < p).then_some(j))
        .collect();
    BitVector::from_sorted_unchecked(probabilities.len(), support)
}

/// i.i.d. bit-flip noise on data qubits: one mechanism per column of `h`
/// with prior `p`, and a single observable given by `logical`.
pub fn code_capacity_dem(
    h: &SparseBinaryMatrix,
    logical: &BitVector,
    p: f64,
) -> Result<DetectorErrorModel> {
    if logical.len() != h.cols() {
        return Err(Error::dims(format!(
            "logical of length {} for {} qubits",
            logical.len(),
            h.cols()
        )));
    }
    let observables =
        SparseBinaryMatrix::from_sorted_rows(1, h.cols(), vec![logical.support().to_vec()]);
    DetectorErrorModel::new(h.clone(), observables, vec![p; h.cols()])
}
