//! Brute-force reference implementations used to check the sparse code.
#![allow(dead_code)]

use rand::Rng;
use vibelsd_core::{BitVector, DetectorErrorModel, SparseBinaryMatrix};

/// Dense GF(2) matrix with at most 64 columns, one bitmask per row.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    pub rows: Vec<u64>,
    pub cols: usize,
}

impl DenseMatrix {
    pub fn random<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> Self {
        assert!(cols <= 64);
        let rows = (0..rows)
            .map(|_| {
                (0..cols).fold(0u64, |acc, c| {
                    if rng.gen_bool(density) {
                        acc | 1 << c
                    } else {
                        acc
                    }
                })
            })
            .collect();
        DenseMatrix { rows, cols }
    }

    pub fn to_sparse(&self) -> SparseBinaryMatrix {
        let adj = self
            .rows
            .iter()
            .map(|&r| (0..self.cols).filter(|&c| r >> c & 1 == 1).collect())
            .collect();
        SparseBinaryMatrix::from_rows(self.rows.len(), self.cols, adj).unwrap()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> c & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> c & 1 == 1 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Whether `A x = s` has a solution: appending `s` as an extra column
    /// must not raise the rank.
    pub fn is_solvable(&self, s: &[bool]) -> bool {
        assert!(self.cols < 64);
        let augmented = DenseMatrix {
            rows: self
                .rows
                .iter()
                .zip(s)
                .map(|(&r, &b)| r | u64::from(b) << self.cols)
                .collect(),
            cols: self.cols + 1,
        };
        augmented.rank() == self.rank()
    }

    pub fn mul(&self, x: &[bool]) -> Vec<bool> {
        let xm = x
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | u64::from(b) << i);
        self.rows
            .iter()
            .map(|r| (r & xm).count_ones() % 2 == 1)
            .collect()
    }
}

/// `(1/L) Σ_i v_i / ‖v_i‖₂` evaluated entry by entry.
pub fn dense_average(vectors: &[Vec<f64>]) -> Vec<f64> {
    let l = vectors.len() as f64;
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    (0..vectors[0].len())
        .map(|j| {
            let mut acc = 0.0;
            for (v, &norm) in vectors.iter().zip(&norms) {
                if norm != 0.0 {
                    acc += v[j] / norm;
                }
            }
            acc / l
        })
        .collect()
}

/// Exact maximum-likelihood decoding of a small DEM by enumerating all
/// `2^n` mechanism subsets.
pub struct CosetMl {
    /// `best[s]` is the most likely observable flip pattern for syndrome `s`.
    best: Vec<u64>,
    /// Failure probability of the ML decoder, summed exactly.
    pub logical_error_rate: f64,
}

impl CosetMl {
    pub fn new(dem: &DetectorErrorModel) -> Self {
        let n = dem.num_mechanisms();
        let (dets, obs) = (dem.num_detectors(), dem.num_observables());
        assert!(n <= 24 && dets <= 24 && obs <= 8, "too large to enumerate");
        let mask =
            |m: &SparseBinaryMatrix, j: usize| m.col(j).iter().fold(0u64, |acc, &r| acc | 1 << r);
        let det_masks: Vec<u64> = (0..n).map(|j| mask(dem.check_matrix(), j)).collect();
        let obs_masks: Vec<u64> = (0..n).map(|j| mask(dem.observable_matrix(), j)).collect();
        let priors = dem.priors();

        let classes = 1usize << obs;
        let mut table = vec![0.0f64; (1usize << dets) * classes];
        for e in 0u64..1 << n {
            let (mut s, mut l, mut prob) = (0u64, 0u64, 1.0);
            for j in 0..n {
                if e >> j & 1 == 1 {
                    s ^= det_masks[j];
                    l ^= obs_masks[j];
                    prob *= priors[j];
                } else {
                    prob *= 1.0 - priors[j];
                }
            }
            table[s as usize * classes + l as usize] += prob;
        }
        let mut best = Vec::with_capacity(1 << dets);
        let mut logical_error_rate = 0.0;
        for row in table.chunks(classes) {
            let (arg, max) = row
                .iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc },
                );
            best.push(arg as u64);
            logical_error_rate += row.iter().sum::<f64>() - max;
        }
        CosetMl {
            best,
            logical_error_rate,
        }
    }

    /// Observable flips the ML decoder predicts for `syndrome`.
    pub fn predict(&self, syndrome: &BitVector) -> u64 {
        self.best[syndrome.iter().fold(0usize, |acc, d| acc | 1 << d)]
    }
}

pub fn bits_to_mask(v: &BitVector) -> u64 {
    v.iter().fold(0u64, |acc, i| acc | 1 << i)
}
