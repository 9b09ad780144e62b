//! LSD-0: localised statistics decoding without higher-order reprocessing.
//!
//! Every activated detector seeds a cluster. Invalid clusters take turns
//! absorbing their single most reliable boundary mechanism (lowest soft
//! value, ties by index) together with all of that mechanism's detectors.
//! A cluster is valid once its local syndrome lies in the column space of
//! its local check matrix; validity is tracked by incremental elimination.
//! When a new mechanism reaches a detector owned by another cluster the two
//! merge. Finally each cluster is solved on its own with columns ordered by
//! reliability.
//!
//! A mechanism always enters a cluster with all of its detectors, so
//! clusters never share detectors or mechanisms and their local matrices
//! combine block-diagonally on merge.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::gf2::{solve_mod2, BitVector, IncrementalElimination, SparseBinaryMatrix};

#[derive(Clone, Debug)]
pub struct Cluster {
    /// Detector of each local row.
    detectors: Vec<usize>,
    /// Mechanism of each local column, in the order they were added.
    mechanisms: Vec<usize>,
    elimination: IncrementalElimination,
    /// Reliability ranks of candidate mechanisms. May hold stale entries for
    /// mechanisms that already joined this cluster.
    frontier: BinaryHeap<Reverse<usize>>,
    valid: bool,
}

impl Cluster {
    pub fn detectors(&self) -> &[usize] {
        &self.detectors
    }

    pub fn mechanisms(&self) -> &[usize] {
        &self.mechanisms
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn size(&self) -> usize {
        self.mechanisms.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LsdStats {
    /// κ: the largest mechanism count over the final clusters.
    pub largest_cluster: usize,
    pub cluster_count: usize,
    pub cluster_sizes: Vec<usize>,
    pub growth_steps: usize,
}

/// Growing clusters for one syndrome.
#[derive(Clone, Debug)]
pub struct ClusterForest<'a> {
    h: &'a SparseBinaryMatrix,
    syndrome: Vec<bool>,
    /// Mechanisms by ascending soft value, ties by index.
    order: Vec<usize>,
    rank: Vec<usize>,
    clusters: Vec<Option<Cluster>>,
    detector_owner: Vec<Option<usize>>,
    detector_row: Vec<usize>,
    mechanism_owner: Vec<Option<usize>>,
    growth_steps: usize,
}

impl<'a> ClusterForest<'a> {
    /// Seeds one cluster per activated detector, in ascending detector order.
    pub fn new(h: &'a SparseBinaryMatrix, syndrome: &BitVector, soft: &[f64]) -> Result<Self> {
        if syndrome.len() != h.rows() || soft.len() != h.cols() {
            return Err(Error::dims(format!(
                "syndrome of length {} and {} soft values for a {}x{} matrix",
                syndrome.len(),
                soft.len(),
                h.rows(),
                h.cols()
            )));
        }
        if let Some(j) = soft.iter().position(|x| x.is_nan()) {
            return Err(Error::value(format!("soft value of mechanism {j} is NaN")));
        }
        let order = reliability_order(soft);
        let mut rank = vec![0; order.len()];
        for (k, &j) in order.iter().enumerate() {
            rank[j] = k;
        }
        let mut forest = ClusterForest {
            h,
            syndrome: syndrome.to_bools(),
            order,
            rank,
            clusters: Vec::new(),
            detector_owner: vec![None; h.rows()],
            detector_row: vec![0; h.rows()],
            mechanism_owner: vec![None; h.cols()],
            growth_steps: 0,
        };
        for &d in syndrome.support() {
            let id = forest.clusters.len();
            forest.clusters.push(Some(Cluster {
                detectors: Vec::new(),
                mechanisms: Vec::new(),
                elimination: IncrementalElimination::new(),
                frontier: BinaryHeap::new(),
                valid: false,
            }));
            forest.add_detector(id, d);
        }
        Ok(forest)
    }

    pub fn cluster(&self, id: usize) -> Option<&Cluster> {
        self.clusters.get(id)?.as_ref()
    }

    /// Ids of clusters that have not been merged away, ascending.
    pub fn live_clusters(&self) -> Vec<usize> {
        (0..self.clusters.len())
            .filter(|&id| self.clusters[id].is_some())
            .collect()
    }

    pub fn owner_of_detector(&self, d: usize) -> Option<usize> {
        self.detector_owner[d]
    }

    pub fn all_valid(&self) -> bool {
        self.clusters.iter().flatten().all(|c| c.valid)
    }

    fn live(&mut self, id: usize) -> &mut Cluster {
        self.clusters[id].as_mut().expect("live cluster")
    }

    fn add_detector(&mut self, id: usize, d: usize) {
        let rhs = self.syndrome[d];
        let rank = &self.rank;
        let mechanism_owner = &self.mechanism_owner;
        let cluster = self.clusters[id].as_mut().expect("live cluster");
        // No mechanism already in the cluster touches a detector outside it.
        let row = cluster.elimination.add_row(&[], rhs);
        cluster.detectors.push(d);
        cluster.valid = cluster.elimination.is_consistent();
        for &j in self.h.row(d) {
            if mechanism_owner[j].is_none() {
                cluster.frontier.push(Reverse(rank[j]));
            }
        }
        self.detector_owner[d] = Some(id);
        self.detector_row[d] = row;
    }

    /// Merges two live clusters and returns the id of the survivor (the
    /// larger one; `a` on ties).
    pub fn merge(&mut self, a: usize, b: usize) -> usize {
        assert_ne!(a, b, "cannot merge a cluster with itself");
        let size = |c: &Cluster| c.detectors.len() + c.mechanisms.len();
        let (keep, gone) = if size(self.live(b)) > size(self.live(a)) {
            (b, a)
        } else {
            (a, b)
        };
        let absorbed = self.clusters[gone].take().expect("live cluster");
        let survivor = self.clusters[keep].as_mut().expect("live cluster");
        let row_offset = survivor.detectors.len();
        for &d in &absorbed.detectors {
            self.detector_owner[d] = Some(keep);
            self.detector_row[d] += row_offset;
        }
        for &j in &absorbed.mechanisms {
            self.mechanism_owner[j] = Some(keep);
        }
        survivor.detectors.extend(&absorbed.detectors);
        survivor.mechanisms.extend(&absorbed.mechanisms);
        survivor.elimination.absorb(absorbed.elimination);
        survivor.frontier.extend(absorbed.frontier);
        survivor.valid = survivor.elimination.is_consistent();
        keep
    }

    /// Adds the most reliable frontier mechanism of cluster `id`, merging
    /// with any cluster it reaches. Returns the id of the grown cluster.
    /// Fails if the frontier is exhausted.
    pub fn grow(&mut self, id: usize) -> Result<usize> {
        let j = loop {
            let Some(Reverse(r)) = self.live(id).frontier.pop() else {
                return Err(Error::Unsolvable);
            };
            let j = self.order[r];
            if self.mechanism_owner[j].is_none() {
                break j;
            }
            debug_assert_eq!(self.mechanism_owner[j], Some(id));
        };
        let h = self.h;
        let mut id = id;
        for &d in h.col(j) {
            if let Some(other) = self.detector_owner[d] {
                if other != id {
                    id = self.merge(id, other);
                }
            }
        }
        for &d in h.col(j) {
            if self.detector_owner[d].is_none() {
                self.add_detector(id, d);
            }
        }
        let rows: Vec<usize> = h.col(j).iter().map(|&d| self.detector_row[d]).collect();
        let cluster = self.live(id);
        cluster.elimination.add_column(&rows);
        cluster.mechanisms.push(j);
        cluster.valid = cluster.elimination.is_consistent();
        self.mechanism_owner[j] = Some(id);
        self.growth_steps += 1;
        Ok(id)
    }

    /// Round-robin growth of invalid clusters until all are valid.
    pub fn grow_until_valid(&mut self) -> Result<()> {
        loop {
            let pending: Vec<usize> = self
                .live_clusters()
                .into_iter()
                .filter(|&id| !self.live(id).valid)
                .collect();
            if pending.is_empty() {
                return Ok(());
            }
            for id in pending {
                if self.clusters[id].as_ref().is_some_and(|c| !c.valid) {
                    self.grow(id)?;
                }
            }
        }
    }

    pub fn stats(&self) -> LsdStats {
        let cluster_sizes: Vec<usize> = self.clusters.iter().flatten().map(Cluster::size).collect();
        LsdStats {
            largest_cluster: cluster_sizes.iter().copied().max().unwrap_or(0),
            cluster_count: cluster_sizes.len(),
            cluster_sizes,
            growth_steps: self.growth_steps,
        }
    }

    /// Solves every cluster locally, pivoting on its mechanisms in
    /// reliability order, and returns the combined correction.
    pub fn solve(&self) -> Result<BitVector> {
        let mut support = Vec::new();
        for cluster in self.clusters.iter().flatten() {
            let sub = self.h.submatrix(&cluster.detectors, &cluster.mechanisms);
            let local_syndrome = BitVector::from_bools(
                &cluster
                    .detectors
                    .iter()
                    .map(|&d| self.syndrome[d])
                    .collect::<Vec<_>>(),
            );
            let mut local_order: Vec<usize> = (0..cluster.mechanisms.len()).collect();
            local_order.sort_unstable_by_key(|&k| self.rank[cluster.mechanisms[k]]);
            let x = solve_mod2(&sub, &local_syndrome, &local_order)?;
            support.extend(x.support().iter().map(|&k| cluster.mechanisms[k]));
        }
        support.sort_unstable();
        Ok(BitVector::from_sorted_unchecked(self.h.cols(), support))
    }
}

/// Mechanism indices sorted by ascending soft value, ties by index.
pub fn reliability_order(soft: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..soft.len()).collect();
    order.sort_by(|&a, &b| soft[a].total_cmp(&soft[b]).then(a.cmp(&b)));
    order
}

/// Decodes `syndrome` with LSD-0, guided by `soft` (lower = more likely
/// flipped). The correction always reproduces the syndrome; a syndrome
/// outside the column space of `h` is an error.
pub fn lsd0_decode(
    h: &SparseBinaryMatrix,
    syndrome: &BitVector,
    soft: &[f64],
) -> Result<(BitVector, LsdStats)> {
    let mut forest = ClusterForest::new(h, syndrome, soft)?;
    match forest.grow_until_valid() {
        Ok(()) => {
            let correction = forest.solve()?;
            debug_assert_eq!(&h.matvec(&correction)?, syndrome);
            Ok((correction, forest.stats()))
        }
        Err(Error::Unsolvable) => {
            // A cluster swallowed its whole connected component without
            // becoming valid. A global solve settles whether any correction
            // exists at all.
            let correction = solve_mod2(h, syndrome, &forest.order)?;
            Ok((correction, forest.stats()))
        }
        Err(e) => Err(e),
    }
}
