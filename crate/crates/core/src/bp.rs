//! Min-sum belief propagation for syndrome decoding.
//!
//! Messages live on the edges of the Tanner graph. Edge ids follow the row
//! adjacency of the check matrix: the edges of check `c` are the contiguous
//! range `check_edges(c)`, in ascending variable order.
//!
//! Sign convention: a positive LLR means "probably not flipped", and the
//! syndrome bit of a check negates everything it sends.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};

/// Stand-in for the unbounded message a degree-1 check sends: its single
/// variable must equal the syndrome bit.
pub const LONE_CHECK_MAGNITUDE: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct TannerGraph {
    checks: usize,
    vars: usize,
    check_offsets: Vec<usize>,
    edge_var: Vec<usize>,
    edge_check: Vec<usize>,
    var_offsets: Vec<usize>,
    /// Edge ids grouped by variable, ascending check within a variable.
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(h: &SparseBinaryMatrix) -> Self {
        let mut check_offsets = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        let mut edge_check = Vec::with_capacity(h.nnz());
        check_offsets.push(0);
        for c in 0..h.rows() {
            for &v in h.row(c) {
                edge_var.push(v);
                edge_check.push(c);
            }
            check_offsets.push(edge_var.len());
        }
        let mut var_offsets = vec![0; h.cols() + 1];
        for &v in &edge_var {
            var_offsets[v + 1] += 1;
        }
        for v in 0..h.cols() {
            var_offsets[v + 1] += var_offsets[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        TannerGraph {
            checks: h.rows(),
            vars: h.cols(),
            check_offsets,
            edge_var,
            edge_check,
            var_offsets,
            var_edges,
        }
    }

    pub fn num_checks(&self) -> usize {
        self.checks
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_offsets[c]..self.check_offsets[c + 1]
    }

    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[self.var_offsets[v]..self.var_offsets[v + 1]]
    }

    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    pub fn edge_check(&self, e: usize) -> usize {
        self.edge_check[e]
    }

    fn max_check_degree(&self) -> usize {
        (0..self.checks)
            .map(|c| self.check_edges(c).len())
            .max()
            .unwrap_or(0)
    }

    /// Whether `H·error == syndrome`, both dense.
    fn reproduces(&self, error: &[bool], syndrome: &[bool]) -> bool {
        (0..self.checks).all(|c| {
            self.check_edges(c)
                .fold(false, |acc, e| acc ^ error[self.edge_var[e]])
                == syndrome[c]
        })
    }
}

/// A bijection on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::value(format!(
                    "not a permutation of 0..{}: repeated or out-of-range entry {i}",
                    order.len()
                )));
            }
        }
        Ok(Permutation(order))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    Parallel,
    /// Serial-V: variables updated one at a time in permutation order.
    Serial(Permutation),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iterations: usize,
    pub schedule: Schedule,
    pub min_sum_scale: f64,
}

impl BpConfig {
    pub fn parallel(max_iterations: usize) -> Self {
        BpConfig {
            max_iterations,
            schedule: Schedule::Parallel,
            min_sum_scale: 1.0,
        }
    }

    pub fn serial(max_iterations: usize, permutation: Permutation) -> Self {
        BpConfig {
            max_iterations,
            schedule: Schedule::Serial(permutation),
            min_sum_scale: 1.0,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::value("max_iterations must be at least 1"));
        }
        if !(self.min_sum_scale > 0.0 && self.min_sum_scale <= 1.0) {
            return Err(Error::value(format!(
                "min_sum_scale {} is outside (0, 1]",
                self.min_sum_scale
            )));
        }
        if let Schedule::Serial(p) = &self.schedule {
            if p.len() != n {
                return Err(Error::dims(format!(
                    "schedule permutes {} variables, graph has {n}",
                    p.len()
                )));
            }
        }
        Ok(())
    }
}

/// Shared stop flag, polled once per BP iteration.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn syndrome_sign(bit: bool) -> f64 {
    if bit {
        -1.0
    } else {
        1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpState {
    pub channel_llrs: Vec<f64>,
    pub var_to_check: Vec<f64>,
    pub check_to_var: Vec<f64>,
    pub posteriors: Vec<f64>,
}

impl BpState {
    /// Variable messages start at the channel LLRs; check messages at zero.
    pub fn new(graph: &TannerGraph, channel_llrs: &[f64]) -> Self {
        BpState {
            channel_llrs: channel_llrs.to_vec(),
            var_to_check: (0..graph.num_edges())
                .map(|e| channel_llrs[graph.edge_var(e)])
                .collect(),
            check_to_var: vec![0.0; graph.num_edges()],
            posteriors: channel_llrs.to_vec(),
        }
    }

    /// Recomputes every check-to-variable message from the current
    /// variable-to-check messages.
    pub fn check_update(&mut self, graph: &TannerGraph, syndrome: &[bool], scale: f64) {
        for (c, &bit) in syndrome.iter().enumerate().take(graph.num_checks()) {
            let edges = graph.check_edges(c);
            if edges.len() == 1 {
                self.check_to_var[edges.start] = syndrome_sign(bit) * LONE_CHECK_MAGNITUDE * scale;
                continue;
            }
            let mut parity = syndrome_sign(bit);
            let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for e in edges.clone() {
                let m = self.var_to_check[e];
                parity *= sign(m);
                let a = m.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    argmin = e;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for e in edges {
                let others = if e == argmin { min2 } else { min1 };
                self.check_to_var[e] = parity * sign(self.var_to_check[e]) * others * scale;
            }
        }
    }

    /// Message from the check owning edge `e` to the variable of `e`,
    /// computed from the current variable-to-check messages.
    fn check_message(&self, graph: &TannerGraph, e: usize, syndrome: &[bool], scale: f64) -> f64 {
        let c = graph.edge_check(e);
        let mut parity = syndrome_sign(syndrome[c]);
        let mut min = f64::INFINITY;
        for other in graph.check_edges(c).filter(|&o| o != e) {
            let m = self.var_to_check[other];
            parity *= sign(m);
            min = min.min(m.abs());
        }
        if min.is_infinite() {
            min = LONE_CHECK_MAGNITUDE;
        }
        parity * min * scale
    }

    /// Posterior of `v` and its outgoing messages from the incoming check
    /// messages currently stored.
    fn emit_variable(&mut self, graph: &TannerGraph, v: usize) {
        let edges = graph.var_edges(v);
        let lambda = self.channel_llrs[v];
        let mut total = lambda;
        for &e in edges {
            total += self.check_to_var[e];
        }
        self.posteriors[v] = total;
        for &e in edges {
            let mut m = lambda;
            for &other in edges.iter().filter(|&&o| o != e) {
                m += self.check_to_var[other];
            }
            self.var_to_check[e] = m;
        }
    }

    /// Parallel: every variable emits from the check messages of the
    /// preceding `check_update`. Serial: variables are visited in
    /// permutation order and each first refreshes its incoming check
    /// messages, so later variables see updates made earlier in the sweep.
    pub fn variable_update(
        &mut self,
        graph: &TannerGraph,
        schedule: &Schedule,
        syndrome: &[bool],
        scale: f64,
    ) {
        match schedule {
            Schedule::Parallel => {
                for v in 0..graph.num_vars() {
                    self.emit_variable(graph, v);
                }
            }
            Schedule::Serial(order) => {
                for &v in order.as_slice() {
                    for &e in graph.var_edges(v) {
                        self.check_to_var[e] = self.check_message(graph, e, syndrome, scale);
                    }
                    self.emit_variable(graph, v);
                }
            }
        }
    }
}

/// Bit `v` is set iff `L_v ≤ 0`.
pub fn hard_decision(posteriors: &[f64]) -> BitVector {
    BitVector::from_sorted_unchecked(
        posteriors.len(),
        posteriors
            .iter()
            .enumerate()
            .filter_map(|(v, &l)| (l <= 0.0).then_some(v))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpResult {
    pub converged: bool,
    pub estimate: BitVector,
    pub posteriors: Vec<f64>,
    pub iterations_used: usize,
}

/// A BP decoder for one check matrix, channel and schedule. Cheap to clone;
/// the graph and channel are shared.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    graph: Arc<TannerGraph>,
    channel_llrs: Arc<[f64]>,
    config: BpConfig,
}

impl BpDecoder {
    pub fn new(h: &SparseBinaryMatrix, channel_llrs: &[f64], config: BpConfig) -> Result<Self> {
        Self::with_graph(Arc::new(TannerGraph::new(h)), channel_llrs.into(), config)
    }

    pub fn with_graph(
        graph: Arc<TannerGraph>,
        channel_llrs: Arc<[f64]>,
        config: BpConfig,
    ) -> Result<Self> {
        if channel_llrs.len() != graph.num_vars() {
            return Err(Error::dims(format!(
                "{} channel LLRs for {} variables",
                channel_llrs.len(),
                graph.num_vars()
            )));
        }
        if let Some(v) = channel_llrs.iter().position(|l| !l.is_finite()) {
            return Err(Error::value(format!(
                "channel LLR of variable {v} is not finite"
            )));
        }
        config.validate(graph.num_vars())?;
        Ok(BpDecoder {
            graph,
            channel_llrs,
            config,
        })
    }

    pub fn graph(&self) -> &Arc<TannerGraph> {
        &self.graph
    }

    pub fn config(&self) -> &BpConfig {
        &self.config
    }

    pub fn start(&self, syndrome: &BitVector) -> Result<BpRun<'_>> {
        if syndrome.len() != self.graph.num_checks() {
            return Err(Error::dims(format!(
                "syndrome of length {} for {} checks",
                syndrome.len(),
                self.graph.num_checks()
            )));
        }
        Ok(BpRun {
            decoder: self,
            syndrome: syndrome.to_bools(),
            state: BpState::new(&self.graph, &self.channel_llrs),
            iterations: 0,
            converged: false,
        })
    }

    pub fn decode(&self, syndrome: &BitVector, cancel: Option<&CancelToken>) -> Result<BpResult> {
        let mut run = self.start(syndrome)?;
        while !run.is_finished() {
            if cancel.is_some_and(CancelToken::is_cancelled) {
                break;
            }
            run.step();
        }
        Ok(run.finish())
    }
}

/// One decoding in progress, advanced an iteration at a time.
#[derive(Clone, Debug)]
pub struct BpRun<'a> {
    decoder: &'a BpDecoder,
    syndrome: Vec<bool>,
    state: BpState,
    iterations: usize,
    converged: bool,
}

impl BpRun<'_> {
    /// Runs one full iteration and reports whether the hard decision now
    /// reproduces the syndrome. Stepping past convergence or the iteration
    /// limit is allowed.
    pub fn step(&mut self) -> bool {
        let graph = &*self.decoder.graph;
        let config = &self.decoder.config;
        if config.schedule == Schedule::Parallel {
            self.state
                .check_update(graph, &self.syndrome, config.min_sum_scale);
        }
        // Serial sweeps refresh each check message right before it is used,
        // so a separate check phase would be overwritten unread.
        self.state.variable_update(
            graph,
            &config.schedule,
            &self.syndrome,
            config.min_sum_scale,
        );
        self.iterations += 1;
        let decision: Vec<bool> = self.state.posteriors.iter().map(|&l| l <= 0.0).collect();
        self.converged = graph.reproduces(&decision, &self.syndrome);
        self.converged
    }

    pub fn is_converged(&self) -> bool {
        self.converged
    }

    pub fn is_finished(&self) -> bool {
        self.converged || self.iterations >= self.decoder.config.max_iterations
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn state(&self) -> &BpState {
        &self.state
    }

    pub fn finish(self) -> BpResult {
        let estimate = hard_decision(&self.state.posteriors);
        BpResult {
            converged: self.converged,
            estimate,
            posteriors: self.state.posteriors,
            iterations_used: self.iterations,
        }
    }
}

/// One-shot convenience wrapper around [`BpDecoder`].
pub fn bp_decode(
    h: &SparseBinaryMatrix,
    syndrome: &BitVector,
    channel_llrs: &[f64],
    config: &BpConfig,
    cancel: Option<&CancelToken>,
) -> Result<BpResult> {
    BpDecoder::new(h, channel_llrs, config.clone())?.decode(syndrome, cancel)
}

/// Upper bound on message magnitudes used by the sanity checks in tests:
/// `max|λ| + T·max_check_degree·max|λ|`.
pub fn message_bound(graph: &TannerGraph, channel_llrs: &[f64], iterations: usize) -> f64 {
    let max = channel_llrs.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    max + (iterations * graph.max_check_degree()) as f64 * max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colour_code::{build_colour_code, Tiling};
    use crate::dem::prior_llr;

    fn h(rows: &[&[usize]], cols: usize) -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_rows(rows.len(), cols, rows.iter().map(|r| r.to_vec()).collect())
            .unwrap()
    }

    fn bits(len: usize, support: &[usize]) -> BitVector {
        BitVector::from_support(len, support.to_vec()).unwrap()
    }

    #[test]
    fn degree_two_check_copies_the_other_message() {
        let g = TannerGraph::new(&h(&[&[0, 1]], 2));
        let mut state = BpState::new(&g, &[2.0, -3.0]);
        state.check_update(&g, &[false], 1.0);
        assert_eq!(state.check_to_var, vec![-3.0, 2.0]);
        state.check_update(&g, &[true], 1.0);
        assert_eq!(state.check_to_var, vec![3.0, -2.0]);
    }

    #[test]
    fn degree_three_check() {
        let g = TannerGraph::new(&h(&[&[0, 1, 2]], 3));
        let mut state = BpState::new(&g, &[1.0, 2.0, -4.0]);
        state.check_update(&g, &[false], 1.0);
        assert_eq!(state.check_to_var, vec![-2.0, -1.0, 1.0]);
        state.check_update(&g, &[false], 0.5);
        assert_eq!(state.check_to_var, vec![-1.0, -0.5, 0.5]);
    }

    #[test]
    fn zero_message_counts_as_positive() {
        let g = TannerGraph::new(&h(&[&[0, 1, 2]], 3));
        let mut state = BpState::new(&g, &[0.0, -1.0, 3.0]);
        state.check_update(&g, &[false], 1.0);
        assert_eq!(state.check_to_var, vec![-1.0, 0.0, -0.0]);
        assert!(state.check_to_var[2].is_sign_negative());
    }

    #[test]
    fn lone_variable_sends_its_channel_llr() {
        let g = TannerGraph::new(&h(&[&[0, 1], &[1]], 2));
        let mut state = BpState::new(&g, &[1.5, 0.7]);
        state.check_update(&g, &[true, false], 1.0);
        state.variable_update(&g, &Schedule::Parallel, &[true, false], 1.0);
        // Variable 0 has one check, so the empty sum leaves λ_0.
        assert_eq!(state.var_to_check[0], 1.5);
        assert_eq!(state.check_to_var[2], LONE_CHECK_MAGNITUDE);
    }

    #[test]
    fn hard_decision_boundary() {
        assert!(hard_decision(&[1.0, 2.0]).is_zero());
        assert_eq!(hard_decision(&[0.0]).support(), &[0]);
        assert_eq!(hard_decision(&[1.0, -1.0, 3.0]).support(), &[1]);
        assert_eq!(hard_decision(&[-0.0]).support(), &[0]);
    }

    /// Max-marginal `min E(e_v = 1) − min E(e_v = 0)` over solutions of
    /// `H e = s`, with `E(e) = Σ λ_j e_j`.
    fn max_marginals(m: &SparseBinaryMatrix, s: &BitVector, llrs: &[f64]) -> Vec<f64> {
        let n = m.cols();
        let mut best = vec![[f64::INFINITY; 2]; n];
        for mask in 0u32..(1 << n) {
            let e = BitVector::from_bools(&(0..n).map(|j| mask >> j & 1 == 1).collect::<Vec<_>>());
            if m.matvec(&e).unwrap() != *s {
                continue;
            }
            let energy: f64 = e.support().iter().map(|&j| llrs[j]).sum();
            for (v, b) in best.iter_mut().enumerate() {
                let slot = &mut b[usize::from(e.get(v))];
                *slot = slot.min(energy);
            }
        }
        best.iter().map(|b| b[1] - b[0]).collect()
    }

    #[test]
    fn min_sum_on_trees_is_exact() {
        let trees = [
            h(&[&[0, 1], &[1, 2]], 3),
            h(&[&[0, 1, 2], &[2, 3], &[3, 4, 5]], 6),
        ];
        let llr_sets: [&[f64]; 3] = [
            &[1.0, 2.5, 0.75, 3.0, 1.25, 2.0],
            &[0.5, -1.0, 2.0, 1.5, -0.25, 0.8],
            &[2.2, 2.2, 2.2, 2.2, 2.2, 2.2],
        ];
        for m in &trees {
            let n = m.cols();
            for llrs in llr_sets {
                let llrs = &llrs[..n];
                for smask in 0..(1 << m.rows()) {
                    let s = BitVector::from_bools(
                        &(0..m.rows())
                            .map(|c| smask >> c & 1 == 1)
                            .collect::<Vec<_>>(),
                    );
                    let exact = max_marginals(m, &s, llrs);
                    for schedule in [
                        Schedule::Parallel,
                        Schedule::Serial(Permutation::identity(n)),
                    ] {
                        let dec = BpDecoder::new(
                            m,
                            llrs,
                            BpConfig {
                                max_iterations: 10,
                                schedule: schedule.clone(),
                                min_sum_scale: 1.0,
                            },
                        )
                        .unwrap();
                        let mut run = dec.start(&s).unwrap();
                        for _ in 0..2 * n {
                            run.step();
                        }
                        for (got, want) in run.state().posteriors.iter().zip(&exact) {
                            assert!((got - want).abs() < 1e-12, "{schedule:?}: {got} vs {want}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn four_cycle_parallel_oscillates_serial_converges() {
        let m = h(&[&[0, 1], &[0, 1]], 2);
        let s = bits(2, &[0, 1]);
        let llrs = [prior_llr(0.1); 2];
        let par = bp_decode(&m, &s, &llrs, &BpConfig::parallel(25), None).unwrap();
        assert!(!par.converged);
        assert_eq!(par.iterations_used, 25);
        let ser = bp_decode(
            &m,
            &s,
            &llrs,
            &BpConfig::serial(25, Permutation::identity(2)),
            None,
        )
        .unwrap();
        assert!(ser.converged);
        assert_eq!(ser.iterations_used, 1);
        assert_eq!(ser.estimate.support(), &[0]);
    }

    #[test]
    fn zero_syndrome_converges_immediately() {
        let l = build_colour_code(Tiling::Hex666, 5).unwrap();
        let llrs = vec![prior_llr(0.05); l.qubit_count];
        let r = bp_decode(
            &l.check_matrix,
            &BitVector::zeros(l.plaquettes.len()),
            &llrs,
            &BpConfig::parallel(20),
            None,
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations_used, 1);
        assert!(r.estimate.is_zero());
    }

    #[test]
    fn repetition_code() {
        let m = h(&[&[0, 1], &[1, 2]], 3);
        let llrs = [prior_llr(0.1); 3];
        for config in [
            BpConfig::parallel(10),
            BpConfig::serial(10, Permutation::identity(3)),
        ] {
            let r = bp_decode(&m, &bits(2, &[0]), &llrs, &config, None).unwrap();
            assert!(r.converged);
            assert_eq!(r.estimate.support(), &[0]);
        }
    }

    #[test]
    fn single_errors_on_distance_three() {
        for tiling in [Tiling::Hex666, Tiling::SquareOct488] {
            let l = build_colour_code(tiling, 3).unwrap();
            let llrs = vec![prior_llr(0.01); l.qubit_count];
            for q in 0..l.qubit_count {
                let e = bits(l.qubit_count, &[q]);
                let s = l.check_matrix.matvec(&e).unwrap();
                // Neither schedule handles every position on its own: flooding
                // oscillates on the centre qubit and serial sweeps tie on the
                // corners. Between them every single error is decoded.
                let mut order = vec![q];
                order.extend((0..l.qubit_count).filter(|&v| v != q));
                let configs = [
                    BpConfig::parallel(20),
                    BpConfig::serial(20, Permutation::new(order).unwrap()),
                ];
                let mut decoded = 0;
                for config in &configs {
                    let r = bp_decode(&l.check_matrix, &s, &llrs, config, None).unwrap();
                    if r.converged {
                        assert_eq!(r.estimate, e, "{tiling} qubit {q}");
                        decoded += 1;
                    }
                }
                assert!(decoded > 0, "{tiling} qubit {q}");
            }
        }
    }

    #[test]
    fn parallel_oscillates_on_the_steane_centre() {
        // Every plaquette fires; flooding flips all qubits, then none.
        let l = build_colour_code(Tiling::Hex666, 3).unwrap();
        let llrs = vec![prior_llr(0.01); 7];
        let s = BitVector::ones(3);
        let dec = BpDecoder::new(&l.check_matrix, &llrs, BpConfig::parallel(20)).unwrap();
        let mut run = dec.start(&s).unwrap();
        for t in 0..6 {
            assert!(!run.step());
            let flipped = hard_decision(&run.state().posteriors).weight();
            assert_eq!(flipped, if t % 2 == 0 { 7 } else { 0 });
        }
    }

    #[test]
    fn serial_identity_ties_on_a_corner_qubit() {
        // With uniform priors the corner qubit's posterior sits exactly at
        // zero and the sweep settles into a tie it cannot leave.
        let l = build_colour_code(Tiling::Hex666, 3).unwrap();
        let llrs = vec![prior_llr(0.01); 7];
        let s = l.check_matrix.matvec(&bits(7, &[0])).unwrap();
        let r = bp_decode(
            &l.check_matrix,
            &s,
            &llrs,
            &BpConfig::serial(20, Permutation::identity(7)),
            None,
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(&r.posteriors[..4], &[0.0; 4]);
    }

    #[test]
    fn cancelled_before_start_returns_channel() {
        let m = h(&[&[0, 1]], 2);
        let token = CancelToken::new();
        token.cancel();
        let r = bp_decode(
            &m,
            &bits(1, &[0]),
            &[1.0, 2.0],
            &BpConfig::parallel(5),
            Some(&token),
        )
        .unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations_used, 0);
        assert_eq!(r.posteriors, vec![1.0, 2.0]);
    }

    #[test]
    fn validation_errors() {
        let m = h(&[&[0, 1]], 2);
        let s = bits(1, &[0]);
        assert!(bp_decode(&m, &s, &[1.0], &BpConfig::parallel(5), None).is_err());
        assert!(bp_decode(&m, &s, &[1.0, f64::NAN], &BpConfig::parallel(5), None).is_err());
        assert!(bp_decode(&m, &s, &[1.0, 1.0], &BpConfig::parallel(0), None).is_err());
        assert!(bp_decode(&m, &bits(2, &[]), &[1.0, 1.0], &BpConfig::parallel(5), None).is_err());
        let bad = BpConfig::serial(5, Permutation::identity(3));
        assert!(bp_decode(&m, &s, &[1.0, 1.0], &bad, None).is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![1, 2]).is_err());
        assert!(Permutation::new(vec![1, 0]).is_ok());
    }
}
