use proptest::prelude::*;
use vibelsd_core::bp::{bp_decode, BpConfig, Permutation};
use vibelsd_core::lsd::lsd0_decode;
use vibelsd_core::Decoder;
use vibelsd_core::{
    BitVector, DetectorErrorModel, EnsembleConfig, EnsembleDecoder, Error, ExecutionMode,
    SparseBinaryMatrix,
};

/// Random check matrix with every column non-empty, plus an error on it.
fn problem() -> impl Strategy<Value = (SparseBinaryMatrix, BitVector)> {
    (2usize..12, 2usize..24).prop_flat_map(|(rows, cols)| {
        let column = prop::collection::btree_set(0..rows, 1..=rows.min(4));
        (
            prop::collection::vec(column, cols),
            prop::collection::vec(prop::bool::weighted(0.15), cols),
        )
            .prop_map(move |(columns, error)| {
                let adj = columns
                    .into_iter()
                    .map(|c| c.into_iter().collect())
                    .collect();
                let h = SparseBinaryMatrix::from_columns(rows, cols, adj).unwrap();
                (h, BitVector::from_bools(&error))
            })
    })
}

fn llrs(cols: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5f64..6.0, cols)
}

fn problem_with_llrs() -> impl Strategy<Value = (SparseBinaryMatrix, BitVector, Vec<f64>)> {
    problem().prop_flat_map(|(h, e)| {
        let n = h.cols();
        (Just(h), Just(e), llrs(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn converged_bp_reproduces_the_syndrome((h, e, l) in problem_with_llrs(), serial in any::<bool>()) {
        let s = h.matvec(&e).unwrap();
        let n = h.cols();
        let config = if serial {
            BpConfig::serial(15, Permutation::new((0..n).rev().collect()).unwrap())
        } else {
            BpConfig::parallel(15)
        };
        let out = bp_decode(&h, &s, &l, &config, None).unwrap();
        prop_assert!(out.iterations_used <= 15);
        if out.converged {
            prop_assert_eq!(h.matvec(&out.estimate).unwrap(), s);
        }
    }

    #[test]
    fn lsd_solves_every_reachable_syndrome((h, e, soft) in problem_with_llrs()) {
        let s = h.matvec(&e).unwrap();
        let (x, stats) = lsd0_decode(&h, &s, &soft).unwrap();
        prop_assert_eq!(h.matvec(&x).unwrap(), s.clone());
        prop_assert!(stats.largest_cluster <= h.rows() + h.cols());
        if s.is_zero() {
            prop_assert!(x.is_zero());
        }
    }

    #[test]
    fn lsd_rejects_unreachable_syndromes((h, _e, soft) in problem_with_llrs(), bits in prop::collection::vec(any::<bool>(), 12)) {
        let s = BitVector::from_bools(&bits[..h.rows()]);
        match lsd0_decode(&h, &s, &soft) {
            Ok((x, _)) => prop_assert_eq!(h.matvec(&x).unwrap(), s),
            Err(Error::Unsolvable) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn ensemble_output_reproduces_the_syndrome(
        (h, e) in problem(),
        l in 1usize..8,
        seed in any::<u64>(),
        parallel in any::<bool>(),
    ) {
        let n = h.cols();
        let observables = SparseBinaryMatrix::from_rows(1, n, vec![vec![0]]).unwrap();
        let dem = DetectorErrorModel::new(h.clone(), observables, vec![0.05; n]).unwrap();
        let config = EnsembleConfig {
            ensemble_size: l,
            correction_limit: 1 + l / 2,
            mode: if parallel { ExecutionMode::Parallel } else { ExecutionMode::Sequential },
            ..EnsembleConfig::for_distance(3, seed)
        };
        let decoder = EnsembleDecoder::setup_offline(&dem, config).unwrap();
        let s = h.matvec(&e).unwrap();
        let out = decoder.decode(&s).unwrap();
        prop_assert_eq!(h.matvec(&out.correction).unwrap(), s);
        prop_assert!(out.converged_count <= l);
    }
}
