#[path = "support/oracles.rs"]
mod oracles;

use oracles::{bits_to_mask, CosetMl};
use vibelsd_core::dem::code_capacity_dem;
use vibelsd_core::rng::shot_rng;
use vibelsd_core::{
    build_colour_code, BitVector, Decoder, EnsembleConfig, EnsembleDecoder, SparseBinaryMatrix,
    Tiling,
};

#[test]
fn oracle_matches_majority_vote_on_repetition_code() {
    let h = SparseBinaryMatrix::from_rows(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
    for p in [0.01, 0.1, 0.3] {
        let dem = code_capacity_dem(&h, &BitVector::ones(3), p).unwrap();
        let ml = CosetMl::new(&dem);
        let majority_failure = 3.0 * p * p * (1.0 - p) + p * p * p;
        assert!(
            (ml.logical_error_rate - majority_failure).abs() < 1e-15,
            "p = {p}"
        );
    }
}

#[test]
fn ensemble_stays_close_to_maximum_likelihood_at_distance_five() {
    const SHOTS: u64 = 20_000;
    let lattice = build_colour_code(Tiling::Hex666, 5).unwrap();
    let dem = code_capacity_dem(&lattice.check_matrix, &lattice.logical, 0.05).unwrap();
    let ml = CosetMl::new(&dem);
    let decoder = EnsembleDecoder::setup_offline(&dem, EnsembleConfig::for_distance(5, 3)).unwrap();

    let (mut ml_failures, mut ensemble_failures) = (0u64, 0u64);
    for k in 0..SHOTS {
        let shot = dem.sample(&mut shot_rng(3, k));
        let actual = bits_to_mask(&shot.observable_flips);
        if ml.predict(&shot.syndrome) != actual {
            ml_failures += 1;
        }
        let out = decoder.decode(&shot.syndrome).unwrap();
        let predicted = dem.observable_matrix().matvec(&out.correction).unwrap();
        if bits_to_mask(&predicted) != actual {
            ensemble_failures += 1;
        }
    }
    let n = SHOTS as f64;
    let exact = ml.logical_error_rate;
    let sigma = (exact * (1.0 - exact) / n).sqrt();
    let ml_rate = ml_failures as f64 / n;
    let ensemble_rate = ensemble_failures as f64 / n;
    // The sampled ML decoder agrees with the enumerated rate.
    assert!(
        (ml_rate - exact).abs() < 4.0 * sigma,
        "ml {ml_rate} vs exact {exact}"
    );
    // No decoder beats ML by more than noise; the ensemble stays within 1.4x.
    assert!(
        ensemble_rate > exact - 4.0 * sigma,
        "{ensemble_rate} vs {exact}"
    );
    assert!(ensemble_rate < 1.4 * exact, "{ensemble_rate} vs {exact}");
}
