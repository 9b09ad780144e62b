//! Shared fixtures for the decoder benchmarks.

use vibelsd_core::dem::code_capacity_dem;
use vibelsd_core::rng::shot_rng;
use vibelsd_core::{build_colour_code, BitVector, DetectorErrorModel, Tiling};

/// Code-capacity model on the hexagonal colour code.
pub fn hex_dem(distance: usize, p: f64) -> DetectorErrorModel {
    let lattice = build_colour_code(Tiling::Hex666, distance).expect("valid distance");
    code_capacity_dem(&lattice.check_matrix, &lattice.logical, p).expect("valid probability")
}

/// `count` sampled syndromes with at least one activated detector.
pub fn nontrivial_syndromes(dem: &DetectorErrorModel, count: usize, seed: u64) -> Vec<BitVector> {
    (0..)
        .map(|k| dem.sample(&mut shot_rng(seed, k)).syndrome)
        .filter(|s| !s.is_zero())
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_nontrivial_and_reproducible() {
        let dem = hex_dem(5, 0.05);
        let a = nontrivial_syndromes(&dem, 20, 1);
        assert_eq!(a.len(), 20);
        assert!(a
            .iter()
            .all(|s| !s.is_zero() && s.len() == dem.num_detectors()));
        assert_eq!(a, nontrivial_syndromes(&dem, 20, 1));
    }
}
