//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 (`rand_chacha` 0.3).
//! A stream is identified by `(root_seed, stream_id)`: the key is derived
//! from `root_seed` with `SeedableRng::seed_from_u64` and `stream_id` selects
//! the ChaCha stream. Streams are independent and each one is reproducible on
//! its own, so work can be split across threads without changing results.
//!
//! Stream ids:
//! * shot `k` of an experiment samples from stream `k`;
//! * ensemble permutation `i` is drawn from stream `PERMUTATION_STREAMS + i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// First stream id reserved for ensemble permutations.
pub const PERMUTATION_STREAMS: u64 = 1 << 63;

pub fn stream_rng(root_seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(stream_id);
    rng
}

pub fn shot_rng(root_seed: u64, shot: u64) -> StreamRng {
    debug_assert!(shot < PERMUTATION_STREAMS);
    stream_rng(root_seed, shot)
}

pub fn permutation_rng(root_seed: u64, index: u64) -> StreamRng {
    stream_rng(root_seed, PERMUTATION_STREAMS + index)
}
