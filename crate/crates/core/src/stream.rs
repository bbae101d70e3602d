//! Reproducible random streams.
//!
//! Every randomized routine in this crate draws from a counter-based ChaCha
//! generator addressed by `(seed, stream_id)`. Distinct stream ids give
//! statistically independent streams from the same seed, so work can be split
//! across workers by stream id and reproduced exactly regardless of how many
//! threads consumed them.

use rand::SeedableRng;

/// The generator used throughout the crate.
pub type StreamRng = rand_chacha::ChaCha12Rng;

/// Open the random stream addressed by `(seed, stream_id)`.
pub fn stream(seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
