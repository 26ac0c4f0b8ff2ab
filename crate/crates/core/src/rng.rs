//! Seeded random number generation.
//!
//! All sampling in this crate goes through ChaCha20 (`rand_chacha`), a
//! counter-based generator whose output for a given 64-bit seed is identical
//! on every platform. Independent streams for parallel work are obtained with
//! [`seeded_stream`].

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// The generator used throughout the crate.
pub type SimRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator seeded with `seed`; distinct streams do
/// not overlap.
pub fn seeded_stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
