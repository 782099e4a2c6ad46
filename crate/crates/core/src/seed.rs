//! Deterministic seed derivation for parallel experiment fan-out.
//!
//! Every unit of work (dataset entry, repetition, window) owns a child RNG
//! derived from the master seed and its indices, so results are identical
//! regardless of scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier of the PRNG algorithm, recorded in results files.
pub const RNG_ALGORITHM: &str = "chacha8";

/// SplitMix64 finalizer step (Steele, Lea, Flood 2014).
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and a list of work-unit indices.
///
/// The hash is a chained SplitMix64: starting from the master seed, each
/// index is absorbed with `state = splitmix64(state ^ splitmix64(index))`.
/// Distinct index tuples map to distinct streams with overwhelming
/// probability, and the derivation is stable across platforms and releases.
pub fn derive_seed(master_seed: u64, indices: &[u64]) -> u64 {
    let mut state = splitmix64(master_seed);
    for &index in indices {
        state = splitmix64(state ^ splitmix64(index));
    }
    state
}

/// Constructs the crate-wide deterministic generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
