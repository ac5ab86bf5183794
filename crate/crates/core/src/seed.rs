//! Deterministic seed derivation.
//!
//! Every random decision in a run is drawn from a ChaCha8 stream whose seed is
//! a hash of the master seed and a path of labels, e.g.
//! `(phase, start, iteration, child)`. Streams never depend on scheduling
//! order, so parallel and sequential runs are bit-identical.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// splitmix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a label path into a 64-bit seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(master), |acc, &label| {
        mix64(acc.rotate_left(17).wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ mix64(label))
    })
}

pub fn stream(master: u64, path: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(master, path))
}
