//! Seeded random streams.
//!
//! Every random artifact (games, strategies, datasets, evolution runs, network
//! training) draws from its own [`ChaCha8Rng`] stream. Streams are derived from
//! a single root seed and a label, so adding a new consumer never shifts the
//! bits seen by an existing one. ChaCha8 has a documented, platform-independent
//! output sequence, which is what makes saved seeds replayable.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Version tag of the stream-derivation scheme, recorded in manifests.
pub const STREAM_SCHEME: &str = "chacha8-splitmix64-v1";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Derives a child seed from `root`, a label and a list of integer coordinates.
pub fn derive_seed(root: u64, label: &str, coords: &[u64]) -> u64 {
    let mut s = splitmix64(root ^ fnv1a(label.as_bytes()));
    for &c in coords {
        s = splitmix64(s ^ splitmix64(c));
    }
    s
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shorthand for `rng_from_seed(derive_seed(root, label, coords))`.
pub fn stream(root: u64, label: &str, coords: &[u64]) -> ChaCha8Rng {
    rng_from_seed(derive_seed(root, label, coords))
}
