//! Seed derivation. Every random choice in planning and execution draws
//! from a ChaCha8 stream keyed by a hash of the global seed and a list of
//! string labels, so a choice depends only on what it is about and never
//! on iteration order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn derive_seed(global: u64, parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    h.update(b"glpb-seed-v1");
    h.update(global.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Eight hex characters identifying a global seed in output names.
pub fn seed_tag(global: u64) -> String {
    let mut h = Sha256::new();
    h.update(b"glpb-tag-v1");
    h.update(global.to_le_bytes());
    hex::encode(&h.finalize()[..4])
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
