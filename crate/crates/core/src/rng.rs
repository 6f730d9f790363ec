//! Seeded random streams.
//!
//! All randomness uses ChaCha8. A stream is keyed by a master seed plus a
//! text label: the 32-byte ChaCha key is `SHA-256(master.to_le_bytes() ||
//! label)`. Distinct labels ("split/3", "sampler/stem/3", ...) give
//! independent streams, and the derivation is trivially portable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

fn key(master: u64, label: &str) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

/// Random stream for `label` under `master`.
pub fn stream(master: u64, label: &str) -> StreamRng {
    ChaCha8Rng::from_seed(key(master, label))
}

/// A 64-bit sub-seed for `label` under `master`.
pub fn subseed(master: u64, label: &str) -> u64 {
    let k = key(master, label);
    u64::from_le_bytes(k[..8].try_into().expect("8 bytes"))
}
