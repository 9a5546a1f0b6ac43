//! Counter-based random streams.
//!
//! A stream is a ChaCha12 generator whose key is derived from the master seed
//! and a textual tag, and whose stream id is the sample index. Any sample can
//! therefore be regenerated in isolation, which keeps parallel and serial runs
//! bit-identical.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The generator type used everywhere in the crate.
pub type Stream = ChaCha12Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Key material for `(seed, tag)`.
pub fn derive_key(seed: u64, tag: &str) -> [u8; 32] {
    let mut state = seed ^ fnv1a(tag);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Stream number `index` of the generator keyed by `(seed, tag)`.
pub fn stream(seed: u64, tag: &str, index: u64) -> Stream {
    let mut rng = ChaCha12Rng::from_seed(derive_key(seed, tag));
    rng.set_stream(index);
    rng
}

/// Compose a hierarchical tag, e.g. `tag(&["ensembles", "w2", "left"])`.
pub fn tag(parts: &[&str]) -> String {
    parts.join("/")
}
