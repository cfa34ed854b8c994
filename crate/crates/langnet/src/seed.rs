//! Deterministic seed derivation for per-item RNG streams.

/// splitmix64 finalizer; full-period mixing of a 64-bit state.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent substream seed from a master seed and a stream
/// ordinal. The result depends only on the pair, not on evaluation order.
pub fn derive(master: u64, stream: u64) -> u64 {
    mix(mix(master) ^ mix(stream.wrapping_add(1)))
}
