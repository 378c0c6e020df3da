//! Deterministic per-trial seed derivation.
//!
//! Every random draw in the harness flows from one master seed through
//! [`derive_seed`]. The derivation depends only on the semantic coordinates
//! of the draw (experiment tag, K, M, trial index, redraw attempt), never
//! on loop order, so reordering the sweep grids or running trials in
//! parallel cannot change any individual trial.

/// SplitMix64 finalizer; good avalanche behavior, stable across platforms.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fold the tag sequence into the master seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = mix(master);
    for &t in tags {
        state = mix(state ^ mix(t));
    }
    state
}

/// Experiment tags for [`derive_seed`].
pub mod tag {
    pub const MMIN: u64 = 1;
    pub const PROB_VS_K: u64 = 2;
    pub const PHASE: u64 = 3;
    pub const SUPPORT: u64 = 4;
}
