//! Deterministic random substreams.
//!
//! Every replication of every simulation cell owns a ChaCha8 generator whose
//! key is derived from `(master_seed, cell)` and whose stream id is the
//! replication index, so draws never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Cell index reserved for pivot simulations of the WMLE weight medians.
pub const WEIGHT_CELL: u64 = u64::MAX;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for replication `rep` of simulation cell `cell`.
pub fn substream(master_seed: u64, cell: u64, rep: u64) -> Stream {
    let key = splitmix64(splitmix64(master_seed) ^ splitmix64(cell.wrapping_add(0x632b_e59b)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(rep);
    rng
}

/// Plain seeded stream for one-off use.
pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}
