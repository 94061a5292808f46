//! Counter-based seed streams and subsample draws.
//!
//! Every stochastic choice in the crate is seeded from [`derive_seed`], a
//! stateless function of a master seed and a counter, so bags, trees and rows
//! can be generated in any order (or concurrently) with identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Generator used for every seeded draw.
pub type SeedRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; a bijection on `u64`.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the `counter`-th seed of the stream rooted at `master_seed`.
///
/// For a fixed master seed, distinct counters always give distinct outputs:
/// `(counter + 1) * GOLDEN_GAMMA` is injective modulo 2^64 and the finalizer
/// is a bijection.
#[inline]
pub fn derive_seed(master_seed: u64, counter: u64) -> u64 {
    let root = mix64(master_seed.wrapping_add(GOLDEN_GAMMA));
    mix64(root.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A generator seeded from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeedRng {
    SeedRng::seed_from_u64(seed)
}

/// Draws `m` distinct indices from `0..n`, uniformly over all `C(n, m)`
/// subsets, returned in ascending order.
pub fn draw_subsample(seed: u64, n: usize, m: usize) -> Result<Vec<usize>> {
    if m < 1 || m > n {
        return Err(Error::InvalidArgument(format!(
            "subsample size m={m} must lie in [1, n={n}]"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    // partial Fisher-Yates: positions 0..m end up holding a uniform m-subset
    for i in 0..m {
        let j = rng.random_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(m);
    pool.sort_unstable();
    Ok(pool)
}
