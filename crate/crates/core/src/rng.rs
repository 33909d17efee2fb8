//! Portable seeded random stream.
//!
//! ChaCha8 output is specified bit-for-bit, so a `(seed, call sequence)` pair
//! yields identical draws on every platform.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    counter: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, counter: 0, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Stream for shard `index` of a run seeded with `seed`.
    pub fn shard(seed: u64, index: u64) -> Self {
        Self::new(seed.wrapping_add(index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words consumed so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n` (Lemire's nearly-divisionless method).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }
}

/// Number of independent streams a Monte Carlo run is cut into. Fixed, so
/// the output does not depend on how many threads execute the shards.
pub const SHARDS: u64 = 16;

/// Runs `trials` draws split over [`SHARDS`] streams seeded `seed + i`, in
/// parallel, returning the per-shard results in shard order.
pub fn run_shards<T, F>(seed: u64, trials: u64, work: F) -> crate::Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream, u64) -> crate::Result<T> + Sync,
{
    use rayon::prelude::*;
    (0..SHARDS)
        .into_par_iter()
        .map(|i| {
            let n = trials / SHARDS + u64::from(i < trials % SHARDS);
            work(&mut RngStream::shard(seed, i), n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_eq!(a.counter(), 100);
    }

    #[test]
    fn below_is_in_range_and_roughly_uniform() {
        let mut rng = RngStream::new(7);
        let mut counts = [0u32; 6];
        for _ in 0..60_000 {
            counts[rng.below(6) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut rng = RngStream::new(1);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
