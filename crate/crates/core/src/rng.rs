//! Counter-addressed random streams.
//!
//! Every draw site is identified by a `(seed, counter)` pair. The pair maps to
//! an independent ChaCha8 stream, so the values produced for a given counter
//! never depend on how work was split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub counter: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, counter: 0 }
    }

    pub fn at(seed: u64, counter: u64) -> Self {
        RngStream { seed, counter }
    }

    /// Generator for this exact (seed, counter) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        rng
    }

    /// Generator for draw `index` relative to this stream's counter.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        RngStream::at(self.seed, self.counter.wrapping_add(index)).rng()
    }

    /// A new stream whose counters do not overlap with this one for
    /// `block` draws.
    pub fn offset(&self, blocks: u64, block: u64) -> Self {
        RngStream {
            seed: self.seed,
            counter: self.counter.wrapping_add(blocks.wrapping_mul(block)),
        }
    }

    /// Derive an unrelated stream family, keyed by a label.
    pub fn fork(&self, label: u64) -> Self {
        // splitmix64 finalizer
        let mut z = self
            .seed
            .wrapping_add(label.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add(self.counter.rotate_left(17));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngStream {
            seed: z ^ (z >> 31),
            counter: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_pair_same_draws() {
        let a: Vec<u64> = (0..8).map(|_| 0).collect::<Vec<_>>();
        let mut r1 = RngStream::at(7, 42).rng();
        let mut r2 = RngStream::at(7, 42).rng();
        for _ in a {
            assert_eq!(r1.random::<u64>(), r2.random::<u64>());
        }
    }

    #[test]
    fn counters_give_distinct_streams() {
        let x: u64 = RngStream::at(7, 0).rng().random();
        let y: u64 = RngStream::at(7, 1).rng().random();
        assert_ne!(x, y);
        assert_eq!(RngStream::at(7, 0).rng_for(1).random::<u64>(), y);
    }
}
