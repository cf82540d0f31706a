//! Sample-indexed random streams.
//!
//! Every Monte Carlo sample `i` of a run draws from its own ChaCha8 stream,
//! keyed by the run's master seed and selected by `i` through the cipher's
//! 64-bit stream id. A sample's randomness therefore depends only on
//! `(master_seed, i)`, never on which worker produced it or in what order.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

pub type SampleRng = ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamFactory {
    master_seed: u64,
    key: [u8; 32],
}

impl StreamFactory {
    pub fn new(master_seed: u64) -> Self {
        let key = ChaCha8Rng::seed_from_u64(master_seed).get_seed();
        Self { master_seed, key }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// The independent substream for sample `index`.
    pub fn stream(&self, index: u64) -> SampleRng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}
